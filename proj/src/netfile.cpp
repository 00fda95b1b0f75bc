#include "opn/netfile.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <system_error>

namespace opn {

namespace {

std::string join_diagnostics(const std::string& source, const std::vector<Diagnostic>& diagnostics) {
    std::string out;
    for (const auto& d : diagnostics) {
        if (!out.empty()) out += '\n';
        out += source;
        if (d.line) out += ":" + std::to_string(d.line);
        if (d.column) out += ":" + std::to_string(d.column);
        out += ": " + d.message;
    }
    return out;
}

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Trims and reports how many leading characters were dropped.
std::string_view trim(std::string_view s, std::size_t* dropped = nullptr) {
    std::size_t b = 0;
    while (b < s.size() && is_blank(s[b])) ++b;
    std::size_t e = s.size();
    while (e > b && is_blank(s[e - 1])) --e;
    if (dropped) *dropped = b;
    return s.substr(b, e - b);
}

struct Line {
    std::size_t number;
    std::size_t offset;  // column offset (0-based) of `text` within the physical line
    std::string_view text;
};

class NetTextParser {
public:
    NetTextParser(std::string_view text, std::string_view source) : source_(source) { split(text); }

    ParsedNet parse() {
        const std::vector<std::string> order = {"net", "colors", "places", "transitions", "arcs", "marking"};
        for (const auto& name : order) {
            auto it = sections_.find(name);
            if (it == sections_.end()) continue;
            for (const auto& line : it->second) parse_line(name, line);
        }
        return std::move(result_);
    }

private:
    [[noreturn]] void fail(std::size_t line, std::size_t column, std::string message) const {
        throw NetLoadError(NetLoadError::Kind::Syntax, source_, {{line, column, std::move(message)}});
    }

    void split(std::string_view text) {
        std::set<std::string> known = {"net", "colors", "places", "transitions", "arcs", "marking"};
        std::string current;
        std::size_t number = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            std::string_view raw = text.substr(start, end - start);
            ++number;
            start = end + 1;

            if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
            std::size_t dropped = 0;
            std::string_view content = trim(raw, &dropped);
            if (content.empty()) {
                if (end == text.size()) break;
                continue;
            }

            if (content.front() == '[') {
                if (content.back() != ']') fail(number, dropped + 1, "section header must end with ']'");
                std::string name(trim(content.substr(1, content.size() - 2)));
                if (!known.contains(name)) fail(number, dropped + 1, "unknown section [" + name + "]");
                if (sections_.contains(name)) fail(number, dropped + 1, "section [" + name + "] appears twice");
                sections_[name];
                current = name;
            } else {
                if (current.empty()) fail(number, dropped + 1, "content before the first section header");
                sections_[current].push_back({number, dropped, content});
            }
            if (end == text.size()) break;
        }
    }

    void record(std::string element, std::size_t line) { result_.element_lines.emplace_back(std::move(element), line); }

    void parse_line(const std::string& section, const Line& line) {
        if (section == "net") return parse_net_line(line);
        if (section == "colors") return parse_colors_line(line);
        if (section == "places") return parse_place_line(line);
        if (section == "transitions") return parse_transition_line(line);
        if (section == "arcs") return parse_arc_line(line);
        parse_marking_line(line);
    }

    // Splits "lhs <sep> rhs" at the first occurrence of `sep`.
    std::pair<std::string_view, std::string_view> split_at(const Line& line, std::string_view sep,
                                                           std::size_t* rhs_column) const {
        auto at = line.text.find(sep);
        if (at == std::string_view::npos) {
            fail(line.number, line.offset + 1, "expected '" + std::string(sep) + "'");
        }
        std::size_t dropped = 0;
        auto rhs = trim(line.text.substr(at + sep.size()), &dropped);
        if (rhs_column) *rhs_column = line.offset + at + sep.size() + dropped + 1;
        return {trim(line.text.substr(0, at)), rhs};
    }

    void require_identifier(std::string_view id, const Line& line, std::string_view what) const {
        if (!is_identifier(id)) {
            const auto col = line.offset + line.text.find(id) + 1;
            fail(line.number, col, "invalid " + std::string(what) + " '" + std::string(id) + "'");
        }
    }

    void parse_net_line(const Line& line) {
        std::size_t col = 0;
        auto [key, value] = split_at(line, "=", &col);
        if (key != "name") fail(line.number, line.offset + 1, "unknown [net] key '" + std::string(key) + "'");
        if (value.empty()) fail(line.number, col, "net name is empty");
        if (have_name_) fail(line.number, line.offset + 1, "net name given twice");
        have_name_ = true;
        result_.net.name = std::string(value);
    }

    void parse_colors_line(const Line& line) {
        std::size_t i = 0;
        const auto& text = line.text;
        while (i < text.size()) {
            while (i < text.size() && (is_blank(text[i]) || text[i] == ',')) ++i;
            if (i == text.size()) break;
            std::size_t j = i;
            while (j < text.size() && !is_blank(text[j]) && text[j] != ',') ++j;
            const auto name = text.substr(i, j - i);
            if (!is_identifier(name)) fail(line.number, line.offset + i + 1, "invalid color '" + std::string(name) + "'");
            result_.net.colors.push_back({std::string(name)});
            record("color " + std::string(name), line.number);
            i = j;
        }
    }

    void parse_place_line(const Line& line) {
        std::istringstream in{std::string(line.text)};
        std::string id, sign, extra;
        in >> id >> sign;
        if (sign.empty()) fail(line.number, line.offset + line.text.size() + 1, "expected rotation sign '+' or '-'");
        if (in >> extra) fail(line.number, line.offset + line.text.rfind(extra) + 1, "unexpected '" + extra + "'");
        require_identifier(id, line, "place id");
        Rotation rotation;
        if (sign == "+") {
            rotation = Rotation::Clockwise;
        } else if (sign == "-") {
            rotation = Rotation::Anticlockwise;
        } else {
            fail(line.number, line.offset + line.text.rfind(sign) + 1, "rotation sign must be '+' or '-'");
        }
        result_.net.places.push_back({id, rotation});
        record("place " + id, line.number);
    }

    void parse_transition_line(const Line& line) {
        std::string_view id = line.text;
        GuardExpr guard = GuardExpr::constant(true);
        if (line.text.find(':') != std::string_view::npos) {
            std::size_t col = 0;
            auto [lhs, rhs] = split_at(line, ":", &col);
            id = lhs;
            try {
                guard = parse_guard(rhs);
            } catch (const ParseError& e) {
                fail(line.number, col + e.position(), "guard: " + e.detail());
            }
        }
        require_identifier(id, line, "transition id");
        result_.net.transitions.push_back({std::string(id), std::move(guard)});
        record("transition " + std::string(id), line.number);
    }

    void parse_arc_line(const Line& line) {
        std::size_t weight_col = 0;
        auto [endpoints, weight_text] = split_at(line, ":", &weight_col);
        const auto arrow = endpoints.find("->");
        if (arrow == std::string_view::npos) fail(line.number, line.offset + 1, "expected 'source -> target'");
        const auto source = trim(endpoints.substr(0, arrow));
        const auto target = trim(endpoints.substr(arrow + 2));
        require_identifier(source, line, "arc source");
        require_identifier(target, line, "arc target");
        Multiset weight;
        try {
            weight = parse_weight_expr(weight_text, result_.net.colors);
        } catch (const ParseError& e) {
            fail(line.number, weight_col + e.position(), "weight: " + e.detail());
        }
        result_.net.arcs.push_back({std::string(source), std::string(target), std::move(weight)});
        record("arc " + std::string(source) + " -> " + std::string(target), line.number);
    }

    void parse_marking_line(const Line& line) {
        std::size_t col = 0;
        auto [place, tokens_text] = split_at(line, "=", &col);
        require_identifier(place, line, "place id");
        const std::string id(place);
        if (marked_.contains(id)) fail(line.number, line.offset + 1, "place " + id + " is marked twice");
        marked_.insert(id);
        Multiset tokens;
        try {
            tokens = parse_weight_expr(tokens_text, result_.net.colors);
        } catch (const ParseError& e) {
            fail(line.number, col + e.position(), "marking: " + e.detail());
        }
        result_.net.initial_marking.set(id, std::move(tokens));
        record("marking " + id, line.number);
    }

    std::string source_;
    std::map<std::string, std::vector<Line>> sections_;
    ParsedNet result_;
    bool have_name_ = false;
    std::set<std::string> marked_;
};

std::vector<Diagnostic> locate(const ParsedNet& parsed, const std::vector<Violation>& violations) {
    std::vector<Diagnostic> out;
    for (const auto& v : violations) {
        std::size_t line = 0;
        for (const auto& [element, number] : parsed.element_lines) {
            if (element == v.element) line = number;
        }
        out.push_back({line, 0, v.message()});
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NetLoadError(NetLoadError::Kind::Io, path.string(), {{0, 0, "cannot open file"}});
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

NetLoadError::NetLoadError(Kind kind, std::string source, std::vector<Diagnostic> diagnostics)
    : Error(join_diagnostics(source, diagnostics)),
      kind_(kind),
      source_(std::move(source)),
      diagnostics_(std::move(diagnostics)) {}

ParsedNet parse_net_text(std::string_view text, std::string_view source) {
    return NetTextParser(text, source).parse();
}

Net parse_net(std::string_view text, std::string_view source) {
    auto parsed = parse_net_text(text, source);
    auto violations = validate_net(parsed.net);
    if (!violations.empty()) {
        throw NetLoadError(NetLoadError::Kind::Validation, std::string(source), locate(parsed, violations));
    }
    return std::move(parsed.net);
}

CheckedNet load_net_unvalidated(const std::filesystem::path& path) {
    auto parsed = parse_net_text(read_file(path), path.string());
    if (parsed.net.name.empty()) parsed.net.name = path.stem().string();
    auto diagnostics = locate(parsed, validate_net(parsed.net));
    return {std::move(parsed.net), std::move(diagnostics)};
}

Net load_net(const std::filesystem::path& path) {
    auto checked = load_net_unvalidated(path);
    if (!checked.violations.empty()) {
        throw NetLoadError(NetLoadError::Kind::Validation, path.string(), std::move(checked.violations));
    }
    return std::move(checked.net);
}

// --- marking and environment literals -------------------------------------------

Marking parse_marking_spec(std::string_view spec, const Net& net) {
    Marking m;
    std::set<std::string> seen;
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t end = spec.find(';', start);
        if (end == std::string_view::npos) end = spec.size();
        const auto item = trim(spec.substr(start, end - start));
        start = end + 1;
        if (!item.empty()) {
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) throw Error("marking entry '" + std::string(item) + "' lacks '='");
            const std::string place(trim(item.substr(0, eq)));
            if (!net.place_index(place)) throw Error("marking names undeclared place '" + place + "'");
            if (!seen.insert(place).second) throw Error("place " + place + " is marked twice");
            try {
                m.set(place, parse_weight_expr(item.substr(eq + 1), net.colors));
            } catch (const ParseError& e) {
                throw Error("marking entry for " + place + ": " + e.detail());
            }
        }
        if (end == spec.size()) break;
    }
    return m;
}

std::string render_marking_spec(const Net& net, const Marking& m) {
    std::string out;
    for (const auto& p : net.places) {
        const auto& tokens = m.at(p.id);
        if (tokens.empty()) continue;
        if (!out.empty()) out += "; ";
        out += p.id + "=" + render_weight_expr(tokens);
    }
    return out.empty() ? "(empty)" : out;
}

std::string render_marking_vector(const Net& net, const Marking& m) {
    std::string out = "(";
    for (std::size_t j = 0; j < net.places.size(); ++j) {
        if (j) out += ", ";
        out += render_weight_expr(m.at(net.places[j].id));
    }
    return out + ")";
}

Environment parse_env_bindings(std::string_view text) {
    Environment env;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        const auto item = trim(text.substr(start, end - start));
        start = end + 1;
        if (!item.empty()) {
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) throw Error("binding '" + std::string(item) + "' lacks '='");
            const std::string name(trim(item.substr(0, eq)));
            const auto value_text = trim(item.substr(eq + 1));
            if (!is_identifier(name)) throw Error("invalid variable name '" + name + "'");
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
            if (ec != std::errc() || ptr != value_text.data() + value_text.size() || value_text.empty()) {
                throw Error("invalid number '" + std::string(value_text) + "' for " + name);
            }
            try {
                env.set(name, value);
            } catch (const std::invalid_argument& e) {
                throw Error(e.what());
            }
        }
        if (end == text.size()) break;
    }
    return env;
}

std::string render_env(const Environment& env) {
    std::string out;
    for (const auto& [name, value] : env.values()) {
        if (!out.empty()) out += ", ";
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
        out += name + "=" + std::string(buf, ptr);
    }
    return out;
}

}  // namespace opn
