#include "opn/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <system_error>

#include "opn/net.hpp"

namespace opn {

ParseError::ParseError(std::size_t position, std::string message)
    : Error("at offset " + std::to_string(position) + ": " + message), position_(position), detail_(std::move(message)) {}

UnboundVariableError::UnboundVariableError(std::string name)
    : Error("unbound variable '" + name + "'"), name_(std::move(name)) {}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_ident_char(char c) { return is_alpha(c) || is_digit(c) || c == '_'; }

std::size_t skip_space(std::string_view text, std::size_t pos) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    return pos;
}

std::size_t scan_identifier(std::string_view text, std::size_t pos) {
    std::size_t end = pos;
    if (end < text.size() && is_alpha(text[end])) {
        ++end;
        while (end < text.size() && is_ident_char(text[end])) ++end;
    }
    return end;
}

}  // namespace

// --- weight expressions -----------------------------------------------------

Multiset parse_weight_expr(std::string_view text, const std::vector<TokenColor>& colors) {
    Multiset out;
    std::size_t pos = skip_space(text, 0);
    if (pos == text.size()) throw ParseError(pos, "empty weight expression");

    while (true) {
        pos = skip_space(text, pos);
        if (pos == text.size()) throw ParseError(pos, "expected a term");

        Multiset::Count coefficient = 1;
        if (is_digit(text[pos])) {
            const std::size_t start = pos;
            while (pos < text.size() && is_digit(text[pos])) ++pos;
            auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + pos, coefficient);
            if (ec != std::errc()) throw ParseError(start, "coefficient out of range");
            if (coefficient == 0) throw ParseError(start, "coefficient must be positive");
            pos = skip_space(text, pos);
        } else if (text[pos] == '-') {
            throw ParseError(pos, "weights are positive sums; '-' is not allowed");
        }

        const std::size_t start = pos;
        const std::size_t end = scan_identifier(text, pos);
        if (end == start) throw ParseError(pos, "expected a color name");
        const std::string color(text.substr(start, end - start));
        const bool known = std::any_of(colors.begin(), colors.end(), [&](const TokenColor& c) { return c.name == color; });
        if (!known) throw ParseError(start, "unknown color '" + color + "'");
        out.add(color, coefficient);

        pos = skip_space(text, end);
        if (pos == text.size()) break;
        if (text[pos] != '+') {
            if (text[pos] == '-') throw ParseError(pos, "weights are positive sums; '-' is not allowed");
            throw ParseError(pos, std::string("unexpected character '") + text[pos] + "'");
        }
        ++pos;
    }
    return out;
}

std::string render_weight_expr(const Multiset& w) {
    if (w.empty()) return "0";
    std::string out;
    for (const auto& [color, n] : w) {
        if (!out.empty()) out += '+';
        if (n != 1) out += std::to_string(n);
        out += color;
    }
    return out;
}

// --- guard AST ----------------------------------------------------------------

GuardExpr GuardExpr::constant(bool value) {
    GuardExpr g;
    g.kind_ = Kind::Constant;
    g.truth_ = value;
    return g;
}

GuardExpr GuardExpr::number(double value) {
    GuardExpr g;
    g.kind_ = Kind::Number;
    g.truth_ = false;
    g.value_ = value;
    return g;
}

GuardExpr GuardExpr::variable(std::string name) {
    GuardExpr g;
    g.kind_ = Kind::Variable;
    g.truth_ = false;
    g.name_ = std::move(name);
    return g;
}

GuardExpr GuardExpr::unary(Kind kind, GuardExpr operand) {
    GuardExpr g;
    g.kind_ = kind;
    g.truth_ = false;
    g.operands_.push_back(std::move(operand));
    return g;
}

GuardExpr GuardExpr::binary(Kind kind, GuardExpr lhs, GuardExpr rhs) {
    GuardExpr g;
    g.kind_ = kind;
    g.truth_ = false;
    g.operands_.push_back(std::move(lhs));
    g.operands_.push_back(std::move(rhs));
    return g;
}

bool GuardExpr::is_boolean() const {
    switch (kind_) {
        case Kind::Number:
        case Kind::Variable:
        case Kind::Neg:
        case Kind::Add:
        case Kind::Sub: return false;
        default: return true;
    }
}

std::set<std::string> GuardExpr::variables() const {
    std::set<std::string> out;
    std::vector<const GuardExpr*> stack{this};
    while (!stack.empty()) {
        const GuardExpr* node = stack.back();
        stack.pop_back();
        if (node->kind_ == Kind::Variable) out.insert(node->name_);
        for (const auto& child : node->operands_) stack.push_back(&child);
    }
    return out;
}

// --- guard parser -------------------------------------------------------------

namespace {

using Kind = GuardExpr::Kind;

enum class Tok {
    End,
    Number,
    Ident,
    True,
    False,
    And,
    Or,
    Not,
    Plus,
    Minus,
    Less,
    LessEqual,
    Greater,
    GreaterEqual,
    Equal,
    NotEqual,
    LParen,
    RParen,
};

struct Token {
    Tok kind;
    std::size_t pos;
    std::string_view text;
    double number = 0.0;
};

std::vector<Token> lex_guard(std::string_view text) {
    std::vector<Token> out;
    std::size_t pos = 0;
    while (true) {
        pos = skip_space(text, pos);
        if (pos == text.size()) break;
        const char c = text[pos];
        const std::size_t start = pos;
        auto two = [&](char next) { return pos + 1 < text.size() && text[pos + 1] == next; };

        if (is_digit(c)) {
            // digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
            while (pos < text.size() && is_digit(text[pos])) ++pos;
            if (pos < text.size() && text[pos] == '.') {
                ++pos;
                if (pos == text.size() || !is_digit(text[pos])) throw ParseError(pos, "expected digits after '.'");
                while (pos < text.size() && is_digit(text[pos])) ++pos;
            }
            if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
                std::size_t exp = pos + 1;
                if (exp < text.size() && (text[exp] == '+' || text[exp] == '-')) ++exp;
                if (exp < text.size() && is_digit(text[exp])) {
                    pos = exp;
                    while (pos < text.size() && is_digit(text[pos])) ++pos;
                }
            }
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + pos, value);
            if (ec != std::errc() || ptr != text.data() + pos) throw ParseError(start, "numeric literal out of range");
            out.push_back({Tok::Number, start, text.substr(start, pos - start), value});
            continue;
        }
        if (is_alpha(c)) {
            pos = scan_identifier(text, pos);
            const std::string_view word = text.substr(start, pos - start);
            Tok kind = Tok::Ident;
            if (word == "and") kind = Tok::And;
            else if (word == "or") kind = Tok::Or;
            else if (word == "not") kind = Tok::Not;
            else if (word == "true") kind = Tok::True;
            else if (word == "false") kind = Tok::False;
            out.push_back({kind, start, word});
            continue;
        }

        Tok kind;
        std::size_t len = 1;
        switch (c) {
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            case '<':
                kind = two('=') ? Tok::LessEqual : Tok::Less;
                len = two('=') ? 2 : 1;
                break;
            case '>':
                kind = two('=') ? Tok::GreaterEqual : Tok::Greater;
                len = two('=') ? 2 : 1;
                break;
            case '=':
                if (!two('=')) throw ParseError(pos, "expected '==' (assignment is not an operator)");
                kind = Tok::Equal;
                len = 2;
                break;
            case '!':
                kind = two('=') ? Tok::NotEqual : Tok::Not;
                len = two('=') ? 2 : 1;
                break;
            case '&':
                if (!two('&')) throw ParseError(pos, "expected '&&'");
                kind = Tok::And;
                len = 2;
                break;
            case '|':
                if (!two('|')) throw ParseError(pos, "expected '||'");
                kind = Tok::Or;
                len = 2;
                break;
            default: throw ParseError(pos, std::string("unexpected character '") + c + "'");
        }
        pos += len;
        out.push_back({kind, start, text.substr(start, len)});
    }
    out.push_back({Tok::End, text.size(), {}});
    return out;
}

class GuardParser {
public:
    explicit GuardParser(std::string_view text) : tokens_(lex_guard(text)) {}

    GuardExpr parse() {
        const std::size_t start = peek().pos;
        GuardExpr g = parse_or();
        if (peek().kind != Tok::End) {
            if (peek().kind == Tok::RParen) throw ParseError(peek().pos, "unbalanced ')'");
            throw ParseError(peek().pos, "unexpected '" + std::string(peek().text) + "'");
        }
        if (!g.is_boolean()) throw ParseError(start, "guard must be a boolean expression");
        return g;
    }

private:
    const Token& peek() const { return tokens_[index_]; }
    const Token& advance() { return tokens_[index_++]; }

    static void require_boolean(const GuardExpr& g, std::size_t pos, std::string_view op) {
        if (!g.is_boolean()) throw ParseError(pos, "operator '" + std::string(op) + "' needs a boolean operand");
    }
    static void require_numeric(const GuardExpr& g, std::size_t pos, std::string_view op) {
        if (g.is_boolean()) throw ParseError(pos, "operator '" + std::string(op) + "' needs a numeric operand");
    }

    GuardExpr parse_or() {
        std::size_t lhs_pos = peek().pos;
        GuardExpr lhs = parse_and();
        while (peek().kind == Tok::Or) {
            const Token op = advance();
            require_boolean(lhs, lhs_pos, op.text);
            const std::size_t rhs_pos = peek().pos;
            GuardExpr rhs = parse_and();
            require_boolean(rhs, rhs_pos, op.text);
            lhs = GuardExpr::binary(Kind::Or, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    GuardExpr parse_and() {
        std::size_t lhs_pos = peek().pos;
        GuardExpr lhs = parse_not();
        while (peek().kind == Tok::And) {
            const Token op = advance();
            require_boolean(lhs, lhs_pos, op.text);
            const std::size_t rhs_pos = peek().pos;
            GuardExpr rhs = parse_not();
            require_boolean(rhs, rhs_pos, op.text);
            lhs = GuardExpr::binary(Kind::And, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    GuardExpr parse_not() {
        if (peek().kind == Tok::Not) {
            const Token op = advance();
            const std::size_t operand_pos = peek().pos;
            GuardExpr operand = parse_not();
            require_boolean(operand, operand_pos, op.text);
            return GuardExpr::unary(Kind::Not, std::move(operand));
        }
        return parse_comparison();
    }

    GuardExpr parse_comparison() {
        const std::size_t lhs_pos = peek().pos;
        GuardExpr lhs = parse_additive();
        Kind kind;
        switch (peek().kind) {
            case Tok::Less: kind = Kind::Less; break;
            case Tok::LessEqual: kind = Kind::LessEqual; break;
            case Tok::Greater: kind = Kind::Greater; break;
            case Tok::GreaterEqual: kind = Kind::GreaterEqual; break;
            case Tok::Equal: kind = Kind::Equal; break;
            case Tok::NotEqual: kind = Kind::NotEqual; break;
            default: return lhs;
        }
        const Token op = advance();
        require_numeric(lhs, lhs_pos, op.text);
        const std::size_t rhs_pos = peek().pos;
        GuardExpr rhs = parse_additive();
        require_numeric(rhs, rhs_pos, op.text);
        switch (peek().kind) {
            case Tok::Less:
            case Tok::LessEqual:
            case Tok::Greater:
            case Tok::GreaterEqual:
            case Tok::Equal:
            case Tok::NotEqual: throw ParseError(peek().pos, "comparisons cannot be chained");
            default: break;
        }
        return GuardExpr::binary(kind, std::move(lhs), std::move(rhs));
    }

    GuardExpr parse_additive() {
        const std::size_t lhs_pos = peek().pos;
        GuardExpr lhs = parse_unary();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const Token op = advance();
            require_numeric(lhs, lhs_pos, op.text);
            const std::size_t rhs_pos = peek().pos;
            GuardExpr rhs = parse_unary();
            require_numeric(rhs, rhs_pos, op.text);
            lhs = GuardExpr::binary(op.kind == Tok::Plus ? Kind::Add : Kind::Sub, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    GuardExpr parse_unary() {
        if (peek().kind == Tok::Minus) {
            const Token op = advance();
            const std::size_t operand_pos = peek().pos;
            GuardExpr operand = parse_unary();
            require_numeric(operand, operand_pos, op.text);
            return GuardExpr::unary(Kind::Neg, std::move(operand));
        }
        return parse_primary();
    }

    GuardExpr parse_primary() {
        const Token tok = advance();
        switch (tok.kind) {
            case Tok::Number: return GuardExpr::number(tok.number);
            case Tok::Ident: return GuardExpr::variable(std::string(tok.text));
            case Tok::True: return GuardExpr::constant(true);
            case Tok::False: return GuardExpr::constant(false);
            case Tok::LParen: {
                GuardExpr inner = parse_or();
                if (peek().kind != Tok::RParen) throw ParseError(peek().pos, "expected ')'");
                advance();
                return inner;
            }
            case Tok::End: throw ParseError(tok.pos, "unexpected end of expression");
            default: throw ParseError(tok.pos, "unexpected '" + std::string(tok.text) + "'");
        }
    }

    std::vector<Token> tokens_;
    std::size_t index_ = 0;
};

// --- rendering ----------------------------------------------------------------

int precedence(Kind kind) {
    switch (kind) {
        case Kind::Or: return 1;
        case Kind::And: return 2;
        case Kind::Not: return 3;
        case Kind::Less:
        case Kind::LessEqual:
        case Kind::Greater:
        case Kind::GreaterEqual:
        case Kind::Equal:
        case Kind::NotEqual: return 4;
        case Kind::Add:
        case Kind::Sub: return 5;
        case Kind::Neg: return 6;
        default: return 7;
    }
}

const char* operator_text(Kind kind) {
    switch (kind) {
        case Kind::Or: return " or ";
        case Kind::And: return " and ";
        case Kind::Less: return " < ";
        case Kind::LessEqual: return " <= ";
        case Kind::Greater: return " > ";
        case Kind::GreaterEqual: return " >= ";
        case Kind::Equal: return " == ";
        case Kind::NotEqual: return " != ";
        case Kind::Add: return " + ";
        case Kind::Sub: return " - ";
        default: return "";
    }
}

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void render_into(const GuardExpr& g, std::string& out);

void render_operand(const GuardExpr& g, bool parens, std::string& out) {
    if (parens) out += '(';
    render_into(g, out);
    if (parens) out += ')';
}

void render_into(const GuardExpr& g, std::string& out) {
    const int prec = precedence(g.kind());
    switch (g.kind()) {
        case Kind::Constant: out += g.truth() ? "true" : "false"; return;
        case Kind::Number: {
            // Negative literals only arise from programmatic construction.
            const bool negative = std::signbit(g.value());
            if (negative) out += '(';
            out += format_number(g.value());
            if (negative) out += ')';
            return;
        }
        case Kind::Variable: out += g.name(); return;
        case Kind::Neg:
            out += '-';
            render_operand(g.operands()[0], precedence(g.operands()[0].kind()) < prec, out);
            return;
        case Kind::Not:
            out += "not ";
            render_operand(g.operands()[0], precedence(g.operands()[0].kind()) < prec, out);
            return;
        default: {
            const auto& lhs = g.operands()[0];
            const auto& rhs = g.operands()[1];
            // Binary operators associate to the left.
            render_operand(lhs, precedence(lhs.kind()) < prec, out);
            out += operator_text(g.kind());
            render_operand(rhs, precedence(rhs.kind()) <= prec, out);
            return;
        }
    }
}

double eval_numeric(const GuardExpr& g, const Environment& env) {
    switch (g.kind()) {
        case Kind::Number: return g.value();
        case Kind::Variable: return *env.get(g.name());
        case Kind::Neg: return -eval_numeric(g.operands()[0], env);
        case Kind::Add: return eval_numeric(g.operands()[0], env) + eval_numeric(g.operands()[1], env);
        case Kind::Sub: return eval_numeric(g.operands()[0], env) - eval_numeric(g.operands()[1], env);
        default: throw Error("boolean node in numeric position");
    }
}

bool eval_boolean(const GuardExpr& g, const Environment& env) {
    auto lhs = [&] { return eval_numeric(g.operands()[0], env); };
    auto rhs = [&] { return eval_numeric(g.operands()[1], env); };
    switch (g.kind()) {
        case Kind::Constant: return g.truth();
        case Kind::Less: return lhs() < rhs();
        case Kind::LessEqual: return lhs() <= rhs();
        case Kind::Greater: return lhs() > rhs();
        case Kind::GreaterEqual: return lhs() >= rhs();
        case Kind::Equal: return lhs() == rhs();
        case Kind::NotEqual: return lhs() != rhs();
        case Kind::Not: return !eval_boolean(g.operands()[0], env);
        case Kind::And: return eval_boolean(g.operands()[0], env) && eval_boolean(g.operands()[1], env);
        case Kind::Or: return eval_boolean(g.operands()[0], env) || eval_boolean(g.operands()[1], env);
        default: throw Error("numeric node in boolean position");
    }
}

}  // namespace

GuardExpr parse_guard(std::string_view text) {
    if (skip_space(text, 0) == text.size()) throw ParseError(text.size(), "empty guard expression");
    return GuardParser(text).parse();
}

std::string render_guard(const GuardExpr& g) {
    std::string out;
    render_into(g, out);
    return out;
}

bool eval_guard(const GuardExpr& g, const Environment& env) {
    for (const auto& name : g.variables()) {
        if (!env.contains(name)) throw UnboundVariableError(name);
    }
    return eval_boolean(g, env);
}

}  // namespace opn
