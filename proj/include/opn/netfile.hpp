#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "opn/net.hpp"

namespace opn {

struct Diagnostic {
    std::size_t line = 0;    // 1-based; 0 when not tied to a line
    std::size_t column = 0;  // 1-based; 0 when not tied to a column
    std::string message;
};

/// A net file could not be turned into a valid net.
class NetLoadError : public Error {
public:
    enum class Kind { Io, Syntax, Validation };

    NetLoadError(Kind kind, std::string source, std::vector<Diagnostic> diagnostics);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] const std::string& source() const { return source_; }
    [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    Kind kind_;
    std::string source_;
    std::vector<Diagnostic> diagnostics_;
};

/// Parses the sectioned net format without validating it. Throws
/// NetLoadError(Syntax) on the first malformed line. The returned element
/// line map lets callers locate validation violations.
struct ParsedNet {
    Net net;
    std::vector<std::pair<std::string, std::size_t>> element_lines;  // element label -> line
};
ParsedNet parse_net_text(std::string_view text, std::string_view source = "<input>");

/// Parses and validates. Validation violations are reported as
/// NetLoadError(Validation) with the line of the offending declaration.
Net parse_net(std::string_view text, std::string_view source = "<input>");

/// Reads `path` and parses it. An empty `[net] name` defaults to the file stem.
Net load_net(const std::filesystem::path& path);

/// Same as load_net but keeps an invalid net, returning its violations
/// alongside. Syntax and I/O errors still throw.
struct CheckedNet {
    Net net;
    std::vector<Diagnostic> violations;
};
CheckedNet load_net_unvalidated(const std::filesystem::path& path);

/// Marking literal "P5=A+C; P6=B+D"; unlisted places are empty. An empty or
/// all-blank literal is the empty marking.
Marking parse_marking_spec(std::string_view spec, const Net& net);

/// "P5=A+C; P6=B+D" in place declaration order; "(empty)" for no tokens.
std::string render_marking_spec(const Net& net, const Marking& m);

/// "(0, 0, S, D)" in place declaration order.
std::string render_marking_vector(const Net& net, const Marking& m);

/// Comma-separated "name=value" bindings.
Environment parse_env_bindings(std::string_view text);

std::string render_env(const Environment& env);  // "T1=5, clock=6", sorted by name

}  // namespace opn
