#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "opn/error.hpp"
#include "opn/multiset.hpp"

namespace opn {

class Environment;

/// Syntax error in a weight or guard expression. `position` is the character
/// offset of the first offending character (the input length for a
/// premature end of input).
class ParseError : public Error {
public:
    ParseError(std::size_t position, std::string message);

    [[nodiscard]] std::size_t position() const { return position_; }
    [[nodiscard]] const std::string& detail() const { return detail_; }

private:
    std::size_t position_;
    std::string detail_;
};

class UnboundVariableError : public Error {
public:
    explicit UnboundVariableError(std::string name);

    [[nodiscard]] const std::string& name() const { return name_; }

private:
    std::string name_;
};

// --- weight expressions -----------------------------------------------------

/// Parses `term ('+' term)*` with `term := [integer] identifier`. Repeated
/// colors accumulate; every color must be one of `colors`.
Multiset parse_weight_expr(std::string_view text, const std::vector<TokenColor>& colors);

/// Canonical text: colors in name order, coefficient 1 omitted ("A+C", "3x").
/// The empty multiset renders as "0".
std::string render_weight_expr(const Multiset& w);

// --- guards -----------------------------------------------------------------

/// Guard abstract syntax tree. Numeric nodes (Number, Variable, Neg, Add, Sub)
/// only ever appear below a comparison; the root is always boolean.
class GuardExpr {
public:
    enum class Kind {
        Constant,  // true / false
        Number,
        Variable,
        Neg,
        Add,
        Sub,
        Less,
        LessEqual,
        Greater,
        GreaterEqual,
        Equal,
        NotEqual,
        Not,
        And,
        Or,
    };

    static GuardExpr constant(bool value);
    static GuardExpr number(double value);
    static GuardExpr variable(std::string name);
    static GuardExpr unary(Kind kind, GuardExpr operand);
    static GuardExpr binary(Kind kind, GuardExpr lhs, GuardExpr rhs);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool is_boolean() const;
    [[nodiscard]] bool truth() const { return truth_; }
    [[nodiscard]] double value() const { return value_; }
    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] const std::vector<GuardExpr>& operands() const { return operands_; }

    /// Every variable name referenced anywhere in the tree.
    [[nodiscard]] std::set<std::string> variables() const;

    friend bool operator==(const GuardExpr&, const GuardExpr&) = default;

private:
    GuardExpr() = default;

    Kind kind_ = Kind::Constant;
    bool truth_ = true;
    double value_ = 0.0;
    std::string name_;
    std::vector<GuardExpr> operands_;
};

/// Precedence, loosest first: `or`, `and`, `not`, comparisons, `+`/`-`,
/// unary minus. `&&`, `||`, `!` are aliases of the keywords.
GuardExpr parse_guard(std::string_view text);

/// Canonical text with the minimal parentheses needed so that
/// `parse_guard(render_guard(g)) == g`.
std::string render_guard(const GuardExpr& g);

/// Throws UnboundVariableError before evaluating anything if a referenced
/// variable is not bound in `env`.
bool eval_guard(const GuardExpr& g, const Environment& env);

}  // namespace opn
