#ifndef STEENROD_EXPR_HPP
#define STEENROD_EXPR_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "steenrod/steenrod_core.hpp"

namespace steenrod {

struct SourceSpan {
    int line = 1;
    int column = 1;
    int length = 0;
};

class ParseError : public std::runtime_error {
public:
    enum class Kind { Lexical, Syntax, Semantic };

    ParseError(Kind kind, SourceSpan at, std::string message, std::vector<std::string> expected = {});

    Kind kind() const { return kind_; }
    const SourceSpan& where() const { return at_; }
    /// Bare message without the position prefix.
    const std::string& message() const { return message_; }
    /// Sorted set of token descriptions that would have been accepted.
    const std::vector<std::string>& expected() const { return expected_; }

private:
    Kind kind_;
    SourceSpan at_;
    std::string message_;
    std::vector<std::string> expected_;
};

struct ExprSum;

/// factor := 'Sq' '^' nat | 'P' '^' nat | 'b' | '(' expr ')'
struct ExprFactor {
    enum class Kind { Sq, P, Bockstein, Group };
    Kind kind = Kind::Sq;
    int exponent = 0;
    std::shared_ptr<const ExprSum> group;
    SourceSpan span;
};

/// term := [coeff] factor+ ; `negated` when the term follows a '-'.
struct ExprTerm {
    bool negated = false;
    std::uint32_t coefficient = 1; ///< already reduced mod p
    std::vector<ExprFactor> factors;
    SourceSpan span;
};

/// expr := term (('+' | '-') term)* ; the bare literal 0 is an empty sum.
struct ExprSum {
    std::vector<ExprTerm> terms;
    SourceSpan span;
};

struct SteenrodExpr {
    Prime prime{2};
    ExprSum root;
};

/// Parses the surface syntax. Sq is only accepted at p = 2, P and b only at
/// odd p. Throws ParseError.
SteenrodExpr parse_expression(const std::string& text, Prime p);

/// Composition of the factors, unnormalised.
SteenrodElement evaluate(const SteenrodExpr& e);

/// parse_expression followed by evaluate.
SteenrodElement parse_element(const std::string& text, Prime p);

/// Canonical text of an element; parse_element inverts it.
std::string print(const SteenrodElement& e);

/// Text of the syntax tree with explicit grouping and coefficients.
std::string print(const SteenrodExpr& e);

} // namespace steenrod

#endif // STEENROD_EXPR_HPP
