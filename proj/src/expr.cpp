#include "steenrod/expr.hpp"

#include <algorithm>
#include <cctype>

namespace steenrod {

namespace {

const char* kind_name(ParseError::Kind k)
{
    switch (k) {
    case ParseError::Kind::Lexical:
        return "lexical error";
    case ParseError::Kind::Syntax:
        return "syntax error";
    case ParseError::Kind::Semantic:
        return "semantic error";
    }
    return "error";
}

std::string render(ParseError::Kind kind, const SourceSpan& at, const std::string& message)
{
    return std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + kind_name(kind) + ": " + message;
}

enum class Tok { Nat, Sq, P, B, Caret, Plus, Minus, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

std::string describe(const Token& t)
{
    switch (t.kind) {
    case Tok::End:
        return "end of input";
    case Tok::Nat:
        return "number " + t.text;
    default:
        return "'" + t.text + "'";
    }
}

std::vector<Token> lex(const std::string& s)
{
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::size_t len) {
        out.push_back({k, s.substr(i, len), {line, col, static_cast<int>(len)}});
        i += len;
        col += static_cast<int>(len);
    };
    while (i < s.size()) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
        } else if (std::isspace(c)) {
            ++col;
            ++i;
        } else if (std::isdigit(c)) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
                ++j;
            push(Tok::Nat, j - i);
        } else if (s.compare(i, 2, "Sq") == 0) {
            push(Tok::Sq, 2);
        } else if (c == 'P') {
            push(Tok::P, 1);
        } else if (c == 'b') {
            push(Tok::B, 1);
        } else if (c == '^') {
            push(Tok::Caret, 1);
        } else if (c == '+') {
            push(Tok::Plus, 1);
        } else if (c == '-') {
            push(Tok::Minus, 1);
        } else if (c == '(') {
            push(Tok::LParen, 1);
        } else if (c == ')') {
            push(Tok::RParen, 1);
        } else {
            const SourceSpan at{line, col, 1};
            if (c >= 0x80)
                throw ParseError(ParseError::Kind::Lexical, at,
                                 "unexpected non-ASCII character (write b for the Bockstein)");
            throw ParseError(ParseError::Kind::Lexical, at, std::string("unexpected character '") + s[i] + "'");
        }
    }
    out.push_back({Tok::End, "", {line, col, 0}});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> toks, Prime p) : toks_(std::move(toks)), p_(p) {}

    ExprSum parse_top()
    {
        if (toks_.size() == 2 && toks_[0].kind == Tok::Nat && toks_[1].kind == Tok::End &&
            toks_[0].text.find_first_not_of('0') == std::string::npos) {
            ExprSum zero;
            zero.span = toks_[0].span;
            return zero;
        }
        ExprSum s = parse_sum();
        if (peek().kind != Tok::End)
            fail(expected_after_term(false));
        return s;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }

    [[noreturn]] void fail(std::vector<std::string> expected) const
    {
        std::sort(expected.begin(), expected.end());
        std::string msg = "expected ";
        if (expected.size() > 1)
            msg += "one of ";
        for (std::size_t i = 0; i < expected.size(); ++i)
            msg += (i ? ", " : "") + expected[i];
        msg += ", got " + describe(peek());
        throw ParseError(ParseError::Kind::Syntax, peek().span, msg, expected);
    }

    std::vector<std::string> factor_starts() const
    {
        if (p_.is_two())
            return {"'('", "'Sq'"};
        return {"'('", "'P'", "'b'"};
    }

    std::vector<std::string> expected_after_term(bool in_group) const
    {
        std::vector<std::string> e = factor_starts();
        e.push_back("'+'");
        e.push_back("'-'");
        e.push_back(in_group ? "')'" : "end of input");
        return e;
    }

    bool at_factor() const
    {
        const Tok k = peek().kind;
        return k == Tok::Sq || k == Tok::P || k == Tok::B || k == Tok::LParen;
    }

    ExprSum parse_sum(bool in_group = false)
    {
        ExprSum s;
        s.span = peek().span;
        s.terms.push_back(parse_term(false));
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const bool neg = take().kind == Tok::Minus;
            s.terms.push_back(parse_term(neg));
        }
        if (!in_group && peek().kind != Tok::End)
            fail(expected_after_term(false));
        return s;
    }

    ExprTerm parse_term(bool negated)
    {
        ExprTerm t;
        t.negated = negated;
        t.span = peek().span;
        if (peek().kind == Tok::Nat) {
            std::uint64_t r = 0;
            for (char c : take().text)
                r = (r * 10 + static_cast<unsigned>(c - '0')) % p_.value();
            t.coefficient = static_cast<std::uint32_t>(r);
        }
        if (!at_factor())
            fail(factor_starts());
        while (at_factor())
            t.factors.push_back(parse_factor());
        return t;
    }

    int exponent()
    {
        if (peek().kind != Tok::Caret)
            fail({"'^'"});
        take();
        if (peek().kind == Tok::Minus)
            throw ParseError(ParseError::Kind::Semantic, peek().span, "negative exponent");
        if (peek().kind != Tok::Nat)
            fail({"number"});
        const Token& n = take();
        if (n.text.size() > 6)
            throw ParseError(ParseError::Kind::Semantic, n.span, "exponent " + n.text + " is too large");
        return std::stoi(n.text);
    }

    ExprFactor parse_factor()
    {
        ExprFactor f;
        const Token& t = take();
        f.span = t.span;
        switch (t.kind) {
        case Tok::Sq:
            if (p_.is_odd())
                throw ParseError(ParseError::Kind::Semantic, t.span,
                                 "Sq is only defined at p = 2; use P and b at p = " + std::to_string(p_.value()));
            f.kind = ExprFactor::Kind::Sq;
            f.exponent = exponent();
            break;
        case Tok::P:
            if (p_.is_two())
                throw ParseError(ParseError::Kind::Semantic, t.span, "P is only defined at odd primes; use Sq at p = 2");
            f.kind = ExprFactor::Kind::P;
            f.exponent = exponent();
            break;
        case Tok::B:
            if (p_.is_two())
                throw ParseError(ParseError::Kind::Semantic, t.span, "b is only defined at odd primes; use Sq^1 at p = 2");
            f.kind = ExprFactor::Kind::Bockstein;
            break;
        default: {
            f.kind = ExprFactor::Kind::Group;
            auto inner = std::make_shared<ExprSum>(parse_sum(true));
            if (peek().kind != Tok::RParen)
                fail(expected_after_term(true));
            take();
            f.group = std::move(inner);
            break;
        }
        }
        const Token& last = toks_[pos_ - 1];
        f.span.length = last.span.line == f.span.line ? last.span.column + last.span.length - f.span.column
                                                      : static_cast<int>(t.text.size());
        return f;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Prime p_;
};

SteenrodElement eval_sum(const ExprSum& s, Prime p);

SteenrodElement eval_factor(const ExprFactor& f, Prime p)
{
    switch (f.kind) {
    case ExprFactor::Kind::Sq:
        return SteenrodElement::sq({f.exponent});
    case ExprFactor::Kind::P: {
        const Letter l[1] = {Letter::P(f.exponent)};
        return SteenrodElement::word(p, l);
    }
    case ExprFactor::Kind::Bockstein: {
        const Letter l[1] = {Letter::beta()};
        return SteenrodElement::word(p, l);
    }
    case ExprFactor::Kind::Group:
        return eval_sum(*f.group, p);
    }
    return SteenrodElement::zero(p);
}

SteenrodElement eval_sum(const ExprSum& s, Prime p)
{
    SteenrodElement out(p);
    for (const auto& t : s.terms) {
        SteenrodElement acc = SteenrodElement::identity(p);
        for (const auto& f : t.factors)
            acc = acc * eval_factor(f, p);
        std::uint32_t c = t.coefficient;
        if (t.negated)
            c = p.neg(c);
        out += acc.scaled(c);
    }
    return out;
}

std::string print_sum(const ExprSum& s);

std::string print_factor(const ExprFactor& f)
{
    switch (f.kind) {
    case ExprFactor::Kind::Sq:
        return "Sq^" + std::to_string(f.exponent);
    case ExprFactor::Kind::P:
        return "P^" + std::to_string(f.exponent);
    case ExprFactor::Kind::Bockstein:
        return "b";
    case ExprFactor::Kind::Group:
        return "(" + print_sum(*f.group) + ")";
    }
    return {};
}

std::string print_sum(const ExprSum& s)
{
    if (s.terms.empty())
        return "0";
    std::string out;
    for (std::size_t i = 0; i < s.terms.size(); ++i) {
        const ExprTerm& t = s.terms[i];
        if (i)
            out += t.negated ? " - " : " + ";
        if (t.coefficient != 1)
            out += std::to_string(t.coefficient) + " ";
        for (std::size_t j = 0; j < t.factors.size(); ++j)
            out += (j ? " " : "") + print_factor(t.factors[j]);
    }
    return out;
}

} // namespace

ParseError::ParseError(Kind kind, SourceSpan at, std::string message, std::vector<std::string> expected)
    : std::runtime_error(render(kind, at, message)), kind_(kind), at_(at), message_(std::move(message)),
      expected_(std::move(expected))
{}

SteenrodExpr parse_expression(const std::string& text, Prime p)
{
    Parser parser(lex(text), p);
    return {p, parser.parse_top()};
}

SteenrodElement evaluate(const SteenrodExpr& e)
{
    return eval_sum(e.root, e.prime);
}

SteenrodElement parse_element(const std::string& text, Prime p)
{
    return evaluate(parse_expression(text, p));
}

std::string print(const SteenrodElement& e)
{
    return e.to_string();
}

std::string print(const SteenrodExpr& e)
{
    return print_sum(e.root);
}

} // namespace steenrod
