#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "pweyl/error.hpp"
#include "pweyl/poly.hpp"

namespace pweyl {

/// Shared tokenizer / recursive-descent parser for the expression grammar
///
///   expr   := term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := ('-'|'+')* primary ('^' nat)?
///   primary:= number | symbol | '(' expr ')'
///   number := digits ('/' digits)?
///
/// Whitespace is insignificant.  Symbols are letters followed by digits
/// (x1, d2, X1, s1, l).  Multiplication keeps the written order, so the same
/// parser drives both commutative rings and the Weyl algebra.
///
/// The algebra A supplies:
///   using Value = ...;
///   Value from_ratio(const BigInt& num, const BigInt& den);
///   Value symbol(const std::string& name, std::size_t pos);
///   Value add/sub/mul(const Value&, const Value&);
///   Value neg(const Value&);
///   Value pow(const Value&, std::uint32_t);
template <class A>
class ExpressionParser {
  public:
    ExpressionParser(const std::string& text, A& alg) : s_(text), alg_(alg) {}

    typename A::Value parse() {
        auto v = parse_expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
        return v;
    }

  private:
    const std::string& s_;
    A& alg_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) { ++pos_; return true; }
        return false;
    }

    typename A::Value parse_expr() {
        auto v = parse_term();
        for (;;) {
            if (accept('+')) v = alg_.add(v, parse_term());
            else if (accept('-')) v = alg_.sub(v, parse_term());
            else return v;
        }
    }

    typename A::Value parse_term() {
        auto v = parse_factor();
        while (accept('*')) v = alg_.mul(v, parse_factor());
        return v;
    }

    typename A::Value parse_factor() {
        bool neg = false;
        for (;;) {
            if (accept('-')) neg = !neg;
            else if (accept('+')) continue;
            else break;
        }
        auto v = parse_primary();
        if (accept('^')) {
            std::uint64_t e = parse_nat();
            if (e >= kMaxExponent) throw ParseError("exponent out of range", pos_);
            v = alg_.pow(v, (std::uint32_t)e);
        }
        return neg ? alg_.neg(v) : v;
    }

    typename A::Value parse_primary() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            auto v = parse_expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return v;
        }
        if (std::isdigit((unsigned char)c)) {
            BigInt num = parse_int();
            BigInt den = 1;
            if (accept('/')) den = parse_int();
            if (den == 0) throw ParseError("zero denominator", pos_);
            return alg_.from_ratio(num, den);
        }
        if (std::isalpha((unsigned char)c)) {
            std::size_t start = pos_;
            std::string name;
            name += c;
            ++pos_;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) name += s_[pos_++];
            return alg_.symbol(name, start);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    BigInt parse_int() {
        skip_ws();
        std::size_t start = pos_;
        std::string digits;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) digits += s_[pos_++];
        if (digits.empty()) throw ParseError("expected integer", start);
        return BigInt(digits);
    }

    std::uint64_t parse_nat() {
        BigInt v = parse_int();
        if (v > 0xffffffffull) throw ParseError("exponent too large", pos_);
        return (std::uint64_t)v;
    }
};

inline FpDom::Elem from_big_ratio(const FpDom& d, const BigInt& num, const BigInt& den) {
    BigInt pn = d.p;
    BigInt nm = num % pn, dm = den % pn;
    if (nm < 0) nm += pn;
    if (dm < 0) dm += pn;
    if (dm == 0) throw BadPrimeError("denominator divisible by " + std::to_string(d.p));
    return d.div((FpDom::Elem)(std::uint64_t)nm, (FpDom::Elem)(std::uint64_t)dm);
}

inline QDom::Elem from_big_ratio(const QDom&, const BigInt& num, const BigInt& den) {
    return BigRat(num, den);
}

inline Zp2Dom::Elem from_big_ratio(const Zp2Dom& d, const BigInt& num, const BigInt& den) {
    BigInt pn = d.p2;
    BigInt nm = num % pn, dm = den % pn;
    if (nm < 0) nm += pn;
    if (dm < 0) dm += pn;
    if (dm % d.p == 0) throw BadPrimeError("denominator divisible by " + std::to_string(d.p));
    return d.div((Zp2Dom::Elem)(std::uint64_t)nm, (Zp2Dom::Elem)(std::uint64_t)dm);
}

/// Commutative polynomial evaluation of the expression grammar: variables are
/// resolved through an explicit name -> index table.
template <class D>
struct PolyAlgebra {
    using Value = MultiPoly<D>;

    D dom;
    int nvars;
    std::unordered_map<std::string, int> table;

    Value from_ratio(const BigInt& num, const BigInt& den) {
        return Value::constant(dom, nvars, from_big_ratio(dom, num, den));
    }
    Value symbol(const std::string& name, std::size_t pos) {
        auto it = table.find(name);
        if (it == table.end()) throw ParseError("unknown variable '" + name + "'", pos);
        return Value::variable(dom, nvars, it->second);
    }
    Value add(const Value& a, const Value& b) { return a + b; }
    Value sub(const Value& a, const Value& b) { return a - b; }
    Value mul(const Value& a, const Value& b) { return a * b; }
    Value neg(const Value& a) { return -a; }
    Value pow(const Value& a, std::uint32_t e) { return poly_pow(a, e); }
};

/// Parse a polynomial in the variables named by `names` (index = position).
template <class D>
MultiPoly<D> parse_poly(const std::string& text, D dom, const std::vector<std::string>& names) {
    PolyAlgebra<D> alg{dom, (int)names.size(), {}};
    for (std::size_t i = 0; i < names.size(); ++i) alg.table.emplace(names[i], (int)i);
    ExpressionParser<PolyAlgebra<D>> p(text, alg);
    return p.parse();
}

/// Coordinate polynomials in x1..xn.
template <class D>
MultiPoly<D> parse_coordinate_poly(const std::string& text, D dom, int n) {
    return parse_poly(text, dom, coordinate_names(n, "x"));
}

/// Polynomials on the twisted cotangent space: X1..Xn, s1..sn (2n variables,
/// X block first).
template <class D>
MultiPoly<D> parse_twisted_poly(const std::string& text, D dom, int n) {
    auto names = coordinate_names(n, "X");
    auto snames = coordinate_names(n, "s");
    names.insert(names.end(), snames.begin(), snames.end());
    return parse_poly(text, dom, names);
}

inline std::vector<std::string> twisted_names(int n) {
    auto names = coordinate_names(n, "X");
    auto snames = coordinate_names(n, "s");
    names.insert(names.end(), snames.begin(), snames.end());
    return names;
}

/// Coordinates plus the deformation parameter: x1..xn, l (n+1 variables, l last).
template <class D>
MultiPoly<D> parse_lambda_poly(const std::string& text, D dom, int n) {
    auto names = coordinate_names(n, "x");
    names.push_back("l");
    return parse_poly(text, dom, names);
}

inline std::vector<std::string> lambda_names(int n) {
    auto names = coordinate_names(n, "x");
    names.push_back("l");
    return names;
}

}  // namespace pweyl
