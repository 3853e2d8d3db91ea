#pragma once

#include "laurent.hpp"

#include <cctype>
#include <string>
#include <utility>
#include <vector>

namespace fibinv {

// Element of Q(t) in canonical form:
//   - den is a plain polynomial with den(0) = 1 (t-power factors of the
//     denominator are absorbed into the numerator),
//   - gcd(polynomial part of num, den) = 1,
//   - num may carry negative exponents.
// Canonical form is unique, so operator== decides equality in Q(t).
class RatFun {
public:
    RatFun() : num_(LaurentPoly::zero()), den_(LaurentPoly::one()) {}

    explicit RatFun(const Rational& c) : num_(LaurentPoly(c)), den_(LaurentPoly::one()) {}
    RatFun(long n) : RatFun(Rational(n)) {}
    RatFun(int n) : RatFun(Rational(n)) {}

    explicit RatFun(const LaurentPoly& p) : num_(p), den_(LaurentPoly::one()) {}

    RatFun(LaurentPoly num, LaurentPoly den) { assign(std::move(num), std::move(den)); }

    static RatFun t(int exp = 1) { return RatFun(LaurentPoly::t(exp)); }
    static RatFun zero() { return RatFun(); }
    static RatFun one() { return RatFun(Rational(1)); }

    const LaurentPoly& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }

    bool isZero() const { return num_.isZero(); }
    bool isOne() const { return num_.isOne() && den_.isOne(); }
    bool isPolynomial() const { return den_.isOne(); }

    RatFun operator-() const
    {
        RatFun r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend RatFun operator+(const RatFun& a, const RatFun& b)
    {
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }

    friend RatFun operator-(const RatFun& a, const RatFun& b)
    {
        return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }

    friend RatFun operator*(const RatFun& a, const RatFun& b)
    {
        return RatFun(a.num_ * b.num_, a.den_ * b.den_);
    }

    friend RatFun operator/(const RatFun& a, const RatFun& b)
    {
        if (b.isZero()) throw ComputeError("division by zero in Q(t)");
        return RatFun(a.num_ * b.den_, a.den_ * b.num_);
    }

    RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
    RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
    RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
    RatFun& operator/=(const RatFun& o) { return *this = *this / o; }

    RatFun inverse() const
    {
        if (isZero()) throw ComputeError("inverse of zero in Q(t)");
        return RatFun(den_, num_);
    }

    RatFun scaled(const Rational& c) const { return RatFun(num_.scaled(c), den_); }
    RatFun shifted(int k) const { return RatFun(num_.shifted(k), den_); }

    RatFun pow(int e) const
    {
        if (e < 0) return inverse().pow(-e);
        RatFun r = one(), b = *this;
        unsigned n = static_cast<unsigned>(e);
        while (n) {
            if (n & 1) r *= b;
            b *= b;
            n >>= 1;
        }
        return r;
    }

    // f(t) -> f(t^{-1})
    RatFun bar() const { return RatFun(num_.inverted(), den_.inverted()); }

    RatFun derivative() const
    {
        return RatFun(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    // t f'/f
    RatFun logDerivative() const
    {
        if (isZero()) throw ComputeError("log derivative of zero");
        LaurentPoly n = num_.derivative() * den_ - num_ * den_.derivative();
        return RatFun(n.shifted(1), num_ * den_);
    }

    Rational evaluate(const Rational& x) const
    {
        Rational d = den_.evaluate(x);
        if (d == 0) throw ComputeError("pole at evaluation point");
        return num_.evaluate(x) / d;
    }

    // Coefficients of the power-series expansion at t=0 (the expansion with
    // finitely many negative-degree terms), on the window [lo, hi].
    std::vector<std::pair<int, Rational>> seriesWindow(int lo, int hi) const
    {
        if (lo > hi) throw ValidationError("series window: lo > hi");
        std::vector<std::pair<int, Rational>> out;
        if (isZero()) {
            for (int k = lo; k <= hi; ++k) out.emplace_back(k, Rational(0));
            return out;
        }
        int base = num_.minExp();
        // den(0) = 1 in canonical form; recurrence c_k = num_k - sum_{j>=1} den_j c_{k-j}
        std::map<int, Rational> c;
        int dmax = den_.maxExp();
        for (int k = base; k <= hi; ++k) {
            Rational v = num_.coeff(k);
            for (int j = 1; j <= dmax; ++j) {
                Rational dj = den_.coeff(j);
                if (dj == 0) continue;
                auto it = c.find(k - j);
                if (it != c.end()) v -= dj * it->second;
            }
            c[k] = v;
        }
        for (int k = lo; k <= hi; ++k) {
            auto it = c.find(k);
            out.emplace_back(k, it == c.end() ? Rational(0) : it->second);
        }
        return out;
    }

    Rational seriesCoeff(int k) const { return seriesWindow(k, k).front().second; }

    bool operator==(const RatFun& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFun& o) const { return !(*this == o); }
    bool operator<(const RatFun& o) const
    {
        if (num_ != o.num_) return num_ < o.num_;
        return den_ < o.den_;
    }

    // Canonical rendering: "(1 - t)/(1 - 3*t + t^2)", "t^-2", "0".
    std::string str() const
    {
        if (den_.isOne()) return num_.str();
        std::string n = num_.str();
        if (num_.termCount() > 1 || n.find(' ') != std::string::npos) n = "(" + n + ")";
        return n + "/(" + den_.str() + ")";
    }

private:
    LaurentPoly num_, den_;

    void assign(LaurentPoly num, LaurentPoly den)
    {
        if (den.isZero()) throw ComputeError("zero denominator in Q(t)");
        if (num.isZero()) {
            num_ = LaurentPoly::zero();
            den_ = LaurentPoly::one();
            return;
        }
        // clear the denominator's t-power into the numerator
        int a = den.minExp();
        if (a != 0) {
            den = den.shifted(-a);
            num = num.shifted(-a);
        }
        int b = num.minExp();
        LaurentPoly n0 = num.shifted(-b);
        LaurentPoly g = polyGcd(n0, den);
        if (!g.isOne() && !g.isZero() && !(g.isConstant())) {
            n0 = polyDivExact(n0, g);
            den = polyDivExact(den, g);
        }
        // den(0) = 1
        Rational c = den.trailingCoeff();
        if (den.minExp() != 0) throw ComputeError("internal: denominator lost constant term");
        if (c != 1) {
            den = den.scaled(Rational(1) / c);
            n0 = n0.scaled(Rational(1) / c);
        }
        num_ = n0.shifted(b);
        den_ = den;
    }
};

// ---- expression parser ----
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-'|'+')* atom ('^' signed-int)?
//   atom   := integer | 't' | '(' expr ')'
//
// Accepts the canonical output grammar plus shortcuts like t^-1 and 3/2.
namespace detail {

class RatFunParser {
public:
    explicit RatFunParser(const std::string& s) : s_(s) {}

    RatFun parse()
    {
        RatFun v = parseExpr();
        skipWs();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return v;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ValidationError("rational function parse error at position " + std::to_string(pos_) + ": " + msg +
                              " in \"" + s_ + "\"");
    }

    void skipWs()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c)
    {
        skipWs();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek()
    {
        skipWs();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    RatFun parseExpr()
    {
        RatFun v = parseTerm();
        while (true) {
            if (eat('+'))
                v += parseTerm();
            else if (eat('-'))
                v -= parseTerm();
            else
                return v;
        }
    }

    RatFun parseTerm()
    {
        RatFun v = parseFactor();
        while (true) {
            if (eat('*'))
                v *= parseFactor();
            else if (eat('/'))
                v /= parseFactor();
            else
                return v;
        }
    }

    RatFun parseFactor()
    {
        bool neg = false;
        while (true) {
            if (eat('-'))
                neg = !neg;
            else if (eat('+'))
                ;
            else
                break;
        }
        RatFun v = parseAtom();
        if (eat('^')) v = v.pow(parseSignedInt());
        return neg ? -v : v;
    }

    RatFun parseAtom()
    {
        char c = peek();
        if (c == '(') {
            eat('(');
            RatFun v = parseExpr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (c == 't') {
            ++pos_;
            return RatFun::t();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Integer n = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                n = n * 10 + (s_[pos_] - '0');
                ++pos_;
            }
            return RatFun(Rational(n));
        }
        fail("expected number, 't' or '('");
    }

    int parseSignedInt()
    {
        skipWs();
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        skipWs();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected integer exponent");
        long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            if (v > 1000000) fail("exponent too large");
            ++pos_;
        }
        return static_cast<int>(neg ? -v : v);
    }
};

} // namespace detail

inline RatFun parseRatFun(const std::string& s) { return detail::RatFunParser(s).parse(); }

// Laurent polynomial input (rejects honest denominators).
inline LaurentPoly parseLaurent(const std::string& s)
{
    RatFun f = parseRatFun(s);
    if (!f.isPolynomial()) throw ValidationError("expected a Laurent polynomial, got \"" + s + "\"");
    return f.num();
}

} // namespace fibinv
