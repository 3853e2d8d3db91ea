#pragma once

#include "rational.hpp"

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fibinv {

// Element of Q[t^{+-1}]: finite map exponent -> nonzero rational coefficient.
class LaurentPoly {
public:
    LaurentPoly() = default;

    explicit LaurentPoly(const Rational& c)
    {
        if (c != 0) coeffs_[0] = c;
    }

    static LaurentPoly monomial(const Rational& c, int exp)
    {
        LaurentPoly p;
        if (c != 0) p.coeffs_[exp] = c;
        return p;
    }

    static LaurentPoly t(int exp = 1) { return monomial(1, exp); }

    static LaurentPoly zero() { return LaurentPoly(); }
    static LaurentPoly one() { return LaurentPoly(Rational(1)); }

    bool isZero() const { return coeffs_.empty(); }

    bool isOne() const
    {
        return coeffs_.size() == 1 && coeffs_.begin()->first == 0 && coeffs_.begin()->second == 1;
    }

    bool isConstant() const
    {
        return coeffs_.empty() || (coeffs_.size() == 1 && coeffs_.begin()->first == 0);
    }

    // single term c*t^k?
    bool isMonomial() const { return coeffs_.size() == 1; }

    const std::map<int, Rational>& terms() const { return coeffs_; }

    Rational coeff(int exp) const
    {
        auto it = coeffs_.find(exp);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    void setCoeff(int exp, const Rational& c)
    {
        if (c == 0)
            coeffs_.erase(exp);
        else
            coeffs_[exp] = c;
    }

    int minExp() const
    {
        if (isZero()) throw ComputeError("minExp of zero polynomial");
        return coeffs_.begin()->first;
    }

    int maxExp() const
    {
        if (isZero()) throw ComputeError("maxExp of zero polynomial");
        return coeffs_.rbegin()->first;
    }

    Rational leadingCoeff() const { return coeffs_.rbegin()->second; }
    Rational trailingCoeff() const { return coeffs_.begin()->second; }

    LaurentPoly operator-() const
    {
        LaurentPoly r;
        for (const auto& [e, c] : coeffs_) r.coeffs_[e] = -c;
        return r;
    }

    LaurentPoly& operator+=(const LaurentPoly& o)
    {
        for (const auto& [e, c] : o.coeffs_) {
            auto it = coeffs_.find(e);
            if (it == coeffs_.end()) {
                coeffs_[e] = c;
            } else {
                it->second += c;
                if (it->second == 0) coeffs_.erase(it);
            }
        }
        return *this;
    }

    LaurentPoly& operator-=(const LaurentPoly& o) { return *this += -o; }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b)
    {
        LaurentPoly r;
        for (const auto& [ea, ca] : a.coeffs_)
            for (const auto& [eb, cb] : b.coeffs_) {
                Rational& c = r.coeffs_[ea + eb];
                c += ca * cb;
            }
        for (auto it = r.coeffs_.begin(); it != r.coeffs_.end();)
            it = (it->second == 0) ? r.coeffs_.erase(it) : std::next(it);
        return r;
    }

    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    LaurentPoly scaled(const Rational& c) const
    {
        LaurentPoly r;
        if (c == 0) return r;
        for (const auto& [e, k] : coeffs_) r.coeffs_[e] = k * c;
        return r;
    }

    // multiply by t^k
    LaurentPoly shifted(int k) const
    {
        LaurentPoly r;
        for (const auto& [e, c] : coeffs_) r.coeffs_[e + k] = c;
        return r;
    }

    // t -> t^{-1}
    LaurentPoly inverted() const
    {
        LaurentPoly r;
        for (const auto& [e, c] : coeffs_) r.coeffs_[-e] = c;
        return r;
    }

    LaurentPoly derivative() const
    {
        LaurentPoly r;
        for (const auto& [e, c] : coeffs_)
            if (e != 0) r.coeffs_[e - 1] = c * e;
        return r;
    }

    Rational evaluate(const Rational& x) const
    {
        Rational acc = 0;
        for (const auto& [e, c] : coeffs_) {
            if (e >= 0) {
                Rational p = 1;
                for (int i = 0; i < e; ++i) p *= x;
                acc += c * p;
            } else {
                if (x == 0) throw ComputeError("evaluate: negative exponent at t=0");
                Rational p = 1;
                for (int i = 0; i < -e; ++i) p *= x;
                acc += c / p;
            }
        }
        return acc;
    }

    LaurentPoly pow(unsigned e) const
    {
        LaurentPoly r = one(), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    bool operator==(const LaurentPoly& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const LaurentPoly& o) const { return coeffs_ != o.coeffs_; }
    bool operator<(const LaurentPoly& o) const { return coeffs_ < o.coeffs_; }

    // Ascending exponent order: "-t^-1 + 3 - t", "1 - 3*t + t^2".
    std::string str() const
    {
        if (isZero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : coeffs_) {
            Rational a = c;
            if (first) {
                if (a < 0) {
                    os << "-";
                    a = -a;
                }
            } else {
                os << (a < 0 ? " - " : " + ");
                if (a < 0) a = -a;
            }
            if (e == 0) {
                os << to_string(a);
            } else {
                if (a != 1) os << to_string(a) << "*";
                os << "t";
                if (e != 1) os << "^" << e;
            }
            first = false;
        }
        return os.str();
    }

    size_t termCount() const { return coeffs_.size(); }

private:
    std::map<int, Rational> coeffs_;
};

// ---- polynomial helpers (operands with min exponent >= 0) ----

// Euclidean division over Q[t]; requires b != 0, both plain polynomials.
inline std::pair<LaurentPoly, LaurentPoly> polyDivMod(const LaurentPoly& a, const LaurentPoly& b)
{
    if (b.isZero()) throw ComputeError("polynomial division by zero");
    LaurentPoly q, r = a;
    int db = b.maxExp();
    Rational lb = b.leadingCoeff();
    while (!r.isZero() && r.maxExp() >= db) {
        int sh = r.maxExp() - db;
        Rational f = r.leadingCoeff() / lb;
        q += LaurentPoly::monomial(f, sh);
        r -= b.shifted(sh).scaled(f);
    }
    return {q, r};
}

inline LaurentPoly polyDivExact(const LaurentPoly& a, const LaurentPoly& b)
{
    auto [q, r] = polyDivMod(a, b);
    if (!r.isZero()) throw ComputeError("inexact polynomial division");
    return q;
}

namespace detail {

// integer polynomial as dense coefficient vector, index = exponent
using ZPoly = std::vector<Integer>;

inline void ztrim(ZPoly& p)
{
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int zdeg(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }

inline Integer zcontent(const ZPoly& p)
{
    Integer g = 0;
    for (const auto& c : p) g = gcd(g, c);
    return g == 0 ? Integer(1) : g;
}

inline ZPoly zprimitive(const ZPoly& p)
{
    Integer c = zcontent(p);
    ZPoly r = p;
    for (auto& x : r) x /= c;
    if (!r.empty() && r.back() < 0)
        for (auto& x : r) x = -x;
    return r;
}

inline ZPoly zscale(const ZPoly& p, const Integer& c)
{
    ZPoly r = p;
    for (auto& x : r) x *= c;
    return r;
}

// pseudo-remainder of lc(b)^(deg a - deg b + 1) * a by b
inline ZPoly zprem(ZPoly a, const ZPoly& b)
{
    int db = zdeg(b);
    Integer lb = b.back();
    while (zdeg(a) >= db) {
        int sh = zdeg(a) - db;
        Integer la = a.back();
        a = zscale(a, lb);
        for (int i = 0; i <= db; ++i) a[i + sh] -= la * b[i];
        ztrim(a);
        if (a.empty()) break;
    }
    return a;
}

// subresultant polynomial remainder sequence
inline ZPoly zgcd(ZPoly a, ZPoly b)
{
    ztrim(a);
    ztrim(b);
    if (a.empty()) return zprimitive(b);
    if (b.empty()) return zprimitive(a);
    a = zprimitive(a);
    b = zprimitive(b);
    if (zdeg(a) < zdeg(b)) std::swap(a, b);
    Integer g = 1, h = 1;
    while (true) {
        int delta = zdeg(a) - zdeg(b);
        ZPoly r = zprem(a, b);
        if (r.empty()) return zprimitive(b);
        if (zdeg(r) == 0) return {Integer(1)};
        Integer divisor = g * pow(h, static_cast<unsigned long>(delta));
        for (auto& x : r) x /= divisor;
        a = std::move(b);
        b = std::move(r);
        g = a.back();
        if (delta >= 1) {
            // h <- g^delta / h^(delta-1)
            Integer num = pow(g, static_cast<unsigned long>(delta));
            Integer den = pow(h, static_cast<unsigned long>(delta - 1));
            h = num / den;
        }
    }
}

inline ZPoly toZPoly(const LaurentPoly& p)
{
    if (p.isZero()) return {};
    if (p.minExp() < 0) throw ComputeError("toZPoly: negative exponent");
    Integer scale = 1;
    for (const auto& [e, c] : p.terms()) scale = lcm(scale, rat_den(c));
    ZPoly r(static_cast<size_t>(p.maxExp()) + 1, Integer(0));
    for (const auto& [e, c] : p.terms()) r[static_cast<size_t>(e)] = rat_num(c) * (scale / rat_den(c));
    return r;
}

inline LaurentPoly fromZPoly(const ZPoly& p)
{
    LaurentPoly r;
    for (size_t i = 0; i < p.size(); ++i)
        if (p[i] != 0) r.setCoeff(static_cast<int>(i), Rational(p[i]));
    return r;
}

} // namespace detail

// gcd over Q[t] via the subresultant sequence on primitive integer parts;
// result is primitive with positive leading coefficient.
inline LaurentPoly polyGcd(const LaurentPoly& a, const LaurentPoly& b)
{
    if (a.isZero() && b.isZero()) return LaurentPoly::zero();
    return detail::fromZPoly(detail::zgcd(detail::toZPoly(a), detail::toZPoly(b)));
}

} // namespace fibinv
