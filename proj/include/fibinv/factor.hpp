#pragma once

#include "ratfun.hpp"

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

namespace fibinv {

// Factorization of univariate polynomials over Q, used to expand rational
// functions over the canonical partial-fraction basis. Squarefree splitting
// is Yun's algorithm; squarefree parts are factored modulo a single prime
// chosen larger than twice the factor coefficient bound, so the modular
// factors recombine directly without lifting.

namespace detail {

inline bool millerRabinWitness(const Integer& n, const Integer& a, const Integer& d, int r)
{
    Integer x = boost::multiprecision::powm(a % n, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < r; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return false;
    }
    return true;
}

inline bool isPrime(const Integer& n)
{
    if (n < 2) return false;
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
        if (n % p == 0) return n == p;
    Integer d = n - 1;
    int r = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++r;
    }
    for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
        if (millerRabinWitness(n, Integer(a), d, r)) return false;
    return true;
}

// ---- arithmetic in F_p[t], dense vectors, index = exponent ----

struct FpContext {
    Integer p;

    Integer norm(const Integer& x) const
    {
        Integer r = x % p;
        if (r < 0) r += p;
        return r;
    }

    Integer inv(const Integer& x) const
    {
        // extended Euclid
        Integer a = norm(x), b = p, u = 1, v = 0;
        while (b != 0) {
            Integer q = a / b;
            a -= q * b;
            std::swap(a, b);
            u -= q * v;
            std::swap(u, v);
        }
        if (a != 1) throw ComputeError("non-invertible residue");
        return norm(u);
    }

    ZPoly reduce(const ZPoly& f) const
    {
        ZPoly r(f.size());
        for (size_t i = 0; i < f.size(); ++i) r[i] = norm(f[i]);
        ztrim(r);
        return r;
    }

    ZPoly mul(const ZPoly& a, const ZPoly& b) const
    {
        if (a.empty() || b.empty()) return {};
        ZPoly r(a.size() + b.size() - 1, Integer(0));
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
        }
        ztrim(r);
        return r;
    }

    ZPoly mod(ZPoly a, const ZPoly& m) const
    {
        Integer lcInv = inv(m.back());
        while (zdeg(a) >= zdeg(m)) {
            Integer f = norm(a.back() * lcInv);
            size_t sh = a.size() - m.size();
            for (size_t i = 0; i < m.size(); ++i) a[i + sh] = norm(a[i + sh] - f * m[i]);
            ztrim(a);
            if (a.empty()) break;
        }
        return a;
    }

    ZPoly mulmod(const ZPoly& a, const ZPoly& b, const ZPoly& m) const { return mod(mul(a, b), m); }

    ZPoly powmod(ZPoly base, Integer e, const ZPoly& m) const
    {
        ZPoly r{Integer(1)};
        base = mod(std::move(base), m);
        while (e > 0) {
            if (e % 2 == 1) r = mulmod(r, base, m);
            base = mulmod(base, base, m);
            e /= 2;
        }
        return r;
    }

    ZPoly monic(const ZPoly& f) const
    {
        if (f.empty()) return f;
        Integer s = inv(f.back());
        ZPoly r(f.size());
        for (size_t i = 0; i < f.size(); ++i) r[i] = norm(f[i] * s);
        return r;
    }

    ZPoly gcd(ZPoly a, ZPoly b) const
    {
        a = reduce(a);
        b = reduce(b);
        while (!b.empty()) {
            a = mod(std::move(a), monic(b));
            std::swap(a, b);
        }
        return a.empty() ? a : monic(a);
    }

    ZPoly deriv(const ZPoly& f) const
    {
        if (f.size() <= 1) return {};
        ZPoly r(f.size() - 1);
        for (size_t i = 1; i < f.size(); ++i) r[i - 1] = norm(f[i] * Integer(i));
        ztrim(r);
        return r;
    }

    ZPoly quot(ZPoly a, const ZPoly& m) const
    {
        // exact field quotient a / m
        ZPoly q(a.size() > m.size() ? a.size() - m.size() + 1 : 1, Integer(0));
        Integer lcInv = inv(m.back());
        while (zdeg(a) >= zdeg(m)) {
            Integer f = norm(a.back() * lcInv);
            size_t sh = a.size() - m.size();
            q[sh] = f;
            for (size_t i = 0; i < m.size(); ++i) a[i + sh] = norm(a[i + sh] - f * m[i]);
            ztrim(a);
            if (a.empty()) break;
        }
        ztrim(q);
        return q;
    }
};

// Cantor-Zassenhaus over a large prime field. Input monic squarefree.
inline void equalDegreeSplit(const FpContext& fp, const ZPoly& f, int d, std::mt19937_64& rng,
                             std::vector<ZPoly>& out)
{
    if (zdeg(f) == d) {
        out.push_back(f);
        return;
    }
    Integer exponent = (pow(fp.p, static_cast<unsigned long>(d)) - 1) / 2;
    while (true) {
        ZPoly a(static_cast<size_t>(zdeg(f)), Integer(0));
        for (auto& c : a) c = Integer(rng()) % fp.p;
        ztrim(a);
        if (a.empty()) continue;
        ZPoly b = fp.powmod(a, exponent, f);
        if (b.empty()) continue;
        b[0] = fp.norm(b[0] - 1);
        ztrim(b);
        ZPoly g = fp.gcd(b, f);
        if (!g.empty() && zdeg(g) > 0 && zdeg(g) < zdeg(f)) {
            equalDegreeSplit(fp, g, d, rng, out);
            equalDegreeSplit(fp, fp.quot(f, g), d, rng, out);
            return;
        }
    }
}

inline std::vector<ZPoly> factorModP(const FpContext& fp, ZPoly f)
{
    std::vector<ZPoly> out;
    f = fp.monic(fp.reduce(f));
    std::mt19937_64 rng(0x51ab1234u);
    ZPoly x{Integer(0), Integer(1)};
    ZPoly h = x;
    int d = 0;
    while (2 * (d + 1) <= zdeg(f)) {
        ++d;
        h = fp.powmod(h, fp.p, f);
        ZPoly hmx = h;
        if (hmx.size() < 2) hmx.resize(2, Integer(0));
        hmx[1] = fp.norm(hmx[1] - 1);
        ztrim(hmx);
        ZPoly g = fp.gcd(hmx, f);
        if (!g.empty() && zdeg(g) > 0) {
            equalDegreeSplit(fp, g, d, rng, out);
            f = fp.quot(f, g);
            h = fp.mod(h, f);
        }
    }
    if (zdeg(f) > 0) out.push_back(f);
    return out;
}

inline Integer isqrtCeil(const Integer& n)
{
    Integer r = boost::multiprecision::sqrt(n);
    while (r * r < n) ++r;
    return r;
}

// irreducible factors over Z of a primitive squarefree polynomial with
// positive leading coefficient
inline std::vector<ZPoly> factorSquarefreeZ(ZPoly g)
{
    std::vector<ZPoly> out;
    if (zdeg(g) <= 1) {
        if (zdeg(g) >= 1) out.push_back(g);
        return out;
    }
    // coefficient bound for factors (Mignotte-style, generous)
    Integer norm2 = 0;
    for (const auto& c : g) norm2 += c * c;
    Integer bound = (isqrtCeil(norm2) + 1) * abs(g.back());
    bound <<= static_cast<unsigned>(zdeg(g) + 1);

    FpContext fp;
    Integer candidate = 2 * bound + 1;
    if (candidate % 2 == 0) ++candidate;
    while (true) {
        if (isPrime(candidate) && g.back() % candidate != 0) {
            fp.p = candidate;
            ZPoly gp = fp.reduce(g);
            if (zdeg(gp) == zdeg(g) && zdeg(fp.gcd(gp, fp.deriv(gp))) == 0) break;
        }
        candidate += 2;
    }

    std::vector<ZPoly> modular = factorModP(fp, g);
    if (modular.size() == 1) {
        out.push_back(g);
        return out;
    }

    auto balanced = [&](const Integer& x) {
        Integer r = fp.norm(x);
        if (2 * r > fp.p) r -= fp.p;
        return r;
    };
    auto nextCombination = [](std::vector<size_t>& idx, size_t n) {
        size_t k = idx.size();
        for (size_t i = k; i-- > 0;) {
            if (idx[i] < n - (k - i)) {
                ++idx[i];
                for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                return true;
            }
        }
        return false;
    };

    // recombine subsets of the modular factors
    std::vector<ZPoly> pool = modular;
    ZPoly remaining = g;
    size_t subsetSize = 1;
    while (2 * subsetSize <= pool.size()) {
        bool found = false;
        std::vector<size_t> idx(subsetSize);
        for (size_t i = 0; i < subsetSize; ++i) idx[i] = i;
        do {
            ZPoly prod{remaining.back()}; // leading coefficient premultiplier
            for (size_t i : idx) prod = fp.mul(prod, pool[i]);
            for (auto& c : prod) c = balanced(c);
            ztrim(prod);
            ZPoly cand = zprimitive(prod);
            if (zdeg(cand) >= 1) {
                auto [q, r] = polyDivMod(fromZPoly(remaining), fromZPoly(cand));
                if (r.isZero()) {
                    out.push_back(cand);
                    remaining = zprimitive(toZPoly(q));
                    if (remaining.back() < 0)
                        for (auto& c : remaining) c = -c;
                    std::vector<ZPoly> rest;
                    for (size_t i = 0, k = 0; i < pool.size(); ++i) {
                        if (k < idx.size() && idx[k] == i) {
                            ++k;
                            continue;
                        }
                        rest.push_back(pool[i]);
                    }
                    pool = std::move(rest);
                    found = true;
                    break;
                }
            }
        } while (nextCombination(idx, pool.size()));
        if (!found) ++subsetSize;
    }
    if (zdeg(remaining) >= 1) out.push_back(remaining);
    return out;
}

} // namespace detail

struct PolyFactor {
    LaurentPoly prime; // primitive over Z, positive leading coefficient
    int multiplicity = 0;
};

struct Factorization {
    Rational unit;                   // f = unit * t^tPower * prod prime^mult
    int tPower = 0;
    std::vector<PolyFactor> factors; // sorted by (degree, coefficients)
};

// Factorization of a nonzero polynomial (min exponent >= 0) over Q.
inline Factorization factorPoly(const LaurentPoly& fIn)
{
    if (fIn.isZero()) throw ComputeError("factorization of zero");
    Factorization out;
    LaurentPoly f = fIn;
    out.tPower = f.minExp() > 0 ? f.minExp() : 0;
    if (out.tPower < 0) throw ValidationError("factorPoly expects a plain polynomial");
    f = f.shifted(-out.tPower);
    out.unit = f.leadingCoeff();
    f = f.scaled(Rational(1) / out.unit); // monic over Q

    // Yun's squarefree decomposition (f monic)
    std::vector<std::pair<LaurentPoly, int>> squarefree;
    if (f.maxExp() > 0) {
        LaurentPoly df = f.derivative();
        LaurentPoly a = polyGcd(f, df);
        a = a.scaled(Rational(1) / a.leadingCoeff());
        LaurentPoly b = polyDivExact(f, a);
        LaurentPoly c = polyDivExact(df, a);
        LaurentPoly d = c - b.derivative();
        int i = 1;
        while (!(b.isConstant())) {
            LaurentPoly p = polyGcd(b, d);
            p = p.scaled(Rational(1) / p.leadingCoeff());
            if (p.maxExp() > 0) squarefree.emplace_back(p, i);
            b = polyDivExact(b, p);
            c = polyDivExact(d, p);
            d = c - b.derivative();
            ++i;
        }
    }

    for (const auto& [sq, mult] : squarefree) {
        detail::ZPoly z = detail::zprimitive(detail::toZPoly(sq));
        if (z.back() < 0)
            for (auto& x : z) x = -x;
        for (const auto& zf : detail::factorSquarefreeZ(z)) {
            PolyFactor pf;
            pf.prime = detail::fromZPoly(zf);
            pf.multiplicity = mult;
            out.factors.push_back(std::move(pf));
        }
    }
    // fold the leading coefficients of the primitive factors into the unit
    LaurentPoly check = LaurentPoly::one();
    for (const auto& pf : out.factors)
        for (int i = 0; i < pf.multiplicity; ++i) check *= pf.prime;
    out.unit /= check.leadingCoeff();
    std::sort(out.factors.begin(), out.factors.end(), [](const PolyFactor& a, const PolyFactor& b) {
        if (a.prime.maxExp() != b.prime.maxExp()) return a.prime.maxExp() < b.prime.maxExp();
        return a.prime < b.prime;
    });
    return out;
}

// ---- canonical partial-fraction expansion ----

// f = sum coeff * atom, atoms are t^k and t^j / P(t)^e with P irreducible,
// primitive, positive leading coefficient and 0 <= j < deg P.
inline std::vector<std::pair<Rational, RatFun>> atomize(const RatFun& f)
{
    std::vector<std::pair<Rational, RatFun>> out;
    if (f.isZero()) return out;

    // clear negative numerator exponents into a t-power of the denominator
    int m = f.num().minExp();
    LaurentPoly n = (m < 0) ? f.num().shifted(-m) : f.num();
    LaurentPoly d = (m < 0) ? f.den().shifted(-m) : f.den();
    Factorization fact = factorPoly(d);

    std::map<int, Rational> mono;
    std::map<std::string, std::pair<RatFun, Rational>> proper;

    auto addMono = [&](int k, const Rational& c) {
        if (c == 0) return;
        mono[k] += c;
    };
    auto addProper = [&](const RatFun& atom, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = proper.emplace(atom.str(), std::make_pair(atom, c));
        if (!fresh) it->second.second += c;
    };

    // polynomial quotient
    LaurentPoly dMonic = d.scaled(Rational(1) / d.leadingCoeff());
    auto [quot, rem] = polyDivMod(n, dMonic);
    quot = quot.scaled(Rational(1) / d.leadingCoeff());
    for (const auto& [e, c] : quot.terms()) addMono(e, c);

    if (!rem.isZero()) {
        // residue class per prime power, via inverse of the cofactor
        struct Piece {
            LaurentPoly primePow; // P^e (or t^e)
            LaurentPoly prime;
            int mult;
            bool isT;
        };
        std::vector<Piece> pieces;
        if (fact.tPower > 0) {
            Piece p;
            p.prime = LaurentPoly::t();
            p.mult = fact.tPower;
            p.primePow = LaurentPoly::t(fact.tPower);
            p.isT = true;
            pieces.push_back(p);
        }
        for (const auto& pf : fact.factors) {
            Piece p;
            p.prime = pf.prime;
            p.mult = pf.multiplicity;
            p.primePow = pf.prime.pow(static_cast<unsigned>(pf.multiplicity));
            p.isT = false;
            pieces.push_back(p);
        }

        // extended Euclid over Q[t]
        auto bezoutInverse = [](const LaurentPoly& a, const LaurentPoly& mod) {
            // u with u*a = 1 (mod m), gcd(a, m) = 1
            LaurentPoly r0 = mod, r1 = polyDivMod(a, mod).second;
            LaurentPoly s0 = LaurentPoly::zero(), s1 = LaurentPoly::one();
            while (!r1.isZero()) {
                auto [q, r2] = polyDivMod(r0, r1);
                LaurentPoly s2 = s0 - q * s1;
                r0 = r1;
                r1 = r2;
                s0 = s1;
                s1 = s2;
            }
            if (r0.isConstant() && !r0.isZero()) return s0.scaled(Rational(1) / r0.coeff(0));
            throw ComputeError("bezout inverse of non-coprime polynomials");
        };

        LaurentPoly sum = LaurentPoly::zero();
        std::vector<LaurentPoly> residues;
        for (const auto& piece : pieces) {
            LaurentPoly cofactor = polyDivExact(d, piece.primePow);
            LaurentPoly inv = bezoutInverse(cofactor, piece.primePow);
            LaurentPoly res = polyDivMod(rem * inv, piece.primePow).second;
            residues.push_back(res);
            sum += res * cofactor;
        }
        // polynomial correction from the CRT overshoot
        LaurentPoly corr = polyDivExact(sum - rem, d);
        for (const auto& [e, c] : corr.terms()) addMono(e, -c);

        for (size_t pi = 0; pi < pieces.size(); ++pi) {
            const Piece& piece = pieces[pi];
            LaurentPoly res = residues[pi];
            // res / prime^mult = sum res_e / prime^e with deg res_e < deg prime
            for (int e = piece.mult; e >= 1 && !res.isZero(); --e) {
                auto [q2, r2] = polyDivMod(res, piece.prime);
                if (piece.isT) {
                    // r2 is a constant: contributes r2 * t^{-e}
                    if (!r2.isZero()) addMono(-e, r2.coeff(0));
                } else if (!r2.isZero()) {
                    for (const auto& [j, c] : r2.terms())
                        addProper(RatFun(LaurentPoly::t(j), piece.prime.pow(static_cast<unsigned>(e))), c);
                }
                res = q2;
            }
        }
    }

    for (const auto& [k, c] : mono)
        if (c != 0) out.emplace_back(c, RatFun::t(k));
    for (const auto& [key, pc] : proper)
        if (pc.second != 0) out.emplace_back(pc.second, pc.first);
    return out;
}

// Exactness check helper used by tests.
inline RatFun atomSum(const std::vector<std::pair<Rational, RatFun>>& atoms)
{
    RatFun acc;
    for (const auto& [c, a] : atoms) acc += a.scaled(c);
    return acc;
}

} // namespace fibinv
