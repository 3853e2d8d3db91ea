#pragma once

#include "linalg.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fibinv {

// Action of the monodromy on H_1 of a closed oriented genus-g fiber.
struct MonodromyData {
    int genus = 0;
    IntMatrix action; // 2g x 2g, determinant +1

    void validate() const
    {
        if (genus < 0) throw ValidationError("[monodromy] genus must be nonnegative");
        if (action.rows() != action.cols())
            throw ValidationError("[monodromy] matrix must be square, got " + action.shape());
        if (action.rows() != static_cast<size_t>(2 * genus))
            throw ValidationError("[monodromy] matrix size " + action.shape() + " does not equal 2*genus = " +
                                  std::to_string(2 * genus));
        Integer d = determinant(action);
        if (d != 1)
            throw ValidationError("[monodromy] matrix determinant must be +1 for orientation-preserving monodromy, got " +
                                  d.str());
    }
};

// det(1 - tA) as a polynomial in t.
inline LaurentPoly reciprocalCharPoly(const IntMatrix& a)
{
    size_t n = a.rows();
    RatFunMatrix m(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            RatFun v = RatFun(Rational(-a(i, j))).shifted(1);
            if (i == j) v += RatFun::one();
            m(i, j) = v;
        }
    RatFun d = determinant(m);
    if (!d.isPolynomial()) throw ComputeError("det(1-tA) failed to be polynomial");
    return d.num();
}

// zeta = det(1 - tA) / (1-t)^2, with identity action on H_0 and H_2.
inline RatFun lefschetzZeta(const MonodromyData& m)
{
    m.validate();
    LaurentPoly oneMinusT = LaurentPoly::one() - LaurentPoly::t();
    return RatFun(reciprocalCharPoly(m.action), oneMinusT * oneMinusT);
}

// L(phi^n) = 2 - tr(A^n) for n = 1..nMax.
inline std::vector<Integer> lefschetzNumbers(const MonodromyData& m, int nMax)
{
    m.validate();
    if (nMax < 1) throw ValidationError("n_max must be >= 1");
    std::vector<Integer> out;
    IntMatrix p = IntMatrix::identity(m.action.rows());
    for (int n = 1; n <= nMax; ++n) {
        p = p * m.action;
        out.push_back(Integer(2) - p.trace());
    }
    return out;
}

// Normalizes p to q(t) = c * t^{-deg/2} * p(t) with q(1) = 1 and q(t^{-1}) = q(t).
// Shared by the Alexander polynomial and the minimal-polynomial normalization.
inline LaurentPoly reciprocalNormalize(const LaurentPoly& p, const std::string& what)
{
    if (p.isZero()) throw ComputeError(what + ": zero polynomial");
    int lo = p.minExp(), hi = p.maxExp();
    if ((lo + hi) % 2 != 0)
        throw ComputeError(what + ": not reciprocal (odd exponent span)");
    LaurentPoly centered = p.shifted(-(lo + hi) / 2);
    if (centered.inverted() != centered)
        throw ComputeError(what + ": monodromy char. polynomial not reciprocal");
    Rational atOne = centered.evaluate(1);
    if (atOne == 0) throw ComputeError(what + ": value at t=1 vanishes, normalization impossible");
    return centered.scaled(Rational(1) / atOne);
}

// Delta(t) = c t^{-g} det(1 - tA), Delta(1) = 1, Delta(t^{-1}) = Delta(t).
inline LaurentPoly alexanderPolynomial(const MonodromyData& m)
{
    m.validate();
    IntMatrix aMinusI = m.action - IntMatrix::identity(m.action.rows());
    if (determinant(aMinusI) == 0)
        throw ComputeError("b_1 > 1: Alexander normalization impossible (det(A - 1) = 0)");
    LaurentPoly p = reciprocalCharPoly(m.action);
    LaurentPoly delta = p.shifted(-m.genus);
    Rational atOne = delta.evaluate(1);
    if (atOne == 0) throw ComputeError("b_1 > 1: Alexander normalization impossible");
    delta = delta.scaled(Rational(1) / atOne);
    if (delta.inverted() != delta) throw ComputeError("monodromy char. polynomial not reciprocal");
    return delta;
}

// I_Delta(t) = (1+t)/(1-t) + t Delta'/Delta
inline RatFun iDelta(const LaurentPoly& delta)
{
    if (delta.isZero()) throw ComputeError("I_Delta of zero polynomial");
    RatFun frac(LaurentPoly::one() + LaurentPoly::t(), LaurentPoly::one() - LaurentPoly::t());
    return frac + RatFun(delta).logDerivative();
}

// Minimal polynomial of the monodromy action, normalized like Delta.
inline LaurentPoly deltaPolynomial(const MonodromyData& m)
{
    m.validate();
    LaurentPoly minp = minimalPolynomial(m.action);
    return reciprocalNormalize(minp, "delta normalization");
}

struct IdentityReport {
    bool zetaAlexanderHolds = false; // t z'/z - t D'/D == 2t/(1-t) + g
    bool iDeltaHolds = false;        // t z'/z - (g-1) == I_Delta
    RatFun lhs1, rhs1, lhs2, rhs2;

    std::string str() const
    {
        std::ostringstream os;
        os << "t*zeta'/zeta - t*Delta'/Delta = 2t/(1-t) + g: " << (zetaAlexanderHolds ? "holds" : "FAILS") << "\n";
        os << "t*zeta'/zeta - (g-1) = I_Delta(t): " << (iDeltaHolds ? "holds" : "FAILS");
        return os.str();
    }
};

inline IdentityReport zetaAlexanderIdentity(const MonodromyData& m)
{
    LaurentPoly delta = alexanderPolynomial(m);
    RatFun zeta = lefschetzZeta(m);
    RatFun zl = zeta.logDerivative();
    RatFun dl = RatFun(delta).logDerivative();
    IdentityReport rep;
    rep.lhs1 = zl - dl;
    rep.rhs1 = RatFun(LaurentPoly::monomial(2, 1), LaurentPoly::one() - LaurentPoly::t()) + RatFun(Rational(m.genus));
    rep.zetaAlexanderHolds = (rep.lhs1 == rep.rhs1);
    rep.lhs2 = zl - RatFun(Rational(m.genus - 1));
    rep.rhs2 = iDelta(delta);
    rep.iDeltaHolds = (rep.lhs2 == rep.rhs2);
    return rep;
}

// Finitely generated abelian group: free rank plus torsion factors > 1
// in divisibility order.
struct AbelianGroup {
    size_t freeRank = 0;
    std::vector<Integer> torsion;

    bool operator==(const AbelianGroup& o) const
    {
        return freeRank == o.freeRank && torsion == o.torsion;
    }

    std::string str() const
    {
        std::ostringstream os;
        bool first = true;
        if (freeRank == 1) {
            os << "Z";
            first = false;
        } else if (freeRank > 1) {
            os << "Z^" << freeRank;
            first = false;
        }
        for (const auto& d : torsion) {
            if (!first) os << " + ";
            os << "Z/" << d.str();
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }
};

// cokernel of an integer matrix (as a group: Z^{rows} / column span)
inline AbelianGroup cokernel(const IntMatrix& m)
{
    AbelianGroup g;
    if (m.rows() == 0) return g;
    if (m.cols() == 0) {
        g.freeRank = m.rows();
        return g;
    }
    std::vector<Integer> f = smithNormalForm(m);
    size_t rank = 0;
    for (const auto& d : f)
        if (d != 0) ++rank;
    g.freeRank = m.rows() - rank;
    for (const auto& d : f)
        if (d > 1) g.torsion.push_back(d);
    return g;
}

// H_1 of the mapping torus: Z + coker(A - 1)
inline AbelianGroup h1MappingTorus(const MonodromyData& m)
{
    m.validate();
    AbelianGroup g = cokernel(m.action - IntMatrix::identity(m.action.rows()));
    g.freeRank += 1;
    return g;
}

// Ordered product of transvections I + s*E_ij; validates the result is in SL.
inline IntMatrix monodromyFromSlides(size_t size, const std::vector<std::tuple<int, int, int>>& slides)
{
    IntMatrix prod = IntMatrix::identity(size);
    for (const auto& [i, j, s] : slides) {
        if (i < 1 || j < 1 || static_cast<size_t>(i) > size || static_cast<size_t>(j) > size || i == j)
            throw ValidationError("[monodromy] slide indices out of range: (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
        if (s != 1 && s != -1) throw ValidationError("[monodromy] slide sign must be +1 or -1");
        IntMatrix e = IntMatrix::identity(size);
        e(static_cast<size_t>(i - 1), static_cast<size_t>(j - 1)) = s;
        prod = prod * e;
    }
    if (determinant(prod) != 1)
        throw ValidationError("[monodromy] slide product has determinant != 1");
    return prod;
}

} // namespace fibinv
