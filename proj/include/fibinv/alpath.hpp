#pragma once

#include "monodromy.hpp"

#include <array>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fibinv {

// Intersections of the critical loci with the reference fiber.
struct FiberCriticalData {
    std::vector<std::pair<std::string, int>> points; // (id, Morse index 0/1/2)

    std::vector<std::string> warnings() const
    {
        std::vector<std::string> w;
        std::set<std::string> seen;
        std::array<int, 3> count{0, 0, 0};
        for (const auto& [id, idx] : points) {
            if (idx < 0 || idx > 2) throw ValidationError("[fiber] point " + id + " has index outside 0..2");
            if (!seen.insert(id).second) throw ValidationError("[fiber] duplicate point id " + id);
            ++count[static_cast<size_t>(idx)];
        }
        if (count[0] == 0) w.push_back("no index-0 point on the fiber");
        if (count[2] == 0) w.push_back("no index-2 point on the fiber");
        return w;
    }

    size_t countForIndex(int idx) const
    {
        size_t n = 0;
        for (const auto& [id, i] : points)
            if (i == idx) ++n;
        return n;
    }
};

// Signed counts of AL-paths between same-index critical points across one
// fundamental domain, blocked by Morse index.
struct TransitionMatrix {
    std::array<IntMatrix, 3> blocks;

    void validate() const
    {
        for (int i = 0; i < 3; ++i)
            if (!blocks[static_cast<size_t>(i)].isSquare())
                throw ValidationError("[transition] A" + std::to_string(i) + " must be square, got " +
                                      blocks[static_cast<size_t>(i)].shape());
    }

    void validateAgainst(const FiberCriticalData& fiber) const
    {
        validate();
        for (int i = 0; i < 3; ++i)
            if (blocks[static_cast<size_t>(i)].rows() != fiber.countForIndex(i))
                throw ValidationError("[transition] A" + std::to_string(i) + " size " +
                                      std::to_string(blocks[static_cast<size_t>(i)].rows()) +
                                      " does not match the [fiber] count " + std::to_string(fiber.countForIndex(i)) +
                                      " for index " + std::to_string(i));
    }
};

// (1 - tA)^{-1}: entry (j,i) generates AL-path continuations i -> j weighted
// by fiber crossings.
inline RatFunMatrix alTransfer(const IntMatrix& a)
{
    if (!a.isSquare()) throw ValidationError("transfer matrix must be square");
    size_t n = a.rows();
    RatFunMatrix m(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            RatFun v = RatFun(Rational(-a(i, j))).shifted(1);
            if (i == j) v += RatFun::one();
            m(i, j) = v;
        }
    return inverse(m);
}

// tA (1 - tA)^{-1}: paths with at least one crossing.
inline RatFunMatrix throughTransfer(const IntMatrix& a)
{
    RatFunMatrix inv = alTransfer(a);
    RatFunMatrix ta(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) ta(i, j) = RatFun(Rational(a(i, j))).shifted(1);
    return ta * inv;
}

// sum_i (-1)^i tr(tA_i (1 - tA_i)^{-1}); coefficient of t^n is
// sum_i (-1)^i tr(A_i^n).
inline RatFun closedOrbitSeries(const TransitionMatrix& td)
{
    td.validate();
    RatFun total;
    for (int i = 0; i < 3; ++i) {
        const IntMatrix& a = td.blocks[static_cast<size_t>(i)];
        if (a.rows() == 0) continue;
        RatFun tr = throughTransfer(a).trace();
        total = (i % 2 == 0) ? total + tr : total - tr;
    }
    return total;
}

// Coefficient of the bordism symbol V_ij is (1 - tA)^{-1}_{ji}; returned with
// entry (i,j) = coefficient of V_ij, i.e. the transposed transfer matrix.
inline RatFunMatrix vhatCoefficients(const IntMatrix& a) { return alTransfer(a).transposed(); }

// Two fiber Morse complexes (degrees 0,1,2) and the degree-preserving
// AL-path operator between them.
struct ALChainComplex {
    std::array<size_t, 3> sizesA{0, 0, 0}; // C_j(f_a)
    std::array<size_t, 3> sizesB{0, 0, 0}; // C_j(f_b)
    // boundary C_j -> C_{j-1} for j = 1, 2
    std::array<IntMatrix, 2> boundaryA;
    std::array<IntMatrix, 2> boundaryB;
    // phi1 per degree j = 0, 1, 2: C_j(f_a) -> C_j(f_b)
    std::array<IntMatrix, 3> phi1;

    void validateShapes() const
    {
        for (int j = 1; j <= 2; ++j) {
            const IntMatrix& da = boundaryA[static_cast<size_t>(j - 1)];
            if (da.rows() != sizesA[static_cast<size_t>(j - 1)] || da.cols() != sizesA[static_cast<size_t>(j)])
                throw ValidationError("[chain_complex] fa_d" + std::to_string(j) + " has shape " + da.shape() +
                                      ", expected " + std::to_string(sizesA[static_cast<size_t>(j - 1)]) + "x" +
                                      std::to_string(sizesA[static_cast<size_t>(j)]));
            const IntMatrix& db = boundaryB[static_cast<size_t>(j - 1)];
            if (db.rows() != sizesB[static_cast<size_t>(j - 1)] || db.cols() != sizesB[static_cast<size_t>(j)])
                throw ValidationError("[chain_complex] fb_d" + std::to_string(j) + " has shape " + db.shape() +
                                      ", expected " + std::to_string(sizesB[static_cast<size_t>(j - 1)]) + "x" +
                                      std::to_string(sizesB[static_cast<size_t>(j)]));
        }
        for (int j = 0; j <= 2; ++j) {
            const IntMatrix& p = phi1[static_cast<size_t>(j)];
            if (p.rows() != sizesB[static_cast<size_t>(j)] || p.cols() != sizesA[static_cast<size_t>(j)])
                throw ValidationError("[chain_complex] phi1_" + std::to_string(j) + " has shape " + p.shape() +
                                      ", expected " + std::to_string(sizesB[static_cast<size_t>(j)]) + "x" +
                                      std::to_string(sizesA[static_cast<size_t>(j)]));
        }
    }
};

struct ChainValidationReport {
    bool valid = true;
    std::string firstViolation; // empty when valid

    std::string str() const { return valid ? "chain data valid" : firstViolation; }
};

// Checks d^2 = 0 for both Morse complexes and the chain-map condition
// phi0(f_b) phi1 = phi1 phi0(f_a) degreewise.
inline ChainValidationReport validateChainComplex(const ALChainComplex& c)
{
    c.validateShapes();
    ChainValidationReport rep;
    auto report = [&](const std::string& what, const IntMatrix& m) {
        for (size_t i = 0; i < m.rows(); ++i)
            for (size_t j = 0; j < m.cols(); ++j)
                if (m(i, j) != 0) {
                    rep.valid = false;
                    rep.firstViolation = what + " violated at entry (" + std::to_string(i + 1) + "," +
                                         std::to_string(j + 1) + ") = " + m(i, j).str();
                    return true;
                }
        return false;
    };
    if (c.sizesA[0] && c.sizesA[2]) {
        if (report("fa boundary^2 = 0 (degree 2)", c.boundaryA[0] * c.boundaryA[1])) return rep;
    }
    if (c.sizesB[0] && c.sizesB[2]) {
        if (report("fb boundary^2 = 0 (degree 2)", c.boundaryB[0] * c.boundaryB[1])) return rep;
    }
    for (int j = 1; j <= 2; ++j) {
        IntMatrix lhs = c.boundaryB[static_cast<size_t>(j - 1)] * c.phi1[static_cast<size_t>(j)];
        IntMatrix rhs = c.phi1[static_cast<size_t>(j - 1)] * c.boundaryA[static_cast<size_t>(j - 1)];
        if (report("chain map condition (degree " + std::to_string(j) + ")", lhs - rhs)) return rep;
    }
    return rep;
}

// Boundaries of C_j = C_j(f_b) + C_{j-1}(f_a) in block form
// [[phi0(f_b), phi1], [0, -phi0(f_a)]], degrees 0..3.
struct ALBoundaries {
    std::array<size_t, 4> sizes{0, 0, 0, 0};
    std::array<IntMatrix, 3> d; // d[j]: C_{j+1} -> C_j
};

inline ALBoundaries alBoundary(const ALChainComplex& c)
{
    ChainValidationReport rep = validateChainComplex(c);
    if (!rep.valid) throw ComputeError("chain complex validation failed: " + rep.firstViolation);
    ALBoundaries out;
    for (int j = 0; j <= 3; ++j) {
        size_t b = (j <= 2) ? c.sizesB[static_cast<size_t>(j)] : 0;
        size_t a = (j >= 1) ? c.sizesA[static_cast<size_t>(j - 1)] : 0;
        out.sizes[static_cast<size_t>(j)] = b + a;
    }
    for (int j = 1; j <= 3; ++j) {
        size_t rows = out.sizes[static_cast<size_t>(j - 1)], cols = out.sizes[static_cast<size_t>(j)];
        IntMatrix m(rows, cols, Integer(0));
        size_t rb = (j - 1 <= 2) ? c.sizesB[static_cast<size_t>(j - 1)] : 0;
        size_t cb = (j <= 2) ? c.sizesB[static_cast<size_t>(j)] : 0;
        // top-left: fb boundary
        if (j <= 2) {
            const IntMatrix& db = c.boundaryB[static_cast<size_t>(j - 1)];
            for (size_t i = 0; i < db.rows(); ++i)
                for (size_t k = 0; k < db.cols(); ++k) m(i, k) = db(i, k);
        }
        // top-right: phi1 on C_{j-1}(f_a)
        {
            const IntMatrix& p = c.phi1[static_cast<size_t>(j - 1)];
            for (size_t i = 0; i < p.rows(); ++i)
                for (size_t k = 0; k < p.cols(); ++k) m(i, cb + k) = p(i, k);
        }
        // bottom-right: -fa boundary C_{j-1}(f_a) -> C_{j-2}(f_a)
        if (j >= 2) {
            const IntMatrix& da = c.boundaryA[static_cast<size_t>(j - 2)];
            for (size_t i = 0; i < da.rows(); ++i)
                for (size_t k = 0; k < da.cols(); ++k) m(rb + i, cb + k) = -da(i, k);
        }
        out.d[static_cast<size_t>(j - 1)] = m;
    }
    // d^2 = 0 by the chain-map condition; assert anyway
    for (int j = 1; j <= 2; ++j) {
        IntMatrix sq = out.d[static_cast<size_t>(j - 1)] * out.d[static_cast<size_t>(j)];
        if (!sq.isZero()) throw ComputeError("assembled boundary fails d^2 = 0 at degree " + std::to_string(j + 1));
    }
    return out;
}

// Integer homology of a finite complex given by consecutive boundaries.
// boundaries[j] : C_{j+1} -> C_j; sizes has one entry per degree.
inline std::vector<AbelianGroup> integerHomology(const std::vector<size_t>& sizes,
                                                 const std::vector<IntMatrix>& boundaries)
{
    size_t degrees = sizes.size();
    std::vector<size_t> rank(degrees + 1, 0);
    std::vector<std::vector<Integer>> torsion(degrees + 1);
    for (size_t j = 0; j + 1 < degrees; ++j) {
        const IntMatrix& d = boundaries[j];
        if (d.rows() != sizes[j] || d.cols() != sizes[j + 1])
            throw ValidationError("homology: boundary " + std::to_string(j) + " has shape " + d.shape());
        if (d.rows() == 0 || d.cols() == 0) continue;
        std::vector<Integer> f = smithNormalForm(d);
        for (const auto& v : f) {
            if (v != 0) ++rank[j + 1];
            if (v > 1) torsion[j + 1].push_back(v);
        }
    }
    std::vector<AbelianGroup> h(degrees);
    for (size_t j = 0; j < degrees; ++j) {
        AbelianGroup g;
        size_t imageFromAbove = (j + 1 < degrees) ? rank[j + 1] : 0;
        g.freeRank = sizes[j] - rank[j] - imageFromAbove;
        g.torsion = torsion[j + 1]; // invariant factors > 1 of the incoming boundary
        h[j] = g;
    }
    return h;
}

inline std::vector<AbelianGroup> alHomology(const ALChainComplex& c)
{
    ALBoundaries b = alBoundary(c);
    std::vector<size_t> sizes(b.sizes.begin(), b.sizes.end());
    std::vector<IntMatrix> ds(b.d.begin(), b.d.end());
    return integerHomology(sizes, ds);
}

} // namespace fibinv
