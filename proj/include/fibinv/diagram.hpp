#pragma once

#include "linalg.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fibinv {

// Labeled oriented trivalent graph. Vertices and edges are 0-based here;
// text interfaces are 1-based. A half-edge is encoded as 2*edge + end with
// end = 0 at the source, 1 at the target.
struct Diagram {
    int degree = 0;                           // n: 2n vertices, 3n edges
    std::vector<std::pair<int, int>> edges;   // (source vertex, target vertex)
    std::vector<std::array<int, 3>> cyclic;   // per-vertex cyclic order of half-edges

    int numVertices() const { return 2 * degree; }
    int numEdges() const { return 3 * degree; }

    static int halfEdge(int edge, int end) { return 2 * edge + end; }
    static int halfEdgeIndex(int h) { return h / 2; }
    static int halfEdgeEnd(int h) { return h % 2; }

    int halfEdgeVertex(int h) const
    {
        const auto& e = edges[static_cast<size_t>(halfEdgeIndex(h))];
        return halfEdgeEnd(h) == 0 ? e.first : e.second;
    }

    bool isSelfLoop(int e) const { return edges[static_cast<size_t>(e)].first == edges[static_cast<size_t>(e)].second; }

    void validate() const
    {
        if (degree < 1) throw ValidationError("diagram degree must be >= 1");
        if (edges.size() != static_cast<size_t>(numEdges()))
            throw ValidationError("diagram needs " + std::to_string(numEdges()) + " edges, got " +
                                  std::to_string(edges.size()));
        if (cyclic.size() != static_cast<size_t>(numVertices()))
            throw ValidationError("diagram needs cyclic data for " + std::to_string(numVertices()) + " vertices");
        std::vector<std::vector<int>> incident(static_cast<size_t>(numVertices()));
        for (int e = 0; e < numEdges(); ++e) {
            auto [a, b] = edges[static_cast<size_t>(e)];
            if (a < 0 || b < 0 || a >= numVertices() || b >= numVertices())
                throw ValidationError("edge " + std::to_string(e + 1) + " endpoint out of range");
            incident[static_cast<size_t>(a)].push_back(halfEdge(e, 0));
            incident[static_cast<size_t>(b)].push_back(halfEdge(e, 1));
        }
        for (int v = 0; v < numVertices(); ++v) {
            if (incident[static_cast<size_t>(v)].size() != 3)
                throw ValidationError("vertex " + std::to_string(v + 1) + " is not trivalent");
            std::array<int, 3> want{};
            std::copy(incident[static_cast<size_t>(v)].begin(), incident[static_cast<size_t>(v)].end(), want.begin());
            std::sort(want.begin(), want.end());
            std::array<int, 3> have = cyclic[static_cast<size_t>(v)];
            std::sort(have.begin(), have.end());
            if (want != have)
                throw ValidationError("cyclic order at vertex " + std::to_string(v + 1) +
                                      " does not list its incident half-edges");
        }
        // connectivity
        std::vector<int> comp(static_cast<size_t>(numVertices()), -1);
        std::vector<int> stack{0};
        comp[0] = 0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int h : cyclic[static_cast<size_t>(v)]) {
                int e = halfEdgeIndex(h);
                auto [a, b] = edges[static_cast<size_t>(e)];
                for (int w : {a, b})
                    if (comp[static_cast<size_t>(w)] < 0) {
                        comp[static_cast<size_t>(w)] = 0;
                        stack.push_back(w);
                    }
            }
        }
        for (int v = 0; v < numVertices(); ++v)
            if (comp[static_cast<size_t>(v)] < 0) throw ValidationError("diagram is not connected");
    }

    // The two-vertex graph with three parallel edges, all oriented the same way.
    static Diagram theta()
    {
        Diagram d;
        d.degree = 1;
        d.edges = {{0, 1}, {0, 1}, {0, 1}};
        d.cyclic = {{0, 2, 4}, {1, 3, 5}};
        return d;
    }
};

using Coloring = std::vector<RatFun>;

struct DiagramTerm {
    Rational coeff;
    Diagram diagram;
    Coloring colors;
};

// Maximum vertex count for the brute-force automorphism search.
inline constexpr int kMaxNormalizeVertices = 6;

// Sign attached to the edge orientation-reversal relation: reversing an edge
// negates the class and substitutes t -> t^{-1} in its color. The sign is
// pinned by the requirement that the two transfer-matrix tensor terms of the
// two-surgery pairing merge with coefficient 2 rather than cancel.
inline constexpr int kReversalSign = -1;

struct NormalizeStats {
    long holonomyReductions = 0;
    long automorphismKills = 0;
    long cutEdgeKills = 0;
    long termsMerged = 0;
    long zeroColorDropped = 0;
};

namespace detail {

// scalar * t^shift * base with base's numerator having trailing coefficient 1
// at exponent 0 (and base's denominator with constant term 1).
struct SplitColor {
    Rational scalar;
    int shift = 0;
    RatFun base;
};

inline SplitColor splitColor(const RatFun& f)
{
    SplitColor s;
    if (f.isZero()) throw ComputeError("splitColor on zero");
    s.shift = f.num().minExp();
    s.scalar = f.num().trailingCoeff();
    s.base = f.shifted(-s.shift).scaled(Rational(1) / s.scalar);
    return s;
}

struct CanonTerm {
    Rational coeff;
    Diagram diagram; // cyclic orders sorted ascending per vertex
    Coloring colors;
    std::string key; // encoding of (diagram, colors)
};

inline std::string encodeCandidate(const std::vector<std::pair<int, int>>& edges,
                                   const std::vector<Integer>& shifts,
                                   const std::vector<std::string>& baseStrs)
{
    std::ostringstream os;
    for (size_t e = 0; e < edges.size(); ++e)
        os << edges[e].first << ">" << edges[e].second << "|" << shifts[e].str() << "|" << baseStrs[e] << ";";
    return os.str();
}

inline int parity3(const std::array<int, 3>& transported)
{
    std::array<int, 3> sorted = transported;
    std::sort(sorted.begin(), sorted.end());
    // permutation taking sorted -> transported
    int inversions = 0;
    std::array<int, 3> pos{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (transported[static_cast<size_t>(i)] == sorted[static_cast<size_t>(j)]) pos[static_cast<size_t>(i)] = j;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (pos[static_cast<size_t>(i)] > pos[static_cast<size_t>(j)]) ++inversions;
    return (inversions % 2 == 0) ? 1 : -1;
}

// Signed incidence lattice of coboundaries: column per vertex, row per edge.
inline ColumnLattice coboundaryLattice(const std::vector<std::pair<int, int>>& edges, int numVertices)
{
    IntMatrix d(edges.size(), static_cast<size_t>(numVertices), Integer(0));
    for (size_t e = 0; e < edges.size(); ++e) {
        auto [a, b] = edges[e];
        if (a == b) continue;
        d(e, static_cast<size_t>(b)) += 1;
        d(e, static_cast<size_t>(a)) -= 1;
    }
    return columnHermite(d);
}

// All permutations of indices within groups of equal keys.
inline void forEachGroupedPermutation(const std::vector<std::string>& keys,
                                      const std::function<void(const std::vector<int>&)>& fn)
{
    size_t n = keys.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return keys[static_cast<size_t>(a)] < keys[static_cast<size_t>(b)]; });
    // group boundaries
    std::vector<std::pair<size_t, size_t>> groups;
    size_t start = 0;
    for (size_t i = 1; i <= n; ++i) {
        if (i == n || keys[static_cast<size_t>(order[i])] != keys[static_cast<size_t>(order[start])]) {
            groups.emplace_back(start, i);
            start = i;
        }
    }
    std::vector<int> perm = order;
    std::function<void(size_t)> rec = [&](size_t gi) {
        if (gi == groups.size()) {
            fn(perm);
            return;
        }
        auto [lo, hi] = groups[gi];
        std::vector<int> block(perm.begin() + static_cast<long>(lo), perm.begin() + static_cast<long>(hi));
        std::sort(block.begin(), block.end());
        do {
            std::copy(block.begin(), block.end(), perm.begin() + static_cast<long>(lo));
            rec(gi + 1);
        } while (std::next_permutation(block.begin(), block.end()));
    };
    rec(0);
}

// Canonical form of a single term, or nullopt when the term is zero
// (zero color, or an automorphism identifies it with its own negative).
inline std::optional<CanonTerm> normalizeTerm(const DiagramTerm& term, NormalizeStats* stats = nullptr)
{
    const Diagram& d = term.diagram;
    d.validate();
    if (d.numVertices() > kMaxNormalizeVertices)
        throw ComputeError("degree too large for automorphism normalization (max " +
                           std::to_string(kMaxNormalizeVertices / 2) + ")");
    if (term.colors.size() != static_cast<size_t>(d.numEdges()))
        throw ValidationError("coloring arity mismatch: " + std::to_string(term.colors.size()) + " colors for " +
                              std::to_string(d.numEdges()) + " edges");
    if (term.coeff == 0) return std::nullopt;
    for (const auto& c : term.colors)
        if (c.isZero()) {
            if (stats) ++stats->zeroColorDropped;
            return std::nullopt;
        }

    int nv = d.numVertices(), ne = d.numEdges();

    // A class whose graph has a cut edge vanishes: the holonomy move at one
    // side multiplies the bridge color by t leaving everything else alone,
    // so by linearity the bridge color matters only modulo (1 - t) Q(t),
    // which is all of Q(t).
    for (int e = 0; e < ne; ++e) {
        if (d.isSelfLoop(e)) continue;
        std::vector<int> comp(static_cast<size_t>(nv), -1);
        std::vector<int> stack{d.edges[static_cast<size_t>(e)].first};
        comp[static_cast<size_t>(stack[0])] = 0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int e2 = 0; e2 < ne; ++e2) {
                if (e2 == e) continue;
                auto [a, b] = d.edges[static_cast<size_t>(e2)];
                if (a != v && b != v) continue;
                for (int w : {a, b})
                    if (comp[static_cast<size_t>(w)] < 0) {
                        comp[static_cast<size_t>(w)] = 0;
                        stack.push_back(w);
                    }
            }
        }
        if (comp[static_cast<size_t>(d.edges[static_cast<size_t>(e)].second)] < 0) {
            if (stats) ++stats->cutEdgeKills;
            return std::nullopt;
        }
    }

    Rational scalar = term.coeff;
    std::vector<int> shift0(static_cast<size_t>(ne));
    std::vector<RatFun> base0(static_cast<size_t>(ne));
    std::vector<RatFun> baseBar(static_cast<size_t>(ne));
    std::vector<int> shiftBar(static_cast<size_t>(ne));
    std::vector<Rational> scalarBar(static_cast<size_t>(ne));
    std::vector<std::string> baseStr0(static_cast<size_t>(ne)), baseStrBar(static_cast<size_t>(ne));
    for (int e = 0; e < ne; ++e) {
        SplitColor s = splitColor(term.colors[static_cast<size_t>(e)]);
        scalar *= s.scalar;
        shift0[static_cast<size_t>(e)] = s.shift;
        base0[static_cast<size_t>(e)] = s.base;
        baseStr0[static_cast<size_t>(e)] = s.base.str();
        SplitColor sb = splitColor(s.base.bar().shifted(-s.shift));
        scalarBar[static_cast<size_t>(e)] = sb.scalar;
        shiftBar[static_cast<size_t>(e)] = sb.shift;
        baseBar[static_cast<size_t>(e)] = sb.base;
        baseStrBar[static_cast<size_t>(e)] = sb.base.str();
    }
    if (scalar == 0) return std::nullopt;

    // candidate search state; a presentation reached with two different
    // factors forces the class to zero
    std::map<std::string, Rational> seenFactors;
    bool dead = false;
    std::optional<std::string> bestKey;
    std::vector<std::pair<int, int>> bestEdges;
    std::vector<Integer> bestShifts;
    std::vector<RatFun> bestBases;
    Rational bestFactor = 1;

    std::vector<int> loops;
    for (int e = 0; e < ne; ++e)
        if (d.isSelfLoop(e)) loops.push_back(e);

    std::vector<int> vperm(static_cast<size_t>(nv));
    std::iota(vperm.begin(), vperm.end(), 0);
    do {
        for (unsigned long flipMask = 0; flipMask < (1ul << loops.size()); ++flipMask) {
            // reversal flags and mapped endpoints per original edge
            std::vector<bool> rev(static_cast<size_t>(ne), false);
            std::vector<std::pair<int, int>> mapped(static_cast<size_t>(ne));
            int reversals = 0;
            for (int e = 0; e < ne; ++e) {
                int a = vperm[static_cast<size_t>(d.edges[static_cast<size_t>(e)].first)];
                int b = vperm[static_cast<size_t>(d.edges[static_cast<size_t>(e)].second)];
                bool flip = false;
                if (a > b)
                    flip = true;
                else if (a == b) {
                    size_t li = static_cast<size_t>(std::find(loops.begin(), loops.end(), e) - loops.begin());
                    flip = (flipMask >> li) & 1u;
                }
                if (flip) {
                    std::swap(a, b);
                    rev[static_cast<size_t>(e)] = true;
                    ++reversals;
                }
                mapped[static_cast<size_t>(e)] = {a, b};
            }

            // sort keys ignore the monomial exponent; ties are enumerated
            std::vector<std::string> sortKeys(static_cast<size_t>(ne));
            for (int e = 0; e < ne; ++e) {
                const std::string& bs = rev[static_cast<size_t>(e)] ? baseStrBar[static_cast<size_t>(e)] : baseStr0[static_cast<size_t>(e)];
                sortKeys[static_cast<size_t>(e)] = std::to_string(mapped[static_cast<size_t>(e)].first) + ">" +
                                                   std::to_string(mapped[static_cast<size_t>(e)].second) + "|" + bs;
            }

            forEachGroupedPermutation(sortKeys, [&](const std::vector<int>& order) {
                // order[newLabel] = original edge index
                std::vector<int> newLabel(static_cast<size_t>(ne));
                for (int nl = 0; nl < ne; ++nl) newLabel[static_cast<size_t>(order[static_cast<size_t>(nl)])] = nl;

                std::vector<std::pair<int, int>> edgesOut(static_cast<size_t>(ne));
                std::vector<Integer> shifts(static_cast<size_t>(ne));
                std::vector<RatFun> bases(static_cast<size_t>(ne));
                std::vector<std::string> baseStrs(static_cast<size_t>(ne));
                Rational factor = 1;
                for (int e = 0; e < ne; ++e) {
                    int nl = newLabel[static_cast<size_t>(e)];
                    edgesOut[static_cast<size_t>(nl)] = mapped[static_cast<size_t>(e)];
                    if (rev[static_cast<size_t>(e)]) {
                        shifts[static_cast<size_t>(nl)] = shiftBar[static_cast<size_t>(e)];
                        bases[static_cast<size_t>(nl)] = baseBar[static_cast<size_t>(e)];
                        baseStrs[static_cast<size_t>(nl)] = baseStrBar[static_cast<size_t>(e)];
                        factor *= scalarBar[static_cast<size_t>(e)];
                    } else {
                        shifts[static_cast<size_t>(nl)] = shift0[static_cast<size_t>(e)];
                        bases[static_cast<size_t>(nl)] = base0[static_cast<size_t>(e)];
                        baseStrs[static_cast<size_t>(nl)] = baseStr0[static_cast<size_t>(e)];
                    }
                }
                if (reversals % 2 != 0) factor *= kReversalSign;

                // transported cyclic orders
                for (int v = 0; v < nv; ++v) {
                    std::array<int, 3> transported{};
                    for (int i = 0; i < 3; ++i) {
                        int h = d.cyclic[static_cast<size_t>(v)][static_cast<size_t>(i)];
                        int e = Diagram::halfEdgeIndex(h);
                        int end = Diagram::halfEdgeEnd(h);
                        if (rev[static_cast<size_t>(e)]) end ^= 1;
                        transported[static_cast<size_t>(i)] = Diagram::halfEdge(newLabel[static_cast<size_t>(e)], end);
                    }
                    factor *= parity3(transported);
                }

                // holonomy reduction of the monomial exponents
                ColumnLattice lat = coboundaryLattice(edgesOut, nv);
                std::vector<Integer> reduced = latticeReduce(lat, shifts);
                if (stats && reduced != shifts) ++stats->holonomyReductions;

                std::string key = encodeCandidate(edgesOut, reduced, baseStrs);
                auto it = seenFactors.find(key);
                if (it == seenFactors.end())
                    seenFactors.emplace(key, factor);
                else if (it->second != factor)
                    dead = true;

                if (!bestKey || key < *bestKey) {
                    bestKey = key;
                    bestEdges = edgesOut;
                    bestShifts = reduced;
                    bestBases = bases;
                    bestFactor = factor;
                }
            });
        }
    } while (std::next_permutation(vperm.begin(), vperm.end()));

    if (dead) {
        if (stats) ++stats->automorphismKills;
        return std::nullopt;
    }

    // input class = factor * (candidate presentation)
    CanonTerm out;
    out.coeff = scalar * bestFactor;
    out.key = *bestKey;
    out.diagram.degree = d.degree;
    out.diagram.edges = bestEdges;
    out.diagram.cyclic.assign(static_cast<size_t>(nv), {0, 0, 0});
    {
        std::vector<std::vector<int>> inc(static_cast<size_t>(nv));
        for (int e = 0; e < ne; ++e) {
            inc[static_cast<size_t>(bestEdges[static_cast<size_t>(e)].first)].push_back(Diagram::halfEdge(e, 0));
            inc[static_cast<size_t>(bestEdges[static_cast<size_t>(e)].second)].push_back(Diagram::halfEdge(e, 1));
        }
        for (int v = 0; v < nv; ++v) {
            std::sort(inc[static_cast<size_t>(v)].begin(), inc[static_cast<size_t>(v)].end());
            std::copy(inc[static_cast<size_t>(v)].begin(), inc[static_cast<size_t>(v)].end(),
                      out.diagram.cyclic[static_cast<size_t>(v)].begin());
        }
    }
    out.colors.resize(static_cast<size_t>(ne));
    for (int e = 0; e < ne; ++e) {
        if (bestShifts[static_cast<size_t>(e)] < -1000000 || bestShifts[static_cast<size_t>(e)] > 1000000)
            throw ComputeError("holonomy exponent out of range");
        out.colors[static_cast<size_t>(e)] =
            bestBases[static_cast<size_t>(e)].shifted(static_cast<int>(bestShifts[static_cast<size_t>(e)]));
    }
    return out;
}

} // namespace detail

// Q-linear combination of colored diagrams, kept in canonical normalized form.
class DiagramSum {
public:
    DiagramSum() = default;

    static DiagramSum fromTerms(std::vector<DiagramTerm> terms, NormalizeStats* stats = nullptr)
    {
        DiagramSum s;
        std::map<std::string, detail::CanonTerm> acc;
        for (const auto& t : terms) {
            auto canon = detail::normalizeTerm(t, stats);
            if (!canon) continue;
            auto it = acc.find(canon->key);
            if (it == acc.end()) {
                acc.emplace(canon->key, *canon);
            } else {
                it->second.coeff += canon->coeff;
                if (stats) ++stats->termsMerged;
            }
        }
        for (auto& [k, t] : acc)
            if (t.coeff != 0) s.terms_.push_back(std::move(t));
        return s;
    }

    static DiagramSum zero() { return DiagramSum(); }

    static DiagramSum single(const Rational& coeff, const Diagram& d, const Coloring& colors,
                             NormalizeStats* stats = nullptr)
    {
        return fromTerms({DiagramTerm{coeff, d, colors}}, stats);
    }

    bool isZero() const { return terms_.empty(); }
    size_t termCount() const { return terms_.size(); }
    const std::vector<detail::CanonTerm>& terms() const { return terms_; }

    int degree() const
    {
        if (terms_.empty()) return 0;
        return terms_.front().diagram.degree;
    }

    DiagramSum scaled(const Rational& c) const
    {
        DiagramSum s = *this;
        if (c == 0) return zero();
        for (auto& t : s.terms_) t.coeff *= c;
        return s;
    }

    friend DiagramSum operator+(const DiagramSum& a, const DiagramSum& b)
    {
        DiagramSum s;
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        while (ia != a.terms_.end() || ib != b.terms_.end()) {
            if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->key < ib->key)) {
                s.terms_.push_back(*ia++);
            } else if (ia == a.terms_.end() || ib->key < ia->key) {
                s.terms_.push_back(*ib++);
            } else {
                detail::CanonTerm t = *ia;
                t.coeff += ib->coeff;
                if (t.coeff != 0) s.terms_.push_back(std::move(t));
                ++ia;
                ++ib;
            }
        }
        return s;
    }

    friend DiagramSum operator-(const DiagramSum& a, const DiagramSum& b) { return a + b.scaled(-1); }

    bool operator==(const DiagramSum& o) const
    {
        if (terms_.size() != o.terms_.size()) return false;
        for (size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].key != o.terms_[i].key || terms_[i].coeff != o.terms_[i].coeff) return false;
        return true;
    }

    std::string str() const
    {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& t : terms_) {
            if (!first) os << " + ";
            first = false;
            Rational c = t.coeff;
            os << to_string(c) << " * " << shapeName(t.diagram) << "(";
            for (size_t e = 0; e < t.colors.size(); ++e) {
                if (e) os << ", ";
                os << t.colors[e].str();
            }
            os << ")";
        }
        return os.str();
    }

    static std::string shapeName(const Diagram& d)
    {
        if (d.degree == 1) {
            if (d.edges == std::vector<std::pair<int, int>>{{0, 1}, {0, 1}, {0, 1}}) return "Theta";
            if (d.edges == std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 1}}) return "Dumbbell";
        }
        std::ostringstream os;
        os << "Graph{v=" << d.numVertices() << "; ";
        for (size_t e = 0; e < d.edges.size(); ++e) {
            if (e) os << ", ";
            os << (d.edges[e].first + 1) << ">" << (d.edges[e].second + 1);
        }
        os << "}";
        return os.str();
    }

private:
    std::vector<detail::CanonTerm> terms_; // sorted by key, nonzero coeffs
};

// Tr_Gamma: place the given rational functions on the edges of the graph.
inline DiagramSum trace(const Diagram& g, const Coloring& colors, NormalizeStats* stats = nullptr)
{
    if (colors.size() != static_cast<size_t>(g.numEdges()))
        throw ValidationError("trace: expected " + std::to_string(g.numEdges()) + " colors, got " +
                              std::to_string(colors.size()));
    return DiagramSum::single(1, g, colors, stats);
}

// Holonomy move at one vertex: multiplies every incident edge color by
// t^{k * eps}, eps = +1 toward the vertex and -1 away; self-loops net t^0.
inline DiagramTerm applyHolonomy(DiagramTerm term, int vertex, int k)
{
    term.diagram.validate();
    if (vertex < 0 || vertex >= term.diagram.numVertices()) throw ValidationError("holonomy vertex out of range");
    for (size_t e = 0; e < term.colors.size(); ++e) {
        int s = 0;
        if (term.diagram.edges[e].second == vertex) s += k;
        if (term.diagram.edges[e].first == vertex) s -= k;
        if (s != 0) term.colors[e] = term.colors[e].shifted(s);
    }
    return term;
}

// Orientation-reversal relation on one edge: flips the arrow, substitutes
// t -> t^{-1} in its color and negates the coefficient.
inline DiagramTerm reverseEdge(DiagramTerm term, int edge)
{
    term.diagram.validate();
    if (edge < 0 || edge >= term.diagram.numEdges()) throw ValidationError("edge index out of range");
    auto& e = term.diagram.edges[static_cast<size_t>(edge)];
    std::swap(e.first, e.second);
    for (auto& cyc : term.diagram.cyclic)
        for (auto& h : cyc)
            if (Diagram::halfEdgeIndex(h) == edge) h = Diagram::halfEdge(edge, Diagram::halfEdgeEnd(h) ^ 1);
    term.colors[static_cast<size_t>(edge)] = term.colors[static_cast<size_t>(edge)].bar();
    term.coeff *= kReversalSign;
    return term;
}

// Class of a monomial coloring in H^1(graph; Z) = Z^E / coboundaries,
// as the canonical lattice-reduced exponent vector.
inline std::vector<Integer> monomialClass(const Diagram& g, const std::vector<Integer>& exps)
{
    g.validate();
    if (exps.size() != g.edges.size()) throw ValidationError("monomial class: exponent arity mismatch");
    ColumnLattice lat = detail::coboundaryLattice(g.edges, g.numVertices());
    return latticeReduce(lat, exps);
}

// ---- exact model for degree-1 classes ----
//
// After normalization, every surviving degree-1 diagram is the two-vertex
// triple edge (cut edges vanish). Its coloring classes embed into rational
// functions on the surface t1 t2 t3 = 1: a colored triple edge maps to
// c1(x) c2(y) c3(1/(xy)), which is invariant under the holonomy moves. The
// residual finite symmetry (edge permutations, and the vertex swap combined
// with reversing all edges) is handled by signed averaging, and function
// equality is decided exactly on an integer grid larger than the degree
// bound of the cleared numerator.

namespace detail {

inline bool isThetaShape(const Diagram& d)
{
    return d.degree == 1 && d.edges == std::vector<std::pair<int, int>>{{0, 1}, {0, 1}, {0, 1}};
}

inline long colorSpan(const RatFun& c)
{
    long span = c.den().isZero() ? 0 : c.den().maxExp();
    if (!c.num().isZero()) span += std::abs(c.num().minExp()) + std::abs(c.num().maxExp());
    return span + 1;
}

// bound on |r| and |1/r| for every root r of the denominator (Cauchy bound
// after clearing coefficient denominators; the reversed polynomial has the
// same coefficient heights)
inline Integer rootBound(const RatFun& c)
{
    Integer l = 1;
    for (const auto& [e, coeff] : c.den().terms()) l = lcm(l, rat_den(coeff));
    Integer m = 1;
    for (const auto& [e, coeff] : c.den().terms()) {
        Integer v = abs(rat_num(coeff)) * (l / rat_den(coeff));
        if (v > m) m = v;
    }
    return m + 2;
}

struct ThetaGrid {
    std::vector<Rational> xs, ys;
};

// common evaluation grid for a family of triple-edge sums
inline ThetaGrid thetaGrid(const std::vector<const DiagramSum*>& sums)
{
    long bound = 4;
    Integer roots = 2;
    for (const DiagramSum* s : sums)
        for (const auto& t : s->terms())
            for (const auto& c : t.colors) {
                bound += 2 * colorSpan(c);
                Integer rb = rootBound(c);
                if (rb > roots) roots = rb;
            }
    auto clean = [&](const Rational& v) {
        for (const DiagramSum* s : sums)
            for (const auto& t : s->terms())
                for (const auto& c : t.colors) {
                    if (c.den().evaluate(v) == 0) return false;
                    if (c.den().evaluate(Rational(1) / v) == 0) return false;
                }
        return true;
    };
    ThetaGrid g;
    for (Integer x = 2; static_cast<long>(g.xs.size()) <= bound; ++x)
        if (clean(Rational(x))) g.xs.push_back(Rational(x));
    Integer y0 = roots * rat_num(g.xs.back()) + 2;
    for (Integer y = y0; static_cast<long>(g.ys.size()) <= bound; ++y)
        if (clean(Rational(y))) g.ys.push_back(Rational(y));
    return g;
}

// signed symmetrization of a triple-edge sum, evaluated on the grid
inline std::vector<Rational> thetaValues(const DiagramSum& s, const ThetaGrid& g)
{
    static const int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    std::vector<Rational> out;
    out.reserve(g.xs.size() * g.ys.size());
    for (const Rational& x : g.xs)
        for (const Rational& y : g.ys) {
            Rational z = Rational(1) / (x * y);
            Rational total = 0;
            for (const auto& t : s.terms()) {
                Rational acc = 0;
                for (const auto& perm : kPerms) {
                    acc += t.colors[static_cast<size_t>(perm[0])].evaluate(x) *
                           t.colors[static_cast<size_t>(perm[1])].evaluate(y) *
                           t.colors[static_cast<size_t>(perm[2])].evaluate(z);
                    acc -= t.colors[static_cast<size_t>(perm[0])].evaluate(Rational(1) / x) *
                           t.colors[static_cast<size_t>(perm[1])].evaluate(Rational(1) / y) *
                           t.colors[static_cast<size_t>(perm[2])].evaluate(Rational(1) / z);
                }
                total += t.coeff * acc;
            }
            out.push_back(total);
        }
    return out;
}

inline bool allThetaShaped(const DiagramSum& s)
{
    for (const auto& t : s.terms())
        if (!isThetaShape(t.diagram)) return false;
    return true;
}

inline bool allZero(const std::vector<Rational>& v)
{
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

} // namespace detail

// ---- equality modulo relations ----

enum class Verdict { Equal, NotEqual, Unknown };

inline const char* verdictName(Verdict v)
{
    switch (v) {
        case Verdict::Equal: return "equal";
        case Verdict::NotEqual: return "not-equal";
        default: return "unknown";
    }
}

struct EqualOptions {
    int holonomyWindow = 3;
    bool useIhx = true;
};

namespace detail {

// The three rotational resolutions through a non-loop edge; their sum is the
// relation vector. Legs are the four non-middle half-edges at the endpoints.
inline std::vector<DiagramTerm> ihxTriple(const Diagram& g, const Coloring& colors, int middle)
{
    auto [x, y] = g.edges[static_cast<size_t>(middle)];
    auto rotateFirst = [&](int v, int h) {
        std::array<int, 3> c = g.cyclic[static_cast<size_t>(v)];
        while (c[0] != h) std::rotate(c.begin(), c.begin() + 1, c.end());
        return c;
    };
    std::array<int, 3> cx = rotateFirst(x, Diagram::halfEdge(middle, 0));
    std::array<int, 3> cy = rotateFirst(y, Diagram::halfEdge(middle, 1));
    int p = cx[1], q = cx[2], r = cy[1], s = cy[2];

    auto build = [&](int qNew, int rNew, std::array<int, 3> cxNew, std::array<int, 3> cyNew) {
        Diagram d = g;
        auto moveTo = [&](int h, int v) {
            int e = Diagram::halfEdgeIndex(h);
            if (Diagram::halfEdgeEnd(h) == 0)
                d.edges[static_cast<size_t>(e)].first = v;
            else
                d.edges[static_cast<size_t>(e)].second = v;
        };
        moveTo(qNew, y); // the half-edge leaving x
        moveTo(rNew, x); // the half-edge arriving at x
        d.cyclic[static_cast<size_t>(x)] = cxNew;
        d.cyclic[static_cast<size_t>(y)] = cyNew;
        return DiagramTerm{Rational(1), d, colors};
    };

    int m0 = Diagram::halfEdge(middle, 0), m1 = Diagram::halfEdge(middle, 1);
    std::vector<DiagramTerm> out;
    out.push_back(DiagramTerm{Rational(1), g, colors});          // (p,q | r,s)
    out.push_back(build(q, r, {m0, p, r}, {m1, s, q}));          // (p,r | s,q)
    out.push_back(build(q, s, {m0, p, s}, {m1, q, r}));          // (p,s | q,r)
    return out;
}

struct IhxGenerators {
    std::vector<DiagramSum> gens;
    bool windowLimited = false;
    bool nonMonomialEdge = false;
};

inline IhxGenerators ihxGenerators(const DiagramSum& s, int window)
{
    IhxGenerators out;
    std::set<std::string> seen;
    for (const auto& term : s.terms()) {
        const Diagram& g = term.diagram;
        for (int m = 0; m < g.numEdges(); ++m) {
            if (g.isSelfLoop(m)) continue;
            SplitColor sc = splitColor(term.colors[static_cast<size_t>(m)]);
            if (!sc.base.isOne()) {
                out.nonMonomialEdge = true;
                continue;
            }
            int k = sc.shift;
            // shift the class at the middle edge's endpoints so the middle
            // color becomes 1: pairs (ex, ey) with k + ey - ex = 0
            bool producedAny = false;
            for (int ex = -window; ex <= window; ++ex) {
                int ey = ex - k;
                if (ey < -window || ey > window) continue;
                DiagramTerm shifted{Rational(1), g, term.colors};
                auto [x, y] = g.edges[static_cast<size_t>(m)];
                if (ex != 0) shifted = applyHolonomy(std::move(shifted), x, ex);
                if (ey != 0) shifted = applyHolonomy(std::move(shifted), y, ey);
                producedAny = true;
                auto triple = ihxTriple(shifted.diagram, shifted.colors, m);
                DiagramSum gen = DiagramSum::fromTerms(triple);
                if (gen.isZero()) continue;
                std::ostringstream keyos;
                for (const auto& t : gen.terms()) keyos << to_string(t.coeff) << "@" << t.key << "#";
                if (seen.insert(keyos.str()).second) out.gens.push_back(std::move(gen));
            }
            if (!producedAny) out.windowLimited = true;
        }
    }
    return out;
}

// membership of target in the Q-span of gens, by row reduction on the
// coordinates given by canonical term keys
inline bool inSpan(const DiagramSum& target, const std::vector<DiagramSum>& gens)
{
    if (target.isZero()) return true;
    if (gens.empty()) return false;
    std::map<std::string, size_t> coord;
    auto touch = [&](const DiagramSum& s) {
        for (const auto& t : s.terms())
            if (!coord.count(t.key)) {
                size_t next = coord.size();
                coord.emplace(t.key, next);
            }
    };
    touch(target);
    for (const auto& g : gens) touch(g);
    size_t dim = coord.size();
    RatMatrix sys(dim, gens.size() + 1, Rational(0));
    for (size_t j = 0; j < gens.size(); ++j)
        for (const auto& t : gens[j].terms()) sys(coord[t.key], j) = t.coeff;
    for (const auto& t : target.terms()) sys(coord[t.key], gens.size()) = t.coeff;
    std::vector<size_t> pivots;
    rowReduce(sys, &pivots);
    for (size_t c : pivots)
        if (c == gens.size()) return false;
    return true;
}

} // namespace detail

struct EqualReport {
    Verdict verdict = Verdict::Unknown;
    bool usedIhx = false;
    size_t generatorCount = 0;
    int holonomyWindow = 0;
};

namespace detail {

inline bool valuesInSpan(const std::vector<Rational>& target, const std::vector<std::vector<Rational>>& gens)
{
    if (allZero(target)) return true;
    if (gens.empty()) return false;
    size_t dim = target.size();
    RatMatrix sys(dim, gens.size() + 1, Rational(0));
    for (size_t j = 0; j < gens.size(); ++j)
        for (size_t i = 0; i < dim; ++i) sys(i, j) = gens[j][i];
    for (size_t i = 0; i < dim; ++i) sys(i, gens.size()) = target[i];
    std::vector<size_t> pivots;
    rowReduce(sys, &pivots);
    for (size_t c : pivots)
        if (c == gens.size()) return false;
    return true;
}

} // namespace detail

// Decides a = b in the diagram algebra. Degree-1 differences are decided
// exactly through the holonomy-surface model plus the contraction-relation
// span; elsewhere the canonical forms and the relation span give one-sided
// certificates and "unknown" otherwise. A not-equal answer at degree 1 is
// exact modulo the explored contraction window.
inline EqualReport equalModRelations(const DiagramSum& a, const DiagramSum& b, const EqualOptions& opts = {})
{
    EqualReport rep;
    rep.holonomyWindow = opts.holonomyWindow;
    DiagramSum diff = a - b;
    if (diff.isZero()) {
        rep.verdict = Verdict::Equal;
        return rep;
    }

    detail::IhxGenerators gens;
    if (opts.useIhx) {
        gens = detail::ihxGenerators(diff, opts.holonomyWindow);
        rep.usedIhx = true;
        rep.generatorCount = gens.gens.size();
    }

    if (detail::allThetaShaped(diff)) {
        std::vector<const DiagramSum*> all{&diff};
        std::vector<const DiagramSum*> usable;
        for (const auto& g : gens.gens)
            if (detail::allThetaShaped(g)) {
                all.push_back(&g);
                usable.push_back(&g);
            }
        detail::ThetaGrid grid = detail::thetaGrid(all);
        std::vector<Rational> dv = detail::thetaValues(diff, grid);
        if (detail::allZero(dv)) {
            rep.verdict = Verdict::Equal;
            return rep;
        }
        std::vector<std::vector<Rational>> gvs;
        for (const DiagramSum* g : usable) gvs.push_back(detail::thetaValues(*g, grid));
        if (detail::valuesInSpan(dv, gvs)) {
            rep.verdict = Verdict::Equal;
            return rep;
        }
        rep.verdict = gens.windowLimited ? Verdict::Unknown : Verdict::NotEqual;
        return rep;
    }

    if (opts.useIhx && detail::inSpan(diff, gens.gens)) {
        rep.verdict = Verdict::Equal;
        return rep;
    }
    rep.verdict = Verdict::Unknown;
    return rep;
}

// ---- reduction modulo the distinguished degree-1 subspace ----

struct OdeltaReport {
    DiagramSum reduced;
    std::vector<int> generatorsUsed; // k values whose generators acted
    int kMax = 0;
};

// Span generators: Tr_Theta((t^k - t^-k)/delta  (x)  I_Delta  (x)  1).
inline DiagramSum odeltaGenerator(const LaurentPoly& delta, const RatFun& iDeltaValue, int k)
{
    RatFun c1 = RatFun(LaurentPoly::t(k) - LaurentPoly::t(-k), LaurentPoly::one()) / RatFun(delta);
    return trace(Diagram::theta(), {c1, iDeltaValue, RatFun::one()});
}

inline OdeltaReport odeltaReduce(const DiagramSum& s, const LaurentPoly& delta, const RatFun& iDeltaValue, int kMax)
{
    if (!s.isZero() && s.degree() != 1) throw ValidationError("o_delta reduction applies to degree-1 sums only");
    if (delta.isZero()) throw ValidationError("o_delta reduction requires nonzero delta");
    OdeltaReport rep;
    rep.kMax = kMax;
    std::vector<DiagramSum> gens;
    std::vector<int> ks;
    for (int k = 1; k <= kMax; ++k) {
        DiagramSum g = odeltaGenerator(delta, iDeltaValue, k);
        if (!g.isZero()) {
            gens.push_back(std::move(g));
            ks.push_back(k);
        }
    }
    if (gens.empty() || s.isZero()) {
        rep.reduced = s;
        return rep;
    }
    // eliminate generator pivots from s deterministically
    std::map<std::string, size_t> coord;
    auto touch = [&](const DiagramSum& x) {
        for (const auto& t : x.terms())
            if (!coord.count(t.key)) {
                size_t n = coord.size();
                coord.emplace(t.key, n);
            }
    };
    touch(s);
    for (const auto& g : gens) touch(g);

    DiagramSum cur = s;
    std::vector<DiagramSum> basis = gens;
    std::vector<int> basisK = ks;
    auto coeffOf = [](const DiagramSum& x, const std::string& key) -> Rational {
        for (const auto& t : x.terms())
            if (t.key == key) return t.coeff;
        return Rational(0);
    };
    // forward elimination: make each generator pivot on its smallest key
    for (size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].isZero()) continue;
        std::string pivotKey = basis[i].terms().front().key;
        Rational pivotVal = basis[i].terms().front().coeff;
        for (size_t j = i + 1; j < basis.size(); ++j) {
            Rational c = coeffOf(basis[j], pivotKey);
            if (c != 0) basis[j] = basis[j] - basis[i].scaled(c / pivotVal);
        }
        Rational c = coeffOf(cur, pivotKey);
        if (c != 0) {
            cur = cur - basis[i].scaled(c / pivotVal);
            rep.generatorsUsed.push_back(basisK[i]);
        }
    }
    rep.reduced = cur;
    return rep;
}

} // namespace fibinv
