#pragma once

#include "alpath.hpp"
#include "diagram.hpp"

#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace fibinv {

enum class Side { Plus, Minus };

inline const char* sideName(Side s) { return s == Side::Plus ? "+" : "-"; }

// Leg of a Y-graph or chord: (surgery index, side, critical point, gradient index).
struct LegLabel {
    int surgery = 0;
    Side side = Side::Plus;
    std::string point;
    int gradient = 0;

    auto tie() const { return std::tie(surgery, side, point, gradient); }
    bool operator==(const LegLabel& o) const { return tie() == o.tie(); }
    bool operator!=(const LegLabel& o) const { return tie() != o.tie(); }
    bool operator<(const LegLabel& o) const { return tie() < o.tie(); }

    std::string str() const
    {
        std::ostringstream os;
        os << surgery << ":" << sideName(side) << ":" << point << ":" << gradient;
        return os.str();
    }

    // "1:+:y1:2"
    static LegLabel parse(const std::string& s)
    {
        std::vector<std::string> parts;
        std::string cur;
        for (char c : s) {
            if (c == ':') {
                parts.push_back(cur);
                cur.clear();
            } else
                cur += c;
        }
        parts.push_back(cur);
        if (parts.size() != 4) throw ValidationError("leg label must have 4 fields, got \"" + s + "\"");
        LegLabel l;
        try {
            l.surgery = std::stoi(parts[0]);
            l.gradient = std::stoi(parts[3]);
        } catch (const std::exception&) {
            throw ValidationError("bad integer in leg label \"" + s + "\"");
        }
        if (parts[1] == "+")
            l.side = Side::Plus;
        else if (parts[1] == "-")
            l.side = Side::Minus;
        else
            throw ValidationError("leg label side must be + or -, got \"" + parts[1] + "\"");
        if (parts[2].empty()) throw ValidationError("leg label has empty point id: \"" + s + "\"");
        l.point = parts[2];
        return l;
    }
};

// Antisymmetric formal sum of Y-graphs: legs stored sorted, coefficient
// carries the sorting permutation sign; repeated legs vanish.
struct YTerm {
    Rational coeff;
    std::array<LegLabel, 3> legs;
};

class YSum {
public:
    YSum() = default;

    static YSum build(const std::vector<YTerm>& raw)
    {
        std::map<std::array<LegLabel, 3>, Rational> acc;
        for (const auto& t : raw) {
            if (t.coeff == 0) continue;
            std::array<LegLabel, 3> legs = t.legs;
            if (legs[0] == legs[1] || legs[0] == legs[2] || legs[1] == legs[2]) continue;
            int sign = 1;
            // sort three legs, tracking parity
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 2; ++j)
                    if (legs[static_cast<size_t>(j + 1)] < legs[static_cast<size_t>(j)]) {
                        std::swap(legs[static_cast<size_t>(j)], legs[static_cast<size_t>(j + 1)]);
                        sign = -sign;
                    }
            acc[legs] += t.coeff * sign;
        }
        YSum s;
        for (auto& [legs, c] : acc)
            if (c != 0) s.terms_.push_back(YTerm{c, legs});
        return s;
    }

    const std::vector<YTerm>& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }

    // all legs on one side, per term
    bool isRestricted() const
    {
        for (const auto& t : terms_)
            if (!(t.legs[0].side == t.legs[1].side && t.legs[1].side == t.legs[2].side)) return false;
        return true;
    }

private:
    std::vector<YTerm> terms_;
};

struct ChordTerm {
    RatFun coeff;
    LegLabel from, to;
};

class ChordSum {
public:
    ChordSum() = default;

    static ChordSum build(const std::vector<ChordTerm>& raw)
    {
        ChordSum s;
        for (const auto& t : raw) {
            if (t.coeff.isZero()) continue;
            if (t.from.side == t.to.side)
                throw ValidationError("chord endpoints must lie on opposite sides: " + t.from.str() + " -- " +
                                      t.to.str());
            s.terms_.push_back(t);
        }
        return s;
    }

    const std::vector<ChordTerm>& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }

private:
    std::vector<ChordTerm> terms_;
};

// Chord coefficient routing into the transfer matrices.
enum class RouteKind { Direct, Through, Explicit };

struct ChordRoute {
    LegLabel from, to;
    RouteKind kind = RouteKind::Explicit;
    size_t row = 0, col = 0; // 1-based in input, stored 0-based
    RatFun explicitValue;
};

inline ChordSum buildChordSum(const IntMatrix& transition, const std::vector<ChordRoute>& routes)
{
    std::optional<RatFunMatrix> direct, through;
    std::vector<ChordTerm> terms;
    for (const auto& r : routes) {
        ChordTerm t;
        t.from = r.from;
        t.to = r.to;
        switch (r.kind) {
            case RouteKind::Explicit: t.coeff = r.explicitValue; break;
            case RouteKind::Direct:
                if (!direct) direct = alTransfer(transition);
                if (r.row >= direct->rows() || r.col >= direct->cols())
                    throw ValidationError("chord routing entry (" + std::to_string(r.row + 1) + "," +
                                          std::to_string(r.col + 1) + ") outside matrix " + direct->shape());
                t.coeff = (*direct)(r.row, r.col);
                break;
            case RouteKind::Through:
                if (!through) through = throughTransfer(transition);
                if (r.row >= through->rows() || r.col >= through->cols())
                    throw ValidationError("chord routing entry (" + std::to_string(r.row + 1) + "," +
                                          std::to_string(r.col + 1) + ") outside matrix " + through->shape());
                t.coeff = (*through)(r.row, r.col);
                break;
        }
        terms.push_back(std::move(t));
    }
    return ChordSum::build(terms);
}

struct PairStats {
    long combinations = 0;
    long matched = 0;
    long disconnectedDropped = 0;
    NormalizeStats normalize;
};

// Joins same-labeled legs of Y products and chord products into colored
// trivalent diagrams. Zero unless the leg label sets match exactly.
inline DiagramSum pairYC(const std::vector<YSum>& ys, const std::vector<ChordSum>& cs, PairStats* stats = nullptr)
{
    size_t numY = ys.size(), numC = cs.size();
    if (numC * 2 != numY * 3 || numY % 2 != 0)
        throw ValidationError("pairing needs 2n Y-factors and 3n chord factors, got " + std::to_string(numY) + " and " +
                              std::to_string(numC));
    int n = static_cast<int>(numY / 2);
    if (n < 1) throw ValidationError("pairing needs degree >= 1");

    for (const auto& y : ys)
        if (y.isZero()) return DiagramSum::zero();
    for (const auto& c : cs)
        if (c.isZero()) return DiagramSum::zero();

    std::vector<DiagramTerm> collected;
    std::vector<size_t> yi(numY, 0), ci(numC, 0);
    PairStats local;
    PairStats& st = stats ? *stats : local;

    auto emit = [&]() {
        ++st.combinations;
        // gather Y legs with their (vertex, slot)
        std::map<LegLabel, std::pair<int, int>> ylegs;
        Rational coeff = 1;
        for (size_t v = 0; v < numY; ++v) {
            const YTerm& t = ys[v].terms()[yi[v]];
            coeff *= t.coeff;
            for (int s = 0; s < 3; ++s) {
                auto [it, fresh] = ylegs.emplace(t.legs[static_cast<size_t>(s)], std::make_pair(static_cast<int>(v), s));
                if (!fresh)
                    throw ValidationError("duplicated leg label among Y-graphs: " + t.legs[static_cast<size_t>(s)].str());
            }
        }
        // chord legs
        std::map<LegLabel, int> clegCount;
        for (size_t k = 0; k < numC; ++k) {
            const ChordTerm& t = cs[k].terms()[ci[k]];
            if (++clegCount[t.from] > 1) throw ValidationError("duplicated leg label among chords: " + t.from.str());
            if (++clegCount[t.to] > 1) throw ValidationError("duplicated leg label among chords: " + t.to.str());
        }
        // label match
        if (clegCount.size() != ylegs.size()) return;
        for (const auto& [l, cnt] : clegCount)
            if (!ylegs.count(l)) return;
        ++st.matched;

        Diagram d;
        d.degree = n;
        d.edges.resize(numC);
        Coloring colors(numC);
        std::vector<std::array<int, 3>> slotHalf(numY, {-1, -1, -1});
        for (size_t k = 0; k < numC; ++k) {
            const ChordTerm& t = cs[k].terms()[ci[k]];
            auto [va, sa] = ylegs[t.from];
            auto [vb, sb] = ylegs[t.to];
            d.edges[k] = {va, vb};
            colors[k] = t.coeff;
            slotHalf[static_cast<size_t>(va)][static_cast<size_t>(sa)] = Diagram::halfEdge(static_cast<int>(k), 0);
            slotHalf[static_cast<size_t>(vb)][static_cast<size_t>(sb)] = Diagram::halfEdge(static_cast<int>(k), 1);
        }
        d.cyclic = slotHalf;
        // connected diagrams only; a disconnected join is dropped
        try {
            d.validate();
        } catch (const ValidationError&) {
            ++st.disconnectedDropped;
            return;
        }
        collected.push_back(DiagramTerm{coeff, d, colors});
    };

    // iterate the product of all term choices
    while (true) {
        emit();
        size_t pos = 0;
        bool carry = true;
        for (pos = 0; pos < numY && carry; ++pos) {
            if (++yi[pos] < ys[pos].terms().size())
                carry = false;
            else
                yi[pos] = 0;
        }
        for (pos = 0; pos < numC && carry; ++pos) {
            if (++ci[pos] < cs[pos].terms().size())
                carry = false;
            else
                ci[pos] = 0;
        }
        if (carry) break;
    }
    return DiagramSum::fromTerms(std::move(collected), &st.normalize);
}

inline Rational factorial(int n)
{
    Rational r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// (2n)! < product of Y sums, product of chord sums >; zero when the number of
// surgeries exceeds 2n, error below 2n.
inline DiagramSum surgeryZn(const std::vector<YSum>& ys, const std::vector<ChordSum>& cs, int n,
                            PairStats* stats = nullptr)
{
    if (n < 1) throw ValidationError("surgery degree n must be >= 1");
    int m = static_cast<int>(ys.size());
    if (m > 2 * n) return DiagramSum::zero();
    if (m < 2 * n)
        throw ValidationError("surgery formula applies only to m >= 2n surgeries (m = " + std::to_string(m) +
                              ", n = " + std::to_string(n) + ")");
    if (cs.size() != static_cast<size_t>(3 * n))
        throw ValidationError("surgery formula needs " + std::to_string(3 * n) + " chord sums, got " +
                              std::to_string(cs.size()));
    return pairYC(ys, cs, stats).scaled(factorial(2 * n));
}

struct SurgeryQResult {
    DiagramSum value;
    OdeltaReport odelta;
    bool reduced = false;
};

// 2! < restricted Y sums, three chord sums >, then reduction modulo the
// distinguished subspace when delta and Delta are supplied.
inline SurgeryQResult surgeryQ(const std::vector<YSum>& ys, const std::vector<ChordSum>& cs,
                               const std::optional<LaurentPoly>& delta, const std::optional<LaurentPoly>& alexander,
                               int kMax, PairStats* stats = nullptr)
{
    int m = static_cast<int>(ys.size());
    SurgeryQResult out;
    if (m > 2) {
        out.value = DiagramSum::zero();
        return out;
    }
    if (m < 2) throw ValidationError("the two-surgery formula needs m = 2 surgeries, got " + std::to_string(m));
    for (const auto& y : ys)
        if (!y.isRestricted())
            throw ValidationError("Y sums must be restricted to one-sided leg triples for the two-surgery formula");
    if (cs.size() != 3)
        throw ValidationError("the two-surgery formula needs 3 chord sums, got " + std::to_string(cs.size()));
    out.value = pairYC(ys, cs, stats).scaled(2);
    if (delta && alexander && kMax > 0) {
        out.odelta = odeltaReduce(out.value, *delta, iDelta(*alexander), kMax);
        out.value = out.odelta.reduced;
        out.reduced = true;
    }
    return out;
}

} // namespace fibinv
