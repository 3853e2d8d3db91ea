#pragma once

#include "inputdoc.hpp"

namespace fibinv {

// Machine-readable encodings; DiagramSum terms round-trip through the
// [diagrams] input schema.

inline Json toJson(const RatFun& f) { return Json(f.str()); }

inline Json toJson(const LaurentPoly& p) { return Json(p.str()); }

inline Json toJson(const IntMatrix& m)
{
    Json rows = Json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

inline Json toJson(const RatFunMatrix& m)
{
    Json rows = Json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

inline Json toJson(const AbelianGroup& g)
{
    Json j;
    j["free_rank"] = g.freeRank;
    Json tor = Json::array();
    for (const auto& d : g.torsion) tor.push_back(d.str());
    j["torsion"] = tor;
    return j;
}

inline Json diagramTermToJson(const detail::CanonTerm& t)
{
    Json j = Json::array();
    j.push_back(to_string(t.coeff));
    j.push_back(t.diagram.numVertices());
    Json edges = Json::array();
    for (const auto& [a, b] : t.diagram.edges) edges.push_back(Json::array({a + 1, b + 1}));
    j.push_back(edges);
    Json cyc = Json::array();
    for (const auto& c : t.diagram.cyclic) {
        Json triple = Json::array();
        for (int h : c) {
            int e = Diagram::halfEdgeIndex(h) + 1;
            triple.push_back(Diagram::halfEdgeEnd(h) == 0 ? e : -e);
        }
        cyc.push_back(triple);
    }
    j.push_back(cyc);
    Json colors = Json::array();
    for (const auto& c : t.colors) colors.push_back(c.str());
    j.push_back(colors);
    return j;
}

inline Json toJson(const DiagramSum& s)
{
    Json terms = Json::array();
    for (const auto& t : s.terms()) terms.push_back(diagramTermToJson(t));
    return terms;
}

inline DiagramSum diagramSumFromJson(const Json& v, const std::string& what = "diagram sum")
{
    std::vector<DiagramTerm> terms;
    size_t i = 0;
    for (const auto& t : v) terms.push_back(InputDocument::jsonToDiagramTerm(t, what + "[" + std::to_string(i++) + "]"));
    return DiagramSum::fromTerms(std::move(terms));
}

inline Json toJson(const NormalizeStats& st)
{
    Json j;
    j["holonomy_reductions"] = st.holonomyReductions;
    j["automorphism_kills"] = st.automorphismKills;
    j["terms_merged"] = st.termsMerged;
    j["zero_colors_dropped"] = st.zeroColorDropped;
    return j;
}

inline Json toJson(const PairStats& st)
{
    Json j;
    j["combinations"] = st.combinations;
    j["matched"] = st.matched;
    j["disconnected_dropped"] = st.disconnectedDropped;
    j["normalize"] = toJson(st.normalize);
    return j;
}

} // namespace fibinv
