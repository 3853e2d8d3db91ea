#pragma once

#include "surgery.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fibinv {

using Json = nlohmann::json;

// Shared input document: INI-style sections holding `key = value` lines where
// values are integers, quoted strings, booleans, or (nested) arrays; arrays
// may span lines until brackets balance. '#' starts a comment.
class InputDocument {
public:
    static InputDocument parseFile(const std::string& path)
    {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open input file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parseText(ss.str(), path);
    }

    static InputDocument parseText(const std::string& text, const std::string& name = "<input>")
    {
        InputDocument doc;
        doc.name_ = name;
        std::istringstream in(text);
        std::string line, section;
        int lineNo = 0;
        while (std::getline(in, line)) {
            ++lineNo;
            std::string s = stripComment(line);
            if (trim(s).empty()) continue;
            std::string t = trim(s);
            if (t.front() == '[') {
                if (t.back() != ']') throw ValidationError(doc.where(lineNo) + "malformed section header: " + t);
                section = trim(t.substr(1, t.size() - 2));
                if (section.empty()) throw ValidationError(doc.where(lineNo) + "empty section name");
                if (!doc.root_.contains(section)) doc.root_[section] = Json::object();
                continue;
            }
            auto eq = s.find('=');
            if (eq == std::string::npos) throw ValidationError(doc.where(lineNo) + "expected `key = value`: " + t);
            std::string key = trim(s.substr(0, eq));
            if (key.empty()) throw ValidationError(doc.where(lineNo) + "empty key");
            if (section.empty()) throw ValidationError(doc.where(lineNo) + "key outside any [section]: " + key);
            std::string value = s.substr(eq + 1);
            // continue reading until brackets balance
            while (bracketDepth(value) > 0) {
                std::string more;
                if (!std::getline(in, more))
                    throw ValidationError(doc.where(lineNo) + "unterminated array for key " + key);
                ++lineNo;
                value += "\n" + stripComment(more);
            }
            doc.root_[section][key] = parseValue(trim(value), doc.where(lineNo) + "key " + key + ": ");
        }
        return doc;
    }

    bool hasSection(const std::string& s) const { return root_.contains(s); }

    const Json& section(const std::string& s) const
    {
        if (!root_.contains(s)) throw ValidationError("[" + s + "] section missing");
        return root_.at(s);
    }

    const Json& root() const { return root_; }

    // ---- typed field access ----

    static long requireInt(const Json& sec, const std::string& section, const std::string& key)
    {
        if (!sec.contains(key)) throw ValidationError("[" + section + "] missing key " + key);
        const Json& v = sec.at(key);
        if (!v.is_number_integer()) throw ValidationError("[" + section + "] " + key + " must be an integer");
        return v.get<long>();
    }

    static std::optional<long> optionalInt(const Json& sec, const std::string& section, const std::string& key)
    {
        if (!sec.contains(key)) return std::nullopt;
        const Json& v = sec.at(key);
        if (!v.is_number_integer()) throw ValidationError("[" + section + "] " + key + " must be an integer");
        return v.get<long>();
    }

    static std::optional<std::string> optionalString(const Json& sec, const std::string& section, const std::string& key)
    {
        if (!sec.contains(key)) return std::nullopt;
        const Json& v = sec.at(key);
        if (!v.is_string()) throw ValidationError("[" + section + "] " + key + " must be a string");
        return v.get<std::string>();
    }

    static IntMatrix jsonToIntMatrix(const Json& v, const std::string& what)
    {
        if (!v.is_array()) throw ValidationError(what + " must be an array of rows");
        std::vector<std::vector<Integer>> rows;
        for (const auto& row : v) {
            if (!row.is_array()) throw ValidationError(what + " rows must be arrays");
            std::vector<Integer> r;
            for (const auto& x : row) {
                if (!x.is_number_integer()) throw ValidationError(what + " entries must be integers");
                r.emplace_back(x.get<long long>());
            }
            rows.push_back(std::move(r));
        }
        if (rows.empty()) return IntMatrix(0, 0);
        return IntMatrix::fromRows(rows);
    }

    static IntMatrix matrixField(const Json& sec, const std::string& section, const std::string& key, size_t rows,
                                 size_t cols)
    {
        std::string what = "[" + section + "] " + key;
        if (!sec.contains(key)) {
            if (rows == 0 || cols == 0) return IntMatrix(rows, cols);
            throw ValidationError(what + " missing (expected " + std::to_string(rows) + "x" + std::to_string(cols) + ")");
        }
        IntMatrix m = jsonToIntMatrix(sec.at(key), what);
        if (m.rows() == 0 && m.cols() == 0) return IntMatrix(rows, cols); // [] stands for any empty shape
        if (m.rows() != rows || m.cols() != cols)
            throw ValidationError(what + " has shape " + m.shape() + ", expected " + std::to_string(rows) + "x" +
                                  std::to_string(cols));
        return m;
    }

    // ---- sections ----

    MonodromyData monodromy() const
    {
        const Json& sec = section("monodromy");
        MonodromyData m;
        m.genus = static_cast<int>(requireInt(sec, "monodromy", "genus"));
        std::optional<IntMatrix> fromSlides;
        if (sec.contains("slides")) {
            const Json& sl = sec.at("slides");
            if (!sl.is_array()) throw ValidationError("[monodromy] slides must be an array of [i, j, s] triples");
            std::vector<std::tuple<int, int, int>> slides;
            for (const auto& e : sl) {
                if (!e.is_array() || e.size() != 3)
                    throw ValidationError("[monodromy] each slide must be a triple [i, j, s]");
                slides.emplace_back(e[0].get<int>(), e[1].get<int>(), e[2].get<int>());
            }
            fromSlides = monodromyFromSlides(static_cast<size_t>(2 * m.genus), slides);
        }
        if (sec.contains("matrix")) {
            m.action = jsonToIntMatrix(sec.at("matrix"), "[monodromy] matrix");
            if (fromSlides && !(m.action == *fromSlides))
                throw ValidationError("[monodromy] matrix does not equal the product of slides");
        } else if (fromSlides) {
            m.action = *fromSlides;
        } else {
            throw ValidationError("[monodromy] needs matrix or slides");
        }
        m.validate();
        return m;
    }

    FiberCriticalData fiber() const
    {
        const Json& sec = section("fiber");
        if (!sec.contains("points")) throw ValidationError("[fiber] missing key points");
        const Json& pts = sec.at("points");
        if (!pts.is_array()) throw ValidationError("[fiber] points must be an array of [id, index] pairs");
        FiberCriticalData f;
        for (const auto& p : pts) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_number_integer())
                throw ValidationError("[fiber] each point must be [\"id\", index]");
            f.points.emplace_back(p[0].get<std::string>(), p[1].get<int>());
        }
        f.warnings(); // throws on malformed data
        return f;
    }

    TransitionMatrix transition() const
    {
        const Json& sec = section("transition");
        TransitionMatrix t;
        for (int i = 0; i < 3; ++i) {
            std::string key = "A" + std::to_string(i);
            if (sec.contains(key))
                t.blocks[static_cast<size_t>(i)] = jsonToIntMatrix(sec.at(key), "[transition] " + key);
        }
        t.validate();
        if (hasSection("fiber")) t.validateAgainst(fiber());
        return t;
    }

    ALChainComplex chainComplex() const
    {
        const Json& sec = section("chain_complex");
        ALChainComplex c;
        auto sizes = [&](const std::string& key) {
            if (!sec.contains(key)) throw ValidationError("[chain_complex] missing key " + key);
            const Json& v = sec.at(key);
            if (!v.is_array() || v.size() != 3) throw ValidationError("[chain_complex] " + key + " must be [n0, n1, n2]");
            std::array<size_t, 3> out{};
            for (int i = 0; i < 3; ++i) {
                long x = v[static_cast<size_t>(i)].get<long>();
                if (x < 0) throw ValidationError("[chain_complex] " + key + " entries must be nonnegative");
                out[static_cast<size_t>(i)] = static_cast<size_t>(x);
            }
            return out;
        };
        c.sizesA = sizes("fa_sizes");
        c.sizesB = sizes("fb_sizes");
        c.boundaryA[0] = matrixField(sec, "chain_complex", "fa_d1", c.sizesA[0], c.sizesA[1]);
        c.boundaryA[1] = matrixField(sec, "chain_complex", "fa_d2", c.sizesA[1], c.sizesA[2]);
        c.boundaryB[0] = matrixField(sec, "chain_complex", "fb_d1", c.sizesB[0], c.sizesB[1]);
        c.boundaryB[1] = matrixField(sec, "chain_complex", "fb_d2", c.sizesB[1], c.sizesB[2]);
        for (int j = 0; j <= 2; ++j)
            c.phi1[static_cast<size_t>(j)] = matrixField(sec, "chain_complex", "phi1_" + std::to_string(j),
                                                         c.sizesB[static_cast<size_t>(j)], c.sizesA[static_cast<size_t>(j)]);
        c.validateShapes();
        return c;
    }

    // ---- surgery data ----

    struct SurgeryInput {
        int n = 1;
        std::vector<YSum> ysums;
        std::vector<ChordSum> chords;
        std::optional<LaurentPoly> delta;
        std::optional<LaurentPoly> alexander;
        int kMax = 0;
    };

    SurgeryInput surgeryData() const
    {
        const Json& sec = section("surgery");
        SurgeryInput out;
        out.n = static_cast<int>(requireInt(sec, "surgery", "n"));
        if (!sec.contains("ysums")) throw ValidationError("[surgery] missing key ysums");
        if (!sec.contains("chords")) throw ValidationError("[surgery] missing key chords");

        for (const auto& ysum : sec.at("ysums")) {
            if (!ysum.is_array()) throw ValidationError("[surgery] each entry of ysums must be an array of terms");
            std::vector<YTerm> terms;
            for (const auto& term : ysum) {
                if (!term.is_array() || term.size() != 4)
                    throw ValidationError("[surgery] Y term must be [\"coeff\", \"leg\", \"leg\", \"leg\"]");
                YTerm t;
                t.coeff = parseRationalNumber(term[0], "[surgery] Y coefficient");
                for (int i = 0; i < 3; ++i) t.legs[static_cast<size_t>(i)] = LegLabel::parse(term[static_cast<size_t>(i + 1)].get<std::string>());
                terms.push_back(std::move(t));
            }
            out.ysums.push_back(YSum::build(terms));
        }

        std::optional<IntMatrix> transitionA1;
        if (hasSection("transition")) transitionA1 = transition().blocks[1];

        for (const auto& csum : sec.at("chords")) {
            if (!csum.is_array()) throw ValidationError("[surgery] each entry of chords must be an array of chords");
            std::vector<ChordRoute> routes;
            for (const auto& chord : csum) {
                if (!chord.is_array() || chord.empty() || !chord[0].is_string())
                    throw ValidationError("[surgery] chord must start with a kind string");
                std::string kind = chord[0].get<std::string>();
                ChordRoute r;
                if (kind == "ratfun") {
                    if (chord.size() != 4)
                        throw ValidationError("[surgery] explicit chord must be [\"ratfun\", \"expr\", \"from\", \"to\"]");
                    r.kind = RouteKind::Explicit;
                    r.explicitValue = parseRatFun(chord[1].get<std::string>());
                    r.from = LegLabel::parse(chord[2].get<std::string>());
                    r.to = LegLabel::parse(chord[3].get<std::string>());
                } else if (kind == "direct" || kind == "through") {
                    if (chord.size() != 5)
                        throw ValidationError("[surgery] routed chord must be [\"" + kind +
                                              "\", row, col, \"from\", \"to\"]");
                    if (!transitionA1)
                        throw ValidationError("[surgery] chord routing needs the [transition] section (A1)");
                    r.kind = (kind == "direct") ? RouteKind::Direct : RouteKind::Through;
                    long row = chord[1].get<long>(), col = chord[2].get<long>();
                    if (row < 1 || col < 1) throw ValidationError("[surgery] chord routing entries are 1-based");
                    r.row = static_cast<size_t>(row - 1);
                    r.col = static_cast<size_t>(col - 1);
                    r.from = LegLabel::parse(chord[3].get<std::string>());
                    r.to = LegLabel::parse(chord[4].get<std::string>());
                } else {
                    throw ValidationError("[surgery] unknown chord kind \"" + kind + "\"");
                }
                routes.push_back(std::move(r));
            }
            out.chords.push_back(buildChordSum(transitionA1 ? *transitionA1 : IntMatrix(0, 0), routes));
        }

        if (auto d = optionalString(sec, "surgery", "delta")) out.delta = parseLaurent(*d);
        if (auto d = optionalString(sec, "surgery", "Delta")) out.alexander = parseLaurent(*d);
        if (auto k = optionalInt(sec, "surgery", "k_max")) out.kMax = static_cast<int>(*k);
        return out;
    }

    // ---- serialized diagram sums ----

    static DiagramTerm jsonToDiagramTerm(const Json& v, const std::string& what)
    {
        if (!v.is_array() || v.size() != 5)
            throw ValidationError(what + ": term must be [coeff, vertices, edges, cyclic, colors]");
        DiagramTerm t;
        t.coeff = parseRationalNumber(v[0], what + " coefficient");
        long nv = v[1].get<long>();
        if (nv < 2 || nv % 2 != 0) throw ValidationError(what + ": vertex count must be a positive even number");
        t.diagram.degree = static_cast<int>(nv / 2);
        for (const auto& e : v[2]) {
            if (!e.is_array() || e.size() != 2) throw ValidationError(what + ": edges must be [src, dst] pairs");
            t.diagram.edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
        }
        for (const auto& cyc : v[3]) {
            if (!cyc.is_array() || cyc.size() != 3)
                throw ValidationError(what + ": cyclic entries must be triples of signed edge labels");
            std::array<int, 3> c{};
            for (int i = 0; i < 3; ++i) {
                int signedEdge = cyc[static_cast<size_t>(i)].get<int>();
                if (signedEdge == 0) throw ValidationError(what + ": cyclic labels are signed, nonzero");
                int e = std::abs(signedEdge) - 1;
                c[static_cast<size_t>(i)] = Diagram::halfEdge(e, signedEdge > 0 ? 0 : 1);
            }
            t.diagram.cyclic.push_back(c);
        }
        for (const auto& c : v[4]) t.colors.push_back(parseRatFun(c.get<std::string>()));
        t.diagram.validate();
        if (t.colors.size() != t.diagram.edges.size()) throw ValidationError(what + ": color count mismatch");
        return t;
    }

    DiagramSum diagramSum(const std::string& key, NormalizeStats* stats = nullptr) const
    {
        const Json& sec = section("diagrams");
        if (!sec.contains(key)) throw ValidationError("[diagrams] missing key " + key);
        const Json& v = sec.at(key);
        if (!v.is_array()) throw ValidationError("[diagrams] " + key + " must be an array of terms");
        std::vector<DiagramTerm> terms;
        size_t i = 0;
        for (const auto& t : v) terms.push_back(jsonToDiagramTerm(t, "[diagrams] " + key + "[" + std::to_string(i++) + "]"));
        return DiagramSum::fromTerms(std::move(terms), stats);
    }

    static Rational parseRationalNumber(const Json& v, const std::string& what)
    {
        if (v.is_number_integer()) return Rational(v.get<long long>());
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            RatFun f = parseRatFun(s);
            if (!f.isPolynomial() || !f.num().isConstant())
                throw ValidationError(what + " must be a rational number, got \"" + s + "\"");
            return f.num().isZero() ? Rational(0) : f.num().coeff(0);
        }
        throw ValidationError(what + " must be an integer or a rational string");
    }

private:
    Json root_ = Json::object();
    std::string name_;

    std::string where(int line) const { return name_ + ":" + std::to_string(line) + ": "; }

    static std::string trim(const std::string& s)
    {
        size_t a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return "";
        size_t b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }

    static std::string stripComment(const std::string& s)
    {
        bool inStr = false;
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') inStr = !inStr;
            if (s[i] == '#' && !inStr) return s.substr(0, i);
        }
        return s;
    }

    static int bracketDepth(const std::string& s)
    {
        int d = 0;
        bool inStr = false;
        for (char c : s) {
            if (c == '"') inStr = !inStr;
            if (inStr) continue;
            if (c == '[') ++d;
            if (c == ']') --d;
        }
        return d;
    }

    // integers, quoted strings, booleans and nested arrays
    static Json parseValue(const std::string& s, const std::string& context)
    {
        size_t pos = 0;
        Json v = parseValueAt(s, pos, context);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw ValidationError(context + "trailing characters after value");
        return v;
    }

    static Json parseValueAt(const std::string& s, size_t& pos, const std::string& context)
    {
        auto ws = [&]() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        };
        ws();
        if (pos >= s.size()) throw ValidationError(context + "missing value");
        char c = s[pos];
        if (c == '[') {
            ++pos;
            Json arr = Json::array();
            ws();
            if (pos < s.size() && s[pos] == ']') {
                ++pos;
                return arr;
            }
            while (true) {
                arr.push_back(parseValueAt(s, pos, context));
                ws();
                if (pos < s.size() && s[pos] == ',') {
                    ++pos;
                    ws();
                    if (pos < s.size() && s[pos] == ']') { // trailing comma
                        ++pos;
                        return arr;
                    }
                    continue;
                }
                if (pos < s.size() && s[pos] == ']') {
                    ++pos;
                    return arr;
                }
                throw ValidationError(context + "expected ',' or ']' in array");
            }
        }
        if (c == '"') {
            ++pos;
            std::string out;
            while (pos < s.size() && s[pos] != '"') {
                if (s[pos] == '\\' && pos + 1 < s.size()) ++pos;
                out += s[pos++];
            }
            if (pos >= s.size()) throw ValidationError(context + "unterminated string");
            ++pos;
            return Json(out);
        }
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            if (c == '-') ++pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start + (c == '-' ? 1u : 0u)) throw ValidationError(context + "malformed number");
            return Json(std::stoll(s.substr(start, pos - start)));
        }
        if (s.compare(pos, 4, "true") == 0) {
            pos += 4;
            return Json(true);
        }
        if (s.compare(pos, 5, "false") == 0) {
            pos += 5;
            return Json(false);
        }
        throw ValidationError(context + "unrecognized value starting at \"" + s.substr(pos, 10) + "\"");
    }
};

} // namespace fibinv
