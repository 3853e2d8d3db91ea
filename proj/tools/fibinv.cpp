#include <fibinv/textio.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace fibinv;

struct GlobalOpts {
    std::string input;
    bool json = false;
    int kMax = 5;
    int holonomyWindow = 3;
    int nMax = 10;
};

void applyOptionsSection(const InputDocument& doc, GlobalOpts& opts, bool kMaxSet, bool windowSet, bool nMaxSet)
{
    if (!doc.hasSection("options")) return;
    const Json& sec = doc.section("options");
    if (!kMaxSet)
        if (auto v = InputDocument::optionalInt(sec, "options", "k_max")) opts.kMax = static_cast<int>(*v);
    if (!windowSet)
        if (auto v = InputDocument::optionalInt(sec, "options", "holonomy_window")) opts.holonomyWindow = static_cast<int>(*v);
    if (!nMaxSet)
        if (auto v = InputDocument::optionalInt(sec, "options", "n_max")) opts.nMax = static_cast<int>(*v);
}

void emit(const GlobalOpts& opts, const Json& machine, const std::string& human)
{
    if (opts.json)
        std::cout << machine.dump(2) << "\n";
    else
        std::cout << human << "\n";
}

int cmdZeta(const InputDocument& doc, const GlobalOpts& opts)
{
    RatFun z = lefschetzZeta(doc.monodromy());
    emit(opts, Json{{"zeta", z.str()}}, z.str());
    return 0;
}

int cmdAlexander(const InputDocument& doc, const GlobalOpts& opts)
{
    LaurentPoly d = alexanderPolynomial(doc.monodromy());
    emit(opts, Json{{"alexander", d.str()}}, d.str());
    return 0;
}

int cmdIdelta(const InputDocument& doc, const GlobalOpts& opts)
{
    RatFun v = iDelta(alexanderPolynomial(doc.monodromy()));
    emit(opts, Json{{"idelta", v.str()}}, v.str());
    return 0;
}

int cmdH1(const InputDocument& doc, const GlobalOpts& opts)
{
    AbelianGroup g = h1MappingTorus(doc.monodromy());
    emit(opts, Json{{"h1", toJson(g)}}, "H_1(M) = " + g.str());
    return 0;
}

int cmdIdentityCheck(const InputDocument& doc, const GlobalOpts& opts)
{
    IdentityReport rep = zetaAlexanderIdentity(doc.monodromy());
    Json j{{"zeta_alexander_holds", rep.zetaAlexanderHolds},
           {"idelta_holds", rep.iDeltaHolds},
           {"log_derivative_difference", rep.lhs1.str()},
           {"idelta", rep.rhs2.str()}};
    emit(opts, j, rep.str());
    if (!rep.zetaAlexanderHolds || !rep.iDeltaHolds) {
        std::cerr << "error: computation: logarithmic-derivative identity failed on [monodromy] data\n";
        return 2;
    }
    return 0;
}

int cmdTransfer(const InputDocument& doc, const GlobalOpts& opts)
{
    TransitionMatrix td = doc.transition();
    Json j;
    std::ostringstream human;
    bool any = false;
    for (int i = 0; i < 3; ++i) {
        const IntMatrix& a = td.blocks[static_cast<size_t>(i)];
        if (a.rows() == 0) continue;
        RatFunMatrix direct = alTransfer(a);
        RatFunMatrix through = throughTransfer(a);
        std::string key = "A" + std::to_string(i);
        j[key] = Json{{"direct", toJson(direct)}, {"through", toJson(through)}, {"vhat", toJson(vhatCoefficients(a))}};
        if (any) human << "\n";
        human << key << " direct (1 - t*A)^-1 =\n" << str(direct) << "\n";
        human << key << " through t*A*(1 - t*A)^-1 =\n" << str(through);
        any = true;
    }
    if (!any) throw ValidationError("[transition] has no nonempty blocks");
    emit(opts, j, human.str());
    return 0;
}

int cmdClosedOrbits(const InputDocument& doc, const GlobalOpts& opts)
{
    TransitionMatrix td = doc.transition();
    RatFun series = closedOrbitSeries(td);
    auto window = series.seriesWindow(1, opts.nMax);
    Json coeffs = Json::array();
    std::ostringstream human;
    human << series.str() << "\n";
    human << "coefficients t^1..t^" << opts.nMax << ":";
    for (const auto& [k, c] : window) {
        coeffs.push_back(to_string(c));
        human << " " << to_string(c);
    }
    emit(opts, Json{{"series", series.str()}, {"coefficients", coeffs}}, human.str());
    return 0;
}

int cmdHomology(const InputDocument& doc, const GlobalOpts& opts)
{
    ALChainComplex c = doc.chainComplex();
    ChainValidationReport rep = validateChainComplex(c);
    if (!rep.valid) throw ValidationError("[chain_complex] " + rep.firstViolation);
    std::vector<AbelianGroup> h = alHomology(c);
    Json j = Json::array();
    std::ostringstream human;
    for (size_t i = 0; i < h.size(); ++i) {
        j.push_back(toJson(h[i]));
        if (i) human << "\n";
        human << "H_" << i << " = " << h[i].str();
    }
    emit(opts, Json{{"homology", j}}, human.str());
    return 0;
}

int cmdReduce(const InputDocument& doc, const GlobalOpts& opts)
{
    NormalizeStats stats;
    DiagramSum s = doc.diagramSum("a", &stats);
    emit(opts, Json{{"terms", toJson(s)}, {"stats", toJson(stats)}}, s.str());
    return 0;
}

int cmdEqual(const InputDocument& doc, const GlobalOpts& opts)
{
    DiagramSum a = doc.diagramSum("a");
    DiagramSum b = doc.diagramSum("b");
    EqualOptions eo;
    eo.holonomyWindow = opts.holonomyWindow;
    EqualReport rep = equalModRelations(a, b, eo);
    Json j{{"verdict", verdictName(rep.verdict)},
           {"holonomy_window", rep.holonomyWindow},
           {"relation_generators", rep.generatorCount}};
    emit(opts, j, verdictName(rep.verdict));
    return 0;
}

int cmdPair(const InputDocument& doc, const GlobalOpts& opts)
{
    InputDocument::SurgeryInput in = doc.surgeryData();
    PairStats stats;
    DiagramSum s = pairYC(in.ysums, in.chords, &stats);
    emit(opts, Json{{"terms", toJson(s)}, {"stats", toJson(stats)}}, s.str());
    return 0;
}

int cmdSurgeryZn(const InputDocument& doc, const GlobalOpts& opts)
{
    InputDocument::SurgeryInput in = doc.surgeryData();
    PairStats stats;
    DiagramSum s = surgeryZn(in.ysums, in.chords, in.n, &stats);
    emit(opts, Json{{"terms", toJson(s)}, {"stats", toJson(stats)}}, s.str());
    return 0;
}

int cmdSurgeryQ(const InputDocument& doc, const GlobalOpts& opts)
{
    InputDocument::SurgeryInput in = doc.surgeryData();
    // delta/Delta fall back to the monodromy section when absent
    if ((!in.delta || !in.alexander) && doc.hasSection("monodromy")) {
        MonodromyData m = doc.monodromy();
        if (!in.delta) in.delta = deltaPolynomial(m);
        if (!in.alexander) in.alexander = alexanderPolynomial(m);
    }
    int kMax = in.kMax > 0 ? in.kMax : opts.kMax;
    PairStats stats;
    SurgeryQResult r = surgeryQ(in.ysums, in.chords, in.delta, in.alexander, kMax, &stats);
    Json j{{"terms", toJson(r.value)}, {"stats", toJson(stats)}, {"odelta_reduced", r.reduced}};
    if (r.reduced) {
        Json used = Json::array();
        for (int k : r.odelta.generatorsUsed) used.push_back(k);
        j["odelta_generators_used"] = used;
        j["odelta_k_max"] = r.odelta.kMax;
    }
    emit(opts, j, r.value.str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact combinatorial invariants of surface bundles over the circle"};
    app.require_subcommand(1);

    GlobalOpts opts;
    struct Cmd {
        const char* name;
        const char* help;
        int (*fn)(const InputDocument&, const GlobalOpts&);
    };
    const std::vector<Cmd> cmds = {
        {"zeta", "Lefschetz zeta function of the monodromy", cmdZeta},
        {"alexander", "normalized Alexander polynomial", cmdAlexander},
        {"idelta", "I_Delta series of the Alexander polynomial", cmdIdelta},
        {"h1", "first homology of the mapping torus", cmdH1},
        {"identity-check", "verify the zeta/Alexander logarithmic-derivative identities", cmdIdentityCheck},
        {"transfer", "path-counting transfer matrices (1-tA)^-1 and tA(1-tA)^-1", cmdTransfer},
        {"closed-orbits", "signed generating function of closed path classes", cmdClosedOrbits},
        {"homology", "homology of the two-function chain complex", cmdHomology},
        {"reduce", "normalize a serialized diagram sum", cmdReduce},
        {"equal", "compare two serialized diagram sums modulo relations", cmdEqual},
        {"pair", "leg-joining pairing of Y sums with chord sums", cmdPair},
        {"surgery-zn", "degree-n surgery value (2n)! <prod Y, prod C>", cmdSurgeryZn},
        {"surgery-q", "two-surgery value with optional reduction", cmdSurgeryQ},
    };

    std::vector<CLI::App*> subs;
    bool kMaxSet = false, windowSet = false, nMaxSet = false;
    for (const auto& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("input", opts.input, "input document")->required();
        sub->add_flag("--json", opts.json, "machine-readable output");
        sub->add_option("--k-max", opts.kMax, "reduction depth for the distinguished subspace")
            ->envname("FIBINV_K_MAX")
            ->each([&](const std::string&) { kMaxSet = true; });
        sub->add_option("--holonomy-window", opts.holonomyWindow, "holonomy shift bound for relation generators")
            ->envname("FIBINV_HOLONOMY_WINDOW")
            ->each([&](const std::string&) { windowSet = true; });
        sub->add_option("--n-max", opts.nMax, "series coefficients to print")
            ->envname("FIBINV_N_MAX")
            ->each([&](const std::string&) { nMaxSet = true; });
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (size_t i = 0; i < cmds.size(); ++i) {
            if (subs[i]->parsed()) {
                InputDocument doc = InputDocument::parseFile(opts.input);
                applyOptionsSection(doc, opts, kMaxSet, windowSet, nMaxSet);
                return cmds[i].fn(doc, opts);
            }
        }
        std::cerr << "error: validation: no subcommand selected\n";
        return 1;
    } catch (const fibinv::ValidationError& e) {
        std::cerr << "error: validation: " << e.what() << "\n";
        return 1;
    } catch (const fibinv::ComputeError& e) {
        std::cerr << "error: computation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: computation: " << e.what() << "\n";
        return 2;
    }
}
