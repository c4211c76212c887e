#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "berkdyn/complexdyn.hpp"
#include "berkdyn/errors.hpp"
#include "berkdyn/green.hpp"
#include "berkdyn/multiplicity.hpp"
#include "berkdyn/normal.hpp"

using json = nlohmann::json;
using namespace berkdyn;

namespace {

constexpr const char* kArtifactVersion = "1.0";

/// Budgets and provenance stamped into every output.
struct RunConfig {
    std::string map_text;  // inline JSON or file path
    std::string germ_text; // inline JSON or file path (normalize)
    std::string mode = "exact";
    int depth = 6;
    long precision = 40;
    int iterations = 25;
    std::uint64_t seed = 1;
    std::string output; // empty = stdout

    void validate() const {
        if (depth <= 0 || precision <= 0 || iterations <= 0)
            throw input_error("all budgets must be positive");
    }
};

std::string slurp(const std::string& text_or_path) {
    if (!text_or_path.empty() && text_or_path.front() == '{')
        return text_or_path;
    std::ifstream in(text_or_path);
    if (!in) throw input_error("cannot open file: " + text_or_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw input_error("malformed JSON input");
    return j;
}

Mode mode_of(const RunConfig& cfg) {
    if (cfg.mode == "exact") return Mode::Exact;
    if (cfg.mode == "numeric") return Mode::Numeric;
    throw input_error("mode must be exact or numeric");
}

SkewMap load_map(const RunConfig& cfg) {
    if (cfg.map_text.empty()) throw input_error("--map is required");
    json j = parse_json(slurp(cfg.map_text));
    if (!j.contains("d") || !j.contains("c") || !j.contains("h"))
        throw input_error("map JSON requires d, c and h");
    long d = j["d"].get<long>();
    long c = j["c"].get<long>();
    Mode mode = mode_of(cfg);
    if (j.contains("mode"))
        mode = j["mode"] == "numeric" ? Mode::Numeric : Mode::Exact;
    if (c < 2) throw input_error("fiber degree c must be at least 2");
    std::vector<PuiseuxSeries> h((std::size_t)c, PuiseuxSeries::zero(mode));
    for (const auto& [key, val] : j["h"].items()) {
        long idx = std::stol(key);
        if (idx < 0 || idx >= c)
            throw input_error("h index out of range: " + key);
        h[(std::size_t)idx] = parse_series(val.get<std::string>(), mode);
    }
    return SkewMap(d, c, std::move(h));
}

json map_json(const SkewMap& f) {
    json h = json::object();
    for (long j = 0; j < f.c(); ++j)
        if (f.h()[j].has_terms() || !f.h()[j].is_identically_zero())
            h[std::to_string(j)] = f.h()[j].str();
    return {{"d", f.d()},
            {"c", f.c()},
            {"h", h},
            {"mode", f.mode() == Mode::Exact ? "exact" : "numeric"}};
}

json stamp(const RunConfig& cfg, const SkewMap* f) {
    json j = {{"artifact_version", kArtifactVersion},
              {"mode", cfg.mode},
              {"seed", cfg.seed},
              {"budgets",
               {{"depth", cfg.depth},
                {"precision", cfg.precision},
                {"iterations", cfg.iterations}}}};
    if (f) j["map"] = map_json(*f);
    return j;
}

void emit(const RunConfig& cfg, const json& j) {
    std::string text = j.dump(2) + "\n";
    if (cfg.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(cfg.output);
        if (!out) throw input_error("cannot write file: " + cfg.output);
        out << text;
    }
}

void emit_text(const RunConfig& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(cfg.output);
        if (!out) throw input_error("cannot write file: " + cfg.output);
        out << text;
    }
}

std::string rat_str(const Rat& r) { return rat_to_string(r); }

std::string extrat_str(const ExtRat& e) { return e.str(); }

json ball_json(const Ball& b, int parent) {
    return {{"boundary",
             {{"center", b.boundary.center().str()},
              {"t", extrat_str(b.boundary.t())}}},
            {"direction", b.direction.str()},
            {"kind", b.kind == Ball::Kind::Open ? "open" : "closed"},
            {"parent", parent},
            {"critical", b.contains_critical}};
}

json cover_json(const BallCover& cover) {
    json levels = json::array();
    for (const auto& level : cover.levels) {
        json balls = json::array();
        for (std::size_t i = 0; i < level.balls.size(); ++i)
            balls.push_back(ball_json(level.balls[i], level.parent[i]));
        levels.push_back(balls);
    }
    return levels;
}

BallCover cover_to_depth(const SkewMap& f, int depth) {
    BallCover cover = make_cover(f);
    for (int k = 0; k < depth; ++k) refine(f, cover);
    return cover;
}

std::vector<int> parse_word(const std::string& text) {
    std::istringstream in(text);
    std::vector<int> word;
    int v;
    while (in >> v) word.push_back(v);
    return word;
}

std::complex<double> parse_complex(const std::string& text) {
    std::istringstream in(text);
    double re = 0, im = 0;
    char comma;
    if (!(in >> re)) throw input_error("bad complex number: " + text);
    if (in >> comma) {
        if (comma != ',' || !(in >> im))
            throw input_error("bad complex number: " + text);
    }
    return {re, im};
}

const char* fate_str(CriticalBranch::Fate fate) {
    switch (fate) {
    case CriticalBranch::Fate::Escapes: return "escapes";
    case CriticalBranch::Fate::InK: return "in_K";
    default: return "unresolved";
    }
}

json mult_json(const MultiplicityReport& rep) {
    json j;
    switch (rep.kind) {
    case MultiplicityReport::Kind::Bound: j["kind"] = "bound"; break;
    case MultiplicityReport::Kind::Unbounded: j["kind"] = "unbounded"; break;
    default: j["kind"] = "unresolved"; break;
    }
    j["bound"] = rep.bound;
    j["note"] = rep.note;
    json ev = json::array();
    for (const auto& e : rep.evidence)
        ev.push_back({{"point", e.point.str()},
                      {"m", e.m},
                      {"b", e.b},
                      {"b_image", e.b_image}});
    j["evidence"] = ev;
    json trace = json::array();
    for (const auto& s : rep.trace)
        trace.push_back({{"t", rat_str(s.t)},
                         {"A", rat_str(s.A)},
                         {"q", s.q},
                         {"follows_recurrence", s.follows_recurrence}});
    j["trace"] = trace;
    j["regime_start"] = rep.regime_start;
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"Exact local dynamics of superattracting skew products "
                 "(z^d, w^c + sum h_j(z) w^j) over Laurent series"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand name

    RunConfig cfg;
    app.add_option("--map", cfg.map_text,
                   "map JSON ({\"d\",\"c\",\"h\"}) inline or as a file path");
    app.add_option("--mode", cfg.mode, "exact or numeric (default exact)");
    app.add_option("--depth", cfg.depth, "cover/refinement depth budget");
    app.add_option("--precision", cfg.precision, "series precision budget");
    app.add_option("--iterations", cfg.iterations, "iteration budget");
    app.add_option("--seed", cfg.seed, "RNG seed for sampling commands");
    app.add_option("-o,--output", cfg.output, "output path (default stdout)");

    std::string point_text, branch_text, word_text, z_text = "0", w_text = "0";
    std::string equidist_point;
    int level = -1, count = 8, plaque_points = 8, points_per_curve = 1;
    double radius = 0.05, tolerance = 1e-9;
    int sample_length = 0;
    bool full = false, quotient = false;
    std::vector<std::string> words;

    auto* c_critical = app.add_subcommand(
        "critical", "critical branches with orbit fates");

    auto* c_orbit = app.add_subcommand("orbit", "iterate a Berkovich point");
    c_orbit->add_option("--point", point_text, "zeta(<series>, <t>)")
        ->required();

    auto* c_cover = app.add_subcommand("cover", "nested ball cover");

    auto* c_graph = app.add_subcommand("graph", "Markov coding graph");
    c_graph->add_option("--level", level, "cover level (default: minimal)");
    c_graph->add_flag("--quotient", quotient, "Galois quotient graph");

    auto* c_measure = app.add_subcommand(
        "measure", "Parry measure, cylinder masses, sampling, equidistribution");
    c_measure->add_option("--level", level, "cover level (default: minimal)");
    c_measure->add_option("--word", word_text, "cylinder word (vertex indices)");
    c_measure->add_option("--sample", sample_length,
                          "length of a sampled itinerary");
    c_measure->add_option("--equidist-point", equidist_point,
                          "rigid center for an equidistribution check");

    auto* c_green = app.add_subcommand("green", "non-Archimedean Green value");
    c_green->add_option("--point", point_text, "zeta(<series>, <t>)")
        ->required();

    auto* c_classify =
        app.add_subcommand("classify", "fate of a point under iteration");
    c_classify->add_option("--point", point_text, "zeta(<series>, <t>)")
        ->required();

    auto* c_mult_bound =
        app.add_subcommand("mult-bound", "multiplicity bound on the invariant set");
    c_mult_bound->add_option("--level", level, "cover level (default: minimal)");

    auto* c_mult_witness = app.add_subcommand(
        "mult-witness", "unbounded-multiplicity witness at a critical branch");
    c_mult_witness->add_option("--branch", branch_text, "critical branch series")
        ->required();

    auto* c_curve =
        app.add_subcommand("curve", "synthesize the curve of an itinerary");
    c_curve->add_option("--word", word_text, "itinerary (vertex indices)")
        ->required();
    c_curve->add_option("--level", level, "cover level (default: minimal)");

    auto* c_plaques =
        app.add_subcommand("plaques", "measure-weighted numeric plaques (CSV)");
    c_plaques->add_option("--level", level, "cover level (default: minimal)");
    c_plaques->add_option("--count", count, "number of plaques");
    c_plaques->add_option("--radius", radius, "sampling radius |t|");
    c_plaques->add_option("--points", plaque_points, "points per plaque");

    auto* c_normalize =
        app.add_subcommand("normalize", "formal normal form of a germ");
    c_normalize
        ->add_option("--germ", cfg.germ_text,
                     "germ JSON ({\"fz\",\"fw\",\"M\"}) inline or a file path")
        ->required();
    c_normalize->add_flag(
        "--full", full, "straighten and apply the Boettcher coordinate first");

    auto* c_complex_orbit =
        app.add_subcommand("complex-orbit", "complex orbit in log coordinates");
    c_complex_orbit->add_option("--z", z_text, "initial z as re[,im]");
    c_complex_orbit->add_option("--w", w_text, "initial w as re[,im]");

    auto* c_rate = app.add_subcommand("rate", "attraction-rate classification");
    c_rate->add_option("--z", z_text, "initial z as re[,im]");
    c_rate->add_option("--w", w_text, "initial w as re[,im]");

    auto* c_crosscheck = app.add_subcommand(
        "crosscheck", "curve points vs generic points rate agreement");
    c_crosscheck->add_option("--word", words,
                             "curve itinerary (repeatable; rotations closed)");
    c_crosscheck->add_option("--level", level, "cover level (default: minimal)");
    c_crosscheck->add_option("--count", count, "number of generic points");
    c_crosscheck->add_option("--radius", radius, "curve sampling radius");
    c_crosscheck->add_option("--points-per-curve", points_per_curve,
                             "sample points per curve");
    c_crosscheck->add_option("--tolerance", tolerance, "unused placeholder");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage problems are input errors
    }
    cfg.validate();

    auto graph_level = [&](const SkewMap& f) {
        return level >= 0 ? level : choose_markov_level(f);
    };

    if (c_critical->parsed()) {
        SkewMap f = load_map(cfg);
        json out = stamp(cfg, &f);
        json branches = json::array();
        for (const auto& b : f.critical_data(Rat(cfg.precision)))
            branches.push_back({{"series", b.series.str()},
                                {"J", b.J},
                                {"nu", b.nu},
                                {"crit_plus", b.in_crit_plus},
                                {"fate", fate_str(b.fate)},
                                {"steps", b.steps},
                                {"witness", b.witness}});
        out["branches"] = branches;
        emit(cfg, out);
    } else if (c_orbit->parsed()) {
        SkewMap f = load_map(cfg);
        BerkPoint x = parse_point(point_text, mode_of(cfg));
        json out = stamp(cfg, &f);
        json orbit = json::array();
        orbit.push_back(x.str());
        for (int k = 0; k < cfg.iterations; ++k) {
            x = f.apply_point(x);
            orbit.push_back(x.str());
        }
        out["orbit"] = orbit;
        emit(cfg, out);
    } else if (c_cover->parsed()) {
        SkewMap f = load_map(cfg);
        json out = stamp(cfg, &f);
        out["levels"] = cover_json(cover_to_depth(f, cfg.depth));
        emit(cfg, out);
    } else if (c_graph->parsed()) {
        SkewMap f = load_map(cfg);
        int N = graph_level(f);
        MarkovGraph g = build_graph(f, cover_to_depth(f, N), N);
        if (quotient) g = galois_quotient(g);
        ParryData p = parry(g);
        json out = stamp(cfg, &f);
        out["level"] = N;
        out["primitive"] = is_primitive(g);
        json vertices = json::array(), edges = json::array(),
             masses = json::array();
        for (const auto& v : g.vertices) vertices.push_back(v.str());
        for (int i = 0; i < g.size(); ++i)
            for (int j = 0; j < g.size(); ++j)
                if (g.adj[i][j]) edges.push_back(json::array({i, j}));
        for (const auto& m : p.M) masses.push_back(rat_str(m));
        out["vertices"] = vertices;
        out["edges"] = edges;
        out["parry"] = masses;
        emit(cfg, out);
    } else if (c_measure->parsed()) {
        SkewMap f = load_map(cfg);
        int N = graph_level(f);
        MarkovGraph g = build_graph(f, cover_to_depth(f, N), N);
        ParryData p = parry(g);
        json out = stamp(cfg, &f);
        out["level"] = N;
        json masses = json::array();
        for (const auto& m : p.M) masses.push_back(rat_str(m));
        out["parry"] = masses;
        if (!word_text.empty())
            out["cylinder_mass"] =
                rat_str(cylinder_mass(g, p, parse_word(word_text)));
        if (sample_length > 0)
            out["sample"] = sample_itinerary(g, p, sample_length, cfg.seed);
        if (!equidist_point.empty()) {
            EquidistReport rep = equidistribution_check(
                f, g, p, parse_series(equidist_point, mode_of(cfg)),
                cfg.iterations, Rat(cfg.precision));
            json weights = json::array(), deviation = json::array();
            for (const auto& w : rep.weights) weights.push_back(rat_str(w));
            for (const auto& d : rep.deviation)
                deviation.push_back(rat_str(d));
            out["equidistribution"] = {{"n", rep.n},
                                       {"counts", rep.counts},
                                       {"weights", weights},
                                       {"deviation", deviation},
                                       {"outside", rep.outside}};
        }
        emit(cfg, out);
    } else if (c_green->parsed()) {
        SkewMap f = load_map(cfg);
        GreenValue g =
            g_na(f, parse_point(point_text, mode_of(cfg)), cfg.iterations);
        json out = stamp(cfg, &f);
        switch (g.kind) {
        case GreenValue::Kind::Value: out["value"] = rat_str(g.value); break;
        case GreenValue::Kind::MinusInfinity: out["value"] = "-inf"; break;
        default: out["value"] = "unresolved"; break;
        }
        out["steps"] = g.steps;
        emit(cfg, out);
    } else if (c_classify->parsed()) {
        SkewMap f = load_map(cfg);
        Classification cls = classify_point(
            f, parse_point(point_text, mode_of(cfg)), cfg.iterations);
        json out = stamp(cfg, &f);
        switch (cls.kind) {
        case Classification::Kind::Escapes:
            out["kind"] = "escapes";
            out["exit_exponent"] = extrat_str(cls.exit_exponent);
            break;
        case Classification::Kind::CertifiedInK:
            out["kind"] = "certified_in_K";
            out["preperiod"] = cls.preperiod;
            out["period"] = cls.period;
            break;
        default: out["kind"] = "in_cover_at_depth"; break;
        }
        out["steps"] = cls.steps;
        emit(cfg, out);
    } else if (c_mult_bound->parsed()) {
        SkewMap f = load_map(cfg);
        int N = graph_level(f);
        json out = stamp(cfg, &f);
        out["level"] = N;
        out["report"] = mult_json(bound_multiplicity(f, cover_to_depth(f, N), N));
        emit(cfg, out);
    } else if (c_mult_witness->parsed()) {
        SkewMap f = load_map(cfg);
        MultiplicityReport rep = unbounded_witness(
            f, parse_series(branch_text, mode_of(cfg)), cfg.iterations);
        json out = stamp(cfg, &f);
        out["report"] = mult_json(rep);
        emit(cfg, out);
    } else if (c_curve->parsed()) {
        SkewMap f = load_map(cfg);
        int N = graph_level(f);
        MarkovGraph g = build_graph(f, cover_to_depth(f, N), N);
        CurveGerm germ = itinerary_to_curve(f, g, parse_word(word_text),
                                            Rat(cfg.precision));
        json out = stamp(cfg, &f);
        out["curve"] = {{"series", germ.series.str()},
                        {"itinerary", germ.itinerary},
                        {"m", germ.m},
                        {"certified_order", rat_str(germ.certified_order)}};
        emit(cfg, out);
    } else if (c_plaques->parsed()) {
        SkewMap f = load_map(cfg);
        int N = graph_level(f);
        MarkovGraph g = build_graph(f, cover_to_depth(f, N), N);
        ParryData p = parry(g);
        auto plaques =
            emit_plaques(f, g, p, count, cfg.depth, radius, cfg.seed,
                         Rat(cfg.precision), plaque_points);
        std::ostringstream os;
        os << "# artifact_version=" << kArtifactVersion
           << " map=" << map_json(f).dump() << " seed=" << cfg.seed
           << " depth=" << cfg.depth << " radius=" << radius << "\n"
           << plaques_to_csv(plaques);
        emit_text(cfg, os.str());
    } else if (c_normalize->parsed()) {
        json gj = parse_json(slurp(cfg.germ_text));
        if (!gj.contains("fz") || !gj.contains("fw") || !gj.contains("M"))
            throw input_error("germ JSON requires fz, fw and M");
        long M = gj["M"].get<long>();
        if (M <= 0) throw input_error("truncation M must be positive");
        GermMap germ{BivariateSeries::parse(gj["fz"].get<std::string>(), M),
                     BivariateSeries::parse(gj["fw"].get<std::string>(), M),
                     gj.value("d", 2L), gj.value("c", 2L)};
        NormalizeResult res =
            full ? full_normalize(germ, M) : normalize(germ, M);
        json out = stamp(cfg, nullptr);
        json ledger = json::array();
        for (const auto& stage : res.ledger)
            ledger.push_back({{"m", stage.m}, {"phi_m", stage.phi_m.str()}});
        out["ledger"] = ledger;
        out["conjugated"] = {{"fz", res.conjugated.fz.str()},
                             {"fw", res.conjugated.fw.str()},
                             {"M", M}};
        out["normal_form"] = map_json(res.normal_form);
        emit(cfg, out);
    } else if (c_complex_orbit->parsed()) {
        SkewMap f = load_map(cfg);
        OrbitRecord rec = iterate_orbit(f, parse_complex(z_text),
                                        parse_complex(w_text), cfg.iterations);
        std::ostringstream os;
        os << "# artifact_version=" << kArtifactVersion
           << " map=" << map_json(f).dump() << " seed=" << cfg.seed
           << " iterations=" << cfg.iterations << "\n"
           << orbit_to_csv(rec);
        emit_text(cfg, os.str());
    } else if (c_rate->parsed()) {
        SkewMap f = load_map(cfg);
        RateDecision dec = attraction_rate(iterate_orbit(
            f, parse_complex(z_text), parse_complex(w_text), cfg.iterations));
        json out = stamp(cfg, &f);
        out["kind"] = dec.kind == RateClass::RateC   ? "rate_c"
                      : dec.kind == RateClass::RateD ? "rate_d"
                                                     : "undecided";
        out["estimate"] = dec.estimate;
        emit(cfg, out);
    } else if (c_crosscheck->parsed()) {
        SkewMap f = load_map(cfg);
        int N = graph_level(f);
        MarkovGraph g = build_graph(f, cover_to_depth(f, N), N);
        std::vector<CurveGerm> curves;
        for (const auto& w : words)
            curves.push_back(itinerary_to_curve(f, g, parse_word(w),
                                                Rat(cfg.precision)));
        std::mt19937_64 gen(cfg.seed);
        auto unit = [&] { return ((double)(gen() >> 11)) * 0x1.0p-53; };
        double r = domain_radius(f);
        std::vector<std::pair<std::complex<double>, std::complex<double>>>
            generic;
        for (int k = 0; k < count; ++k)
            generic.push_back(
                {std::polar(0.8 * r * unit(), 6.283185307179586 * unit()),
                 std::polar(0.1 * r + 0.8 * r * unit(),
                            6.283185307179586 * unit())});
        CrosscheckReport rep = crosscheck(f, curves, generic, cfg.iterations,
                                          radius, points_per_curve);
        json out = stamp(cfg, &f);
        out["curve_points"] = rep.curve_points;
        out["offcurve_points"] = rep.offcurve_points;
        out["rate_d"] = rep.rate_d;
        out["rate_c"] = rep.rate_c;
        out["disagreements"] = rep.disagreements;
        emit(cfg, out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const hypothesis_error& e) {
        std::cerr << "hypothesis failure: " << e.what() << "\n";
        return 2;
    } catch (const budget_error& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
