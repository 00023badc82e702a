#include "cusplab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "cusplab/arcs.hpp"
#include "cusplab/bounds.hpp"
#include "cusplab/bundle.hpp"
#include "cusplab/farey.hpp"
#include "cusplab/geometry.hpp"

namespace cusplab::cli {

using json = nlohmann::ordered_json;

std::vector<std::string> corpus(int max_len) {
    if (max_len < 2) throw Error(Errc::BadInput, "max_len must be at least 2");
    if (max_len > 30) throw Error(Errc::BadInput, "max_len too large");
    std::vector<std::string> out;
    for (int len = 2; len <= max_len; ++len) {
        std::set<std::string> names;
        for (unsigned long m = 1; m + 1 < (1UL << len); ++m) {
            std::string w(len, 'L');
            for (int i = 0; i < len; ++i)
                if (m >> i & 1) w[i] = 'R';
            std::string best = w, s = w;
            for (int swap = 0; swap < 2; ++swap) {
                for (int k = 0; k < len; ++k) {
                    std::rotate(s.begin(), s.begin() + 1, s.end());
                    best = std::max(best, s);
                }
                for (char& c : s) c = c == 'L' ? 'R' : 'L';
            }
            if (best == w) names.insert(w);
        }
        out.insert(out.end(), names.begin(), names.end());
    }
    return out;
}

CoverMap parse_cover(const std::string& text) {
    std::istringstream in(text);
    std::string line, surface;
    std::map<int, std::vector<int>> rep;
    int sheet = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line.substr(0, line.find('#')));
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "rep") {
            std::string label;
            if (!(ls >> label) || label.empty() || label.back() != ':')
                throw Error(Errc::BadInput, "expected 'rep <edge>: <perm>'");
            std::vector<int> perm;
            for (int x; ls >> x;) perm.push_back(x);
            rep[std::stoi(label.substr(0, label.size() - 1))] = perm;
        } else if (kw == "preferred_sheet") {
            if (!(ls >> sheet)) throw Error(Errc::BadInput, "expected 'preferred_sheet <k>'");
        } else {
            surface += line + "\n";
        }
    }
    if (rep.empty()) throw Error(Errc::BadInput, "cover file has no 'rep' lines");
    return build_cover(Triangulation::parse(surface), rep, sheet);
}

int worker_count() {
    const char* env = std::getenv("CUSPLAB_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    return n > 0 ? n : 1;
}

namespace {

// Results come back in index order whatever the scheduling.
template <class R>
std::vector<R> parallel_map(std::size_t n, const std::function<R(std::size_t)>& f) {
    std::vector<R> out(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < n;) out[i] = f(i);
    };
    int k = std::min<int>(worker_count(), static_cast<int>(n));
    std::vector<std::thread> pool;
    for (int t = 1; t < k; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return out;
}

int exit_code(Errc c) {
    switch (c) {
    case Errc::Diverged:
    case Errc::DegenerateShape:
    case Errc::MaxIterations:
    case Errc::NotSolved:
    case Errc::DepthUnstable:
    case Errc::Overflow:
    case Errc::BudgetExceeded: return kNumerical;
    default: return kUsage;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Errc::BadInput, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json header(const std::string& command, json config) {
    json j;
    j["schema"] = kSchema;
    config["subcommand"] = command;
    j["config"] = std::move(config);
    j["versions"] = {{"cusplab", kVersion}, {"surface", 1}, {"farey", 1}, {"arcs", 1},
                     {"geometry", 1},       {"bundle", 1},  {"bounds", 1}, {"cli", 1}};
    return j;
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

json complex_json(bundle::cplx z) { return json::array({z.real(), z.imag()}); }

json check_json(const bounds::Check& c) {
    return {{"name", c.name}, {"n", c.n},         {"lhs", c.lhs},
            {"rhs", c.rhs},   {"margin", c.margin}, {"status", bounds::status_name(c.status)}};
}

json fibered_json(const bounds::FiberedReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(check_json(c));
    return {{"word", r.word},
            {"chi", r.chi},
            {"volume", r.volume},
            {"residual", r.residual},
            {"cusp_area", r.cusp_area},
            {"longitude", r.longitude},
            {"height", r.height},
            {"d_psi_n", r.d_psi_n},
            {"stable_upper", r.stable_upper},
            {"waist_area", r.waist_area},
            {"waist_height", r.waist_height},
            {"checks", checks},
            {"flags", r.flags}};
}

// ---- subcommands ------------------------------------------------------------------------------

int farey_dist(const std::string& a, const std::string& b, std::ostream& out) {
    out << farey::distance(farey::parse_slope(a), farey::parse_slope(b)) << "\n";
    return kOk;
}

struct ArcDistArgs {
    std::string a, b, surface;
    int budget = 64, radius = 16;
};

int arc_dist(const ArcDistArgs& args, std::ostream& out) {
    Triangulation T = args.surface.empty() ? once_punctured_torus() : Triangulation::parse(read_file(args.surface));
    auto base = arcs::share(T);
    auto a = arcs::parse_arc(base, args.a), b = arcs::parse_arc(base, args.b);
    arcs::ArcComplex X(base, args.budget);
    auto res = X.distance(a, b, args.radius);
    json j = header("arc-dist", {{"a", args.a}, {"b", args.b}, {"surface", args.surface.empty() ? "S_1_1" : args.surface},
                                 {"budget", args.budget}, {"radius", args.radius}});
    j["status"] = arcs::status_name(res.status);
    j["distance"] = res.status == arcs::DistanceStatus::Exact ? json(res.value) : json(nullptr);
    json path = json::array();
    for (const auto& x : res.path) path.push_back(x.to_string());
    j["path"] = path;
    j["truncated"] = res.truncated;
    out << j.dump(2) << "\n";
    return kOk;
}

struct BundleArgs {
    std::string word;
    double tol = 1e-12;
    int depth = 8;
    std::string init = "i";
};

int bundle_report(const BundleArgs& args, std::ostream& out) {
    auto init = args.init == "regular" ? bundle::Init::Regular : bundle::Init::I;
    auto T = bundle::layered_triangulation(args.word);
    auto sys = bundle::gluing_system(T);
    auto sol = bundle::solve_shapes(sys, bundle::initial_shapes(T.num_tets, init), args.tol);
    auto cusp = bundle::maximal_cusp(T, sol.shapes, args.depth);
    json j = header("bundle-report", {{"word", args.word}, {"tol", args.tol}, {"depth", args.depth}, {"init", args.init}});
    j["word"] = args.word;
    json shapes = json::array();
    for (auto z : sol.shapes) shapes.push_back(complex_json(z));
    j["shapes"] = shapes;
    j["residual"] = sol.residual;
    j["iterations"] = sol.iterations;
    j["volume"] = bundle::volume(sol.shapes);
    j["cusp_area"] = cusp.area;
    j["longitude"] = cusp.longitude;
    j["height"] = cusp.height;
    j["cusp_volume"] = cusp.cusp_volume;
    j["lambda"] = complex_json(cusp.section.lambda);
    j["mu"] = complex_json(cusp.section.mu);
    j["depth_schedule"] = cusp.depth_schedule;
    j["search_nodes"] = cusp.nodes;
    j["search_exhausted"] = cusp.exhausted;
    out << j.dump(2) << "\n";
    return kOk;
}

struct CorpusArgs {
    int max_len = 6;
    int n_max = 4;
    int stable_n = 20;
    int depth = 8;
    std::string out_path;
};

int verify_corpus(const CorpusArgs& args, std::ostream& out, std::ostream& err) {
    auto words = corpus(args.max_len);
    bounds::FiberedOptions opt;
    opt.depth = args.depth;
    opt.stable_n = args.stable_n;
    struct Item {
        std::optional<bounds::FiberedReport> report;
        std::string error;
        int code = kOk;
    };
    auto items = parallel_map<Item>(words.size(), [&](std::size_t i) {
        Item it;
        try {
            it.report = bounds::verify_fibered(words[i], args.n_max, opt);
        } catch (const Error& e) {
            it.error = e.what();
            it.code = exit_code(e.code());
        }
        return it;
    });

    std::ostringstream csv;
    csv << "word,area,longitude,height";
    for (int n = 1; n <= args.n_max; ++n) csv << ",d" << n;
    csv << ",stable_upper,margin_area_upper,margin_height_upper,margin_area_lower,margin_height_lower,"
           "waist_area,waist_height,status,flags\n";
    json reports = json::array();
    int violations = 0, inconclusive = 0, failures = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& it = items[i];
        if (!it.report) {
            ++failures;
            csv << words[i] << ",,,";
            for (int n = 0; n < args.n_max; ++n) csv << ",";
            csv << ",,,,,,,ERROR," << it.error << "\n";
            reports.push_back({{"word", words[i]}, {"error", it.error}});
            continue;
        }
        const auto& r = *it.report;
        auto min_margin = [&](std::string_view prefix, bool at_waist) {
            double m = 1e300;
            for (const auto& c : r.checks)
                if (c.name.starts_with(prefix) && (c.name.find("2^(1/4)") != std::string::npos) == at_waist)
                    m = std::min(m, c.margin);
            return m;
        };
        std::string status = r.has(bounds::Status::Violation)      ? "VIOLATION"
                             : r.has(bounds::Status::Inconclusive) ? "INCONCLUSIVE"
                                                                   : "PASS";
        violations += status == "VIOLATION";
        inconclusive += status == "INCONCLUSIVE";
        csv << r.word << "," << num(r.cusp_area) << "," << num(r.longitude) << "," << num(r.height);
        for (int d : r.d_psi_n) csv << "," << d;
        csv << "," << num(r.stable_upper) << "," << num(min_margin("n*area", false)) << ","
            << num(min_margin("n*height", false)) << "," << num(min_margin("stable_upper/(450", false)) << ","
            << num(min_margin("stable_upper/(536", false)) << "," << num(r.waist_area) << "," << num(r.waist_height)
            << "," << status << ",";
        for (std::size_t k = 0; k < r.flags.size(); ++k) csv << (k ? ";" : "") << r.flags[k];
        csv << "\n";
        reports.push_back(fibered_json(r));
    }
    if (!args.out_path.empty()) {
        std::ofstream f(args.out_path);
        if (!f) throw Error(Errc::BadInput, "cannot write " + args.out_path);
        f << csv.str();
    }
    json j = header("verify-thm14", {{"max_word_len", args.max_len}, {"n_max", args.n_max},
                                     {"stable_n", args.stable_n}, {"depth", args.depth}, {"out", args.out_path}});
    j["words"] = words.size();
    j["violations"] = violations;
    j["inconclusive"] = inconclusive;
    j["failures"] = failures;
    j["reports"] = reports;
    out << j.dump(2) << "\n";
    if (violations) return kViolation;
    if (failures) {
        err << failures << " word(s) failed numerically\n";
        return kNumerical;
    }
    return kOk;
}

struct LiftingArgs {
    std::string cover, pairs;
    int budget = 64;
};

int verify_lifting(const LiftingArgs& args, std::ostream& out) {
    auto cover = parse_cover(read_file(args.cover));
    auto base = arcs::share(cover.base);
    json pj;
    try {
        pj = json::parse(read_file(args.pairs));
    } catch (const json::exception& e) {
        throw Error(Errc::BadInput, std::string("pairs file: ") + e.what());
    }
    const json& list = pj.is_object() ? pj.at("pairs") : pj;
    std::vector<bounds::ArcPair> pairs;
    std::vector<std::pair<std::string, std::string>> text;
    for (const auto& p : list) {
        if (!p.is_array() || p.size() != 2) throw Error(Errc::BadInput, "each pair must be a two-element array");
        auto a = p[0].get<std::string>(), b = p[1].get<std::string>();
        pairs.push_back({arcs::parse_arc(base, a), arcs::parse_arc(base, b)});
        text.emplace_back(a, b);
    }
    auto r = bounds::verify_lifting(cover, pairs, args.budget);
    json j = header("verify-lifting", {{"cover", args.cover}, {"pairs", args.pairs}, {"budget", args.budget}});
    j["degree"] = r.degree;
    j["chi"] = r.chi;
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"a", text[c.pair].first},
                          {"b", text[c.pair].second},
                          {"alpha", c.alpha},
                          {"beta", c.beta},
                          {"d_ab", c.d_ab},
                          {"d_lift_interval", json::array({c.lo, c.hi})},
                          {"upper", bounds::status_name(c.upper)},
                          {"lower_lhs", c.lower_lhs},
                          {"lower", bounds::status_name(c.lower)}});
    j["checks"] = checks;
    j["violation"] = r.has(bounds::Status::Violation);
    j["note"] = "VACUOUS marks a lower bound whose left side is negative; it holds but carries no information";
    out << j.dump(2) << "\n";
    return r.has(bounds::Status::Violation) ? kViolation : kOk;
}

struct LemmaArgs {
    std::uint64_t seed = 0;
    int samples = 100000;
};

int lemma_suite(const LemmaArgs& args, std::ostream& out) {
    using namespace geometry;
    std::mt19937_64 rng(args.seed);
    std::uniform_real_distribution<double> u(0, 1);
    const double tol = 1e-9;
    json lemmas = json::array();
    bool ok_all = true;

    // Tangent segments between disjoint horoballs.
    {
        int bad = 0;
        double min_l1 = 1e300, max_l2 = 0, eq1 = 0, eq2 = 0;
        for (int k = 0; k < args.samples; ++k) {
            Horoball a = Horoball::finite({4 * u(rng) - 2, 4 * u(rng) - 2}, std::exp(6 * u(rng) - 3));
            Horoball b = u(rng) < 0.3 ? Horoball::infinity(std::exp(6 * u(rng) - 3))
                                      : Horoball::finite({4 * u(rng) - 2, 4 * u(rng) - 2}, std::exp(6 * u(rng) - 3));
            double dist = horoball_distance(a, b);
            if (dist < 0) {
                // Shrink b until the pair is disjoint, by a random margin.
                double f = std::exp(dist - 3 * u(rng));
                b = b.at_infinity ? Horoball::infinity(b.diameter / f) : Horoball::finite(b.center, b.diameter * f);
            }
            auto t = tangent_lengths(a, b);
            min_l1 = std::min(min_l1, t.l1);
            max_l2 = std::max(max_l2, t.l2);
            bad += t.l1 < TANGENT_MIN - tol || t.l2 > std::numbers::sqrt2 + tol;
        }
        for (int k = 0; k < 1000; ++k) {
            double d = std::exp(6 * u(rng) - 3);
            auto t = tangent_lengths(Horoball::finite({u(rng), u(rng)}, d), Horoball::infinity(d));
            eq1 = std::max(eq1, std::abs(t.l1 - TANGENT_MIN));
            eq2 = std::max(eq2, std::abs(t.l2 - std::numbers::sqrt2));
        }
        bool ok = bad == 0 && eq1 < tol && eq2 < tol;
        ok_all = ok_all && ok;
        lemmas.push_back({{"name", "tangent lengths: l1 >= ln(3+2 sqrt 2), l2 <= sqrt 2"},
                          {"samples", args.samples},
                          {"violations", bad},
                          {"min_l1", min_l1},
                          {"max_l2", max_l2},
                          {"tangent_equality_error", std::max(eq1, eq2)},
                          {"status", ok ? "PASS" : "VIOLATION"}});
    }
    // Exponential growth of cone-cusp regions.
    {
        int bad = 0, n = std::max(1, args.samples / 10);
        for (int k = 0; k < n; ++k) {
            ConeCuspParams p{0.01 + 10 * u(rng), 6 * std::numbers::pi * u(rng), 5 * u(rng)};
            double x = 6 * u(rng), d = 4 * u(rng);
            double lhs = cone_cusp_area(p, x + d), rhs = std::exp(d) * cone_cusp_area(p, x);
            bad += lhs < rhs - 1e-12 * rhs;
        }
        ok_all = ok_all && bad == 0;
        lemmas.push_back({{"name", "cone cusp growth: area(x+d) >= e^d area(x)"},
                          {"samples", n},
                          {"violations", bad},
                          {"status", bad == 0 ? "PASS" : "VIOLATION"}});
    }
    // Disk packing count for arcs of the shadow radius.
    {
        double worst = 0;
        for (int chi = -1; chi >= -4; --chi)
            for (int d = 1; d <= 50; ++d) {
                double want = std::sqrt(3.0) * d / (8 * std::pow(std::numbers::pi, 4) * std::pow(double(chi), 4));
                worst = std::max(worst, std::abs(packing_area_lower(2L * d, shadow_radius(chi)) / want - 1));
            }
        bool ok = worst < 1e-12;
        ok_all = ok_all && ok;
        lemmas.push_back({{"name", "packing area of 2d shadow disks"},
                          {"relative_error", worst},
                          {"status", ok ? "PASS" : "VIOLATION"}});
    }
    json j = header("lemma-suite", {{"seed", args.seed}, {"samples", args.samples}});
    j["lemmas"] = lemmas;
    out << j.dump(2) << "\n";
    return ok_all ? kOk : kViolation;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cusp geometry and arc-complex distances of punctured-surface bundles", "cusplab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string fa, fb;
    auto* cmd_farey = app.add_subcommand("farey-dist", "Farey-graph distance between two slopes");
    cmd_farey->add_option("a", fa, "slope p/q or inf")->required();
    cmd_farey->add_option("b", fb, "slope p/q or inf")->required();

    ArcDistArgs ad;
    auto* cmd_arc = app.add_subcommand("arc-dist", "Arc-complex distance between two arcs");
    cmd_arc->add_option("a", ad.a, "arc literal: 'arc <w;c>' or 'slope p/q'")->required();
    cmd_arc->add_option("b", ad.b, "arc literal")->required();
    cmd_arc->add_option("--surface", ad.surface, "triangulation file (default: once-punctured torus)");
    cmd_arc->add_option("--budget", ad.budget, "coordinate-sum cap for neighbors")->check(CLI::PositiveNumber);
    cmd_arc->add_option("--radius", ad.radius, "BFS radius cap")->check(CLI::PositiveNumber);

    BundleArgs br;
    auto* cmd_bundle = app.add_subcommand("bundle-report", "Hyperbolic structure and maximal cusp of a bundle");
    cmd_bundle->add_option("word", br.word, "monodromy word in L and R")->required();
    cmd_bundle->add_option("--tol", br.tol, "residual tolerance")->check(CLI::PositiveNumber);
    cmd_bundle->add_option("--depth", br.depth, "initial development depth")->check(CLI::PositiveNumber);
    cmd_bundle->add_option("--init", br.init, "initial shapes")->check(CLI::IsMember({"i", "regular"}));

    CorpusArgs tv;
    auto* cmd_corpus = app.add_subcommand("verify-thm14", "Cusp area and height bounds over the word corpus");
    cmd_corpus->add_option("--max-word-len", tv.max_len, "longest corpus word")->check(CLI::Range(2, 20));
    cmd_corpus->add_option("--n-max", tv.n_max, "largest power checked")->check(CLI::Range(1, 64));
    cmd_corpus->add_option("--stable-n", tv.stable_n, "powers used for the stable distance")->check(CLI::Range(1, 1000));
    cmd_corpus->add_option("--depth", tv.depth, "initial development depth")->check(CLI::PositiveNumber);
    cmd_corpus->add_option("--out", tv.out_path, "CSV report path");

    LiftingArgs lf;
    auto* cmd_lift = app.add_subcommand("verify-lifting", "Arc-complex distances under a finite cover");
    cmd_lift->add_option("--cover", lf.cover, "cover file")->required();
    cmd_lift->add_option("--pairs", lf.pairs, "JSON list of arc-literal pairs")->required();
    cmd_lift->add_option("--budget", lf.budget, "coordinate-sum cap downstairs")->check(CLI::PositiveNumber);

    LemmaArgs lm;
    auto* cmd_lemma = app.add_subcommand("lemma-suite", "Randomized checks of the hyperbolic-geometry lemmas");
    cmd_lemma->add_option("--seed", lm.seed, "random seed");
    cmd_lemma->add_option("--samples", lm.samples, "random samples")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    try {
        if (*cmd_farey) return farey_dist(fa, fb, out);
        if (*cmd_arc) return arc_dist(ad, out);
        if (*cmd_bundle) return bundle_report(br, out);
        if (*cmd_corpus) return verify_corpus(tv, out, err);
        if (*cmd_lift) return verify_lifting(lf, out);
        if (*cmd_lemma) return lemma_suite(lm, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.code());
    }
    return kUsage;
}

} // namespace cusplab::cli
