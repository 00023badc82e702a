// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "cusplab/arcs.hpp"
#include "cusplab/bounds.hpp"
#include "cusplab/bundle.hpp"
#include "cusplab/cli.hpp"
#include "cusplab/farey.hpp"
#include "cusplab/geometry.hpp"
#include "farey_oracle.hpp"
#include "horoball_oracle.hpp"

using namespace cusplab;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const bundle::cplx kRegular{0.5, std::sqrt(3.0) / 2};

// Corpus reports shared by criteria 3, 4 and 10.
std::vector<bounds::FiberedReport>& corpus_reports() {
    static std::vector<bounds::FiberedReport> reports = [] {
        std::vector<bounds::FiberedReport> out;
        for (const auto& w : cli::corpus(6)) out.push_back(bounds::verify_fibered(w, 4));
        return out;
    }();
    return reports;
}

Outcome figure_eight_shapes() {
    auto t0 = Clock::now();
    auto T = bundle::layered_triangulation("RL");
    auto sol = bundle::solve_shapes(bundle::gluing_system(T), bundle::initial_shapes(T.num_tets, bundle::Init::I));
    double secs = seconds_since(t0);
    double err = 0;
    for (auto z : sol.shapes) err = std::max(err, std::abs(z - kRegular));
    bool ok = sol.residual < 1e-12 && err < 1e-9 && secs < 1;
    return {ok, fmt("residual %.2e, max |z - (1+i sqrt3)/2| = %.2e, %.3f s", sol.residual, err, secs)};
}

Outcome figure_eight_cusp() {
    auto t0 = Clock::now();
    auto want = oracle::figure_eight_cusp(10);
    auto T = bundle::layered_triangulation("RL");
    auto sol = bundle::solve_shapes(bundle::gluing_system(T), bundle::initial_shapes(T.num_tets, bundle::Init::I));
    auto at8 = bundle::maximal_cusp(T, sol.shapes, 8);
    auto at16 = bundle::maximal_cusp(T, sol.shapes, 16);
    double secs = seconds_since(t0);
    double err = std::abs(at8.area - 2 * std::sqrt(3.0)), oracle_err = std::abs(at8.area - want.area);
    double drift = std::abs(at16.area - at8.area);
    bool ok = err < 1e-6 && oracle_err < 1e-6 && drift < 1e-6 && at8.exhausted && secs < 10;
    return {ok, fmt("area %.12f, |area - 2 sqrt3| = %.2e, |area - oracle| = %.2e, depth 8 vs 16 drift %.2e, %.2f s",
                    at8.area, err, oracle_err, drift, secs)};
}

Outcome upper_bounds() {
    auto t0 = Clock::now();
    auto& reports = corpus_reports();
    double secs = seconds_since(t0);
    int checks = 0, violations = 0;
    double worst = 1e300;
    for (const auto& r : reports)
        for (const auto& c : r.checks)
            if (c.status == bounds::Status::Pass || c.status == bounds::Status::Violation) {
                ++checks;
                violations += c.status == bounds::Status::Violation;
                worst = std::min(worst, c.margin);
            }
    bool ok = violations == 0 && secs < 300;
    return {ok, fmt("%zu words, %d checks (n <= 4), %d violations, smallest margin %.4f, %.1f s", reports.size(), checks,
                    violations, worst, secs)};
}

Outcome lower_bounds() {
    auto& reports = corpus_reports();
    int checks = 0, inconclusive = 0;
    double worst_ratio = 0;  // bound / value at the maximal cusp
    for (const auto& r : reports)
        for (const auto& c : r.checks)
            if (c.status == bounds::Status::ConsistentStrong || c.status == bounds::Status::Inconclusive) {
                ++checks;
                inconclusive += c.status == bounds::Status::Inconclusive;
                if (c.name.find("2^(1/4)") == std::string::npos) worst_ratio = std::max(worst_ratio, c.lhs / c.rhs);
            }
    return {inconclusive == 0, fmt("%d checks at N = 20 (both cusp sizes), %d inconclusive, largest bound/value %.2e",
                                   checks, inconclusive, worst_ratio)};
}

Outcome farey_distances() {
    auto t0 = Clock::now();
    const long long bound = 20;
    oracle::FareyBox box(2 * bound);
    std::vector<int> in;
    for (int i = 0; i < box.size(); ++i) {
        auto [p, q] = box.vertex(i);
        if (std::llabs(p) <= bound && q <= bound) in.push_back(i);
    }
    long pairs = 0, mismatches = 0;
    for (int i : in) {
        auto dist = box.bfs(i);
        auto [p, q] = box.vertex(i);
        auto s = farey::make_slope(p, q);
        for (int j : in) {
            auto [r, t] = box.vertex(j);
            ++pairs;
            mismatches += farey::distance(s, farey::make_slope(r, t)) != dist[j];
        }
    }
    double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 60,
            fmt("%ld slope pairs with |p|,|q| <= 20, %ld mismatches, %.1f s", pairs, mismatches, secs)};
}

Outcome arc_farey_cross() {
    auto torus = arcs::share(once_punctured_torus());
    std::vector<farey::Slope> slopes;
    for (long long q = 0; q <= 40; ++q)
        for (long long p = -40; p <= 40; ++p) {
            if (std::gcd(std::llabs(p), q) != 1 || (q == 0 && p != 1)) continue;
            if (std::llabs(p) + q + std::llabs(p - q) - 3 <= 32) slopes.push_back({p, q});
        }
    std::mt19937_64 rng(0);
    std::uniform_int_distribution<std::size_t> pick(0, slopes.size() - 1);
    arcs::ArcComplex X(torus, 32);
    int mismatches = 0, pairs = 1000;
    for (int k = 0; k < pairs; ++k) {
        auto s = slopes[pick(rng)], t = slopes[pick(rng)];
        auto res = X.distance(arcs::from_slope(torus, s), arcs::from_slope(torus, t));
        bool same = res.status == arcs::DistanceStatus::Exact && res.value == farey::distance(s, t);
        mismatches += !same;
    }
    return {mismatches == 0, fmt("%d random pairs among %zu arcs of coordinate sum <= 32, %d mismatches", pairs,
                                 slopes.size(), mismatches)};
}

Outcome tangent_extremals() {
    using namespace geometry;
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> u(0, 1);
    const double tol = 1e-9;
    int bad = 0, n = 100000;
    for (int k = 0; k < n; ++k) {
        Horoball a = Horoball::finite({4 * u(rng) - 2, 4 * u(rng) - 2}, std::exp(6 * u(rng) - 3));
        Horoball b = u(rng) < 0.3 ? Horoball::infinity(std::exp(6 * u(rng) - 3))
                                  : Horoball::finite({4 * u(rng) - 2, 4 * u(rng) - 2}, std::exp(6 * u(rng) - 3));
        double dist = horoball_distance(a, b);
        if (dist < 0) {
            double f = std::exp(dist - 3 * u(rng));
            b = b.at_infinity ? Horoball::infinity(b.diameter / f) : Horoball::finite(b.center, b.diameter * f);
        }
        auto t = tangent_lengths(a, b);
        bad += t.l1 < TANGENT_MIN - tol || t.l2 > std::numbers::sqrt2 + tol;
    }
    double eq = 0;
    for (int k = 0; k < 1000; ++k) {
        // Tangent pairs: a finite ball touching the ball at infinity, and two touching finite balls.
        double d = std::exp(6 * u(rng) - 3);
        bundle::cplx c{u(rng), u(rng)}, v{u(rng) + 2, u(rng)};
        auto t1 = tangent_lengths(Horoball::finite(c, d), Horoball::infinity(d));
        auto t2 = tangent_lengths(Horoball::finite(c, d), Horoball::finite(v, std::norm(c - v) / d));
        for (auto t : {t1, t2}) eq = std::max({eq, std::abs(t.l1 - TANGENT_MIN), std::abs(t.l2 - std::numbers::sqrt2)});
    }
    return {bad == 0 && eq < tol, fmt("%d disjoint pairs, %d violations; tangent pairs reach equality to %.2e", n, bad, eq)};
}

Outcome cone_growth() {
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> u(0, 1);
    int bad = 0, n = 10000;
    for (int k = 0; k < n; ++k) {
        geometry::ConeCuspParams p{0.01 + 10 * u(rng), 6 * std::numbers::pi * u(rng), 5 * u(rng)};
        double x = 6 * u(rng), d = 4 * u(rng);
        double lhs = geometry::cone_cusp_area(p, x + d), rhs = std::exp(d) * geometry::cone_cusp_area(p, x);
        bad += lhs < rhs - 1e-12 * rhs;
    }
    return {bad == 0, fmt("%d samples, %d violations at relative tolerance 1e-12", n, bad)};
}

Outcome lifting_upper_bound() {
    auto cover = build_cover(once_punctured_torus(), {{0, {0, 1, 2}}, {1, {1, 0, 2}}, {2, {0, 2, 1}}});
    auto torus = arcs::share(cover.base);
    std::vector<farey::Slope> slopes;
    for (long long q = 0; q <= 5; ++q)
        for (long long p = -5; p <= 5; ++p)
            if (std::gcd(std::llabs(p), q) == 1 && !(q == 0 && p != 1)) slopes.push_back({p, q});
    std::vector<bounds::ArcPair> pairs;
    std::array<int, 4> per{};
    for (std::size_t i = 0; i < slopes.size(); ++i)
        for (std::size_t j = i + 1; j < slopes.size(); ++j) {
            int d = farey::distance(slopes[i], slopes[j]);
            if (d < 1 || d > 3 || per[d] >= 8) continue;
            ++per[d];
            pairs.push_back({arcs::from_slope(torus, slopes[i]), arcs::from_slope(torus, slopes[j])});
        }
    auto r = bounds::verify_lifting(cover, pairs, 32);
    int upper_fail = 0, not_vacuous = 0, tight = 0;
    for (const auto& c : r.checks) {
        upper_fail += c.upper != bounds::Status::Pass;
        not_vacuous += c.lower != bounds::Status::Vacuous;
        tight += c.lo == c.hi;
    }
    bool ok = pairs.size() >= 20 && cover.lifted.num_punctures() == 1 && cover.lifted.num_triangles() == 6 &&
              upper_fail == 0 && not_vacuous == 0;
    return {ok, fmt("S_2,1 -> S_1,1 degree %d; %zu pairs (d = 1,2,3: %d,%d,%d), %zu lift pairs, %d upper-bound "
                    "failures, lower bound VACUOUS in all (%d labeled otherwise), %d lift distances pinned exactly",
                    r.degree, pairs.size(), per[1], per[2], per[3], r.checks.size(), upper_fail, not_vacuous, tight)};
}

Outcome longitude_waist() {
    auto& reports = corpus_reports();
    int bad = 0;
    double shortest = 1e300;
    for (const auto& r : reports) {
        bad += !(r.longitude > geometry::WAIST);
        shortest = std::min(shortest, r.longitude);
    }
    return {bad == 0, fmt("%zu words, %d at or below 2^(1/4) = %.6f, shortest longitude %.6f", reports.size(), bad,
                          geometry::WAIST, shortest)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"RL shapes are regular", figure_eight_shapes},
        {"RL maximal cusp area is 2 sqrt 3", figure_eight_cusp},
        {"area and height upper bounds over the corpus", upper_bounds},
        {"lower bounds against the stable distance", lower_bounds},
        {"continued-fraction distance vs brute force", farey_distances},
        {"arc complex vs Farey graph", arc_farey_cross},
        {"tangent length extremals", tangent_extremals},
        {"cone cusp growth", cone_growth},
        {"distances under a degree-3 cover", lifting_upper_bound},
        {"longitudes exceed 2^(1/4)", longitude_waist},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("criterion %zu: %s  %s: %s\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
