#include "cusplab/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "cusplab/geometry.hpp"

namespace cusplab::bounds {

const char* status_name(Status s) {
    switch (s) {
    case Status::Pass: return "PASS";
    case Status::Violation: return "VIOLATION";
    case Status::ConsistentStrong: return "CONSISTENT(strong)";
    case Status::Inconclusive: return "INCONCLUSIVE";
    case Status::Vacuous: return "VACUOUS";
    }
    return "?";
}

bool FiberedReport::has(Status s) const {
    return std::any_of(checks.begin(), checks.end(), [&](const Check& c) { return c.status == s; });
}

bool LiftingReport::has(Status s) const {
    return std::any_of(checks.begin(), checks.end(), [&](const LiftCheck& c) { return c.upper == s || c.lower == s; });
}

namespace {

Check check(std::string name, int n, double lhs, double rhs, bool strict, Status ok, Status fail) {
    bool holds = strict ? lhs < rhs : lhs <= rhs;
    return {std::move(name), n, lhs, rhs, rhs - lhs, holds ? ok : fail};
}

} // namespace

FiberedReport verify_fibered(const std::string& word, int n_max, const FiberedOptions& opt) {
    if (n_max < 1) throw Error(Errc::BadInput, "n_max must be at least 1");
    if (opt.stable_n < 1) throw Error(Errc::BadInput, "stable_n must be at least 1");
    auto T = bundle::layered_triangulation(word);
    auto sys = bundle::gluing_system(T);
    auto sol = bundle::solve_shapes(sys, bundle::initial_shapes(T.num_tets, opt.init), opt.tol);
    auto cusp = bundle::maximal_cusp(T, sol.shapes, opt.depth);

    FiberedReport r;
    r.word = word;
    r.cusp_area = cusp.area;
    r.longitude = cusp.longitude;
    r.height = cusp.height;
    r.volume = bundle::volume(sol.shapes);
    r.residual = sol.residual;
    const double chi2 = double(r.chi) * r.chi, chi4 = chi2 * chi2;

    auto m = farey::word_to_matrix(word);
    for (int n = 1; n <= n_max; ++n) r.d_psi_n.push_back(farey::translation_distance(farey::power(m, n)));
    r.stable_upper = farey::stable_upper(m, opt.stable_n).estimate;

    double s = geometry::WAIST / r.longitude;
    r.waist_area = r.cusp_area * s * s;
    r.waist_height = r.waist_area / geometry::WAIST;

    for (int n = 1; n <= n_max; ++n) {
        double d = r.d_psi_n[n - 1];
        r.checks.push_back(check("n*area <= 9 chi^2 d(psi^n)", n, n * r.cusp_area, 9 * chi2 * d, false, Status::Pass,
                                 Status::Violation));
        r.checks.push_back(check("n*height < -3 chi d(psi^n)", n, n * r.height, -3.0 * r.chi * d, true, Status::Pass,
                                 Status::Violation));
    }
    const double su = r.stable_upper;
    auto lower = [&](std::string name, double lhs, double rhs) {
        r.checks.push_back(check(std::move(name), 1, lhs, rhs, true, Status::ConsistentStrong, Status::Inconclusive));
    };
    lower("stable_upper/(450 chi^4) < area", su / (450 * chi4), r.cusp_area);
    lower("stable_upper/(536 chi^4) < height", su / (536 * chi4), r.height);
    lower("stable_upper/(450 chi^4) < area at longitude 2^(1/4)", su / (450 * chi4), r.waist_area);
    lower("stable_upper/(536 chi^4) < height at longitude 2^(1/4)", su / (536 * chi4), r.waist_height);

    if (r.longitude <= geometry::WAIST) r.flags.push_back("longitude at most 2^(1/4)");
    if (!cusp.exhausted) r.flags.push_back("cusp search stopped at the node cap");
    return r;
}

LiftingReport verify_lifting(const CoverMap& cover, const std::vector<ArcPair>& pairs, int budget) {
    if (cover.base.num_punctures() != 1 || cover.lifted.num_punctures() != 1)
        throw Error(Errc::BadInput, "base and cover must be once-punctured");
    auto base = arcs::share(cover.base);
    auto lifted = arcs::share(cover.lifted);
    arcs::ArcComplex X(base, budget);

    LiftingReport r;
    r.degree = cover.degree;
    r.chi = -cover.base.num_triangles() / 2;
    const double denom = 4050.0 * r.degree * std::pow(std::abs(double(r.chi)), 6);

    for (int k = 0; k < static_cast<int>(pairs.size()); ++k) {
        const auto& [a, b] = pairs[k];
        if (!a.base()->same_gluing(cover.base) || !b.base()->same_gluing(cover.base))
            throw Error(Errc::BadInput, "arc is not over the cover's base");
        auto res = X.distance(arcs::NormalArc::from_raw(base, a.path()), arcs::NormalArc::from_raw(base, b.path()));
        if (res.status != arcs::DistanceStatus::Exact)
            throw Error(Errc::BudgetExceeded, "pair " + std::to_string(k) + ": downstairs distance not found");
        const int d = res.value;
        r.pair_distance.push_back(d);

        std::vector<std::vector<arcs::NormalArc>> lifts;
        for (const auto& x : res.path) lifts.push_back(arcs::lift_arc(cover, lifted, x));
        for (int i = 0; i < cover.degree; ++i)
            for (int j = 0; j < cover.degree; ++j) {
                const auto& alpha = lifts.front()[i];
                const auto& beta = lifts.back()[j];
                LiftCheck c;
                c.pair = k, c.alpha = i, c.beta = j, c.d_ab = d;
                int ab = alpha == beta ? -1 : arcs::intersection_number(alpha, beta);
                c.lo = ab < 0 ? 0 : ab == 0 ? 1 : 2;
                // alpha, then any lift of each interior path arc, then beta: every
                // step must be between disjoint arcs.
                if (d == 0) {
                    c.hi = ab < 0 ? 0 : -1;
                } else {
                    bool ok = true;
                    const arcs::NormalArc* prev = &alpha;
                    for (int step = 1; step <= d; ++step) {
                        const auto& next = step == d ? beta : lifts[step][0];
                        ok = ok && !(*prev == next) && arcs::intersection_number(*prev, next) == 0;
                        prev = &next;
                    }
                    c.hi = ok ? d : -1;
                }
                c.upper_ok = c.hi >= 0 && c.lo <= c.hi;
                if (!c.upper_ok) c.hi = d;
                c.upper = c.upper_ok ? Status::Pass : Status::Violation;
                c.lower_lhs = d / denom - 2;
                if (!(c.lower_lhs < c.lo)) c.lower = Status::Violation;
                else c.lower = c.lower_lhs < 0 ? Status::Vacuous : Status::Pass;
                r.checks.push_back(c);
            }
    }
    return r;
}

QfBounds qf_bound_values(int chi, int d) {
    if (chi >= 0) throw Error(Errc::NonNegativeChi, "chi = " + std::to_string(chi));
    if (d < 0) throw Error(Errc::BadInput, "distance must be nonnegative");
    const double c = chi, c2 = c * c, c4 = c2 * c2, lg = std::log(std::abs(c));
    return {
        d / (450 * c4) - 1 / (23 * c2),
        9 * c2 * d + std::abs(12 * c * lg + 26 * c),
        d / (536 * c4) - 1 / (27 * c2),
        -3 * c * d + 2 * lg + 5,
    };
}

} // namespace cusplab::bounds
