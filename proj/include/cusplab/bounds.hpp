#pragma once
// Inequality checks: cusp geometry of punctured-torus bundles against
// arc-complex distances, distances under covers, and tabulated bound formulas.
#include <string>
#include <vector>

#include "cusplab/arcs.hpp"
#include "cusplab/bundle.hpp"

namespace cusplab::bounds {

enum class Status { Pass, Violation, ConsistentStrong, Inconclusive, Vacuous };
const char* status_name(Status s);  // PASS, VIOLATION, CONSISTENT(strong), INCONCLUSIVE, VACUOUS

struct Check {
    std::string name;
    int n = 1;          // power of the monodromy involved
    double lhs = 0;     // the check asserts lhs < rhs (or <=, see name)
    double rhs = 0;
    double margin = 0;  // rhs - lhs
    Status status = Status::Pass;
};

struct FiberedOptions {
    double tol = 1e-12;
    int depth = 8;
    bundle::Init init = bundle::Init::I;
    int stable_n = 20;
};

struct FiberedReport {
    std::string word;
    int chi = -1;
    double cusp_area = 0;
    double longitude = 0;
    double height = 0;
    double volume = 0;
    double residual = 0;
    std::vector<int> d_psi_n;  // d_psi_n[n-1]: exact translation distance of psi^n
    double stable_upper = 0;   // min over n <= stable_n of d(inf, psi^n inf)/n
    // The same cusp shrunk until its longitude is 2^(1/4).
    double waist_area = 0;
    double waist_height = 0;
    std::vector<Check> checks;
    std::vector<std::string> flags;

    bool has(Status s) const;
};

// chi = -1 only. Upper bounds (PASS/VIOLATION): area <= 9 d(psi^n)/n and
// height < 3 d(psi^n)/n for n <= n_max. Lower bounds against the stable
// estimate at both cusp sizes: CONSISTENT(strong) or INCONCLUSIVE.
// Errors: those of the bundle module; BadInput for n_max < 1.
FiberedReport verify_fibered(const std::string& word, int n_max, const FiberedOptions& opt = {});

struct ArcPair {
    arcs::NormalArc a, b;
};

struct LiftCheck {
    int pair = 0;
    int alpha = 0, beta = 0;  // lift indices
    int d_ab = 0;             // downstairs distance (exact)
    int lo = 0, hi = 0;       // certified interval for d(alpha, beta)
    bool upper_ok = false;    // hi <= d_ab, from a lifted path with disjoint steps
    double lower_lhs = 0;     // d_ab / (4050 n |chi|^6) - 2
    Status upper = Status::Pass;
    Status lower = Status::Pass;
};

struct LiftingReport {
    int degree = 1;
    int chi = -1;  // of the base
    std::vector<int> pair_distance;
    std::vector<LiftCheck> checks;
    bool has(Status s) const;
};

// Base and cover must both be once-punctured. BudgetExceeded when a
// downstairs distance is not found within `budget`; BadInput for arcs over
// another base.
LiftingReport verify_lifting(const CoverMap& cover, const std::vector<ArcPair>& pairs, int budget = 64);

struct QfBounds {
    double area_lo, area_hi, height_lo, height_hi;
};
// Pure evaluation for the quasi-Fuchsian estimates. NonNegativeChi for chi >= 0.
QfBounds qf_bound_values(int chi, int d);

} // namespace cusplab::bounds
