#pragma once
//
// Essential arcs on a triangulated punctured surface, and the arc complex.
//
// An arc is either an edge of the base triangulation, or a normal path: the
// list of exit slots (t_0,s_0), ..., (t_{k-1},s_{k-1}). The path starts at
// vertex s_0 of t_0, leaves each triangle through the listed side and ends at
// the vertex opposite the side through which it enters the last triangle.
// Paths are stored in the lexicographically smaller of their two directions.
//
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cusplab/farey.hpp"
#include "cusplab/surface.hpp"

namespace cusplab::arcs {

using Base = std::shared_ptr<const Triangulation>;
Base share(const Triangulation& T);

// An arc relative to some triangulation, without a base pointer.
struct Path {
    int edge = -1;            // edge label, or -1 for a normal path
    std::vector<Slot> slots;  // exit slots of a normal path
    bool is_edge() const { return edge >= 0; }
    friend auto operator<=>(const Path&, const Path&) = default;
};

class NormalArc {
public:
    NormalArc() = default;
    // NotAnArc for backtracking or ill-formed paths and for arcs with no
    // endpoint at the preferred puncture.
    static NormalArc edge_arc(Base base, int label);
    static NormalArc from_path(Base base, std::vector<Slot> slots);
    // Canonicalizes the direction but trusts the path otherwise.
    static NormalArc from_raw(Base base, Path p);

    const Base& base() const { return base_; }
    const Path& path() const { return path_; }
    bool is_edge() const { return path_.is_edge(); }
    int crossings() const { return static_cast<int>(path_.slots.size()); }

    // One weight per base edge, in the order of base->labels(). An edge arc
    // has the unit indicator of its edge and no crossings.
    std::vector<int> edge_weights() const;
    // 6 entries per triangle t: corner counts c_0..c_2 (strands cutting off
    // vertex v, between sides v+1 and v+2), then terminal counts tau_0..tau_2
    // (strands running from side v into vertex v).
    std::vector<int> corner_data() const;
    int coordinate_sum() const;
    // Punctures at the start and end of the stored direction.
    std::pair<int, int> endpoints() const;

    std::string to_string() const;  // "arc <w;c>" literal

    friend bool operator==(const NormalArc& a, const NormalArc& b) { return a.path_ == b.path_; }
    friend bool operator<(const NormalArc& a, const NormalArc& b);

private:
    Base base_;
    Path path_;
};

// Decodes coordinates by tracing strands; NotAnArc unless they describe one arc.
NormalArc from_coordinates(Base base, const std::vector<int>& weights, const std::vector<int>& corners);
// All arcs with the given edge weights (terminal placements are enumerated).
std::vector<NormalArc> from_weights(Base base, const std::vector<int>& weights);
// Parses "arc <w1,w2,...;c1,c2,...>" (corner part optional) or, on the
// once-punctured torus, "slope p/q".
NormalArc parse_arc(Base base, const std::string& text);

// Once-punctured torus with the standard gluing: edges 0, 1, 2 have slopes
// 1/0, 1/1, 0/1. BadInput on any other base.
NormalArc from_slope(Base torus, farey::Slope s);
farey::Slope to_slope(const NormalArc& a);

int intersection_number(const NormalArc& a, const NormalArc& b);

// Rewrites a path across the flip of `label` in T (result lives in T.flip(label)).
Path flip_forward(const Triangulation& T, int label, const Path& p);
// Rewrites a path in T.flip(label) back into T.
Path flip_backward(const Triangulation& T, int label, const Path& p);

// Flips from `base`, then a combinatorial isomorphism from the last
// triangulation back onto `base`.
struct MappingClass {
    Base base;
    std::vector<int> flips;
    Isomorphism iso;
    bool fixes_p = true;
};
MappingClass identity_class(Base base);
// Monodromy of an LR word on the standard once-punctured torus, acting on
// slopes as the word's matrix.
MappingClass from_word(Base torus, const std::string& word);
// Searches isomorphisms of the flipped triangulation onto the base; the
// first one (deterministic order) is used. BadInput if none.
MappingClass from_flips(Base base, const std::vector<int>& flips, int which_iso = 0);
// Triangulations along the flip sequence (size flips+1).
std::vector<Triangulation> flip_sequence(const Triangulation& base, const std::vector<int>& flips);

NormalArc apply_mcg(const MappingClass& phi, const NormalArc& a);
NormalArc apply_inverse(const MappingClass& phi, const NormalArc& a);

// Edges of the triangulation reached by `flips`, expressed over the base;
// edges without an endpoint at the preferred puncture are omitted.
std::vector<NormalArc> arcs_of(Base base, const std::vector<int>& flips);

// Flips the first crossed edge until the arc is an edge; returns the labels flipped.
std::vector<int> triangulation_containing(const NormalArc& a);

enum class DistanceStatus { Exact, Unreachable, BudgetExceeded };
const char* status_name(DistanceStatus s);

struct DistanceResult {
    DistanceStatus status = DistanceStatus::Unreachable;
    int value = -1;                // valid when Exact
    std::vector<NormalArc> path;   // a geodesic in the explored graph
    bool truncated = false;        // some neighbor exceeded the budget
};

// The 1-skeleton of the arc complex, explored lazily. Neighbors of an arc are
// the edges of triangulations containing it, reached by flips that never
// remove it; a triangulation whose newest edge exceeds `budget` (coordinate
// sum) is not explored further. Neighbor lists are cached.
class ArcComplex {
public:
    explicit ArcComplex(Base base, int budget = 64, int node_cap = 200000);

    struct Neighbors {
        std::vector<NormalArc> arcs;  // sorted by (coordinate sum, weights)
        bool truncated = false;
    };
    const Neighbors& neighbors(const NormalArc& a);

    // Exact values are distances in the explored graph. Paths there are real
    // paths in the arc complex, so a value is never below the true distance.
    DistanceResult distance(const NormalArc& a, const NormalArc& b, int radius_cap = 16);

    const Base& base() const { return base_; }
    int budget() const { return budget_; }

private:
    Base base_;
    int budget_;
    int node_cap_;
    std::map<Path, Neighbors> cache_;
};

enum class Certification { Stable, Heuristic };

struct TranslationResult {
    int value = -1;
    Certification cert = Certification::Heuristic;
    int radius = 0;               // candidate ball radius examined
    std::vector<int> running_min; // minimum after each radius
};

// min over v in growing balls around the base arcs of d(v, phi v).
TranslationResult translation_distance(const MappingClass& phi, ArcComplex& X, int max_radius = 4);

struct StableDistance {
    std::vector<int> a;          // a_n = d(v, phi^n v)
    std::vector<double> ratios;  // a_n / n
    double estimate = 0;         // running infimum
    bool truncated = false;      // stopped early at the budget or radius cap
};
StableDistance stable_distance_upper(const MappingClass& phi, int N, ArcComplex& X);

// The n lifts of an arc to a cover, over the cover's lifted triangulation.
std::vector<NormalArc> lift_arc(const CoverMap& cover, Base lifted, const NormalArc& a);

} // namespace cusplab::arcs
