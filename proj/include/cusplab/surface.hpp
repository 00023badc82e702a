#pragma once
//
// Combinatorial ideal triangulations of punctured surfaces.
//
// Conventions: triangle vertices 0,1,2 run counterclockwise; side i is opposite
// vertex i and runs from vertex i+1 to vertex i+2 (indices mod 3). A gluing
// (t,s) <-> (t',s') reverses direction, identifying vertex s+1 of t with vertex
// s'+2 of t' and vertex s+2 with vertex s'+1. With this rule every gluing is
// orientation-compatible, so orientability is checked at parse time, where a
// gluing may be marked as orientation-reversing.
//
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cusplab/error.hpp"

namespace cusplab {

struct Slot {
    int tri = -1;
    int side = -1;
    friend auto operator<=>(const Slot&, const Slot&) = default;
};

inline int slot_index(Slot s) { return 3 * s.tri + s.side; }
inline int mod3(int x) { return ((x % 3) + 3) % 3; }

// The quadrilateral around a flippable edge. Slot (t1,s1) is the lower slot of
// the edge. Apexes: c = vertex s1 of t1, d = vertex s2 of t2; the old diagonal
// joins x = vertex s1+1 and y = vertex s1+2 of t1.
struct FlipSite {
    int t1, s1, t2, s2;
};

// An orientation-preserving combinatorial isomorphism: triangle t goes to
// tri[t], with vertex v of t going to vertex (v + rot[t]) mod 3.
struct Isomorphism {
    std::vector<int> tri;
    std::vector<int> rot;
    Slot apply(Slot s) const { return {tri[s.tri], mod3(s.side + rot[s.tri])}; }
    Isomorphism inverse() const;
};

struct CanonicalForm {
    std::vector<int> code;
    std::uint64_t hash = 0;
    friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) { return a.code == b.code; }
};

class Triangulation {
public:
    Triangulation() = default;

    // partner[t][s] is the slot glued to (t,s). reversed[t][s] marks a gluing
    // that reverses orientation relative to the default rule; such tables are
    // re-oriented when possible. Puncture ids are corner orbits numbered by
    // first appearance in (triangle, vertex) order.
    static Triangulation build(const std::vector<std::array<Slot, 3>>& partner,
                               int preferred_puncture = 0, std::string name = "T",
                               const std::vector<std::array<bool, 3>>& reversed = {});

    static Triangulation parse(const std::string& text);
    std::string serialize() const;

    const std::string& name() const { return name_; }
    int num_triangles() const { return static_cast<int>(partner_.size()); }
    int num_edges() const { return 3 * num_triangles() / 2; }
    int euler_characteristic() const { return num_triangles() - num_edges(); }
    int num_punctures() const { return num_punctures_; }
    int preferred_puncture() const { return preferred_; }

    Slot partner(Slot s) const { return partner_[s.tri][s.side]; }
    int label(Slot s) const { return label_[s.tri][s.side]; }
    int puncture(int tri, int vertex) const { return punct_[tri][vertex]; }
    // Punctures at the two ends of a side: (vertex s+1, vertex s+2).
    std::pair<int, int> side_ends(Slot s) const {
        return {punct_[s.tri][mod3(s.side + 1)], punct_[s.tri][mod3(s.side + 2)]};
    }

    std::vector<int> labels() const;
    // Both slots carrying an edge label, lower slot first.
    std::pair<Slot, Slot> slots_of(int label) const;
    bool has_label(int label) const;
    int next_label() const { return next_label_; }

    bool flippable(int label) const;
    FlipSite flip_site(int label) const;
    // Replaces the edge with the other diagonal of its quadrilateral. Only the
    // two triangles of the quadrilateral change: new t1 = (c,x,d), new
    // t2 = (d,y,c), the new edge sits on side 1 of both and gets a fresh label.
    Triangulation flip(int label) const;

    Triangulation with_preferred(int puncture) const;

    CanonicalForm canonical_form() const;
    // All orientation-preserving isomorphisms onto `other` (respecting the
    // preferred puncture when `respect_preferred`).
    std::vector<Isomorphism> isomorphisms_to(const Triangulation& other,
                                             bool respect_preferred = true) const;
    // Same combinatorics including triangle order and gluing (labels ignored).
    bool same_gluing(const Triangulation& other) const;

private:
    std::string name_;
    std::vector<std::array<Slot, 3>> partner_;
    std::vector<std::array<int, 3>> label_;
    std::vector<std::array<int, 3>> punct_;
    int num_punctures_ = 0;
    int preferred_ = 0;
    int next_label_ = 0;

    std::vector<int> encode_from(int t0, int r0, std::vector<int>* order = nullptr,
                                 std::vector<int>* rots = nullptr) const;
    void assign_default_labels();
    void compute_punctures();
};

// Standard two-triangle once-punctured torus: (0,k) <-> (1,k) for k = 0,1,2.
Triangulation once_punctured_torus();
// Four-triangle twice-punctured torus (a 2-fold cover of the above).
Triangulation twice_punctured_torus();

struct CoverMap {
    int degree = 1;
    // Permutation of {0..n-1} per base edge label, applied from the lower slot
    // of the edge to the higher one.
    std::map<int, std::vector<int>> rep;
    Triangulation base;
    Triangulation lifted;
    // Lifted triangle t*n + i covers base triangle t on sheet i.
    std::vector<int> projection;
    int lift_triangle(int base_tri, int sheet) const { return base_tri * degree + sheet; }
    int sheet_of(int lifted_tri) const { return lifted_tri % degree; }
    // Sheet reached by crossing base slot s from `sheet`.
    int cross(Slot s, int sheet) const;
};

// Errors: Intransitive when the lifted surface is disconnected; BadInput for a
// malformed assignment. The preferred puncture of the cover is the puncture
// containing the lift, on `preferred_sheet`, of the first corner of the base
// lying at the base's preferred puncture.
CoverMap build_cover(const Triangulation& base, const std::map<int, std::vector<int>>& rep,
                     int preferred_sheet = 0);

} // namespace cusplab
