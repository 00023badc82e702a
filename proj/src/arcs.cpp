#include "cusplab/arcs.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace cusplab::arcs {

namespace {

// A point where a segment meets the boundary of its triangle.
struct Feature {
    bool vertex = false;
    int idx = 0;
    friend bool operator==(const Feature&, const Feature&) = default;
};

struct Segment {
    int tri;
    Feature in, out;
};

Feature vtx(int v) { return {true, v}; }
Feature side(int s) { return {false, s}; }

bool legal(const Segment& g) {
    if (g.in.vertex && g.out.vertex) return false;
    if (g.in.vertex || g.out.vertex) return g.in.idx == g.out.idx;
    return g.in.idx != g.out.idx;
}

std::vector<Segment> segments(const Triangulation& T, const std::vector<Slot>& slots) {
    std::vector<Segment> out;
    if (slots.empty()) throw Error(Errc::NotAnArc, "empty path");
    const int n = T.num_triangles();
    for (Slot s : slots)
        if (s.tri < 0 || s.tri >= n || s.side < 0 || s.side > 2) throw Error(Errc::NotAnArc, "slot out of range");
    out.push_back({slots[0].tri, vtx(slots[0].side), side(slots[0].side)});
    for (std::size_t i = 1; i < slots.size(); ++i) {
        Slot entry = T.partner(slots[i - 1]);
        if (entry.tri != slots[i].tri) throw Error(Errc::NotAnArc, "path leaves the triangle it entered");
        if (entry.side == slots[i].side) throw Error(Errc::NotAnArc, "path backtracks");
        out.push_back({entry.tri, side(entry.side), side(slots[i].side)});
    }
    Slot last = T.partner(slots.back());
    out.push_back({last.tri, side(last.side), vtx(last.side)});
    return out;
}

std::vector<Slot> slots_of_segments(const std::vector<Segment>& segs) {
    std::vector<Slot> out;
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) out.push_back({segs[i].tri, segs[i].out.idx});
    return out;
}

std::vector<Slot> reversed(const Triangulation& T, const std::vector<Slot>& slots) {
    std::vector<Slot> r;
    r.reserve(slots.size());
    for (auto it = slots.rbegin(); it != slots.rend(); ++it) r.push_back(T.partner(*it));
    return r;
}

Path canonical(const Triangulation& T, Path p) {
    if (p.is_edge()) {
        p.slots.clear();
        return p;
    }
    auto r = reversed(T, p.slots);
    if (r < p.slots) p.slots = std::move(r);
    return p;
}

std::map<int, int> label_positions(const Triangulation& T) {
    std::map<int, int> pos;
    auto labels = T.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) pos[labels[i]] = static_cast<int>(i);
    return pos;
}

bool same_base(const Triangulation& a, const Triangulation& b) {
    return a.same_gluing(b) && a.preferred_puncture() == b.preferred_puncture();
}

// ---- flips -----------------------------------------------------------------
//
// The quadrilateral around a flipped edge has corners C=0, X=1, D=2, Y=3 in
// cyclic order; quad side k joins corners k and k+1. Before the flip the
// diagonal is XY, after it CD.

struct Layout {
    int ta, tb;
    std::array<int, 3> qa, qb;  // quad corner of each triangle vertex
    int d1, d2;                 // corners joined by the diagonal
};

struct QuadFeature {
    enum Kind { Corner, Side, Diagonal } kind;
    int idx = 0;
    friend bool operator==(const QuadFeature&, const QuadFeature&) = default;
};

Layout before_flip(const FlipSite& f) {
    Layout L{f.t1, f.t2, {}, {}, 1, 3};
    L.qa[f.s1] = 0, L.qa[mod3(f.s1 + 1)] = 1, L.qa[mod3(f.s1 + 2)] = 3;
    L.qb[f.s2] = 2, L.qb[mod3(f.s2 + 1)] = 3, L.qb[mod3(f.s2 + 2)] = 1;
    return L;
}

Layout after_flip(const FlipSite& f) { return Layout{f.t1, f.t2, {0, 1, 2}, {2, 3, 0}, 0, 2}; }

const std::array<int, 3>& corners_of(const Layout& L, int tri) { return tri == L.ta ? L.qa : L.qb; }

QuadFeature to_quad(const Layout& L, int tri, Feature f) {
    const auto& q = corners_of(L, tri);
    if (f.vertex) return {QuadFeature::Corner, q[f.idx]};
    int u = q[mod3(f.idx + 1)], w = q[mod3(f.idx + 2)];
    if ((u + 1) % 4 == w) return {QuadFeature::Side, u};
    if ((w + 1) % 4 == u) return {QuadFeature::Side, w};
    return {QuadFeature::Diagonal, 0};
}

bool contains(const Layout& L, int tri, QuadFeature f) {
    const auto& q = corners_of(L, tri);
    auto has = [&](int k) { return q[0] == k || q[1] == k || q[2] == k; };
    switch (f.kind) {
    case QuadFeature::Corner: return has(f.idx);
    case QuadFeature::Side: return has(f.idx) && has((f.idx + 1) % 4);
    case QuadFeature::Diagonal: return true;
    }
    return false;
}

Feature from_quad(const Layout& L, int tri, QuadFeature f) {
    const auto& q = corners_of(L, tri);
    for (int v = 0; v < 3; ++v) {
        switch (f.kind) {
        case QuadFeature::Corner:
            if (q[v] == f.idx) return vtx(v);
            break;
        case QuadFeature::Side:
            if (q[v] != f.idx && q[v] != (f.idx + 1) % 4) return side(v);
            break;
        case QuadFeature::Diagonal:
            if (q[v] != L.d1 && q[v] != L.d2) return side(v);
            break;
        }
    }
    throw Error(Errc::NotAnArc, "feature not in triangle");
}

// A run from P to Q inside the quadrilateral, realized in layout L.
void realize(const Layout& L, QuadFeature P, QuadFeature Q, std::vector<Segment>& out) {
    for (int tri : {L.ta, L.tb})
        if (contains(L, tri, P) && contains(L, tri, Q)) {
            Segment g{tri, from_quad(L, tri, P), from_quad(L, tri, Q)};
            if (!legal(g)) throw Error(Errc::NotAnArc, "flip produced an illegal segment");
            out.push_back(g);
            return;
        }
    int tp = contains(L, L.ta, P) ? L.ta : L.tb;
    int tq = tp == L.ta ? L.tb : L.ta;
    QuadFeature diag{QuadFeature::Diagonal, 0};
    Segment g1{tp, from_quad(L, tp, P), from_quad(L, tp, diag)};
    Segment g2{tq, from_quad(L, tq, diag), from_quad(L, tq, Q)};
    if (!legal(g1) || !legal(g2)) throw Error(Errc::NotAnArc, "flip produced an illegal segment");
    out.push_back(g1);
    out.push_back(g2);
}

Path rewrite(const Triangulation& from, const Layout& A, int diag_from, const Layout& B, int diag_to,
             const Path& p) {
    if (p.is_edge()) {
        if (p.edge != diag_from) return p;
        std::vector<Segment> segs;
        realize(B, {QuadFeature::Corner, A.d1}, {QuadFeature::Corner, A.d2}, segs);
        return Path{-1, slots_of_segments(segs)};
    }
    auto segs = segments(from, p.slots);
    std::vector<Segment> out;
    std::size_t i = 0;
    while (i < segs.size()) {
        const Segment& g = segs[i];
        if (g.tri != A.ta && g.tri != A.tb) {
            out.push_back(g);
            ++i;
            continue;
        }
        QuadFeature P = to_quad(A, g.tri, g.in);
        std::size_t j = i;
        while (to_quad(A, segs[j].tri, segs[j].out).kind == QuadFeature::Diagonal) ++j;
        QuadFeature Q = to_quad(A, segs[j].tri, segs[j].out);
        if (P.kind == QuadFeature::Corner && Q.kind == QuadFeature::Corner) {
            if (i != 0 || j + 1 != segs.size()) throw Error(Errc::NotAnArc, "corner-to-corner run inside a longer path");
            return Path{diag_to, {}};
        }
        realize(B, P, Q, out);
        i = j + 1;
    }
    return Path{-1, slots_of_segments(out)};
}

// ---- strand tracing ----------------------------------------------------------

struct Coords {
    std::vector<std::array<int, 3>> c, tau;
};

int side_weight(const Coords& k, int t, int s) { return k.c[t][mod3(s + 1)] + k.c[t][mod3(s + 2)] + k.tau[t][s]; }

std::vector<Slot> trace(const Triangulation& T, const Coords& k) {
    const int n = T.num_triangles();
    int total = 0, terminals = 0;
    for (int t = 0; t < n; ++t)
        for (int v = 0; v < 3; ++v) {
            if (k.c[t][v] < 0 || k.tau[t][v] < 0) throw Error(Errc::NotAnArc, "negative coordinate");
            total += k.c[t][v] + k.tau[t][v];
            terminals += k.tau[t][v];
        }
    if (terminals != 2) throw Error(Errc::NotAnArc, "an arc has exactly two ends");
    for (int t = 0; t < n; ++t) {
        int with_tau = 0;
        for (int v = 0; v < 3; ++v) {
            if (k.tau[t][v] > 0 && k.c[t][v] > 0) throw Error(Errc::NotAnArc, "strand into a vertex crosses its corner arcs");
            with_tau += k.tau[t][v] > 0;
        }
        if (with_tau > 1) throw Error(Errc::NotAnArc, "ends at two vertices of one triangle cross");
    }
    for (int t = 0; t < n; ++t)
        for (int s = 0; s < 3; ++s) {
            Slot p = T.partner({t, s});
            if (side_weight(k, t, s) != side_weight(k, p.tri, p.side))
                throw Error(Errc::NotAnArc, "matching equations fail across an edge");
        }
    int t = 0, v = 0;
    while (k.tau[t][v] == 0) {
        if (++v == 3) v = 0, ++t;
    }
    std::vector<Slot> slots;
    int pos = k.c[t][mod3(v + 1)];  // first terminal strand along side v
    Slot exit{t, v};
    int segs = 1;
    for (;;) {
        slots.push_back(exit);
        if (static_cast<int>(slots.size()) > total) throw Error(Errc::NotAnArc, "strand does not terminate");
        Slot in = T.partner(exit);
        int w = side_weight(k, in.tri, in.side);
        int q = w - 1 - pos;
        const auto& c = k.c[in.tri];
        const int s = in.side;
        ++segs;
        if (q < c[mod3(s + 1)]) {
            int j = mod3(s + 2);
            exit = {in.tri, j};
            pos = side_weight(k, in.tri, j) - 1 - q;
        } else if (q < c[mod3(s + 1)] + k.tau[in.tri][s]) {
            break;
        } else {
            int r = w - 1 - q;
            exit = {in.tri, mod3(s + 1)};
            pos = r;
        }
    }
    if (segs != total) throw Error(Errc::NotAnArc, "coordinates contain closed components");
    return slots;
}

} // namespace

Base share(const Triangulation& T) { return std::make_shared<const Triangulation>(T); }

// ---- NormalArc -------------------------------------------------------------------

namespace {

NormalArc make(Base base, Path p, bool require_p) {
    if (p.is_edge()) {
        if (!base->has_label(p.edge)) throw Error(Errc::NotAnArc, "no edge " + std::to_string(p.edge));
        p.slots.clear();
    } else {
        segments(*base, p.slots);  // validates
    }
    NormalArc a = NormalArc::from_raw(base, std::move(p));
    if (require_p) {
        auto [u, v] = a.endpoints();
        if (u != base->preferred_puncture() && v != base->preferred_puncture())
            throw Error(Errc::NotAnArc, "arc has no endpoint at the preferred puncture");
    }
    return a;
}

} // namespace

NormalArc NormalArc::from_raw(Base base, Path p) {
    NormalArc a;
    a.path_ = canonical(*base, std::move(p));
    a.base_ = std::move(base);
    return a;
}

NormalArc NormalArc::edge_arc(Base base, int label) { return make(std::move(base), Path{label, {}}, true); }

NormalArc NormalArc::from_path(Base base, std::vector<Slot> slots) {
    return make(std::move(base), Path{-1, std::move(slots)}, true);
}

bool operator<(const NormalArc& a, const NormalArc& b) {
    int sa = a.coordinate_sum(), sb = b.coordinate_sum();
    if (sa != sb) return sa < sb;
    auto wa = a.edge_weights(), wb = b.edge_weights();
    if (wa != wb) return wa < wb;
    return a.path_ < b.path_;
}

std::vector<int> NormalArc::edge_weights() const {
    auto pos = label_positions(*base_);
    std::vector<int> w(pos.size(), 0);
    if (is_edge()) {
        w[pos.at(path_.edge)] = 1;
        return w;
    }
    for (Slot s : path_.slots) ++w[pos.at(base_->label(s))];
    return w;
}

std::vector<int> NormalArc::corner_data() const {
    std::vector<int> out(6 * base_->num_triangles(), 0);
    if (is_edge()) return out;
    for (const auto& g : segments(*base_, path_.slots)) {
        if (g.in.vertex || g.out.vertex) {
            int v = g.in.vertex ? g.in.idx : g.out.idx;
            ++out[6 * g.tri + 3 + v];
        } else {
            ++out[6 * g.tri + (3 - g.in.idx - g.out.idx)];
        }
    }
    return out;
}

int NormalArc::coordinate_sum() const { return is_edge() ? 1 : crossings(); }

std::pair<int, int> NormalArc::endpoints() const {
    if (is_edge()) return base_->side_ends(base_->slots_of(path_.edge).first);
    Slot first = path_.slots.front();
    Slot last = base_->partner(path_.slots.back());
    return {base_->puncture(first.tri, first.side), base_->puncture(last.tri, last.side)};
}

std::string NormalArc::to_string() const {
    std::ostringstream out;
    out << "arc <";
    auto w = edge_weights();
    for (std::size_t i = 0; i < w.size(); ++i) out << (i ? "," : "") << w[i];
    out << ";";
    auto c = corner_data();
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << c[i];
    out << ">";
    return out.str();
}

NormalArc from_coordinates(Base base, const std::vector<int>& weights, const std::vector<int>& corners) {
    const int n = base->num_triangles();
    auto pos = label_positions(*base);
    if (weights.size() != pos.size()) throw Error(Errc::BadInput, "expected one weight per edge");
    if (corners.size() != static_cast<std::size_t>(6 * n)) throw Error(Errc::BadInput, "expected six corner entries per triangle");
    if (std::all_of(corners.begin(), corners.end(), [](int x) { return x == 0; })) {
        int ones = 0, at = -1;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] == 1) ++ones, at = static_cast<int>(i);
            else if (weights[i] != 0) ones = 99;
        }
        if (ones != 1) throw Error(Errc::NotAnArc, "zero corner data must come with a unit edge indicator");
        return NormalArc::edge_arc(base, base->labels()[at]);
    }
    Coords k;
    k.c.resize(n);
    k.tau.resize(n);
    for (int t = 0; t < n; ++t)
        for (int v = 0; v < 3; ++v) {
            k.c[t][v] = corners[6 * t + v];
            k.tau[t][v] = corners[6 * t + 3 + v];
        }
    for (int t = 0; t < n; ++t)
        for (int s = 0; s < 3; ++s)
            if (weights[pos.at(base->label({t, s}))] != side_weight(k, t, s))
                throw Error(Errc::NotAnArc, "edge weights disagree with corner data");
    return NormalArc::from_path(base, trace(*base, k));
}

std::vector<NormalArc> from_weights(Base base, const std::vector<int>& weights) {
    const int n = base->num_triangles();
    auto pos = label_positions(*base);
    if (weights.size() != pos.size()) throw Error(Errc::BadInput, "expected one weight per edge");
    std::set<Path> seen;
    std::vector<NormalArc> out;
    int total = std::accumulate(weights.begin(), weights.end(), 0);
    if (total == 1) {
        std::vector<int> zero(6 * n, 0);
        try {
            out.push_back(from_coordinates(base, weights, zero));
        } catch (const Error&) {
        }
    }
    for (int a = 0; a < 3 * n; ++a)
        for (int b = a; b < 3 * n; ++b) {
            std::vector<std::array<int, 3>> tau(n, {0, 0, 0});
            ++tau[a / 3][a % 3];
            ++tau[b / 3][b % 3];
            std::vector<int> corners(6 * n, 0);
            bool ok = true;
            for (int t = 0; t < n && ok; ++t) {
                std::array<int, 3> w;
                for (int s = 0; s < 3; ++s) w[s] = weights[pos.at(base->label({t, s}))];
                for (int v = 0; v < 3 && ok; ++v) {
                    int twice = w[mod3(v + 1)] + w[mod3(v + 2)] - w[v] - tau[t][mod3(v + 1)] - tau[t][mod3(v + 2)] + tau[t][v];
                    if (twice < 0 || twice % 2 != 0) ok = false;
                    corners[6 * t + v] = twice / 2;
                    corners[6 * t + 3 + v] = tau[t][v];
                }
            }
            if (!ok) continue;
            try {
                auto arc = from_coordinates(base, weights, corners);
                if (seen.insert(arc.path()).second) out.push_back(arc);
            } catch (const Error& e) {
                if (e.code() != Errc::NotAnArc) throw;
            }
        }
    return out;
}

namespace {

std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> out;
    std::string tok;
    std::istringstream in(text);
    while (std::getline(in, tok, ',')) {
        tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
        if (tok.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::logic_error&) {
            throw Error(Errc::BadInput, "not an integer: '" + tok + "'");
        }
    }
    return out;
}

void require_torus(const Triangulation& T) {
    if (!T.same_gluing(once_punctured_torus())) throw Error(Errc::BadInput, "slopes need the standard once-punctured torus");
}

} // namespace

NormalArc parse_arc(Base base, const std::string& text_in) {
    std::string text = text_in;
    auto strip = [](std::string s) {
        auto b = s.find_first_not_of(" \t");
        auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    text = strip(text);
    if (text.rfind("slope", 0) == 0) return from_slope(base, farey::parse_slope(strip(text.substr(5))));
    if (text.rfind("arc", 0) == 0) text = strip(text.substr(3));
    if (!text.empty() && text.front() == '<') text.erase(0, 1);
    if (!text.empty() && text.back() == '>') text.pop_back();
    auto semi = text.find(';');
    auto weights = parse_ints(text.substr(0, semi));
    if (semi != std::string::npos) return from_coordinates(base, weights, parse_ints(text.substr(semi + 1)));
    auto all = from_weights(base, weights);
    if (all.size() != 1)
        throw Error(Errc::BadInput, std::to_string(all.size()) + " arcs have these weights; give corner data");
    return all.front();
}

NormalArc from_slope(Base torus, farey::Slope s) {
    require_torus(*torus);
    if (s == farey::Slope{1, 0}) return NormalArc::edge_arc(torus, 0);
    if (s == farey::Slope{1, 1}) return NormalArc::edge_arc(torus, 1);
    if (s == farey::Slope{0, 1}) return NormalArc::edge_arc(torus, 2);
    auto ap = std::llabs(s.p), aq = std::llabs(s.q), ad = std::llabs(s.p - s.q);
    if (aq > 1000000 || ap > 1000000) throw Error(Errc::Overflow, "slope too large for a path");
    std::vector<int> w{static_cast<int>(aq - 1), static_cast<int>(ad - 1), static_cast<int>(ap - 1)};
    auto all = from_weights(torus, w);
    std::erase_if(all, [](const NormalArc& a) { return a.is_edge(); });
    if (all.size() != 1) throw Error(Errc::NotAnArc, "slope " + farey::to_string(s) + " did not resolve to one arc");
    return all.front();
}

farey::Slope to_slope(const NormalArc& a) {
    require_torus(*a.base());
    if (a.is_edge()) {
        static const farey::Slope edge_slopes[3] = {{1, 0}, {1, 1}, {0, 1}};
        return edge_slopes[a.path().edge];
    }
    auto w = a.edge_weights();
    farey::i64 q = w[0] + 1, p = w[2] + 1, d = w[1] + 1;
    if (d == std::llabs(p - q)) return farey::make_slope(p, q);
    return farey::make_slope(-p, q);
}

// ---- intersection numbers ----------------------------------------------------------

namespace {

int cycle_pos(Feature f) { return f.vertex ? 2 * f.idx : (2 * f.idx + 3) % 6; }

bool interleaved(Feature a1, Feature a2, Feature b1, Feature b2) {
    int x = cycle_pos(a1), y = cycle_pos(a2), u = cycle_pos(b1), v = cycle_pos(b2);
    if (x == u || x == v || y == u || y == v) return false;
    auto inside = [&](int z) {
        int lo = std::min(x, y), hi = std::max(x, y);
        return z > lo && z < hi;
    };
    return inside(u) != inside(v);
}

// Position of the far end of a segment that leaves through side s (low end of a run).
int low_rank(int s, Feature f) {
    if (f.vertex) return 1;
    return f.idx == mod3(s + 2) ? 0 : 2;
}
// Position of the far end of a segment that enters through side s (high end of a run).
int high_rank(int s, Feature f) {
    if (f.vertex) return 1;
    return f.idx == mod3(s + 1) ? 0 : 2;
}

bool same_side(Feature a, Feature b) { return !a.vertex && !b.vertex && a.idx == b.idx; }

} // namespace

int intersection_number(const NormalArc& a, const NormalArc& b) {
    if (!same_base(*a.base(), *b.base())) throw Error(Errc::BaseMismatch, "arcs live on different triangulations");
    const Triangulation& T = *a.base();
    if (a.is_edge() && b.is_edge()) return 0;
    if (a.is_edge() || b.is_edge()) {
        const NormalArc& e = a.is_edge() ? a : b;
        const NormalArc& c = a.is_edge() ? b : a;
        int n = 0;
        for (Slot s : c.path().slots) n += T.label(s) == e.path().edge;
        return n;
    }
    auto A = segments(T, a.path().slots);
    auto B = segments(T, b.path().slots);
    const int na = static_cast<int>(A.size()), nb = static_cast<int>(B.size());
    int count = 0;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            if (A[i].tri != B[j].tri) continue;
            // Skip pairs continuing a run that started earlier along a.
            bool back_same = same_side(A[i].in, B[j].in);
            bool back_opp = same_side(A[i].in, B[j].out);
            if (back_same || back_opp) continue;
            int delta = 0;
            if (same_side(A[i].out, B[j].out)) delta = 1;
            else if (same_side(A[i].out, B[j].in)) delta = -1;
            if (delta == 0) {
                count += interleaved(A[i].in, A[i].out, B[j].in, B[j].out);
                continue;
            }
            int i1 = i, j1 = j;
            while (true) {
                bool more = delta > 0 ? same_side(A[i1].out, B[j1].out) : same_side(A[i1].out, B[j1].in);
                if (!more) break;
                i1 += 1;
                j1 += delta;
            }
            int s_low = A[i].out.idx;
            int la = low_rank(s_low, A[i].in);
            int lb = low_rank(s_low, delta > 0 ? B[j].in : B[j].out);
            int s_high = A[i1].in.idx;
            int ha = high_rank(s_high, A[i1].out);
            int hb = high_rank(s_high, delta > 0 ? B[j1].out : B[j1].in);
            if ((la < lb && ha > hb) || (la > lb && ha < hb)) ++count;
        }
    return count;
}

// ---- flips and mapping classes ----------------------------------------------------

Path flip_forward(const Triangulation& T, int label, const Path& p) {
    FlipSite f = T.flip_site(label);
    return rewrite(T, before_flip(f), label, after_flip(f), T.next_label(), p);
}

Path flip_backward(const Triangulation& T, int label, const Path& p) {
    FlipSite f = T.flip_site(label);
    Triangulation U = T.flip(label);
    return rewrite(U, after_flip(f), T.next_label(), before_flip(f), label, p);
}

std::vector<Triangulation> flip_sequence(const Triangulation& base, const std::vector<int>& flips) {
    std::vector<Triangulation> seq{base};
    for (int e : flips) seq.push_back(seq.back().flip(e));
    return seq;
}

MappingClass identity_class(Base base) {
    MappingClass m;
    const int n = base->num_triangles();
    m.iso.tri.resize(n);
    std::iota(m.iso.tri.begin(), m.iso.tri.end(), 0);
    m.iso.rot.assign(n, 0);
    m.base = std::move(base);
    return m;
}

MappingClass from_flips(Base base, const std::vector<int>& flips, int which_iso) {
    auto seq = flip_sequence(*base, flips);
    auto isos = seq.back().isomorphisms_to(*base, true);
    if (which_iso < 0 || which_iso >= static_cast<int>(isos.size()))
        throw Error(Errc::BadInput, "flip sequence does not return to the base triangulation");
    return MappingClass{std::move(base), flips, isos[which_iso], true};
}

MappingClass from_word(Base torus, const std::string& word) {
    require_torus(*torus);
    auto m = farey::word_to_matrix(word);
    using V = std::array<farey::i64, 2>;
    std::vector<std::array<V, 3>> vec{{V{1, 0}, V{-1, -1}, V{0, 1}}, {V{-1, 0}, V{1, 1}, V{0, -1}}};
    Triangulation T = *torus;
    std::vector<int> flips;
    farey::Mat2 M;
    auto neg = [](V v) { return V{-v[0], -v[1]}; };
    auto sum = [](V a, V b) { return V{a[0] + b[0], a[1] + b[1]}; };
    for (char ch : word) {
        V target = ch == 'R' ? V{M.b, M.d} : V{M.a, M.c};
        int label = -1;
        for (int t = 0; t < 2 && label < 0; ++t)
            for (int s = 0; s < 3; ++s)
                if (vec[t][s] == target || vec[t][s] == neg(target)) {
                    label = T.label({t, s});
                    break;
                }
        if (label < 0) throw Error(Errc::BadInput, "no edge with the expected torus vector");
        FlipSite f = T.flip_site(label);
        auto old = vec;
        V a0 = old[f.t2][mod3(f.s2 + 1)], a2 = old[f.t1][mod3(f.s1 + 2)];
        V b0 = old[f.t1][mod3(f.s1 + 1)], b2 = old[f.t2][mod3(f.s2 + 2)];
        vec[f.t1] = {a0, neg(sum(a0, a2)), a2};
        vec[f.t2] = {b0, neg(sum(b0, b2)), b2};
        T = T.flip(label);
        flips.push_back(label);
        M = farey::mul(M, ch == 'R' ? farey::R_MAT : farey::L_MAT);
    }
    // The isomorphism sends the slot with vector W u to the base slot with vector u.
    std::vector<std::array<V, 3>> base_vec{{V{1, 0}, V{-1, -1}, V{0, 1}}, {V{-1, 0}, V{1, 1}, V{0, -1}}};
    for (const auto& iso : T.isomorphisms_to(*torus, true)) {
        bool ok = true;
        for (int t = 0; t < 2 && ok; ++t)
            for (int s = 0; s < 3 && ok; ++s) {
                Slot img = iso.apply({t, s});
                V u = base_vec[img.tri][img.side];
                V wu{farey::i64(M.a * u[0] + M.b * u[1]), farey::i64(M.c * u[0] + M.d * u[1])};
                ok = wu == vec[t][s];
            }
        if (ok) return MappingClass{std::move(torus), flips, iso, true};
    }
    throw Error(Errc::BadInput, "no isomorphism matches the monodromy");
}

namespace {

Path map_by(const Isomorphism& iso, const Triangulation& from, const Triangulation& to, const Path& p) {
    if (p.is_edge()) return Path{to.label(iso.apply(from.slots_of(p.edge).first)), {}};
    Path q;
    for (Slot s : p.slots) q.slots.push_back(iso.apply(s));
    return q;
}

NormalArc finish(const MappingClass& phi, Path p) {
    try {
        return make(phi.base, std::move(p), true);
    } catch (const Error& e) {
        if (e.code() == Errc::NotAnArc) throw Error(Errc::PunctureMoved, "image has no endpoint at the preferred puncture");
        throw;
    }
}

} // namespace

NormalArc apply_mcg(const MappingClass& phi, const NormalArc& a) {
    auto seq = flip_sequence(*phi.base, phi.flips);
    Path p = map_by(phi.iso.inverse(), *phi.base, seq.back(), a.path());
    for (std::size_t i = phi.flips.size(); i-- > 0;) p = flip_backward(seq[i], phi.flips[i], p);
    return finish(phi, std::move(p));
}

NormalArc apply_inverse(const MappingClass& phi, const NormalArc& a) {
    auto seq = flip_sequence(*phi.base, phi.flips);
    Path p = a.path();
    for (std::size_t i = 0; i < phi.flips.size(); ++i) p = flip_forward(seq[i], phi.flips[i], p);
    return finish(phi, map_by(phi.iso, seq.back(), *phi.base, p));
}

std::vector<NormalArc> arcs_of(Base base, const std::vector<int>& flips) {
    auto seq = flip_sequence(*base, flips);
    std::vector<NormalArc> out;
    for (int label : seq.back().labels()) {
        Path p{label, {}};
        for (std::size_t i = flips.size(); i-- > 0;) p = flip_backward(seq[i], flips[i], p);
        NormalArc a = make(base, p, false);
        auto [u, v] = a.endpoints();
        if (u == base->preferred_puncture() || v == base->preferred_puncture()) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> triangulation_containing(const NormalArc& a) {
    Triangulation T = *a.base();
    Path p = a.path();
    std::vector<int> flips;
    while (!p.is_edge()) {
        int e = T.label(p.slots.front());
        Path q = flip_forward(T, e, p);
        if (!q.is_edge() && q.slots.size() + 1 != p.slots.size())
            throw Error(Errc::NotAnArc, "flip did not shorten the arc");
        T = T.flip(e);
        p = std::move(q);
        flips.push_back(e);
    }
    return flips;
}

// ---- the arc complex --------------------------------------------------------------

const char* status_name(DistanceStatus s) {
    switch (s) {
    case DistanceStatus::Exact: return "Exact";
    case DistanceStatus::Unreachable: return "Unreachable";
    case DistanceStatus::BudgetExceeded: return "BudgetExceeded";
    }
    return "?";
}

ArcComplex::ArcComplex(Base base, int budget, int node_cap)
    : base_(std::move(base)), budget_(budget), node_cap_(node_cap) {
    if (budget <= 0) throw Error(Errc::BadInput, "budget must be positive");
}

namespace {

struct Node {
    Triangulation T;
    int flipped = -1;
    std::shared_ptr<const Node> parent;
    std::map<int, Path> over_base;  // label -> arc over the base
};

Path to_base(const Node* node, Path p) {
    while (node->parent) {
        p = flip_backward(node->parent->T, node->flipped, p);
        node = node->parent.get();
    }
    return p;
}

} // namespace

const ArcComplex::Neighbors& ArcComplex::neighbors(const NormalArc& a) {
    if (!same_base(*a.base(), *base_)) throw Error(Errc::BaseMismatch, "arc is not over this complex's base");
    auto it = cache_.find(a.path());
    if (it != cache_.end()) return it->second;

    Neighbors out;
    // Walk to a triangulation containing a.
    auto root = std::make_shared<Node>();
    root->T = *base_;
    std::shared_ptr<const Node> cur = root;
    Path p = a.path();
    while (!p.is_edge()) {
        int e = cur->T.label(p.slots.front());
        p = flip_forward(cur->T, e, p);
        auto next = std::make_shared<Node>();
        next->T = cur->T.flip(e);
        next->flipped = e;
        next->parent = cur;
        cur = next;
    }
    const int keep = p.edge;
    auto start = std::const_pointer_cast<Node>(cur);
    for (int label : start->T.labels()) start->over_base[label] = to_base(start.get(), Path{label, {}});

    std::set<Path> found;
    auto consider = [&](const Path& bp) {
        NormalArc arc = make(base_, bp, false);
        if (arc == a) return true;
        if (arc.coordinate_sum() > budget_) {
            out.truncated = true;
            return false;
        }
        auto [u, v] = arc.endpoints();
        if ((u == base_->preferred_puncture() || v == base_->preferred_puncture()) && found.insert(arc.path()).second)
            out.arcs.push_back(arc);
        return true;
    };
    for (const auto& [label, bp] : start->over_base)
        if (label != keep) consider(bp);

    auto key_of = [](const Node& n) {
        std::vector<Path> k;
        for (const auto& [l, bp] : n.over_base) k.push_back(bp);
        std::sort(k.begin(), k.end());
        return k;
    };
    std::set<std::vector<Path>> seen{key_of(*start)};
    std::deque<std::shared_ptr<const Node>> queue{start};
    while (!queue.empty()) {
        auto node = queue.front();
        queue.pop_front();
        for (int label : node->T.labels()) {
            if (label == keep || !node->T.flippable(label)) continue;
            auto child = std::make_shared<Node>();
            child->T = node->T.flip(label);
            child->flipped = label;
            child->parent = node;
            int fresh = node->T.next_label();
            Path bp = to_base(node.get(), flip_backward(node->T, label, Path{fresh, {}}));
            bp = canonical(*base_, bp);
            child->over_base = node->over_base;
            child->over_base.erase(label);
            child->over_base[fresh] = bp;
            if (!seen.insert(key_of(*child)).second) continue;
            if (!consider(bp)) continue;
            if (static_cast<int>(seen.size()) > node_cap_) {
                out.truncated = true;
                continue;
            }
            queue.push_back(child);
        }
    }
    std::sort(out.arcs.begin(), out.arcs.end());
    return cache_.emplace(a.path(), std::move(out)).first->second;
}

DistanceResult ArcComplex::distance(const NormalArc& a, const NormalArc& b, int radius_cap) {
    if (!same_base(*a.base(), *base_) || !same_base(*b.base(), *base_))
        throw Error(Errc::BaseMismatch, "arcs are not over this complex's base");
    DistanceResult res;
    if (a == b) {
        res.status = DistanceStatus::Exact;
        res.value = 0;
        res.path = {a};
        return res;
    }
    std::map<Path, Path> parent;
    std::map<Path, NormalArc> arcs;
    std::vector<NormalArc> frontier{a};
    parent[a.path()] = a.path();
    arcs[a.path()] = a;
    for (int r = 1; r <= radius_cap; ++r) {
        std::vector<NormalArc> next;
        for (const auto& u : frontier) {
            const auto& nb = neighbors(u);
            res.truncated = res.truncated || nb.truncated;
            for (const auto& v : nb.arcs) {
                if (parent.count(v.path())) continue;
                parent[v.path()] = u.path();
                arcs[v.path()] = v;
                if (v == b) {
                    res.status = DistanceStatus::Exact;
                    res.value = r;
                    for (Path x = v.path();; x = parent[x]) {
                        res.path.push_back(arcs[x]);
                        if (x == a.path()) break;
                    }
                    std::reverse(res.path.begin(), res.path.end());
                    return res;
                }
                next.push_back(v);
            }
        }
        if (next.empty()) {
            res.status = res.truncated ? DistanceStatus::BudgetExceeded : DistanceStatus::Unreachable;
            return res;
        }
        frontier = std::move(next);
    }
    res.status = DistanceStatus::Unreachable;
    return res;
}

TranslationResult translation_distance(const MappingClass& phi, ArcComplex& X, int max_radius) {
    TranslationResult res;
    std::set<Path> seen;
    std::vector<NormalArc> layer;
    for (int label : phi.base->labels()) {
        NormalArc e = make(phi.base, Path{label, {}}, false);
        auto [u, v] = e.endpoints();
        if (u != phi.base->preferred_puncture() && v != phi.base->preferred_puncture()) continue;
        if (seen.insert(e.path()).second) layer.push_back(e);
    }
    int best = -1;
    for (int r = 0; r <= max_radius; ++r) {
        for (const auto& v : layer) {
            NormalArc img = apply_mcg(phi, v);
            int cap = best > 0 ? best - 1 : 16;
            if (cap < 1) break;
            auto d = X.distance(v, img, cap);
            if (d.status == DistanceStatus::Exact && (best < 0 || d.value < best)) best = d.value;
        }
        res.running_min.push_back(best);
        res.radius = r;
        res.value = best;
        if (best == 1) {
            // No arc is fixed by a pseudo-Anosov class, so 1 is the least possible value.
            res.cert = Certification::Stable;
            return res;
        }
        const int n = static_cast<int>(res.running_min.size());
        if (n >= 3 && best > 0 && res.running_min[n - 2] == best && res.running_min[n - 3] == best) {
            res.cert = Certification::Stable;
            return res;
        }
        if (r == max_radius) break;
        std::vector<NormalArc> next;
        for (const auto& v : layer)
            for (const auto& w : X.neighbors(v).arcs)
                if (seen.insert(w.path()).second) next.push_back(w);
        layer = std::move(next);
    }
    res.cert = Certification::Heuristic;
    return res;
}

StableDistance stable_distance_upper(const MappingClass& phi, int N, ArcComplex& X) {
    StableDistance out;
    NormalArc v;
    for (int label : phi.base->labels()) {
        NormalArc e = make(phi.base, Path{label, {}}, false);
        auto [a, b] = e.endpoints();
        if (a == phi.base->preferred_puncture() || b == phi.base->preferred_puncture()) {
            v = e;
            break;
        }
    }
    NormalArc img = v;
    for (int n = 1; n <= N; ++n) {
        img = apply_mcg(phi, img);
        if (img.coordinate_sum() > X.budget()) {
            out.truncated = true;
            break;
        }
        auto d = X.distance(v, img, 4 * n + 4);
        if (d.status != DistanceStatus::Exact) {
            out.truncated = true;
            break;
        }
        out.a.push_back(d.value);
        out.ratios.push_back(static_cast<double>(d.value) / n);
        out.estimate = n == 1 ? out.ratios.back() : std::min(out.estimate, out.ratios.back());
    }
    return out;
}

std::vector<NormalArc> lift_arc(const CoverMap& cover, Base lifted, const NormalArc& a) {
    if (!same_base(*a.base(), cover.base)) throw Error(Errc::BaseMismatch, "arc is not over the cover's base");
    std::vector<NormalArc> out;
    const int n = cover.degree;
    if (a.is_edge()) {
        Slot s = a.base()->slots_of(a.path().edge).first;
        for (int i = 0; i < n; ++i)
            out.push_back(make(lifted, Path{lifted->label({cover.lift_triangle(s.tri, i), s.side}), {}}, false));
    } else {
        for (int i = 0; i < n; ++i) {
            std::vector<Slot> slots;
            int sheet = i;
            for (Slot s : a.path().slots) {
                slots.push_back({cover.lift_triangle(s.tri, sheet), s.side});
                sheet = cover.cross(s, sheet);
            }
            out.push_back(make(lifted, Path{-1, slots}, false));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace cusplab::arcs
