#include "cusplab/surface.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

namespace cusplab {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::uint64_t fnv1a(const std::vector<int>& v) {
    std::uint64_t h = 1469598103934665603ULL;
    for (int x : v) {
        auto u = static_cast<std::uint32_t>(x);
        for (int k = 0; k < 4; ++k) {
            h ^= (u >> (8 * k)) & 0xffu;
            h *= 1099511628211ULL;
        }
    }
    return h;
}

} // namespace

Isomorphism Isomorphism::inverse() const {
    Isomorphism inv;
    inv.tri.assign(tri.size(), -1);
    inv.rot.assign(tri.size(), 0);
    for (std::size_t t = 0; t < tri.size(); ++t) {
        inv.tri[tri[t]] = static_cast<int>(t);
        inv.rot[tri[t]] = mod3(-rot[t]);
    }
    return inv;
}

Triangulation Triangulation::build(const std::vector<std::array<Slot, 3>>& partner_in,
                                   int preferred_puncture, std::string name,
                                   const std::vector<std::array<bool, 3>>& reversed_in) {
    const int n = static_cast<int>(partner_in.size());
    if (n == 0) throw Error(Errc::BadInput, "no triangles");
    auto partner = partner_in;
    std::vector<std::array<bool, 3>> reversed = reversed_in;
    if (reversed.empty()) reversed.assign(n, {false, false, false});
    if (static_cast<int>(reversed.size()) != n) throw Error(Errc::BadInput, "orientation table size");

    for (int t = 0; t < n; ++t) {
        for (int s = 0; s < 3; ++s) {
            Slot p = partner[t][s];
            if (p.tri < 0 || p.tri >= n || p.side < 0 || p.side > 2)
                throw Error(Errc::BadInput, "slot out of range");
            if (p == Slot{t, s}) throw Error(Errc::NonInvolution, "slot glued to itself");
            if (partner[p.tri][p.side] != Slot{t, s})
                throw Error(Errc::NonInvolution, "gluing is not symmetric");
            if (reversed[p.tri][p.side] != reversed[t][s])
                throw Error(Errc::BadInput, "orientation flag differs between the two sides of a gluing");
        }
    }

    // Connectivity and orientation: o[t] = +1 keeps the triangle, -1 reflects it.
    std::vector<int> o(n, 0);
    o[0] = 1;
    std::queue<int> q;
    q.push(0);
    while (!q.empty()) {
        int t = q.front();
        q.pop();
        for (int s = 0; s < 3; ++s) {
            Slot p = partner[t][s];
            int want = reversed[t][s] ? -o[t] : o[t];
            if (o[p.tri] == 0) {
                o[p.tri] = want;
                q.push(p.tri);
            } else if (o[p.tri] != want) {
                throw Error(Errc::NonOrientable, "gluing table admits no consistent orientation");
            }
        }
    }
    for (int t = 0; t < n; ++t)
        if (o[t] == 0) throw Error(Errc::Disconnected, "triangle " + std::to_string(t) + " unreachable");

    // Reflect negative triangles: vertices 1 <-> 2, hence sides 1 <-> 2.
    auto refl = [&](Slot s) { return o[s.tri] < 0 ? Slot{s.tri, s.side == 0 ? 0 : 3 - s.side} : s; };
    std::vector<std::array<Slot, 3>> fixed(n);
    for (int t = 0; t < n; ++t)
        for (int s = 0; s < 3; ++s) {
            Slot here = refl({t, s});
            fixed[here.tri][here.side] = refl(partner[t][s]);
        }

    Triangulation T;
    T.name_ = std::move(name);
    T.partner_ = std::move(fixed);
    T.assign_default_labels();
    T.compute_punctures();
    if (preferred_puncture < 0 || preferred_puncture >= T.num_punctures_)
        throw Error(Errc::BadInput, "preferred puncture " + std::to_string(preferred_puncture) + " does not exist");
    T.preferred_ = preferred_puncture;
    return T;
}

void Triangulation::assign_default_labels() {
    const int n = num_triangles();
    label_.assign(n, {-1, -1, -1});
    int next = 0;
    for (int t = 0; t < n; ++t)
        for (int s = 0; s < 3; ++s)
            if (label_[t][s] < 0) {
                Slot p = partner_[t][s];
                label_[t][s] = label_[p.tri][p.side] = next++;
            }
    next_label_ = next;
}

void Triangulation::compute_punctures() {
    const int n = num_triangles();
    UnionFind uf(3 * n);
    for (int t = 0; t < n; ++t)
        for (int s = 0; s < 3; ++s) {
            Slot p = partner_[t][s];
            uf.unite(3 * t + mod3(s + 1), 3 * p.tri + mod3(p.side + 2));
            uf.unite(3 * t + mod3(s + 2), 3 * p.tri + mod3(p.side + 1));
        }
    std::map<int, int> id;
    punct_.assign(n, {0, 0, 0});
    for (int c = 0; c < 3 * n; ++c) {
        int r = uf.find(c);
        auto it = id.find(r);
        if (it == id.end()) it = id.emplace(r, static_cast<int>(id.size())).first;
        punct_[c / 3][c % 3] = it->second;
    }
    num_punctures_ = static_cast<int>(id.size());
}

Triangulation Triangulation::parse(const std::string& text) {
    std::istringstream in(text);
    std::string line, name = "T";
    int preferred = 0;
    bool header = false;
    std::map<int, std::array<std::pair<Slot, bool>, 3>> rows;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        auto bad = [&](const std::string& why) {
            return Error(Errc::BadInput, "line " + std::to_string(lineno) + ": " + why);
        };
        if (kw == "surface") {
            std::string pp;
            if (!(ls >> name >> pp >> preferred) || pp != "preferred_puncture")
                throw bad("expected 'surface <name> preferred_puncture <id>'");
            header = true;
        } else if (kw == "tri") {
            std::string idx;
            if (!(ls >> idx) || idx.empty() || idx.back() != ':') throw bad("expected 'tri <i>:'");
            int i = std::stoi(idx.substr(0, idx.size() - 1));
            std::array<std::pair<Slot, bool>, 3> row;
            for (int s = 0; s < 3; ++s) {
                std::string tok;
                if (!(ls >> tok)) throw bad("expected three slots");
                bool rev = false;
                if (!tok.empty() && tok.back() == '~') {
                    rev = true;
                    tok.pop_back();
                }
                auto dot = tok.find('.');
                if (dot == std::string::npos) throw bad("slot must look like <tri>.<side>");
                row[s] = {Slot{std::stoi(tok.substr(0, dot)), std::stoi(tok.substr(dot + 1))}, rev};
            }
            if (rows.count(i)) throw bad("duplicate triangle");
            rows[i] = row;
        } else {
            throw bad("unknown keyword '" + kw + "'");
        }
    }
    if (!header) throw Error(Errc::BadInput, "missing surface header");
    const int n = static_cast<int>(rows.size());
    std::vector<std::array<Slot, 3>> partner(n);
    std::vector<std::array<bool, 3>> rev(n);
    for (int t = 0; t < n; ++t) {
        auto it = rows.find(t);
        if (it == rows.end()) throw Error(Errc::BadInput, "triangles must be numbered 0..n-1");
        for (int s = 0; s < 3; ++s) {
            partner[t][s] = it->second[s].first;
            rev[t][s] = it->second[s].second;
        }
    }
    return build(partner, preferred, name, rev);
}

std::string Triangulation::serialize() const {
    std::ostringstream out;
    out << "surface " << name_ << " preferred_puncture " << preferred_ << "\n";
    for (int t = 0; t < num_triangles(); ++t) {
        out << "tri " << t << ":";
        for (int s = 0; s < 3; ++s) out << " " << partner_[t][s].tri << "." << partner_[t][s].side;
        out << "\n";
    }
    return out.str();
}

std::vector<int> Triangulation::labels() const {
    std::vector<int> out;
    for (int t = 0; t < num_triangles(); ++t)
        for (int s = 0; s < 3; ++s)
            if (Slot{t, s} < partner_[t][s]) out.push_back(label_[t][s]);
    std::sort(out.begin(), out.end());
    return out;
}

bool Triangulation::has_label(int label) const {
    for (const auto& row : label_)
        for (int l : row)
            if (l == label) return true;
    return false;
}

std::pair<Slot, Slot> Triangulation::slots_of(int label) const {
    for (int t = 0; t < num_triangles(); ++t)
        for (int s = 0; s < 3; ++s)
            if (label_[t][s] == label) {
                Slot a{t, s}, b = partner_[t][s];
                return a < b ? std::pair{a, b} : std::pair{b, a};
            }
    throw Error(Errc::BadInput, "no edge with label " + std::to_string(label));
}

bool Triangulation::flippable(int label) const {
    auto [a, b] = slots_of(label);
    return a.tri != b.tri;
}

FlipSite Triangulation::flip_site(int label) const {
    auto [a, b] = slots_of(label);
    if (a.tri == b.tri) throw Error(Errc::NotFlippable, "edge " + std::to_string(label) + " bounds one triangle twice");
    return {a.tri, a.side, b.tri, b.side};
}

Triangulation Triangulation::flip(int label) const {
    const FlipSite f = flip_site(label);
    const Slot A{f.t1, mod3(f.s1 + 2)}, B{f.t2, mod3(f.s2 + 1)};
    const Slot C{f.t1, mod3(f.s1 + 1)}, D{f.t2, mod3(f.s2 + 2)};
    const Slot nA{f.t1, 2}, nB{f.t1, 0}, nC{f.t2, 0}, nD{f.t2, 2};
    auto remap = [&](Slot s) {
        if (s == A) return nA;
        if (s == B) return nB;
        if (s == C) return nC;
        if (s == D) return nD;
        return s;
    };

    Triangulation R = *this;
    const std::array<std::pair<Slot, Slot>, 4> moves{{{A, nA}, {B, nB}, {C, nC}, {D, nD}}};
    for (auto [from, to] : moves) {
        Slot p = partner(from);
        R.partner_[to.tri][to.side] = remap(p);
        R.label_[to.tri][to.side] = label_[from.tri][from.side];
        Slot rp = remap(p);
        if (rp == p) R.partner_[p.tri][p.side] = to;
    }
    R.partner_[f.t1][1] = {f.t2, 1};
    R.partner_[f.t2][1] = {f.t1, 1};
    R.label_[f.t1][1] = R.label_[f.t2][1] = next_label_;
    R.next_label_ = next_label_ + 1;

    const int c = punct_[f.t1][f.s1], x = punct_[f.t1][mod3(f.s1 + 1)];
    const int y = punct_[f.t1][mod3(f.s1 + 2)], d = punct_[f.t2][f.s2];
    R.punct_[f.t1] = {c, x, d};
    R.punct_[f.t2] = {d, y, c};
    return R;
}

Triangulation Triangulation::with_preferred(int puncture) const {
    if (puncture < 0 || puncture >= num_punctures_)
        throw Error(Errc::BadInput, "preferred puncture " + std::to_string(puncture) + " does not exist");
    Triangulation R = *this;
    R.preferred_ = puncture;
    return R;
}

std::vector<int> Triangulation::encode_from(int t0, int r0, std::vector<int>* order,
                                            std::vector<int>* rots) const {
    const int n = num_triangles();
    std::vector<int> idx(n, -1), rot(n, 0), seq;
    seq.reserve(n);
    std::vector<int> code;
    code.reserve(9 * n + 2);
    code.push_back(n);
    idx[t0] = 0;
    rot[t0] = r0;
    seq.push_back(t0);
    for (std::size_t head = 0; head < seq.size(); ++head) {
        int t = seq[head];
        for (int k = 0; k < 3; ++k) {
            int s = mod3(rot[t] + k);
            Slot p = partner_[t][s];
            if (idx[p.tri] < 0) {
                idx[p.tri] = static_cast<int>(seq.size());
                rot[p.tri] = p.side;
                seq.push_back(p.tri);
            }
            code.push_back(idx[p.tri]);
            code.push_back(mod3(p.side - rot[p.tri]));
            code.push_back(punct_[t][s] == preferred_ ? 1 : 0);
        }
    }
    if (order) *order = seq;
    if (rots) *rots = rot;
    return code;
}

CanonicalForm Triangulation::canonical_form() const {
    CanonicalForm best;
    for (int t = 0; t < num_triangles(); ++t)
        for (int r = 0; r < 3; ++r) {
            auto code = encode_from(t, r);
            if (best.code.empty() || code < best.code) best.code = std::move(code);
        }
    best.hash = fnv1a(best.code);
    return best;
}

std::vector<Isomorphism> Triangulation::isomorphisms_to(const Triangulation& other,
                                                        bool respect_preferred) const {
    std::vector<Isomorphism> out;
    const int n = num_triangles();
    if (other.num_triangles() != n) return out;
    for (int u0 = 0; u0 < n; ++u0)
        for (int r0 = 0; r0 < 3; ++r0) {
            Isomorphism iso;
            iso.tri.assign(n, -1);
            iso.rot.assign(n, 0);
            std::vector<int> used(n, 0);
            iso.tri[0] = u0;
            iso.rot[0] = r0;
            used[u0] = 1;
            std::vector<int> seq{0};
            bool ok = true;
            for (std::size_t h = 0; h < seq.size() && ok; ++h) {
                int t = seq[h];
                for (int s = 0; s < 3 && ok; ++s) {
                    Slot img = iso.apply({t, s});
                    Slot p = partner_[t][s];
                    Slot q = other.partner_[img.tri][img.side];
                    int want_rot = mod3(q.side - p.side);
                    if (iso.tri[p.tri] < 0) {
                        if (used[q.tri]) { ok = false; break; }
                        iso.tri[p.tri] = q.tri;
                        iso.rot[p.tri] = want_rot;
                        used[q.tri] = 1;
                        seq.push_back(p.tri);
                    } else if (iso.tri[p.tri] != q.tri || iso.rot[p.tri] != want_rot) {
                        ok = false;
                    }
                }
            }
            if (!ok) continue;
            if (respect_preferred) {
                for (int t = 0; t < n && ok; ++t)
                    for (int v = 0; v < 3 && ok; ++v) {
                        bool a = punct_[t][v] == preferred_;
                        bool b = other.punct_[iso.tri[t]][mod3(v + iso.rot[t])] == other.preferred_;
                        if (a != b) ok = false;
                    }
            }
            if (ok) out.push_back(std::move(iso));
        }
    return out;
}

bool Triangulation::same_gluing(const Triangulation& other) const {
    return partner_ == other.partner_;
}

Triangulation once_punctured_torus() {
    std::vector<std::array<Slot, 3>> p{{Slot{1, 0}, Slot{1, 1}, Slot{1, 2}},
                                       {Slot{0, 0}, Slot{0, 1}, Slot{0, 2}}};
    return Triangulation::build(p, 0, "S_1_1");
}

Triangulation twice_punctured_torus() {
    Triangulation base = once_punctured_torus();
    auto cover = build_cover(base, {{0, {1, 0}}, {1, {0, 1}}, {2, {0, 1}}});
    auto partner = std::vector<std::array<Slot, 3>>(cover.lifted.num_triangles());
    for (int t = 0; t < cover.lifted.num_triangles(); ++t)
        for (int s = 0; s < 3; ++s) partner[t][s] = cover.lifted.partner({t, s});
    return Triangulation::build(partner, 0, "S_1_2");
}

int CoverMap::cross(Slot s, int sheet) const {
    Slot p = base.partner(s);
    const auto& perm = rep.at(base.label(s));
    if (s < p) return perm[sheet];
    return static_cast<int>(std::find(perm.begin(), perm.end(), sheet) - perm.begin());
}

CoverMap build_cover(const Triangulation& base, const std::map<int, std::vector<int>>& rep_in,
                     int preferred_sheet) {
    CoverMap cm;
    cm.base = base;
    const auto labels = base.labels();
    int n = -1;
    for (int l : labels) {
        auto it = rep_in.find(l);
        std::vector<int> perm;
        if (it != rep_in.end()) perm = it->second;
        if (n < 0 && !perm.empty()) n = static_cast<int>(perm.size());
        cm.rep[l] = perm;
    }
    if (n <= 0) throw Error(Errc::BadInput, "cover representation has no permutations");
    for (auto& [l, perm] : cm.rep) {
        if (perm.empty()) {
            perm.resize(n);
            std::iota(perm.begin(), perm.end(), 0);
        }
        std::vector<int> sorted = perm;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> id(n);
        std::iota(id.begin(), id.end(), 0);
        if (static_cast<int>(perm.size()) != n || sorted != id)
            throw Error(Errc::BadInput, "edge " + std::to_string(l) + " is not assigned a permutation of 0.." + std::to_string(n - 1));
    }
    for (const auto& [l, perm] : rep_in)
        if (!base.has_label(l)) throw Error(Errc::BadInput, "no edge with label " + std::to_string(l));
    if (preferred_sheet < 0 || preferred_sheet >= n) throw Error(Errc::BadInput, "preferred sheet out of range");
    cm.degree = n;

    const int T = base.num_triangles();
    std::vector<std::array<Slot, 3>> partner(T * n);
    for (int t = 0; t < T; ++t)
        for (int s = 0; s < 3; ++s) {
            Slot p = base.partner({t, s});
            for (int i = 0; i < n; ++i) partner[cm.lift_triangle(t, i)][s] = {cm.lift_triangle(p.tri, cm.cross({t, s}, i)), p.side};
        }
    cm.projection.resize(T * n);
    for (int t = 0; t < T * n; ++t) cm.projection[t] = t / n;

    Triangulation lifted;
    try {
        lifted = Triangulation::build(partner, 0, base.name() + "_cover" + std::to_string(n));
    } catch (const Error& e) {
        if (e.code() == Errc::Disconnected) throw Error(Errc::Intransitive, "permutation assignment is not transitive");
        throw;
    }
    int pref = -1;
    for (int t = 0; t < T && pref < 0; ++t)
        for (int v = 0; v < 3 && pref < 0; ++v)
            if (base.puncture(t, v) == base.preferred_puncture()) pref = lifted.puncture(cm.lift_triangle(t, preferred_sheet), v);
    cm.lifted = lifted.with_preferred(pref);
    return cm;
}

} // namespace cusplab
