#include "cusplab/bundle.hpp"

#include <Eigen/Dense>
#include <gsl/gsl_sf_clausen.h>

#include <algorithm>
#include <map>
#include <tuple>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <optional>

#include "cusplab/arcs.hpp"
#include "cusplab/farey.hpp"

namespace cusplab::bundle {

namespace {

constexpr double pi = std::numbers::pi;

// Role of each vertex in the standard placement (role 0 at infinity, then 0, 1, z).
constexpr std::array<int, 4> kRole{0, 1, 3, 2};

constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

int role_param(int i, int j) {
    if (i > j) std::swap(i, j);
    if ((i == 0 && j == 1) || (i == 2 && j == 3)) return 0;
    if ((i == 0 && j == 2) || (i == 1 && j == 3)) return 1;
    return 2;
}

// Counterclockwise order of the other three vertices, seen from vertex v at infinity.
std::array<int, 3> ccw_from(int v) {
    static constexpr std::array<std::array<int, 3>, 4> by_role{{{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}}};
    std::array<int, 4> vertex_of{};
    for (int k = 0; k < 4; ++k) vertex_of[kRole[k]] = k;
    auto r = by_role[kRole[v]];
    return {vertex_of[r[0]], vertex_of[r[1]], vertex_of[r[2]]};
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

} // namespace

int edge_index(int a, int b) {
    if (a > b) std::swap(a, b);
    for (int e = 0; e < 6; ++e)
        if (kPairs[e][0] == a && kPairs[e][1] == b) return e;
    throw Error(Errc::BadInput, "not an edge");
}

int edge_param(int e) { return role_param(kRole[kPairs[e][0]], kRole[kPairs[e][1]]); }

cplx shape_param(cplx z, int which) {
    switch (which) {
    case 0: return z;
    case 1: return 1.0 / (1.0 - z);
    default: return (z - 1.0) / z;
    }
}

// ---- triangulation -------------------------------------------------------------

LayeredTriangulation layered_triangulation(const std::string& word) {
    auto m = farey::word_to_matrix(word);
    if (word.find('L') == std::string::npos || word.find('R') == std::string::npos)
        throw Error(Errc::NotPseudoAnosov, "word '" + word + "' needs both letters");
    if (!m.is_pseudo_anosov()) throw Error(Errc::NotPseudoAnosov, "word '" + word + "'");

    auto torus = arcs::share(once_punctured_torus());
    auto phi = arcs::from_word(torus, word);
    auto seq = arcs::flip_sequence(*torus, phi.flips);

    LayeredTriangulation L;
    L.word = word;
    L.num_tets = static_cast<int>(phi.flips.size());
    L.glue.resize(L.num_tets);

    // The tetrahedron face currently carrying each surface triangle.
    struct Owner {
        int tet = -1, face = -1;
        std::array<int, 3> vmap{};  // triangle vertex -> tetrahedron vertex
    };
    std::vector<Owner> top(2), bottom(2);
    auto join = [&](const Owner& a, const Owner& b, int closure) {
        FaceGluing ab{b.tet, b.face, {}, closure}, ba{a.tet, a.face, {}, -closure};
        for (int v = 0; v < 3; ++v) {
            ab.perm[a.vmap[v]] = b.vmap[v];
            ba.perm[b.vmap[v]] = a.vmap[v];
        }
        ab.perm[a.face] = b.face;
        ba.perm[b.face] = a.face;
        L.glue[a.tet][a.face] = ab;
        L.glue[b.tet][b.face] = ba;
    };
    auto attach = [&](int tri, const Owner& lower) {
        if (top[tri].tet < 0) bottom[tri] = lower;
        else join(top[tri], lower, 0);
    };
    for (int i = 0; i < L.num_tets; ++i) {
        FlipSite f = seq[i].flip_site(phi.flips[i]);
        Owner a{i, 3, {}}, b{i, 2, {}};
        a.vmap[f.s1] = 2, a.vmap[mod3(f.s1 + 1)] = 0, a.vmap[mod3(f.s1 + 2)] = 1;
        b.vmap[f.s2] = 3, b.vmap[mod3(f.s2 + 1)] = 1, b.vmap[mod3(f.s2 + 2)] = 0;
        attach(f.t1, a);
        attach(f.t2, b);
        top[f.t1] = {i, 1, {2, 0, 3}};
        top[f.t2] = {i, 0, {3, 1, 2}};
    }
    for (int t = 0; t < 2; ++t) {
        const Owner& up = top[t];
        const Owner& down = bottom[phi.iso.tri[t]];
        if (up.tet < 0 || down.tet < 0) throw Error(Errc::BadInput, "a triangle is never flipped");
        Owner rotated = down;
        for (int v = 0; v < 3; ++v) rotated.vmap[v] = down.vmap[mod3(v + phi.iso.rot[t])];
        join(up, rotated, 1);
    }

    UnionFind uf(6 * L.num_tets);
    for (int t = 0; t < L.num_tets; ++t)
        for (int f = 0; f < 4; ++f) {
            const auto& g = L.glue[t][f];
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b)
                    if (a != f && b != f) uf.unite(6 * t + edge_index(a, b), 6 * g.tet + edge_index(g.perm[a], g.perm[b]));
        }
    std::vector<int> id(6 * L.num_tets, -1);
    L.edge_class.resize(6 * L.num_tets);
    for (int k = 0; k < 6 * L.num_tets; ++k) {
        int r = uf.find(k);
        if (id[r] < 0) id[r] = L.num_edge_classes++;
        L.edge_class[k] = id[r];
    }
    return L;
}

// ---- cusp combinatorics ------------------------------------------------------------

namespace {

// Cusp triangle (t, v): the link of vertex v of tetrahedron t. Its side in face w
// (w != v) is opposite its corner w.
struct CuspTri {
    int tet, vert;
};
int cusp_index(int t, int v) { return 4 * t + v; }

struct Crossing {
    int from;    // cusp triangle index
    int corner;  // side crossed is opposite this corner
    int to;
    int to_corner;
};

Crossing cross(const LayeredTriangulation& L, int from, int corner) {
    int t = from / 4, v = from % 4;
    const auto& g = L.glue[t][corner];
    return {from, corner, cusp_index(g.tet, g.perm[v]), g.perm[corner]};
}

struct CuspTree {
    std::vector<int> parent;           // crossing index into `via`, -1 at the root
    std::vector<Crossing> via;         // tree crossings, by child
    std::vector<int> order;            // BFS order
    std::vector<int> depth;
    std::vector<int> winding;          // closure crossings along the tree path
    std::vector<Crossing> non_tree;
};

CuspTree cusp_tree(const LayeredTriangulation& L) {
    const int n = 4 * L.num_tets;
    CuspTree tr;
    tr.parent.assign(n, -2);
    tr.via.resize(n);
    tr.depth.assign(n, 0);
    tr.winding.assign(n, 0);
    std::deque<int> q{0};
    tr.parent[0] = -1;
    std::vector<std::vector<bool>> used(n, std::vector<bool>(4, false));
    while (!q.empty()) {
        int a = q.front();
        q.pop_front();
        tr.order.push_back(a);
        for (int w = 0; w < 4; ++w) {
            if (w == a % 4 || used[a][w]) continue;
            Crossing c = cross(L, a, w);
            used[a][w] = true;
            used[c.to][c.to_corner] = true;
            int closure = L.glue[a / 4][w].closure;
            if (tr.parent[c.to] == -2) {
                tr.parent[c.to] = a;
                tr.via[c.to] = c;
                tr.depth[c.to] = tr.depth[a] + 1;
                tr.winding[c.to] = tr.winding[a] + closure;
                q.push_back(c.to);
            } else {
                tr.non_tree.push_back(c);
            }
        }
    }
    for (int k = 0; k < n; ++k)
        if (tr.parent[k] == -2) throw Error(Errc::BadInput, "cusp triangulation is disconnected");
    return tr;
}

int crossing_winding(const LayeredTriangulation& L, const Crossing& c) { return L.glue[c.from / 4][c.corner].closure; }

// The closed loop: tree path lca -> from, the crossing, then tree path to -> lca.
std::vector<Crossing> loop_of(const LayeredTriangulation& L, const CuspTree& tr, const Crossing& c) {
    std::vector<Crossing> up_from, up_to;
    int a = c.from, b = c.to;
    while (tr.depth[a] > tr.depth[b]) up_from.push_back(tr.via[a]), a = tr.parent[a];
    while (tr.depth[b] > tr.depth[a]) up_to.push_back(tr.via[b]), b = tr.parent[b];
    while (a != b) {
        up_from.push_back(tr.via[a]), a = tr.parent[a];
        up_to.push_back(tr.via[b]), b = tr.parent[b];
    }
    std::vector<Crossing> loop(up_from.rbegin(), up_from.rend());
    loop.push_back(c);
    for (const auto& x : up_to) {
        // Walk the tree edge backwards.
        Crossing back = cross(L, x.to, x.to_corner);
        loop.push_back(back);
    }
    return loop;
}

// Corners cut by a closed loop, with +1 for corners on the left.
std::vector<Term> holonomy_terms(const std::vector<Crossing>& loop) {
    std::vector<Term> terms;
    const int m = static_cast<int>(loop.size());
    for (int k = 0; k < m; ++k) {
        const Crossing& in = loop[k];
        const Crossing& out = loop[(k + 1) % m];
        if (in.to != out.from) throw Error(Errc::BadInput, "broken cusp loop");
        int tri = in.to, t = tri / 4, v = tri % 4;
        int in_opp = in.to_corner, out_opp = out.corner;
        if (in_opp == out_opp) throw Error(Errc::BadInput, "cusp loop backtracks");
        int c = 6 - v - in_opp - out_opp;
        auto ccw = ccw_from(v);
        int ic = int(std::find(ccw.begin(), ccw.end(), c) - ccw.begin());
        bool left = ccw[(ic + 1) % 3] == out_opp;
        terms.push_back({t, edge_param(edge_index(v, c)), left ? 1 : -1});
    }
    return terms;
}

} // namespace

GluingSystem gluing_system(const LayeredTriangulation& L) {
    GluingSystem sys;
    sys.num_tets = L.num_tets;
    sys.edges.resize(L.num_edge_classes);
    for (auto& e : sys.edges) e.target = cplx(0, 2 * pi);
    for (int t = 0; t < L.num_tets; ++t)
        for (int e = 0; e < 6; ++e) sys.edges[L.edge_class[6 * t + e]].terms.push_back({t, edge_param(e), 1});

    auto tr = cusp_tree(L);
    for (const auto& c : tr.non_tree) {
        int w = tr.winding[c.from] + crossing_winding(L, c) - tr.winding[c.to];
        if (w != 0) {
            sys.completeness.terms = holonomy_terms(loop_of(L, tr, c));
            sys.completeness.target = 0;
            return sys;
        }
    }
    throw Error(Errc::BadInput, "no peripheral loop crosses the fiber");
}

std::vector<cplx> residuals(const GluingSystem& sys, const std::vector<cplx>& z) {
    std::vector<cplx> r;
    auto eval = [&](const Equation& eq) {
        cplx s = -eq.target;
        for (const auto& t : eq.terms) s += double(t.coef) * std::log(shape_param(z[t.tet], t.which));
        return s;
    };
    for (const auto& e : sys.edges) r.push_back(eval(e));
    r.push_back(eval(sys.completeness));
    return r;
}

double max_residual(const GluingSystem& sys, const std::vector<cplx>& z) {
    double m = 0;
    for (cplx x : residuals(sys, z)) m = std::max(m, std::abs(x));
    return m;
}

std::vector<cplx> initial_shapes(int n, Init init) {
    cplx z = init == Init::I ? cplx(0, 1) : cplx(0.5, std::sqrt(3.0) / 2);
    return std::vector<cplx>(n, z);
}

namespace {

cplx dlog(cplx z, int which) {
    switch (which) {
    case 0: return 1.0 / z;
    case 1: return 1.0 / (1.0 - z);
    default: return 1.0 / (z * (z - 1.0));
    }
}

void check_shapes(const std::vector<cplx>& z) {
    for (cplx w : z) {
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) throw Error(Errc::Diverged, "non-finite shape");
        if (w.imag() <= 1e-10) throw Error(Errc::DegenerateShape, "shape left the upper half plane");
    }
}

} // namespace

Solution solve_shapes(const GluingSystem& sys, std::vector<cplx> z, double tol, int max_iter) {
    if (static_cast<int>(z.size()) != sys.num_tets) throw Error(Errc::BadInput, "one shape per tetrahedron");
    if (!(tol > 0)) throw Error(Errc::BadInput, "tolerance must be positive");
    check_shapes(z);
    const int n = sys.num_tets;
    const int m = static_cast<int>(sys.edges.size()) + 1;
    Solution sol;
    for (int it = 0;; ++it) {
        auto r = residuals(sys, z);
        double res = 0;
        for (cplx x : r) res = std::max(res, std::abs(x));
        if (!std::isfinite(res)) throw Error(Errc::Diverged, "residual is not finite");
        if (res < tol) {
            sol.shapes = z;
            sol.residual = res;
            sol.iterations = it;
            return sol;
        }
        if (it >= max_iter) throw Error(Errc::MaxIterations, "residual " + std::to_string(res));
        Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(m, n);
        Eigen::VectorXcd F(m);
        for (int i = 0; i < m; ++i) {
            const Equation& eq = i + 1 < m ? sys.edges[i] : sys.completeness;
            for (const auto& t : eq.terms) J(i, t.tet) += double(t.coef) * dlog(z[t.tet], t.which);
            F(i) = r[i];
        }
        Eigen::VectorXcd step = J.colPivHouseholderQr().solve(-F);
        double scale = 1.0;
        std::vector<cplx> next;
        for (int halvings = 0;; ++halvings) {
            next = z;
            bool ok = true;
            for (int k = 0; k < n; ++k) {
                next[k] += scale * step(k);
                ok = ok && next[k].imag() > 1e-10 && std::isfinite(next[k].real()) && std::abs(next[k] - 1.0) > 1e-12;
            }
            if (ok) {
                double nr = max_residual(sys, next);
                if (std::isfinite(nr) && (nr < res || halvings >= 20)) break;
            }
            if (halvings >= 40) throw Error(Errc::DegenerateShape, "no damped step stays in the upper half plane");
            scale /= 2;
        }
        z = std::move(next);
    }
}

double tetrahedron_volume(cplx z) {
    double total = 0;
    for (int k = 0; k < 3; ++k) total += gsl_sf_clausen(2 * std::arg(shape_param(z, k))) / 2;
    return total;
}

double volume(const std::vector<cplx>& shapes) {
    double v = 0;
    for (cplx z : shapes) v += tetrahedron_volume(z);
    return v;
}

// ---- development -----------------------------------------------------------------------

namespace {

// A point of the Riemann sphere in homogeneous coordinates.
struct Pt {
    cplx u, v;
    static Pt finite(cplx w) { return {w, 1.0}; }
    static Pt inf() { return {1.0, 0.0}; }
    bool is_inf() const { return std::abs(v) < 1e-9 * std::abs(u); }
    cplx w() const { return u / v; }
};

using Mat = Eigen::Matrix2cd;

// Sends 0, 1, infinity to a, b, c.
Mat from_standard(Pt a, Pt b, Pt c) {
    Mat N;
    N << c.u, a.u, c.v, a.v;
    Eigen::Vector2cd ab = N.inverse() * Eigen::Vector2cd(b.u, b.v);
    Mat M;
    M << ab(0) * c.u, ab(1) * a.u, ab(0) * c.v, ab(1) * a.v;
    return M;
}

Pt mobius(const Mat& M, Pt p) {
    Eigen::Vector2cd x = M * Eigen::Vector2cd(p.u, p.v);
    double s = std::max(std::abs(x(0)), std::abs(x(1)));
    return {x(0) / s, x(1) / s};
}

Pt standard_position(int role, cplx z) {
    switch (role) {
    case 0: return Pt::inf();
    case 1: return Pt::finite(0);
    case 2: return Pt::finite(1);
    default: return Pt::finite(z);
    }
}

// Completes the tetrahedron whose vertices other than `missing` are at `pos`.
Pt fourth_vertex(cplx z, const std::array<Pt, 4>& pos, int missing) {
    std::array<int, 3> known{};
    int k = 0;
    for (int v = 0; v < 4; ++v)
        if (v != missing) known[k++] = v;
    Mat from = from_standard(standard_position(kRole[known[0]], z), standard_position(kRole[known[1]], z),
                             standard_position(kRole[known[2]], z));
    Mat to = from_standard(pos[known[0]], pos[known[1]], pos[known[2]]);
    return mobius(to * from.inverse(), standard_position(kRole[missing], z));
}

struct CuspDevelopment {
    std::vector<std::array<Pt, 4>> pos;  // per cusp triangle, its tetrahedron's vertices
    std::vector<std::pair<cplx, int>> translations;  // (translation, winding) per non-tree crossing
    double area = 0;
};

CuspDevelopment develop_cusp(const LayeredTriangulation& L, const std::vector<cplx>& z) {
    auto tr = cusp_tree(L);
    CuspDevelopment dev;
    dev.pos.resize(4 * L.num_tets);
    {
        std::array<Pt, 4> p{};
        int v0 = 0;
        p[v0] = Pt::inf();
        p[1] = Pt::finite(0);
        p[2] = Pt::finite(1);
        p[3] = fourth_vertex(z[0], p, 3);
        dev.pos[0] = p;
    }
    auto place = [&](const Crossing& c) {
        const auto& from = dev.pos[c.from];
        const auto& g = L.glue[c.from / 4][c.corner];
        std::array<Pt, 4> p{};
        for (int x = 0; x < 4; ++x)
            if (x != c.corner) p[g.perm[x]] = from[x];
        p[c.to_corner] = fourth_vertex(z[c.to / 4], p, c.to_corner);
        return p;
    };
    for (int k : tr.order)
        if (tr.parent[k] >= 0) dev.pos[k] = place(tr.via[k]);
    for (const auto& c : tr.non_tree) {
        auto p = place(c);
        int v = c.to % 4;
        int shared = -1;
        for (int x = 0; x < 4; ++x)
            if (x != v && x != c.to_corner) shared = x;
        cplx tau = p[shared].w() - dev.pos[c.to][shared].w();
        int w = tr.winding[c.from] + crossing_winding(L, c) - tr.winding[c.to];
        dev.translations.push_back({tau, w});
    }
    for (int k = 0; k < 4 * L.num_tets; ++k) {
        const auto& p = dev.pos[k];
        auto ccw = ccw_from(k % 4);
        cplx a = p[ccw[0]].w(), b = p[ccw[1]].w(), c = p[ccw[2]].w();
        dev.area += std::imag(std::conj(b - a) * (c - a)) / 2;
    }
    return dev;
}

// Real gcd of collinear vectors.
cplx lattice_gcd(std::vector<cplx> v, double eps) {
    std::erase_if(v, [&](cplx x) { return std::abs(x) < eps; });
    if (v.empty()) throw Error(Errc::NotSolved, "no fiber-boundary translation");
    cplx g = v[0];
    for (std::size_t i = 1; i < v.size(); ++i) {
        cplx a = g, b = v[i];
        while (std::abs(b) > eps) {
            double q = std::round(std::real(a / b));
            cplx r = a - q * b;
            a = b;
            b = r;
        }
        g = a;
    }
    return g;
}

} // namespace

CuspCrossSection cusp_cross_section(const LayeredTriangulation& L, const std::vector<cplx>& shapes) {
    auto sys = gluing_system(L);
    if (static_cast<int>(shapes.size()) != L.num_tets) throw Error(Errc::BadInput, "one shape per tetrahedron");
    if (max_residual(sys, shapes) > 1e-8) throw Error(Errc::NotSolved, "shapes do not solve the gluing equations");
    auto dev = develop_cusp(L, shapes);
    const double eps = 1e-7 * std::sqrt(dev.area);
    std::vector<cplx> flat;
    for (const auto& [tau, w] : dev.translations)
        if (w == 0) flat.push_back(tau);
    for (std::size_t i = 0; i < dev.translations.size(); ++i)
        for (std::size_t j = i + 1; j < dev.translations.size(); ++j) {
            auto [ti, wi] = dev.translations[i];
            auto [tj, wj] = dev.translations[j];
            if (wi != 0 || wj != 0) flat.push_back(double(wj) * ti - double(wi) * tj);
        }
    CuspCrossSection cs;
    cs.lambda = lattice_gcd(flat, eps);
    // Extended Euclid on the windings for a class crossing the fiber once.
    cplx mu = 0;
    long wmu = 0;
    for (const auto& [tau, w] : dev.translations) {
        if (w == 0) continue;
        if (wmu == 0) {
            mu = tau, wmu = w;
            continue;
        }
        long a = wmu, b = w, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
        while (b != 0) {
            long q = a / b;
            std::tie(a, b) = std::pair(b, a - q * b);
            std::tie(x0, x1) = std::pair(x1, x0 - q * x1);
            std::tie(y0, y1) = std::pair(y1, y0 - q * y1);
        }
        mu = double(x0) * mu + double(y0) * tau;
        wmu = a;
    }
    if (wmu < 0) mu = -mu, wmu = -wmu;
    if (wmu != 1) throw Error(Errc::NotSolved, "no translation crosses the fiber once");
    mu -= std::round(std::real(mu / cs.lambda)) * cs.lambda;
    cs.mu = mu;
    cs.area = dev.area;
    cs.longitude_length = std::abs(cs.lambda);
    cs.height = cs.area / cs.longitude_length;
    return cs;
}

// ---- maximal cusp ---------------------------------------------------------------------

namespace {

double circumradius(cplx a, cplx b, cplx c) {
    double area2 = std::abs(std::imag(std::conj(b - a) * (c - a)));
    return std::abs(b - a) * std::abs(c - a) * std::abs(c - b) / (2 * area2);
}

// Tetrahedra reaching above this fraction of the best horoball are explored.
constexpr double kReach = 1.0 / 16;

// Lifts of a tetrahedron up to the cusp translations, keyed by the centroid
// in lattice coordinates on a grid (neighboring cells are probed).
class LiftSet {
public:
    LiftSet(cplx lambda, cplx mu) {
        double det = lambda.real() * mu.imag() - mu.real() * lambda.imag();
        inv_ = {mu.imag() / det, -mu.real() / det, -lambda.imag() / det, lambda.real() / det};
    }
    bool insert(int tet, cplx centroid) {
        double s = inv_[0] * centroid.real() + inv_[1] * centroid.imag();
        double t = inv_[2] * centroid.real() + inv_[3] * centroid.imag();
        s -= std::floor(s), t -= std::floor(t);
        long i = long(s * kGrid), j = long(t * kGrid);
        for (long di = -1; di <= 1; ++di)
            for (long dj = -1; dj <= 1; ++dj) {
                auto it = cells_.find(key(tet, wrap(i + di), wrap(j + dj)));
                if (it == cells_.end()) continue;
                for (auto [s2, t2] : it->second) {
                    double ds = s - s2, dt = t - t2;
                    ds -= std::round(ds), dt -= std::round(dt);
                    if (std::abs(ds) < 1e-8 && std::abs(dt) < 1e-8) return false;
                }
            }
        cells_[key(tet, i, j)].push_back({s, t});
        return true;
    }

private:
    static constexpr long kGrid = 1L << 20;
    static long wrap(long i) { return ((i % kGrid) + kGrid) % kGrid; }
    static std::tuple<int, long, long> key(int tet, long i, long j) { return {tet, i, j}; }
    std::array<double, 4> inv_;
    std::map<std::tuple<int, long, long>, std::vector<std::pair<double, double>>> cells_;
};

} // namespace

CuspReport maximal_cusp(const LayeredTriangulation& L, const std::vector<cplx>& shapes, int depth, long node_cap) {
    if (depth <= 0) throw Error(Errc::BadInput, "depth must be positive");
    CuspCrossSection ref = cusp_cross_section(L, shapes);
    auto dev = develop_cusp(L, shapes);
    const int n = L.num_tets;

    // Distances between the reference horoballs along each tetrahedron edge,
    // from the horocyclic lengths of the cusp triangles at both ends.
    std::vector<std::array<double, 6>> delta(n);
    for (int k = 0; k < 4 * n; ++k) {
        int t = k / 4, v = k % 4;
        const auto& p = dev.pos[k];
        for (int w = 0; w < 4; ++w) {
            if (w == v) continue;
            int u = 0;
            while (u == v || u == w) ++u;
            double lv = std::abs(p[w].w() - p[u].w());
            const auto& q = dev.pos[4 * t + w];
            double lw = std::abs(q[v].w() - q[u].w());
            delta[t][edge_index(v, w)] = -std::log(lv * lw);
        }
    }

    struct Node {
        int tet;
        int entry;  // vertex opposite the face we came through
        std::array<Pt, 4> pos;
        std::array<double, 4> diam;
        int depth;
    };
    CuspReport rep;
    double best = 0;
    std::deque<Node> queue;
    auto push_across = [&](int t, int f, const std::array<Pt, 4>& pos, const std::array<double, 4>& diam, int d) {
        const auto& g = L.glue[t][f];
        Node child{g.tet, g.perm[f], {}, {}, d};
        for (int x = 0; x < 4; ++x)
            if (x != f) child.pos[g.perm[x]] = pos[x], child.diam[g.perm[x]] = diam[x];
        queue.push_back(std::move(child));
    };
    for (int k = 0; k < 4 * n; ++k) {
        int t = k / 4, v = k % 4;
        std::array<double, 4> diam{};
        for (int w = 0; w < 4; ++w)
            if (w != v) best = std::max(best, diam[w] = std::exp(-delta[t][edge_index(v, w)]));
        push_across(t, v, dev.pos[k], diam, 1);
    }

    // Depths d, 2d, 4d, ...: the best diameter seen within each.
    std::vector<int> schedule{depth};
    std::vector<double> at_depth;
    LiftSet seen(ref.lambda, ref.mu);
    bool capped = false;
    while (!queue.empty()) {
        Node node = std::move(queue.front());
        queue.pop_front();
        while (node.depth > schedule.back()) {
            at_depth.push_back(best);
            schedule.push_back(2 * schedule.back());
        }
        const int t = node.tet, m = node.entry;
        node.pos[m] = fourth_vertex(shapes[t], node.pos, m);
        if (node.pos[m].is_inf()) continue;  // back at the cusp: a floor tetrahedron
        cplx centroid = 0;
        for (const auto& p : node.pos) centroid += p.w() / 4.0;
        if (!seen.insert(t, centroid)) continue;
        if (++rep.nodes > node_cap) {
            capped = true;
            break;
        }
        int a = -1;  // the known vertex with the largest horoball
        for (int x = 0; x < 4; ++x)
            if (x != m && (a < 0 || node.diam[x] > node.diam[a])) a = x;
        node.diam[m] = std::norm(node.pos[m].w() - node.pos[a].w()) / (node.diam[a] * std::exp(delta[t][edge_index(a, m)]));
        best = std::max(best, node.diam[m]);
        for (int f = 0; f < 4; ++f) {
            if (f == m) continue;
            std::array<cplx, 3> face{};
            int j = 0;
            for (int x = 0; x < 4; ++x)
                if (x != f) face[j++] = node.pos[x].w();
            if (circumradius(face[0], face[1], face[2]) >= kReach * best) push_across(t, f, node.pos, node.diam, node.depth + 1);
        }
    }
    rep.exhausted = !capped;
    if (rep.exhausted) at_depth.push_back(best);
    else schedule.pop_back();
    rep.depth_schedule = schedule;
    rep.diameters = at_depth;

    // Certified when the exploration terminates; otherwise the best size must be
    // unchanged across the last two completed doublings.
    bool stable = rep.exhausted;
    const std::size_t k = at_depth.size();
    if (!stable && k >= 3)
        stable = std::abs(at_depth[k - 2] - at_depth[k - 3]) <= 1e-12 * at_depth[k - 3] &&
                 std::abs(at_depth[k - 1] - at_depth[k - 2]) <= 1e-12 * at_depth[k - 2];
    if (!stable) throw Error(Errc::DepthUnstable, "largest horoball not stable under depth doubling");
    if (!rep.exhausted) best = at_depth.back();

    rep.max_diameter = best;
    double s = 1.0 / std::sqrt(best);  // linear scale from the reference to the maximal cusp
    rep.section = ref;
    rep.section.lambda *= s;
    rep.section.mu *= s;
    rep.section.area = ref.area * s * s;
    rep.section.longitude_length = ref.longitude_length * s;
    rep.section.height = rep.section.area / rep.section.longitude_length;
    rep.area = rep.section.area;
    rep.longitude = rep.section.longitude_length;
    rep.height = rep.section.height;
    rep.cusp_volume = rep.area / 2;
    return rep;
}

} // namespace cusplab::bundle
