#pragma once
//
// Hyperbolic structures on once-punctured-torus bundles.
//
// Layered triangulation: one ideal tetrahedron per letter of the monodromy
// word, stacked along the flip sequence from the standard torus triangulation
// to its image, and closed by the flip sequence's isomorphism. In the
// tetrahedron of a flip, vertex 0 and 1 are the ends of the removed diagonal,
// 2 and 3 the ends of the added one; faces 3, 2 are the old triangles (bottom)
// and faces 1, 0 the new ones (top).
//
// Shapes: a tetrahedron's parameter z sits on edges 01 and 23, 1/(1-z) and
// (z-1)/z on the other two pairs of opposite edges (see edge_param).
//
#include <array>
#include <complex>
#include <string>
#include <vector>

#include "cusplab/error.hpp"

namespace cusplab::bundle {

using cplx = std::complex<double>;

struct FaceGluing {
    int tet = -1;
    int face = -1;
    std::array<int, 4> perm{};  // vertex of this tetrahedron -> vertex of the other
    int closure = 0;            // +1 top-to-bottom across the monodromy, -1 back, 0 inside the stack
};

// Index of the edge joining vertices a != b, in {01, 02, 03, 12, 13, 23}.
int edge_index(int a, int b);

struct LayeredTriangulation {
    std::string word;
    int num_tets = 0;
    std::vector<std::array<FaceGluing, 4>> glue;  // glue[t][f]: face f of tetrahedron t
    std::vector<int> edge_class;                  // [6*t + edge_index]
    int num_edge_classes = 0;
};

// NotPseudoAnosov unless the word has both letters.
LayeredTriangulation layered_triangulation(const std::string& word);

// 0: z, 1: 1/(1-z), 2: (z-1)/z — the parameter carried by edge e.
int edge_param(int e);
cplx shape_param(cplx z, int which);

// Log-form equations: sum over terms of coef * Log(param) = target.
struct Term {
    int tet;
    int which;  // 0, 1, 2 as in edge_param
    int coef;
};
struct Equation {
    std::vector<Term> terms;
    cplx target;
};
struct GluingSystem {
    int num_tets = 0;
    std::vector<Equation> edges;
    Equation completeness;  // log-holonomy of a peripheral curve transverse to the fiber
};
GluingSystem gluing_system(const LayeredTriangulation& T);

std::vector<cplx> residuals(const GluingSystem& sys, const std::vector<cplx>& z);
double max_residual(const GluingSystem& sys, const std::vector<cplx>& z);

enum class Init { I, Regular };
std::vector<cplx> initial_shapes(int n, Init init);

struct Solution {
    std::vector<cplx> shapes;
    double residual = 0;
    int iterations = 0;
};
// Damped Gauss-Newton on the edge and completeness equations.
// Errors: DegenerateShape, Diverged, MaxIterations, BadInput.
Solution solve_shapes(const GluingSystem& sys, std::vector<cplx> init, double tol = 1e-12, int max_iter = 100);

double tetrahedron_volume(cplx z);
double volume(const std::vector<cplx>& shapes);

// Cusp torus developed in the horosphere at height 1 above a tetrahedron
// vertex placed at infinity.
struct CuspCrossSection {
    cplx lambda;       // fiber-boundary translation
    cplx mu;           // a translation crossing the fiber once
    double area = 0;   // sum of the cusp triangle areas
    double longitude_length = 0;
    double height = 0;
};
// NotSolved unless the shapes satisfy the system to 1e-8.
CuspCrossSection cusp_cross_section(const LayeredTriangulation& T, const std::vector<cplx>& shapes);

struct CuspReport {
    double area = 0;
    double longitude = 0;
    double height = 0;
    double cusp_volume = 0;
    double max_diameter = 0;         // largest horoball at the reference size
    std::vector<int> depth_schedule;
    std::vector<double> diameters;   // best diameter found at each scheduled depth
    long nodes = 0;
    bool exhausted = false;          // the pruned development terminated
    CuspCrossSection section;        // at the maximal size
};
// Errors: NotSolved, DepthUnstable.
CuspReport maximal_cusp(const LayeredTriangulation& T, const std::vector<cplx>& shapes, int depth = 8,
                        long node_cap = 4000000);

} // namespace cusplab::bundle
