#pragma once
//
// The Farey graph: arcs on the once-punctured torus, named by slopes.
//
// Generators: R = [[1,1],[0,1]], L = [[1,0],[1,1]]; a word is the left-to-right
// matrix product of its letters. Slopes are stored with q >= 0, and 1/0 for
// infinity. Integer arithmetic is 64-bit with checked overflow (Errc::Overflow).
//
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cusplab/error.hpp"

namespace cusplab::farey {

using i64 = std::int64_t;

struct Slope {
    i64 p = 1;
    i64 q = 0;
    friend bool operator==(const Slope&, const Slope&) = default;
    friend auto operator<=>(const Slope&, const Slope&) = default;
};

// Reduces and normalizes (p, q); (0, 0) is BadInput.
Slope make_slope(i64 p, i64 q);
Slope parse_slope(const std::string& text);  // "p/q", "inf", or an integer
std::string to_string(Slope s);

struct Mat2 {
    i64 a = 1, b = 0, c = 0, d = 1;
    friend bool operator==(const Mat2&, const Mat2&) = default;
    i64 trace() const { return a + d; }
    i64 det() const;
};

Mat2 mul(const Mat2& x, const Mat2& y);
Mat2 inverse(const Mat2& m);  // of a determinant-one matrix
Mat2 power(const Mat2& m, int n);
inline constexpr Mat2 R_MAT{1, 1, 0, 1};
inline constexpr Mat2 L_MAT{1, 0, 1, 1};

struct Monodromy {
    Mat2 matrix;
    std::optional<std::string> word;
    bool is_pseudo_anosov() const;
};

// Validates the letters; EmptyWord on "".
Monodromy word_to_matrix(const std::string& word);
// BadInput unless the determinant is 1.
Monodromy from_matrix(const Mat2& m);
Monodromy power(const Monodromy& m, int n);

bool adjacent(Slope s, Slope t);
// |p q' - q p'|, the geometric intersection number of the two slopes' curves.
i64 determinant_gap(Slope s, Slope t);
Slope act(const Mat2& m, Slope s);
inline Slope act(const Monodromy& m, Slope s) { return act(m.matrix, s); }

// Farey-graph distance along continued-fraction convergents.
int distance(Slope s, Slope t);

// Exact translation distance min_v d(v, m v). For a positive word this is a
// finite search along the strip of Farey triangles crossed by the axis; a bare
// matrix is first conjugated to such a word.
int translation_distance(const Monodromy& m);

// A positive LR word W and a determinant-one matrix P with P^-1 M^e P = W for
// e = +1 or -1 (after replacing M by -M when its trace is negative).
struct AxisWord {
    std::string word;
    Mat2 conjugator;
    int exponent = 1;
};
AxisWord axis_word(const Mat2& m);

// Independent cross-check: min of d(v, m v) over slopes with |p|,|q| <= bound,
// doubling the bound from `start` until the minimum is unchanged twice.
struct BoxSearch {
    int value = 0;
    std::vector<i64> schedule;  // bounds visited
    bool stable = false;
};
BoxSearch translation_distance_box(const Monodromy& m, i64 start = 16, i64 max_bound = 1024);

// a_n / n for n = 1..N with a_n = d(inf, m^n inf).
struct StableUpper {
    std::vector<int> a;            // a[n-1] = a_n
    std::vector<double> ratios;    // a_n / n
    double estimate = 0;           // running infimum
};
StableUpper stable_upper(const Monodromy& m, int N);

// d(inf, W^n inf) for a positive word, evaluated inside the strip (no big integers).
int ladder_orbit_distance(const std::string& word, int n);

} // namespace cusplab::farey
