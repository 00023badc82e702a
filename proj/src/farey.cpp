#include "cusplab/farey.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <queue>

namespace cusplab::farey {

namespace {

using i128 = __int128;

i64 narrow(i128 x) {
    if (x > INT64_MAX || x < INT64_MIN) throw Error(Errc::Overflow, "integer exceeds 64 bits");
    return static_cast<i64>(x);
}

i64 add(i64 x, i64 y) {
    i64 r;
    if (__builtin_add_overflow(x, y, &r)) throw Error(Errc::Overflow, "integer exceeds 64 bits");
    return r;
}

i64 mulc(i64 x, i64 y) {
    i64 r;
    if (__builtin_mul_overflow(x, y, &r)) throw Error(Errc::Overflow, "integer exceeds 64 bits");
    return r;
}

// x*a + y*b = gcd(a, b) >= 0.
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    i64 old_r = a, r = b, old_x = 1, xx = 0, old_y = 0, yy = 1;
    while (r != 0) {
        i64 t = old_r / r;
        old_r -= t * r;
        std::swap(old_r, r);
        old_x -= t * xx;
        std::swap(old_x, xx);
        old_y -= t * yy;
        std::swap(old_y, yy);
    }
    if (old_r < 0) old_r = -old_r, old_x = -old_x, old_y = -old_y;
    x = old_x;
    y = old_y;
    return old_r;
}

i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Shortest path from C_{-1} = infinity to C_n along the convergent chain,
// where C_{k-2} and C_k are also adjacent exactly when a_k = 1.
int chain_length(const std::vector<i128>& a) {
    const int n = static_cast<int>(a.size());
    std::vector<int> dist(n + 1);  // dist[k+1] for C_k
    dist[0] = 0;
    dist[1] = 1;
    for (int k = 1; k < n; ++k) {
        dist[k + 1] = dist[k] + 1;
        if (a[k] == 1) dist[k + 1] = std::min(dist[k + 1], dist[k - 1] + 1);
    }
    return dist[n];
}

// ---- the strip of triangles along a positive word --------------------------

struct Ladder {
    std::vector<std::array<int, 3>> tri;  // (A, B, S) per prefix
    std::vector<std::vector<int>> adj;

    explicit Ladder(const std::string& word) {
        tri.push_back({0, 1, 2});
        adj.resize(3);
        link(0, 1), link(1, 2), link(0, 2);
        for (char ch : word) {
            auto [A, B, S] = tri.back();
            int v = static_cast<int>(adj.size());
            adj.emplace_back();
            std::array<int, 3> next = ch == 'R' ? std::array<int, 3>{A, S, v} : std::array<int, 3>{S, B, v};
            link(next[0], v), link(next[1], v);
            tri.push_back(next);
        }
    }
    void link(int u, int v) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<int> bfs(int src) const {
        std::vector<int> d(adj.size(), -1);
        std::queue<int> q;
        d[src] = 0;
        q.push(src);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int w : adj[u])
                if (d[w] < 0) d[w] = d[u] + 1, q.push(w);
        }
        return d;
    }
};

void check_word(const std::string& w) {
    if (w.empty()) throw Error(Errc::EmptyWord, "empty LR word");
    for (char ch : w)
        if (ch != 'L' && ch != 'R') throw Error(Errc::BadInput, std::string("letter '") + ch + "' is not L or R");
}

bool mixed(const std::string& w) {
    return w.find('L') != std::string::npos && w.find('R') != std::string::npos;
}

int ladder_translation(const std::string& w) {
    const int n = static_cast<int>(w.size());
    Ladder lad(w + w + w);
    int best = INT_MAX;
    for (int k = n; k <= 2 * n; ++k)
        for (int pos = 0; pos < 3; ++pos) {
            int v = lad.tri[k][pos], img = lad.tri[k + n][pos];
            best = std::min(best, lad.bfs(v)[img]);
        }
    return best;
}

int sgn(i128 x) { return (x > 0) - (x < 0); }

// Binary quadratic form whose roots are the fixed points of m.
i128 fixed_form(const Mat2& m, i128 p, i128 q) {
    return m.c * p * p + (i128(m.d) - m.a) * p * q - i128(m.b) * q * q;
}

} // namespace

Slope make_slope(i64 p, i64 q) {
    if (p == 0 && q == 0) throw Error(Errc::BadInput, "0/0 is not a slope");
    i64 g = std::gcd(p, q);
    p /= g;
    q /= g;
    if (q < 0 || (q == 0 && p < 0)) p = -p, q = -q;
    return {p, q};
}

Slope parse_slope(const std::string& text) {
    if (text == "inf" || text == "1/0" || text == "-1/0") return {1, 0};
    try {
        std::size_t used = 0;
        auto slash = text.find('/');
        if (slash == std::string::npos) {
            i64 p = std::stoll(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return {p, 1};
        }
        std::string num = text.substr(0, slash), den = text.substr(slash + 1);
        i64 p = std::stoll(num, &used);
        if (used != num.size()) throw std::invalid_argument(text);
        i64 q = std::stoll(den, &used);
        if (used != den.size()) throw std::invalid_argument(text);
        return make_slope(p, q);
    } catch (const std::logic_error&) {
        throw Error(Errc::BadInput, "cannot parse slope '" + text + "'");
    }
}

std::string to_string(Slope s) {
    if (s.q == 0) return "1/0";
    return std::to_string(s.p) + "/" + std::to_string(s.q);
}

i64 Mat2::det() const { return narrow(i128(a) * d - i128(b) * c); }

Mat2 mul(const Mat2& x, const Mat2& y) {
    return {add(mulc(x.a, y.a), mulc(x.b, y.c)), add(mulc(x.a, y.b), mulc(x.b, y.d)),
            add(mulc(x.c, y.a), mulc(x.d, y.c)), add(mulc(x.c, y.b), mulc(x.d, y.d))};
}

Mat2 inverse(const Mat2& m) { return {m.d, -m.b, -m.c, m.a}; }

Mat2 power(const Mat2& m, int n) {
    Mat2 base = n < 0 ? inverse(m) : m, out;
    for (int k = std::abs(n); k > 0; --k) out = mul(out, base);
    return out;
}

bool Monodromy::is_pseudo_anosov() const { return matrix.trace() > 2 || matrix.trace() < -2; }

Monodromy word_to_matrix(const std::string& word) {
    check_word(word);
    Mat2 m;
    for (char ch : word) m = mul(m, ch == 'R' ? R_MAT : L_MAT);
    return {m, word};
}

Monodromy from_matrix(const Mat2& m) {
    if (m.det() != 1) throw Error(Errc::BadInput, "matrix determinant is not 1");
    return {m, std::nullopt};
}

Monodromy power(const Monodromy& m, int n) {
    Monodromy out{power(m.matrix, n), std::nullopt};
    if (m.word && n >= 1) {
        std::string w;
        for (int k = 0; k < n; ++k) w += *m.word;
        out.word = w;
    }
    return out;
}

i64 determinant_gap(Slope s, Slope t) {
    i128 det = i128(s.p) * t.q - i128(s.q) * t.p;
    return narrow(det < 0 ? -det : det);
}

bool adjacent(Slope s, Slope t) { return determinant_gap(s, t) == 1; }

Slope act(const Mat2& m, Slope s) {
    return make_slope(add(mulc(m.a, s.p), mulc(m.b, s.q)), add(mulc(m.c, s.p), mulc(m.d, s.q)));
}

int distance(Slope s, Slope t) {
    if (s == t) return 0;
    // Move s to infinity with [[x, y], [-q, p]], x*p + y*q = 1.
    i64 x, y;
    ext_gcd(s.p, s.q, x, y);
    i128 P = i128(x) * t.p + i128(y) * t.q;
    i128 Q = -i128(s.q) * t.p + i128(s.p) * t.q;
    if (Q < 0) P = -P, Q = -Q;
    if (Q == 1) return 1;
    std::vector<i128> a;
    i128 num = P, den = Q;
    a.push_back(floor_div(num, den));
    num -= a.back() * den;
    while (num != 0) {
        std::swap(num, den);
        a.push_back(num / den);
        num %= den;
    }
    int best = chain_length(a);
    // The other expansion ends in ..., a_n - 1, 1.
    a.back() -= 1;
    a.push_back(1);
    return std::min(best, chain_length(a));
}

AxisWord axis_word(const Mat2& m_in) {
    if (m_in.det() != 1) throw Error(Errc::BadInput, "matrix determinant is not 1");
    Mat2 m = m_in;
    if (m.trace() < 0) m = {-m.a, -m.b, -m.c, -m.d};
    if (m.trace() <= 2) throw Error(Errc::NotPseudoAnosov, "|trace| <= 2");

    // Find a Farey edge separating the two fixed points.
    Mat2 P;
    if (sgn(m.b) * sgn(m.c) <= 0) {
        bool positive = sgn(i128(m.a) - m.d) == sgn(m.c);
        i64 up = positive ? 0 : -1, uq = positive ? 1 : 0, vp = positive ? 1 : 0, vq = positive ? 0 : 1;
        const int cs = sgn(m.c);
        for (long iter = 0;; ++iter) {
            if (iter > 100000000L) throw Error(Errc::Overflow, "fixed point search did not terminate");
            i64 mp = add(up, vp), mq = add(uq, vq);
            if (sgn(fixed_form(m, mp, mq)) == -cs) {
                vp = mp, vq = mq;
                break;
            }
            // Both fixed points lie on one side of the mediant; compare with their midpoint.
            i128 lhs = 2 * i128(m.c) * mp, rhs = (i128(m.a) - m.d) * mq;
            bool left_of_mid = cs > 0 ? lhs < rhs : lhs > rhs;
            if (left_of_mid) up = mp, uq = mq;
            else vp = mp, vq = mq;
        }
        P = {up, vp, uq, vq};
        if (P.det() != 1) P = {vp, up, vq, uq};
    }

    std::vector<Mat2> frames{P};
    std::string letters;
    const Mat2 minv = inverse(m);
    for (int step = 0; step < 1000000; ++step) {
        Mat2 N = mul(inverse(P), mul(m, P));
        i128 f1 = fixed_form(N, 1, 1);
        bool right = N.c > 0 ? f1 < 0 : f1 > 0;
        letters += right ? 'R' : 'L';
        P = mul(P, right ? R_MAT : L_MAT);
        for (std::size_t j = 0; j < frames.size(); ++j) {
            for (int e : {1, -1}) {
                Mat2 img = mul(e > 0 ? m : minv, frames[j]);
                Mat2 neg{-img.a, -img.b, -img.c, -img.d};
                if (img == P || neg == P) {
                    AxisWord out{letters.substr(j), frames[j], e};
                    Mat2 W = word_to_matrix(out.word).matrix;
                    Mat2 chk = mul(inverse(out.conjugator), mul(e > 0 ? m : minv, out.conjugator));
                    if (!(chk == W)) throw Error(Errc::BadInput, "axis word does not conjugate to the matrix");
                    return out;
                }
            }
        }
        frames.push_back(P);
    }
    throw Error(Errc::Overflow, "axis walk did not close up");
}

int translation_distance(const Monodromy& m) {
    if (!m.is_pseudo_anosov()) throw Error(Errc::NotPseudoAnosov, "|trace| <= 2");
    if (m.word && mixed(*m.word)) return ladder_translation(*m.word);
    return ladder_translation(axis_word(m.matrix).word);
}

BoxSearch translation_distance_box(const Monodromy& m, i64 start, i64 max_bound) {
    if (!m.is_pseudo_anosov()) throw Error(Errc::NotPseudoAnosov, "|trace| <= 2");
    BoxSearch out;
    int prev = -1, same = 0;
    for (i64 B = std::max<i64>(start, 1); B <= max_bound; B *= 2) {
        int best = INT_MAX;
        try {
            for (i64 q = 0; q <= B; ++q)
                for (i64 p = -B; p <= B; ++p) {
                    if (std::gcd(p, q) != 1 || (q == 0 && p != 1)) continue;
                    Slope v{p, q};
                    best = std::min(best, distance(v, act(m.matrix, v)));
                }
        } catch (const Error& e) {
            if (e.code() != Errc::Overflow) throw;
            break;
        }
        out.schedule.push_back(B);
        out.value = best;
        same = best == prev ? same + 1 : 0;
        prev = best;
        if (same >= 2) {
            out.stable = true;
            break;
        }
    }
    return out;
}

int ladder_orbit_distance(const std::string& word, int n) {
    check_word(word);
    std::string w;
    for (int k = 0; k < n; ++k) w += word;
    Ladder lad(w);
    return lad.bfs(0)[lad.tri.back()[0]];
}

StableUpper stable_upper(const Monodromy& m, int N) {
    if (!m.is_pseudo_anosov()) throw Error(Errc::NotPseudoAnosov, "|trace| <= 2");
    StableUpper out;
    Mat2 mn;
    for (int n = 1; n <= N; ++n) {
        int a;
        if (m.word && mixed(*m.word)) {
            a = ladder_orbit_distance(*m.word, n);
        } else {
            try {
                mn = mul(mn, m.matrix);
                a = distance({1, 0}, act(mn, Slope{1, 0}));
            } catch (const Error& e) {
                if (e.code() != Errc::Overflow) throw;
                break;
            }
        }
        out.a.push_back(a);
        out.ratios.push_back(static_cast<double>(a) / n);
        out.estimate = out.a.size() == 1 ? out.ratios.back() : std::min(out.estimate, out.ratios.back());
    }
    return out;
}

} // namespace cusplab::farey
