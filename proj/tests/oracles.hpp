#pragma once

// Brute-force reference computations shared by the unit tests and the acceptance run.
// Nothing here calls into the library except for plain data types.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cubic/forms.hpp"
#include "cubic/splitting.hpp"

namespace oracle {

using cubic::i64;
using cubic::i128;
using boost::multiprecision::cpp_rational;

inline i64 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return static_cast<i64>(a);
}

inline bool small_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// discriminant of a x^3 + b x^2 + c x + d as -Res(f, f') / a, via the Sylvester matrix
inline cpp_rational resultant_disc(const cubic::BinaryCubicForm& f) {
    const std::array<cpp_rational, 4> p{f.a, f.b, f.c, f.d};
    const std::array<cpp_rational, 3> q{3 * f.a, 2 * f.b, f.c};
    std::array<std::array<cpp_rational, 5>, 5> m{};
    for (int r = 0; r < 2; ++r)
        for (int k = 0; k < 4; ++k) m[r][r + k] = p[k];
    for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 3; ++k) m[2 + r][r + k] = q[k];
    cpp_rational det = 1;
    for (int c = 0; c < 5; ++c) {
        int piv = -1;
        for (int r = c; r < 5; ++r)
            if (m[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (int r = c + 1; r < 5; ++r) {
            cpp_rational t = m[r][c] / m[c][c];
            for (int k = c; k < 5; ++k) m[r][k] -= t * m[c][k];
        }
    }
    return -det / f.a;
}

// number of roots of f(x, y) on the projective line over F_p
inline int projective_roots(const cubic::BinaryCubicForm& f, i64 p) {
    auto md = [p](i64 v) { return ((v % p) + p) % p; };
    int n = md(f.a) == 0 ? 1 : 0;
    for (i64 x = 0; x < p; ++x) {
        i64 v = md(f.a);
        v = md(v * x + f.b);
        v = md(v * x + f.c);
        v = md(v * x + f.d);
        if (v == 0) ++n;
    }
    return n;
}

// ---- fields from monic polynomials

struct FieldKey {
    i64 disc;
    std::vector<int> degree_one;  // primes of degree one above each of the fingerprint primes
    auto operator<=>(const FieldKey&) const = default;
};

inline std::vector<i64> fingerprint_primes(i64 disc, int count) {
    std::vector<i64> out;
    for (i64 p = 5; static_cast<int>(out.size()) < count; ++p)
        if (small_prime(p) && disc % p != 0) out.push_back(p);
    return out;
}

inline FieldKey form_key(const cubic::BinaryCubicForm& f, i64 disc, int count = 40) {
    FieldKey k{disc, {}};
    for (i64 p : fingerprint_primes(disc, count)) k.degree_one.push_back(projective_roots(f, p));
    return k;
}

namespace detail {

// vectors are coordinates on (x^2, x, 1) in Q[x]/(x^3 + b x^2 + c x + d)
using V = std::array<i128, 3>;

struct Monic {
    i64 b, c, d;

    // product of two elements given on (x^2, x, 1)
    V mul(const V& u, const V& v) const {
        // u, v as ascending polynomials
        std::array<i128, 5> prod{};
        const std::array<i128, 3> uu{u[2], u[1], u[0]}, vv{v[2], v[1], v[0]};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) prod[i + j] += uu[i] * vv[j];
        for (int k = 4; k >= 3; --k) {
            i128 t = prod[k];
            prod[k] = 0;
            prod[k - 1] -= b * t;
            prod[k - 2] -= c * t;
            prod[k - 3] -= d * t;
        }
        return {prod[2], prod[1], prod[0]};
    }

    // (trace, second elementary symmetric function, norm) of multiplication by w
    std::array<i128, 3> charpoly(const V& w) const {
        std::array<V, 3> cols;
        V pw = {0, 0, 1};
        for (int k = 0; k < 3; ++k) {
            cols[k] = mul(w, pw);
            pw = mul(pw, V{0, 1, 0});
        }
        // M[i][k]: coefficient of x^i in w x^k; cols use (x^2, x, 1) order
        i128 M[3][3];
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) M[i][k] = cols[k][2 - i];
        i128 t = M[0][0] + M[1][1] + M[2][2];
        i128 s = M[0][0] * M[1][1] - M[0][1] * M[1][0] + M[0][0] * M[2][2] - M[0][2] * M[2][0] + M[1][1] * M[2][2] -
                 M[1][2] * M[2][1];
        i128 n = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                 M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
        return {t, s, n};
    }
};

// row echelon form with pivots in the (x^2, x, 1) order; the result spans the same lattice
inline std::array<V, 3> echelon(std::vector<V> rows) {
    std::array<V, 3> out{};
    for (int col = 0; col < 3; ++col) {
        for (;;) {
            int best = -1;
            for (int i = 0; i < static_cast<int>(rows.size()); ++i)
                if (rows[i][col] != 0 &&
                    (best < 0 || (rows[i][col] < 0 ? -rows[i][col] : rows[i][col]) <
                                     (rows[best][col] < 0 ? -rows[best][col] : rows[best][col])))
                    best = i;
            if (best < 0) throw std::logic_error("lattice is not of full rank");
            bool done = true;
            for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
                if (i == best || rows[i][col] == 0) continue;
                i128 q = rows[i][col] / rows[best][col];
                for (int k = 0; k < 3; ++k) rows[i][k] -= q * rows[best][k];
                if (rows[i][col] != 0) done = false;
            }
            if (done) {
                V piv = rows[best];
                if (piv[col] < 0)
                    for (auto& x : piv) x = -x;
                out[col] = piv;
                rows.erase(rows.begin() + best);
                break;
            }
        }
    }
    return out;
}

inline i128 poly_disc(i128 t, i128 s, i128 n) {
    // x^3 + a2 x^2 + a1 x + a0
    i128 a2 = -t, a1 = s, a0 = -n;
    return 18 * a2 * a1 * a0 - 4 * a2 * a2 * a2 * a0 + a2 * a2 * a1 * a1 - 4 * a1 * a1 * a1 - 27 * a0 * a0;
}

inline int roots_mod(i128 t, i128 s, i128 n, i64 p) {
    auto md = [p](i128 v) { return static_cast<i64>(((v % p) + p) % p); };
    const i64 A = md(-t), B = md(s), C = md(-n);
    int cnt = 0;
    for (i64 x = 0; x < p; ++x)
        if ((((x + A) % p * x + B) % p * x + C) % p == 0) ++cnt;
    return cnt;
}

}  // namespace detail

// every non-cyclic cubic field with |d_K| <= X, found from monic generators of bounded T2
inline std::vector<FieldKey> monic_fields(i64 X, int count = 40) {
    using namespace detail;
    // an integral generator with trace 0 or 1 and T2 <= t^2/3 + (2/3) sqrt(X) exists
    const long double T2 = 1.0L / 3 + (2.0L / 3) * std::sqrt(static_cast<long double>(X));
    const i64 cmax = static_cast<i64>(std::floor(T2));
    const i64 dmax = static_cast<i64>(std::floor(std::pow(T2 / 3, 1.5L)));
    std::vector<FieldKey> out;
    for (i64 b : {0, -1})
        for (i64 c = -cmax; c <= cmax; ++c)
            for (i64 d = -dmax; d <= dmax; ++d) {
                if (d == 0) continue;
                bool reducible = false;
                for (i64 r = 1; r <= (d < 0 ? -d : d) && !reducible; ++r) {
                    if (d % r) continue;
                    for (i64 x : {r, -r})
                        if (x * x * x + b * x * x + c * x + d == 0) reducible = true;
                }
                if (reducible) continue;
                const Monic m{b, c, d};
                const i128 D = poly_disc(-b, c, -d);

                // the field discriminant is D / (square), so discard hopeless cases early
                i128 rest = D < 0 ? -D : D, sq = 1;
                for (i64 p = 2; static_cast<i128>(p) * p <= rest; ++p)
                    while (rest % (static_cast<i128>(p) * p) == 0) {
                        rest /= static_cast<i128>(p) * p;
                        sq *= p;
                    }
                if (rest > X) continue;

                std::array<V, 3> B{V{1, 0, 0}, V{0, 1, 0}, V{0, 0, 1}};
                i128 den = 1, index = 1;
                bool grown = true;
                while (grown) {
                    grown = false;
                    const i128 cur = D / (index * index);
                    for (i64 p = 2; static_cast<i128>(p) * p <= (cur < 0 ? -cur : cur) && !grown; ++p) {
                        if (cur % (static_cast<i128>(p) * p) != 0 || !small_prime(p)) continue;
                        const i128 q = den * p;
                        const i128 t0 = m.charpoly(B[0])[0], t1 = m.charpoly(B[1])[0], t2 = m.charpoly(B[2])[0];
                        for (i64 c = 1; c < p * p * p && !grown; ++c) {
                            const i64 c0 = c % p, c1 = (c / p) % p, c2 = c / (p * p);
                            if ((c0 * t0 + c1 * t1 + c2 * t2) % q != 0) continue;
                            V w{};
                            for (int k = 0; k < 3; ++k) w[k] = c0 * B[0][k] + c1 * B[1][k] + c2 * B[2][k];
                            auto cp = m.charpoly(w);
                            if (cp[0] % q || cp[1] % (q * q) || cp[2] % (q * q * q)) continue;
                            std::vector<V> rows;
                            for (const auto& r : B) rows.push_back({r[0] * p, r[1] * p, r[2] * p});
                            rows.push_back(w);
                            B = echelon(rows);
                            den = q;
                            i64 g = static_cast<i64>(den);
                            for (const auto& r : B)
                                for (i128 x : r) g = gcd128(g, x);
                            for (auto& r : B)
                                for (auto& x : r) x /= g;
                            den /= g;
                            index *= p;
                            grown = true;
                        }
                    }
                }
                const i128 dK = D / (index * index);
                if ((dK < 0 ? -dK : dK) > X) continue;
                if (dK > 0 && cubic::is_square(static_cast<i64>(dK))) continue;

                FieldKey key{static_cast<i64>(dK), {}};
                for (i64 p : fingerprint_primes(key.disc, count)) {
                    int found = -1;
                    for (i64 y = 0; y < p && found < 0; ++y)
                        for (i64 x = 0; x < p && found < 0; ++x) {
                            if (x == 0 && y == 0) continue;
                            V w{};
                            for (int k = 0; k < 3; ++k) w[k] = x * B[0][k] + y * B[1][k];
                            auto cp = m.charpoly(w);
                            const i128 t = cp[0] / den, s = cp[1] / (den * den), n = cp[2] / (den * den * den);
                            const i128 pd = poly_disc(t, s, n);
                            if (pd != 0 && pd % p != 0) found = roots_mod(t, s, n, p);
                        }
                    key.degree_one.push_back(found);
                }
                out.push_back(std::move(key));
            }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---- splitting from the idempotents of O/pO

// decomposes O/pO by exhaustive search; parts of the form (e, f)
inline cubic::SplittingType idempotent_splitting(const cubic::CubicRing& R, i64 p) {
    using cubic::Elem;
    const i64 n = p * p * p;
    auto at = [p](i64 i) { return Elem{i % p, (i / p) % p, i / (p * p)}; };
    auto idx = [p](const Elem& x) { return x[0] + p * x[1] + p * p * x[2]; };
    std::vector<char> nil(n);
    std::vector<Elem> idem;
    for (i64 i = 0; i < n; ++i) {
        Elem x = at(i);
        Elem x2 = R.mul_mod(x, x, p);
        if (x2 == x) idem.push_back(x);
        nil[i] = R.mul_mod(x2, x, p) == Elem{0, 0, 0};
    }
    std::vector<std::pair<int, int>> parts;
    for (const Elem& e : idem) {
        if (e == Elem{0, 0, 0}) continue;
        bool primitive = true;
        for (const Elem& d : idem)
            if (d != Elem{0, 0, 0} && d != e && R.mul_mod(d, e, p) == d) primitive = false;
        if (!primitive) continue;
        i64 size = 0, nsize = 0;
        for (i64 i = 0; i < n; ++i) {
            Elem x = at(i);
            if (R.mul_mod(e, x, p) != x) continue;
            ++size;
            if (nil[idx(x)]) ++nsize;
        }
        int dim = 0, ndim = 0;
        for (i64 s = size; s > 1; s /= p) ++dim;
        for (i64 s = nsize; s > 1; s /= p) ++ndim;
        const int f = dim - ndim;
        parts.emplace_back(dim / f, f);
    }
    return cubic::make_splitting(parts);
}

}  // namespace oracle
