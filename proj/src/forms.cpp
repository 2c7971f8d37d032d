#include "cubic/forms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cubic/linalg.hpp"

namespace cubic {

using HP = boost::multiprecision::cpp_bin_float_50;

std::string to_string(const BinaryCubicForm& f) {
    return std::to_string(f.a) + "," + std::to_string(f.b) + "," + std::to_string(f.c) + "," + std::to_string(f.d);
}

BinaryCubicForm parse_form(const std::string& s) {
    BinaryCubicForm f;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream in(s);
    if (!(in >> f.a >> c1 >> f.b >> c2 >> f.c >> c3 >> f.d) || c1 != ',' || c2 != ',' || c3 != ',')
        throw std::invalid_argument("malformed form '" + s + "', expected a,b,c,d");
    in >> std::ws;
    if (!in.eof()) throw std::invalid_argument("trailing characters in form '" + s + "'");
    return f;
}

std::string to_string(Signature s) { return s == Signature::TotallyReal ? "real" : "complex"; }

i64 disc(const BinaryCubicForm& f) {
    i128 a = f.a, b = f.b, c = f.c, d = f.d;
    i128 v = 18 * a * b * c * d + b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d;
    return narrow(v);
}

BinaryCubicForm transform(const BinaryCubicForm& f, const GL2& g) {
    // coefficient arrays indexed by the power of y
    using Poly = std::array<i128, 4>;
    auto mulp = [](const Poly& x, int dx, i128 u0, i128 u1) {
        Poly out{};
        for (int k = 0; k <= dx; ++k) {
            out[k] = add_checked(out[k], mul_checked(x[k], u0));
            out[k + 1] = add_checked(out[k + 1], mul_checked(x[k], u1));
        }
        return out;
    };
    Poly one{1, 0, 0, 0};
    Poly u1 = mulp(one, 0, g.p, g.q);
    Poly u2 = mulp(u1, 1, g.p, g.q);
    Poly u3 = mulp(u2, 2, g.p, g.q);
    Poly v1 = mulp(one, 0, g.r, g.s);
    Poly v2 = mulp(v1, 1, g.r, g.s);
    Poly v3 = mulp(v2, 2, g.r, g.s);
    Poly u2v = mulp(u2, 2, g.r, g.s);
    Poly uv2 = mulp(v2, 2, g.p, g.q);
    std::array<i128, 4> out{};
    for (int k = 0; k < 4; ++k) {
        out[k] = add_checked(out[k], mul_checked(static_cast<i128>(f.a), u3[k]));
        out[k] = add_checked(out[k], mul_checked(static_cast<i128>(f.b), u2v[k]));
        out[k] = add_checked(out[k], mul_checked(static_cast<i128>(f.c), uv2[k]));
        out[k] = add_checked(out[k], mul_checked(static_cast<i128>(f.d), v3[k]));
    }
    return {narrow(out[0]), narrow(out[1]), narrow(out[2]), narrow(out[3])};
}

QuadForm hessian(const BinaryCubicForm& f) {
    return {narrow(static_cast<i128>(f.b) * f.b - static_cast<i128>(3) * f.a * f.c),
            narrow(static_cast<i128>(f.b) * f.c - static_cast<i128>(9) * f.a * f.d),
            narrow(static_cast<i128>(f.c) * f.c - static_cast<i128>(3) * f.b * f.d)};
}

namespace {

using LD = long double;
using CLD = std::complex<LD>;

LD polish_real(const BinaryCubicForm& f, LD x) {
    LD A = f.a, B = f.b, C = f.c, D = f.d;
    for (int it = 0; it < 6; ++it) {
        LD v = ((A * x + B) * x + C) * x + D;
        LD dv = (3 * A * x + 2 * B) * x + C;
        if (dv == 0) break;
        LD step = v / dv;
        x -= step;
        if (std::fabs(step) <= 1e-19L * (1 + std::fabs(x))) break;
    }
    return x;
}

CLD polish_complex(const BinaryCubicForm& f, CLD z) {
    LD A = f.a, B = f.b, C = f.c, D = f.d;
    for (int it = 0; it < 8; ++it) {
        CLD v = ((A * z + B) * z + C) * z + D;
        CLD dv = (3 * A * z + 2 * B) * z + C;
        if (dv == CLD(0)) break;
        CLD step = v / dv;
        z -= step;
        if (std::abs(step) <= 1e-19L * (1 + std::abs(z))) break;
    }
    return z;
}

}  // namespace

CubicRoots roots(const BinaryCubicForm& f) {
    CubicRoots out;
    if (f.a == 0) throw ReducibleFormError("roots: leading coefficient is zero");
    i64 D = disc(f);
    LD A = f.a, B = f.b, C = f.c, Dd = f.d;
    LD p = (3 * A * C - B * B) / (3 * A * A);
    LD q = (2 * B * B * B - 9 * A * B * C + 27 * A * A * Dd) / (27 * A * A * A);
    LD shift = -B / (3 * A);
    if (D > 0) {
        out.nreal = 3;
        LD m = 2 * std::sqrt(-p / 3);
        LD arg = 3 * q / (p * m);  // (3q/(2p)) sqrt(-3/p)
        arg = std::clamp(arg, LD(-1), LD(1));
        LD phi = std::acos(arg) / 3;
        for (int k = 0; k < 3; ++k) {
            LD t = m * std::cos(phi - 2 * static_cast<LD>(M_PI) * k / 3);
            out.real[static_cast<std::size_t>(k)] = polish_real(f, t + shift);
        }
        std::sort(out.real.begin(), out.real.end());
    } else {
        out.nreal = 1;
        LD disc_dep = q * q / 4 + p * p * p / 27;
        LD s = std::sqrt(std::max(disc_dep, LD(0)));
        LD t = std::cbrt(-q / 2 + s) + std::cbrt(-q / 2 - s);
        LD r = polish_real(f, t + shift);
        out.real[0] = r;
        LD qb = B + A * r;
        LD qc = C + qb * r;
        LD re = -qb / (2 * A);
        LD im2 = 4 * A * qc - qb * qb;
        LD im = std::sqrt(std::fabs(im2)) / (2 * std::fabs(A));
        CLD z = polish_complex(f, CLD(re, im));
        if (z.imag() < 0) z = std::conj(z);
        out.upper = z;
    }
    return out;
}

namespace {

i128 eval_form(const BinaryCubicForm& f, i128 x, i128 y) {
    i128 x2 = mul_checked(x, x), y2 = mul_checked(y, y);
    i128 v = mul_checked(mul_checked(static_cast<i128>(f.a), x2), x);
    v = add_checked(v, mul_checked(mul_checked(static_cast<i128>(f.b), x2), y));
    v = add_checked(v, mul_checked(mul_checked(static_cast<i128>(f.c), x), y2));
    v = add_checked(v, mul_checked(mul_checked(static_cast<i128>(f.d), y2), y));
    return v;
}

std::vector<i64> positive_divisors(i64 n) {
    std::vector<i64> ds{1};
    for (auto [p, e] : factor(n)) {
        std::size_t sz = ds.size();
        i64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < sz; ++i) ds.push_back(ds[i] * pk);
        }
    }
    return ds;
}

}  // namespace

bool is_irreducible(const BinaryCubicForm& f) {
    if (f.a == 0 || f.d == 0) return false;
    if (disc(f) == 0) return false;
    CubicRoots rt = roots(f);
    std::vector<i64> divs = positive_divisors(abs64(f.a));
    for (int i = 0; i < rt.nreal; ++i) {
        long double rho = rt.real[static_cast<std::size_t>(i)];
        for (i64 s : divs) {
            long double approx = rho * static_cast<long double>(s);
            if (std::fabs(approx) > 9e17L) continue;
            i64 r0 = std::llround(approx);
            for (i64 r = r0 - 1; r <= r0 + 1; ++r) {
                if (gcd(r, s) != 1) continue;
                if (eval_form(f, r, s) == 0) return false;
            }
        }
    }
    return true;
}

Signature signature_of(const BinaryCubicForm& f) { return disc(f) > 0 ? Signature::TotallyReal : Signature::Complex; }

namespace {

BinaryCubicForm normalize_sign(BinaryCubicForm f) {
    if (f.a < 0 || (f.a == 0 && (f.b < 0 || (f.b == 0 && (f.c < 0 || (f.c == 0 && f.d < 0)))))) {
        f.a = -f.a;
        f.b = -f.b;
        f.c = -f.c;
        f.d = -f.d;
    }
    return f;
}

const std::vector<GL2>& small_gl2() {
    static const std::vector<GL2> mats = [] {
        std::vector<GL2> out;
        for (i64 p = -1; p <= 1; ++p)
            for (i64 q = -1; q <= 1; ++q)
                for (i64 r = -1; r <= 1; ++r)
                    for (i64 s = -1; s <= 1; ++s) {
                        i64 d = p * s - q * r;
                        if (d == 1 || d == -1) out.push_back({p, q, r, s});
                    }
        return out;
    }();
    return mats;
}

QuadForm transform_quad(const QuadForm& h, const GL2& g) {
    return {h.P * g.p * g.p + h.Q * g.p * g.r + h.R * g.r * g.r,
            2 * h.P * g.p * g.q + h.Q * (g.p * g.s + g.q * g.r) + 2 * h.R * g.r * g.s,
            h.P * g.q * g.q + h.Q * g.q * g.s + h.R * g.s * g.s};
}

bool quad_reduced(const QuadForm& h) { return abs64(h.Q) <= h.P && h.P <= h.R; }

BinaryCubicForm canonical_among_reduced_hessians(const BinaryCubicForm& g, const QuadForm& H) {
    BinaryCubicForm best = normalize_sign(g);
    for (const GL2& m : small_gl2()) {
        if (!quad_reduced(transform_quad(H, m))) continue;
        best = std::min(best, normalize_sign(transform(g, m)));
    }
    return best;
}

BinaryCubicForm reduce_positive(BinaryCubicForm g) {
    for (int guard = 0; guard < 100000; ++guard) {
        QuadForm H = hessian(g);
        if (abs64(H.Q) > H.P) {
            i64 k = floor_div(H.P - H.Q, 2 * H.P);
            g = transform(g, {1, k, 0, 1});
            continue;
        }
        if (H.R < H.P) {
            g = transform(g, {0, 1, 1, 0});
            continue;
        }
        return canonical_among_reduced_hessians(g, H);
    }
    throw std::runtime_error("reduce: Hessian reduction did not terminate");
}

struct HPComplex {
    HP re, im;
};

// Newton refinement of the upper root in 50-digit arithmetic
HPComplex upper_root_hp(const BinaryCubicForm& f, std::complex<long double> z0) {
    HP A = f.a, B = f.b, C = f.c, D = f.d;
    HP x = static_cast<HP>(z0.real()), y = static_cast<HP>(z0.imag());
    for (int it = 0; it < 40; ++it) {
        // p(z) = ((A z + B) z + C) z + D, p'(z) = (3 A z + 2 B) z + C
        HP r1 = A * x + B, i1 = A * y;
        HP r2 = r1 * x - i1 * y + C, i2 = r1 * y + i1 * x;
        HP pr = r2 * x - i2 * y + D, pi = r2 * y + i2 * x;
        HP s1 = 3 * A * x + 2 * B, t1 = 3 * A * y;
        HP dr = s1 * x - t1 * y + C, di = s1 * y + t1 * x;
        HP den = dr * dr + di * di;
        if (den == 0) break;
        HP sr = (pr * dr + pi * di) / den, si = (pi * dr - pr * di) / den;
        x -= sr;
        y -= si;
        if (abs(sr) + abs(si) < HP("1e-45") * (1 + abs(x) + abs(y))) break;
    }
    if (y < 0) y = -y;
    return {x, y};
}

BinaryCubicForm reduce_negative(BinaryCubicForm g) {
    for (int guard = 0; guard < 100000; ++guard) {
        HPComplex z = upper_root_hp(g, roots(g).upper);
        HP k = round(z.re);
        if (k != 0) {
            g = transform(g, {1, static_cast<i64>(k), 0, 1});
            continue;
        }
        if (z.re * z.re + z.im * z.im < 1) {
            g = transform(g, {0, 1, 1, 0});
            continue;
        }
        if (z.re < 0) g = transform(g, {-1, 0, 0, 1});
        return normalize_sign(g);
    }
    throw std::runtime_error("reduce: root reduction did not terminate");
}

bool reduced_negative_fast(const BinaryCubicForm& f) {
    if (f.a <= 0) return false;
    std::complex<long double> z = roots(f).upper;
    long double m1 = z.real(), m2 = 0.5L - z.real(), m3 = std::norm(z) - 1;
    const long double eps = 1e-11L;
    if (m1 < -eps || m2 < -eps || m3 < -eps) return false;
    if (m1 > eps && m2 > eps && m3 > eps) return true;
    HPComplex w = upper_root_hp(f, z);
    return w.re > 0 && w.re < HP(0.5) && w.re * w.re + w.im * w.im > 1;
}

bool reduced_positive_fast(const BinaryCubicForm& f, const QuadForm& H) {
    if (f.a <= 0 || !quad_reduced(H)) return false;
    for (const GL2& m : small_gl2()) {
        if (!quad_reduced(transform_quad(H, m))) continue;
        if (normalize_sign(transform(f, m)) < f) return false;
    }
    return true;
}

}  // namespace

BinaryCubicForm reduce(const BinaryCubicForm& f) {
    if (!is_irreducible(f)) throw ReducibleFormError("reduce: form " + to_string(f) + " is reducible over Q");
    return disc(f) > 0 ? reduce_positive(f) : reduce_negative(f);
}

bool is_reduced(const BinaryCubicForm& f) {
    if (!is_irreducible(f)) return false;
    return disc(f) > 0 ? reduced_positive_fast(f, hessian(f)) : reduced_negative_fast(f);
}

// ---------------------------------------------------------------- rings

Elem CubicRing::mul(const Elem& x, const Elem& y) const {
    std::array<i128, 3> acc{};
    for (int i = 0; i < 3; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < 3; ++j) {
            if (y[j] == 0) continue;
            i128 xy = mul_checked(static_cast<i128>(x[i]), static_cast<i128>(y[j]));
            for (int k = 0; k < 3; ++k) {
                i64 t = table[i][j][k];
                if (t) acc[k] = add_checked(acc[k], mul_checked(xy, static_cast<i128>(t)));
            }
        }
    }
    return {narrow(acc[0]), narrow(acc[1]), narrow(acc[2])};
}

Elem CubicRing::mul_mod(const Elem& x, const Elem& y, i64 p) const {
    std::array<i128, 3> acc{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            i128 xy = static_cast<i128>(mod(x[i], p)) * mod(y[j], p) % p;
            for (int k = 0; k < 3; ++k) acc[k] = (acc[k] + xy * mod(table[i][j][k], p)) % p;
        }
    return {static_cast<i64>(acc[0]), static_cast<i64>(acc[1]), static_cast<i64>(acc[2])};
}

std::array<Elem, 3> CubicRing::mult_matrix(const Elem& x) const {
    std::array<Elem, 3> m{};
    for (int i = 0; i < 3; ++i) {
        Elem e{0, 0, 0};
        e[i] = 1;
        m[i] = mul(x, e);
    }
    return m;
}

i64 CubicRing::trace(const Elem& x) const {
    auto m = mult_matrix(x);
    return add_checked(add_checked(m[0][0], m[1][1]), m[2][2]);
}

i128 CubicRing::norm(const Elem& x) const {
    auto m = mult_matrix(x);
    auto M = [&](int i, int j) { return static_cast<i128>(m[i][j]); };
    i128 t1 = mul_checked(M(0, 0), add_checked(mul_checked(M(1, 1), M(2, 2)), -mul_checked(M(1, 2), M(2, 1))));
    i128 t2 = mul_checked(M(0, 1), add_checked(mul_checked(M(1, 0), M(2, 2)), -mul_checked(M(1, 2), M(2, 0))));
    i128 t3 = mul_checked(M(0, 2), add_checked(mul_checked(M(1, 0), M(2, 1)), -mul_checked(M(1, 1), M(2, 0))));
    return add_checked(add_checked(t1, -t2), t3);
}

i64 CubicRing::table_discriminant() const {
    i128 T[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Elem ei{0, 0, 0}, ej{0, 0, 0};
            ei[i] = 1;
            ej[j] = 1;
            T[i][j] = trace(mul(ei, ej));
        }
    i128 d = T[0][0] * (T[1][1] * T[2][2] - T[1][2] * T[2][1]) - T[0][1] * (T[1][0] * T[2][2] - T[1][2] * T[2][0]) +
             T[0][2] * (T[1][0] * T[2][1] - T[1][1] * T[2][0]);
    return narrow(d);
}

bool CubicRing::is_associative() const {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                Elem ei{0, 0, 0}, ej{0, 0, 0}, ek{0, 0, 0};
                ei[i] = 1;
                ej[j] = 1;
                ek[k] = 1;
                if (mul(mul(ei, ej), ek) != mul(ei, mul(ej, ek))) return false;
                if (mul(ei, ej) != mul(ej, ei)) return false;
            }
    return true;
}

CubicRing ring_of(const BinaryCubicForm& f) {
    CubicRing R;
    for (int j = 0; j < 3; ++j) {
        Elem e{0, 0, 0};
        e[j] = 1;
        R.table[0][j] = e;
        R.table[j][0] = e;
    }
    R.table[1][1] = {-f.a * f.c, -f.b, f.a};
    R.table[1][2] = {-f.a * f.d, 0, 0};
    R.table[2][1] = R.table[1][2];
    R.table[2][2] = {-f.b * f.d, -f.d, f.c};
    R.discriminant = disc(f);
    return R;
}

namespace {

Elem elem_pow_mod(const CubicRing& R, Elem x, u64 e, i64 p) {
    Elem r{1, 0, 0};
    for (auto& v : x) v = mod(v, p);
    while (e) {
        if (e & 1) r = R.mul_mod(r, x, p);
        x = R.mul_mod(x, x, p);
        e >>= 1;
    }
    return r;
}

// coordinates c with c * B = v for an upper-triangular row basis B
Elem solve_upper(const std::array<Elem, 3>& B, const Elem& v) {
    Elem c{};
    i128 r0 = v[0];
    if (r0 % B[0][0]) throw std::logic_error("solve_upper: not in lattice");
    c[0] = narrow(r0 / B[0][0]);
    i128 r1 = static_cast<i128>(v[1]) - static_cast<i128>(c[0]) * B[0][1];
    if (r1 % B[1][1]) throw std::logic_error("solve_upper: not in lattice");
    c[1] = narrow(r1 / B[1][1]);
    i128 r2 = static_cast<i128>(v[2]) - static_cast<i128>(c[0]) * B[0][2] - static_cast<i128>(c[1]) * B[1][2];
    if (r2 % B[2][2]) throw std::logic_error("solve_upper: not in lattice");
    c[2] = narrow(r2 / B[2][2]);
    return c;
}

}  // namespace

bool is_maximal_at(const CubicRing& R, i64 p) {
    // radical of O/pO is the kernel of x -> x^(p^k) with p^k >= 3
    u64 q = static_cast<u64>(p);
    while (q < 3) q *= static_cast<u64>(p);
    IntMatrix F(3);
    for (int i = 0; i < 3; ++i) {
        Elem e{0, 0, 0};
        e[i] = 1;
        Elem pe = elem_pow_mod(R, e, q, p);
        F[i] = {pe[0], pe[1], pe[2]};
    }
    IntMatrix J = left_kernel_mod_p(F, p);
    if (J.empty()) return true;
    IntMatrix gens = J;
    for (int i = 0; i < 3; ++i) {
        std::vector<i64> v(3, 0);
        v[i] = p;
        gens.push_back(v);
    }
    IntMatrix H = hnf(gens, 3);
    std::array<Elem, 3> B{};
    for (int i = 0; i < 3; ++i) B[i] = {H[i][0], H[i][1], H[i][2]};
    // multiplication by e_i on I/pI; O is p-maximal iff these are independent mod p
    IntMatrix stacked(3, std::vector<i64>(9));
    for (int i = 0; i < 3; ++i) {
        Elem e{0, 0, 0};
        e[i] = 1;
        for (int j = 0; j < 3; ++j) {
            Elem c = solve_upper(B, R.mul(e, B[j]));
            for (int k = 0; k < 3; ++k) stacked[i][j * 3 + k] = mod(c[k], p);
        }
    }
    return rank_mod_p(stacked, p) == 3;
}

bool is_maximal_at(const BinaryCubicForm& f, i64 p) { return is_maximal_at(ring_of(f), p); }

bool is_maximal(const BinaryCubicForm& f) {
    i64 D = disc(f);
    CubicRing R = ring_of(f);
    for (auto [p, e] : factor(D))
        if (e >= 2 && !is_maximal_at(R, p)) return false;
    return true;
}

bool field_order(const BinaryCubicForm& f, i64 df, const BinaryCubicForm& g, i64 dg) {
    if (abs64(df) != abs64(dg)) return abs64(df) < abs64(dg);
    if (df != dg) return df < dg;
    return f < g;
}

// ---------------------------------------------------------------- enumeration

namespace {

struct Task {
    i64 a, b;
    bool positive;
};

bool squarefull_part_maximal(const CubicRing& R, i64 D, const std::vector<i64>& small_primes) {
    i64 n = abs64(D);
    for (i64 p : small_primes) {
        if (p * p > n) break;
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e >= 2 && !is_maximal_at(R, p)) return false;
    }
    return true;
}

void run_task(const Task& t, const EnumerateOptions& opt, const std::vector<i64>& primes,
              std::vector<BinaryCubicForm>& out) {
    const i64 X = opt.max_abs_disc;
    const long double Xl = static_cast<long double>(X);
    const i64 a = t.a, b = t.b;
    auto accept = [&](const BinaryCubicForm& f, i64 D) {
        i64 ad = abs64(D);
        if (ad < opt.min_abs_disc || ad >= X) return;
        if (!opt.include_cyclic && D > 0 && is_square(D)) return;
        if (!is_irreducible(f)) return;
        if (!squarefull_part_maximal(ring_of(f), D, primes)) return;
        out.push_back(f);
    };
    if (t.positive) {
        // 0 < P = b^2 - 3ac <= sqrt(X)
        i64 sq = isqrt(X) + 1;
        i64 cmin = floor_div(b * b - sq, 3 * a) - 1;
        i64 cmax = floor_div(b * b - 1, 3 * a) + 1;
        for (i64 c = cmin; c <= cmax; ++c) {
            i64 P = b * b - 3 * a * c;
            if (P <= 0 || static_cast<i128>(P) * P >= X) continue;
            // |Q| <= P with Q = bc - 9ad
            i64 dmin = floor_div(b * c - P, 9 * a) - 1;
            i64 dmax = floor_div(b * c + P, 9 * a) + 1;
            for (i64 d = dmin; d <= dmax; ++d) {
                i64 Q = b * c - 9 * a * d;
                if (abs64(Q) > P) continue;
                i64 R = c * c - 3 * b * d;
                if (R < P) continue;
                BinaryCubicForm f{a, b, c, d};
                i64 D = disc(f);
                if (D <= 0 || D >= X) continue;
                if (!reduced_positive_fast(f, {P, Q, R})) continue;
                accept(f, D);
            }
        }
    } else {
        long double A4 = static_cast<long double>(a) * a * a * a;
        long double alpha = 0.5L + std::pow(Xl / (3 * A4), 0.25L);
        long double beta2 = 0.25L + std::cbrt(Xl / (4 * A4));
        i64 cb = static_cast<i64>(std::ceil(a * (alpha + beta2))) + 1;
        i64 dbox = static_cast<i64>(std::ceil(a * alpha * beta2)) + 1;
        for (i64 c = -cb; c <= cb; ++c) {
            // D(d) = -27a^2 d^2 + (18abc - 4b^3) d + (b^2c^2 - 4ac^3) > -X
            long double qa = -27.0L * a * a;
            long double qb = 18.0L * a * b * c - 4.0L * b * b * b;
            long double qc = static_cast<long double>(b) * b * c * c - 4.0L * a * c * c * c + Xl;
            long double dd = qb * qb - 4 * qa * qc;
            if (dd < 0) continue;
            long double s = std::sqrt(dd);
            long double r1 = (-qb + s) / (2 * qa), r2 = (-qb - s) / (2 * qa);
            i64 lo = static_cast<i64>(std::floor(std::min(r1, r2))) - 1;
            i64 hi = static_cast<i64>(std::ceil(std::max(r1, r2))) + 1;
            lo = std::max(lo, -dbox);
            hi = std::min(hi, dbox);
            for (i64 d = lo; d <= hi; ++d) {
                if (d == 0) continue;
                BinaryCubicForm f{a, b, c, d};
                i64 D = disc(f);
                if (D >= 0 || -D >= X) continue;
                if (!reduced_negative_fast(f)) continue;
                accept(f, D);
            }
        }
    }
}

}  // namespace

std::vector<BinaryCubicForm> enumerate_forms(const EnumerateOptions& opt) {
    const i64 X = opt.max_abs_disc;
    std::vector<Task> tasks;
    const long double Xl = static_cast<long double>(X);
    if (X > 1 && opt.signature != SignatureFilter::Complex) {
        i64 amax = static_cast<i64>(std::floor(std::sqrt(8.0L / 27.0L) * std::pow(Xl, 0.25L))) + 1;
        long double bconst = 3 * std::sqrt(2.0L) * std::pow(Xl, 0.25L);
        for (i64 a = 1; a <= amax; ++a) {
            i64 bmax = static_cast<i64>(std::ceil(1.5L * a + bconst)) + 1;
            for (i64 b = -bmax; b <= bmax; ++b) tasks.push_back({a, b, true});
        }
    }
    if (X > 1 && opt.signature != SignatureFilter::TotallyReal) {
        i64 amax = static_cast<i64>(std::floor(std::pow(16.0L * Xl / 27.0L, 0.25L))) + 1;
        for (i64 a = 1; a <= amax; ++a) {
            long double A4 = static_cast<long double>(a) * a * a * a;
            long double alpha = 0.5L + std::pow(Xl / (3 * A4), 0.25L);
            i64 bmax = static_cast<i64>(std::ceil(a * (alpha + 1))) + 1;
            for (i64 b = -bmax; b <= bmax; ++b) tasks.push_back({a, b, false});
        }
    }
    std::vector<i64> primes = primes_up_to(isqrt(X) + 2);
    std::vector<std::vector<BinaryCubicForm>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            run_task(tasks[i], opt, primes, results[i]);
        }
    };
    unsigned nt = std::max(1u, opt.threads);
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < nt; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<std::pair<i64, BinaryCubicForm>> all;
    for (auto& r : results)
        for (auto& f : r) all.emplace_back(disc(f), f);
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return field_order(x.second, x.first, y.second, y.first); });
    std::vector<BinaryCubicForm> out;
    out.reserve(all.size());
    for (auto& [D, f] : all) out.push_back(f);
    return out;
}

}  // namespace cubic
