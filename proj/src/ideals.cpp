#include "cubic/ideals.hpp"

#include <algorithm>
#include <numeric>

namespace cubic {

i64 IdealHNF::norm() const {
    return mul_checked(mul_checked(rows[0][0], rows[1][1]), rows[2][2]);
}

bool IdealHNF::contains(const Elem& x) const {
    // x * den must be an integer combination of the rows
    i128 r0 = static_cast<i128>(x[0]) * den;
    if (r0 % rows[0][0]) return false;
    i128 c0 = r0 / rows[0][0];
    i128 r1 = static_cast<i128>(x[1]) * den - c0 * rows[0][1];
    if (r1 % rows[1][1]) return false;
    i128 c1 = r1 / rows[1][1];
    i128 r2 = static_cast<i128>(x[2]) * den - c0 * rows[0][2] - c1 * rows[1][2];
    return r2 % rows[2][2] == 0;
}

namespace {

IdealHNF from_matrix(const IntMatrix& H, i64 den) {
    if (H.size() != 3) throw std::logic_error("ideal generators do not span a full-rank lattice");
    IdealHNF I;
    for (int i = 0; i < 3; ++i) I.rows[i] = {H[i][0], H[i][1], H[i][2]};
    I.den = den;
    return I;
}

// remove a common factor between den and the lattice
IdealHNF normalize_fraction(IdealHNF I) {
    i64 g = I.den;
    for (const auto& r : I.rows)
        for (i64 v : r) g = gcd(g, v);
    if (g > 1) {
        for (auto& r : I.rows)
            for (auto& v : r) v /= g;
        I.den /= g;
    }
    return I;
}

}  // namespace

IdealHNF ideal_from_generators(const std::vector<Elem>& gens) {
    IntMatrix M;
    for (const auto& g : gens) M.push_back({g[0], g[1], g[2]});
    return from_matrix(hnf(M, 3), 1);
}

IdealHNF unit_ideal() {
    IdealHNF I;
    I.rows = {Elem{1, 0, 0}, Elem{0, 1, 0}, Elem{0, 0, 1}};
    return I;
}

IdealHNF principal_ideal(const CubicRing& R, const Elem& x) {
    auto m = R.mult_matrix(x);
    i128 n = R.norm(x);
    if (n < 0) n = -n;
    if (n == 0) throw std::invalid_argument("principal_ideal of zero");
    return from_matrix(hnf_mod({{m[0][0], m[0][1], m[0][2]}, {m[1][0], m[1][1], m[1][2]}, {m[2][0], m[2][1], m[2][2]}}, 3,
                               narrow(n)),
                       1);
}

IdealHNF ideal_mul(const CubicRing& R, const IdealHNF& I, const IdealHNF& J) {
    i64 n = mul_checked(I.norm(), J.norm());
    IntMatrix M;
    for (const auto& a : I.rows)
        for (const auto& b : J.rows) {
            Elem c = R.mul(a, b);
            M.push_back({c[0], c[1], c[2]});
        }
    // n lies in the (integral) product
    return normalize_fraction(from_matrix(hnf_mod(M, 3, n), mul_checked(I.den, J.den)));
}

IdealHNF scaled_inverse(const CubicRing& R, const IdealHNF& I) {
    // { x in O : x * b in n O for every basis element b of I }, n = N(I)
    if (I.den != 1) throw std::invalid_argument("scaled_inverse expects an integral ideal");
    i64 n = I.norm();
    std::array<Elem, 3> L = unit_ideal().rows;
    for (const auto& b : I.rows) {
        auto mb = R.mult_matrix(b);  // row k = e_k * b
        for (int col = 0; col < 3; ++col) {
            // constraint: coordinate col of (x * b) == 0 mod n
            IntMatrix M;
            for (int i = 0; i < 3; ++i) {
                i128 v = 0;
                for (int k = 0; k < 3; ++k) v += static_cast<i128>(L[i][k]) * mb[k][col];
                std::vector<i64> row(4, 0);
                row[0] = static_cast<i64>(((v % n) + n) % n);
                row[static_cast<std::size_t>(i + 1)] = 1;
                M.push_back(row);
            }
            M.push_back({n, 0, 0, 0});
            IntMatrix H = hnf(M, 4);
            std::array<Elem, 3> next{};
            int cnt = 0;
            for (const auto& h : H) {
                if (h[0] != 0) continue;
                Elem x{0, 0, 0};
                for (int i = 0; i < 3; ++i)
                    for (int k = 0; k < 3; ++k) x[k] = add_checked(x[k], mul_checked(h[static_cast<std::size_t>(i + 1)], L[i][k]));
                next[cnt++] = x;
            }
            if (cnt != 3) throw std::logic_error("scaled_inverse: kernel lattice is not of full rank");
            L = ideal_from_generators({next[0], next[1], next[2]}).rows;
        }
    }
    IdealHNF out;
    out.rows = L;
    return out;
}

IdealHNF ideal_power_product(const CubicRing& R, const std::vector<IdealHNF>& primes, const std::vector<i64>& norms,
                             const std::vector<i64>& exps) {
    IdealHNF num = unit_ideal();
    IdealHNF inv = unit_ideal();
    i64 den = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        for (i64 k = 0; k < std::abs(exps[i]); ++k) {
            if (exps[i] > 0) {
                num = ideal_mul(R, num, primes[i]);
            } else {
                inv = ideal_mul(R, inv, scaled_inverse(R, primes[i]));
                den = mul_checked(den, norms[i]);
            }
        }
    }
    IdealHNF out = ideal_mul(R, num, inv);
    out.den = mul_checked(out.den, den);
    return normalize_fraction(out);
}

i64 PrimeIdeal::norm() const {
    i64 n = 1;
    for (int i = 0; i < f; ++i) n = mul_checked(n, p);
    return n;
}

namespace {

Elem pow_mod(const CubicRing& R, Elem x, u64 e, i64 p) {
    Elem r{1, 0, 0};
    for (auto& v : x) v = mod(v, p);
    while (e) {
        if (e & 1) r = R.mul_mod(r, x, p);
        x = R.mul_mod(x, x, p);
        e >>= 1;
    }
    return r;
}

Elem sub_mod(const Elem& x, const Elem& y, i64 p) { return {mod(x[0] - y[0], p), mod(x[1] - y[1], p), mod(x[2] - y[2], p)}; }

bool is_zero(const Elem& x) { return x[0] == 0 && x[1] == 0 && x[2] == 0; }

// primitive idempotents of O/pO lying in the span E of {x : x^p = x}
std::vector<Elem> primitive_idempotents(const CubicRing& R, i64 p, const IntMatrix& E) {
    const Elem one{1, 0, 0};
    std::size_t r = E.size();
    if (r == 1) return {one};
    auto combo = [&](const std::vector<i64>& c) {
        Elem x{0, 0, 0};
        for (std::size_t i = 0; i < r; ++i)
            for (int k = 0; k < 3; ++k) x[k] = mod(x[k] + c[i] * E[i][static_cast<std::size_t>(k)], p);
        return x;
    };
    i64 total = 1;
    for (std::size_t i = 0; i < r; ++i) total *= p;
    if (total <= 4096) {
        std::vector<Elem> idem;
        std::vector<i64> c(r, 0);
        for (i64 t = 0; t < total; ++t) {
            i64 u = t;
            for (std::size_t i = 0; i < r; ++i) {
                c[i] = u % p;
                u /= p;
            }
            Elem x = combo(c);
            if (!is_zero(x) && R.mul_mod(x, x, p) == x) idem.push_back(x);
        }
        std::vector<Elem> prim;
        for (const auto& e : idem) {
            bool primitive = true;
            for (const auto& g : idem)
                if (g != e && R.mul_mod(e, g, p) == g) primitive = false;
            if (primitive) prim.push_back(e);
        }
        return prim;
    }
    // split by a pseudo-random element of E: e_c = 1 - (z - c)^(p-1)
    u64 state = 0x9E3779B97F4A7C15ULL ^ static_cast<u64>(p);
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<i64> c(r);
        for (auto& v : c) {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            v = static_cast<i64>((state >> 33) % static_cast<u64>(p));
        }
        Elem z = combo(c);
        std::vector<Elem> prim;
        for (i64 cc = 0; cc < p && prim.size() < r; ++cc) {
            Elem zc = sub_mod(z, Elem{cc, 0, 0}, p);
            Elem e = sub_mod(one, pow_mod(R, zc, static_cast<u64>(p - 1), p), p);
            if (!is_zero(e)) prim.push_back(e);
        }
        if (prim.size() == r) return prim;
    }
    throw std::runtime_error("prime_decomposition: failed to split O/pO");
}

}  // namespace

std::vector<PrimeIdeal> prime_decomposition(const CubicRing& R, i64 p) {
    u64 q = static_cast<u64>(p);
    while (q < 3) q *= static_cast<u64>(p);
    IntMatrix F(3), Fk(3);
    for (int i = 0; i < 3; ++i) {
        Elem e{0, 0, 0};
        e[i] = 1;
        Elem fp = pow_mod(R, e, static_cast<u64>(p), p);
        Elem fq = pow_mod(R, e, q, p);
        F[static_cast<std::size_t>(i)] = {fp[0], fp[1], fp[2]};
        F[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = mod(fp[i] - 1, p);
        Fk[static_cast<std::size_t>(i)] = {fq[0], fq[1], fq[2]};
    }
    IntMatrix E = left_kernel_mod_p(F, p);
    IntMatrix J = left_kernel_mod_p(Fk, p);
    std::vector<Elem> idem = primitive_idempotents(R, p, E);
    std::vector<PrimeIdeal> out;
    const Elem one{1, 0, 0};
    for (const auto& e : idem) {
        Elem ce = sub_mod(one, e, p);
        IntMatrix span = J;
        IntMatrix local;
        for (int k = 0; k < 3; ++k) {
            Elem ek{0, 0, 0};
            ek[k] = 1;
            Elem a = R.mul_mod(ce, ek, p);
            span.push_back({a[0], a[1], a[2]});
            Elem b = R.mul_mod(e, ek, p);
            local.push_back({b[0], b[1], b[2]});
        }
        IntMatrix m = span.empty() ? IntMatrix{} : rref_mod_p(span, p);
        int f = 3 - static_cast<int>(m.size());
        int dim_local = static_cast<int>(rank_mod_p(local, p));
        PrimeIdeal P;
        P.p = p;
        P.f = f;
        P.e = dim_local / f;
        std::vector<Elem> gens;
        for (const auto& row : m) gens.push_back({row[0], row[1], row[2]});
        for (int k = 0; k < 3; ++k) {
            Elem v{0, 0, 0};
            v[k] = p;
            gens.push_back(v);
        }
        P.ideal = ideal_from_generators(gens);
        // annihilator of m inside O/pO
        if (m.empty()) {
            P.beta = one;
        } else {
            IntMatrix A(3);
            for (int i = 0; i < 3; ++i) {
                Elem ei{0, 0, 0};
                ei[i] = 1;
                for (const auto& row : m) {
                    Elem prod = R.mul_mod(ei, Elem{row[0], row[1], row[2]}, p);
                    for (int k = 0; k < 3; ++k) A[static_cast<std::size_t>(i)].push_back(prod[k]);
                }
            }
            IntMatrix ker = left_kernel_mod_p(A, p);
            if (ker.empty()) throw std::logic_error("prime_decomposition: empty annihilator");
            for (int k = 0; k < 3; ++k) {
                i64 v = ker[0][static_cast<std::size_t>(k)];
                P.beta[k] = v > p / 2 ? v - p : v;
            }
        }
        out.push_back(P);
    }
    std::sort(out.begin(), out.end(), [](const PrimeIdeal& x, const PrimeIdeal& y) {
        if (x.f != y.f) return x.f < y.f;
        if (x.e != y.e) return x.e > y.e;
        return x.ideal.rows < y.ideal.rows;
    });
    return out;
}

int prime_valuation(const CubicRing& R, const PrimeIdeal& P, Elem x, int norm_exponent) {
    if (is_zero(x)) throw std::invalid_argument("prime_valuation of zero");
    int v = 0;
    const i64 p = P.p;
    // v_P(x) <= v_p(N x), so x may be replaced by its residue modulo p^(k+1)
    i64 modulus = 0;
    if (norm_exponent >= 0) {
        i128 m = 1;
        for (int i = 0; i <= norm_exponent && m <= (i128{1} << 31); ++i) m *= p;
        if (m <= (i128{1} << 31)) modulus = static_cast<i64>(m);
    }
    auto shrink = [&](Elem& y) {
        if (!modulus) return;
        for (auto& c : y) {
            c = mod(c, modulus);
            if (c > modulus / 2) c -= modulus;
        }
    };
    shrink(x);
    for (;;) {
        if (is_zero(x) || !P.ideal.contains(x)) return v;
        Elem y = R.mul(x, P.beta);
        for (auto& c : y) {
            if (c % p) throw std::logic_error("prime_valuation: anti-uniformizer failed");
            c /= p;
        }
        x = y;
        shrink(x);
        ++v;
    }
}

}  // namespace cubic
