#include "cubic/lattice.hpp"

#include <cmath>

namespace cubic {

Vec3 EmbeddedLattice::image(const Elem& x) const {
    Vec3 v{0, 0, 0};
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j) v[j] += static_cast<long double>(x[k]) * unit_images[k][j];
    return v;
}

long double EmbeddedLattice::length2(const Elem& x) const {
    Vec3 v = image(x);
    return v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
}

namespace {

long double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Elem axpy(const Elem& y, i64 q, const Elem& x) {
    // y - q x
    return {sub_checked(y[0], mul_checked(q, x[0])), sub_checked(y[1], mul_checked(q, x[1])),
            sub_checked(y[2], mul_checked(q, x[2]))};
}

}  // namespace

void lll_reduce(EmbeddedLattice& L) {
    const long double delta = 0.99L;
    auto& b = L.basis;
    std::array<Vec3, 3> bs{};
    std::array<std::array<long double, 3>, 3> mu{};
    std::array<long double, 3> B{};
    auto gso = [&] {
        for (int i = 0; i < 3; ++i) {
            Vec3 v = L.image(b[i]);
            bs[i] = v;
            for (int j = 0; j < i; ++j) {
                mu[i][j] = dot(v, bs[j]) / B[j];
                for (int t = 0; t < 3; ++t) bs[i][t] -= mu[i][j] * bs[j][t];
            }
            B[i] = dot(bs[i], bs[i]);
        }
    };
    gso();
    int k = 1;
    int guard = 0;
    while (k < 3) {
        if (++guard > 100000) break;
        for (int j = k - 1; j >= 0; --j) {
            long double r = std::nearbyint(mu[k][j]);
            if (r != 0) {
                b[k] = axpy(b[k], static_cast<i64>(r), b[j]);
                gso();
            }
        }
        if (B[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            gso();
            k = std::max(k - 1, 1);
        }
    }
}

std::size_t enumerate_short(const EmbeddedLattice& L, long double bound, const std::function<bool(const Elem&)>& visit) {
    // Fincke-Pohst: Q(y) = sum_i q[i][i] (y_i + sum_{j>i} q[i][j] y_j)^2
    std::array<Vec3, 3> img{};
    for (int i = 0; i < 3; ++i) img[i] = L.image(L.basis[i]);
    long double G[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) G[i][j] = dot(img[i], img[j]);
    long double q[3][3] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) q[i][j] = G[i][j];
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for (int k = i + 1; k < 3; ++k)
            for (int l = k; l < 3; ++l) q[k][l] -= q[k][i] * q[i][l];
    }
    const long double C = bound * (1 + 1e-12L) + 1e-12L;
    std::size_t count = 0;
    std::array<i64, 3> y{};
    std::array<long double, 3> T{}, U{};
    bool stop = false;
    // recursive descent over coordinates 2, 1, 0
    std::function<void(int)> rec = [&](int i) {
        if (stop) return;
        U[i] = 0;
        for (int j = i + 1; j < 3; ++j) U[i] += q[i][j] * static_cast<long double>(y[j]);
        long double rad = T[i] / q[i][i];
        if (rad < 0) return;
        long double z = std::sqrt(rad);
        i64 lo = static_cast<i64>(std::ceil(-z - U[i] - 1e-9L));
        i64 hi = static_cast<i64>(std::floor(z - U[i] + 1e-9L));
        for (i64 v = lo; v <= hi && !stop; ++v) {
            y[i] = v;
            long double t = static_cast<long double>(v) + U[i];
            long double rem = T[i] - q[i][i] * t * t;
            if (rem < -1e-9L * C) continue;
            if (i == 0) {
                // keep one of each +-pair: last nonzero coordinate positive
                int last = 2;
                while (last >= 0 && y[last] == 0) --last;
                if (last < 0 || y[last] < 0) continue;
                Elem x{0, 0, 0};
                for (int k = 0; k < 3; ++k)
                    for (int j = 0; j < 3; ++j) x[j] = add_checked(x[j], mul_checked(y[k], L.basis[k][j]));
                ++count;
                if (!visit(x)) stop = true;
            } else {
                T[i - 1] = rem;
                rec(i - 1);
            }
        }
        y[i] = 0;
    };
    T[2] = C;
    rec(2);
    return count;
}

}  // namespace cubic
