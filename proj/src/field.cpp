#include "cubic/field.hpp"

#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <quadmath.h>

namespace cubic {

using HP = boost::multiprecision::cpp_bin_float_50;

struct NumberField::Precise {
    // real embeddings of the basis at the real places, 50 digits
    std::array<std::array<HP, 3>, 3> emb;
};

struct NumberField::Fine {
    // basis embeddings as (re, im) pairs in quad precision
    std::array<std::array<std::array<__float128, 2>, 3>, 3> emb;
};

namespace {

using Q = __float128;

struct QC {
    Q re, im;
};

QC operator+(QC a, QC b) { return {a.re + b.re, a.im + b.im}; }
QC operator*(QC a, QC b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
QC operator/(QC a, QC b) {
    const Q d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

// Newton polish of a root of f(x, 1) in quad precision
QC polish(const BinaryCubicForm& f, QC r) {
    const QC A{Q(f.a), 0}, B{Q(f.b), 0}, C{Q(f.c), 0}, D{Q(f.d), 0}, three{3, 0}, two{2, 0};
    for (int it = 0; it < 8; ++it) {
        const QC val = ((A * r + B) * r + C) * r + D;
        const QC der = (three * A * r + two * B) * r + C;
        const QC step = val / der;
        r = {r.re - step.re, r.im - step.im};
        if (fabsq(step.re) + fabsq(step.im) < 1e-33Q * (1 + fabsq(r.re) + fabsq(r.im))) break;
    }
    return r;
}

}  // namespace

NumberField::NumberField(const BinaryCubicForm& f) : form_(f), ring_(ring_of(f)) {
    CubicRoots rt = roots(f);
    r1_ = rt.nreal;
    auto basis_at = [&](std::complex<long double> al) {
        std::complex<long double> A = static_cast<long double>(f.a), B = static_cast<long double>(f.b),
                                  C = static_cast<long double>(f.c);
        return std::array<std::complex<long double>, 3>{std::complex<long double>(1), A * al, (A * al + B) * al + C};
    };
    for (int i = 0; i < r1_; ++i) emb_[static_cast<std::size_t>(i)] = basis_at(rt.real[static_cast<std::size_t>(i)]);
    if (r1_ == 1) emb_[1] = basis_at(rt.upper);
}

NumberField::~NumberField() = default;

std::complex<long double> NumberField::embed(const Elem& x, int place) const {
    const auto& e = emb_[static_cast<std::size_t>(place)];
    return static_cast<long double>(x[0]) * e[0] + static_cast<long double>(x[1]) * e[1] +
           static_cast<long double>(x[2]) * e[2];
}

int NumberField::sign(const Elem& x, int place) const {
    const auto& e = emb_[static_cast<std::size_t>(place)];
    long double v = 0, scale = 0;
    for (int k = 0; k < 3; ++k) {
        long double t = static_cast<long double>(x[static_cast<std::size_t>(k)]) * e[static_cast<std::size_t>(k)].real();
        v += t;
        scale += std::fabs(t);
    }
    if (std::fabs(v) > scale * 1e-15L + 1e-300L) return v > 0 ? 1 : -1;
    if (!precise_) {
        precise_ = std::make_unique<Precise>();
        CubicRoots rt = roots(form_);
        HP A = form_.a, B = form_.b, C = form_.c, D = form_.d;
        for (int i = 0; i < r1_; ++i) {
            HP r = static_cast<HP>(rt.real[static_cast<std::size_t>(i)]);
            for (int it = 0; it < 30; ++it) {
                HP val = ((A * r + B) * r + C) * r + D;
                HP der = (3 * A * r + 2 * B) * r + C;
                HP step = val / der;
                r -= step;
                if (abs(step) < HP("1e-48") * (1 + abs(r))) break;
            }
            precise_->emb[static_cast<std::size_t>(i)] = {HP(1), A * r, (A * r + B) * r + C};
        }
    }
    const auto& pe = precise_->emb[static_cast<std::size_t>(place)];
    HP w = HP(x[0]) * pe[0] + HP(x[1]) * pe[1] + HP(x[2]) * pe[2];
    HP ws = abs(HP(x[0]) * pe[0]) + abs(HP(x[1]) * pe[1]) + abs(HP(x[2]) * pe[2]);
    if (abs(w) <= ws * HP("1e-40")) throw std::runtime_error("sign: element indistinguishable from zero");
    return w > 0 ? 1 : -1;
}

__float128 NumberField::log_abs_fine(const Elem& x, int place) const {
    if (!fine_) {
        fine_ = std::make_unique<Fine>();
        CubicRoots rt = roots(form_);
        const QC A{Q(form_.a), 0}, B{Q(form_.b), 0}, C{Q(form_.c), 0};
        auto fill = [&](std::size_t i, QC al) {
            al = polish(form_, al);
            const QC e1 = A * al, e2 = (A * al + B) * al + C;
            fine_->emb[i] = {{{1, 0}, {e1.re, e1.im}, {e2.re, e2.im}}};
        };
        for (int i = 0; i < r1_; ++i) fill(static_cast<std::size_t>(i), {Q(rt.real[static_cast<std::size_t>(i)]), 0});
        if (r1_ == 1) fill(1, {Q(rt.upper.real()), Q(rt.upper.imag())});
    }
    const auto& e = fine_->emb[static_cast<std::size_t>(place)];
    Q re = 0, im = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        re += Q(x[k]) * e[k][0];
        im += Q(x[k]) * e[k][1];
    }
    return logq(hypotq(re, im));
}

u64 NumberField::sign_mask(const Elem& x) const {
    u64 m = 0;
    for (int i = 0; i < r1_; ++i)
        if (sign(x, i) < 0) m |= 1ULL << i;
    return m;
}

std::array<Vec3, 3> NumberField::minkowski(const std::vector<long double>& w) const {
    std::array<Vec3, 3> out{};
    for (int k = 0; k < 3; ++k) {
        if (r1_ == 3) {
            for (int i = 0; i < 3; ++i)
                out[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
                    std::sqrt(w[static_cast<std::size_t>(i)]) * emb_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].real();
        } else {
            long double s0 = std::sqrt(w[0]), s1 = std::sqrt(2 * w[1]);
            out[static_cast<std::size_t>(k)][0] = s0 * emb_[0][static_cast<std::size_t>(k)].real();
            out[static_cast<std::size_t>(k)][1] = s1 * emb_[1][static_cast<std::size_t>(k)].real();
            out[static_cast<std::size_t>(k)][2] = s1 * emb_[1][static_cast<std::size_t>(k)].imag();
        }
    }
    return out;
}

}  // namespace cubic
