#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include "cubic/forms.hpp"

namespace cubic {

using Vec3 = std::array<long double, 3>;

// a cubic field given by a reduced irreducible maximal form, with its archimedean data
class NumberField {
public:
    explicit NumberField(const BinaryCubicForm& f);
    ~NumberField();
    NumberField(const NumberField&) = delete;
    NumberField& operator=(const NumberField&) = delete;

    const BinaryCubicForm& form() const { return form_; }
    const CubicRing& ring() const { return ring_; }
    i64 disc() const { return ring_.discriminant; }
    Signature signature() const { return r1_ == 3 ? Signature::TotallyReal : Signature::Complex; }
    int r1() const { return r1_; }
    int r2() const { return r1_ == 3 ? 0 : 1; }
    // places: real places first, then the complex place (if any)
    int nplaces() const { return r1_ + r2(); }
    int place_degree(int place) const { return place < r1_ ? 1 : 2; }

    std::complex<long double> embed(const Elem& x, int place) const;
    long double abs_at(const Elem& x, int place) const { return std::abs(embed(x, place)); }
    // log |sigma_place(x)| in quad precision, for sums that cancel heavily
    __float128 log_abs_fine(const Elem& x, int place) const;
    // exact sign at a real place (x != 0); escalates to 50-digit arithmetic near zero
    int sign(const Elem& x, int place) const;
    // bit i set iff x is negative at real place i
    u64 sign_mask(const Elem& x) const;

    // real coordinates of the basis elements under the weighted Minkowski map
    // (sqrt(w) * sigma for real places, sqrt(2w) * Re/Im for the complex place);
    // the squared length of an element's image is sum_v w_v * deg_v * |sigma_v(x)|^2
    std::array<Vec3, 3> minkowski(const std::vector<long double>& weights) const;

    Elem mul(const Elem& x, const Elem& y) const { return ring_.mul(x, y); }
    i128 norm(const Elem& x) const { return ring_.norm(x); }

private:
    BinaryCubicForm form_;
    CubicRing ring_;
    int r1_;
    // emb_[place][k] = sigma_place(e_k)
    std::array<std::array<std::complex<long double>, 3>, 3> emb_{};
    struct Precise;
    mutable std::unique_ptr<Precise> precise_;
    struct Fine;
    mutable std::unique_ptr<Fine> fine_;
};

}  // namespace cubic
