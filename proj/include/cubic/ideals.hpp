#pragma once

#include <array>
#include <vector>

#include "cubic/field.hpp"
#include "cubic/linalg.hpp"

namespace cubic {

// integral (den == 1) or fractional ideal; rows form an upper-triangular HNF basis
struct IdealHNF {
    std::array<Elem, 3> rows{};
    i64 den = 1;

    bool operator==(const IdealHNF&) const = default;
    // norm of an integral ideal
    i64 norm() const;
    bool contains(const Elem& x) const;
};

IdealHNF ideal_from_generators(const std::vector<Elem>& gens);
IdealHNF unit_ideal();
IdealHNF principal_ideal(const CubicRing& R, const Elem& x);
IdealHNF ideal_mul(const CubicRing& R, const IdealHNF& I, const IdealHNF& J);
// N(I) * I^{-1} for an integral ideal I (again integral)
IdealHNF scaled_inverse(const CubicRing& R, const IdealHNF& I);
// fractional ideal prod P_i^{e_i}, e_i of either sign
IdealHNF ideal_power_product(const CubicRing& R, const std::vector<IdealHNF>& primes, const std::vector<i64>& norms,
                             const std::vector<i64>& exps);

struct PrimeIdeal {
    i64 p = 0;
    int e = 1;
    int f = 1;
    IdealHNF ideal;
    // beta * P is contained in pO while beta is not
    Elem beta{};
    i64 norm() const;
};

std::vector<PrimeIdeal> prime_decomposition(const CubicRing& R, i64 p);
// v_P(x) for x != 0
// norm_exponent, if known, is v_p of the norm of x and keeps coefficients small
int prime_valuation(const CubicRing& R, const PrimeIdeal& P, Elem x, int norm_exponent = -1);

}  // namespace cubic
