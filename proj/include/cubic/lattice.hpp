#pragma once

#include <array>
#include <functional>

#include "cubic/field.hpp"

namespace cubic {

// A rank-3 sublattice of O (rows in O-coordinates) together with a real
// embedding of O; lengths are Euclidean lengths of the embedded vectors.
struct EmbeddedLattice {
    std::array<Elem, 3> basis;
    std::array<Vec3, 3> unit_images;  // images of e_0, e_1, e_2

    Vec3 image(const Elem& x) const;
    long double length2(const Elem& x) const;
};

// LLL with delta = 0.99 in long double; the basis is replaced in place
void lll_reduce(EmbeddedLattice& L);

// Calls visit(x) for every nonzero lattice vector x (O-coordinates) with
// length2(x) <= bound, each pair {x, -x} exactly once. Returns the number visited;
// stops early if visit returns false.
std::size_t enumerate_short(const EmbeddedLattice& L, long double bound, const std::function<bool(const Elem&)>& visit);

}  // namespace cubic
