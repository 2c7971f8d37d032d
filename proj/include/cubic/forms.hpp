#pragma once

#include <array>
#include <complex>
#include <compare>
#include <functional>
#include <string>
#include <vector>

#include "cubic/arith.hpp"

namespace cubic {

// a x^3 + b x^2 y + c x y^2 + d y^3
struct BinaryCubicForm {
    i64 a = 0, b = 0, c = 0, d = 0;
    auto operator<=>(const BinaryCubicForm&) const = default;
};

std::string to_string(const BinaryCubicForm& f);
BinaryCubicForm parse_form(const std::string& s);

enum class Signature { TotallyReal, Complex };
enum class SignatureFilter { TotallyReal, Complex, Both };

std::string to_string(Signature s);

// substitution matrix [[p, q], [r, s]] acting by f(px + qy, rx + sy)
struct GL2 {
    i64 p, q, r, s;
    i64 det() const { return p * s - q * r; }
};

i64 disc(const BinaryCubicForm& f);
BinaryCubicForm transform(const BinaryCubicForm& f, const GL2& g);

struct QuadForm {
    i64 P, Q, R;
};
QuadForm hessian(const BinaryCubicForm& f);

// roots of f(x, 1); real roots ascending, then the root in the upper half plane
struct CubicRoots {
    int nreal = 0;
    std::array<long double, 3> real{};
    std::complex<long double> upper{};
};
CubicRoots roots(const BinaryCubicForm& f);

bool is_irreducible(const BinaryCubicForm& f);
Signature signature_of(const BinaryCubicForm& f);

// canonical representative of the twisted GL2(Z)-class; throws ReducibleFormError
BinaryCubicForm reduce(const BinaryCubicForm& f);
bool is_reduced(const BinaryCubicForm& f);

// Delone-Faddeev ring on the basis {1, w, t}
using Elem = std::array<i64, 3>;

struct CubicRing {
    // e_i e_j = sum_k table[i][j][k] e_k
    std::array<std::array<Elem, 3>, 3> table{};
    i64 discriminant = 0;

    Elem mul(const Elem& x, const Elem& y) const;
    Elem mul_mod(const Elem& x, const Elem& y, i64 p) const;
    // matrix of multiplication by x: row i = x * e_i
    std::array<Elem, 3> mult_matrix(const Elem& x) const;
    i64 trace(const Elem& x) const;
    i128 norm(const Elem& x) const;
    i64 table_discriminant() const;
    bool is_associative() const;
};

CubicRing ring_of(const BinaryCubicForm& f);

bool is_maximal_at(const CubicRing& ring, i64 p);
bool is_maximal_at(const BinaryCubicForm& f, i64 p);
bool is_maximal(const BinaryCubicForm& f);

struct CubicFieldRecord;

struct EnumerateOptions {
    i64 min_abs_disc = 1;  // inclusive
    i64 max_abs_disc = 1;  // exclusive
    SignatureFilter signature = SignatureFilter::Both;
    bool include_cyclic = false;
    unsigned threads = 1;
};

// canonical forms of all cubic fields with min <= |Disc| < max, sorted by (|D|, D, form)
std::vector<BinaryCubicForm> enumerate_forms(const EnumerateOptions& opt);
std::vector<CubicFieldRecord> enumerate(i64 X, SignatureFilter filter, bool include_cyclic, unsigned threads = 1);

// ordering used for every field list
bool field_order(const BinaryCubicForm& f, i64 df, const BinaryCubicForm& g, i64 dg);

}  // namespace cubic
