#pragma once

#include <vector>

#include "cubic/linalg.hpp"

namespace cubic {

// Finite abelian group Z^n / relations, presented on a list of base classes
// (factor-base ideals, possibly followed by sign generators).
struct AbelianGroupData {
    std::vector<i64> divisors;               // d_1 | d_2 | ..., all > 1
    std::vector<std::vector<i64>> dlog;      // dlog[j] = coordinates of base class j
    std::vector<i64> base_primes;            // rational prime under base class j (0 for sign generators)
    std::vector<std::vector<i64>> generators;  // exponent vectors over the base, one per divisor

    i64 order() const;
    std::size_t rank() const { return divisors.size(); }
    // coordinates of prod base_j^{e_j}
    std::vector<i64> dlog_of(const std::vector<i64>& exps) const;
    bool operator==(const AbelianGroupData& o) const { return divisors == o.divisors; }
};

// rows: relations among the nbase base classes; must have full rank
AbelianGroupData group_from_relations(const IntMatrix& rows, std::size_t nbase, std::vector<i64> base_primes,
                                      bool with_generators = false);

// quotient of G by the classes of the given base elements
AbelianGroupData quotient_by_base(const AbelianGroupData& G, const std::vector<std::size_t>& base_indices);

i64 two_torsion_card(const AbelianGroupData& G);
// number of cyclic factors of even order
int two_rank(const AbelianGroupData& G);

std::string divisors_string(const std::vector<i64>& d);
std::vector<i64> parse_divisors(const std::string& s);

}  // namespace cubic
