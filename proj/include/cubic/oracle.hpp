#pragma once

#include <memory>
#include <vector>

#include "cubic/field.hpp"
#include "cubic/group.hpp"
#include "cubic/ideals.hpp"
#include "cubic/splitting.hpp"

namespace cubic {

// Unconditional class group computation for small discriminants: the group is built
// from the Cayley graph of the prime ideals below the Minkowski bound, and every class
// comparison is decided by an exhaustive search for a generator.
class ClassGroupOracle {
public:
    static constexpr i64 default_threshold = 20000;

    // base classes are the prime ideals above p <= Minkowski bound and above s_primes
    ClassGroupOracle(const NumberField& K, PrimeSet s_primes = {2, 3}, i64 threshold = default_threshold);
    ~ClassGroupOracle();

    const AbelianGroupData& class_group() const;
    const AbelianGroupData& narrow_class_group() const;
    AbelianGroupData s_quotient(const AbelianGroupData& G, const PrimeSet& S) const;

    bool is_principal(const IdealHNF& I) const;
    // a totally positive generator exists
    bool is_narrowly_principal(const IdealHNF& I) const;

    const std::vector<PrimeIdeal>& base() const { return base_; }
    // log vectors (weighted by place degree) of independent units found by collision search
    std::size_t unit_count() const;

private:
    struct Impl;
    AbelianGroupData build(bool narrow) const;
    const NumberField& K_;
    std::vector<PrimeIdeal> base_;
    std::unique_ptr<Impl> impl_;
    mutable std::unique_ptr<AbelianGroupData> cl_, narrow_;
};

AbelianGroupData oracle_class_group(const NumberField& K, i64 threshold = ClassGroupOracle::default_threshold);
AbelianGroupData oracle_narrow_class_group(const NumberField& K, i64 threshold = ClassGroupOracle::default_threshold);

}  // namespace cubic
