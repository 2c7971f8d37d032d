#pragma once

#include <map>
#include <memory>
#include <vector>

#include "cubic/field.hpp"
#include "cubic/group.hpp"
#include "cubic/ideals.hpp"
#include "cubic/splitting.hpp"

namespace cubic {

struct SUnitData {
    int rank = 0;             // r1 + r2 - 1 + #S_K
    int mod_squares_dim = 0;  // binary dimension of the S-units modulo squares
    int sign_rank = 0;        // rank of the sign map at the real places
    // sign bits (bit i = negative at real place i) of generators of the S-units modulo squares
    std::vector<u64> signature_matrix;
};

struct ClassGroupOptions {
    int characters = 40;
    int streak = 8;
    int max_rounds = 14;
    i64 euler_limit = 1 << 15;
};

// Relation-based computation of Cl, Cl+, their S-quotients and S-unit data for one field.
class ClassGroupComputation {
public:
    // every prime of s_primes gets all of its prime ideals in the factor base
    ClassGroupComputation(const NumberField& K, PrimeSet s_primes = {2, 3}, ClassGroupOptions opt = {});
    ~ClassGroupComputation();

    const NumberField& field() const { return K_; }
    const std::vector<PrimeIdeal>& factor_base() const { return fb_; }
    const AbelianGroupData& class_group() const { return cl_; }
    const AbelianGroupData& narrow_class_group() const;
    // quotient by the classes of all primes above S (those primes must be in the factor base)
    AbelianGroupData s_quotient(const AbelianGroupData& G, const PrimeSet& S) const;
    SUnitData s_unit_data(const PrimeSet& S) const;
    // dimension of the relaxed 2-Selmer group read off the relation matrix directly
    int selmer_direct_dim(const PrimeSet& S) const;

    long double regulator() const { return regulator_; }
    long double euler_ratio() const { return ratio_; }
    std::size_t relation_count() const;
    i64 minkowski_bound() const { return mb_; }

private:
    struct Impl;
    struct WPass;
    const WPass& wpass(const PrimeSet& S) const;

    const NumberField& K_;
    PrimeSet s_primes_;
    ClassGroupOptions opt_;
    std::vector<PrimeIdeal> fb_;
    i64 mb_ = 0;
    AbelianGroupData cl_;
    long double regulator_ = 0, ratio_ = 0;
    std::unique_ptr<Impl> impl_;
    mutable std::map<PrimeSet, std::shared_ptr<WPass>> wpasses_;
    mutable std::unique_ptr<AbelianGroupData> narrow_;
};

AbelianGroupData class_group(const NumberField& K);
AbelianGroupData narrow_class_group(const NumberField& K);
AbelianGroupData s_quotient(const AbelianGroupData& G, const NumberField& K, const PrimeSet& S, bool narrow);
SUnitData s_unit_data(const NumberField& K, const PrimeSet& S);

// truncated Euler product for the residue of the Dedekind zeta function at s = 1
long double residue_estimate(const NumberField& K, i64 limit);

}  // namespace cubic
