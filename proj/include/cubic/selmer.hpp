#pragma once

#include "cubic/class_group.hpp"

namespace cubic {

enum class SelmerRoute { Formula, ExactSequence, Direct };

struct SelmerData {
    int dim = 0;  // F2-dimension of the relaxed 2-Selmer group
    SelmerRoute route = SelmerRoute::Formula;
    i64 size() const { return i64(1) << dim; }
};

// 2^(nu + 3) |Cl_S[2]| for totally real fields, 2^(nu + 2) for complex ones
i64 selmer_size_formula(Signature sig, int nu, i64 cl_s_two_torsion);
i64 selmer_size_formula(const ClassGroupComputation& C, const PrimeSet& S);
// |O_S^x / squares| * |Cl_S[2]|; throws SaturationError when the S-units are not 2-saturated
i64 selmer_size_exact_sequence(const ClassGroupComputation& C, const PrimeSet& S);
SelmerData selmer_data(const ClassGroupComputation& C, const PrimeSet& S, SelmerRoute route);

struct KRank {
    int n_mod_4 = 0;
    int rank = 0;
    i64 card() const { return i64(1) << rank; }
};

// 2-primary data at S = {2} that determines the 2-rank of K_{2n}(O_K)
struct KInputs {
    int r1 = 0;
    int places_above_2 = 0;
    int cl_rank = 0;      // dim Cl_{2}[2]
    int narrow_rank = 0;  // dim Cl+_{2}[2]
};

KInputs k_inputs(const ClassGroupComputation& C);
// n > 0
KRank k_rank(const KInputs& in, i64 n);
KRank k_rank(const ClassGroupComputation& C, i64 n);

}  // namespace cubic
