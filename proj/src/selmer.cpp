#include "cubic/selmer.hpp"

#include <stdexcept>

namespace cubic {

namespace {

int nu_of(const NumberField& K, const PrimeSet& S) {
    int nu = 0;
    for (i64 p : S) nu += splitting_type(K.ring(), p).r();
    return nu;
}

int log2_exact(i64 v) {
    int k = 0;
    while ((i64(1) << k) < v) ++k;
    if ((i64(1) << k) != v) throw std::logic_error("not a power of two: " + std::to_string(v));
    return k;
}

}  // namespace

i64 selmer_size_formula(Signature sig, int nu, i64 cl_s_two_torsion) {
    return (i64(1) << (nu + (sig == Signature::TotallyReal ? 3 : 2))) * cl_s_two_torsion;
}

i64 selmer_size_formula(const ClassGroupComputation& C, const PrimeSet& S) {
    const NumberField& K = C.field();
    return selmer_size_formula(K.signature(), nu_of(K, S), two_torsion_card(C.s_quotient(C.class_group(), S)));
}

i64 selmer_size_exact_sequence(const ClassGroupComputation& C, const PrimeSet& S) {
    SUnitData u = C.s_unit_data(S);
    return (i64(1) << u.mod_squares_dim) * two_torsion_card(C.s_quotient(C.class_group(), S));
}

SelmerData selmer_data(const ClassGroupComputation& C, const PrimeSet& S, SelmerRoute route) {
    SelmerData out;
    out.route = route;
    switch (route) {
        case SelmerRoute::Formula: out.dim = log2_exact(selmer_size_formula(C, S)); break;
        case SelmerRoute::ExactSequence: out.dim = log2_exact(selmer_size_exact_sequence(C, S)); break;
        case SelmerRoute::Direct: out.dim = C.selmer_direct_dim(S); break;
    }
    return out;
}

KInputs k_inputs(const ClassGroupComputation& C) {
    const NumberField& K = C.field();
    const PrimeSet two{2};
    KInputs in;
    in.r1 = K.r1();
    in.places_above_2 = splitting_type(K.ring(), 2).r();
    in.cl_rank = two_rank(C.s_quotient(C.class_group(), two));
    in.narrow_rank = two_rank(C.s_quotient(C.narrow_class_group(), two));
    return in;
}

KRank k_rank(const KInputs& in, i64 n) {
    if (n <= 0) throw std::invalid_argument("k_rank needs n > 0");
    KRank out;
    out.n_mod_4 = static_cast<int>(n % 4);
    switch (out.n_mod_4) {
        case 0: out.rank = in.cl_rank + in.places_above_2 - 1; break;
        case 1: out.rank = in.cl_rank + in.r1 + in.places_above_2 - 1; break;
        default: out.rank = in.narrow_rank + in.places_above_2 - 1; break;
    }
    return out;
}

KRank k_rank(const ClassGroupComputation& C, i64 n) { return k_rank(k_inputs(C), n); }

}  // namespace cubic
