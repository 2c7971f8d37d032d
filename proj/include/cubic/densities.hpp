#pragma once

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "cubic/forms.hpp"
#include "cubic/splitting.hpp"

namespace cubic {

using Rational = boost::multiprecision::cpp_rational;
using Real50 = boost::multiprecision::cpp_dec_float_50;

// "num/den" (or "num" for integers)
std::string to_string(const Rational& q);
// fixed-point decimal with the given number of digits after the point
std::string to_decimal(const Rational& q, int digits = 12);
Rational parse_rational(const std::string& s);

// ---- local masses

// 1 - 1/p^3, the mass of all rank-3 algebras
Rational mu_total(i64 p);
// mass of the algebras with r irreducible components
Rational mass_sigma_r(i64 p, int r);
// mass of the algebras with a given splitting descriptor (all p, via Serre's mass formula)
Rational mass_descriptor(i64 p, const SplittingType& t);
// mass of a condition at one prime (nullopt = every descriptor)
Rational mass_condition(i64 p, const std::optional<std::set<SplittingType>>& sigma);
// recomputation of mass_sigma_r from an explicit list of tame algebras; p > 3
Rational mass_tame_bruteforce(i64 p, int r);

// mass of R + Q_p over all R, closed form (5p^3 - p^2 + 4p - 8) / (8p^3)
Rational tilde_mass_all(i64 p);
// the same mass as a sum over component counts
Rational tilde_mass_component_sum(i64 p);
Rational tilde_ratio_single(int r);
// (5p^2 + 4p + 8) / (8(p^2 + p + 1))
Rational tilde_ratio_all(i64 p);
// prod over p of mu(tilde Sigma_p) / mu(Sigma_p)
Rational tilde_ratio(const LocalConditionSet& sigma);

// ---- predicted averages

// 1 + (p^2 + 4) / (4(p^2 + p + 1))
Rational local_factor(i64 p);
// 2 - 1/(p^2 + p + 1)
Rational nu_factor(i64 p);

// average of |Cl_S[2]| (|Cl+_S[2]| when plus); plus is ignored for complex fields
Rational predict_cl_avg(Signature sig, bool plus, const PrimeSet& S);
// the same under arbitrary local conditions, 1 + c * tilde_ratio
Rational predict_cl_avg_local(Signature sig, bool plus, const LocalConditionSet& sigma);
// local algebras fixed at every p in S, r = sum (r_p - 1)
Rational predict_cl_avg_conditioned(Signature sig, bool plus, int r);
Rational predict_selmer_avg(Signature sig, const PrimeSet& S);
Rational predict_2nu_avg(const PrimeSet& S);
// average of |Cl_S[2]| over fields with nu_S = s
Rational predict_cl_avg_fixed_nu(Signature sig, bool plus, int S_size, int s);
// average of 2^s |Cl_S[2]| over fields with nu_S = s
Rational predict_fixed_nu(Signature sig, bool plus, int S_size, int s);
Rational predict_2nu_cl_avg(Signature sig, bool plus, const PrimeSet& S);
// average of |K_{2n}(O_K)[2]|
Rational predict_kgroup_avg(Signature sig, int n_mod_4);
// lower bound for the proportions of totally real fields with Cl+_S[2] = 0
Rational predict_cor13_bound(const PrimeSet& S);

// ---- field counts

Real50 zeta3();
// number of cubic fields with |Disc| < X and the given local conditions (leading term)
Real50 predict_field_count(Signature sig, const Real50& X, const LocalConditionSet& sigma = {});
// quartic fields with i real places (0, 2 or 4), local conditions given as tilde sets
Real50 predict_quartic_count(int real_places, const Real50& X, const LocalConditionSet& tilde_of = {});

}  // namespace cubic
