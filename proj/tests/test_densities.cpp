#include <doctest.h>

#include "cubic/densities.hpp"

using namespace cubic;

namespace {

Rational q(long long n, long long d = 1) { return Rational(n) / d; }

const auto R = Signature::TotallyReal;
const auto C = Signature::Complex;

}  // namespace

TEST_CASE("rational formatting") {
    CHECK(to_string(q(5, 4)) == "5/4");
    CHECK(to_string(q(10)) == "10");
    CHECK(to_decimal(q(5, 14)) == "0.357142857143");
    CHECK(to_decimal(q(-1, 3), 3) == "-0.333");
    CHECK(parse_rational("59/14") == q(59, 14));
    CHECK(parse_rational("7") == 7);
}

TEST_CASE("masses by component count") {
    CHECK(mass_sigma_r(2, 1) == q(7, 24));
    CHECK(mass_sigma_r(5, 3) == q(2, 15));
    CHECK(mass_sigma_r(7, 1) == q(104, 343));
    for (i64 p : primes_up_to(100)) {
        CHECK(mass_sigma_r(p, 1) + mass_sigma_r(p, 2) + mass_sigma_r(p, 3) == 1 - Rational(1) / (p * p * p));
        CHECK(mu_total(p) == 1 - Rational(1) / (p * p * p));
        Rational by_descriptor = 0;
        for (const auto& t : all_descriptors()) by_descriptor += mass_descriptor(p, t);
        CHECK(by_descriptor == mu_total(p));
        CHECK(mass_condition(p, std::nullopt) == mu_total(p));
    }
}

TEST_CASE("tame algebras enumerated by hand") {
    CHECK(mass_tame_bruteforce(5, 3) == q(2, 15));
    CHECK(mass_tame_bruteforce(7, 1) == q(104, 343));
    CHECK(mass_tame_bruteforce(11, 1) + mass_tame_bruteforce(11, 2) + mass_tame_bruteforce(11, 3) == 1 - q(1, 1331));
    for (i64 p : {5, 7, 11, 13})
        for (int r = 1; r <= 3; ++r) CHECK(mass_tame_bruteforce(p, r) == mass_sigma_r(p, r));
    CHECK_THROWS_AS(mass_tame_bruteforce(3, 1), WildPrimeError);
    CHECK_THROWS_AS(mass_tame_bruteforce(2, 2), WildPrimeError);
}

TEST_CASE("tilde masses") {
    CHECK(tilde_ratio_single(1) == 1);
    CHECK(tilde_ratio_single(2) == q(1, 2));
    CHECK(tilde_ratio_single(3) == q(1, 4));
    CHECK(tilde_ratio_all(2) == q(9, 14));
    CHECK(tilde_ratio_all(3) == q(5, 8));
    for (i64 p : primes_up_to(100)) {
        const Rational p3 = Rational(p * p * p);
        CHECK(tilde_mass_component_sum(p) == tilde_mass_all(p));
        CHECK(tilde_mass_all(p) == (5 * p3 - p * p + 4 * p - 8) / (8 * p3));
        CHECK(tilde_ratio_all(p) == Rational(5 * p * p + 4 * p + 8) / (8 * (p * p + p + 1)));
        Rational weighted = 0;
        for (int r = 1; r <= 3; ++r) weighted += tilde_ratio_single(r) * mass_sigma_r(p, r);
        CHECK(tilde_ratio_all(p) * mu_total(p) == weighted);
    }
}

TEST_CASE("averages with S empty") {
    CHECK(predict_cl_avg(R, false, {}) == q(5, 4));
    CHECK(predict_cl_avg(C, false, {}) == q(3, 2));
    CHECK(predict_cl_avg(R, true, {}) == 2);
    CHECK(predict_cl_avg(C, true, {}) == q(3, 2));
    CHECK(predict_selmer_avg(R, {}) == 10);
    CHECK(predict_selmer_avg(C, {}) == 6);
    CHECK(predict_2nu_avg({}) == 1);
    CHECK(predict_2nu_cl_avg(R, false, {}) == q(5, 4));
    CHECK(predict_cor13_bound({}) == 0);
    CHECK(predict_cl_avg_local(C, false, LocalConditionSet{}) == q(3, 2));
}

TEST_CASE("averages with S = {2}") {
    CHECK(predict_cl_avg(C, false, {2}) == q(37, 28));
    CHECK(predict_cl_avg(R, true, {2}) == q(23, 14));
    CHECK(predict_selmer_avg(R, {2}) == q(236, 7));
    CHECK(predict_2nu_avg({2}) == q(26, 7));
    CHECK(predict_fixed_nu(R, false, 1, 1) == q(5, 2));
    CHECK(predict_2nu_cl_avg(R, false, {2}) == q(59, 14));
    CHECK(predict_2nu_cl_avg(C, false, {2}) == q(33, 7));
    CHECK(predict_2nu_cl_avg(R, true, {2}) == q(40, 7));
    CHECK(predict_cor13_bound({2}) == q(5, 14));
    CHECK(predict_cor13_bound({2, 3}) == q(67, 112));
    for (auto sig : {R, C})
        for (bool plus : {false, true})
            CHECK(predict_cl_avg_local(sig, plus, LocalConditionSet::all({2, 3})) == predict_cl_avg(sig, plus, {2, 3}));
}

TEST_CASE("K-group table") {
    const std::vector<Rational> table{predict_kgroup_avg(R, 0), predict_kgroup_avg(C, 0), predict_kgroup_avg(R, 1),
                                      predict_kgroup_avg(C, 1), predict_kgroup_avg(R, 2)};
    CHECK(table == std::vector<Rational>{q(59, 28), q(33, 14), q(118, 7), q(33, 7), q(20, 7)});
    CHECK(predict_kgroup_avg(R, 3) == q(20, 7));
    CHECK(predict_kgroup_avg(C, 2) == q(33, 14));
    CHECK(predict_kgroup_avg(C, 3) == q(33, 14));
    // rank offsets: n = 1 doubles r1 times, n = 2, 3 use the narrow group
    CHECK(predict_kgroup_avg(R, 0) * 2 == predict_2nu_cl_avg(R, false, {2}));
    CHECK(predict_kgroup_avg(R, 1) == predict_kgroup_avg(R, 0) * 8);
    CHECK(predict_kgroup_avg(C, 1) == predict_kgroup_avg(C, 0) * 2);
    CHECK(predict_kgroup_avg(R, 2) * 2 == predict_2nu_cl_avg(R, true, {2}));
}

TEST_CASE("conditioned averages") {
    CHECK(predict_cl_avg_conditioned(R, false, 0) == q(5, 4));
    CHECK(predict_cl_avg_conditioned(R, false, 1) == q(9, 8));
    CHECK(predict_cl_avg_conditioned(C, false, 0) == q(3, 2));
    CHECK(predict_cl_avg_conditioned(R, false, 2) == q(17, 16));
    CHECK(predict_cl_avg_conditioned(R, true, 0) == 2);
    for (auto sig : {R, C})
        for (bool plus : {false, true})
            for (int r = 0; r < 6; ++r)
                CHECK(predict_cl_avg_conditioned(sig, plus, r + 1) < predict_cl_avg_conditioned(sig, plus, r));

    LocalConditionSet split;
    split.conditions[2] = std::set<SplittingType>{parse_splitting("split")};
    CHECK(predict_cl_avg_local(R, false, split) == predict_cl_avg_conditioned(R, false, 2));
    LocalConditionSet inert;
    inert.conditions[2] = std::set<SplittingType>{parse_splitting("inert")};
    CHECK(predict_cl_avg_local(C, false, inert) == predict_cl_avg_conditioned(C, false, 0));
}

TEST_CASE("adding primes lowers the prediction") {
    PrimeSet S;
    Rational prev = predict_cl_avg(R, false, S);
    for (i64 p : {2, 3, 5, 7, 11}) {
        S.push_back(p);
        Rational cur = predict_cl_avg(R, false, S);
        CHECK(cur < prev);
        CHECK(cur > 1);
        prev = cur;
    }
}

TEST_CASE("fixed nu ranges") {
    CHECK_THROWS_AS(predict_fixed_nu(R, false, 1, 4), RangeError);
    CHECK_THROWS_AS(predict_fixed_nu(R, false, 1, 0), RangeError);
    CHECK_NOTHROW(predict_fixed_nu(R, false, 2, 6));
    CHECK(predict_cl_avg_fixed_nu(R, false, 1, 1) * 2 == predict_fixed_nu(R, false, 1, 1));
}

TEST_CASE("field counts") {
    CHECK(abs(zeta3() - Real50("1.2020569031595942853997381615114499907649862923405")) < Real50("1e-40"));
    CHECK(abs(predict_field_count(R, Real50(1000000)) - Real50(1000000) / (12 * zeta3())) < Real50("1e-30"));
    CHECK(abs(predict_field_count(R, Real50(1000000)) - Real50("69325.4")) < 1);
    CHECK(abs(predict_field_count(C, Real50(10000)) - Real50(10000) / (4 * zeta3())) < Real50("1e-30"));
    CHECK(abs(predict_field_count(C, Real50(10000)) - Real50("2079.8")) < Real50("0.1"));
    CHECK(abs(predict_quartic_count(4, Real50(1000000)) - Real50("17331.3")) < 1);
}
