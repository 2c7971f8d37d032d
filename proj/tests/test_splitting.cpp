#include <doctest.h>

#include <random>

#include "cubic/forms.hpp"
#include "cubic/splitting.hpp"
#include "oracles.hpp"

using namespace cubic;

namespace {

const BinaryCubicForm m23{1, 0, -1, -1};

std::map<i64, SplittingType> splits(const BinaryCubicForm& f, const PrimeSet& ps) {
    std::map<i64, SplittingType> out;
    for (i64 p : ps) out[p] = splitting_type(f, p);
    return out;
}

}  // namespace

TEST_CASE("splitting of the -23 field") {
    CHECK(splitting_type(m23, 2) == parse_splitting("inert"));
    CHECK(splitting_type(m23, 2).r() == 1);
    CHECK(splitting_type(m23, 23) == make_splitting({{2, 1}, {1, 1}}));
    CHECK(splitting_type(m23, 23).r() == 2);
    // x^3 - x - 1 has no root mod 2, so 2 is inert
    CHECK(oracle::projective_roots(m23, 2) == 0);
}

TEST_CASE("nu_S and local conditions") {
    auto s = splits(m23, {2, 23});
    CHECK(nu_S(s, {}) == 0);
    CHECK(nu_S(s, {2}) == 1);
    CHECK(nu_S(s, {2, 23}) == 3);

    LocalConditionSet inert, split;
    inert.conditions[2] = std::set<SplittingType>{parse_splitting("inert")};
    split.conditions[2] = std::set<SplittingType>{parse_splitting("split")};
    CHECK(matches_condition(s, inert));
    CHECK_FALSE(matches_condition(s, split));
    CHECK(matches_condition(s, LocalConditionSet::all({2, 23})));
}

TEST_CASE("descriptor text round trip") {
    for (const auto& t : all_descriptors()) {
        CHECK(parse_splitting(to_string(t)) == t);
        int sum = 0;
        for (auto [e, f] : t.parts) sum += e * f;
        CHECK(sum == 3);
    }
    CHECK(all_descriptors().size() == 5);
    CHECK(to_string(parse_splitting("semiramified")) == "2^1+1^1");
    CHECK_THROWS(parse_splitting("2^2"));
    CHECK_THROWS(parse_splitting("bogus"));
    CHECK(parse_prime_set("2,3") == PrimeSet{2, 3});
    CHECK(to_string(PrimeSet{2, 3}) == "2,3");
}

TEST_CASE("splitting agrees with the idempotent decomposition") {
    EnumerateOptions opt;
    opt.max_abs_disc = 20000;
    auto forms = enumerate_forms(opt);
    const auto primes = primes_up_to(49);
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::size_t> fi(0, forms.size() - 1), pi(0, primes.size() - 1);
    for (int i = 0; i < 500; ++i) {
        const auto& f = forms[fi(rng)];
        const i64 p = primes[pi(rng)];
        const CubicRing R = ring_of(f);
        const SplittingType t = splitting_type(R, p);
        CHECK(t == oracle::idempotent_splitting(R, p));
        CHECK(t.ramified() == (disc(f) % p == 0));
    }
}

TEST_CASE("ramified primes are exactly the divisors of the discriminant") {
    EnumerateOptions opt;
    opt.max_abs_disc = 3000;
    for (const auto& f : enumerate_forms(opt)) {
        const i64 D = disc(f);
        for (i64 p : primes_up_to(60)) {
            const auto t = splitting_type(f, p);
            CHECK(t.ramified() == (D % p == 0));
            if (D % p != 0) {
                // unramified: degree-one primes are the projective roots of the form
                int ones = 0;
                for (auto [e, fdeg] : t.parts) ones += fdeg == 1;
                CHECK(ones == oracle::projective_roots(f, p));
            }
        }
    }
}
