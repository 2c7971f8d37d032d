#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "cubic/forms.hpp"
#include "cubic/record.hpp"
#include "oracles.hpp"

using namespace cubic;

namespace {

GL2 random_unimodular(std::mt19937_64& rng, int steps) {
    GL2 g{1, 0, 0, 1};
    std::uniform_int_distribution<int> pick(0, 3), shift(-2, 2);
    for (int i = 0; i < steps; ++i) {
        GL2 e{1, 0, 0, 1};
        switch (pick(rng)) {
            case 0: e = {1, shift(rng), 0, 1}; break;
            case 1: e = {1, 0, shift(rng), 1}; break;
            case 2: e = {0, 1, 1, 0}; break;
            default: e = {-1, 0, 0, 1}; break;
        }
        g = {g.p * e.p + g.q * e.r, g.p * e.q + g.q * e.s, g.r * e.p + g.s * e.r, g.r * e.q + g.s * e.s};
    }
    return g;
}

BinaryCubicForm random_form(std::mt19937_64& rng, int h) {
    std::uniform_int_distribution<i64> c(-h, h);
    return {c(rng), c(rng), c(rng), c(rng)};
}

BinaryCubicForm random_irreducible(std::mt19937_64& rng, i64 max_disc) {
    for (;;) {
        BinaryCubicForm f = random_form(rng, 12);
        const i64 D = disc(f);
        if (D != 0 && abs64(D) < max_disc && is_irreducible(f)) return f;
    }
}

// characteristic polynomial (t, s, n) of multiplication by x on a ring table
std::array<i128, 3> charpoly(const CubicRing& R, const Elem& x) {
    auto M = R.mult_matrix(x);
    i128 m[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = M[i][j];
    i128 t = m[0][0] + m[1][1] + m[2][2];
    i128 s = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] + m[1][1] * m[2][2] -
             m[1][2] * m[2][1];
    i128 n = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return {t, s, n};
}

}  // namespace

TEST_CASE("closed-form discriminant on small examples") {
    CHECK(disc({1, 0, -1, 0}) == 4);
    CHECK(disc({1, 0, -1, -1}) == -23);
    CHECK(disc({1, -1, -3, 1}) == 148);
    CHECK(oracle::resultant_disc({1, 0, -1, -1}) == -23);
    CHECK(oracle::resultant_disc({1, -1, -3, 1}) == 148);
}

TEST_CASE("discriminant matches the resultant for random forms") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        BinaryCubicForm f = random_form(rng, 40);
        if (f.a == 0) continue;
        CHECK(oracle::resultant_disc(f) == disc(f));
    }
}

TEST_CASE("discriminant is invariant under unimodular substitution") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 1000; ++i) {
        BinaryCubicForm f = random_form(rng, 20);
        GL2 g = random_unimodular(rng, 4);
        CHECK(disc(transform(f, g)) == disc(f));
    }
}

TEST_CASE("reduce is idempotent and constant on classes") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 1000; ++i) {
        BinaryCubicForm f = random_irreducible(rng, 1000000);
        BinaryCubicForm r = reduce(f);
        CHECK(is_reduced(r));
        CHECK(reduce(r) == r);
        CHECK(disc(r) == disc(f));
        GL2 g = random_unimodular(rng, 5);
        CHECK(reduce(transform(f, g)) == r);
    }
}

TEST_CASE("every small translate of x^3 - x - 1 reduces to one form") {
    const BinaryCubicForm f{1, 0, -1, -1};
    const BinaryCubicForm r = reduce(f);
    int seen = 0;
    for (i64 p = -3; p <= 3; ++p)
        for (i64 q = -3; q <= 3; ++q)
            for (i64 s = -3; s <= 3; ++s)
                for (i64 t = -3; t <= 3; ++t) {
                    GL2 g{p, q, s, t};
                    if (abs64(g.det()) != 1) continue;
                    ++seen;
                    CHECK(reduce(transform(f, g)) == r);
                }
    CHECK(seen > 100);
}

TEST_CASE("reducible forms are rejected") {
    CHECK_FALSE(is_irreducible({1, 0, -1, 0}));
    CHECK_THROWS_AS(reduce({1, 0, -1, 0}), ReducibleFormError);
    CHECK(is_irreducible({1, 0, -1, -1}));
}

TEST_CASE("signature follows the sign of the discriminant") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 300; ++i) {
        BinaryCubicForm f = random_irreducible(rng, 1000000);
        const auto rt = roots(f);
        if (disc(f) > 0) {
            CHECK(signature_of(f) == Signature::TotallyReal);
            CHECK(rt.nreal == 3);
        } else {
            CHECK(signature_of(f) == Signature::Complex);
            CHECK(rt.nreal == 1);
        }
    }
}

TEST_CASE("ring tables are associative with the form's discriminant") {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 1000; ++i) {
        BinaryCubicForm f = random_form(rng, 30);
        CubicRing R = ring_of(f);
        CHECK(R.is_associative());
        CHECK(R.table_discriminant() == disc(f));
        CHECK(R.discriminant == disc(f));
        std::uniform_int_distribution<i64> c(-5, 5);
        Elem x{c(rng), c(rng), c(rng)}, y{c(rng), c(rng), c(rng)};
        CHECK(R.mul(x, y) == R.mul(y, x));
    }
}

TEST_CASE("ring of x^3 - x - 1 is Z[x]/(x^3 - x - 1)") {
    const CubicRing R = ring_of({1, 0, -1, -1});
    // look for theta with that characteristic polynomial and {1, theta, theta^2} a basis
    bool found = false;
    for (i64 a = -3; a <= 3 && !found; ++a)
        for (i64 b = -3; b <= 3 && !found; ++b)
            for (i64 c = -3; c <= 3 && !found; ++c) {
                Elem th{a, b, c};
                auto cp = charpoly(R, th);
                if (cp[0] != 0 || cp[1] != -1 || cp[2] != 1) continue;
                Elem th2 = R.mul(th, th);
                i128 det = th[1] * th2[2] - th[2] * th2[1];
                if (det == 1 || det == -1) found = true;
            }
    CHECK(found);
}

TEST_CASE("maximality") {
    CHECK(is_maximal_at(BinaryCubicForm{1, 0, -1, -1}, 23));
    CHECK(is_maximal({1, 0, -1, -1}));
    CHECK(is_maximal({1, -1, -3, 1}));
    for (i64 p : {2, 3, 5, 7}) {
        BinaryCubicForm f{p, 0, -p, -p};
        CHECK_FALSE(is_maximal_at(f, p));
    }
    std::mt19937_64 rng(16);
    for (int i = 0; i < 300; ++i) {
        BinaryCubicForm f = random_irreducible(rng, 1000000);
        const i64 D = abs64(disc(f));
        bool squarefree = true;
        for (auto [p, e] : factor(D))
            if (e > 1) squarefree = false;
        if (!squarefree) continue;
        for (auto [p, e] : factor(D)) CHECK(is_maximal_at(f, p));
        CHECK(is_maximal(f));
    }
}

TEST_CASE("tiny enumerations") {
    auto complex = enumerate(30, SignatureFilter::Complex, false);
    REQUIRE(complex.size() == 1);
    CHECK(complex[0].disc == -23);

    std::vector<i64> first;
    for (const auto& r : enumerate(50, SignatureFilter::Complex, false)) first.push_back(r.disc);
    CHECK(first == std::vector<i64>{-23, -31, -44});

    auto real = enumerate(200, SignatureFilter::TotallyReal, false);
    REQUIRE(real.size() == 1);
    CHECK(real[0].disc == 148);

    std::vector<i64> with_cyclic;
    for (const auto& r : enumerate(200, SignatureFilter::TotallyReal, true)) {
        with_cyclic.push_back(r.disc);
        CHECK(r.is_cyclic == is_square(r.disc));
    }
    CHECK(with_cyclic == std::vector<i64>{49, 81, 148, 169});
}

TEST_CASE("enumerated forms are reduced, maximal and ordered") {
    EnumerateOptions opt;
    opt.max_abs_disc = 5000;
    auto forms = enumerate_forms(opt);
    REQUIRE(!forms.empty());
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const auto& f = forms[i];
        CHECK(is_reduced(f));
        CHECK(is_maximal(f));
        CHECK(is_irreducible(f));
        CHECK(abs64(disc(f)) < 5000);
        if (i) CHECK(field_order(forms[i - 1], disc(forms[i - 1]), f, disc(f)));
    }
    opt.threads = 3;
    CHECK(enumerate_forms(opt) == forms);
}

TEST_CASE("discriminant ranges partition the enumeration") {
    EnumerateOptions all;
    all.max_abs_disc = 8000;
    auto whole = enumerate_forms(all);
    EnumerateOptions lo = all, hi = all;
    lo.max_abs_disc = 3100;
    hi.min_abs_disc = 3100;
    auto a = enumerate_forms(lo), b = enumerate_forms(hi);
    a.insert(a.end(), b.begin(), b.end());
    CHECK(a == whole);
}

TEST_CASE("enumeration matches the monic-polynomial search") {
    const i64 X = 1500;
    EnumerateOptions opt;
    opt.max_abs_disc = X + 1;
    std::vector<oracle::FieldKey> mine;
    for (const auto& f : enumerate_forms(opt)) mine.push_back(oracle::form_key(f, disc(f)));
    std::sort(mine.begin(), mine.end());
    CHECK(std::adjacent_find(mine.begin(), mine.end()) == mine.end());
    auto ref = oracle::monic_fields(X);
    CHECK(mine.size() == ref.size());
    CHECK(mine == ref);
}
