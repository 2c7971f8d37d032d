#include "cubic/densities.hpp"

#include <algorithm>
#include <functional>

#include "cubic/errors.hpp"

namespace cubic {

using boost::multiprecision::cpp_int;

namespace {

Rational rat(i64 n, i64 d = 1) { return Rational(cpp_int(n), cpp_int(d)); }

Rational inv_pow(i64 p, int k) {
    cpp_int d = 1;
    for (int i = 0; i < k; ++i) d *= p;
    return Rational(cpp_int(1), d);
}

Rational pow2(int k) { return k >= 0 ? Rational(cpp_int(1) << k) : Rational(cpp_int(1), cpp_int(1) << -k); }

void require_prime(i64 p) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
}

// weight of the family: 1/4 totally real, 1/2 complex, 1 narrow totally real
int family_shift(Signature sig, bool plus) {
    if (sig == Signature::Complex) return 1;
    return plus ? 0 : 2;
}

}  // namespace

std::string to_string(const Rational& q) {
    std::string num = boost::multiprecision::numerator(q).str();
    cpp_int den = boost::multiprecision::denominator(q);
    return den == 1 ? num : num + "/" + den.str();
}

std::string to_decimal(const Rational& q, int digits) {
    cpp_int num = boost::multiprecision::numerator(q), den = boost::multiprecision::denominator(q);
    bool neg = num < 0;
    if (neg) num = -num;
    cpp_int scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    cpp_int v = (2 * num * scale + den) / (2 * den);
    std::string s = v.str();
    if (digits > 0) {
        if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits + 1) - s.size(), '0');
        s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    }
    if (neg && v != 0) s.insert(0, "-");
    return s;
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(cpp_int(s));
    cpp_int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in " + s);
    return Rational(cpp_int(s.substr(0, slash)), den);
}

Rational mu_total(i64 p) {
    require_prime(p);
    return 1 - inv_pow(p, 3);
}

Rational mass_sigma_r(i64 p, int r) {
    require_prime(p);
    i64 p2 = p * p, p3 = p2 * p;
    switch (r) {
        case 1: return rat(p3 - p2 + 3 * p - 3, 3 * p3);
        case 2: return rat(p2 + p - 2, 2 * p2);
        case 3: return rat(p - 1, 6 * p);
        default: throw std::invalid_argument("component count must be 1, 2 or 3");
    }
}

Rational mass_descriptor(i64 p, const SplittingType& t) {
    require_prime(p);
    const Rational base = rat(p - 1, p);
    const auto& parts = t.parts;
    using P = std::vector<std::pair<int, int>>;
    if (parts == P{{1, 1}, {1, 1}, {1, 1}}) return base / 6;
    if (parts == P{{1, 2}, {1, 1}}) return base / 2;
    if (parts == P{{1, 3}}) return base / 3;
    if (parts == P{{2, 1}, {1, 1}}) return base * inv_pow(p, 1);
    if (parts == P{{3, 1}}) return base * inv_pow(p, 2);
    throw std::invalid_argument("not a rank-3 splitting descriptor: " + to_string(t));
}

Rational mass_condition(i64 p, const std::optional<std::set<SplittingType>>& sigma) {
    if (!sigma) return mu_total(p);
    Rational m = 0;
    for (const auto& t : *sigma) m += mass_descriptor(p, t);
    return m;
}

Rational mass_tame_bruteforce(i64 p, int r) {
    require_prime(p);
    if (p <= 3) throw WildPrimeError("tame enumeration needs p > 3, got " + std::to_string(p));
    if (r < 1 || r > 3) throw std::invalid_argument("component count must be 1, 2 or 3");
    struct Field {
        int degree, disc_exp;
        i64 aut;
        int id;
    };
    // fields of degree <= 3: Q_{p^f}((zeta p)^{1/e}), zeta up to e-th powers and Frobenius
    std::vector<Field> fields;
    int next_id = 0;
    for (int e = 1; e <= 3; ++e)
        for (int f = 1; e * f <= 3; ++f) {
            i64 q = 1;
            for (int i = 0; i < f; ++i) q *= p;
            i64 g = gcd(static_cast<i64>(e), q - 1);
            std::vector<bool> seen(static_cast<std::size_t>(g), false);
            for (i64 k = 0; k < g; ++k) {
                if (seen[k]) continue;
                i64 orbit = 0;
                for (i64 j = k; !seen[j]; j = (j * p) % g) {
                    seen[j] = true;
                    ++orbit;
                }
                fields.push_back({e * f, f * (e - 1), f * g / orbit, next_id++});
            }
        }
    Rational total = 0;
    // multisets of fields with total degree 3 and r members, chosen in nondecreasing index order
    std::vector<std::size_t> pick;
    std::function<void(std::size_t, int)> rec = [&](std::size_t from, int degree_left) {
        if (degree_left == 0) {
            if (static_cast<int>(pick.size()) != r) return;
            i64 aut = 1;
            int disc = 0;
            for (std::size_t i = 0; i < pick.size(); ++i) {
                aut *= fields[pick[i]].aut;
                disc += fields[pick[i]].disc_exp;
            }
            for (std::size_t i = 0; i < pick.size();) {
                std::size_t j = i;
                while (j < pick.size() && pick[j] == pick[i]) ++j;
                for (std::size_t m = 2; m <= j - i; ++m) aut *= static_cast<i64>(m);
                i = j;
            }
            total += inv_pow(p, disc) / aut;
            return;
        }
        for (std::size_t i = from; i < fields.size(); ++i) {
            if (fields[i].degree > degree_left) continue;
            pick.push_back(i);
            rec(i, degree_left - fields[i].degree);
            pick.pop_back();
        }
    };
    rec(0, 3);
    return rat(p - 1, p) * total;
}

Rational tilde_mass_all(i64 p) {
    require_prime(p);
    i64 p2 = p * p, p3 = p2 * p;
    return rat(5 * p3 - p2 + 4 * p - 8, 8 * p3);
}

Rational tilde_mass_component_sum(i64 p) {
    Rational s = 0;
    for (int r = 1; r <= 3; ++r) s += tilde_ratio_single(r) * mass_sigma_r(p, r);
    return s;
}

Rational tilde_ratio_single(int r) {
    if (r < 1 || r > 3) throw std::invalid_argument("component count must be 1, 2 or 3");
    return pow2(-(r - 1));
}

Rational tilde_ratio_all(i64 p) {
    require_prime(p);
    return rat(5 * p * p + 4 * p + 8, 8 * (p * p + p + 1));
}

Rational tilde_ratio(const LocalConditionSet& sigma) {
    Rational out = 1;
    for (const auto& [p, cond] : sigma.conditions) {
        if (!cond) {
            out *= tilde_ratio_all(p);
            continue;
        }
        Rational num = 0, den = 0;
        for (const auto& t : *cond) {
            Rational m = mass_descriptor(p, t);
            num += tilde_ratio_single(t.r()) * m;
            den += m;
        }
        if (den == 0) throw std::invalid_argument("empty local condition at " + std::to_string(p));
        out *= num / den;
    }
    return out;
}

Rational local_factor(i64 p) {
    require_prime(p);
    return 1 + rat(p * p + 4, 4 * (p * p + p + 1));
}

Rational nu_factor(i64 p) {
    require_prime(p);
    return 2 - rat(1, p * p + p + 1);
}

Rational predict_cl_avg(Signature sig, bool plus, const PrimeSet& S) {
    Rational prod = 1;
    for (i64 p : S) prod *= local_factor(p);
    return 1 + pow2(-(static_cast<int>(S.size()) + family_shift(sig, plus))) * prod;
}

Rational predict_cl_avg_local(Signature sig, bool plus, const LocalConditionSet& sigma) {
    return 1 + pow2(-family_shift(sig, plus)) * tilde_ratio(sigma);
}

Rational predict_cl_avg_conditioned(Signature sig, bool plus, int r) {
    if (r < 0) throw RangeError("r must be nonnegative");
    return 1 + pow2(-(r + family_shift(sig, plus)));
}

Rational predict_selmer_avg(Signature sig, const PrimeSet& S) {
    const int n = static_cast<int>(S.size());
    Rational prod = 1;
    for (i64 p : S) prod *= nu_factor(p);
    return pow2(n + 1) + pow2(n + (sig == Signature::TotallyReal ? 3 : 2)) * prod;
}

Rational predict_2nu_avg(const PrimeSet& S) {
    Rational prod = 1;
    for (i64 p : S) prod *= nu_factor(p);
    return pow2(static_cast<int>(S.size())) * prod;
}

static void check_nu_range(int S_size, int s) {
    if (S_size < 0 || s < S_size || s > 3 * S_size)
        throw RangeError("nu_S = " + std::to_string(s) + " is outside [" + std::to_string(S_size) + ", " +
                         std::to_string(3 * S_size) + "]");
}

Rational predict_cl_avg_fixed_nu(Signature sig, bool plus, int S_size, int s) {
    check_nu_range(S_size, s);
    return predict_cl_avg_conditioned(sig, plus, s - S_size);
}

Rational predict_fixed_nu(Signature sig, bool plus, int S_size, int s) {
    check_nu_range(S_size, s);
    return pow2(s) + pow2(S_size - family_shift(sig, plus));
}

Rational predict_2nu_cl_avg(Signature sig, bool plus, const PrimeSet& S) {
    const int n = static_cast<int>(S.size());
    return pow2(n - family_shift(sig, plus)) + predict_2nu_avg(S);
}

Rational predict_kgroup_avg(Signature sig, int n_mod_4) {
    if (n_mod_4 < 0 || n_mod_4 > 3) throw RangeError("n mod 4 must lie in 0..3");
    const int r1 = sig == Signature::TotallyReal ? 3 : 1;
    // 2-rank = dim Cl_S[2] + r_2 - 1 (+ r1 when n = 1 mod 4), narrow when n = 2, 3 mod 4
    const bool narrow = n_mod_4 >= 2;
    Rational base = predict_2nu_cl_avg(sig, narrow, {2}) / 2;
    return n_mod_4 == 1 ? base * pow2(r1) : base;
}

Rational predict_cor13_bound(const PrimeSet& S) {
    Rational prod = 1;
    for (i64 p : S) prod *= local_factor(p);
    return 1 - pow2(-static_cast<int>(S.size())) * prod;
}

Real50 zeta3() {
    // zeta(3) = 5/2 sum (-1)^(n+1) / (n^3 binom(2n, n)); terms shrink by 1/4 each step
    Real50 sum = 0, binom = 1;
    for (int n = 1; n <= 120; ++n) {
        binom = binom * (2 * n) * (2 * n - 1) / (Real50(n) * n);
        Real50 term = 1 / (Real50(n) * n * n * binom);
        sum += (n % 2 ? term : -term);
    }
    return sum * 5 / 2;
}

static Real50 to_real(const Rational& q) {
    return Real50(boost::multiprecision::numerator(q)) / Real50(boost::multiprecision::denominator(q));
}

Real50 predict_field_count(Signature sig, const Real50& X, const LocalConditionSet& sigma) {
    const int m = sig == Signature::TotallyReal ? 6 : 2;
    Rational ratio = 1;
    for (const auto& [p, cond] : sigma.conditions) ratio *= mass_condition(p, cond) / mu_total(p);
    return X * to_real(ratio) / (2 * m * zeta3());
}

Real50 predict_quartic_count(int real_places, const Real50& X, const LocalConditionSet& tilde_of) {
    int n;
    switch (real_places) {
        case 0: n = 8; break;
        case 2: n = 4; break;
        case 4: n = 24; break;
        default: throw std::invalid_argument("a quartic field has 0, 2 or 4 real places");
    }
    Rational ratio = 1;
    for (const auto& [p, cond] : tilde_of.conditions) {
        Rational m = 0;
        if (!cond) {
            m = tilde_mass_all(p);
        } else {
            for (const auto& t : *cond) m += tilde_ratio_single(t.r()) * mass_descriptor(p, t);
        }
        ratio *= m / mu_total(p);
    }
    return X * to_real(ratio) / (2 * n * zeta3());
}

}  // namespace cubic
