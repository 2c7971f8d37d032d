#include "cubic/splitting.hpp"

#include <algorithm>
#include <sstream>

#include "cubic/linalg.hpp"

namespace cubic {

bool SplittingType::ramified() const {
    return std::any_of(parts.begin(), parts.end(), [](const auto& ef) { return ef.first > 1; });
}

SplittingType make_splitting(std::vector<std::pair<int, int>> parts) {
    std::sort(parts.begin(), parts.end(), std::greater<>());
    int total = 0;
    for (auto [e, f] : parts) {
        if (e < 1 || f < 1) throw std::invalid_argument("splitting part with nonpositive e or f");
        total += e * f;
    }
    if (total != 3) throw std::invalid_argument("splitting parts must satisfy sum e*f = 3");
    return SplittingType{std::move(parts)};
}

std::string to_string(const SplittingType& t) {
    std::string s;
    for (auto [e, f] : t.parts) {
        if (!s.empty()) s += '+';
        s += std::to_string(e) + '^' + std::to_string(f);
    }
    return s;
}

SplittingType parse_splitting(const std::string& s) {
    if (s == "inert") return make_splitting({{1, 3}});
    if (s == "split") return make_splitting({{1, 1}, {1, 1}, {1, 1}});
    if (s == "partial") return make_splitting({{1, 1}, {1, 2}});
    if (s == "semiramified") return make_splitting({{2, 1}, {1, 1}});
    if (s == "totallyramified") return make_splitting({{3, 1}});
    std::vector<std::pair<int, int>> parts;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, '+')) {
        auto pos = tok.find('^');
        if (pos == std::string::npos) throw std::invalid_argument("bad splitting descriptor '" + s + "'");
        parts.emplace_back(std::stoi(tok.substr(0, pos)), std::stoi(tok.substr(pos + 1)));
    }
    return make_splitting(std::move(parts));
}

const std::vector<SplittingType>& all_descriptors() {
    static const std::vector<SplittingType> all = {
        make_splitting({{1, 1}, {1, 1}, {1, 1}}), make_splitting({{1, 1}, {1, 2}}), make_splitting({{1, 3}}),
        make_splitting({{2, 1}, {1, 1}}), make_splitting({{3, 1}})};
    return all;
}

SplittingType splitting_type(const CubicRing& R, i64 p) {
    // Frobenius on O/pO: its fixed space has dimension r_p, its nilpotent kernel is the radical
    IntMatrix F(3), Fk(3);
    u64 q = static_cast<u64>(p);
    while (q < 3) q *= static_cast<u64>(p);
    auto power = [&](Elem x, u64 e) {
        Elem r{1, 0, 0};
        while (e) {
            if (e & 1) r = R.mul_mod(r, x, p);
            x = R.mul_mod(x, x, p);
            e >>= 1;
        }
        return r;
    };
    for (int i = 0; i < 3; ++i) {
        Elem e{0, 0, 0};
        e[i] = 1;
        Elem fp = power(e, static_cast<u64>(p));
        Elem fq = power(e, q);
        F[i] = {fp[0], fp[1], fp[2]};
        F[i][i] = mod(F[i][i] - 1, p);
        Fk[i] = {fq[0], fq[1], fq[2]};
    }
    std::size_t r = left_kernel_mod_p(F, p).size();
    std::size_t rad = left_kernel_mod_p(Fk, p).size();
    if (rad == 0) {
        if (r == 3) return make_splitting({{1, 1}, {1, 1}, {1, 1}});
        if (r == 2) return make_splitting({{1, 1}, {1, 2}});
        return make_splitting({{1, 3}});
    }
    if (rad == 1) return make_splitting({{2, 1}, {1, 1}});
    return make_splitting({{3, 1}});
}

SplittingType splitting_type(const BinaryCubicForm& f, i64 p) { return splitting_type(ring_of(f), p); }

std::string to_string(const PrimeSet& s) {
    std::string out;
    for (i64 p : s) {
        if (!out.empty()) out += ',';
        out += std::to_string(p);
    }
    return out;
}

PrimeSet parse_prime_set(const std::string& s) {
    PrimeSet out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        i64 p = std::stoll(tok);
        if (!is_prime(p)) throw std::invalid_argument("'" + tok + "' is not a prime");
        out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

PrimeSet LocalConditionSet::primes() const {
    PrimeSet out;
    for (const auto& [p, c] : conditions) out.push_back(p);
    return out;
}

LocalConditionSet LocalConditionSet::all(const PrimeSet& S) {
    LocalConditionSet out;
    for (i64 p : S) out.conditions[p] = std::nullopt;
    return out;
}

int nu_S(const std::map<i64, SplittingType>& splitting, const PrimeSet& S) {
    int nu = 0;
    for (i64 p : S) {
        auto it = splitting.find(p);
        if (it == splitting.end()) throw std::out_of_range("nu_S: no splitting type for p=" + std::to_string(p));
        nu += it->second.r();
    }
    return nu;
}

bool matches_condition(const std::map<i64, SplittingType>& splitting, const LocalConditionSet& sigma) {
    for (const auto& [p, allowed] : sigma.conditions) {
        if (!allowed) continue;
        auto it = splitting.find(p);
        if (it == splitting.end()) throw std::out_of_range("matches_condition: no splitting type for p=" + std::to_string(p));
        if (!allowed->count(it->second)) return false;
    }
    return true;
}

}  // namespace cubic
