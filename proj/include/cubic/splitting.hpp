#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cubic/forms.hpp"

namespace cubic {

// multiset of (e, f) pairs, kept in descending order
struct SplittingType {
    std::vector<std::pair<int, int>> parts;

    int r() const { return static_cast<int>(parts.size()); }
    bool ramified() const;
    auto operator<=>(const SplittingType&) const = default;
};

SplittingType make_splitting(std::vector<std::pair<int, int>> parts);
std::string to_string(const SplittingType& t);
// accepts "e^f+e^f..." or the aliases inert, split, partial, semiramified, totallyramified
SplittingType parse_splitting(const std::string& s);
const std::vector<SplittingType>& all_descriptors();

SplittingType splitting_type(const CubicRing& ring, i64 p);
SplittingType splitting_type(const BinaryCubicForm& f, i64 p);

using PrimeSet = std::vector<i64>;
std::string to_string(const PrimeSet& s);
PrimeSet parse_prime_set(const std::string& s);

// per prime in S: nullopt means every descriptor
struct LocalConditionSet {
    std::map<i64, std::optional<std::set<SplittingType>>> conditions;

    PrimeSet primes() const;
    static LocalConditionSet all(const PrimeSet& S);
};

int nu_S(const std::map<i64, SplittingType>& splitting, const PrimeSet& S);
bool matches_condition(const std::map<i64, SplittingType>& splitting, const LocalConditionSet& sigma);

}  // namespace cubic
