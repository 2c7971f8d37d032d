#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cubic/forms.hpp"
#include "cubic/group.hpp"
#include "cubic/splitting.hpp"

namespace cubic {

// invariants attached to one set S of primes
struct SInvariants {
    std::vector<i64> cl_s, cl_plus_s;  // elementary divisors of Cl_S and Cl+_S
    bool saturated = false;
    int sign_rank = 0;
    std::vector<u64> unit_signs;  // sign rows of S-unit generators modulo squares
    // Selmer dimensions by formula, exact sequence and the relation matrix; -1 when unavailable
    int selmer_formula = -1, selmer_exact = -1, selmer_direct = -1;
    bool operator==(const SInvariants&) const = default;
};

enum class FieldStatus { Ok, CertificationFailed };
enum class OracleCheck { Skipped, Agree, Disagree };

struct FieldInvariants {
    FieldStatus status = FieldStatus::Ok;
    OracleCheck oracle = OracleCheck::Skipped;
    std::map<PrimeSet, SInvariants> by_s;  // always contains the empty set
    const SInvariants& at(const PrimeSet& S) const;
    const std::vector<i64>& cl() const { return at({}).cl_s; }
    const std::vector<i64>& cl_plus() const { return at({}).cl_plus_s; }
    bool operator==(const FieldInvariants&) const = default;
};

struct CubicFieldRecord {
    BinaryCubicForm form;
    i64 disc = 0;
    Signature signature = Signature::Complex;
    bool is_cyclic = false;
    std::map<i64, SplittingType> splitting;
    std::optional<FieldInvariants> inv;
    bool operator==(const CubicFieldRecord&) const = default;
};

struct InvariantOptions {
    std::vector<PrimeSet> s_sets{{}, {2}, {2, 3}};
    i64 oracle_threshold = 0;  // cross-check against the oracle when |D| <= threshold
};

// primes whose splitting is stored: 2, 3 and everything in the S-sets
PrimeSet record_primes(const std::vector<PrimeSet>& s_sets);
CubicFieldRecord make_record(const BinaryCubicForm& reduced, const PrimeSet& primes);
FieldInvariants compute_invariants(const BinaryCubicForm& reduced, const InvariantOptions& opt);

// 2-rank of K_{2n}(O_K) at n mod 4 from stored data
int record_k_rank(const CubicFieldRecord& r, int n_mod_4);

// one tab-separated line, no newline
std::string serialize(const CubicFieldRecord& r);
CubicFieldRecord deserialize(const std::string& line, std::size_t line_no);

}  // namespace cubic
