#include "cubic/record.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "cubic/class_group.hpp"
#include "cubic/errors.hpp"
#include "cubic/field.hpp"
#include "cubic/oracle.hpp"
#include "cubic/selmer.hpp"

namespace cubic {

const SInvariants& FieldInvariants::at(const PrimeSet& S) const {
    auto it = by_s.find(S);
    if (it == by_s.end()) throw std::out_of_range("no invariants stored for S = {" + to_string(S) + "}");
    return it->second;
}

PrimeSet record_primes(const std::vector<PrimeSet>& s_sets) {
    PrimeSet out{2, 3};
    for (const auto& S : s_sets) out.insert(out.end(), S.begin(), S.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CubicFieldRecord make_record(const BinaryCubicForm& f, const PrimeSet& primes) {
    CubicFieldRecord r;
    r.form = f;
    r.disc = disc(f);
    r.signature = r.disc > 0 ? Signature::TotallyReal : Signature::Complex;
    r.is_cyclic = is_square(r.disc);
    CubicRing ring = ring_of(f);
    for (i64 p : primes) r.splitting[p] = splitting_type(ring, p);
    return r;
}

FieldInvariants compute_invariants(const BinaryCubicForm& f, const InvariantOptions& opt) {
    FieldInvariants out;
    NumberField K(f);
    const PrimeSet primes = record_primes(opt.s_sets);
    std::vector<PrimeSet> sets = opt.s_sets;
    if (std::find(sets.begin(), sets.end(), PrimeSet{}) == sets.end()) sets.insert(sets.begin(), PrimeSet{});

    std::unique_ptr<ClassGroupComputation> C;
    try {
        C = std::make_unique<ClassGroupComputation>(K, primes);
    } catch (const CertificationError&) {
        out.status = FieldStatus::CertificationFailed;
        return out;
    }
    const AbelianGroupData& cl = C->class_group();
    const AbelianGroupData& clp = C->narrow_class_group();
    for (const auto& S : sets) {
        SInvariants si;
        AbelianGroupData q = C->s_quotient(cl, S);
        si.cl_s = q.divisors;
        si.cl_plus_s = C->s_quotient(clp, S).divisors;
        int nu = 0;
        for (i64 p : S) nu += splitting_type(K.ring(), p).r();
        i64 formula = selmer_size_formula(K.signature(), nu, two_torsion_card(q));
        si.selmer_formula = std::countr_zero(static_cast<u64>(formula));
        try {
            SUnitData u = C->s_unit_data(S);
            si.sign_rank = u.sign_rank;
            si.unit_signs = u.signature_matrix;
            si.selmer_exact = u.mod_squares_dim + two_rank(q);
            si.selmer_direct = C->selmer_direct_dim(S);
            si.saturated = true;
        } catch (const SaturationError&) {
            si.saturated = false;
        }
        out.by_s.emplace(S, std::move(si));
    }

    if (opt.oracle_threshold > 0 && std::abs(K.disc()) <= opt.oracle_threshold) {
        ClassGroupOracle O(K, primes, opt.oracle_threshold);
        bool agree = true;
        for (const auto& [S, si] : out.by_s) {
            agree = agree && O.s_quotient(O.class_group(), S).divisors == si.cl_s;
            agree = agree && O.s_quotient(O.narrow_class_group(), S).divisors == si.cl_plus_s;
        }
        out.oracle = agree ? OracleCheck::Agree : OracleCheck::Disagree;
    }
    return out;
}

int record_k_rank(const CubicFieldRecord& r, int n_mod_4) {
    if (!r.inv) throw std::logic_error("record has no invariants");
    const SInvariants& two = r.inv->at({2});
    KInputs in;
    in.r1 = r.signature == Signature::TotallyReal ? 3 : 1;
    in.places_above_2 = r.splitting.at(2).r();
    in.cl_rank = two_rank(AbelianGroupData{two.cl_s, {}, {}, {}});
    in.narrow_rank = two_rank(AbelianGroupData{two.cl_plus_s, {}, {}, {}});
    return k_rank(in, n_mod_4 == 0 ? 4 : n_mod_4).rank;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string bits_string(const std::vector<u64>& rows, int width) {
    if (rows.empty()) return "-";
    std::string out;
    for (u64 r : rows) {
        if (!out.empty()) out += ',';
        for (int i = 0; i < width; ++i) out += (r >> i) & 1 ? '1' : '0';
    }
    return out;
}

std::vector<u64> parse_bits(const std::string& s) {
    std::vector<u64> out;
    if (s == "-") return out;
    for (const auto& tok : split(s, ',')) {
        if (tok.empty() || tok.size() > 3) throw std::invalid_argument("bad sign row '" + tok + "'");
        u64 v = 0;
        for (std::size_t i = 0; i < tok.size(); ++i) {
            if (tok[i] == '1') v |= u64(1) << i;
            else if (tok[i] != '0') throw std::invalid_argument("bad sign row '" + tok + "'");
        }
        out.push_back(v);
    }
    return out;
}

int parse_dim(const std::string& s) { return s == "x" ? -1 : std::stoi(s); }
std::string dim_string(int d) { return d < 0 ? "x" : std::to_string(d); }

}  // namespace

std::string serialize(const CubicFieldRecord& r) {
    std::ostringstream o;
    o << r.form.a << ',' << r.form.b << ',' << r.form.c << ',' << r.form.d << '\t' << r.disc << '\t'
      << (r.signature == Signature::TotallyReal ? "real" : "complex") << '\t' << (r.is_cyclic ? 1 : 0) << '\t';
    bool first = true;
    for (const auto& [p, t] : r.splitting) {
        if (!first) o << ';';
        first = false;
        o << p << ':' << to_string(t);
    }
    if (!r.inv) {
        o << "\t-";
        return o.str();
    }
    const FieldInvariants& inv = *r.inv;
    o << '\t' << (inv.status == FieldStatus::Ok ? "ok" : "cert");
    o << '\t' << (inv.oracle == OracleCheck::Skipped ? "-" : inv.oracle == OracleCheck::Agree ? "agree" : "disagree");
    const int width = r.signature == Signature::TotallyReal ? 3 : 1;
    for (const auto& [S, si] : inv.by_s) {
        o << "\t{" << to_string(S) << "}|" << divisors_string(si.cl_s) << '|' << divisors_string(si.cl_plus_s) << '|'
          << (si.saturated ? 1 : 0) << '|' << si.sign_rank << '|' << bits_string(si.unit_signs, width) << '|'
          << dim_string(si.selmer_formula) << '/' << dim_string(si.selmer_exact) << '/' << dim_string(si.selmer_direct);
    }
    return o.str();
}

CubicFieldRecord deserialize(const std::string& line, std::size_t line_no) {
    try {
        auto cols = split(line, '\t');
        if (cols.size() < 6) throw std::invalid_argument("expected at least 6 fields");
        CubicFieldRecord r;
        auto coeffs = split(cols[0], ',');
        if (coeffs.size() != 4) throw std::invalid_argument("bad form '" + cols[0] + "'");
        r.form = {std::stoll(coeffs[0]), std::stoll(coeffs[1]), std::stoll(coeffs[2]), std::stoll(coeffs[3])};
        std::size_t used = 0;
        r.disc = std::stoll(cols[1], &used);
        if (used != cols[1].size() || r.disc != disc(r.form)) throw std::invalid_argument("discriminant does not match form");
        if (cols[2] == "real") r.signature = Signature::TotallyReal;
        else if (cols[2] == "complex") r.signature = Signature::Complex;
        else throw std::invalid_argument("bad signature '" + cols[2] + "'");
        if ((r.disc > 0) != (r.signature == Signature::TotallyReal)) throw std::invalid_argument("signature/disc mismatch");
        if (cols[3] != "0" && cols[3] != "1") throw std::invalid_argument("bad cyclic flag");
        r.is_cyclic = cols[3] == "1";
        if (!cols[4].empty())
            for (const auto& item : split(cols[4], ';')) {
                auto colon = item.find(':');
                if (colon == std::string::npos) throw std::invalid_argument("bad splitting '" + item + "'");
                r.splitting[std::stoll(item.substr(0, colon))] = parse_splitting(item.substr(colon + 1));
            }
        if (cols[5] == "-") {
            if (cols.size() != 6) throw std::invalid_argument("trailing fields after '-'");
            return r;
        }
        FieldInvariants inv;
        if (cols[5] == "ok") inv.status = FieldStatus::Ok;
        else if (cols[5] == "cert") inv.status = FieldStatus::CertificationFailed;
        else throw std::invalid_argument("bad status '" + cols[5] + "'");
        if (cols.size() < 7) throw std::invalid_argument("missing oracle field");
        if (cols[6] == "-") inv.oracle = OracleCheck::Skipped;
        else if (cols[6] == "agree") inv.oracle = OracleCheck::Agree;
        else if (cols[6] == "disagree") inv.oracle = OracleCheck::Disagree;
        else throw std::invalid_argument("bad oracle field '" + cols[6] + "'");
        for (std::size_t i = 7; i < cols.size(); ++i) {
            auto parts = split(cols[i], '|');
            if (parts.size() != 7 || parts[0].size() < 2 || parts[0].front() != '{' || parts[0].back() != '}')
                throw std::invalid_argument("bad S block '" + cols[i] + "'");
            PrimeSet S = parse_prime_set(parts[0].substr(1, parts[0].size() - 2));
            SInvariants si;
            si.cl_s = parse_divisors(parts[1]);
            si.cl_plus_s = parse_divisors(parts[2]);
            if (parts[3] != "0" && parts[3] != "1") throw std::invalid_argument("bad saturation flag");
            si.saturated = parts[3] == "1";
            si.sign_rank = std::stoi(parts[4]);
            si.unit_signs = parse_bits(parts[5]);
            auto dims = split(parts[6], '/');
            if (dims.size() != 3) throw std::invalid_argument("bad Selmer dims '" + parts[6] + "'");
            si.selmer_formula = parse_dim(dims[0]);
            si.selmer_exact = parse_dim(dims[1]);
            si.selmer_direct = parse_dim(dims[2]);
            if (!inv.by_s.emplace(S, std::move(si)).second) throw std::invalid_argument("repeated S block");
        }
        if (inv.status == FieldStatus::Ok && !inv.by_s.count({})) throw std::invalid_argument("missing S = {} block");
        r.inv = std::move(inv);
        return r;
    } catch (const CorruptRecordError&) {
        throw;
    } catch (const std::exception& e) {
        throw CorruptRecordError(line_no, e.what());
    }
}

std::vector<CubicFieldRecord> enumerate(i64 X, SignatureFilter filter, bool include_cyclic, unsigned threads) {
    EnumerateOptions opt;
    opt.max_abs_disc = X;
    opt.signature = filter;
    opt.include_cyclic = include_cyclic;
    opt.threads = threads;
    const PrimeSet primes{2, 3};
    std::vector<CubicFieldRecord> out;
    for (const auto& f : enumerate_forms(opt)) out.push_back(make_record(f, primes));
    return out;
}

}  // namespace cubic
