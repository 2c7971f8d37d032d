#include "cubic/group.hpp"

#include <sstream>

namespace cubic {

i64 AbelianGroupData::order() const {
    i64 h = 1;
    for (i64 d : divisors) h = mul_checked(h, d);
    return h;
}

std::vector<i64> AbelianGroupData::dlog_of(const std::vector<i64>& exps) const {
    std::vector<i64> out(divisors.size(), 0);
    for (std::size_t j = 0; j < exps.size(); ++j) {
        if (exps[j] == 0) continue;
        for (std::size_t i = 0; i < divisors.size(); ++i)
            out[i] = mod(out[i] + static_cast<i64>(static_cast<i128>(mod(exps[j], divisors[i])) * dlog[j][i] % divisors[i]),
                         divisors[i]);
    }
    return out;
}

namespace {

// inverse of a unimodular matrix by exact elimination over the integers
IntMatrix unimodular_inverse(const IntMatrix& V) {
    std::size_t n = V.size();
    IntMatrix A = V, B(n, std::vector<i64>(n, 0));
    for (std::size_t i = 0; i < n; ++i) B[i][i] = 1;
    // column-style Euclid on rows of A, mirrored on B, until A is the identity
    for (std::size_t c = 0; c < n; ++c) {
        for (;;) {
            std::size_t piv = n;
            for (std::size_t i = c; i < n; ++i)
                if (A[i][c] != 0 && (piv == n || abs64(A[i][c]) < abs64(A[piv][c]))) piv = i;
            if (piv == n) throw std::logic_error("unimodular_inverse: singular");
            std::swap(A[c], A[piv]);
            std::swap(B[c], B[piv]);
            bool done = true;
            for (std::size_t i = c + 1; i < n; ++i) {
                if (A[i][c] == 0) continue;
                i64 q = A[i][c] / A[c][c];
                for (std::size_t j = 0; j < n; ++j) {
                    A[i][j] = sub_checked(A[i][j], mul_checked(q, A[c][j]));
                    B[i][j] = sub_checked(B[i][j], mul_checked(q, B[c][j]));
                }
                if (A[i][c] != 0) done = false;
            }
            if (done) break;
        }
    }
    for (std::size_t c = n; c-- > 0;) {
        if (A[c][c] < 0) {
            for (std::size_t j = 0; j < n; ++j) {
                A[c][j] = -A[c][j];
                B[c][j] = -B[c][j];
            }
        }
        for (std::size_t i = 0; i < c; ++i) {
            i64 q = A[i][c];
            if (q == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                A[i][j] = sub_checked(A[i][j], mul_checked(q, A[c][j]));
                B[i][j] = sub_checked(B[i][j], mul_checked(q, B[c][j]));
            }
        }
    }
    // rows of B now satisfy B V = I
    return B;
}

}  // namespace

AbelianGroupData group_from_relations(const IntMatrix& rows, std::size_t nbase, std::vector<i64> base_primes,
                                      bool with_generators) {
    AbelianGroupData G;
    G.base_primes = std::move(base_primes);
    G.dlog.assign(nbase, {});
    if (nbase == 0) return G;
    SmithForm S = smith_form(rows, nbase);
    std::vector<std::size_t> keep;
    for (std::size_t t = 0; t < nbase; ++t) {
        if (S.diag[t] == 0) throw std::runtime_error("group_from_relations: relation lattice is not of full rank");
        if (S.diag[t] != 1) keep.push_back(t);
    }
    for (std::size_t t : keep) G.divisors.push_back(S.diag[t]);
    for (std::size_t j = 0; j < nbase; ++j) {
        G.dlog[j].resize(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) G.dlog[j][i] = mod(S.V[j][keep[i]], G.divisors[i]);
    }
    if (with_generators && !keep.empty()) {
        IntMatrix W = unimodular_inverse(S.V);
        for (std::size_t t : keep) G.generators.push_back(W[t]);
    }
    return G;
}

AbelianGroupData quotient_by_base(const AbelianGroupData& G, const std::vector<std::size_t>& base_indices) {
    std::size_t k = G.divisors.size();
    AbelianGroupData Q;
    Q.base_primes = G.base_primes;
    Q.dlog.assign(G.dlog.size(), {});
    if (k == 0) return Q;
    IntMatrix rows;
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<i64> r(k, 0);
        r[i] = G.divisors[i];
        rows.push_back(r);
    }
    for (std::size_t j : base_indices) rows.push_back(G.dlog[j]);
    SmithForm S = smith_form(rows, k);
    std::vector<std::size_t> keep;
    for (std::size_t t = 0; t < k; ++t)
        if (S.diag[t] != 1) keep.push_back(t);
    for (std::size_t t : keep) Q.divisors.push_back(S.diag[t]);
    for (std::size_t j = 0; j < G.dlog.size(); ++j) {
        Q.dlog[j].assign(keep.size(), 0);
        for (std::size_t i = 0; i < keep.size(); ++i) {
            i128 acc = 0;
            for (std::size_t l = 0; l < k; ++l) acc += static_cast<i128>(G.dlog[j][l]) * S.V[l][keep[i]];
            Q.dlog[j][i] = static_cast<i64>(((acc % Q.divisors[i]) + Q.divisors[i]) % Q.divisors[i]);
        }
    }
    return Q;
}

int two_rank(const AbelianGroupData& G) {
    int r = 0;
    for (i64 d : G.divisors)
        if (d % 2 == 0) ++r;
    return r;
}

i64 two_torsion_card(const AbelianGroupData& G) { return i64{1} << two_rank(G); }

std::string divisors_string(const std::vector<i64>& d) {
    std::string s = "[";
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(d[i]);
    }
    return s + "]";
}

std::vector<i64> parse_divisors(const std::string& s) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw std::invalid_argument("bad divisor list '" + s + "'");
    std::vector<i64> out;
    std::istringstream in(s.substr(1, s.size() - 2));
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::size_t pos = 0;
        i64 v = std::stoll(tok, &pos);
        if (pos != tok.size() || v < 2) throw std::invalid_argument("bad divisor '" + tok + "'");
        if (!out.empty() && v % out.back() != 0) throw std::invalid_argument("divisor chain broken in '" + s + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace cubic
