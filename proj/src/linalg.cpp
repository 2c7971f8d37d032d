#include "cubic/linalg.hpp"

#include <algorithm>
#include <utility>

namespace cubic {

namespace {
struct NoExtra {};
}  // namespace

IntMatrix hnf(const IntMatrix& rows, std::size_t ncols) {
    IncrementalHnf<NoExtra> h(ncols, [](i64, const NoExtra&, i64, const NoExtra&) { return NoExtra{}; });
    for (const auto& r : rows) h.insert(r, NoExtra{}, [](const NoExtra&) {});
    IntMatrix out;
    for (const auto& r : h.rows())
        if (r) out.push_back(r->v);
    return out;
}

SmithForm smith_form(IntMatrix A, std::size_t n) {
    std::size_t m = A.size();
    SmithForm out;
    out.V.assign(n, std::vector<i64>(n, 0));
    for (std::size_t i = 0; i < n; ++i) out.V[i][i] = 1;
    IntMatrix& V = out.V;

    auto swap_cols = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (auto& row : A) std::swap(row[a], row[b]);
        for (auto& row : V) std::swap(row[a], row[b]);
    };
    // col_dst -= q * col_src
    auto col_op = [&](std::size_t dst, std::size_t src, i64 q) {
        for (auto& row : A) row[dst] = sub_checked(row[dst], mul_checked(q, row[src]));
        for (auto& row : V) row[dst] = sub_checked(row[dst], mul_checked(q, row[src]));
    };
    auto row_op = [&](std::size_t dst, std::size_t src, i64 q, std::size_t from) {
        for (std::size_t j = from; j < n; ++j) A[dst][j] = sub_checked(A[dst][j], mul_checked(q, A[src][j]));
    };

    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
        // smallest nonzero entry of the trailing block
        std::size_t bi = m, bj = n;
        i64 best = 0;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (A[i][j] != 0 && (best == 0 || abs64(A[i][j]) < best)) {
                    best = abs64(A[i][j]);
                    bi = i;
                    bj = j;
                }
        if (best == 0) break;
        std::swap(A[t], A[bi]);
        swap_cols(t, bj);
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (A[i][t] == 0) continue;
                row_op(i, t, A[i][t] / A[t][t], t);
                if (A[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (A[t][j] == 0) continue;
                col_op(j, t, A[t][j] / A[t][t]);
                if (A[t][j] != 0) clean = false;
            }
            if (!clean) {
                std::size_t si = t, sj = t;
                i64 s = abs64(A[t][t]);
                for (std::size_t i = t + 1; i < m; ++i)
                    if (A[i][t] != 0 && abs64(A[i][t]) < s) {
                        s = abs64(A[i][t]);
                        si = i;
                        sj = t;
                    }
                for (std::size_t j = t + 1; j < n; ++j)
                    if (A[t][j] != 0 && abs64(A[t][j]) < s) {
                        s = abs64(A[t][j]);
                        si = t;
                        sj = j;
                    }
                std::swap(A[t], A[si]);
                swap_cols(t, sj);
                continue;
            }
            bool divisible = true;
            for (std::size_t i = t + 1; i < m && divisible; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (A[i][j] % A[t][t] != 0) {
                        row_op(t, i, -1, t);
                        divisible = false;
                        break;
                    }
            if (divisible) break;
        }
        if (A[t][t] < 0) {
            for (auto& row : A) row[t] = -row[t];
            for (auto& row : V) row[t] = -row[t];
        }
    }
    out.diag.assign(n, 0);
    for (std::size_t i = 0; i < t; ++i) out.diag[i] = A[i][i];
    return out;
}

IntMatrix rref_mod_p(IntMatrix M, i64 p, std::vector<std::size_t>* pivots) {
    std::size_t m = M.size();
    std::size_t n = m ? M[0].size() : 0;
    for (auto& row : M)
        for (auto& e : row) e = mod(e, p);
    std::size_t r = 0;
    if (pivots) pivots->clear();
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t piv = m;
        for (std::size_t i = r; i < m; ++i)
            if (M[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv == m) continue;
        std::swap(M[r], M[piv]);
        i64 inv = inv_mod(M[r][c], p);
        for (auto& e : M[r]) e = static_cast<i64>(mulmod(static_cast<u64>(e), static_cast<u64>(inv), static_cast<u64>(p)));
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || M[i][c] == 0) continue;
            i64 f = M[i][c];
            for (std::size_t j = 0; j < n; ++j)
                M[i][j] = mod(M[i][j] - static_cast<i64>(mulmod(static_cast<u64>(f), static_cast<u64>(M[r][j]), static_cast<u64>(p))), p);
        }
        if (pivots) pivots->push_back(c);
        ++r;
    }
    M.resize(r);
    return M;
}

std::size_t rank_mod_p(const IntMatrix& M, i64 p) { return rref_mod_p(M, p).size(); }

IntMatrix left_kernel_mod_p(const IntMatrix& M, i64 p) {
    // x M = 0  <=>  M^T x^T = 0
    std::size_t m = M.size();
    std::size_t n = m ? M[0].size() : 0;
    IntMatrix T(n, std::vector<i64>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) T[j][i] = M[i][j];
    std::vector<std::size_t> piv;
    IntMatrix R = rref_mod_p(T, p, &piv);
    std::vector<bool> is_piv(m, false);
    for (auto c : piv) is_piv[c] = true;
    IntMatrix ker;
    for (std::size_t f = 0; f < m; ++f) {
        if (is_piv[f]) continue;
        std::vector<i64> x(m, 0);
        x[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = mod(-R[r][f], p);
        ker.push_back(std::move(x));
    }
    return ker;
}

std::size_t f2_rank(std::vector<std::vector<u64>> rows) {
    std::size_t rank = 0;
    if (rows.empty()) return 0;
    std::size_t words = rows[0].size();
    for (std::size_t w = 0; w < words; ++w) {
        for (int bit = 0; bit < 64; ++bit) {
            u64 mask = 1ULL << bit;
            std::size_t piv = rows.size();
            for (std::size_t i = rank; i < rows.size(); ++i)
                if (rows[i][w] & mask) {
                    piv = i;
                    break;
                }
            if (piv == rows.size()) continue;
            std::swap(rows[rank], rows[piv]);
            for (std::size_t i = rank + 1; i < rows.size(); ++i)
                if (rows[i][w] & mask)
                    for (std::size_t k = w; k < words; ++k) rows[i][k] ^= rows[rank][k];
            ++rank;
        }
    }
    return rank;
}

std::size_t f2_rank(std::vector<u64> rows) {
    std::size_t rank = 0;
    for (int bit = 0; bit < 64; ++bit) {
        u64 mask = 1ULL << bit;
        std::size_t piv = rows.size();
        for (std::size_t i = rank; i < rows.size(); ++i)
            if (rows[i] & mask) {
                piv = i;
                break;
            }
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        for (std::size_t i = rank + 1; i < rows.size(); ++i)
            if (rows[i] & mask) rows[i] ^= rows[rank];
        ++rank;
    }
    return rank;
}

IntMatrix hnf_mod(const IntMatrix& rows, std::size_t ncols, i64 m) {
    if (m <= 0) throw std::invalid_argument("hnf_mod: modulus must be positive");
    auto red = [m](i128 v) {
        i128 r = v % m;
        return static_cast<i64>(r < 0 ? r + m : r);
    };
    IntMatrix work;
    for (const auto& r : rows) {
        std::vector<i64> v(ncols);
        for (std::size_t j = 0; j < ncols; ++j) v[j] = red(r[j]);
        work.push_back(std::move(v));
    }
    IntMatrix out(ncols, std::vector<i64>(ncols, 0));
    for (std::size_t k = 0; k < ncols; ++k) {
        std::vector<i64> piv(ncols, 0);
        piv[k] = m;
        for (auto& r : work) {
            if (r[k] == 0) continue;
            i64 s, t;
            i64 g = xgcd(piv[k], r[k], s, t);
            i64 a = piv[k] / g, b = r[k] / g;
            std::vector<i64> np(ncols, 0), nr(ncols, 0);
            for (std::size_t j = k + 1; j < ncols; ++j) {
                np[j] = red(static_cast<i128>(s) * piv[j] + static_cast<i128>(t) * r[j]);
                nr[j] = red(static_cast<i128>(a) * r[j] - static_cast<i128>(b) * piv[j]);
            }
            np[k] = g < 0 ? -g : g;
            if (g < 0)
                for (std::size_t j = k + 1; j < ncols; ++j) np[j] = red(-static_cast<i128>(np[j]));
            piv = std::move(np);
            r = std::move(nr);
        }
        out[k] = std::move(piv);
    }
    for (std::size_t k = 1; k < ncols; ++k)
        for (std::size_t i = 0; i < k; ++i) {
            i64 q = floor_div(out[i][k], out[k][k]);
            if (q == 0) continue;
            out[i][k] -= q * out[k][k];
            for (std::size_t j = k + 1; j < ncols; ++j) out[i][j] = red(out[i][j] - static_cast<i128>(q) * out[k][j]);
        }
    return out;
}

}  // namespace cubic
