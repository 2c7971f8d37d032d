#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cubic/arith.hpp"

namespace cubic {

using IntMatrix = std::vector<std::vector<i64>>;

// Row Hermite normal form: rows with pivots in increasing columns, positive pivots,
// entries above each pivot reduced into [0, pivot). Zero rows are dropped.
IntMatrix hnf(const IntMatrix& rows, std::size_t ncols);

struct SmithForm {
    // one entry per column: elementary divisors (1s included), 0 for free directions
    std::vector<i64> diag;
    // column transform: rowspace(A) * V == rowspace(diag)
    IntMatrix V;
};

SmithForm smith_form(IntMatrix A, std::size_t ncols);

// modular linear algebra over F_p on small dense matrices
IntMatrix rref_mod_p(IntMatrix M, i64 p, std::vector<std::size_t>* pivots = nullptr);
std::size_t rank_mod_p(const IntMatrix& M, i64 p);
// basis of { x : x * M == 0 } (left kernel)
IntMatrix left_kernel_mod_p(const IntMatrix& M, i64 p);

// HNF of a full-rank lattice known to contain m * Z^ncols; entries stay below m
IntMatrix hnf_mod(const IntMatrix& rows, std::size_t ncols, i64 m);

// F2 rank of bit rows (each row a multiword bit vector)
std::size_t f2_rank(std::vector<std::vector<u64>> rows);
std::size_t f2_rank(std::vector<u64> rows);

// Incremental row HNF carrying a payload per row; payload combination follows the
// same unimodular operations as the integer part.
template <class Extra>
class IncrementalHnf {
public:
    using Lin = std::function<Extra(i64, const Extra&, i64, const Extra&)>;

    struct Row {
        std::vector<i64> v;
        Extra x;
    };

    IncrementalHnf(std::size_t ncols, Lin lin) : n_(ncols), lin_(std::move(lin)), rows_(ncols) {}

    // Returns true when the row increased the rank. A row that reduces to zero is passed
    // to on_zero with its combined payload.
    template <class OnZero>
    bool insert(std::vector<i64> v, Extra x, OnZero&& on_zero) {
        for (std::size_t k = 0; k < n_; ++k) {
            if (v[k] == 0) continue;
            if (!rows_[k]) {
                if (v[k] < 0) {
                    for (auto& e : v) e = -e;
                    x = lin_(-1, x, 0, x);
                }
                rows_[k] = Row{std::move(v), std::move(x)};
                ++rank_;
                tidy(k);
                return true;
            }
            Row& b = *rows_[k];
            i64 s, t;
            i64 g = xgcd(b.v[k], v[k], s, t);
            i64 bk = b.v[k] / g, rk = v[k] / g;
            std::vector<i64> nb(n_), nr(n_);
            for (std::size_t j = k; j < n_; ++j) {
                nb[j] = add_checked(mul_checked(s, b.v[j]), mul_checked(t, v[j]));
                nr[j] = sub_checked(mul_checked(rk, b.v[j]), mul_checked(bk, v[j]));
            }
            Extra nbx = lin_(s, b.x, t, x);
            Extra nrx = lin_(rk, b.x, -bk, x);
            b.v = std::move(nb);
            b.x = std::move(nbx);
            v = std::move(nr);
            x = std::move(nrx);
            tidy(k);
        }
        on_zero(x);
        return false;
    }

    std::size_t rank() const { return rank_; }
    std::size_t ncols() const { return n_; }
    const std::vector<std::optional<Row>>& rows() const { return rows_; }

    // product of pivots (only meaningful at full rank)
    i64 pivot_product() const {
        i64 d = 1;
        for (std::size_t k = 0; k < n_; ++k)
            if (rows_[k]) d = mul_checked(d, rows_[k]->v[k]);
        return d;
    }

    void for_each_row(const std::function<void(Row&)>& fn) {
        for (auto& r : rows_)
            if (r) fn(*r);
    }

private:
    void sub_multiple(Row& dst, const Row& src, i64 q, std::size_t from) {
        for (std::size_t j = from; j < n_; ++j) dst.v[j] = sub_checked(dst.v[j], mul_checked(q, src.v[j]));
        dst.x = lin_(1, dst.x, -q, src.x);
    }

    // reduce row k by lower pivots, then reduce column k of higher rows
    void tidy(std::size_t k) {
        Row& r = *rows_[k];
        for (std::size_t j = k + 1; j < n_; ++j) {
            if (!rows_[j] || r.v[j] == 0) continue;
            i64 q = floor_div(r.v[j], rows_[j]->v[j]);
            if (q != 0) sub_multiple(r, *rows_[j], q, j);
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (!rows_[i] || rows_[i]->v[k] == 0) continue;
            i64 q = floor_div(rows_[i]->v[k], r.v[k]);
            if (q != 0) sub_multiple(*rows_[i], r, q, k);
        }
    }

    std::size_t n_;
    Lin lin_;
    std::vector<std::optional<Row>> rows_;
    std::size_t rank_ = 0;
};

}  // namespace cubic
