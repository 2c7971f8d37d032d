#include "cubic/class_group.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include <quadmath.h>

#include "cubic/lattice.hpp"

namespace cubic {

namespace {

using Lam = std::array<long double, 2>;
// Relation payload: a log vector in quad precision plus a long double shadow built by the same
// operations. Extended-gcd combinations amplify rounding error enormously; the gap between the two
// copies measures that amplification, and the quad copy is only trusted while the gap is small.
struct Payload {
    std::array<__float128, 2> v{0, 0};
    std::array<long double, 2> w{0, 0};

    Lam lam() const { return {static_cast<long double>(v[0]), static_cast<long double>(v[1])}; }
    long double drift() const {
        long double d = 0;
        for (std::size_t k = 0; k < 2; ++k) {
            const long double e = std::fabs(static_cast<long double>(v[k]) - w[k]);
            if (!(e <= d)) d = std::isfinite(e) ? e : HUGE_VALL;
        }
        return d;
    }
};

// a shadow this far off leaves the quad copy with roughly 1e-19 of error
constexpr long double kTrustedDrift = 1e-4L;
constexpr int kUntrustedLimit = 2000;

struct Relation {
    Elem x;
    std::vector<int> v;  // valuations over the factor base
    u64 w = 0;           // sign bits at the real places, then character bits
};

// ---------------------------------------------------------------- unit lattice

// Lattice of log vectors of units, grown by rational-relation merging.
class UnitLattice {
public:
    using Q = __float128;

    explicit UnitLattice(int target) : target_(target) {}

    int rank() const { return static_cast<int>(basis_.size()); }
    int anomalies() const { return anomalies_; }

    long double regulator() const {
        if (target_ == 1) return basis_.empty() ? 0 : static_cast<long double>(fabsq(basis_[0].v[0]));
        if (basis_.size() < 2) return 0;
        return static_cast<long double>(fabsq(cross(basis_[0].v, basis_[1].v)));
    }

    Payload reduce(Payload u) const {
        if (rank() < target_) return u;
        auto c = coords(u.v);
        for (std::size_t i = 0; i < static_cast<std::size_t>(target_); ++i) {
            const Q r = nearbyintq(c[i]);
            if (r == 0) continue;
            sub(u, basis_[i], r);
        }
        return u;
    }

    // returns true when the lattice grew
    bool add(Payload u) {
        u = reduce(u);
        const Q len = norm(u.v);
        // shorter than any unit log vector of a cubic field: torsion up to rounding
        if (len < kShortest) return false;
        if (basis_.empty()) {
            if (target_ == 1 && u.v[0] < 0) sub(u, u, 2);
            basis_.push_back(u);
            return true;
        }
        if (target_ == 2 && basis_.size() == 1 && fabsq(cross(basis_[0].v, u.v)) > kShortest) {
            basis_.push_back(u);
            gauss();
            return true;
        }
        std::array<Q, 2> c;
        if (basis_.size() == 1) {
            const auto& b = basis_[0].v;
            c = {(u.v[0] * b[0] + u.v[1] * b[1]) / (b[0] * b[0] + b[1] * b[1]), 0};
        } else {
            c = coords(u.v);
        }
        i64 q = 0;
        std::array<i64, 2> m{};
        if (!rational(c, m, q)) {
            ++anomalies_;
            return false;
        }
        if (q == 1) return false;
        std::vector<Payload> next;
        if (basis_.size() == 1) {
            next.push_back(scaled(basis_[0], gcd(m[0], q), q));
        } else {
            IntMatrix H = hnf({{q, 0}, {0, q}, {m[0], m[1]}}, 2);
            Payload b0 = scaled(basis_[0], H[0][0], q);
            sub(b0, scaled(basis_[1], H[0][1], q), -1);
            next = {b0, scaled(basis_[1], H[1][1], q)};
        }
        // a refinement below the smallest possible regulator is a rounding artefact
        const Q reg = next.size() == 1 ? fabsq(next[0].v[0]) : fabsq(cross(next[0].v, next[1].v));
        if (reg < kMinRegulator) {
            ++anomalies_;
            return false;
        }
        basis_ = std::move(next);
        if (basis_.size() == 2) gauss();
        return true;
    }

private:
    static constexpr long double kShortest = 0.05L;
    static constexpr long double kMinRegulator = 0.25L;

    static Q norm(const std::array<Q, 2>& v) { return sqrtq(v[0] * v[0] + v[1] * v[1]); }
    static Q cross(const std::array<Q, 2>& a, const std::array<Q, 2>& b) { return a[0] * b[1] - a[1] * b[0]; }

    // u -= r * b, on both copies
    static void sub(Payload& u, const Payload& b, Q r) {
        const long double rl = static_cast<long double>(r);
        for (std::size_t k = 0; k < 2; ++k) {
            u.v[k] -= r * b.v[k];
            u.w[k] -= rl * b.w[k];
        }
    }

    static Payload scaled(const Payload& b, i64 num, i64 den) {
        const Q f = static_cast<Q>(num) / static_cast<Q>(den);
        const long double fl = static_cast<long double>(num) / static_cast<long double>(den);
        return Payload{{b.v[0] * f, b.v[1] * f}, {b.w[0] * fl, b.w[1] * fl}};
    }

    std::array<Q, 2> coords(const std::array<Q, 2>& v) const {
        if (target_ == 1) return {v[0] / basis_[0].v[0], 0};
        const Q det = cross(basis_[0].v, basis_[1].v);
        return {cross(v, basis_[1].v) / det, cross(basis_[0].v, v) / det};
    }

    static bool rational(const std::array<Q, 2>& c, std::array<i64, 2>& m, i64& q) {
        for (q = 1; q <= 5000; ++q) {
            const Q tol = static_cast<Q>(1e-12L) * static_cast<Q>(q);
            bool fits = true;
            for (std::size_t i = 0; i < 2 && fits; ++i) {
                const Q x = c[i] * static_cast<Q>(q), r = nearbyintq(x);
                fits = fabsq(x - r) <= tol;
                m[i] = static_cast<i64>(r);
            }
            if (fits) return true;
        }
        return false;
    }

    void gauss() {
        Payload &a = basis_[0], &b = basis_[1];
        for (int it = 0; it < 100; ++it) {
            if (norm(a.v) > norm(b.v)) std::swap(a, b);
            const Q r = nearbyintq((a.v[0] * b.v[0] + a.v[1] * b.v[1]) / (a.v[0] * a.v[0] + a.v[1] * a.v[1]));
            if (r == 0) break;
            sub(b, a, r);
        }
    }

    int target_;
    std::vector<Payload> basis_;
    int anomalies_ = 0;
};

// ---------------------------------------------------------------- polynomials mod p

using Poly = std::vector<i64>;  // low degree first

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mod(Poly a, const Poly& b, i64 p) {
    trim(a);
    i64 inv = inv_mod(b.back(), p);
    while (a.size() >= b.size()) {
        i64 c = static_cast<i64>(mulmod(static_cast<u64>(a.back()), static_cast<u64>(inv), static_cast<u64>(p)));
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] = mod(a[shift + i] - static_cast<i64>(mulmod(static_cast<u64>(c), static_cast<u64>(b[i]), static_cast<u64>(p))), p);
        trim(a);
    }
    return a;
}

std::size_t poly_gcd_degree(Poly a, Poly b, i64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a.empty() ? 0 : a.size() - 1;
}

// number of roots of f in P^1(F_p) for p not dividing disc(f)
int roots_in_p1(const BinaryCubicForm& f, i64 p) {
    i64 a = mod(f.a, p), b = mod(f.b, p), c = mod(f.c, p), d = mod(f.d, p);
    if (p < 60) {
        int n = a == 0 ? 1 : 0;
        for (i64 x = 0; x < p; ++x)
            if (mod(((a * x + b) % p * x + c) % p * x + d, p) == 0) ++n;
        return n;
    }
    if (a == 0) {
        int l = legendre(c * c - 4 * b % p * d, p);
        return 1 + (l == 1 ? 2 : (l == 0 ? 1 : 0));
    }
    u64 P = static_cast<u64>(p);
    i64 ia = inv_mod(a, p);
    i64 B = static_cast<i64>(mulmod(static_cast<u64>(b), static_cast<u64>(ia), P));
    i64 C = static_cast<i64>(mulmod(static_cast<u64>(c), static_cast<u64>(ia), P));
    i64 D = static_cast<i64>(mulmod(static_cast<u64>(d), static_cast<u64>(ia), P));
    // x^3 = -(B x^2 + C x + D)
    auto mulred = [&](const std::array<u64, 3>& u, const std::array<u64, 3>& v) {
        u64 t[5] = {0, 0, 0, 0, 0};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t[i + j] = (t[i + j] + mulmod(u[i], v[j], P)) % P;
        for (int k = 4; k >= 3; --k) {
            u64 h = t[k];
            if (!h) continue;
            t[k] = 0;
            t[k - 1] = (t[k - 1] + P - mulmod(h, static_cast<u64>(B), P)) % P;
            t[k - 2] = (t[k - 2] + P - mulmod(h, static_cast<u64>(C), P)) % P;
            t[k - 3] = (t[k - 3] + P - mulmod(h, static_cast<u64>(D), P)) % P;
        }
        return std::array<u64, 3>{t[0], t[1], t[2]};
    };
    std::array<u64, 3> r{1, 0, 0}, x{0, 1, 0};
    u64 e = P;
    while (e) {
        if (e & 1) r = mulred(r, x);
        x = mulred(x, x);
        e >>= 1;
    }
    Poly h{static_cast<i64>(r[0]), mod(static_cast<i64>(r[1]) - 1, p), static_cast<i64>(r[2])};
    trim(h);
    if (h.empty()) return 3;
    Poly g{D, C, B, 1};
    return static_cast<int>(poly_gcd_degree(g, h, p));
}

const std::vector<i64>& prime_table(i64 limit) {
    static std::mutex mu;
    static std::map<i64, std::vector<i64>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(limit);
    if (it == cache.end()) it = cache.emplace(limit, primes_up_to(limit)).first;
    return it->second;
}

}  // namespace

long double residue_estimate(const NumberField& K, i64 limit) {
    const auto& primes = prime_table(limit);
    const BinaryCubicForm& f = K.form();
    const i64 D = K.disc();
    long double acc = 0, avg = 0;
    std::size_t half = primes.size() / 2, used = 0;
    for (std::size_t idx = 0; idx < primes.size(); ++idx) {
        i64 p = primes[idx];
        long double ip = 1.0L / static_cast<long double>(p);
        long double local = std::log1p(-ip);
        if (D % p == 0) {
            for (auto [e, fdeg] : splitting_type(K.ring(), p).parts) local -= std::log1p(-std::pow(ip, fdeg));
        } else {
            switch (roots_in_p1(f, p)) {
                case 3: local -= 3 * std::log1p(-ip); break;
                case 1: local -= std::log1p(-ip) + std::log1p(-ip * ip); break;
                default: local -= std::log1p(-ip * ip * ip); break;
            }
        }
        acc += local;
        if (idx >= half) {
            avg += acc;
            ++used;
        }
    }
    return std::exp(used ? avg / static_cast<long double>(used) : acc);
}

// ---------------------------------------------------------------- computation

struct ClassGroupComputation::Impl {
    std::vector<Relation> rels;
    std::vector<std::tuple<i64, i64, i64>> chars;  // (q, image of w, image of t)
    u64 minus_one_w = 0;
};

struct ClassGroupComputation::WPass {
    std::vector<std::size_t> cols;   // factor-base indices not above S
    std::vector<std::size_t> scols;  // factor-base indices above S
    IntMatrix basis_v;
    std::vector<u64> basis_w;
    std::vector<std::pair<u64, u64>> units;  // (w, parity of valuations above S)
};

namespace {

struct WX {
    u64 w = 0, s = 0;
};

WX wx_lin(i64 s, const WX& a, i64 t, const WX& b) {
    WX out;
    if (s & 1) {
        out.w ^= a.w;
        out.s ^= a.s;
    }
    if (t & 1) {
        out.w ^= b.w;
        out.s ^= b.s;
    }
    return out;
}

}  // namespace

ClassGroupComputation::ClassGroupComputation(const NumberField& K, PrimeSet s_primes, ClassGroupOptions opt)
    : K_(K), s_primes_(std::move(s_primes)), opt_(opt), impl_(std::make_unique<Impl>()) {
    const CubicRing& R = K.ring();
    const i64 absd = abs64(K.disc());
    const int r1 = K.r1(), r2 = K.r2();
    const int urank = r1 + r2 - 1;
    const long double sqd = std::sqrt(static_cast<long double>(absd));
    long double bound = r1 == 3 ? (2.0L / 9.0L) * sqd : (8.0L / (9.0L * static_cast<long double>(M_PI))) * sqd;
    mb_ = static_cast<i64>(std::floor(bound));

    // factor base
    PrimeSet fb_primes = primes_up_to(mb_);
    for (i64 p : s_primes_) fb_primes.push_back(p);
    std::sort(fb_primes.begin(), fb_primes.end());
    fb_primes.erase(std::unique(fb_primes.begin(), fb_primes.end()), fb_primes.end());
    struct Block {
        i64 p;
        std::size_t first, count;
    };
    std::vector<Block> blocks;
    for (i64 p : fb_primes) {
        auto dec = prime_decomposition(R, p);
        blocks.push_back({p, fb_.size(), dec.size()});
        for (auto& P : dec) fb_.push_back(P);
    }
    const std::size_t n = fb_.size();
    const i64 max_fb_prime = fb_primes.empty() ? 1 : fb_primes.back();

    // quadratic characters at degree-one primes beyond the factor base
    const BinaryCubicForm& f = K.form();
    for (i64 q = std::max<i64>(max_fb_prime + 1, 101); static_cast<int>(impl_->chars.size()) < opt_.characters; ++q) {
        if (!is_prime(q) || K.disc() % q == 0 || f.a % q == 0) continue;
        for (i64 x = 0; x < q; ++x) {
            i128 val = ((static_cast<i128>(f.a) * x + f.b) * x + f.c) * x + f.d;
            if (val % q != 0) continue;
            i64 wq = mod(f.a * x, q);
            i64 tq = mod(static_cast<i64>((static_cast<i128>(f.a) * x % q * x + static_cast<i128>(f.b) * x + f.c) % q), q);
            impl_->chars.emplace_back(q, wq, tq);
            break;
        }
    }
    auto wvec = [&](const Elem& x) {
        u64 w = K.sign_mask(x);
        int bit = r1;
        for (auto [q, wq, tq] : impl_->chars) {
            i64 val = mod(static_cast<i64>((static_cast<i128>(mod(x[0], q)) + static_cast<i128>(mod(x[1], q)) * wq +
                                            static_cast<i128>(mod(x[2], q)) * tq) % q),
                          q);
            int l = legendre(val, q);
            if (l == 0) throw std::logic_error("character prime divides a relation element");
            if (l < 0) w |= 1ULL << bit;
            ++bit;
        }
        return w;
    };
    impl_->minus_one_w = wvec(Elem{-1, 0, 0});

    const long double target =
        2.0L * sqd * residue_estimate(K, opt_.euler_limit) /
        (std::pow(2.0L, static_cast<long double>(r1)) * std::pow(2.0L * static_cast<long double>(M_PI), static_cast<long double>(r2)));

    IncrementalHnf<Payload> H(n, [](i64 s, const Payload& a, i64 t, const Payload& b) {
        const __float128 qs = s, qt = t;
        const long double ls = static_cast<long double>(s), lt = static_cast<long double>(t);
        Payload r;
        for (std::size_t k = 0; k < 2; ++k) {
            r.v[k] = qs * a.v[k] + qt * b.v[k];
            r.w[k] = ls * a.w[k] + lt * b.w[k];
        }
        return r;
    });
    int untrusted = 0;
    UnitLattice units(urank);
    std::set<Elem> seen;
    bool certified = false;
    int quiet = 0;
    i64 last_h = 0;
    long double last_R = 0;

    auto lam_of = [&](const Elem& x, __float128 logn) {
        Payload l;
        for (int i = 0; i < urank; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const int deg = K.place_degree(i);
            l.v[k] = deg * (K.log_abs_fine(x, i) - logn / 3);
            l.w[k] = deg * (std::log(K.abs_at(x, i)) - static_cast<long double>(logn) / 3);
        }
        return l;
    };

    auto check = [&]() {
        if (H.rank() < n || units.rank() < urank) return;
        i64 h = H.pivot_product();
        long double Rg = units.regulator();
        ratio_ = static_cast<long double>(h) * Rg / target;
        bool same = h == last_h && std::fabs(Rg - last_R) <= 1e-6L * Rg;
        last_h = h;
        last_R = Rg;
        if (ratio_ < std::sqrt(2.0L) && ratio_ > 1 / std::sqrt(2.0L)) {
            if (!certified) {
                certified = true;
                quiet = 0;
            } else if (same) {
                ++quiet;
            } else {
                quiet = 0;
            }
        } else {
            certified = false;
        }
    };

    auto add_relation = [&](Relation rel, const Payload& lam) {
        H.insert(std::vector<i64>(rel.v.begin(), rel.v.end()), lam, [&](const Payload& u) {
            if (!(u.drift() <= kTrustedDrift))
                ++untrusted;
            else
                units.add(u);
            if (units.rank() < urank) return;
            // keep generator logs short: error grows with the size of what gets combined
            H.for_each_row([&](auto& row) { row.x = units.reduce(row.x); });
        });
        impl_->rels.push_back(std::move(rel));
        check();
    };

    auto finished = [&] { return certified && quiet >= opt_.streak; };
    // once every payload has drifted no new unit can be trusted; stop instead of searching on
    auto exhausted = [&] { return untrusted >= kUntrustedLimit && !finished(); };

    // rational primes give the relations p O = prod P^e
    for (const auto& blk : blocks) {
        Relation rel;
        rel.x = {blk.p, 0, 0};
        rel.v.assign(n, 0);
        for (std::size_t k = 0; k < blk.count; ++k) rel.v[blk.first + k] = fb_[blk.first + k].e;
        rel.w = wvec(rel.x);
        add_relation(std::move(rel), Payload{});
    }

    auto try_element = [&](Elem x) {
        if (x[1] == 0 && x[2] == 0) return;
        int lead = x[0] != 0 ? 0 : (x[1] != 0 ? 1 : 2);
        if (x[lead] < 0)
            for (auto& c : x) c = -c;
        if (!seen.insert(x).second) return;
        i128 N = K.norm(x);
        if (N < 0) N = -N;
        if (N == 0) return;
        std::vector<int> kp(blocks.size(), 0);
        for (std::size_t b = 0; b < blocks.size() && N > 1; ++b) {
            i64 p = blocks[b].p;
            while (N % p == 0) {
                N /= p;
                ++kp[b];
            }
        }
        if (N != 1) return;
        Relation rel;
        rel.x = x;
        rel.v.assign(n, 0);
        __float128 logn = 0;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (!kp[b]) continue;
            const Block& blk = blocks[b];
            logn += kp[b] * logq(static_cast<__float128>(blk.p));
            int rest = kp[b];
            for (std::size_t k = 0; k + 1 < blk.count; ++k) {
                int v = prime_valuation(R, fb_[blk.first + k], x, kp[b]);
                rel.v[blk.first + k] = v;
                rest -= v * fb_[blk.first + k].f;
            }
            const PrimeIdeal& last = fb_[blk.first + blk.count - 1];
            if (rest < 0 || rest % last.f) throw std::logic_error("valuations inconsistent with the norm");
            rel.v[blk.first + blk.count - 1] = rest / last.f;
        }
        rel.w = wvec(x);
        add_relation(std::move(rel), lam_of(x, logn));
    };

    // lattices searched for short elements: O, each prime, then products of pairs
    std::vector<IdealHNF> lattices{unit_ideal()};
    for (const auto& P : fb_) lattices.push_back(P.ideal);
    std::vector<EmbeddedLattice> reduced;
    auto T2 = K.minkowski(std::vector<long double>(static_cast<std::size_t>(K.nplaces()), 1.0L));
    auto prepare = [&](const IdealHNF& I) {
        EmbeddedLattice L{I.rows, T2};
        lll_reduce(L);
        return L;
    };
    for (const auto& I : lattices) reduced.push_back(prepare(I));
    std::vector<long double> done_bound(lattices.size(), 0);

    try {
        for (int round = 0; round < opt_.max_rounds && !finished() && !exhausted(); ++round) {
            long double c = 3.0L * std::pow(1.6L, static_cast<long double>(round));
            if (round > 0 && n > 0) {
                for (std::size_t i = 0; i < n; ++i) {
                    std::size_t j = (i + static_cast<std::size_t>(round) - 1) % n;
                    lattices.push_back(ideal_mul(R, fb_[i].ideal, fb_[j].ideal));
                    reduced.push_back(prepare(lattices.back()));
                    done_bound.push_back(0);
                }
            }
            for (std::size_t li = 0; li < lattices.size() && !finished() && !exhausted(); ++li) {
                long double scale = std::pow(static_cast<long double>(lattices[li].norm()) * sqd, 2.0L / 3.0L);
                long double hi = c * scale, lo = done_bound[li];
                enumerate_short(reduced[li], hi, [&](const Elem& x) {
                    if (reduced[li].length2(x) <= lo) return true;
                    try_element(x);
                    return !finished() && !exhausted();
                });
                done_bound[li] = hi;
            }
        }
    } catch (const OverflowError& e) {
        throw CertificationError(std::string("integer overflow during relation collection: ") + e.what());
    }
    if (!finished())
        throw CertificationError("relation collection did not certify (rank " + std::to_string(H.rank()) + "/" +
                                 std::to_string(n) + ", units " + std::to_string(units.rank()) + "/" +
                                 std::to_string(urank) + ", ratio " + std::to_string(static_cast<double>(ratio_)) +
                                 (exhausted() ? ", unit payloads exhausted" : "") + ")");
    regulator_ = units.regulator();

    IntMatrix rows;
    for (const auto& r : H.rows())
        if (r) rows.push_back(r->v);
    std::vector<i64> base_primes;
    for (const auto& P : fb_) base_primes.push_back(P.p);
    cl_ = group_from_relations(rows, n, base_primes);
}

ClassGroupComputation::~ClassGroupComputation() = default;

std::size_t ClassGroupComputation::relation_count() const { return impl_->rels.size(); }

const ClassGroupComputation::WPass& ClassGroupComputation::wpass(const PrimeSet& S) const {
    auto it = wpasses_.find(S);
    if (it != wpasses_.end()) return *it->second;
    auto wp = std::make_shared<WPass>();
    for (std::size_t j = 0; j < fb_.size(); ++j) {
        if (std::find(S.begin(), S.end(), fb_[j].p) != S.end())
            wp->scols.push_back(j);
        else
            wp->cols.push_back(j);
    }
    for (i64 p : S)
        if (std::find(s_primes_.begin(), s_primes_.end(), p) == s_primes_.end() && p > mb_)
            throw std::invalid_argument("prime " + std::to_string(p) + " is not in the factor base");
    if (wp->scols.size() > 60) throw std::invalid_argument("too many primes above S");
    IncrementalHnf<WX> H(wp->cols.size(), wx_lin);
    auto on_zero = [&](const WX& u) { wp->units.emplace_back(u.w, u.s); };
    H.insert(std::vector<i64>(wp->cols.size(), 0), WX{impl_->minus_one_w, 0}, on_zero);
    for (const auto& rel : impl_->rels) {
        std::vector<i64> v(wp->cols.size());
        for (std::size_t k = 0; k < wp->cols.size(); ++k) v[k] = rel.v[wp->cols[k]];
        u64 s = 0;
        for (std::size_t k = 0; k < wp->scols.size(); ++k)
            if (rel.v[wp->scols[k]] & 1) s |= 1ULL << k;
        H.insert(std::move(v), WX{rel.w, s}, on_zero);
    }
    for (const auto& r : H.rows()) {
        if (!r) continue;
        wp->basis_v.push_back(r->v);
        wp->basis_w.push_back(r->x.w);
    }
    auto& slot = wpasses_[S];
    slot = wp;
    return *slot;
}

const AbelianGroupData& ClassGroupComputation::narrow_class_group() const {
    if (narrow_) return *narrow_;
    const WPass& wp = wpass({});
    const std::size_t n = fb_.size();
    const int r1 = K_.r1();
    const u64 smask = (1ULL << r1) - 1;
    IntMatrix rows;
    auto with_signs = [&](std::vector<i64> v, u64 w) {
        for (int i = 0; i < r1; ++i) v.push_back((w >> i) & 1);
        return v;
    };
    for (std::size_t k = 0; k < wp.basis_v.size(); ++k) rows.push_back(with_signs(wp.basis_v[k], wp.basis_w[k] & smask));
    for (const auto& [w, s] : wp.units) rows.push_back(with_signs(std::vector<i64>(n, 0), w & smask));
    for (int i = 0; i < r1; ++i) {
        std::vector<i64> v(n + static_cast<std::size_t>(r1), 0);
        v[n + static_cast<std::size_t>(i)] = 2;
        rows.push_back(v);
    }
    std::vector<i64> base_primes;
    for (const auto& P : fb_) base_primes.push_back(P.p);
    for (int i = 0; i < r1; ++i) base_primes.push_back(0);
    narrow_ = std::make_unique<AbelianGroupData>(group_from_relations(rows, n + static_cast<std::size_t>(r1), base_primes));
    return *narrow_;
}

AbelianGroupData ClassGroupComputation::s_quotient(const AbelianGroupData& G, const PrimeSet& S) const {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < G.base_primes.size(); ++j)
        if (G.base_primes[j] != 0 && std::find(S.begin(), S.end(), G.base_primes[j]) != S.end()) idx.push_back(j);
    for (i64 p : S)
        if (std::find(G.base_primes.begin(), G.base_primes.end(), p) == G.base_primes.end())
            throw std::invalid_argument("s_quotient: no base class above " + std::to_string(p));
    return quotient_by_base(G, idx);
}

SUnitData ClassGroupComputation::s_unit_data(const PrimeSet& S) const {
    const WPass& wp = wpass(S);
    SUnitData out;
    out.rank = K_.r1() + K_.r2() - 1 + static_cast<int>(wp.scols.size());
    const u64 smask = (1ULL << K_.r1()) - 1;
    std::vector<std::vector<u64>> rows;
    std::vector<u64> signs;
    for (const auto& [w, s] : wp.units) {
        std::vector<u64> row{w, s};
        std::vector<std::vector<u64>> trial = rows;
        trial.push_back(row);
        if (f2_rank(trial) > rows.size()) {
            rows.push_back(row);
            out.signature_matrix.push_back(w & smask);
        }
        signs.push_back(w & smask);
    }
    out.mod_squares_dim = static_cast<int>(rows.size());
    out.sign_rank = static_cast<int>(f2_rank(signs));
    if (out.mod_squares_dim != out.rank + 1)
        throw SaturationError("S-units modulo squares: found dimension " + std::to_string(out.mod_squares_dim) +
                              ", expected " + std::to_string(out.rank + 1));
    return out;
}

int ClassGroupComputation::selmer_direct_dim(const PrimeSet& S) const {
    const WPass& wp = wpass(S);
    const std::size_t n = fb_.size();
    const std::size_t words = (n + 63) / 64 + 1;
    std::vector<std::vector<u64>> full, nons;
    auto push = [&](const std::vector<int>& v, u64 w) {
        std::vector<u64> a(words, 0), b(words, 0);
        for (std::size_t j = 0; j < n; ++j)
            if (v[j] & 1) a[j / 64] |= 1ULL << (j % 64);
        a[words - 1] = w;
        for (std::size_t k = 0; k < wp.cols.size(); ++k)
            if (v[wp.cols[k]] & 1) b[k / 64] |= 1ULL << (k % 64);
        full.push_back(std::move(a));
        nons.push_back(std::move(b));
    };
    push(std::vector<int>(n, 0), impl_->minus_one_w);
    for (const auto& rel : impl_->rels) push(rel.v, rel.w);
    std::size_t total = f2_rank(full);
    std::size_t expected = n + static_cast<std::size_t>(K_.r1() + K_.r2());
    if (total != expected)
        throw SaturationError("smooth elements modulo squares: found dimension " + std::to_string(total) + ", expected " +
                              std::to_string(expected));
    return static_cast<int>(total - f2_rank(nons));
}

AbelianGroupData class_group(const NumberField& K) { return ClassGroupComputation(K).class_group(); }

AbelianGroupData narrow_class_group(const NumberField& K) { return ClassGroupComputation(K).narrow_class_group(); }

AbelianGroupData s_quotient(const AbelianGroupData& G, const NumberField& K, const PrimeSet& S, bool narrow) {
    if (narrow && K.r1() == 3 && G.base_primes.size() < 3) throw std::invalid_argument("s_quotient: not a narrow presentation");
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < G.base_primes.size(); ++j)
        if (G.base_primes[j] != 0 && std::find(S.begin(), S.end(), G.base_primes[j]) != S.end()) idx.push_back(j);
    return quotient_by_base(G, idx);
}

SUnitData s_unit_data(const NumberField& K, const PrimeSet& S) {
    PrimeSet extra = S;
    for (i64 p : {2, 3})
        if (std::find(extra.begin(), extra.end(), p) == extra.end()) extra.push_back(p);
    std::sort(extra.begin(), extra.end());
    return ClassGroupComputation(K, extra).s_unit_data(S);
}

}  // namespace cubic
