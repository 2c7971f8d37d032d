#include "cubic/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>

#include "cubic/errors.hpp"
#include "cubic/lattice.hpp"

namespace cubic {

namespace {

struct UnitRec {
    std::vector<long double> L;  // degree-weighted log |sigma_i|
    u64 sign = 0;
};

// F2 span of sign masks with echelon reduction
struct SignSpan {
    std::vector<u64> basis;
    u64 reduce(u64 v) const {
        for (u64 b : basis) v = std::min(v, v ^ b);
        return v;
    }
    void add(u64 v) {
        v = reduce(v);
        if (!v) return;
        basis.push_back(v);
        std::sort(basis.rbegin(), basis.rend());
    }
};

i128 abs128(i128 x) { return x < 0 ? -x : x; }

}  // namespace

struct ClassGroupOracle::Impl {
    const NumberField& K;
    int urank;
    int np;
    std::vector<UnitRec> units;
    SignSpan unit_signs;  // signs of the full unit group, -1 included

    // a point z of the infrastructure: the fractional ideal A / den = z^{-1} O with the log vector and signs of z
    struct Anchor {
        IdealHNF A;
        i64 den = 1;
        std::vector<long double> L;
        u64 sign = 0;
    };
    std::vector<int> m;  // cells along each unit direction
    std::vector<Anchor> anchors;  // one per cell, first index fastest

    explicit Impl(const NumberField& k) : K(k), urank(k.r1() + k.r2() - 1), np(k.nplaces()) {}

    std::vector<long double> logvec(const Elem& x) const {
        long double ln = std::log(static_cast<long double>(abs128(K.norm(x))));
        std::vector<long double> L(static_cast<std::size_t>(np));
        for (int i = 0; i < np; ++i) L[i] = K.place_degree(i) * (std::log(K.abs_at(x, i)) - ln / 3);
        return L;
    }

    // lattice of I with weights making |sigma_i| <= exp(b_i) fit in the ball of radius^2 3
    EmbeddedLattice box_lattice(const IdealHNF& I, const std::vector<long double>& b) const {
        std::vector<long double> w(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) w[i] = std::exp(-2 * b[i]);
        EmbeddedLattice L{I.rows, K.minkowski(w)};
        lll_reduce(L);
        return L;
    }

    Anchor origin() const { return {unit_ideal(), 1, std::vector<long double>(static_cast<std::size_t>(np), 0), 0}; }

    static std::array<i64, 10> key(const Anchor& P) {
        std::array<i64, 10> k{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) k[3 * i + j] = P.A.rows[i][j];
        k[9] = P.den;
        return k;
    }

    // z -> z a / den: the shortest a in A (for weights skewed by s) whose log vector advances along s
    Anchor step(const Anchor& P, const std::vector<long double>& s) const {
        const long double l3 = std::log(static_cast<long double>(P.A.norm())) / 3;
        std::vector<long double> b(static_cast<std::size_t>(np));
        long double ss = 0;
        for (int i = 0; i < np; ++i) {
            b[i] = l3 + s[i] / K.place_degree(i);
            ss += s[i] * s[i];
        }
        auto L = box_lattice(P.A, b);
        Elem a{};
        long double best = -1;
        for (long double bound = 3; best < 0; bound *= 2) {
            if (bound > 1e7L) throw ResourceLimitError("oracle: no element advances the walk");
            enumerate_short(L, bound, [&](const Elem& x) {
                auto lx = logvec(x);
                long double dot = 0;
                for (int i = 0; i < np; ++i) dot += lx[i] * s[i];
                if (dot < 0.5L * ss) return true;
                long double len = L.length2(x);
                if (best < 0 || len < best) {
                    best = len;
                    a = x;
                }
                return true;
            });
        }
        // (a / den)^{-1} A / den = A (a)^{-1} = B^{-1} with B = (a) A^{-1}
        IdealHNF B = quotient(a, P.A);
        Anchor Q;
        Q.A = scaled_inverse(K.ring(), B);
        Q.den = B.norm();
        i64 g = Q.den;
        for (const auto& r : Q.A.rows)
            for (i64 v : r) g = gcd(g, v);
        for (auto& r : Q.A.rows)
            for (auto& v : r) v /= g;
        Q.den /= g;
        Q.L = P.L;
        auto la = logvec(a);
        for (int i = 0; i < np; ++i) Q.L[i] += la[i];
        Q.sign = P.sign ^ K.sign_mask(a);
        return Q;
    }

    long double dist(const Anchor& P, const std::vector<long double>& c) const {
        long double d = 0;
        for (int i = 0; i < np; ++i) d = std::max(d, std::fabs(c[i] - P.L[i]) / K.place_degree(i));
        return d;
    }

    // walk from P toward the log position c
    Anchor toward(Anchor P, const std::vector<long double>& c) const {
        Anchor best = P;
        long double bd = dist(P, c);
        int stall = 0;
        const int cap = 16 + 4 * static_cast<int>(bd);
        for (int it = 0; it < cap && bd > 1.0L && stall < 6; ++it) {
            long double d = dist(P, c);
            long double scale = std::min(1.0L, 1.5L / d);
            std::vector<long double> s(static_cast<std::size_t>(np));
            for (int i = 0; i < np; ++i) s[i] = (c[i] - P.L[i]) * scale;
            P = step(P, s);
            long double nd = dist(P, c);
            if (nd < bd) {
                best = P;
                bd = nd;
                stall = 0;
            } else {
                ++stall;
            }
        }
        return best;
    }

    // units from cycles of directed walks: a repeated ideal z_j^{-1} O = z_i^{-1} O makes z_j / z_i a unit
    void find_units() {
        std::vector<std::vector<long double>> dirs;
        if (urank == 1) {
            dirs = {{1, -1}, {-1, 1}};
        } else if (urank == 2) {
            for (int t = 0; t < 12; ++t) {
                long double th = static_cast<long double>(M_PI) * t / 6;
                long double u = std::cos(th) / std::sqrt(2.0L), v = std::sin(th) / std::sqrt(6.0L);
                dirs.push_back({u + v, -u + v, -2 * v});
            }
        }
        // any two visits of one ideal differ by a unit; walks in several directions share the record
        std::map<std::array<i64, 10>, std::pair<std::vector<long double>, u64>> seen;
        int budget = 200000;
        for (int round = 0; static_cast<int>(units.size()) < urank && budget > 0; ++round) {
            const auto& dir = dirs[static_cast<std::size_t>(round) % dirs.size()];
            const long double delta = 1.5L * (1 + round / static_cast<int>(dirs.size()));
            std::vector<long double> s(dir.size());
            for (std::size_t i = 0; i < s.size(); ++i) s[i] = delta * dir[i];
            std::map<std::array<i64, 10>, bool> mine;
            Anchor P = origin();
            for (int it = 0; it < 4000 && budget > 0; ++it, --budget) {
                auto k = key(P);
                auto [pos, fresh] = seen.emplace(k, std::make_pair(P.L, P.sign));
                if (!fresh) {
                    UnitRec u;
                    u.L.resize(static_cast<std::size_t>(np));
                    long double len = 0;
                    for (int i = 0; i < np; ++i) {
                        u.L[i] = P.L[i] - pos->second.first[i];
                        len = std::max(len, std::fabs(u.L[i]));
                    }
                    u.sign = P.sign ^ pos->second.second;
                    if (len > 1e-6L) try_add(u);
                    if (static_cast<int>(units.size()) >= urank) break;
                }
                if (!mine.emplace(k, true).second) break;  // this walk has closed a cycle
                P = step(P, s);
            }
        }
        if (static_cast<int>(units.size()) < urank) throw ResourceLimitError("oracle: unit search found too few units");
        if (urank == 2) gauss_reduce();

        m.assign(static_cast<std::size_t>(urank), 1);
        for (int j = 0; j < urank; ++j) {
            long double span = 0;
            for (int i = 0; i < np; ++i) span = std::max(span, std::fabs(units[j].L[i]) / K.place_degree(i));
            m[j] = std::max(1, static_cast<int>(std::ceil(span / 1.2L)));
        }
        std::vector<int> k(static_cast<std::size_t>(urank), 0);
        Anchor P = origin();
        for (;;) {
            std::vector<long double> c(static_cast<std::size_t>(np), 0);
            for (int j = 0; j < urank; ++j) {
                long double t = (k[j] + 0.5L) / m[j] - 0.5L;
                for (int i = 0; i < np; ++i) c[i] += t * units[j].L[i];
            }
            P = toward(P, c);
            anchors.push_back(P);
            int j = 0;
            while (j < urank && ++k[j] == m[j]) k[j++] = 0;
            if (j == urank) break;
        }

        unit_signs.add((1ULL << K.r1()) - 1);  // -1
        for (const auto& u : units) unit_signs.add(u.sign);
        // units of the whole group, found once per coset of the subgroup
        generators(unit_ideal(), [&](u64 s) {
            unit_signs.add(s);
            return true;
        });
    }

    void try_add(const UnitRec& u) {
        if (static_cast<int>(units.size()) >= urank) return;
        if (units.empty()) {
            units.push_back(u);
            return;
        }
        const auto& a = units[0].L;
        long double det = a[0] * u.L[1] - a[1] * u.L[0];
        long double na = std::hypot(a[0], a[1]), nb = std::hypot(u.L[0], u.L[1]);
        if (std::fabs(det) > 1e-6L * na * nb) units.push_back(u);
    }

    void gauss_reduce() {
        auto dot = [](const UnitRec& x, const UnitRec& y) {
            long double s = 0;
            for (std::size_t i = 0; i < x.L.size(); ++i) s += x.L[i] * y.L[i];
            return s;
        };
        for (int it = 0; it < 200; ++it) {
            if (dot(units[0], units[0]) > dot(units[1], units[1])) std::swap(units[0], units[1]);
            long double mu = std::nearbyint(dot(units[0], units[1]) / dot(units[0], units[0]));
            if (mu == 0) break;
            for (std::size_t i = 0; i < units[1].L.size(); ++i) units[1].L[i] -= mu * units[0].L[i];
            if (std::fmod(std::fabs(mu), 2.0L) == 1) units[1].sign ^= units[0].sign;
        }
    }

    // calls on_gen with the sign mask of every generator of I (up to sign) in a region meeting every
    // coset of the found unit subgroup; each cell is searched around its anchor z, inside I z^{-1}
    void generators(const IdealHNF& I, const std::function<bool(u64)>& on_gen) const {
        const i64 N = I.norm();
        std::vector<int> k(static_cast<std::size_t>(urank), 0);
        for (std::size_t cell = 0;; ++cell) {
            const Anchor& Z = anchors[cell];
            const IdealHNF IA = ideal_mul(K.ring(), I, Z.A);
            const i64 NA = mul_checked(N, Z.A.norm());
            const long double l3 = std::log(static_cast<long double>(NA)) / 3;
            std::vector<long double> b(static_cast<std::size_t>(np));
            for (int i = 0; i < np; ++i) {
                long double hi = 0;
                for (int j = 0; j < urank; ++j) {
                    long double lo_t = static_cast<long double>(k[j]) / m[j] - 0.5L;
                    long double hi_t = static_cast<long double>(k[j] + 1) / m[j] - 0.5L;
                    hi += std::max(lo_t * units[j].L[i], hi_t * units[j].L[i]);
                }
                b[i] = l3 + (hi - Z.L[i]) / K.place_degree(i) + 1e-9L;
            }
            auto L = box_lattice(IA, b);
            bool stop = false;
            enumerate_short(L, 3.0L * (1 + 1e-7L), [&](const Elem& x) {
                if (abs128(K.norm(x)) != NA) return true;
                if (!on_gen(Z.sign ^ K.sign_mask(x))) stop = true;
                return !stop;
            });
            if (stop) return;
            int j = 0;
            while (j < urank && ++k[j] == m[j]) k[j++] = 0;
            if (j == urank) return;
        }
    }

    bool principal(const IdealHNF& I) const {
        if (I == unit_ideal()) return true;
        bool found = false;
        generators(I, [&](u64) {
            found = true;
            return false;
        });
        return found;
    }

    // some generator of I has sign mask equal to target modulo unit signs
    bool has_generator_with_sign(const IdealHNF& I, u64 target) const {
        if (I == unit_ideal()) return unit_signs.reduce(target) == 0;
        bool found = false;
        generators(I, [&](u64 s) {
            found = unit_signs.reduce(s ^ target) == 0;
            return !found;
        });
        return found;
    }

    bool narrowly_principal(const IdealHNF& I) const { return has_generator_with_sign(I, 0); }

    // (x) J^{-1} for x in J
    IdealHNF quotient(const Elem& x, const IdealHNF& J) const {
        i64 n = J.norm();
        IdealHNF M = ideal_mul(K.ring(), principal_ideal(K.ring(), x), scaled_inverse(K.ring(), J));
        for (auto& row : M.rows)
            for (auto& c : row) {
                if (c % n) throw std::logic_error("oracle: element not in ideal");
                c /= n;
            }
        return M;
    }

    Elem shortest(const IdealHNF& J) const {
        EmbeddedLattice L{J.rows, K.minkowski(std::vector<long double>(static_cast<std::size_t>(K.nplaces()), 1.0L))};
        lll_reduce(L);
        Elem best = L.basis[0];
        for (const auto& v : L.basis)
            if (L.length2(v) < L.length2(best)) best = v;
        return best;
    }

    // J' = z J with small norm; returns the sign mask of z
    std::pair<IdealHNF, u64> reduce(const IdealHNF& J) const {
        Elem x = shortest(J);
        IdealHNF J1 = quotient(x, J);
        Elem y = shortest(J1);
        IdealHNF J2 = quotient(y, J1);
        return {J2, K.sign_mask(x) ^ K.sign_mask(y)};
    }

    // classes [I] + t and [J] + u, where a mask stands for the class of a principal ideal with those signs
    bool equivalent(const IdealHNF& I, u64 t, const IdealHNF& J, u64 u, bool narrow) const {
        if (!narrow) return I == J || principal(ideal_mul(K.ring(), I, scaled_inverse(K.ring(), J)));
        if (I == J) return unit_signs.reduce(t ^ u) == 0;
        return has_generator_with_sign(ideal_mul(K.ring(), I, scaled_inverse(K.ring(), J)), t ^ u);
    }
};

ClassGroupOracle::ClassGroupOracle(const NumberField& K, PrimeSet s_primes, i64 threshold)
    : K_(K), impl_(std::make_unique<Impl>(K)) {
    if (abs64(K.disc()) > threshold)
        throw ResourceLimitError("oracle: |disc| " + std::to_string(abs64(K.disc())) + " exceeds threshold " +
                                 std::to_string(threshold));
    const long double sqd = std::sqrt(static_cast<long double>(abs64(K.disc())));
    const long double mb = K.r1() == 3 ? (2.0L / 9.0L) * sqd : (8.0L / (9.0L * static_cast<long double>(M_PI))) * sqd;
    PrimeSet primes = primes_up_to(static_cast<i64>(std::floor(mb)));
    for (i64 p : s_primes) primes.push_back(p);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (i64 p : primes)
        for (auto& P : prime_decomposition(K.ring(), p)) base_.push_back(P);
    impl_->find_units();
}

ClassGroupOracle::~ClassGroupOracle() = default;

std::size_t ClassGroupOracle::unit_count() const { return impl_->units.size(); }

bool ClassGroupOracle::is_principal(const IdealHNF& I) const { return impl_->principal(I); }

bool ClassGroupOracle::is_narrowly_principal(const IdealHNF& I) const { return impl_->narrowly_principal(I); }

AbelianGroupData ClassGroupOracle::build(bool narrow) const {
    struct Generator {
        std::size_t base_index;
        IdealHNF ideal;
    };
    const Impl& impl = *impl_;
    const NumberField& K = K_;
    const std::vector<PrimeIdeal>& base = base_;
    const long double sqd = std::sqrt(static_cast<long double>(abs64(K.disc())));
    const long double mb = K.r1() == 3 ? (2.0L / 9.0L) * sqd : (8.0L / (9.0L * static_cast<long double>(M_PI))) * sqd;
    const std::size_t n = base.size();
    const int nsign = narrow && K.r1() == 3 ? 3 : 0;
    const std::size_t nbase = n + static_cast<std::size_t>(nsign);

    std::vector<Generator> gens;
    for (std::size_t j = 0; j < n; ++j)
        if (static_cast<long double>(base[j].norm()) <= mb) gens.push_back({j, base[j].ideal});

    // a state (ideal, mask) stands for the class [ideal] + sum of the sign classes in mask
    std::vector<IdealHNF> reps{unit_ideal()};
    std::vector<u64> masks{0};
    std::vector<std::vector<i64>> words{std::vector<i64>(nbase, 0)};
    IntMatrix rel;
    auto lookup = [&](const IdealHNF& J, u64 t) -> std::ptrdiff_t {
        for (std::size_t m = 0; m < reps.size(); ++m)
            if (impl.equivalent(J, t, reps[m], masks[m], narrow)) return static_cast<std::ptrdiff_t>(m);
        return -1;
    };
    auto visit = [&](const IdealHNF& J, u64 t, std::vector<i64> w) {
        std::ptrdiff_t m = lookup(J, t);
        if (m < 0) {
            reps.push_back(J);
            masks.push_back(t);
            words.push_back(std::move(w));
        } else {
            for (std::size_t c = 0; c < nbase; ++c) w[c] -= words[static_cast<std::size_t>(m)][c];
            rel.push_back(std::move(w));
        }
    };
    const u64 keep = narrow ? ~0ULL : 0;
    for (std::size_t k = 0; k < reps.size(); ++k) {
        if (reps.size() > 4096) throw ResourceLimitError("oracle: class group too large");
        for (const auto& g : gens) {
            auto [J, s] = impl.reduce(ideal_mul(K.ring(), reps[k], g.ideal));
            std::vector<i64> w = words[k];
            ++w[g.base_index];
            visit(J, (masks[k] ^ s) & keep, std::move(w));
        }
        for (int i = 0; i < nsign; ++i) {
            std::vector<i64> w = words[k];
            ++w[n + static_cast<std::size_t>(i)];
            visit(reps[k], masks[k] ^ (1ULL << i), std::move(w));
        }
    }
    // remaining base classes are located among the states
    for (std::size_t j = 0; j < n; ++j) {
        if (static_cast<long double>(base[j].norm()) <= mb) continue;
        auto [J, s] = impl.reduce(base[j].ideal);
        std::ptrdiff_t m = lookup(J, s & keep);
        if (m < 0) throw std::logic_error("oracle: class missing from the Cayley graph");
        std::vector<i64> w(nbase, 0);
        w[j] = 1;
        for (std::size_t c = 0; c < nbase; ++c) w[c] -= words[static_cast<std::size_t>(m)][c];
        rel.push_back(w);
    }
    for (std::size_t c = 0; c < nbase; ++c) {
        std::vector<i64> w(nbase, 0);
        w[c] = static_cast<i64>(reps.size()) * (c < n ? 1 : 2);
        rel.push_back(w);
    }
    std::vector<i64> base_primes;
    for (const auto& P : base) base_primes.push_back(P.p);
    for (int i = 0; i < nsign; ++i) base_primes.push_back(0);
    AbelianGroupData G = group_from_relations(rel, nbase, base_primes);
    if (G.order() != static_cast<i64>(reps.size())) throw std::logic_error("oracle: presentation does not match the class count");
    return G;
}

const AbelianGroupData& ClassGroupOracle::class_group() const {
    if (!cl_) cl_ = std::make_unique<AbelianGroupData>(build(false));
    return *cl_;
}

const AbelianGroupData& ClassGroupOracle::narrow_class_group() const {
    if (K_.r1() != 3) return class_group();
    if (!narrow_) narrow_ = std::make_unique<AbelianGroupData>(build(true));
    return *narrow_;
}

AbelianGroupData ClassGroupOracle::s_quotient(const AbelianGroupData& G, const PrimeSet& S) const {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < G.base_primes.size(); ++j)
        if (G.base_primes[j] != 0 && std::find(S.begin(), S.end(), G.base_primes[j]) != S.end()) idx.push_back(j);
    return quotient_by_base(G, idx);
}

AbelianGroupData oracle_class_group(const NumberField& K, i64 threshold) {
    return ClassGroupOracle(K, {2, 3}, threshold).class_group();
}

AbelianGroupData oracle_narrow_class_group(const NumberField& K, i64 threshold) {
    return ClassGroupOracle(K, {2, 3}, threshold).narrow_class_group();
}

}  // namespace cubic
