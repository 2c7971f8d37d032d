#include "cubic/survey.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "cubic/errors.hpp"

namespace cubic {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- config

std::vector<i64> SurveyConfig::report_points() const {
    std::vector<i64> pts = checkpoints;
    if (pts.empty() || pts.back() != x_max) pts.push_back(x_max);
    return pts;
}

void SurveyConfig::validate() const {
    if (x_max < 1) throw std::invalid_argument("x_max must be positive");
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
        throw std::invalid_argument("checkpoints must be ascending");
    for (i64 x : checkpoints)
        if (x < 1 || x > x_max) throw std::invalid_argument("checkpoint " + std::to_string(x) + " outside [1, x_max]");
    if (shard_size < 1) throw std::invalid_argument("shard_size must be positive");
    if (condition && fixed_nu) throw std::invalid_argument("condition and fixed_nu are exclusive");
    if (condition)
        for (const auto& [p, c] : condition->conditions)
            if (std::find(S.begin(), S.end(), p) == S.end())
                throw std::invalid_argument("condition at " + std::to_string(p) + " but the prime is not in S");
    if (fixed_nu) {
        int n = static_cast<int>(S.size());
        if (*fixed_nu < n || *fixed_nu > 3 * n) throw RangeError("fixed_nu outside [|S|, 3|S|]");
    }
}

namespace {

std::string filter_name(SignatureFilter f) {
    switch (f) {
        case SignatureFilter::TotallyReal: return "real";
        case SignatureFilter::Complex: return "complex";
        default: return "both";
    }
}

SignatureFilter parse_filter(const std::string& s) {
    if (s == "real") return SignatureFilter::TotallyReal;
    if (s == "complex") return SignatureFilter::Complex;
    if (s == "both") return SignatureFilter::Both;
    throw std::invalid_argument("signature must be real, complex or both");
}

}  // namespace

SurveyConfig config_from_json(const json& j) {
    static const std::set<std::string> known{"x_max",   "checkpoints",  "signature",      "s",       "condition",
                                             "fixed_nu", "plus",        "counts_only",    "include_cyclic",
                                             "oracle_threshold", "threads", "cache",      "shard_size"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw std::invalid_argument("unknown config key '" + k + "'");
    SurveyConfig c;
    c.x_max = j.value("x_max", c.x_max);
    c.checkpoints = j.value("checkpoints", c.checkpoints);
    c.signature = parse_filter(j.value("signature", std::string("both")));
    std::vector<i64> s = j.value("s", std::vector<i64>{});
    std::string joined;
    for (i64 p : s) joined += std::to_string(p) + ",";
    c.S = parse_prime_set(joined);
    if (j.contains("condition") && !j["condition"].is_null()) {
        LocalConditionSet cond;
        for (const auto& [p, v] : j["condition"].items()) {
            i64 prime = std::stoll(p);
            if (v.is_string() && v.get<std::string>() == "all") {
                cond.conditions[prime] = std::nullopt;
            } else {
                std::set<SplittingType> ts;
                for (const auto& t : v) ts.insert(parse_splitting(t.get<std::string>()));
                cond.conditions[prime] = ts;
            }
        }
        c.condition = cond;
    }
    if (j.contains("fixed_nu") && !j["fixed_nu"].is_null()) c.fixed_nu = j["fixed_nu"].get<int>();
    c.plus = j.value("plus", c.plus);
    c.counts_only = j.value("counts_only", c.counts_only);
    c.include_cyclic = j.value("include_cyclic", c.include_cyclic);
    c.oracle_threshold = j.value("oracle_threshold", c.oracle_threshold);
    c.threads = j.value("threads", c.threads);
    c.cache = j.value("cache", c.cache);
    c.shard_size = j.value("shard_size", c.shard_size);
    c.validate();
    return c;
}

SurveyConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    return config_from_json(json::parse(in));
}

json config_to_json(const SurveyConfig& c) {
    json j;
    j["x_max"] = c.x_max;
    j["checkpoints"] = c.report_points();
    j["signature"] = filter_name(c.signature);
    j["s"] = c.S;
    if (c.condition) {
        json cond = json::object();
        for (const auto& [p, v] : c.condition->conditions) {
            if (!v) {
                cond[std::to_string(p)] = "all";
                continue;
            }
            json arr = json::array();
            for (const auto& t : *v) arr.push_back(to_string(t));
            cond[std::to_string(p)] = arr;
        }
        j["condition"] = cond;
    } else {
        j["condition"] = nullptr;
    }
    j["fixed_nu"] = c.fixed_nu ? json(*c.fixed_nu) : json(nullptr);
    j["plus"] = c.plus;
    j["counts_only"] = c.counts_only;
    j["include_cyclic"] = c.include_cyclic;
    j["oracle_threshold"] = c.oracle_threshold;
    return j;
}

// ---------------------------------------------------------------- cache

void cache_write(const std::string& path, const std::string& header, const std::vector<CubicFieldRecord>& records) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << header << '\n';
        for (const auto& r : records) out << serialize(r) << '\n';
        out << "# end count=" << records.size() << '\n';
        if (!out) throw std::runtime_error("write failed on " + tmp);
    }
    fs::rename(tmp, path);
}

std::optional<std::vector<CubicFieldRecord>> cache_read(const std::string& path, const std::string& header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line) || line != header) return std::nullopt;
    std::vector<CubicFieldRecord> out;
    std::size_t line_no = 1;
    const std::string trailer = "# end count=";
    while (std::getline(in, line)) {
        ++line_no;
        if (line.rfind(trailer, 0) == 0) {
            std::size_t n = 0;
            try {
                n = std::stoull(line.substr(trailer.size()));
            } catch (const std::exception&) {
                throw CorruptRecordError(line_no, path + ": bad trailer");
            }
            if (n != out.size())
                throw CorruptRecordError(line_no, path + ": trailer says " + std::to_string(n) + " records, found " +
                                                      std::to_string(out.size()));
            std::string rest;
            while (std::getline(in, rest)) {
                ++line_no;
                if (!rest.empty()) throw CorruptRecordError(line_no, path + ": data after trailer");
            }
            return out;
        }
        out.push_back(deserialize(line, line_no));
    }
    return std::nullopt;  // interrupted before the trailer
}

std::vector<CubicFieldRecord> merge_records(std::vector<std::vector<CubicFieldRecord>> parts) {
    std::vector<CubicFieldRecord> all;
    for (auto& p : parts)
        for (auto& r : p) all.push_back(std::move(r));
    std::stable_sort(all.begin(), all.end(), [](const CubicFieldRecord& x, const CubicFieldRecord& y) {
        return field_order(x.form, x.disc, y.form, y.disc);
    });
    std::vector<CubicFieldRecord> out;
    for (auto& r : all) {
        if (!out.empty() && out.back().form == r.form) {
            if (!(out.back() == r))
                throw CorruptRecordError(0, "conflicting records for form " + to_string(r.form));
            continue;
        }
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------- computation

namespace {

std::vector<PrimeSet> s_sets_for(const SurveyConfig& cfg) {
    std::vector<PrimeSet> sets{{}, {2}, {2, 3}};
    if (std::find(sets.begin(), sets.end(), cfg.S) == sets.end()) sets.push_back(cfg.S);
    return sets;
}

PrimeSet primes_for(const SurveyConfig& cfg) {
    PrimeSet p = record_primes(s_sets_for(cfg));
    if (cfg.condition)
        for (i64 q : cfg.condition->primes()) p.push_back(q);
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    return p;
}

std::string shard_header(const SurveyConfig& cfg, i64 lo, i64 hi) {
    std::ostringstream h;
    h << "# cubicstat-cache v1 range=" << lo << "," << hi << " sig=" << filter_name(cfg.signature)
      << " cyclic=" << (cfg.include_cyclic ? 1 : 0) << " mode=" << (cfg.counts_only ? "counts" : "full")
      << " primes=" << to_string(primes_for(cfg)) << " sets=";
    bool first = true;
    for (const auto& S : s_sets_for(cfg)) {
        h << (first ? "" : ";") << "{" << to_string(S) << "}";
        first = false;
    }
    h << " oracle=" << cfg.oracle_threshold;
    return h.str();
}

std::vector<CubicFieldRecord> compute_shard(const SurveyConfig& cfg, i64 lo, i64 hi) {
    EnumerateOptions opt;
    opt.min_abs_disc = lo;
    opt.max_abs_disc = hi;
    opt.signature = cfg.signature;
    opt.include_cyclic = cfg.include_cyclic;
    const PrimeSet primes = primes_for(cfg);
    InvariantOptions iopt;
    iopt.s_sets = s_sets_for(cfg);
    iopt.oracle_threshold = cfg.oracle_threshold;
    std::vector<CubicFieldRecord> out;
    for (const auto& f : enumerate_forms(opt)) {
        CubicFieldRecord r = make_record(f, primes);
        if (!cfg.counts_only) r.inv = compute_invariants(f, iopt);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

std::vector<CubicFieldRecord> collect_records(const SurveyConfig& cfg, const SurveyControl& ctl, bool* complete) {
    cfg.validate();
    struct Shard {
        i64 lo, hi;
    };
    std::vector<Shard> shards;
    for (i64 lo = 0; lo < cfg.x_max; lo += cfg.shard_size) shards.push_back({std::max<i64>(lo, 1), std::min(lo + cfg.shard_size, cfg.x_max)});
    if (!cfg.cache.empty()) fs::create_directories(cfg.cache);

    std::vector<std::vector<CubicFieldRecord>> parts(shards.size());
    std::vector<char> done(shards.size(), 0);
    std::atomic<std::size_t> next{0}, fresh{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&] {
        for (;;) {
            std::size_t k = next++;
            if (k >= shards.size()) return;
            try {
                const Shard& s = shards[k];
                std::string path, header;
                if (!cfg.cache.empty()) {
                    path = (fs::path(cfg.cache) / ("shard_" + std::to_string(s.lo) + "_" + std::to_string(s.hi) + ".tsv")).string();
                    header = shard_header(cfg, s.lo, s.hi);
                    if (auto cached = cache_read(path, header)) {
                        parts[k] = std::move(*cached);
                        done[k] = 1;
                        continue;
                    }
                }
                if (fresh++ >= ctl.max_new_shards) continue;
                parts[k] = compute_shard(cfg, s.lo, s.hi);
                if (!path.empty()) cache_write(path, header, parts[k]);
                done[k] = 1;
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                next = shards.size();
            }
        }
    };
    const unsigned nt = std::max(1u, cfg.threads);
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (err) std::rethrow_exception(err);
    if (complete) *complete = std::all_of(done.begin(), done.end(), [](char c) { return c != 0; });
    return merge_records(std::move(parts));
}

// ---------------------------------------------------------------- aggregation

namespace {

i64 tt(const std::vector<i64>& divs) {
    i64 c = 1;
    for (i64 d : divs)
        if (d % 2 == 0) c *= 2;
    return c;
}

i64 order(const std::vector<i64>& divs) {
    i64 c = 1;
    for (i64 d : divs) c *= d;
    return c;
}

// every condition a single descriptor: r = sum (r_p - 1)
std::optional<int> single_descriptor_r(const LocalConditionSet& c) {
    int r = 0;
    for (const auto& [p, v] : c.conditions) {
        if (!v || v->size() != 1) return std::nullopt;
        r += v->begin()->r() - 1;
    }
    return r;
}

struct Sums {
    i64 cl = 0, clp = 0, two_nu = 0, nucl = 0, nuclp = 0, sel = 0;
    std::array<i64, 4> k{};
    i64 c1 = 0, c2 = 0, c3 = 0;
};

}  // namespace

const SurveyStat* CheckpointRow::find(const std::string& name) const {
    for (const auto& s : stats)
        if (s.name == name) return &s;
    return nullptr;
}

SurveyReport aggregate(const SurveyConfig& cfg, const std::vector<CubicFieldRecord>& records) {
    SurveyReport rep;
    rep.config = cfg;
    std::vector<Signature> sigs;
    if (cfg.signature != SignatureFilter::Complex) sigs.push_back(Signature::TotallyReal);
    if (cfg.signature != SignatureFilter::TotallyReal) sigs.push_back(Signature::Complex);
    const bool plain = !cfg.condition && !cfg.fixed_nu;
    const int nS = static_cast<int>(cfg.S.size());

    for (i64 X : cfg.report_points())
        for (Signature sig : sigs) {
            CheckpointRow row;
            row.X = X;
            row.signature = sig;
            const bool real = sig == Signature::TotallyReal;
            Sums s;
            for (const auto& r : records) {
                if (abs64(r.disc) >= X || r.signature != sig) continue;
                if (r.is_cyclic && !cfg.include_cyclic) continue;
                if (cfg.condition && !matches_condition(r.splitting, *cfg.condition)) continue;
                const int nu = nu_S(r.splitting, cfg.S);
                if (cfg.fixed_nu && nu != *cfg.fixed_nu) continue;
                if (cfg.counts_only || !r.inv) {
                    ++row.count;
                    continue;
                }
                const FieldInvariants& inv = *r.inv;
                if (inv.status != FieldStatus::Ok) {
                    ++row.excluded_certification;
                    continue;
                }
                const SInvariants& si = inv.at(cfg.S);
                if (!si.saturated) {
                    ++row.excluded_saturation;
                    continue;
                }
                ++row.count;
                if (inv.oracle != OracleCheck::Skipped) {
                    ++row.oracle_checked;
                    if (inv.oracle == OracleCheck::Disagree) ++row.oracle_mismatch;
                }
                if (si.selmer_formula != si.selmer_exact || si.selmer_exact != si.selmer_direct) ++row.selmer_route_mismatch;
                const i64 c2 = tt(si.cl_s), cp2 = tt(si.cl_plus_s), pnu = i64(1) << nu;
                s.cl += c2;
                s.clp += cp2;
                s.two_nu += pnu;
                s.nucl += pnu * c2;
                s.nuclp += pnu * cp2;
                s.sel += i64(1) << si.selmer_formula;
                for (int n = 0; n < 4; ++n) s.k[n] += i64(1) << record_k_rank(r, n);
                if (real) {
                    bool i = cp2 == 1, ii = order(si.cl_plus_s) == order(si.cl_s), iii = si.sign_rank == 3;
                    s.c1 += i;
                    s.c2 += ii;
                    s.c3 += iii;
                    if ((i && !ii) || (ii && !iii)) ++row.nesting_violations;
                }
            }

            if (cfg.counts_only) {
                SurveyStat st{"field_count", Rational(row.count), std::nullopt, std::nullopt, "", false};
                if (!cfg.fixed_nu) {
                    st.predicted_real = predict_field_count(sig, Real50(X), cfg.condition.value_or(LocalConditionSet{}));
                    st.prediction_op = "predict_field_count";
                }
                row.stats.push_back(st);
                rep.rows.push_back(std::move(row));
                continue;
            }
            if (row.count == 0) {
                rep.rows.push_back(std::move(row));
                continue;
            }
            const Rational n(row.count);
            auto add = [&](const std::string& name, i64 sum, std::optional<Rational> pred, const std::string& op,
                           bool bound = false) {
                SurveyStat st;
                st.name = name;
                st.empirical = Rational(sum) / n;
                st.predicted = pred;
                st.prediction_op = pred ? op : "";
                st.lower_bound = bound;
                row.stats.push_back(std::move(st));
            };
            using O = std::optional<Rational>;
            // Cl_S[2]
            if (plain) {
                add("cl_s_2", s.cl, predict_cl_avg(sig, false, cfg.S), "predict_cl_avg");
            } else if (cfg.fixed_nu) {
                add("cl_s_2", s.cl, predict_cl_avg_fixed_nu(sig, false, nS, *cfg.fixed_nu), "predict_cl_avg_fixed_nu");
            } else if (auto r = single_descriptor_r(*cfg.condition)) {
                add("cl_s_2", s.cl, predict_cl_avg_conditioned(sig, false, *r), "predict_cl_avg_conditioned");
            } else {
                add("cl_s_2", s.cl, predict_cl_avg_local(sig, false, *cfg.condition), "predict_cl_avg_local");
            }
            if (cfg.plus && real) {
                if (plain) {
                    add("cl_plus_s_2", s.clp, predict_cl_avg(sig, true, cfg.S), "predict_cl_avg");
                } else if (cfg.fixed_nu) {
                    add("cl_plus_s_2", s.clp, predict_cl_avg_fixed_nu(sig, true, nS, *cfg.fixed_nu), "predict_cl_avg_fixed_nu");
                } else if (auto r = single_descriptor_r(*cfg.condition)) {
                    add("cl_plus_s_2", s.clp, predict_cl_avg_conditioned(sig, true, *r), "predict_cl_avg_conditioned");
                } else {
                    add("cl_plus_s_2", s.clp, predict_cl_avg_local(sig, true, *cfg.condition), "predict_cl_avg_local");
                }
            }
            add("two_nu", s.two_nu, plain ? O(predict_2nu_avg(cfg.S)) : std::nullopt, "predict_2nu_avg");
            if (cfg.fixed_nu)
                add("two_nu_cl_s_2", s.nucl, predict_fixed_nu(sig, false, nS, *cfg.fixed_nu), "predict_fixed_nu");
            else
                add("two_nu_cl_s_2", s.nucl, plain ? O(predict_2nu_cl_avg(sig, false, cfg.S)) : std::nullopt,
                    "predict_2nu_cl_avg");
            if (cfg.plus && real) {
                if (cfg.fixed_nu)
                    add("two_nu_cl_plus_s_2", s.nuclp, predict_fixed_nu(sig, true, nS, *cfg.fixed_nu), "predict_fixed_nu");
                else
                    add("two_nu_cl_plus_s_2", s.nuclp, plain ? O(predict_2nu_cl_avg(sig, true, cfg.S)) : std::nullopt,
                        "predict_2nu_cl_avg");
            }
            add("selmer", s.sel, plain ? O(predict_selmer_avg(sig, cfg.S)) : std::nullopt, "predict_selmer_avg");
            for (int k = 0; k < 4; ++k)
                add("k_card_n" + std::to_string(k), s.k[k], plain ? O(predict_kgroup_avg(sig, k)) : std::nullopt,
                    "predict_kgroup_avg");
            if (cfg.plus && real) {
                O floor = plain ? O(predict_cor13_bound(cfg.S)) : std::nullopt;
                add("cor13_i", s.c1, floor, "predict_cor13_bound", true);
                add("cor13_ii", s.c2, floor, "predict_cor13_bound", true);
                add("cor13_iii", s.c3, floor, "predict_cor13_bound", true);
            }
            rep.rows.push_back(std::move(row));
        }
    return rep;
}

SurveyReport run_survey(const SurveyConfig& cfg, const SurveyControl& ctl) {
    bool complete = true;
    auto records = collect_records(cfg, ctl, &complete);
    SurveyReport rep = aggregate(cfg, records);
    rep.complete = complete;
    return rep;
}

// ---------------------------------------------------------------- rendering

namespace {

std::string real_decimal(const Real50& x) { return x.str(12, std::ios::fixed); }

Real50 to_real(const Rational& q) {
    return Real50(boost::multiprecision::numerator(q)) / Real50(boost::multiprecision::denominator(q));
}

std::string deviation(const SurveyStat& s) {
    if (s.predicted) return to_decimal(s.empirical - *s.predicted, 12);
    if (s.predicted_real) return real_decimal(to_real(s.empirical) - *s.predicted_real);
    return "";
}

std::string predicted_exact(const SurveyStat& s) { return s.predicted ? to_string(*s.predicted) : ""; }

std::string predicted_decimal(const SurveyStat& s) {
    if (s.predicted) return to_decimal(*s.predicted, 12);
    if (s.predicted_real) return real_decimal(*s.predicted_real);
    return "";
}

}  // namespace

std::string report_json(const SurveyReport& r) {
    json j;
    j["config"] = config_to_json(r.config);
    j["complete"] = r.complete;
    json rows = json::array();
    for (const auto& row : r.rows) {
        json o;
        o["X"] = row.X;
        o["signature"] = to_string(row.signature);
        o["count"] = row.count;
        o["excluded_saturation"] = row.excluded_saturation;
        o["excluded_certification"] = row.excluded_certification;
        o["oracle_checked"] = row.oracle_checked;
        o["oracle_mismatch"] = row.oracle_mismatch;
        o["selmer_route_mismatch"] = row.selmer_route_mismatch;
        o["nesting_violations"] = row.nesting_violations;
        json stats = json::array();
        for (const auto& s : row.stats) {
            json st;
            st["name"] = s.name;
            st["empirical"] = to_string(s.empirical);
            st["empirical_decimal"] = to_decimal(s.empirical, 12);
            if (s.predicted || s.predicted_real) {
                st["predicted"] = s.predicted ? json(predicted_exact(s)) : json(nullptr);
                st["predicted_decimal"] = predicted_decimal(s);
                st["deviation"] = deviation(s);
                st["prediction"] = s.prediction_op;
                st["lower_bound"] = s.lower_bound;
            }
            stats.push_back(st);
        }
        o["stats"] = stats;
        rows.push_back(o);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::string report_csv(const SurveyReport& r) {
    std::ostringstream o;
    o << "X,signature,count,excluded_saturation,excluded_certification,stat,empirical,empirical_decimal,predicted,"
         "predicted_decimal,deviation,prediction,lower_bound\n";
    for (const auto& row : r.rows) {
        const std::string head = std::to_string(row.X) + "," + to_string(row.signature) + "," + std::to_string(row.count) +
                                 "," + std::to_string(row.excluded_saturation) + "," +
                                 std::to_string(row.excluded_certification) + ",";
        if (row.stats.empty()) o << head << ",,,,,,,\n";
        for (const auto& s : row.stats)
            o << head << s.name << ',' << to_string(s.empirical) << ',' << to_decimal(s.empirical, 12) << ','
              << predicted_exact(s) << ',' << predicted_decimal(s) << ',' << deviation(s) << ',' << s.prediction_op << ','
              << (s.predicted || s.predicted_real ? (s.lower_bound ? "1" : "0") : "") << '\n';
    }
    return o.str();
}

}  // namespace cubic
