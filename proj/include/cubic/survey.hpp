#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubic/densities.hpp"
#include "cubic/record.hpp"

namespace cubic {

struct SurveyConfig {
    i64 x_max = 10000;
    std::vector<i64> checkpoints;  // ascending, each <= x_max; x_max is always reported
    SignatureFilter signature = SignatureFilter::Both;
    PrimeSet S;
    std::optional<LocalConditionSet> condition;
    std::optional<int> fixed_nu;
    bool plus = false;
    bool counts_only = false;
    bool include_cyclic = false;
    i64 oracle_threshold = 0;
    unsigned threads = 1;
    std::string cache;  // directory of shard files; empty disables caching
    i64 shard_size = 10000;

    std::vector<i64> report_points() const;
    void validate() const;
};

SurveyConfig config_from_json(const nlohmann::ordered_json& j);
SurveyConfig load_config(const std::string& path);
// the fields that affect results (no thread count, shard size or cache location)
nlohmann::ordered_json config_to_json(const SurveyConfig& cfg);

// one empirical value paired with at most one prediction
struct SurveyStat {
    std::string name;
    Rational empirical;
    std::optional<Rational> predicted;
    std::optional<Real50> predicted_real;  // predictions that involve zeta(3)
    std::string prediction_op;
    bool lower_bound = false;  // prediction is a floor, not a limit
};

struct CheckpointRow {
    i64 X = 0;
    Signature signature = Signature::Complex;
    i64 count = 0;
    i64 excluded_saturation = 0;
    i64 excluded_certification = 0;
    i64 oracle_checked = 0, oracle_mismatch = 0;
    i64 selmer_route_mismatch = 0;
    i64 nesting_violations = 0;
    std::vector<SurveyStat> stats;
    const SurveyStat* find(const std::string& name) const;
};

struct SurveyReport {
    SurveyConfig config;
    bool complete = true;
    std::vector<CheckpointRow> rows;
};

struct SurveyControl {
    // stop after computing this many shards that were not cached (simulates an interruption)
    std::size_t max_new_shards = std::numeric_limits<std::size_t>::max();
};

std::vector<CubicFieldRecord> collect_records(const SurveyConfig& cfg, const SurveyControl& ctl = {},
                                              bool* complete = nullptr);
SurveyReport run_survey(const SurveyConfig& cfg, const SurveyControl& ctl = {});
SurveyReport aggregate(const SurveyConfig& cfg, const std::vector<CubicFieldRecord>& records);

std::string report_json(const SurveyReport& r);
std::string report_csv(const SurveyReport& r);

// shard files: a header line, records, then "# end count=N"
void cache_write(const std::string& path, const std::string& header, const std::vector<CubicFieldRecord>& records);
// nullopt when the file is missing, has another header or lacks its trailer; throws CorruptRecordError
std::optional<std::vector<CubicFieldRecord>> cache_read(const std::string& path, const std::string& header);
// concatenation in canonical order; identical duplicates collapse, conflicting ones throw
std::vector<CubicFieldRecord> merge_records(std::vector<std::vector<CubicFieldRecord>> parts);

}  // namespace cubic
