#include <doctest.h>

#include <filesystem>
#include <random>

#include "cubic/survey.hpp"

using namespace cubic;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("cubic-survey-" + tag + "-" + std::to_string(std::random_device{}()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

SurveyConfig small_config() {
    SurveyConfig c;
    c.x_max = 4000;
    c.checkpoints = {1000, 2500};
    c.S = {2};
    c.plus = true;
    c.oracle_threshold = 4000;
    c.shard_size = 1000;
    return c;
}

}  // namespace

TEST_CASE("survey of the first complex field") {
    SurveyConfig c;
    c.x_max = 30;
    c.signature = SignatureFilter::Complex;
    auto rep = run_survey(c);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].count == 1);
    REQUIRE(rep.rows[0].find("cl_s_2"));
    CHECK(rep.rows[0].find("cl_s_2")->empirical == 1);
    CHECK(*rep.rows[0].find("cl_s_2")->predicted == Rational(3) / 2);
}

TEST_CASE("averages are exact ratios of integer sums") {
    SurveyConfig c;
    c.x_max = 2000;
    c.signature = SignatureFilter::TotallyReal;
    auto recs = collect_records(c);
    i64 n = 0, sum = 0;
    for (const auto& r : recs) {
        if (r.is_cyclic) continue;
        ++n;
        i64 t = 1;
        for (i64 d : r.inv->cl()) t *= d % 2 == 0 ? 2 : 1;
        sum += t;
    }
    auto rep = aggregate(c, recs);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].count == n);
    CHECK(rep.rows[0].find("cl_s_2")->empirical == Rational(sum) / n);
}

TEST_CASE("reports do not depend on threads, shards or interruptions") {
    SurveyConfig base = small_config();
    const std::string fresh = report_json(run_survey(base)) + report_csv(run_survey(base));

    TempDir dir("determinism");
    SurveyConfig threaded = base;
    threaded.threads = 3;
    threaded.cache = dir.sub("a");
    CHECK(report_json(run_survey(threaded)) + report_csv(run_survey(threaded)) == fresh);

    SurveyConfig resharded = base;
    resharded.shard_size = 700;
    resharded.cache = dir.sub("b");
    SurveyControl stop;
    stop.max_new_shards = 2;
    auto partial = run_survey(resharded, stop);
    CHECK_FALSE(partial.complete);
    auto resumed = run_survey(resharded);
    CHECK(resumed.complete);
    CHECK(report_json(resumed) + report_csv(resumed) == fresh);
}

TEST_CASE("report structure") {
    SurveyConfig c = small_config();
    auto rep = run_survey(c);
    CHECK(rep.rows.size() == 6);
    i64 prev_real = 0, prev_complex = 0;
    for (const auto& row : rep.rows) {
        i64& prev = row.signature == Signature::TotallyReal ? prev_real : prev_complex;
        CHECK(row.count >= prev);
        prev = row.count;
        CHECK(row.oracle_mismatch == 0);
        CHECK(row.oracle_checked == row.count);
        CHECK(row.selmer_route_mismatch == 0);
        CHECK(row.nesting_violations == 0);
        for (const auto& st : row.stats) CHECK(st.prediction_op.empty() == !(st.predicted || st.predicted_real));
        if (row.signature == Signature::TotallyReal) {
            CHECK(row.find("cl_plus_s_2"));
            CHECK(row.find("cor13_i"));
            CHECK(*row.find("cor13_iii")->predicted == Rational(5) / 14);
        } else {
            CHECK_FALSE(row.find("cl_plus_s_2"));
        }
    }
    const std::string csv = report_csv(rep);
    CHECK(csv.rfind("X,signature,count,excluded_saturation,excluded_certification,stat,", 0) == 0);
    auto j = nlohmann::json::parse(report_json(rep));
    CHECK(j["config"]["x_max"] == 4000);
    CHECK(j["rows"].size() == 6);
}

TEST_CASE("conditioned and fixed-nu surveys") {
    SurveyConfig c = small_config();
    c.oracle_threshold = 0;
    auto recs = collect_records(c);

    SurveyConfig split = c;
    LocalConditionSet sigma;
    sigma.conditions[2] = std::set<SplittingType>{parse_splitting("split")};
    split.condition = sigma;
    for (const auto& row : aggregate(split, recs).rows) {
        if (!row.count) continue;
        const auto* st = row.find("cl_s_2");
        CHECK(st->prediction_op == "predict_cl_avg_conditioned");
        CHECK(*st->predicted == predict_cl_avg_conditioned(row.signature, false, 2));
    }
    i64 split_fields = 0;
    for (const auto& r : recs)
        if (!r.is_cyclic && abs64(r.disc) < 4000 && r.splitting.at(2).r() == 3) ++split_fields;
    i64 counted = 0;
    for (const auto& row : aggregate(split, recs).rows)
        if (row.X == 4000) counted += row.count;
    CHECK(counted == split_fields);

    SurveyConfig nu = c;
    nu.fixed_nu = 2;
    for (const auto& row : aggregate(nu, recs).rows)
        if (row.count) CHECK(row.find("two_nu")->empirical == 4);
}

TEST_CASE("config parsing") {
    auto j = nlohmann::ordered_json::parse(R"({"x_max": 5000, "checkpoints": [1000], "signature": "real",
        "s": [2], "condition": {"2": ["inert"]}, "plus": true})");
    SurveyConfig c = config_from_json(j);
    CHECK(c.x_max == 5000);
    CHECK(c.S == PrimeSet{2});
    CHECK(c.condition->conditions.at(2)->count(parse_splitting("inert")));
    CHECK(config_from_json(config_to_json(c)).report_points() == c.report_points());

    CHECK_THROWS(config_from_json(nlohmann::ordered_json::parse(R"({"x_max": 10, "colour": 1})")));
    CHECK_THROWS(config_from_json(nlohmann::ordered_json::parse(R"({"x_max": 10, "checkpoints": [5, 3]})")));
    CHECK_THROWS(config_from_json(nlohmann::ordered_json::parse(R"({"x_max": 10, "checkpoints": [50]})")));
    CHECK_THROWS(config_from_json(nlohmann::ordered_json::parse(R"({"x_max": 10, "s": [2], "fixed_nu": 7})")));
    CHECK_THROWS(config_from_json(nlohmann::ordered_json::parse(R"({"x_max": 10, "condition": {"3": "all"}})")));
}
