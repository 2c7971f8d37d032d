#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "cubic/record.hpp"
#include "cubic/survey.hpp"

using namespace cubic;
namespace fs = std::filesystem;

namespace {

std::vector<i64> random_divisors(std::mt19937_64& rng) {
    std::vector<i64> d;
    i64 cur = 1;
    const int n = static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
        cur *= 2 + static_cast<i64>(rng() % 3);
        d.push_back(cur);
    }
    return d;
}

CubicFieldRecord random_record(std::mt19937_64& rng) {
    std::uniform_int_distribution<i64> c(-30, 30);
    CubicFieldRecord r;
    do {
        r.form = {c(rng), c(rng), c(rng), c(rng)};
        r.disc = disc(r.form);
    } while (r.disc == 0);
    r.signature = r.disc > 0 ? Signature::TotallyReal : Signature::Complex;
    r.is_cyclic = rng() % 5 == 0;
    const auto& all = all_descriptors();
    for (i64 p : {2, 3, 5})
        if (rng() % 4) r.splitting[p] = all[rng() % all.size()];
    if (rng() % 4 == 0) return r;

    FieldInvariants inv;
    inv.status = rng() % 10 ? FieldStatus::Ok : FieldStatus::CertificationFailed;
    inv.oracle = static_cast<OracleCheck>(rng() % 3);
    const int width = r.signature == Signature::TotallyReal ? 3 : 1;
    for (const PrimeSet& S : {PrimeSet{}, PrimeSet{2}, PrimeSet{2, 3}, PrimeSet{5}}) {
        if (!S.empty() && rng() % 3 == 0) continue;
        SInvariants si;
        si.cl_s = random_divisors(rng);
        si.cl_plus_s = random_divisors(rng);
        si.saturated = rng() % 7 != 0;
        si.sign_rank = static_cast<int>(rng() % (width + 1));
        const int rows = static_cast<int>(rng() % 5);
        for (int k = 0; k < rows; ++k) si.unit_signs.push_back(rng() & ((u64(1) << width) - 1));
        si.selmer_formula = static_cast<int>(rng() % 12) - 1;
        si.selmer_exact = static_cast<int>(rng() % 12) - 1;
        si.selmer_direct = static_cast<int>(rng() % 12) - 1;
        inv.by_s[S] = si;
    }
    r.inv = inv;
    return r;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("cubic-test-" + tag + "-" + std::to_string(std::random_device{}()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    for (const auto& l : lines) out << l << '\n';
}

}  // namespace

TEST_CASE("record text round trip") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 1000; ++i) {
        CubicFieldRecord r = random_record(rng);
        const std::string line = serialize(r);
        CHECK(line.find('\n') == std::string::npos);
        CHECK(deserialize(line, 1) == r);
        CHECK(serialize(deserialize(line, 1)) == line);
    }
}

TEST_CASE("real records round trip") {
    InvariantOptions opt;
    opt.oracle_threshold = 1000;
    for (const auto& r0 : enumerate(1000, SignatureFilter::Both, false)) {
        CubicFieldRecord r = make_record(r0.form, record_primes(opt.s_sets));
        r.inv = compute_invariants(r.form, opt);
        CHECK(r.inv->oracle == OracleCheck::Agree);
        CHECK(deserialize(serialize(r), 7) == r);
    }
}

TEST_CASE("cache files round trip") {
    TempDir dir("roundtrip");
    std::mt19937_64 rng(42);
    std::vector<CubicFieldRecord> recs;
    for (int i = 0; i < 1000; ++i) recs.push_back(random_record(rng));
    cache_write(dir.file("a.tsv"), "# header", recs);
    auto back = cache_read(dir.file("a.tsv"), "# header");
    REQUIRE(back);
    CHECK(*back == recs);
    CHECK_FALSE(cache_read(dir.file("a.tsv"), "# other header"));
    CHECK_FALSE(cache_read(dir.file("missing.tsv"), "# header"));
}

TEST_CASE("corrupt cache lines report their line number") {
    TempDir dir("corrupt");
    std::mt19937_64 rng(43);
    const std::string good = serialize(random_record(rng));

    write_lines(dir.file("bad.tsv"), {"# h", good, "1,0,-1,-1\t-24\tcomplex\t0\t\t-", "# end count=2"});
    try {
        (void)cache_read(dir.file("bad.tsv"), "# h");
        FAIL("no error raised");
    } catch (const CorruptRecordError& e) {
        CHECK(e.line_no == 3);
    }

    write_lines(dir.file("garbage.tsv"), {"# h", "not a record"});
    CHECK_THROWS_AS(cache_read(dir.file("garbage.tsv"), "# h"), CorruptRecordError);

    write_lines(dir.file("count.tsv"), {"# h", good, "# end count=5"});
    CHECK_THROWS_AS(cache_read(dir.file("count.tsv"), "# h"), CorruptRecordError);

    write_lines(dir.file("after.tsv"), {"# h", good, "# end count=1", good});
    try {
        (void)cache_read(dir.file("after.tsv"), "# h");
        FAIL("no error raised");
    } catch (const CorruptRecordError& e) {
        CHECK(e.line_no == 4);
    }

    // a shard cut off before its trailer is recomputed, not trusted
    write_lines(dir.file("cut.tsv"), {"# h", good});
    CHECK_FALSE(cache_read(dir.file("cut.tsv"), "# h"));

    CHECK_THROWS_AS(deserialize("1,0,-1,-1\t-23\treal\t0\t\t-", 9), CorruptRecordError);
    CHECK_THROWS_AS(deserialize("1,0,-1\t-23\tcomplex\t0\t\t-", 9), CorruptRecordError);
    CHECK_THROWS_AS(deserialize("1,0,-1,-1\t-23\tcomplex\t2\t\t-", 9), CorruptRecordError);
}

TEST_CASE("merging keeps one copy of identical records") {
    auto recs = enumerate(3000, SignatureFilter::Both, false);
    REQUIRE(recs.size() > 10);
    std::vector<CubicFieldRecord> a(recs.begin(), recs.begin() + 8), b(recs.begin() + 5, recs.end());
    auto merged = merge_records({b, a});
    CHECK(merged == recs);

    auto conflicting = recs[3];
    conflicting.is_cyclic = !conflicting.is_cyclic;
    CHECK_THROWS_AS(merge_records({recs, {conflicting}}), CorruptRecordError);
}
