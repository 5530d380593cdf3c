#include "regrepair/errors.hpp"
#include "regrepair/serialize.hpp"
#include "regrepair/validator.hpp"

#include <doctest.h>

#include "testutil.hpp"

#include <random>

using namespace regrepair;
using testutil::FixtureBugOptions;
using testutil::TempDir;

namespace {

// The six-bug fixture store: one rejection per stage plus two confirmations.
void make_six_bug_store(const std::filesystem::path& store) {
    FixtureBugOptions date_reject;
    date_reject.fixing_date = "2016-11-02";
    date_reject.manifest_only = true;
    testutil::make_fixture_bug(store, "bug-1-date", date_reject);

    FixtureBugOptions exec_reject;
    exec_reject.compile_fail_role = SnapshotRole::PreInducing;
    testutil::make_fixture_bug(store, "bug-2-exec", exec_reject);

    FixtureBugOptions validity_reject;
    validity_reject.witness_pattern = "PPPP";
    testutil::make_fixture_bug(store, "bug-3-validity", validity_reject);

    FixtureBugOptions utility_reject;
    utility_reject.extra_failing_on_prefixing = true;
    testutil::make_fixture_bug(store, "bug-4-utility", utility_reject);

    testutil::make_fixture_bug(store, "bug-5-ok");
    testutil::make_fixture_bug(store, "bug-6-ok");
}

}  // namespace

TEST_CASE("date comparison is day-granular and lexicographic") {
    CHECK(date_on_or_after("2017-06-01", "2017-06-01"));
    CHECK(date_on_or_after("2019-03-07", "2017-06-01"));
    CHECK_FALSE(date_on_or_after("2017-05-31", "2017-06-01"));
    CHECK(date_on_or_after("2017-06-01T09:30:00Z", "2017-06-01"));
    CHECK_THROWS_AS(date_on_or_after("junk", "2017-06-01"), Error);
}

TEST_CASE("six-bug fixture store produces the designed stage counts") {
    TempDir tmp;
    make_six_bug_store(tmp.path() / "store");
    BugStore store(tmp.path() / "store");
    auto adapter = make_default_adapter();

    FunnelOptions options;
    options.date_cutoff = "2017-06-01";
    FunnelReport report =
        run_funnel(store, store.list_bugs(), tmp.path() / "work", *adapter, options);

    CHECK(report.input == 6);
    CHECK(report.rejected_date == 1);
    CHECK(report.rejected_executability == 1);
    CHECK(report.rejected_validity == 1);
    CHECK(report.rejected_utility == 1);
    CHECK(report.confirmed == 2);

    // Counts partition the input.
    CHECK(report.rejected_date + report.rejected_executability + report.rejected_validity +
              report.rejected_utility + report.confirmed ==
          report.input);

    for (const auto& [bug_id, verdict] : report.verdicts) {
        // Matrix present iff the validity step ran.
        bool expect_matrix = verdict.stage == FunnelStage::RejectedValidity ||
                             verdict.stage == FunnelStage::RejectedUtility ||
                             verdict.stage == FunnelStage::Confirmed;
        CHECK(verdict.matrix.has_value() == expect_matrix);
        if (verdict.stage == FunnelStage::Confirmed) CHECK(is_regression(*verdict.matrix));
        if (bug_id == "bug-2-exec")
            CHECK(verdict.detail.find("pre-inducing") != std::string::npos);
    }

    Json json = funnel_report_to_json(report);
    CHECK(json.at("input") == 6);
    CHECK(json.at("confirmed") == 2);
    CHECK(json.at("verdicts").size() == 6);
}

TEST_CASE("funnel handles empty candidate lists") {
    TempDir tmp;
    std::filesystem::create_directories(tmp.path() / "store");
    BugStore store(tmp.path() / "store");
    auto adapter = make_default_adapter();
    FunnelReport report = run_funnel(store, {}, tmp.path() / "work", *adapter, {});
    CHECK(report.input == 0);
    CHECK(report.confirmed == 0);
}

TEST_CASE("rejected bugs receive no adapter calls at later stages") {
    TempDir tmp;
    make_six_bug_store(tmp.path() / "store");
    BugStore store(tmp.path() / "store");
    auto inner = make_default_adapter();
    testutil::RecordingAdapter recorder(*inner);

    FunnelOptions options;
    options.date_cutoff = "2017-06-01";
    run_funnel(store, store.list_bugs(), tmp.path() / "work", recorder, options);

    // Date rejection happens before any checkout or adapter call.
    CHECK(recorder.count("bug-1-date", "") == 0);
    // Executability rejection compiles but never runs tests.
    CHECK(recorder.count("bug-2-exec", "compile") >= 1);
    CHECK(recorder.count("bug-2-exec", "run_tests") == 0);
    CHECK(recorder.count("bug-2-exec", "run_all") == 0);
    // Validity rejection runs witness tests but never the full suite.
    CHECK(recorder.count("bug-3-validity", "run_tests") == 4);
    CHECK(recorder.count("bug-3-validity", "run_all") == 0);
    // Confirmed bugs ran everything: 4 compiles, 4 witness runs, 2 suite runs.
    CHECK(recorder.count("bug-5-ok", "compile") == 4);
    CHECK(recorder.count("bug-5-ok", "run_tests") == 4);
    CHECK(recorder.count("bug-5-ok", "run_all") == 2);
}

TEST_CASE("validity verdicts agree with the regression predicate on random matrices") {
    TempDir tmp;
    std::mt19937 rng(2024);
    const char symbols[] = {'P', 'F', 'T'};
    std::uniform_int_distribution<int> pick(0, 2);

    std::filesystem::path store_dir = tmp.path() / "store";
    std::vector<std::string> patterns;
    for (int i = 0; i < 60; ++i) {
        std::string pattern;
        for (int j = 0; j < 4; ++j) pattern += symbols[pick(rng)];
        FixtureBugOptions options;
        options.witness_pattern = pattern;
        std::string bug_id = "bug-" + std::to_string(i);
        testutil::make_fixture_bug(store_dir, bug_id, options);
        patterns.push_back(pattern);
    }

    BugStore store(store_dir);
    auto adapter = make_default_adapter();
    FunnelReport report = run_funnel(store, store.list_bugs(), tmp.path() / "work", *adapter, {});

    for (const auto& [bug_id, verdict] : report.verdicts) {
        std::size_t index = static_cast<std::size_t>(std::stoi(bug_id.substr(4)));
        const std::string& pattern = patterns[index];
        // Oracle: the regression predicate applied directly to the script.
        auto breaks = [](char c) { return c == 'F' || c == 'T'; };
        bool expected = pattern[0] == 'P' && breaks(pattern[1]) && breaks(pattern[2]) &&
                        pattern[3] == 'P';
        bool got_past_validity = verdict.stage == FunnelStage::RejectedUtility ||
                                 verdict.stage == FunnelStage::Confirmed;
        CHECK(got_past_validity == expected);
    }
}

TEST_CASE("utility rejects extra failures on either snapshot") {
    TempDir tmp;
    FixtureBugOptions fixing_side;
    fixing_side.extra_failing_on_fixing = true;
    testutil::make_fixture_bug(tmp.path() / "store", "bug-fx", fixing_side);
    BugStore store(tmp.path() / "store");
    auto adapter = make_default_adapter();

    FunnelReport report = run_funnel(store, {"bug-fx"}, tmp.path() / "work", *adapter, {});
    REQUIRE(report.verdicts.size() == 1);
    CHECK(report.verdicts[0].second.stage == FunnelStage::RejectedUtility);
    CHECK(report.verdicts[0].second.detail.find("fixing") != std::string::npos);
}

TEST_CASE("funnel runs bugs in parallel with identical results") {
    TempDir tmp;
    make_six_bug_store(tmp.path() / "store");
    BugStore store(tmp.path() / "store");
    auto adapter = make_default_adapter();

    FunnelOptions serial;
    serial.date_cutoff = "2017-06-01";
    FunnelOptions parallel = serial;
    parallel.parallelism = 4;

    FunnelReport a = run_funnel(store, store.list_bugs(), tmp.path() / "w1", *adapter, serial);
    FunnelReport b = run_funnel(store, store.list_bugs(), tmp.path() / "w2", *adapter, parallel);
    CHECK(a.confirmed == b.confirmed);
    REQUIRE(a.verdicts.size() == b.verdicts.size());
    for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
        CHECK(a.verdicts[i].first == b.verdicts[i].first);
        CHECK(a.verdicts[i].second.stage == b.verdicts[i].second.stage);
    }
}
