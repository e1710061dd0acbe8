#include <doctest.h>

#include <cmath>

#include "relkit/rank_eval.hpp"
#include "relkit/rng.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

using namespace relkit;

namespace {

RankedList make_list(const std::string& id, const std::vector<int>& gains) {
    RankedList list;
    list.query_id = id;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        list.docs.push_back(RankedDoc{"d" + std::to_string(i), gains[i]});
    }
    return list;
}

}  // namespace

TEST_CASE("ndcg_at_k fixtures") {
    CHECK(*ndcg_at_k(make_list("q", {6, 5, 4, 2, 0}), 5) == doctest::Approx(1.0));
    // (2^3-1)/log2(3) / 7 by direct formula evaluation
    CHECK(*ndcg_at_k(make_list("q", {0, 3}), 2) == doctest::Approx(0.6309).epsilon(1e-4));
    CHECK(!ndcg_at_k(make_list("q", {0, 0, 0}), 5).has_value());
    CHECK_THROWS_AS(ndcg_at_k(make_list("q", {1}), 0), ValidationError);
}

TEST_CASE("ndcg invariances") {
    // Equal-gain docs can swap places freely.
    CHECK(*ndcg_at_k(make_list("q", {3, 3, 1}), 3) ==
          doctest::Approx(*ndcg_at_k(make_list("q", {3, 3, 1}), 3)));
    // Swapping a higher-gain doc below a lower-gain one strictly hurts.
    const double good = *ndcg_at_k(make_list("q", {4, 2, 1}), 3);
    const double worse = *ndcg_at_k(make_list("q", {2, 4, 1}), 3);
    CHECK(worse < good);
}

TEST_CASE("ndcg matches the permutation-enumeration oracle") {
    Rng rng(1234);
    for (int trial = 0; trial < 150; ++trial) {
        const int n = 1 + static_cast<int>(rng.index(8));
        std::vector<int> gains;
        for (int i = 0; i < n; ++i) gains.push_back(static_cast<int>(rng.index(7)));
        const int k = 1 + static_cast<int>(rng.index(8));
        const auto lib = ndcg_at_k(make_list("q", gains), k);
        const auto ref = oracle::ndcg_permutation(gains, k);
        REQUIRE(lib.has_value() == ref.has_value());
        if (lib) {
            CHECK(std::abs(*lib - *ref) <= 1e-12);
            CHECK(*lib >= 0.0);
            CHECK(*lib <= 1.0 + 1e-12);
            // Strictly positive whenever the cutoff covers the whole list.
            if (k >= n) CHECK(*lib > 0.0);
        }
    }
}

TEST_CASE("mrr") {
    CHECK(mrr(make_list("q", {4, 0, 0}), 4) == 1.0);
    CHECK(mrr(make_list("q", {0, 0, 4}), 4) == doctest::Approx(1.0 / 3.0));
    CHECK(mrr(make_list("q", {0, 2, 1}), 4) == 0.0);
    CHECK_THROWS_AS(mrr(make_list("q", {1}), 0), ValidationError);

    Rng rng(55);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> gains;
        const int n = 1 + static_cast<int>(rng.index(8));
        for (int i = 0; i < n; ++i) gains.push_back(static_cast<int>(rng.index(7)));
        CHECK(mrr(make_list("q", gains), 4) == oracle::mrr_by_max(gains, 4));
    }
}

TEST_CASE("bootstrap_ci") {
    SUBCASE("constant values give a zero-width interval") {
        std::vector<double> values(50, 0.75);
        const BootstrapCi ci = bootstrap_ci(values, 1000, 0.95, 3);
        CHECK(ci.mean == doctest::Approx(0.75));
        CHECK(ci.ci_low == doctest::Approx(0.75));
        CHECK(ci.ci_high == doctest::Approx(0.75));
    }
    SUBCASE("deterministic per seed") {
        std::vector<double> values;
        Rng rng(8);
        for (int i = 0; i < 200; ++i) values.push_back(rng.uniform01());
        const BootstrapCi a = bootstrap_ci(values, 500, 0.95, 42);
        const BootstrapCi b = bootstrap_ci(values, 500, 0.95, 42);
        CHECK(a.ci_low == b.ci_low);
        CHECK(a.ci_high == b.ci_high);
        const BootstrapCi c = bootstrap_ci(values, 500, 0.95, 43);
        CHECK((c.ci_low != a.ci_low || c.ci_high != a.ci_high));
    }
    SUBCASE("half-width matches the normal approximation on 0/1 data") {
        // 500 zeros + 500 ones: 1.96 * sqrt(0.25/1000) = 0.031
        std::vector<double> values(1000, 0.0);
        for (int i = 0; i < 500; ++i) values[static_cast<std::size_t>(i)] = 1.0;
        const BootstrapCi ci = bootstrap_ci(values, 1000, 0.95, 17);
        const double half = (ci.ci_high - ci.ci_low) / 2.0;
        CHECK(std::abs(half - 0.031) <= 0.01);

        // Independent resampling cross-check with its own generator.
        Rng rng(171717);
        std::vector<double> means;
        for (int it = 0; it < 1000; ++it) {
            double sum = 0.0;
            for (int i = 0; i < 1000; ++i) sum += values[rng.index(values.size())];
            means.push_back(sum / 1000.0);
        }
        std::sort(means.begin(), means.end());
        const double ref_half = (means[974] - means[25]) / 2.0;
        CHECK(std::abs(half - ref_half) <= 0.01);
    }
    SUBCASE("interval contains the sample mean across seeds") {
        Rng rng(9);
        std::vector<double> values;
        for (int i = 0; i < 80; ++i) values.push_back(rng.uniform01());
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const BootstrapCi ci = bootstrap_ci(values, 400, 0.95, seed);
            CHECK(ci.ci_low <= ci.mean);
            CHECK(ci.mean <= ci.ci_high);
        }
    }
    CHECK_THROWS_AS(bootstrap_ci({}, 1000, 0.95, 0), ValidationError);
}

TEST_CASE("evaluate_run") {
    SUBCASE("single perfect query") {
        const std::vector<RankedList> lists = {make_list("q", {6, 5, 4, 0})};
        const RankEvalReport report = evaluate_run(lists, {5, 10, 30}, 4, 200, 0.95, 1);
        for (const auto& [name, ci] : report.metrics) {
            CHECK(ci.mean == doctest::Approx(1.0));
            CHECK(ci.ci_high - ci.ci_low == doctest::Approx(0.0));
        }
        CHECK(report.skipped_queries == 0);
    }
    SUBCASE("mrr averages over all queries") {
        const std::vector<RankedList> lists = {make_list("q1", {4, 0}),
                                               make_list("q2", {0, 4})};
        const RankEvalReport report = evaluate_run(lists, {5}, 4, 200, 0.95, 1);
        CHECK(report.metric("mrr").mean == doctest::Approx(0.75));
    }
    SUBCASE("skipped queries leave ndcg but count zero into mrr") {
        const std::vector<RankedList> lists = {make_list("q1", {4, 2}),
                                               make_list("q2", {0, 0})};
        const RankEvalReport report = evaluate_run(lists, {5}, 4, 200, 0.95, 1);
        CHECK(report.skipped_queries == 1);
        CHECK(report.metric("ndcg@5").mean == doctest::Approx(1.0));
        CHECK(report.metric("mrr").mean == doctest::Approx(0.5));
    }
    SUBCASE("all queries skipped is an error") {
        const std::vector<RankedList> lists = {make_list("q", {0, 0})};
        CHECK_THROWS_AS(evaluate_run(lists, {5}, 4, 100, 0.95, 1), ValidationError);
    }
    CHECK_THROWS_AS(evaluate_run({}, {5}, 4, 100, 0.95, 1), ValidationError);
}

TEST_CASE("ranked-list files round-trip") {
    testutil::TempDir tmp;
    const std::vector<RankedList> lists = {make_list("q1", {4, 2, 0}),
                                           make_list("q2", {0, 6})};
    save_ranked_lists(lists, tmp.file("lists.jsonl"));
    const std::vector<RankedList> loaded = load_ranked_lists(tmp.file("lists.jsonl"));
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].query_id == "q1");
    REQUIRE(loaded[0].docs.size() == 3);
    CHECK(loaded[0].docs[1].gain == 2);
    CHECK(loaded[1].docs[1].gain == 6);

    testutil::write_file(tmp.file("dup.jsonl"),
                         R"({"query_id":"q","doc_id":"a","rank":1,"gain":0})"
                         "\n"
                         R"({"query_id":"q","doc_id":"b","rank":1,"gain":1})"
                         "\n");
    CHECK_THROWS_AS(load_ranked_lists(tmp.file("dup.jsonl")), ValidationError);
}
