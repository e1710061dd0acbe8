#include <doctest.h>

#include "relkit/rescale.hpp"

#include "helpers.hpp"

using namespace relkit;
using testutil::g;

namespace {

RankingExample example(const std::string& qid, const std::string& did, RankingTier tier) {
    RankingExample e;
    e.query_id = qid;
    e.document_id = did;
    e.tier = tier;
    return e;
}

RankingDataset small_dataset() {
    RankingDataset ds;
    RankingGroup group;
    group.query_id = "q";
    group.examples = {
        example("q", "soft", RankingTier::SoftNeg), example("q", "h1", RankingTier::HardNeg),
        example("q", "h2", RankingTier::HardNeg),   example("q", "h3", RankingTier::HardNeg),
        example("q", "p1", RankingTier::Pos1),      example("q", "p3", RankingTier::Pos3),
    };
    ds.groups.push_back(group);
    return ds;
}

Judgment graded(int v) {
    Judgment j;
    j.grade = g(v);
    return j;
}

}  // namespace

TEST_CASE("bucket_of is the total mapping 1/2/3/4 -> SLN/HN/FHN/FHN") {
    CHECK(bucket_of(g(1)) == RescaleBucket::SLN);
    CHECK(bucket_of(g(2)) == RescaleBucket::HN);
    CHECK(bucket_of(g(3)) == RescaleBucket::FHN);
    CHECK(bucket_of(g(4)) == RescaleBucket::FHN);
}

TEST_CASE("rescale_dataset annotates hard negatives only") {
    const RankingDataset ds = small_dataset();
    JudgmentMap judgments;
    judgments[{"q", "h1"}] = graded(1);
    judgments[{"q", "h2"}] = graded(2);
    judgments[{"q", "h3"}] = graded(4);
    // Spurious judgment on a positive is ignored.
    judgments[{"q", "p1"}] = graded(1);

    const auto [rescaled, report] = rescale_dataset(ds, judgments);
    const auto& examples = rescaled.groups[0].examples;
    CHECK(!examples[0].rescaled.has_value());
    CHECK(*examples[1].rescaled == RescaleBucket::SLN);
    CHECK(*examples[2].rescaled == RescaleBucket::HN);
    CHECK(*examples[3].rescaled == RescaleBucket::FHN);
    CHECK(examples[4] == ds.groups[0].examples[4]);
    CHECK(examples[5] == ds.groups[0].examples[5]);

    CHECK(report.total_hard_negatives == 3);
    CHECK(report.judged == 3);
    CHECK(report.error_count == 0);
    CHECK(report.pct_sln == doctest::Approx(100.0 / 3.0));
    CHECK(report.pct_hn == doctest::Approx(100.0 / 3.0));
    CHECK(report.pct_fhn == doctest::Approx(100.0 / 3.0));
    CHECK(report.pct_sln + report.pct_hn + report.pct_fhn == doctest::Approx(100.0).epsilon(1e-4));

    // Tier conservation: same (query, doc, tier) multiset before and after.
    REQUIRE(examples.size() == ds.groups[0].examples.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
        CHECK(examples[i].query_id == ds.groups[0].examples[i].query_id);
        CHECK(examples[i].document_id == ds.groups[0].examples[i].document_id);
        CHECK(examples[i].tier == ds.groups[0].examples[i].tier);
    }

    // Idempotence: rescaling the output with the same judgments changes nothing.
    const auto [again, report2] = rescale_dataset(rescaled, judgments);
    CHECK(again.groups[0].examples == rescaled.groups[0].examples);
    CHECK(report2.judged == report.judged);
}

TEST_CASE("rescale_dataset errored judgments keep the tier") {
    const RankingDataset ds = small_dataset();
    JudgmentMap judgments;
    judgments[{"q", "h1"}] = graded(1);
    judgments[{"q", "h2"}] = graded(3);
    Judgment errored;
    errored.error = JudgeError::ParseFailure;
    judgments[{"q", "h3"}] = errored;

    const auto [rescaled, report] = rescale_dataset(ds, judgments);
    CHECK(report.error_count == 1);
    CHECK(report.judged == 2);
    CHECK(!rescaled.groups[0].examples[3].rescaled.has_value());
    CHECK(rescaled.groups[0].examples[3].tier == RankingTier::HardNeg);
    CHECK(rescaled_gain(rescaled.groups[0].examples[3]) == 2);
}

TEST_CASE("rescale_dataset reports missing judgments with ids") {
    const RankingDataset ds = small_dataset();
    JudgmentMap judgments;
    judgments[{"q", "h1"}] = graded(1);
    try {
        rescale_dataset(ds, judgments);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("h2") != std::string::npos);
        CHECK(msg.find("h3") != std::string::npos);
    }
}

TEST_CASE("rescale_dataset refuses validation splits") {
    RankingDataset ds = small_dataset();
    ds.split = DatasetSplit::Validation;
    CHECK_THROWS_AS(rescale_dataset(ds, {}), ValidationError);
}

TEST_CASE("gain ladder is strictly monotone") {
    auto with_bucket = [](RescaleBucket b) {
        RankingExample e = example("q", "d", RankingTier::HardNeg);
        e.rescaled = b;
        return e;
    };
    const int soft = rescaled_gain(example("q", "d", RankingTier::SoftNeg));
    const int sln = rescaled_gain(with_bucket(RescaleBucket::SLN));
    const int hn = rescaled_gain(with_bucket(RescaleBucket::HN));
    const int fhn = rescaled_gain(with_bucket(RescaleBucket::FHN));
    const int pos1 = rescaled_gain(example("q", "d", RankingTier::Pos1));
    const int pos2 = rescaled_gain(example("q", "d", RankingTier::Pos2));
    const int pos3 = rescaled_gain(example("q", "d", RankingTier::Pos3));
    CHECK(soft == 0);
    CHECK(fhn == 3);
    CHECK(pos3 == 6);
    CHECK(soft < sln);
    CHECK(sln < hn);
    CHECK(hn < fhn);
    CHECK(fhn < pos1);
    CHECK(pos1 < pos2);
    CHECK(pos2 < pos3);
    // Un-rescaled hard negatives share the ladder's HN slot.
    CHECK(rescaled_gain(example("q", "d", RankingTier::HardNeg)) == hn);
    CHECK(tier_ladder_gain(RankingTier::HardNeg) == hn);
}
