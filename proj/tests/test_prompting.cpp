#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "relkit/prompting.hpp"
#include "relkit/rng.hpp"

#include "golden_fixture.hpp"
#include "helpers.hpp"

using namespace relkit;
using testutil::g;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

// Every line of `subset` appears in `superset` at least as often.
bool line_multiset_contained(const std::string& subset, const std::string& superset) {
    std::map<std::string, int> counts;
    for (const std::string& line : lines_of(superset)) ++counts[line];
    for (const std::string& line : lines_of(subset)) {
        if (--counts[line] < 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("render_prompt truncates content at exactly 250 characters") {
    const Query query = golden::sample_query();
    Document doc = golden::sample_document();
    REQUIRE(doc.content.size() == 300);

    const RenderedPrompt prompt = render_prompt(query, doc, PromptConfig{});
    const std::string first250 = doc.content.substr(0, 250);
    CHECK(prompt.user_text.find("Content: " + first250 + "\n") != std::string::npos);
    CHECK(prompt.user_text.find(first250 + "T") == std::string::npos);  // char 251 is 'T'
    CHECK(prompt.user_text.find("TAIL_BEYOND_250") == std::string::npos);

    // The boundary respects UTF-8 sequences: a two-byte character straddling
    // the limit is kept whole.
    Document utf8_doc = doc;
    utf8_doc.content = std::string(249, 'a') + "\xC3\xA9" + "rest";
    PromptConfig config;
    const RenderedPrompt utf8_prompt = render_prompt(query, utf8_doc, config);
    CHECK(utf8_prompt.user_text.find(std::string(249, 'a') + "\xC3\xA9" + "\n") !=
          std::string::npos);
    CHECK(utf8_prompt.user_text.find("rest") == std::string::npos);
}

TEST_CASE("option toggles add their block and nothing else") {
    const Query query = golden::sample_query();
    const Document doc = golden::sample_document();

    PromptConfig off;
    const RenderedPrompt base = render_prompt(query, doc, off);
    CHECK(base.user_text.find("URL:") == std::string::npos);
    CHECK(base.user_text.find("intent") == std::string::npos);

    SUBCASE("url") {
        PromptConfig on = off;
        on.use_url = true;
        const RenderedPrompt with_url = render_prompt(query, doc, on);
        CHECK(with_url.user_text.find("URL: " + doc.url) != std::string::npos);
        CHECK(line_multiset_contained(base.user_text, with_url.user_text));
    }
    SUBCASE("intent") {
        PromptConfig on = off;
        on.use_intent = true;
        const RenderedPrompt with_intent = render_prompt(query, doc, on);
        CHECK(with_intent.user_text.find("navigational") != std::string::npos);
        CHECK(with_intent.user_text.find("72.0%") != std::string::npos);
        CHECK(line_multiset_contained(base.user_text, with_intent.user_text));
    }
    SUBCASE("cot") {
        PromptConfig on = off;
        on.use_cot = true;
        const RenderedPrompt with_cot = render_prompt(query, doc, on);
        CHECK(with_cot.user_text.find("step by step") != std::string::npos);
        CHECK(line_multiset_contained(base.user_text, with_cot.user_text));
    }
    SUBCASE("few-shot") {
        PromptConfig on = off;
        on.few_shot = 4;
        const RenderedPrompt with_shots =
            render_prompt(query, doc, on, golden::sample_shots(4));
        CHECK(line_multiset_contained(base.user_text, with_shots.user_text));
    }
}

TEST_CASE("render_prompt structure") {
    const Query query = golden::sample_query();
    const Document doc = golden::sample_document();

    SUBCASE("system text states role, scale and bounds") {
        const RenderedPrompt prompt = render_prompt(query, doc, PromptConfig{});
        CHECK(prompt.system_text.find("1 to 4") != std::string::npos);
        CHECK(prompt.system_text.find("Fully Relevant") != std::string::npos);
        CHECK(prompt.system_text.find("Not Relevant") != std::string::npos);
        // Bounds stated twice (repetition for small models).
        const auto first = prompt.system_text.find("between 1 and 4");
        CHECK(first != std::string::npos);
        CHECK(prompt.system_text.find("outside the 1 to 4 range") != std::string::npos);
    }
    SUBCASE("user text ends with the final instruction") {
        const RenderedPrompt prompt = render_prompt(query, doc, PromptConfig{});
        const std::string tail = "Answer with \"Score: <value>\" where <value> is your "
                                 "relevance score from 1 to 4.";
        REQUIRE(prompt.user_text.size() >= tail.size());
        CHECK(prompt.user_text.substr(prompt.user_text.size() - tail.size()) == tail);
    }
    SUBCASE("meta description renders iff present") {
        Document no_meta = doc;
        no_meta.meta_description.reset();
        const RenderedPrompt without = render_prompt(query, no_meta, PromptConfig{});
        CHECK(without.user_text.find("Meta description:") == std::string::npos);
        const RenderedPrompt with = render_prompt(query, doc, PromptConfig{});
        CHECK(with.user_text.find("Meta description: " + *doc.meta_description) !=
              std::string::npos);
    }
    SUBCASE("empty content renders the explicit marker") {
        Document empty = doc;
        empty.content.clear();
        const RenderedPrompt prompt = render_prompt(query, empty, PromptConfig{});
        CHECK(prompt.user_text.find("Content: (no content)") != std::string::npos);
    }
    SUBCASE("four numbered blocks cover every grade") {
        PromptConfig config;
        config.few_shot = 4;
        const RenderedPrompt prompt =
            render_prompt(query, doc, config, golden::sample_shots(4));
        for (int i = 1; i <= 4; ++i) {
            CHECK(prompt.user_text.find("Example " + std::to_string(i) + "\n") !=
                  std::string::npos);
        }
        for (int grade = 1; grade <= 4; ++grade) {
            CHECK(prompt.user_text.find("Score: " + std::to_string(grade) + "\n") !=
                  std::string::npos);
        }
    }
    SUBCASE("rendering is deterministic") {
        PromptConfig config;
        config.use_url = true;
        config.use_intent = true;
        config.few_shot = 8;
        const RenderedPrompt a = render_prompt(query, doc, config, golden::sample_shots(8));
        const RenderedPrompt b = render_prompt(query, doc, config, golden::sample_shots(8));
        CHECK(a.system_text == b.system_text);
        CHECK(a.user_text == b.user_text);
    }
}

TEST_CASE("render_prompt rejects inconsistent inputs") {
    const Query query = golden::sample_query();
    const Document doc = golden::sample_document();

    PromptConfig wants_shots;
    wants_shots.few_shot = 4;
    CHECK_THROWS_AS(render_prompt(query, doc, wants_shots, {}), ValidationError);

    Query no_intent = query;
    no_intent.intent.reset();
    PromptConfig wants_intent;
    wants_intent.use_intent = true;
    CHECK_THROWS_AS(render_prompt(no_intent, doc, wants_intent), ValidationError);

    PromptConfig bad;
    bad.few_shot = 3;
    CHECK_THROWS_AS(render_prompt(query, doc, bad, golden::sample_shots(3)), ValidationError);
}

TEST_CASE("render_intent_block formatting") {
    auto block = [](double nav, double info, double trans) {
        IntentDistribution d;
        d.navigational = nav;
        d.informational = info;
        d.transactional = trans;
        return render_intent_block(d);
    };
    CHECK(block(1.0, 0.0, 0.0) ==
          "navigational (the user wants to reach a specific website or page): 100.0%\n"
          "informational (the user wants to find information on a topic): 0.0%\n"
          "transactional (the user wants to perform an action such as buying or "
          "downloading): 0.0%\n");
    const std::string mixed = block(0.2, 0.5, 0.3);
    CHECK(mixed.find("20.0%") != std::string::npos);
    CHECK(mixed.find("50.0%") != std::string::npos);
    CHECK(mixed.find("30.0%") != std::string::npos);
    const std::string thirds = block(0.333, 0.333, 0.334);
    CHECK(thirds.find("navigational (the user wants to reach a specific website or page): "
                      "33.3%") != std::string::npos);
    CHECK(thirds.find("33.4%") != std::string::npos);

    IntentDistribution bad;
    bad.navigational = 0.9;
    bad.informational = 0.9;
    bad.transactional = 0.9;
    CHECK_THROWS_AS(render_intent_block(bad), ValidationError);
}

TEST_CASE("select_fewshot") {
    std::vector<LabeledExample> pool;
    auto add = [&pool](int grade, const std::string& id) {
        LabeledExample ex;
        ex.query_text = "pool query " + id;
        ex.doc.id = id;
        ex.doc.title = "title " + id;
        ex.doc.content = "content " + id;
        ex.gold = g(grade);
        pool.push_back(ex);
    };

    SUBCASE("forced selection with one example per grade") {
        for (int grade = 1; grade <= 4; ++grade) add(grade, "p" + std::to_string(grade));
        const auto shots = select_fewshot(pool, 4, 1);
        REQUIRE(shots.size() == 4);
        for (int i = 0; i < 4; ++i) {
            CHECK(shots[static_cast<std::size_t>(i)].index == i + 1);
            CHECK(shots[static_cast<std::size_t>(i)].gold.value() == i + 1);
        }
    }
    SUBCASE("k=8 cycles grades twice in ascending order for any seed") {
        for (int grade = 1; grade <= 4; ++grade) {
            add(grade, "a" + std::to_string(grade));
            add(grade, "b" + std::to_string(grade));
        }
        for (std::uint64_t seed : {1ULL, 7ULL, 99ULL}) {
            const auto shots = select_fewshot(pool, 8, seed);
            REQUIRE(shots.size() == 8);
            for (int i = 0; i < 8; ++i) {
                CHECK(shots[static_cast<std::size_t>(i)].gold.value() == (i % 4) + 1);
            }
        }
    }
    SUBCASE("same seed selects the same examples") {
        for (int grade = 1; grade <= 4; ++grade) {
            for (int i = 0; i < 5; ++i) add(grade, std::to_string(grade) + "_" + std::to_string(i));
        }
        const auto a = select_fewshot(pool, 8, 42);
        const auto b = select_fewshot(pool, 8, 42);
        REQUIRE(a.size() == b.size());
        bool different_from_other_seed = false;
        const auto c = select_fewshot(pool, 8, 43);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].doc.id == b[i].doc.id);
            if (a[i].doc.id != c[i].doc.id) different_from_other_seed = true;
        }
        CHECK(different_from_other_seed);
    }
    SUBCASE("deficient class is named") {
        add(1, "only1");
        add(2, "only2");
        add(3, "only3");
        try {
            select_fewshot(pool, 4, 1);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("grade 4") != std::string::npos);
        }
    }
    SUBCASE("k must be 4 or 8") {
        CHECK_THROWS_AS(select_fewshot(pool, 6, 1), ValidationError);
    }
}

TEST_CASE("golden prompt files") {
    const std::filesystem::path dir =
        std::filesystem::path(RELKIT_TEST_DIR) / "golden" / "prompts" / "v1";
    const auto configs = golden::golden_configs();
    CHECK(configs.size() >= 12);
    std::set<std::string> tags;
    for (const PromptConfig& config : configs) {
        CAPTURE(config.tag());
        CHECK(tags.insert(config.tag()).second);
        const std::string rendered = golden::render_combined(config);
        const std::string committed = testutil::read_file(dir / (config.tag() + ".txt"));
        REQUIRE(!committed.empty());
        CHECK(rendered == committed);
    }
}
