#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>

#include "layoutmetrics/matching.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace layoutmetrics;

namespace {

Block make_block(BlockCategory cat, std::string content) {
    Block b;
    b.category = cat;
    b.content = std::move(content);
    return b;
}

PageDocument page_of(std::vector<Block> blocks) {
    PageDocument doc;
    doc.blocks = std::move(blocks);
    return doc;
}

double pair_total(const MatchAssignment& m) {
    double t = 0.0;
    for (const auto& p : m.pairs) t += p.similarity;
    return t;
}

} // namespace

TEST_CASE("self match is the identity pairing") {
    for (std::size_t i = 0; i < 20; ++i) {
        const PageDocument doc = synthetic::make_page(i);
        const MatchAssignment m = match_blocks(doc, doc);
        REQUIRE(m.pairs.size() == doc.blocks.size());
        CHECK(m.unmatched_pred.empty());
        CHECK(m.unmatched_gt.empty());
        for (std::size_t k = 0; k < m.pairs.size(); ++k) {
            CHECK(m.pairs[k].pred_index == k);
            CHECK(m.pairs[k].gt_index == k);
            CHECK(m.pairs[k].similarity == 1.0);
        }
    }
}

TEST_CASE("self match stays identity with duplicate contents") {
    const PageDocument doc = page_of({make_block(BlockCategory::Text, "same"),
                                      make_block(BlockCategory::Text, "same"),
                                      make_block(BlockCategory::Text, "same")});
    const MatchAssignment m = match_blocks(doc, doc);
    REQUIRE(m.pairs.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(m.pairs[k].pred_index == k);
        CHECK(m.pairs[k].gt_index == k);
    }
}

TEST_CASE("low similarity stays unmatched") {
    const PageDocument pred = page_of({make_block(BlockCategory::Text, "zzzzzzzz")});
    const PageDocument gt = page_of({make_block(BlockCategory::Text, "aaaaaaaa")});
    const MatchAssignment m = match_blocks(pred, gt);
    CHECK(m.pairs.empty());
    CHECK(m.unmatched_pred == std::vector<std::size_t>{0});
    CHECK(m.unmatched_gt == std::vector<std::size_t>{0});
}

TEST_CASE("threshold boundary is inclusive") {
    // similarity = 1 - 6/10 = 0.4 exactly at the default threshold
    const PageDocument pred = page_of({make_block(BlockCategory::Text, "aaaaaaaaaa")});
    const PageDocument gt = page_of({make_block(BlockCategory::Text, "aaaabbbbbb")});
    const MatchAssignment m = match_blocks(pred, gt);
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0].similarity == Catch::Approx(0.4));

    MatchConfig strict;
    strict.threshold = 0.400001;
    CHECK(match_blocks(pred, gt, strict).pairs.empty());
}

TEST_CASE("text, title, and caption are one equivalence class") {
    const PageDocument pred = page_of({make_block(BlockCategory::Title, "hello world")});
    const PageDocument gt = page_of({make_block(BlockCategory::Text, "hello world")});
    CHECK(match_blocks(pred, gt).pairs.size() == 1);

    const PageDocument pred2 = page_of({make_block(BlockCategory::Caption, "hello world")});
    CHECK(match_blocks(pred2, gt).pairs.size() == 1);
}

TEST_CASE("different categories never match") {
    const PageDocument pred = page_of({make_block(BlockCategory::Formula, "x + y")});
    const PageDocument gt = page_of({make_block(BlockCategory::Text, "x + y")});
    CHECK(match_blocks(pred, gt).pairs.empty());

    const PageDocument pred2 = page_of({make_block(BlockCategory::Handwriting, "hello world")});
    const PageDocument gt2 = page_of({make_block(BlockCategory::Text, "hello world")});
    CHECK(match_blocks(pred2, gt2).pairs.empty());
}

TEST_CASE("category gate can be disabled") {
    const PageDocument pred = page_of({make_block(BlockCategory::Formula, "x + y")});
    const PageDocument gt = page_of({make_block(BlockCategory::Text, "x + y")});
    MatchConfig cfg;
    cfg.category_must_agree = false;
    CHECK(match_blocks(pred, gt, cfg).pairs.size() == 1);
}

TEST_CASE("empty sides produce no pairs") {
    const PageDocument empty;
    const PageDocument one = page_of({make_block(BlockCategory::Text, "a")});
    CHECK(match_blocks(empty, one).pairs.empty());
    CHECK(match_blocks(empty, one).unmatched_gt == std::vector<std::size_t>{0});
    CHECK(match_blocks(one, empty).unmatched_pred == std::vector<std::size_t>{0});
    CHECK(match_blocks(empty, empty).pairs.empty());
}

TEST_CASE("assignment total matches the exhaustive oracle") {
    std::mt19937 rng(59);
    const std::vector<std::string> pool = {"alpha beta", "alpha bets", "gamma delta",
                                           "gamma delts", "epsilon",   "epsilom",
                                           "zeta eta",    "theta iota"};
    std::uniform_int_distribution<std::size_t> count(0, 5);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Block> pred_blocks, gt_blocks;
        const std::size_t np = count(rng), ng = count(rng);
        for (std::size_t i = 0; i < np; ++i)
            pred_blocks.push_back(make_block(BlockCategory::Text, pool[pick(rng)]));
        for (std::size_t i = 0; i < ng; ++i)
            gt_blocks.push_back(make_block(BlockCategory::Text, pool[pick(rng)]));
        const PageDocument pred = page_of(pred_blocks);
        const PageDocument gt = page_of(gt_blocks);

        const MatchAssignment m = match_blocks(pred, gt);

        std::vector<std::vector<double>> sim(ng, std::vector<double>(np, -1.0));
        for (std::size_t g = 0; g < ng; ++g)
            for (std::size_t p = 0; p < np; ++p)
                sim[g][p] = block_similarity(pred.blocks[p], gt.blocks[g]);
        const double best = oracle::best_assignment_similarity(sim, 0.4);

        CAPTURE(trial, np, ng);
        CHECK(pair_total(m) == Catch::Approx(best).margin(1e-7));
        for (const auto& p : m.pairs) CHECK(p.similarity >= 0.4);
    }
}

TEST_CASE("bookkeeping partitions the blocks") {
    std::mt19937 rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        const PageDocument pred = synthetic::make_page(100 + trial);
        const PageDocument gt = synthetic::make_page(200 + trial);
        const MatchAssignment m = match_blocks(pred, gt);
        std::vector<bool> pred_seen(pred.blocks.size(), false), gt_seen(gt.blocks.size(), false);
        for (const auto& p : m.pairs) {
            CHECK_FALSE(pred_seen[p.pred_index]);
            CHECK_FALSE(gt_seen[p.gt_index]);
            pred_seen[p.pred_index] = true;
            gt_seen[p.gt_index] = true;
        }
        for (const std::size_t i : m.unmatched_pred) {
            CHECK_FALSE(pred_seen[i]);
            pred_seen[i] = true;
        }
        for (const std::size_t i : m.unmatched_gt) {
            CHECK_FALSE(gt_seen[i]);
            gt_seen[i] = true;
        }
        for (const bool s : pred_seen) CHECK(s);
        for (const bool s : gt_seen) CHECK(s);
        for (std::size_t k = 1; k < m.pairs.size(); ++k)
            CHECK(m.pairs[k - 1].gt_index < m.pairs[k].gt_index);
    }
}

TEST_CASE("restrict_to_category projects pairs and unmatched blocks") {
    const PageDocument pred = page_of({make_block(BlockCategory::Title, "shared heading"),
                                       make_block(BlockCategory::Text, "body one"),
                                       make_block(BlockCategory::Text, "body two")});
    const PageDocument gt = page_of({make_block(BlockCategory::Text, "shared heading"),
                                     make_block(BlockCategory::Text, "body one")});
    const MatchAssignment m = match_blocks(pred, gt);
    const MatchAssignment text_only = restrict_to_category(m, pred, gt, BlockCategory::Text);

    // the Title/Text cross-class pair drops out; its Text side counts unmatched
    for (const auto& p : text_only.pairs) {
        CHECK(pred.blocks[p.pred_index].category == BlockCategory::Text);
        CHECK(gt.blocks[p.gt_index].category == BlockCategory::Text);
    }
    REQUIRE(text_only.pairs.size() == 1);
    CHECK(text_only.pairs[0].pred_index == 1);
    CHECK(text_only.pairs[0].gt_index == 1);
    CHECK(text_only.unmatched_gt == std::vector<std::size_t>{0});
    CHECK(text_only.unmatched_pred == std::vector<std::size_t>{2});

    const MatchAssignment title_only = restrict_to_category(m, pred, gt, BlockCategory::Title);
    CHECK(title_only.pairs.empty());
    CHECK(title_only.unmatched_pred == std::vector<std::size_t>{0});
    CHECK(title_only.unmatched_gt.empty());
}

TEST_CASE("oversized pages are rejected") {
    std::vector<Block> many(4097, make_block(BlockCategory::Text, "x"));
    const PageDocument big = page_of(many);
    const PageDocument one = page_of({make_block(BlockCategory::Text, "x")});
    CHECK_THROWS_AS(match_blocks(big, one), InvalidInput);
}

TEST_CASE("normalization config flows into similarity") {
    const PageDocument pred = page_of({make_block(BlockCategory::Text, "a   b")});
    const PageDocument gt = page_of({make_block(BlockCategory::Text, "a b")});
    CHECK(match_blocks(pred, gt).pairs.size() == 1);
    CHECK(match_blocks(pred, gt).pairs[0].similarity == 1.0);

    const MatchAssignment raw = match_blocks(pred, gt, {}, NormalizationConfig::disabled());
    REQUIRE(raw.pairs.size() == 1);
    CHECK(raw.pairs[0].similarity < 1.0);
}
