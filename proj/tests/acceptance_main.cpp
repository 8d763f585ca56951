// Acceptance gate: eight self-checking properties of the metrics stack, one
// line of output each. Exit status is nonzero when any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "layoutmetrics/layoutmetrics.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace layoutmetrics;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int index, bool pass, const std::string& detail) {
    std::printf("[%s] check %d/8: %s\n", pass ? "PASS" : "FAIL", index, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string random_string(std::mt19937& rng, std::size_t max_len, std::string_view alphabet) {
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::string s;
    const std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) s += alphabet[pick(rng)];
    return s;
}

// ---- 1: edit distance vs quadratic DP oracle -------------------------------

void check_edit_distance() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(101);
    std::size_t mismatches = 0, cases = 0;

    for (int i = 0; i < 10000; ++i) {
        const std::string a = random_string(rng, 12, "abcd");
        const std::string b = random_string(rng, 12, "abcd");
        if (levenshtein(a, b) != oracle::levenshtein_dp(a, b)) ++mismatches;
        ++cases;
    }

    std::vector<std::string> all;
    all.emplace_back();
    for (std::size_t begin = 0, end = 1, len = 1; len <= 5; ++len) {
        for (std::size_t i = begin; i < end; ++i) {
            all.push_back(all[i] + "a");
            all.push_back(all[i] + "b");
        }
        begin = end;
        end = all.size();
    }
    for (const auto& a : all) {
        for (const auto& b : all) {
            if (levenshtein(a, b) != oracle::levenshtein_dp(a, b)) ++mismatches;
            ++cases;
        }
    }

    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << "edit distance equals the DP oracle on " << cases << " pairs ("
           << mismatches << " mismatches, " << elapsed << " s)";
    report(1, mismatches == 0 && elapsed < 10.0, detail.str());
}

// ---- 2: inversion count vs quadratic enumeration ---------------------------

void check_inversions() {
    std::size_t mismatches = 0, cases = 0;

    std::vector<std::size_t> perm;
    for (std::size_t n = 1; n <= 6; ++n) {
        perm.resize(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        do {
            if (inversion_count(OrderPermutation{perm}) != oracle::inversions_quadratic(perm))
                ++mismatches;
            ++cases;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    const std::size_t exhaustive = cases;

    std::mt19937 rng(211);
    std::uniform_int_distribution<std::size_t> len(0, 1000);
    for (int i = 0; i < 1000; ++i) {
        perm.resize(len(rng));
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        if (inversion_count(OrderPermutation{perm}) != oracle::inversions_quadratic(perm))
            ++mismatches;
        ++cases;
    }

    std::ostringstream detail;
    detail << "inversion count equals quadratic enumeration on " << exhaustive
           << " exhaustive and 1000 random permutations (" << mismatches << " mismatches)";
    report(2, mismatches == 0, detail.str());
}

// ---- 3: tree edit distance vs memoized oracle ------------------------------

std::string random_tiny_table(std::mt19937& rng) {
    const std::vector<std::string> texts = {"", "a", "ab", "b"};
    std::uniform_int_distribution<int> rows_d(0, 2), cells_d(0, 2), span_d(0, 3);
    std::uniform_int_distribution<std::size_t> text_d(0, texts.size() - 1);
    for (;;) {
        std::string out = "<table>";
        int nodes = 1;
        const int rows = rows_d(rng);
        for (int r = 0; r < rows; ++r) {
            out += "<tr>";
            ++nodes;
            const int cells = cells_d(rng);
            for (int c = 0; c < cells; ++c) {
                out += span_d(rng) == 0 ? "<td colspan=\"2\">" : "<td>";
                out += texts[text_d(rng)];
                out += "</td>";
                ++nodes;
            }
            out += "</tr>";
        }
        out += "</table>";
        if (nodes <= 6) return out;
    }
}

void check_tree_edit_distance() {
    std::mt19937 rng(307);
    std::size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const TableTree a = parse_table_tree(random_tiny_table(rng));
        const TableTree b = parse_table_tree(random_tiny_table(rng));
        const double fast = tree_edit_distance(a, b);
        const double slow = oracle::tree_edit_distance_memo(a, b);
        if (std::abs(fast - slow) > 1e-9) ++mismatches;
    }

    std::size_t imperfect = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        const std::string html = synthetic::table_html(rng, i);
        if (teds(html, html) != 1.0) ++imperfect;
    }

    std::ostringstream detail;
    detail << "tree edit distance equals the memoized oracle on 1000 tree pairs ("
           << mismatches << " mismatches); self-teds is 1.0 on 100 tables (" << imperfect
           << " exceptions)";
    report(3, mismatches == 0 && imperfect == 0, detail.str());
}

// ---- 4: reward laws on a synthetic corpus ----------------------------------

void check_reward_laws() {
    const auto corpus = synthetic::make_corpus(50);
    std::size_t imperfect = 0, non_decreasing = 0, weight_mismatches = 0, transpositions = 0;

    for (const PageDocument& gt : corpus) {
        const RewardBreakdown self = compute_reward(gt, gt);
        if (self.r_text != 1.0 || self.r_bbox != 1.0 || self.r_order != 1.0 || self.total != 1.0)
            ++imperfect;

        std::vector<std::size_t> included;
        for (std::size_t b = 0; b < gt.blocks.size(); ++b)
            if (!excluded_from_reading_order(gt.blocks[b].category)) included.push_back(b);
        for (std::size_t j = 0; j + 1 < included.size(); ++j) {
            PageDocument pred = gt;
            std::swap(pred.blocks[included[j]], pred.blocks[included[j + 1]]);
            const auto m = match_blocks(pred, gt);
            if (!(order_reward(m, pred, gt) < 1.0)) ++non_decreasing;
            ++transpositions;
        }

        PageDocument drifted = gt;
        for (Block& b : drifted.blocks) {
            if (b.category == BlockCategory::Text) {
                b.content += " drift";
                break;
            }
        }
        const RewardWeights text_only = RewardWeights::normalized(1.0, 0.0, 0.0);
        const RewardBreakdown r = compute_reward(drifted, gt, text_only);
        if (r.total != r.r_text) ++weight_mismatches;
    }

    std::ostringstream detail;
    detail << "reward laws hold on 50 pages: self-reward is all ones (" << imperfect
           << " exceptions); " << transpositions
           << " adjacent transpositions each lower the order reward (" << non_decreasing
           << " exceptions); text-only weights reduce the total to the text term bitwise ("
           << weight_mismatches << " exceptions)";
    report(4, imperfect == 0 && non_decreasing == 0 && weight_mismatches == 0, detail.str());
}

// ---- 5: mining difficulty band is closed on both ends ----------------------

std::string mining_page(const std::string& text) {
    PageDocument doc;
    doc.page_id = "m";
    Block b;
    b.category = BlockCategory::Text;
    b.content = text;
    doc.blocks.push_back(b);
    return serialize_page(doc);
}

void check_mining_band() {
    const std::string gt = mining_page(std::string(100, 'a'));
    std::vector<MiningRecord> records;
    for (const int k : {49, 50, 65, 80, 81}) {
        MiningRecord rec;
        rec.sample_id = std::to_string(k);
        rec.pred_html = mining_page(std::string(static_cast<std::size_t>(k), 'b') +
                                    std::string(static_cast<std::size_t>(100 - k), 'a'));
        rec.gt_html = gt;
        records.push_back(rec);
    }
    const auto results = mine_hard_samples(records);
    const auto selected = selected_sample_ids(results);
    const bool pass = selected == std::vector<std::string>{"50", "65", "80"};

    std::ostringstream detail;
    detail << "mining over difficulties {0.49, 0.50, 0.65, 0.80, 0.81} selects {";
    for (std::size_t i = 0; i < selected.size(); ++i)
        detail << (i ? ", " : "") << "0." << selected[i];
    detail << "}";
    report(5, pass, detail.str());
}

// ---- 6: protocol invariances ------------------------------------------------

void check_invariances() {
    std::mt19937 rng(401);
    std::size_t reseg_failures = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const PageDocument gt = synthetic::make_page(static_cast<std::size_t>(trial % 50));
        const std::string joined = global_text_concatenation(gt);

        std::vector<std::string> words;
        std::size_t pos = 0;
        while (pos < joined.size()) {
            std::size_t space = joined.find(' ', pos);
            if (space == std::string::npos) space = joined.size();
            words.push_back(joined.substr(pos, space - pos));
            pos = space + 1;
        }
        PageDocument pred;
        std::uniform_int_distribution<int> take(1, 4);
        std::size_t i = 0;
        while (i < words.size()) {
            std::string piece;
            for (int k = take(rng); k > 0 && i < words.size(); --k, ++i) {
                if (!piece.empty()) piece += ' ';
                piece += words[i];
            }
            Block b;
            b.category = BlockCategory::Text;
            b.content = std::move(piece);
            pred.blocks.push_back(std::move(b));
        }
        if (global_text_edit(pred, gt) != 0.0) ++reseg_failures;
    }

    std::size_t table_failures = 0;
    for (std::size_t i = 0; i < 200; ++i) {
        const std::string html = synthetic::table_html(rng, i);
        std::string perturbed;
        perturbed.reserve(html.size() + 64);
        for (std::size_t p = 0; p < html.size(); ++p) {
            if (html.compare(p, 4, "<td>") == 0) {
                perturbed += "<TD style=\"border: 1px\" class=\"c\">";
                p += 3;
            } else if (html.compare(p, 5, "</td>") == 0) {
                perturbed += "</TD>";
                p += 4;
            } else if (html.compare(p, 4, "<tr>") == 0) {
                perturbed += "<TR align=\"left\">";
                p += 3;
            } else {
                perturbed += html[p];
            }
        }
        if (table_edit(perturbed, html) != 0.0) ++table_failures;
        if (teds(perturbed, html) != 1.0) ++table_failures;
    }

    std::ostringstream detail;
    detail << "500 random text resegmentations keep the global edit at zero ("
           << reseg_failures << " exceptions); style and tag-case perturbations keep 200 tables"
           << " at zero edit (" << table_failures << " exceptions)";
    report(6, reseg_failures == 0 && table_failures == 0, detail.str());
}

// ---- 7: corpus-scale self evaluation ----------------------------------------

void check_corpus_scale() {
    const auto start = std::chrono::steady_clock::now();
    const fs::path root = fs::temp_directory_path() /
                          ("layoutmetrics_acceptance_" + std::to_string(::getpid()));
    std::error_code ec;
    fs::remove_all(root, ec);
    const auto corpus = synthetic::make_corpus(1078);
    synthetic::write_corpus(root / "gt", corpus);
    synthetic::write_corpus(root / "pred", corpus);
    synthetic::write_manifest(root / "manifest.jsonl", corpus);

    bool pass = true;
    std::ostringstream detail;
    try {
        const auto manifest = load_manifest(root / "manifest.jsonl");
        EvaluateOptions opts;
        opts.workers = 8;
        const auto t8 = std::chrono::steady_clock::now();
        const CorpusResult result = evaluate_corpus(root / "pred", root / "gt", manifest, opts);
        const double eval_seconds = seconds_since(t8);

        const auto en_overall = overall_edit(result.report.en);
        const auto zh_overall = overall_edit(result.report.zh);
        const auto en_teds = result.report.en.table_teds.mean();
        const auto zh_teds = result.report.zh.table_teds.mean();
        const bool scores_ok = en_overall && *en_overall == 0.0 && zh_overall &&
                               *zh_overall == 0.0 && en_teds && *en_teds == 1.0 && zh_teds &&
                               *zh_teds == 1.0 && result.report.warnings.empty() &&
                               result.report.total_pages() == 1078;

        const std::string md = emit_report(result.report, ReportFormat::Markdown);
        const bool renders_ok = md.find("| 0.000 | 0.000 |") != std::string::npos &&
                                md.find("| 100.0 | 100.0 |") != std::string::npos;

        EvaluateOptions opts1, opts4;
        opts1.workers = 1;
        opts4.workers = 4;
        const std::string j1 = emit_report(
            evaluate_corpus(root / "pred", root / "gt", manifest, opts1).report,
            ReportFormat::Json);
        const std::string j4 = emit_report(
            evaluate_corpus(root / "pred", root / "gt", manifest, opts4).report,
            ReportFormat::Json);
        const std::string j8 = emit_report(result.report, ReportFormat::Json);
        const bool stable = j1 == j4 && j1 == j8;

        pass = scores_ok && renders_ok && stable && eval_seconds < 60.0;
        detail << "1078-page self evaluation: overall edit 0.000 for EN and ZH, teds 100.0, "
               << "reports byte-identical for workers {1, 4, 8}"
               << (stable ? "" : " [MISMATCH]") << ", 8-worker run took " << eval_seconds
               << " s" << (scores_ok ? "" : " [SCORES WRONG]")
               << (renders_ok ? "" : " [RENDER WRONG]");
    } catch (const std::exception& e) {
        pass = false;
        detail << "corpus self evaluation threw: " << e.what();
    }
    fs::remove_all(root, ec);
    (void)seconds_since(start);
    report(7, pass, detail.str());
}

// ---- 8: report layout fidelity ----------------------------------------------

void check_report_fidelity() {
    BenchmarkReport r;
    PageScores en;
    en.page_id = "en_page";
    en.language = Language::EN;
    en.text_edit = 0.124;
    r.add_page(en);
    PageScores zh;
    zh.page_id = "zh_page";
    zh.language = Language::ZH;
    zh.text_edit = 0.145;
    r.add_page(zh);

    const std::string md = emit_report(r, ReportFormat::Markdown);
    const bool header_ok =
        md.find("| Methods | Overall Edit ↓ EN | Overall Edit ↓ ZH | Text Edit ↓ EN |") !=
            std::string::npos &&
        md.find("Table TEDS ↑ EN") != std::string::npos &&
        md.find("ReadOrder Edit ↓ ZH") != std::string::npos &&
        md.find("Chemistry Edit ↓ ALL | HW Edit ↓ ALL |") != std::string::npos;
    const bool row_ok = md.find("| layoutmetrics | 0.124 | 0.145 | 0.124 | 0.145 |") !=
                        std::string::npos;

    std::ostringstream detail;
    detail << "markdown report reproduces the benchmark table layout"
           << (header_ok ? "" : " [HEADER WRONG]")
           << " and renders 0.124 / 0.145 exactly" << (row_ok ? "" : " [ROW WRONG]");
    report(8, header_ok && row_ok, detail.str());
}

} // namespace

int main() {
    check_edit_distance();
    check_inversions();
    check_tree_edit_distance();
    check_reward_laws();
    check_mining_band();
    check_invariances();
    check_corpus_scale();
    check_report_fidelity();
    if (g_failures == 0) {
        std::printf("all checks passed\n");
        return 0;
    }
    std::printf("%d check(s) failed\n", g_failures);
    return 1;
}
