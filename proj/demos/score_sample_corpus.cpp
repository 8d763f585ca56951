// Scores the bundled sample corpus and prints the resulting report. The
// predictions carry deliberate flaws (a swapped paragraph pair, a wrong table
// cell, a malformed table fragment, a formula typo, one missing page) so the
// output shows every metric doing real work.

#include <cstdio>
#include <filesystem>
#include <string>

#include "layoutmetrics/layoutmetrics.hpp"

int main() {
    namespace fs = std::filesystem;
    using namespace layoutmetrics;

    const fs::path root = LAYOUTMETRICS_SAMPLE_DIR;
    try {
        const auto manifest = load_manifest(root / "manifest.jsonl");
        EvaluateOptions opts;
        opts.workers = 2;
        const CorpusResult result = evaluate_corpus(root / "pred", root / "gt", manifest, opts);

        std::printf("%s\n", emit_report(result.report, ReportFormat::Markdown).c_str());
        std::printf("## Per page\n\n");
        for (const PageScores& page : result.pages)
            std::printf("%s\n", page_scores_to_json_line(page).c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
