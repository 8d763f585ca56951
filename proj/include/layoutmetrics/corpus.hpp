#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "layoutmetrics/errors.hpp"
#include "layoutmetrics/matching.hpp"
#include "layoutmetrics/normalize.hpp"
#include "layoutmetrics/report.hpp"
#include "layoutmetrics/schema.hpp"

namespace layoutmetrics {

struct ManifestEntry {
    std::string page_id;
    Language language = Language::EN;
    std::string doc_category;
};

inline std::optional<std::string> read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return buf.str();
}

/// JSON-lines manifest: {"page_id": ..., "language": "en"|"zh",
/// "doc_category": ...} per line. Diagnostics name the offending line.
inline std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    const auto text = read_text_file(path);
    if (!text) throw InvalidInput("cannot read manifest: " + path.string());
    std::vector<ManifestEntry> entries;
    std::vector<std::string> seen_ids;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text->size()) {
        std::size_t eol = text->find('\n', pos);
        if (eol == std::string::npos) eol = text->size();
        const std::string line = text->substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            if (eol == text->size()) break;
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw InvalidInput("manifest line " + std::to_string(line_no) + ": " + e.what());
        }
        ManifestEntry entry;
        if (!j.is_object() || !j.contains("page_id") || !j["page_id"].is_string() ||
            j["page_id"].get<std::string>().empty())
            throw InvalidInput("manifest line " + std::to_string(line_no) +
                               ": missing or empty page_id");
        entry.page_id = j["page_id"].get<std::string>();
        if (j.contains("language")) {
            if (!j["language"].is_string())
                throw InvalidInput("manifest line " + std::to_string(line_no) +
                                   ": language must be a string");
            const auto lang = language_from_name(j["language"].get<std::string>());
            if (!lang)
                throw InvalidInput("manifest line " + std::to_string(line_no) +
                                   ": unknown language \"" + j["language"].get<std::string>() +
                                   "\"");
            entry.language = *lang;
        }
        if (j.contains("doc_category")) {
            if (!j["doc_category"].is_string())
                throw InvalidInput("manifest line " + std::to_string(line_no) +
                                   ": doc_category must be a string");
            entry.doc_category = j["doc_category"].get<std::string>();
        }
        seen_ids.push_back(entry.page_id);
        entries.push_back(std::move(entry));
        if (eol == text->size()) break;
    }
    std::sort(seen_ids.begin(), seen_ids.end());
    const auto dup = std::adjacent_find(seen_ids.begin(), seen_ids.end());
    if (dup != seen_ids.end()) throw InvalidInput("duplicate page_id in manifest: " + *dup);
    return entries;
}

struct EvaluateOptions {
    MatchConfig match;
    NormalizationConfig norm;
    std::size_t workers = 1;
    std::string method = "layoutmetrics";
};

struct CorpusResult {
    BenchmarkReport report;
    std::vector<PageScores> pages; // sorted by page_id
};

namespace detail {

/// Runs fn(i) for i in [0, n) on up to `workers` threads. The first failing
/// index's exception is rethrown, so error identity is schedule independent.
template <typename Fn>
inline void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
    if (n == 0) return;
    workers = std::max<std::size_t>(1, std::min(workers, n));
    std::vector<std::exception_ptr> errors(n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
                break;
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto body = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace detail

/// Scores every manifest page: ground truth must load and parse; a missing or
/// unparseable prediction scores as an empty page with a warning. Results are
/// reduced in page_id order, so the report is byte-identical for any worker
/// count.
inline CorpusResult evaluate_corpus(const std::filesystem::path& pred_dir,
                                    const std::filesystem::path& gt_dir,
                                    const std::vector<ManifestEntry>& manifest,
                                    const EvaluateOptions& opts = {}) {
    const std::size_t n = manifest.size();
    std::vector<PageScores> scores(n);

    detail::parallel_for(n, opts.workers, [&](std::size_t i) {
        const ManifestEntry& entry = manifest[i];
        const auto gt_text = read_text_file(gt_dir / (entry.page_id + ".html"));
        if (!gt_text)
            throw InvalidGroundTruth("missing ground-truth page file: " + entry.page_id + ".html");
        PageDocument gt;
        try {
            gt = parse_page(*gt_text);
        } catch (const MalformedHtml& e) {
            throw InvalidGroundTruth("unparseable ground-truth page " + entry.page_id + ": " +
                                     e.what());
        }
        gt.page_id = entry.page_id; // manifest metadata is authoritative
        gt.language = entry.language;
        gt.doc_category = entry.doc_category;

        PageDocument pred;
        std::string pred_warning;
        const auto pred_text = read_text_file(pred_dir / (entry.page_id + ".html"));
        if (!pred_text) {
            pred_warning = "missing prediction, scored as empty page";
        } else {
            try {
                pred = parse_page(*pred_text);
            } catch (const MalformedHtml& e) {
                pred = PageDocument{};
                pred_warning = std::string("unparseable prediction, scored as empty page (") +
                               e.what() + ")";
            }
        }

        PageScores s = score_page(pred, gt, opts.match, opts.norm);
        if (!pred_warning.empty()) s.warnings.insert(s.warnings.begin(), pred_warning);
        scores[i] = std::move(s);
    });

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a].page_id < scores[b].page_id; });

    CorpusResult result;
    result.report.method = opts.method;
    result.pages.reserve(n);
    for (const std::size_t i : order) {
        result.report.add_page(scores[i]);
        result.pages.push_back(std::move(scores[i]));
    }
    return result;
}

} // namespace layoutmetrics
