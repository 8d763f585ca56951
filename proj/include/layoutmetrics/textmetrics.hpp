#pragma once

#include <cstddef>
#include <string>

#include "layoutmetrics/editdistance.hpp"
#include "layoutmetrics/matching.hpp"
#include "layoutmetrics/normalize.hpp"
#include "layoutmetrics/schema.hpp"

namespace layoutmetrics {

/// Concatenation of a page's text-like block contents in reading order,
/// normalized per block and joined with single spaces. Headers and footers
/// never contribute (is_text_like excludes them by construction).
inline std::string global_text_concatenation(const PageDocument& doc,
                                             const NormalizationConfig& cfg = {}) {
    std::string out;
    for (const Block& b : doc.blocks) {
        if (!is_text_like(b.category) || excluded_from_global_text(b.category)) continue;
        std::string piece = normalize_text(b.content, cfg);
        if (piece.empty()) continue;
        if (!out.empty()) out += ' ';
        out += piece;
    }
    return out;
}

/// Page-level text NED over the two concatenations; invariant to block
/// segmentation that preserves the joined text.
inline double global_text_edit(const PageDocument& pred, const PageDocument& gt,
                               const NormalizationConfig& cfg = {}) {
    return ned(global_text_concatenation(pred, cfg), global_text_concatenation(gt, cfg));
}

/// Mean NED over matched pairs of one category, with every unmatched block on
/// either side contributing 1. Empty on both sides scores 0.
inline double category_edit(const PageDocument& pred, const PageDocument& gt,
                            BlockCategory category, const MatchAssignment& match,
                            const NormalizationConfig& cfg = {}) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const MatchPair& pr : match.pairs) {
        if (gt.blocks[pr.gt_index].category != category ||
            pred.blocks[pr.pred_index].category != category)
            continue;
        sum += ned(normalized_block_content(pred.blocks[pr.pred_index], cfg),
                   normalized_block_content(gt.blocks[pr.gt_index], cfg));
        ++count;
    }
    for (const std::size_t p : match.unmatched_pred) {
        if (pred.blocks[p].category != category) continue;
        sum += 1.0;
        ++count;
    }
    for (const std::size_t g : match.unmatched_gt) {
        if (gt.blocks[g].category != category) continue;
        sum += 1.0;
        ++count;
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

} // namespace layoutmetrics
