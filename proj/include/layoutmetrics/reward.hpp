#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "layoutmetrics/errors.hpp"
#include "layoutmetrics/matching.hpp"
#include "layoutmetrics/ordermetrics.hpp"
#include "layoutmetrics/schema.hpp"
#include "layoutmetrics/textmetrics.hpp"

namespace layoutmetrics {

struct RewardWeights {
    double w_text = 1.0 / 3.0;
    double w_bbox = 1.0 / 3.0;
    double w_order = 1.0 / 3.0;

    /// Scales arbitrary nonnegative weights to sum to 1.
    static RewardWeights normalized(double text, double bbox, double order) {
        if (text < 0.0 || bbox < 0.0 || order < 0.0)
            throw InvalidInput("reward weights must be nonnegative");
        const double sum = text + bbox + order;
        if (sum <= 0.0) throw InvalidInput("reward weights must not all be zero");
        return {text / sum, bbox / sum, order / sum};
    }
};

struct RewardBreakdown {
    double r_text = 0.0;
    double r_bbox = 0.0;
    double r_order = 0.0;
    double total = 0.0;
};

struct MiningConfig {
    double lo = 0.5; // inclusive
    double hi = 0.8; // inclusive
};

/// Text component: global text NED flipped into [0,1]. Orders candidate
/// predictions identically to the negative NED it replaces.
inline double text_reward(const PageDocument& pred, const PageDocument& gt,
                          const NormalizationConfig& cfg = {}) {
    return 1.0 - global_text_edit(pred, gt, cfg);
}

/// Localization component: summed IoU over matched pairs (a missing box on
/// either side contributes 0) divided by max block count, so hallucinated and
/// missing blocks both dilute the reward. Two empty pages score 1.
inline double bbox_reward(const MatchAssignment& match, const PageDocument& pred,
                          const PageDocument& gt) {
    const std::size_t denom = std::max(pred.blocks.size(), gt.blocks.size());
    if (denom == 0) return 1.0;
    double sum = 0.0;
    for (const MatchPair& pr : match.pairs) {
        const auto& pb = pred.blocks[pr.pred_index].bbox;
        const auto& gb = gt.blocks[pr.gt_index].bbox;
        if (pb && gb) sum += iou(*pb, *gb);
    }
    return sum / static_cast<double>(denom);
}

/// Ordering component: inversion count over the included matched blocks,
/// flipped into [0,1]. 1 when fewer than two blocks are comparable.
inline double order_reward(const MatchAssignment& match, const PageDocument& pred,
                           const PageDocument& gt) {
    const OrderPermutation p = order_permutation(match, pred, gt);
    const std::size_t n = p.perm.size();
    if (n <= 1) return 1.0;
    const double max_inversions = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return 1.0 - static_cast<double>(inversion_count(p)) / max_inversions;
}

inline RewardBreakdown compute_reward(const PageDocument& pred, const PageDocument& gt,
                                      const RewardWeights& weights = {},
                                      const MatchConfig& mcfg = {},
                                      const NormalizationConfig& ncfg = {}) {
    const MatchAssignment match = match_blocks(pred, gt, mcfg, ncfg);
    RewardBreakdown out;
    out.r_text = text_reward(pred, gt, ncfg);
    out.r_bbox = bbox_reward(match, pred, gt);
    out.r_order = order_reward(match, pred, gt);
    out.total = weights.w_text * out.r_text + weights.w_bbox * out.r_bbox +
                weights.w_order * out.r_order;
    return out;
}

/// Reward over raw page strings. An unparseable prediction earns the zero
/// breakdown; an unparseable ground truth is a data error.
inline RewardBreakdown compute_reward(std::string_view pred_html, std::string_view gt_html,
                                      const RewardWeights& weights = {},
                                      const MatchConfig& mcfg = {},
                                      const NormalizationConfig& ncfg = {}) {
    PageDocument gt;
    try {
        gt = parse_page(gt_html);
    } catch (const MalformedHtml& e) {
        throw InvalidGroundTruth(std::string("ground-truth page unparseable: ") + e.what());
    }
    PageDocument pred;
    try {
        pred = parse_page(pred_html);
    } catch (const MalformedHtml&) {
        return RewardBreakdown{};
    }
    return compute_reward(pred, gt, weights, mcfg, ncfg);
}

struct MiningRecord {
    std::string sample_id;
    std::string pred_html;
    std::string gt_html;
};

struct MiningResult {
    std::string sample_id;
    double ned = 1.0;       // global text NED, the mining difficulty signal
    bool selected = false;  // lo <= ned <= hi
    bool gt_error = false;  // ground truth unparseable; never selected
};

/// Keeps samples whose global text NED falls in the closed difficulty band.
/// Input order is preserved; records with bad ground truth are flagged, not
/// fatal. An unparseable prediction counts as an empty page.
inline std::vector<MiningResult> mine_hard_samples(std::span<const MiningRecord> records,
                                                   const MiningConfig& cfg = {},
                                                   const NormalizationConfig& ncfg = {}) {
    std::vector<MiningResult> out;
    out.reserve(records.size());
    for (const MiningRecord& rec : records) {
        MiningResult res;
        res.sample_id = rec.sample_id;
        PageDocument gt;
        try {
            gt = parse_page(rec.gt_html);
        } catch (const MalformedHtml&) {
            res.gt_error = true;
            out.push_back(std::move(res));
            continue;
        }
        PageDocument pred;
        try {
            pred = parse_page(rec.pred_html);
        } catch (const MalformedHtml&) {
            pred = PageDocument{};
        }
        res.ned = global_text_edit(pred, gt, ncfg);
        res.selected = res.ned >= cfg.lo && res.ned <= cfg.hi;
        out.push_back(std::move(res));
    }
    return out;
}

inline std::vector<std::string> selected_sample_ids(std::span<const MiningResult> results) {
    std::vector<std::string> ids;
    for (const MiningResult& r : results)
        if (r.selected) ids.push_back(r.sample_id);
    return ids;
}

} // namespace layoutmetrics
