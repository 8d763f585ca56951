#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "layoutmetrics/editdistance.hpp"
#include "layoutmetrics/errors.hpp"
#include "layoutmetrics/normalize.hpp"
#include "layoutmetrics/schema.hpp"

namespace layoutmetrics {

struct MatchPair {
    std::size_t pred_index = 0;
    std::size_t gt_index = 0;
    double similarity = 0.0; // 1 - ned of normalized contents, >= threshold

    friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

struct MatchAssignment {
    std::vector<MatchPair> pairs;            // sorted by gt_index
    std::vector<std::size_t> unmatched_pred; // ascending
    std::vector<std::size_t> unmatched_gt;   // ascending
};

struct MatchConfig {
    double threshold = 0.4;
    bool category_must_agree = true; // Text/Title/Caption count as one class
};

namespace detail {

inline bool categories_compatible(BlockCategory a, BlockCategory b) {
    if (a == b) return true;
    auto text_class = [](BlockCategory c) {
        return c == BlockCategory::Text || c == BlockCategory::Title ||
               c == BlockCategory::Caption;
    };
    return text_class(a) && text_class(b);
}

/// Minimum-cost perfect assignment on a square int64 matrix; returns for each
/// row the assigned column. Deterministic for a given matrix.
inline std::vector<std::size_t> solve_assignment(const std::vector<std::vector<std::int64_t>>& a) {
    constexpr std::int64_t kInf = std::int64_t{1} << 62;
    const int n = static_cast<int>(a.size());
    std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            std::int64_t delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const std::int64_t cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (int j = 1; j <= n; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<std::size_t>(j - 1);
    return row_to_col;
}

} // namespace detail

inline double block_similarity(const Block& pred, const Block& gt,
                               const NormalizationConfig& cfg = {}) {
    return 1.0 - ned(normalized_block_content(pred, cfg), normalized_block_content(gt, cfg));
}

/// Maximum-total-similarity partial assignment between the two pages' blocks.
/// Among optima, prefers pairings with small |gt_index - pred_index|, which
/// pins the identity pairing on self-matches with duplicate contents.
inline MatchAssignment match_blocks(const PageDocument& pred, const PageDocument& gt,
                                    const MatchConfig& cfg = {},
                                    const NormalizationConfig& ncfg = {}) {
    const std::size_t np = pred.blocks.size();
    const std::size_t ng = gt.blocks.size();
    MatchAssignment out;
    if (np == 0 || ng == 0) {
        for (std::size_t p = 0; p < np; ++p) out.unmatched_pred.push_back(p);
        for (std::size_t g = 0; g < ng; ++g) out.unmatched_gt.push_back(g);
        return out;
    }
    const std::size_t n = np + ng;
    if (n > 4096) throw InvalidInput("too many blocks on one page to match");

    std::vector<std::string> pred_norm(np), gt_norm(ng);
    for (std::size_t p = 0; p < np; ++p) pred_norm[p] = normalized_block_content(pred.blocks[p], ncfg);
    for (std::size_t g = 0; g < ng; ++g) gt_norm[g] = normalized_block_content(gt.blocks[g], ncfg);

    std::vector<std::vector<double>> sim(ng, std::vector<double>(np, -1.0));
    for (std::size_t g = 0; g < ng; ++g) {
        for (std::size_t p = 0; p < np; ++p) {
            if (cfg.category_must_agree &&
                !detail::categories_compatible(pred.blocks[p].category, gt.blocks[g].category))
                continue;
            const double s = 1.0 - ned(pred_norm[p], gt_norm[g]);
            if (s >= cfg.threshold) sim[g][p] = s;
        }
    }

    // Doubled square matrix: rows = gt + dummies, cols = pred + dummies.
    // Primary cost ranks total similarity; the |g - p| term breaks ties.
    // Every non-pairing cell costs base, so the base term is assignment
    // invariant and only real pairs move the total.
    constexpr std::int64_t kSimScale = 10'000'000;
    constexpr std::int64_t kForbidden = std::int64_t{1} << 60;
    const std::int64_t tie_unit = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n) + 1;
    const std::int64_t base = kSimScale * tie_unit;
    std::vector<std::vector<std::int64_t>> cost(n, std::vector<std::int64_t>(n, base));
    for (std::size_t g = 0; g < ng; ++g) {
        for (std::size_t p = 0; p < np; ++p) {
            if (sim[g][p] < 0.0) {
                cost[g][p] = kForbidden;
                continue;
            }
            const auto s_int = std::clamp<std::int64_t>(
                std::llround(sim[g][p] * static_cast<double>(kSimScale)), 0, kSimScale);
            const auto dist = static_cast<std::int64_t>(g > p ? g - p : p - g);
            cost[g][p] = base - s_int * tie_unit + dist;
        }
    }

    const std::vector<std::size_t> row_to_col = detail::solve_assignment(cost);
    std::vector<char> pred_used(np, 0);
    for (std::size_t g = 0; g < ng; ++g) {
        const std::size_t p = row_to_col[g];
        if (p < np && sim[g][p] >= 0.0) {
            out.pairs.push_back({p, g, sim[g][p]});
            pred_used[p] = 1;
        } else {
            out.unmatched_gt.push_back(g);
        }
    }
    for (std::size_t p = 0; p < np; ++p)
        if (!pred_used[p]) out.unmatched_pred.push_back(p);
    return out;
}

/// Projects an assignment onto one category: keeps pairs where both sides
/// have that category and lists that category's remaining blocks unmatched.
inline MatchAssignment restrict_to_category(const MatchAssignment& match,
                                            const PageDocument& pred, const PageDocument& gt,
                                            BlockCategory category) {
    MatchAssignment out;
    std::vector<char> pred_in_pair(pred.blocks.size(), 0);
    std::vector<char> gt_in_pair(gt.blocks.size(), 0);
    for (const MatchPair& pr : match.pairs) {
        if (pred.blocks[pr.pred_index].category == category &&
            gt.blocks[pr.gt_index].category == category) {
            out.pairs.push_back(pr);
            pred_in_pair[pr.pred_index] = 1;
            gt_in_pair[pr.gt_index] = 1;
        }
    }
    for (std::size_t p = 0; p < pred.blocks.size(); ++p)
        if (!pred_in_pair[p] && pred.blocks[p].category == category)
            out.unmatched_pred.push_back(p);
    for (std::size_t g = 0; g < gt.blocks.size(); ++g)
        if (!gt_in_pair[g] && gt.blocks[g].category == category)
            out.unmatched_gt.push_back(g);
    return out;
}

} // namespace layoutmetrics
