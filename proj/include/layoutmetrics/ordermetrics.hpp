#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "layoutmetrics/matching.hpp"
#include "layoutmetrics/schema.hpp"

namespace layoutmetrics {

struct OrderPermutation {
    std::vector<std::size_t> perm; // perm[i] = predicted rank of the i-th included pair in GT order

    friend bool operator==(const OrderPermutation&, const OrderPermutation&) = default;
};

/// Restricts the match to reading-order categories and maps GT order to
/// predicted ranks. Identity permutation means the prediction reads the
/// matched blocks in GT order.
inline OrderPermutation order_permutation(const MatchAssignment& match, const PageDocument& pred,
                                          const PageDocument& gt) {
    (void)pred;
    std::vector<std::pair<std::size_t, std::size_t>> included; // (gt_index, pred_index)
    for (const MatchPair& pr : match.pairs)
        if (!excluded_from_reading_order(gt.blocks[pr.gt_index].category))
            included.emplace_back(pr.gt_index, pr.pred_index);
    std::sort(included.begin(), included.end());

    const std::size_t n = included.size();
    std::vector<std::size_t> by_pred(n);
    std::iota(by_pred.begin(), by_pred.end(), std::size_t{0});
    std::sort(by_pred.begin(), by_pred.end(), [&](std::size_t a, std::size_t b) {
        return included[a].second < included[b].second;
    });
    OrderPermutation out;
    out.perm.resize(n);
    for (std::size_t rank = 0; rank < n; ++rank) out.perm[by_pred[rank]] = rank;
    return out;
}

namespace detail {

inline std::size_t merge_count(std::vector<std::size_t>& v, std::vector<std::size_t>& scratch,
                               std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::size_t inversions = merge_count(v, scratch, lo, mid) + merge_count(v, scratch, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            inversions += mid - i; // everything left in [i, mid) exceeds v[j]
            scratch[k++] = v[j++];
        } else {
            scratch[k++] = v[i++];
        }
    }
    while (i < mid) scratch[k++] = v[i++];
    while (j < hi) scratch[k++] = v[j++];
    std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
              scratch.begin() + static_cast<std::ptrdiff_t>(hi),
              v.begin() + static_cast<std::ptrdiff_t>(lo));
    return inversions;
}

/// Two-row Levenshtein over id sequences; element identity is the only
/// zero-cost substitution.
inline std::size_t sequence_edit_distance(const std::vector<std::size_t>& a,
                                          const std::vector<std::size_t>& b) {
    const std::size_t m = a.size(), n = b.size();
    std::vector<std::size_t> prev(n + 1), cur(n + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= m; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

} // namespace detail

/// Number of pairs (i < j) with perm[i] > perm[j], via merge sort.
inline std::size_t inversion_count(const OrderPermutation& p) {
    std::vector<std::size_t> v = p.perm;
    std::vector<std::size_t> scratch(v.size());
    return detail::merge_count(v, scratch, 0, v.size());
}

/// NED between the included pair ids in GT order and in predicted order.
/// 0 when n <= 1 (no ordering expressible).
inline double read_order_edit(const MatchAssignment& match, const PageDocument& pred,
                              const PageDocument& gt) {
    const OrderPermutation p = order_permutation(match, pred, gt);
    const std::size_t n = p.perm.size();
    if (n <= 1) return 0.0;
    std::vector<std::size_t> gt_order(n);
    std::iota(gt_order.begin(), gt_order.end(), std::size_t{0});
    std::vector<std::size_t> pred_order(n);
    for (std::size_t i = 0; i < n; ++i) pred_order[p.perm[i]] = i;
    const std::size_t d = detail::sequence_edit_distance(gt_order, pred_order);
    return static_cast<double>(d) / static_cast<double>(n);
}

} // namespace layoutmetrics
