#pragma once

// Independent reference implementations used to cross-check the production
// algorithms. Deliberately naive: full-matrix DP, quadratic enumeration,
// rightmost-root forest recursion, and exhaustive assignment search. Nothing
// here shares algorithmic code with the library.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "layoutmetrics/tablemetrics.hpp"
#include "layoutmetrics/utf8.hpp"

namespace oracle {

template <typename Seq>
inline std::size_t levenshtein_dp_seq(const Seq& a, const Seq& b) {
    const std::size_t m = a.size(), n = b.size();
    std::vector<std::vector<std::size_t>> d(m + 1, std::vector<std::size_t>(n + 1, 0));
    for (std::size_t i = 0; i <= m; ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= n; ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
        }
    }
    return d[m][n];
}

inline std::size_t levenshtein_dp(std::string_view a, std::string_view b) {
    return levenshtein_dp_seq(layoutmetrics::decode_utf8(a), layoutmetrics::decode_utf8(b));
}

inline double ned_dp(std::string_view a, std::string_view b) {
    const auto ua = layoutmetrics::decode_utf8(a);
    const auto ub = layoutmetrics::decode_utf8(b);
    const std::size_t maxlen = std::max(ua.size(), ub.size());
    if (maxlen == 0) return 0.0;
    return static_cast<double>(levenshtein_dp_seq(ua, ub)) / static_cast<double>(maxlen);
}

inline std::size_t inversions_quadratic(const std::vector<std::size_t>& p) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++count;
    return count;
}

// ---- tree edit distance oracle -------------------------------------------

namespace ted {

struct Node {
    int id = 0; // unique within one tree pair, keys the memo
    const layoutmetrics::TableNode* payload = nullptr;
    std::vector<Node> children;
};

inline Node wrap(const layoutmetrics::TableNode& n, int& next_id) {
    Node out;
    out.id = next_id++;
    out.payload = &n;
    for (const auto& c : n.children) out.children.push_back(wrap(c, next_id));
    return out;
}

inline double rename_cost(const Node& a, const Node& b) {
    const auto& x = *a.payload;
    const auto& y = *b.payload;
    if (x.label != y.label) return 1.0;
    if (x.label == "cell") {
        if (x.colspan != y.colspan || x.rowspan != y.rowspan) return 1.0;
        const std::string& xs = x.cell_text ? *x.cell_text : std::string{};
        const std::string& ys = y.cell_text ? *y.cell_text : std::string{};
        return ned_dp(xs, ys);
    }
    return 0.0;
}

using Forest = std::vector<const Node*>;

inline std::size_t forest_size(const Forest& f) {
    std::size_t n = 0;
    for (const Node* t : f) {
        n += 1;
        Forest kids;
        for (const auto& c : t->children) kids.push_back(&c);
        n += forest_size(kids);
    }
    return n;
}

struct Memo {
    std::map<std::pair<std::vector<int>, std::vector<int>>, double> table;
};

inline std::vector<int> forest_key(const Forest& f) {
    std::vector<int> key;
    for (const Node* t : f) key.push_back(t->id);
    return key;
}

/// Rightmost-root decomposition of ordered forest edit distance.
inline double forest_distance(const Forest& f1, const Forest& f2, Memo& memo) {
    if (f1.empty() && f2.empty()) return 0.0;
    const auto key = std::make_pair(forest_key(f1), forest_key(f2));
    if (const auto it = memo.table.find(key); it != memo.table.end()) return it->second;

    double best;
    if (f1.empty()) {
        best = static_cast<double>(forest_size(f2));
    } else if (f2.empty()) {
        best = static_cast<double>(forest_size(f1));
    } else {
        const Node* a = f1.back();
        const Node* b = f2.back();
        Forest f1_rest(f1.begin(), f1.end() - 1);
        Forest f2_rest(f2.begin(), f2.end() - 1);
        Forest f1_open = f1_rest;
        for (const auto& c : a->children) f1_open.push_back(&c);
        Forest f2_open = f2_rest;
        for (const auto& c : b->children) f2_open.push_back(&c);

        const double del = forest_distance(f1_open, f2, memo) + 1.0;
        const double ins = forest_distance(f1, f2_open, memo) + 1.0;
        Forest a_kids, b_kids;
        for (const auto& c : a->children) a_kids.push_back(&c);
        for (const auto& c : b->children) b_kids.push_back(&c);
        const double match = forest_distance(f1_rest, f2_rest, memo) +
                             forest_distance(a_kids, b_kids, memo) + rename_cost(*a, *b);
        best = std::min({del, ins, match});
    }
    memo.table.emplace(key, best);
    return best;
}

} // namespace ted

inline double tree_edit_distance_memo(const layoutmetrics::TableTree& t1,
                                      const layoutmetrics::TableTree& t2) {
    int id1 = 0, id2 = 0;
    const ted::Node r1 = ted::wrap(t1.root, id1);
    const ted::Node r2 = ted::wrap(t2.root, id2);
    ted::Memo memo;
    return ted::forest_distance({&r1}, {&r2}, memo);
}

// ---- assignment oracle ----------------------------------------------------

namespace assign {

inline void search(const std::vector<std::vector<double>>& sim, double threshold, std::size_t g,
                   std::vector<char>& pred_used, double total, double& best) {
    if (g == sim.size()) {
        best = std::max(best, total);
        return;
    }
    search(sim, threshold, g + 1, pred_used, total, best); // leave g unmatched
    for (std::size_t p = 0; p < sim[g].size(); ++p) {
        if (pred_used[p] || sim[g][p] < threshold) continue;
        pred_used[p] = 1;
        search(sim, threshold, g + 1, pred_used, total + sim[g][p], best);
        pred_used[p] = 0;
    }
}

} // namespace assign

/// Maximum total similarity over all partial injections gt -> pred whose
/// pairs clear the threshold. Exhaustive; use only for small instances.
inline double best_assignment_similarity(const std::vector<std::vector<double>>& sim,
                                         double threshold) {
    double best = 0.0;
    std::vector<char> pred_used(sim.empty() ? 0 : sim[0].size(), 0);
    assign::search(sim, threshold, 0, pred_used, 0.0, best);
    return best;
}

} // namespace oracle
