#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "layoutmetrics/utf8.hpp"

namespace layoutmetrics {

namespace detail {

// Bit-parallel Levenshtein distance (Myers 1999, block extension per Hyyro).
// The pattern is split into 64-row blocks; horizontal deltas propagate between
// blocks within one text column. Bits of the last partial block above row m-1
// carry garbage that nothing reads: the recurrence never lets a high bit feed
// a lower one.
inline std::size_t myers_edit_distance(std::span<const char32_t> pattern,
                                       std::span<const char32_t> text) {
    const std::size_t m = pattern.size();
    const std::size_t n = text.size();
    const std::size_t words = (m + 63) / 64;
    const std::uint64_t last_bit = 1ull << ((m - 1) % 64);

    std::unordered_map<char32_t, std::vector<std::uint64_t>> peq;
    peq.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        auto& masks = peq.try_emplace(pattern[i]).first->second;
        if (masks.empty()) masks.assign(words, 0);
        masks[i / 64] |= 1ull << (i % 64);
    }

    std::vector<std::uint64_t> pv(words, ~0ull);
    std::vector<std::uint64_t> mv(words, 0);
    std::size_t score = m;

    for (std::size_t j = 0; j < n; ++j) {
        const std::vector<std::uint64_t>* eq_masks = nullptr;
        if (auto it = peq.find(text[j]); it != peq.end()) eq_masks = &it->second;

        int hin = 1; // D[0][j] - D[0][j-1]
        for (std::size_t b = 0; b < words; ++b) {
            const std::uint64_t eq0 = eq_masks ? (*eq_masks)[b] : 0ull;
            const std::uint64_t hin_neg = hin < 0 ? 1ull : 0ull;
            const std::uint64_t hin_pos = hin > 0 ? 1ull : 0ull;
            const std::uint64_t top = (b + 1 == words) ? last_bit : (1ull << 63);

            const std::uint64_t xv = eq0 | mv[b];
            const std::uint64_t eq = eq0 | hin_neg;
            const std::uint64_t xh = (((eq & pv[b]) + pv[b]) ^ pv[b]) | eq;
            std::uint64_t ph = mv[b] | ~(xh | pv[b]);
            std::uint64_t mh = pv[b] & xh;

            int hout = 0;
            if (ph & top) hout = 1;
            else if (mh & top) hout = -1;

            ph = (ph << 1) | hin_pos;
            mh = (mh << 1) | hin_neg;
            pv[b] = mh | ~(xv | ph);
            mv[b] = ph & xv;
            hin = hout;
        }
        score = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(score) + hin);
    }
    return score;
}

} // namespace detail

/// Minimum number of single-element insertions, deletions, and substitutions
/// transforming one sequence into the other. Symmetric, metric.
inline std::size_t edit_distance(std::span<const char32_t> a, std::span<const char32_t> b) {
    // shared prefix and suffix never participate in an optimal script
    std::size_t lo = 0;
    while (lo < a.size() && lo < b.size() && a[lo] == b[lo]) ++lo;
    std::size_t hi = 0;
    while (hi + lo < a.size() && hi + lo < b.size() && a[a.size() - 1 - hi] == b[b.size() - 1 - hi]) ++hi;
    a = a.subspan(lo, a.size() - lo - hi);
    b = b.subspan(lo, b.size() - lo - hi);
    if (a.size() > b.size()) std::swap(a, b);
    if (a.empty()) return b.size();
    return detail::myers_edit_distance(a, b);
}

inline std::span<const char32_t> as_span(const std::u32string& s) {
    return {s.data(), s.size()};
}

/// Codepoint-level Levenshtein distance over UTF-8 strings.
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
    const std::u32string ua = decode_utf8(a);
    const std::u32string ub = decode_utf8(b);
    return edit_distance(as_span(ua), as_span(ub));
}

struct NedScore {
    std::size_t distance = 0;
    std::size_t max_len = 0;
    double ned = 0.0; // distance / max_len, 0 when both sides empty
};

inline NedScore ned_score(std::span<const char32_t> a, std::span<const char32_t> b) {
    NedScore s;
    s.max_len = std::max(a.size(), b.size());
    if (s.max_len == 0) return s;
    s.distance = edit_distance(a, b);
    s.ned = static_cast<double>(s.distance) / static_cast<double>(s.max_len);
    return s;
}

inline NedScore ned_score(std::string_view a, std::string_view b) {
    const std::u32string ua = decode_utf8(a);
    const std::u32string ub = decode_utf8(b);
    return ned_score(as_span(ua), as_span(ub));
}

/// Normalized edit distance in [0,1]; 0 when both strings are empty.
inline double ned(std::string_view a, std::string_view b) { return ned_score(a, b).ned; }

inline double ned(std::span<const char32_t> a, std::span<const char32_t> b) {
    return ned_score(a, b).ned;
}

} // namespace layoutmetrics
