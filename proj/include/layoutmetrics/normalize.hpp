#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "layoutmetrics/utf8.hpp"

namespace layoutmetrics {

/// Presentation macros stripped from LaTeX by default. Names are stored
/// without the leading backslash; single-character entries are control
/// symbols ("\\,", "\\;", "\\!").
inline std::vector<std::string> default_latex_strip_list() {
    return {"displaystyle", "textstyle", "mathrm", "left", "right",
            ",", ";", "!", "quad", "qquad"};
}

struct NormalizationConfig {
    bool enabled = true; // false = --no-normalize, all three operations become identity
    bool collapse_whitespace = true;
    bool unicode_compat_fold = true;
    bool fullwidth_to_halfwidth = true;
    std::vector<std::string> latex_strip_list = default_latex_strip_list();
    std::vector<std::string> table_drop_attrs = {"style", "class", "width", "height", "align"};

    static NormalizationConfig disabled() {
        NormalizationConfig cfg;
        cfg.enabled = false;
        return cfg;
    }
};

namespace detail {

inline bool is_collapsible_space(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' || cp == U'\v';
}

/// Curated 1:1 compatibility fold (never byte-expanding). Full NFKC needs
/// Unicode tables; this covers the mappings that show up in OCR output.
inline char32_t compat_fold(char32_t cp) {
    if (cp == 0x00A0) return U' ';                       // no-break space
    if (cp >= 0x2000 && cp <= 0x200A) return U' ';       // en/em/thin/... spaces
    if (cp == 0x202F || cp == 0x205F) return U' ';       // narrow nbsp, math space
    if (cp >= 0x2460 && cp <= 0x2468) return U'1' + (cp - 0x2460); // circled 1-9
    if (cp >= 0x2474 && cp <= 0x247C) return U'1' + (cp - 0x2474); // parenthesized 1-9
    if (cp == 0x2070) return U'0';
    if (cp == 0x00B9) return U'1';
    if (cp == 0x00B2) return U'2';
    if (cp == 0x00B3) return U'3';
    if (cp >= 0x2074 && cp <= 0x2079) return U'4' + (cp - 0x2074); // superscript 4-9
    if (cp >= 0x2080 && cp <= 0x2089) return U'0' + (cp - 0x2080); // subscript 0-9
    if (cp == 0x00B5) return 0x03BC;                     // micro sign -> mu
    if (cp == 0x2126) return 0x03A9;                     // ohm sign -> omega
    if (cp == 0x212A) return U'K';                       // kelvin sign
    if (cp == 0x212B) return 0x00C5;                     // angstrom sign
    return cp;
}

inline char32_t fullwidth_fold(char32_t cp) {
    if (cp >= 0xFF01 && cp <= 0xFF5E) return cp - 0xFEE0; // fullwidth ASCII range
    if (cp == 0x3000) return U' ';                        // ideographic space
    return cp;
}

} // namespace detail

/// Whitespace-collapsing text normalization. Idempotent; output never longer
/// than the input in bytes.
inline std::string normalize_text(std::string_view s, const NormalizationConfig& cfg = {}) {
    if (!cfg.enabled) return std::string(s);
    std::u32string u = decode_utf8(s);
    if (cfg.unicode_compat_fold)
        for (auto& cp : u) cp = detail::compat_fold(cp);
    if (cfg.fullwidth_to_halfwidth)
        for (auto& cp : u) cp = detail::fullwidth_fold(cp);
    if (!cfg.collapse_whitespace) return encode_utf8(u);

    std::u32string out;
    out.reserve(u.size());
    bool pending_space = false;
    for (char32_t cp : u) {
        if (detail::is_collapsible_space(cp)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(U' ');
        pending_space = false;
        out.push_back(cp);
    }
    return encode_utf8(out);
}

namespace detail {

inline bool is_latex_letter(char32_t cp) {
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
}

inline bool in_strip_list(const std::vector<std::string>& list, const std::u32string& name) {
    const std::string n = encode_utf8(name);
    for (const auto& item : list)
        if (item == n) return true;
    return false;
}

// Returns the index just past the brace group opening at `open` (which must
// point at '{'), or npos when unbalanced.
inline std::size_t match_brace(const std::u32string& s, std::size_t open) {
    int depth = 0;
    for (std::size_t i = open; i < s.size(); ++i) {
        if (s[i] == U'{') ++depth;
        else if (s[i] == U'}' && --depth == 0) return i + 1;
    }
    return std::u32string::npos;
}

inline void strip_latex_macros(const std::u32string& s, const std::vector<std::string>& list,
                               std::u32string& out) {
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != U'\\' || i + 1 >= s.size()) {
            out.push_back(s[i]);
            ++i;
            continue;
        }
        // control word (letters) or control symbol (one char)
        std::size_t j = i + 1;
        std::u32string name;
        if (is_latex_letter(s[j])) {
            while (j < s.size() && is_latex_letter(s[j])) name.push_back(s[j++]);
        } else {
            name.push_back(s[j++]);
        }
        if (!in_strip_list(list, name)) {
            out.append(s, i, j - i);
            i = j;
            continue;
        }
        std::size_t k = j;
        while (k < s.size() && is_collapsible_space(s[k])) ++k;
        if (name == U"left" || name == U"right") {
            // drop the macro; an invisible "." delimiter goes with it
            if (k < s.size() && s[k] == U'.') { i = k + 1; continue; }
            i = j;
            continue;
        }
        if (k < s.size() && s[k] == U'{') {
            const std::size_t close = match_brace(s, k);
            if (close == std::u32string::npos) {
                // unbalanced group: let the macro pass through untouched
                out.append(s, i, j - i);
                i = j;
                continue;
            }
            strip_latex_macros(s.substr(k + 1, close - k - 2), list, out);
            i = close;
            continue;
        }
        i = j; // bare macro, argument-less use
    }
}

} // namespace detail

/// Strips the configured presentation macros, keeping their argument text,
/// then collapses whitespace. Malformed LaTeX passes through with whitespace
/// normalization only. Idempotent.
inline std::string normalize_latex(std::string_view s, const NormalizationConfig& cfg = {}) {
    if (!cfg.enabled) return std::string(s);
    const std::u32string u = decode_utf8(s);
    std::u32string stripped;
    stripped.reserve(u.size());
    detail::strip_latex_macros(u, cfg.latex_strip_list, stripped);
    if (!cfg.collapse_whitespace) return encode_utf8(stripped);
    std::u32string out;
    out.reserve(stripped.size());
    bool pending_space = false;
    for (char32_t cp : stripped) {
        if (detail::is_collapsible_space(cp)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(U' ');
        pending_space = false;
        out.push_back(cp);
    }
    return encode_utf8(out);
}

} // namespace layoutmetrics
