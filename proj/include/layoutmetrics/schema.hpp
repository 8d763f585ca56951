#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "layoutmetrics/errors.hpp"
#include "layoutmetrics/html.hpp"
#include "layoutmetrics/normalize.hpp"
#include "layoutmetrics/tablemetrics.hpp"

namespace layoutmetrics {

enum class BlockCategory {
    Text,
    Title,
    Formula,
    Table,
    Image,
    Chemistry,
    Handwriting,
    Header,
    Footer,
    Caption,
    Other,
};

inline constexpr std::array<BlockCategory, 11> all_block_categories = {
    BlockCategory::Text,     BlockCategory::Title,       BlockCategory::Formula,
    BlockCategory::Table,    BlockCategory::Image,       BlockCategory::Chemistry,
    BlockCategory::Handwriting, BlockCategory::Header,   BlockCategory::Footer,
    BlockCategory::Caption,  BlockCategory::Other,
};

inline std::string_view category_name(BlockCategory c) {
    switch (c) {
        case BlockCategory::Text: return "text";
        case BlockCategory::Title: return "title";
        case BlockCategory::Formula: return "formula";
        case BlockCategory::Table: return "table";
        case BlockCategory::Image: return "image";
        case BlockCategory::Chemistry: return "chemistry";
        case BlockCategory::Handwriting: return "handwriting";
        case BlockCategory::Header: return "header";
        case BlockCategory::Footer: return "footer";
        case BlockCategory::Caption: return "caption";
        case BlockCategory::Other: return "other";
    }
    return "other";
}

/// Unknown names map to Other so third-party outputs stay evaluable.
inline BlockCategory category_from_name(std::string_view name) {
    const std::string lower = detail::lower_ascii(name);
    for (BlockCategory c : all_block_categories)
        if (category_name(c) == lower) return c;
    return BlockCategory::Other;
}

/// Categories whose content joins the page-level text concatenation.
inline bool is_text_like(BlockCategory c) {
    return c == BlockCategory::Text || c == BlockCategory::Title ||
           c == BlockCategory::Caption || c == BlockCategory::Handwriting;
}

inline bool excluded_from_global_text(BlockCategory c) {
    return c == BlockCategory::Header || c == BlockCategory::Footer;
}

/// Tables, images, and ignorable furniture play no part in reading order.
inline bool excluded_from_reading_order(BlockCategory c) {
    return c == BlockCategory::Table || c == BlockCategory::Image ||
           c == BlockCategory::Header || c == BlockCategory::Footer ||
           c == BlockCategory::Other;
}

enum class Language { EN, ZH };

inline std::string_view language_name(Language l) { return l == Language::EN ? "en" : "zh"; }

inline std::optional<Language> language_from_name(std::string_view name) {
    const std::string lower = detail::lower_ascii(name);
    if (lower == "en") return Language::EN;
    if (lower == "zh") return Language::ZH;
    return std::nullopt;
}

struct BBox {
    long long x1 = 0, y1 = 0, x2 = 0, y2 = 0;

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Intersection over union of two boxes; degenerate boxes have area 0.
inline double iou(const BBox& a, const BBox& b) {
    const long long ix = std::max(0LL, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
    const long long iy = std::max(0LL, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
    const double inter = static_cast<double>(ix) * static_cast<double>(iy);
    const double area_a = static_cast<double>(a.x2 - a.x1) * static_cast<double>(a.y2 - a.y1);
    const double area_b = static_cast<double>(b.x2 - b.x1) * static_cast<double>(b.y2 - b.y1);
    const double uni = area_a + area_b - inter;
    return uni <= 0.0 ? 0.0 : inter / uni;
}

struct Block {
    BlockCategory category = BlockCategory::Other;
    std::optional<BBox> bbox;
    std::string content; // plain text, LaTeX, table HTML fragment, or SMILES

    friend bool operator==(const Block&, const Block&) = default;
};

struct PageDocument {
    std::string page_id;
    Language language = Language::EN;
    std::string doc_category;
    std::vector<Block> blocks; // index is reading position

    friend bool operator==(const PageDocument&, const PageDocument&) = default;
};

struct Violation {
    std::size_t block_index = 0;
    std::string reason;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ParsePageOptions {
    bool require_page_id = false;
};

namespace detail {

inline std::optional<BBox> parse_bbox_attr(const std::string* value) {
    if (!value) return std::nullopt;
    BBox box;
    long long* fields[4] = {&box.x1, &box.y1, &box.x2, &box.y2};
    std::size_t i = 0;
    const std::string& s = *value;
    for (int f = 0; f < 4; ++f) {
        while (i < s.size() && is_ascii_space(s[i])) ++i;
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = (s[i++] == '-');
        std::size_t digits = 0;
        long long v = 0;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9' && v < (1LL << 40)) {
            v = v * 10 + (s[i++] - '0');
            ++digits;
        }
        if (digits == 0) return std::nullopt;
        *fields[f] = neg ? -v : v;
        while (i < s.size() && is_ascii_space(s[i])) ++i;
        if (f < 3) {
            if (i >= s.size() || s[i] != ',') return std::nullopt;
            ++i;
        }
    }
    if (i != s.size()) return std::nullopt;
    return box;
}

inline bool is_page_wrapper_tag(std::string_view name) {
    return name == "html" || name == "body" || name == "page";
}

inline void absorb_wrapper_attrs(PageDocument& doc, const HtmlTag& tag, bool& saw_language,
                                 bool& saw_doc_category) {
    if (const auto* id = tag.attr("data-page-id"); id && doc.page_id.empty()) doc.page_id = *id;
    if (const auto* lang = tag.attr("data-language"); lang && !saw_language) {
        if (const auto l = language_from_name(*lang)) {
            doc.language = *l;
            saw_language = true;
        }
    }
    if (const auto* cat = tag.attr("data-doc-category"); cat && !saw_doc_category) {
        doc.doc_category = *cat;
        saw_doc_category = true;
    }
}

} // namespace detail

/// Parses a block-structured page. Each top-level element becomes one Block;
/// wrapper elements (html, body, page) are transparent and may carry page
/// metadata. Table block content is kept verbatim; other content has
/// entities decoded.
inline PageDocument parse_page(std::string_view html, const ParsePageOptions& opts = {}) {
    PageDocument doc;
    bool saw_language = false, saw_doc_category = false;

    struct Frame {
        std::string_view body;
        std::size_t pos = 0;
    };
    std::vector<Frame> stack;
    stack.push_back({html, 0});

    while (!stack.empty()) {
        Frame& fr = stack.back();
        std::string_view s = fr.body;
        std::size_t& i = fr.pos;
        bool descended = false;
        while (i < s.size()) {
            if (detail::is_ascii_space(s[i])) {
                ++i;
                continue;
            }
            if (s[i] != '<')
                throw MalformedHtml("unexpected text outside a block element");
            const std::size_t skipped = skip_markup_noise(s, i);
            if (skipped != i) {
                i = skipped;
                continue;
            }
            const auto tag = parse_tag_at(s, i);
            if (!tag) throw MalformedHtml("unparseable tag at top level");
            if (tag->closing) throw MalformedHtml("unbalanced close tag </" + tag->name + ">");

            if (detail::is_page_wrapper_tag(tag->name)) {
                detail::absorb_wrapper_attrs(doc, *tag, saw_language, saw_doc_category);
                if (tag->self_closing) {
                    i = tag->end;
                    continue;
                }
                const auto close = find_matching_close(s, tag->name, tag->end);
                if (!close) throw MalformedHtml("unclosed <" + tag->name + "> wrapper");
                const std::string_view inner = s.substr(tag->end, close->first - tag->end);
                i = close->second;
                stack.push_back({inner, 0});
                descended = true;
                break;
            }

            Block block;
            if (const auto* cat = tag->attr("data-category"))
                block.category = category_from_name(*cat);
            block.bbox = detail::parse_bbox_attr(tag->attr("data-bbox"));
            if (tag->self_closing || is_void_element(tag->name)) {
                i = tag->end;
            } else {
                const auto close = find_matching_close(s, tag->name, tag->end);
                if (!close) throw MalformedHtml("unclosed <" + tag->name + "> block");
                const std::string_view inner = s.substr(tag->end, close->first - tag->end);
                block.content = (block.category == BlockCategory::Table)
                                    ? std::string(inner)
                                    : decode_entities(inner);
                i = close->second;
            }
            doc.blocks.push_back(std::move(block));
        }
        if (!descended && stack.back().pos >= stack.back().body.size()) stack.pop_back();
    }

    if (opts.require_page_id && doc.page_id.empty())
        throw MissingPageId("page has no data-page-id attribute");
    return doc;
}

/// Inverse of parse_page: one wrapper element, one div per block, newline
/// separated. parse_page(serialize_page(d)) == d for every valid d.
inline std::string serialize_page(const PageDocument& doc) {
    std::string out = "<html";
    if (!doc.page_id.empty()) {
        out += " data-page-id=\"";
        out += encode_attr(doc.page_id);
        out += '"';
    }
    out += " data-language=\"";
    out += language_name(doc.language);
    out += '"';
    if (!doc.doc_category.empty()) {
        out += " data-doc-category=\"";
        out += encode_attr(doc.doc_category);
        out += '"';
    }
    out += ">\n";
    for (const Block& b : doc.blocks) {
        out += "<div data-category=\"";
        out += category_name(b.category);
        out += '"';
        if (b.bbox) {
            out += " data-bbox=\"";
            out += std::to_string(b.bbox->x1) + ',' + std::to_string(b.bbox->y1) + ',' +
                   std::to_string(b.bbox->x2) + ',' + std::to_string(b.bbox->y2);
            out += '"';
        }
        out += '>';
        out += (b.category == BlockCategory::Table) ? b.content : encode_text(b.content);
        out += "</div>\n";
    }
    out += "</html>\n";
    return out;
}

/// Reports every invariant violation with its block index; empty iff valid.
inline std::vector<Violation> validate(const PageDocument& doc) {
    std::vector<Violation> out;
    for (std::size_t i = 0; i < doc.blocks.size(); ++i) {
        const Block& b = doc.blocks[i];
        if (b.bbox) {
            if (b.bbox->x1 > b.bbox->x2) out.push_back({i, "x1 > x2"});
            if (b.bbox->y1 > b.bbox->y2) out.push_back({i, "y1 > y2"});
            if (b.bbox->x1 < 0 || b.bbox->y1 < 0 || b.bbox->x2 < 0 || b.bbox->y2 < 0)
                out.push_back({i, "negative coordinate"});
        }
        if (b.content.empty() && b.category != BlockCategory::Image)
            out.push_back({i, "empty content"});
        if (b.category == BlockCategory::Table) {
            try {
                parse_table_tree(b.content);
            } catch (const MalformedTable&) {
                out.push_back({i, "malformed table fragment"});
            }
        }
    }
    return out;
}

/// Block content normalized by what the content is: LaTeX for formulas,
/// canonical table HTML (text fallback) for tables, plain text otherwise.
inline std::string normalized_block_content(const Block& b, const NormalizationConfig& cfg = {}) {
    switch (b.category) {
        case BlockCategory::Formula:
            return normalize_latex(b.content, cfg);
        case BlockCategory::Table:
            try {
                return normalize_table_html(b.content, cfg);
            } catch (const MalformedTable&) {
                return normalize_text(b.content, cfg);
            }
        default:
            return normalize_text(b.content, cfg);
    }
}

} // namespace layoutmetrics
