#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "layoutmetrics/utf8.hpp"

namespace layoutmetrics {

struct HtmlAttr {
    std::string name; // lowercased
    std::string value;
};

struct HtmlTag {
    std::string name; // lowercased
    std::vector<HtmlAttr> attrs;
    bool closing = false;
    bool self_closing = false;
    std::size_t begin = 0; // index of '<'
    std::size_t end = 0;   // index one past '>'

    const std::string* attr(std::string_view key) const {
        for (const auto& a : attrs)
            if (a.name == key) return &a.value;
        return nullptr;
    }
};

namespace detail {

inline char lower_ascii(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = lower_ascii(c);
    return out;
}

inline bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_name_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool is_name_char(char c) {
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '_' || c == ':';
}

} // namespace detail

/// Decodes the named entities that occur in practice plus numeric references.
/// Unknown entities pass through verbatim.
inline std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        const std::size_t semi = s.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 10) {
            out.push_back(s[i++]);
            continue;
        }
        const std::string_view body = s.substr(i + 1, semi - i - 1);
        if (body == "amp") out.push_back('&');
        else if (body == "lt") out.push_back('<');
        else if (body == "gt") out.push_back('>');
        else if (body == "quot") out.push_back('"');
        else if (body == "apos") out.push_back('\'');
        else if (body == "nbsp") out.append("\xC2\xA0");
        else if (body.size() > 1 && body[0] == '#') {
            char32_t cp = 0;
            bool ok = true;
            if (body[1] == 'x' || body[1] == 'X') {
                ok = body.size() > 2;
                for (std::size_t k = 2; k < body.size() && ok; ++k) {
                    const char c = detail::lower_ascii(body[k]);
                    if (c >= '0' && c <= '9') cp = cp * 16 + static_cast<char32_t>(c - '0');
                    else if (c >= 'a' && c <= 'f') cp = cp * 16 + static_cast<char32_t>(c - 'a' + 10);
                    else ok = false;
                }
            } else {
                for (std::size_t k = 1; k < body.size() && ok; ++k) {
                    if (body[k] >= '0' && body[k] <= '9') cp = cp * 10 + static_cast<char32_t>(body[k] - '0');
                    else ok = false;
                }
            }
            if (!ok || cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
                out.push_back(s[i++]);
                continue;
            }
            append_utf8(out, cp);
        } else {
            out.push_back(s[i++]);
            continue;
        }
        i = semi + 1;
    }
    return out;
}

/// Minimal escaping for element content: only what would change the parse.
inline std::string encode_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '&') out.append("&amp;");
        else if (c == '<') out.append("&lt;");
        else out.push_back(c);
    }
    return out;
}

/// Escaping for double-quoted attribute values.
inline std::string encode_attr(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '&') out.append("&amp;");
        else if (c == '<') out.append("&lt;");
        else if (c == '"') out.append("&quot;");
        else out.push_back(c);
    }
    return out;
}

inline bool is_void_element(std::string_view name) {
    return name == "area" || name == "base" || name == "br" || name == "col" ||
           name == "embed" || name == "hr" || name == "img" || name == "input" ||
           name == "link" || name == "meta" || name == "source" || name == "track" ||
           name == "wbr";
}

/// Parses the tag whose '<' sits at `pos`. Returns nullopt when the text at
/// `pos` is not a well-formed tag (caller decides whether that is an error or
/// literal text).
inline std::optional<HtmlTag> parse_tag_at(std::string_view s, std::size_t pos) {
    if (pos >= s.size() || s[pos] != '<') return std::nullopt;
    HtmlTag tag;
    tag.begin = pos;
    std::size_t i = pos + 1;
    if (i < s.size() && s[i] == '/') {
        tag.closing = true;
        ++i;
    }
    if (i >= s.size() || !detail::is_name_start(s[i])) return std::nullopt;
    const std::size_t name_begin = i;
    while (i < s.size() && detail::is_name_char(s[i])) ++i;
    tag.name = detail::lower_ascii(s.substr(name_begin, i - name_begin));

    while (i < s.size()) {
        while (i < s.size() && detail::is_ascii_space(s[i])) ++i;
        if (i >= s.size()) return std::nullopt;
        if (s[i] == '>') {
            tag.end = i + 1;
            return tag;
        }
        if (s[i] == '/') {
            ++i;
            while (i < s.size() && detail::is_ascii_space(s[i])) ++i;
            if (i >= s.size() || s[i] != '>') return std::nullopt;
            tag.self_closing = true;
            tag.end = i + 1;
            return tag;
        }
        if (!detail::is_name_start(s[i])) return std::nullopt;
        HtmlAttr attr;
        const std::size_t attr_begin = i;
        while (i < s.size() && detail::is_name_char(s[i])) ++i;
        attr.name = detail::lower_ascii(s.substr(attr_begin, i - attr_begin));
        while (i < s.size() && detail::is_ascii_space(s[i])) ++i;
        if (i < s.size() && s[i] == '=') {
            ++i;
            while (i < s.size() && detail::is_ascii_space(s[i])) ++i;
            if (i >= s.size()) return std::nullopt;
            if (s[i] == '"' || s[i] == '\'') {
                const char quote = s[i++];
                const std::size_t value_begin = i;
                while (i < s.size() && s[i] != quote) ++i;
                if (i >= s.size()) return std::nullopt;
                attr.value = decode_entities(s.substr(value_begin, i - value_begin));
                ++i;
            } else {
                const std::size_t value_begin = i;
                while (i < s.size() && !detail::is_ascii_space(s[i]) && s[i] != '>' && s[i] != '/')
                    ++i;
                attr.value = decode_entities(s.substr(value_begin, i - value_begin));
            }
        }
        tag.attrs.push_back(std::move(attr));
    }
    return std::nullopt;
}

/// Advances past comments, doctype and processing-instruction noise starting
/// at `pos` (which must point at '<'). Returns pos unchanged when the text is
/// an ordinary tag.
inline std::size_t skip_markup_noise(std::string_view s, std::size_t pos) {
    while (pos < s.size() && s[pos] == '<') {
        if (s.compare(pos, 4, "<!--") == 0) {
            const std::size_t close = s.find("-->", pos + 4);
            pos = (close == std::string_view::npos) ? s.size() : close + 3;
            continue;
        }
        if (pos + 1 < s.size() && (s[pos + 1] == '!' || s[pos + 1] == '?')) {
            const std::size_t close = s.find('>', pos + 1);
            pos = (close == std::string_view::npos) ? s.size() : close + 1;
            continue;
        }
        break;
    }
    return pos;
}

/// Finds the close tag matching an element named `name` whose open tag ends at
/// `content_begin`. Nested same-name elements are balanced. Returns
/// {content_end, close_end} or nullopt when the element is never closed.
inline std::optional<std::pair<std::size_t, std::size_t>>
find_matching_close(std::string_view s, std::string_view name, std::size_t content_begin) {
    int depth = 1;
    std::size_t i = content_begin;
    while (i < s.size()) {
        const std::size_t lt = s.find('<', i);
        if (lt == std::string_view::npos) return std::nullopt;
        const std::size_t skipped = skip_markup_noise(s, lt);
        if (skipped != lt) {
            i = skipped;
            continue;
        }
        const auto tag = parse_tag_at(s, lt);
        if (!tag) {
            i = lt + 1;
            continue;
        }
        if (tag->name == name) {
            if (tag->closing) {
                if (--depth == 0) return std::make_pair(lt, tag->end);
            } else if (!tag->self_closing && !is_void_element(tag->name)) {
                ++depth;
            }
        }
        i = tag->end;
    }
    return std::nullopt;
}

} // namespace layoutmetrics
