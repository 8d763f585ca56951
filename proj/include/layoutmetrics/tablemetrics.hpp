#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "layoutmetrics/editdistance.hpp"
#include "layoutmetrics/errors.hpp"
#include "layoutmetrics/html.hpp"
#include "layoutmetrics/normalize.hpp"
#include "layoutmetrics/utf8.hpp"

namespace layoutmetrics {

/// Ordered table tree: root "table", children "tr", leaves "cell".
/// thead/tbody/tfoot grouping is flattened away at parse time.
struct TableNode {
    std::string label;                 // "table", "tr", or "cell"
    std::string html_tag;              // serialization tag ("td" vs "th" for cells)
    std::optional<std::string> cell_text;
    int colspan = 1;
    int rowspan = 1;
    std::vector<HtmlAttr> kept_attrs;  // attributes surviving the drop list, document order
    std::vector<TableNode> children;

    friend bool operator==(const TableNode& a, const TableNode& b) {
        if (a.label != b.label || a.html_tag != b.html_tag || a.cell_text != b.cell_text ||
            a.colspan != b.colspan || a.rowspan != b.rowspan ||
            a.kept_attrs.size() != b.kept_attrs.size() || a.children.size() != b.children.size())
            return false;
        for (std::size_t i = 0; i < a.kept_attrs.size(); ++i)
            if (a.kept_attrs[i].name != b.kept_attrs[i].name ||
                a.kept_attrs[i].value != b.kept_attrs[i].value)
                return false;
        for (std::size_t i = 0; i < a.children.size(); ++i)
            if (!(a.children[i] == b.children[i])) return false;
        return true;
    }
};

struct TableTree {
    TableNode root;

    std::size_t node_count() const {
        std::size_t n = 1;
        for (const auto& row : root.children) n += 1 + row.children.size();
        return n;
    }

    friend bool operator==(const TableTree& a, const TableTree& b) { return a.root == b.root; }
};

namespace detail {

inline bool is_table_structure_tag(std::string_view name) {
    return name == "table" || name == "thead" || name == "tbody" || name == "tfoot" ||
           name == "tr" || name == "td" || name == "th" || name == "caption" ||
           name == "colgroup" || name == "col";
}

inline int parse_span_attr(const std::string* value) {
    if (!value) return 1;
    long v = 0;
    std::size_t i = 0;
    while (i < value->size() && (*value)[i] >= '0' && (*value)[i] <= '9' && v <= 65535)
        v = v * 10 + ((*value)[i++] - '0');
    if (i == 0 || v < 1) return 1;
    return static_cast<int>(std::min(v, 65535L));
}

inline bool in_drop_list(const NormalizationConfig& cfg, const std::string& name) {
    if (!cfg.enabled) return false;
    for (const auto& d : cfg.table_drop_attrs)
        if (d == name) return true;
    return false;
}

inline std::vector<HtmlAttr> kept_table_attrs(const std::vector<HtmlAttr>& attrs,
                                              const NormalizationConfig& cfg, bool is_cell) {
    std::vector<HtmlAttr> out;
    for (const auto& a : attrs) {
        if (is_cell && (a.name == "colspan" || a.name == "rowspan")) continue;
        if (in_drop_list(cfg, a.name)) continue;
        out.push_back(a);
    }
    return out;
}

inline bool all_markup_whitespace(std::string_view s, std::size_t pos) {
    while (pos < s.size()) {
        if (is_ascii_space(s[pos])) {
            ++pos;
            continue;
        }
        if (s[pos] == '<') {
            const std::size_t skipped = skip_markup_noise(s, pos);
            if (skipped != pos) {
                pos = skipped;
                continue;
            }
        }
        return false;
    }
    return true;
}

} // namespace detail

/// Parses a table HTML fragment into a TableTree. Grouping tags flatten into
/// rows; caption and colgroup are dropped; inline tags inside cells strip to
/// their text. Throws MalformedTable when the fragment is not one table.
inline TableTree parse_table_tree(std::string_view html, const NormalizationConfig& cfg = {}) {
    std::size_t i = 0;
    while (i < html.size()) {
        if (detail::is_ascii_space(html[i])) {
            ++i;
            continue;
        }
        if (html[i] == '<') {
            const std::size_t skipped = skip_markup_noise(html, i);
            if (skipped != i) {
                i = skipped;
                continue;
            }
        }
        break;
    }
    const auto open = parse_tag_at(html, i);
    if (!open || open->closing || open->name != "table")
        throw MalformedTable("expected a single top-level <table> element");

    TableTree tree;
    tree.root.label = "table";
    tree.root.html_tag = "table";
    tree.root.kept_attrs = detail::kept_table_attrs(open->attrs, cfg, false);

    std::size_t content_begin = open->end;
    std::size_t content_end = open->end;
    std::size_t after = open->end;
    if (!open->self_closing) {
        const auto close = find_matching_close(html, "table", open->end);
        if (!close) throw MalformedTable("unclosed <table> element");
        content_end = close->first;
        after = close->second;
    }
    if (!detail::all_markup_whitespace(html, after))
        throw MalformedTable("content after </table>");

    const std::string_view body = html.substr(content_begin, content_end - content_begin);
    constexpr std::size_t no_row = static_cast<std::size_t>(-1);
    std::size_t cur_row = no_row;
    bool in_cell = false;
    TableNode cell;
    std::string cell_text;

    auto open_row = [&](const std::vector<HtmlAttr>& attrs) {
        TableNode row;
        row.label = "tr";
        row.html_tag = "tr";
        row.kept_attrs = detail::kept_table_attrs(attrs, cfg, false);
        tree.root.children.push_back(std::move(row));
        cur_row = tree.root.children.size() - 1;
    };
    auto close_cell = [&] {
        if (!in_cell) return;
        cell.cell_text = normalize_text(cell_text, cfg);
        tree.root.children[cur_row].children.push_back(std::move(cell));
        cell = TableNode{};
        in_cell = false;
    };

    std::size_t p = 0;
    while (p < body.size()) {
        const std::size_t lt = body.find('<', p);
        const std::size_t text_end = (lt == std::string_view::npos) ? body.size() : lt;
        if (in_cell && text_end > p) cell_text += decode_entities(body.substr(p, text_end - p));
        if (lt == std::string_view::npos) break;
        const std::size_t skipped = skip_markup_noise(body, lt);
        if (skipped != lt) {
            p = skipped;
            continue;
        }
        const auto tag = parse_tag_at(body, lt);
        if (!tag) {
            if (in_cell) cell_text += '<';
            p = lt + 1;
            continue;
        }
        p = tag->end;
        const std::string& name = tag->name;
        if (name == "table") throw MalformedTable("nested <table> element");
        if (name == "thead" || name == "tbody" || name == "tfoot" || name == "col") continue;
        if (name == "caption" || name == "colgroup") {
            if (tag->closing || tag->self_closing) continue;
            const auto close = find_matching_close(body, name, tag->end);
            p = close ? close->second : body.size();
            continue;
        }
        if (name == "tr") {
            close_cell();
            if (tag->closing) {
                cur_row = no_row;
                continue;
            }
            open_row(tag->attrs);
            continue;
        }
        if (name == "td" || name == "th") {
            close_cell();
            if (tag->closing) continue;
            if (cur_row == no_row) open_row({}); // cell with no open row, as browsers imply one
            cell.label = "cell";
            cell.html_tag = name;
            cell.colspan = detail::parse_span_attr(tag->attr("colspan"));
            cell.rowspan = detail::parse_span_attr(tag->attr("rowspan"));
            cell.kept_attrs = detail::kept_table_attrs(tag->attrs, cfg, true);
            cell_text.clear();
            in_cell = true;
            if (tag->self_closing) close_cell();
            continue;
        }
        if (in_cell && name == "br" && !tag->closing) cell_text += ' ';
        // any other inline tag strips away; its text already flows into the cell
    }
    close_cell();
    return tree;
}

namespace detail {

inline void serialize_table_node(const TableNode& n, std::string& out) {
    out += '<';
    out += n.html_tag;
    if (n.label == "cell") {
        if (n.colspan > 1) {
            out += " colspan=\"";
            out += std::to_string(n.colspan);
            out += '"';
        }
        if (n.rowspan > 1) {
            out += " rowspan=\"";
            out += std::to_string(n.rowspan);
            out += '"';
        }
    }
    for (const auto& a : n.kept_attrs) {
        out += ' ';
        out += a.name;
        out += "=\"";
        out += encode_attr(a.value);
        out += '"';
    }
    out += '>';
    if (n.cell_text) out += encode_text(*n.cell_text);
    for (const auto& c : n.children) serialize_table_node(c, out);
    out += "</";
    out += n.html_tag;
    out += '>';
}

} // namespace detail

inline std::string serialize_table_tree(const TableTree& tree) {
    std::string out;
    detail::serialize_table_node(tree.root, out);
    return out;
}

/// Canonical form: lowercase tags, drop-listed attributes removed, grouping
/// tags flattened, no inter-tag whitespace, cell text normalized. Identity
/// when cfg.enabled is false. Idempotent.
inline std::string normalize_table_html(std::string_view html, const NormalizationConfig& cfg = {}) {
    if (!cfg.enabled) return std::string(html);
    return serialize_table_tree(parse_table_tree(html, cfg));
}

namespace detail {

struct TedFlat {
    std::vector<const TableNode*> post; // postorder
    std::vector<std::size_t> lmd;       // postorder index of leftmost leaf descendant
    std::vector<std::u32string> text;   // decoded cell text, empty for structural nodes
    std::vector<std::size_t> keyroots;  // ascending
};

inline std::size_t ted_flatten_node(const TableNode& n, TedFlat& f) {
    std::size_t first_child_lmd = 0;
    bool has_children = !n.children.empty();
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        const std::size_t child_lmd = ted_flatten_node(n.children[i], f);
        if (i == 0) first_child_lmd = child_lmd;
    }
    const std::size_t self = f.post.size();
    f.post.push_back(&n);
    f.lmd.push_back(has_children ? first_child_lmd : self);
    f.text.push_back(n.cell_text ? decode_utf8(*n.cell_text) : std::u32string{});
    return f.lmd.back();
}

inline TedFlat ted_flatten(const TableTree& t) {
    TedFlat f;
    ted_flatten_node(t.root, f);
    std::vector<std::size_t> last_for_lmd(f.post.size(), static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < f.post.size(); ++i) last_for_lmd[f.lmd[i]] = i;
    for (std::size_t v : last_for_lmd)
        if (v != static_cast<std::size_t>(-1)) f.keyroots.push_back(v);
    std::sort(f.keyroots.begin(), f.keyroots.end());
    return f;
}

/// Relabel cost: 1 across different labels; between cells, text ned gated on
/// equal spans; 0 between same-label structural nodes.
inline double ted_rename_cost(const TedFlat& a, std::size_t i, const TedFlat& b, std::size_t j) {
    const TableNode& x = *a.post[i];
    const TableNode& y = *b.post[j];
    if (x.label != y.label) return 1.0;
    if (x.label == "cell") {
        if (x.colspan != y.colspan || x.rowspan != y.rowspan) return 1.0;
        return ned(as_span(a.text[i]), as_span(b.text[j]));
    }
    return 0.0;
}

} // namespace detail

/// Zhang-Shasha ordered tree edit distance, unit insert/delete cost, relabel
/// cost per ted_rename_cost. Symmetric; 0 iff trees are identical under the
/// cost model.
inline double tree_edit_distance(const TableTree& t1, const TableTree& t2) {
    const detail::TedFlat a = detail::ted_flatten(t1);
    const detail::TedFlat b = detail::ted_flatten(t2);
    const std::size_t n1 = a.post.size(), n2 = b.post.size();
    std::vector<std::vector<double>> td(n1, std::vector<double>(n2, 0.0));
    std::vector<std::vector<double>> fd;

    for (const std::size_t i : a.keyroots) {
        for (const std::size_t j : b.keyroots) {
            const std::size_t li = a.lmd[i], lj = b.lmd[j];
            const std::size_t m = i - li + 2, n = j - lj + 2;
            fd.assign(m, std::vector<double>(n, 0.0));
            for (std::size_t x = 1; x < m; ++x) fd[x][0] = fd[x - 1][0] + 1.0;
            for (std::size_t y = 1; y < n; ++y) fd[0][y] = fd[0][y - 1] + 1.0;
            for (std::size_t x = 1; x < m; ++x) {
                for (std::size_t y = 1; y < n; ++y) {
                    const std::size_t ia = li + x - 1, jb = lj + y - 1;
                    const double del = fd[x - 1][y] + 1.0;
                    const double ins = fd[x][y - 1] + 1.0;
                    if (a.lmd[ia] == li && b.lmd[jb] == lj) {
                        const double rel = fd[x - 1][y - 1] + detail::ted_rename_cost(a, ia, b, jb);
                        fd[x][y] = std::min({del, ins, rel});
                        td[ia][jb] = fd[x][y];
                    } else {
                        const std::size_t px = a.lmd[ia] - li;
                        const std::size_t qy = b.lmd[jb] - lj;
                        fd[x][y] = std::min({del, ins, fd[px][qy] + td[ia][jb]});
                    }
                }
            }
        }
    }
    return td[n1 - 1][n2 - 1];
}

/// TEDS in [0,1]: 1 - TED / max(node counts). An unparseable prediction
/// scores 0. An unparseable ground truth throws, except when both sides are
/// unparseable: that scores 0 and sets *both_malformed when provided.
inline double teds(std::string_view pred_html, std::string_view gt_html,
                   const NormalizationConfig& cfg = {}, bool* both_malformed = nullptr) {
    if (both_malformed) *both_malformed = false;
    std::optional<TableTree> gt;
    try {
        gt = parse_table_tree(gt_html, cfg);
    } catch (const MalformedTable&) {
    }
    std::optional<TableTree> pred;
    try {
        pred = parse_table_tree(pred_html, cfg);
    } catch (const MalformedTable&) {
    }
    if (!gt) {
        if (!pred) {
            if (both_malformed) *both_malformed = true;
            return 0.0;
        }
        throw MalformedTable("ground-truth table unparseable");
    }
    if (!pred) return 0.0;
    const double denom = static_cast<double>(std::max(pred->node_count(), gt->node_count()));
    const double v = 1.0 - tree_edit_distance(*pred, *gt) / denom;
    return std::clamp(v, 0.0, 1.0);
}

/// ned over canonical table HTML. A side that fails to parse as a table falls
/// back to plain text normalization, keeping the metric total.
inline double table_edit(std::string_view pred_html, std::string_view gt_html,
                         const NormalizationConfig& cfg = {}) {
    auto canonical = [&cfg](std::string_view s) -> std::string {
        try {
            return normalize_table_html(s, cfg);
        } catch (const MalformedTable&) {
            return normalize_text(s, cfg);
        }
    };
    return ned(canonical(pred_html), canonical(gt_html));
}

} // namespace layoutmetrics
