#pragma once

#include <array>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "layoutmetrics/errors.hpp"
#include "layoutmetrics/matching.hpp"
#include "layoutmetrics/ordermetrics.hpp"
#include "layoutmetrics/schema.hpp"
#include "layoutmetrics/tablemetrics.hpp"
#include "layoutmetrics/textmetrics.hpp"

namespace layoutmetrics {

/// One page's metric values; a metric is absent when the ground-truth page
/// has no blocks of its kind.
struct PageScores {
    std::string page_id;
    Language language = Language::EN;
    std::string doc_category;
    std::optional<double> text_edit;
    std::optional<double> formula_edit;
    std::optional<double> table_teds; // 0..1 here, scaled to 0..100 at presentation
    std::optional<double> table_edit;
    std::optional<double> read_order_edit;
    std::optional<double> chemistry_edit;
    std::optional<double> hw_edit;
    std::vector<std::string> warnings;
};

/// Stored as sum and count so aggregation is associative: merging partial
/// aggregates in any order yields identical means.
struct MetricAggregate {
    double sum = 0.0;
    std::size_t count = 0;

    void add(double v) {
        sum += v;
        ++count;
    }
    void add(const std::optional<double>& v) {
        if (v) add(*v);
    }
    void merge(const MetricAggregate& o) {
        sum += o.sum;
        count += o.count;
    }
    std::optional<double> mean() const {
        if (count == 0) return std::nullopt;
        return sum / static_cast<double>(count);
    }

    friend bool operator==(const MetricAggregate&, const MetricAggregate&) = default;
};

struct ReportCell {
    MetricAggregate text_edit;
    MetricAggregate formula_edit;
    MetricAggregate table_teds;
    MetricAggregate table_edit;
    MetricAggregate read_order_edit;
    MetricAggregate chemistry_edit;
    MetricAggregate hw_edit;
    std::size_t pages = 0;

    void add(const PageScores& s) {
        text_edit.add(s.text_edit);
        formula_edit.add(s.formula_edit);
        table_teds.add(s.table_teds);
        table_edit.add(s.table_edit);
        read_order_edit.add(s.read_order_edit);
        chemistry_edit.add(s.chemistry_edit);
        hw_edit.add(s.hw_edit);
        ++pages;
    }
    void merge(const ReportCell& o) {
        text_edit.merge(o.text_edit);
        formula_edit.merge(o.formula_edit);
        table_teds.merge(o.table_teds);
        table_edit.merge(o.table_edit);
        read_order_edit.merge(o.read_order_edit);
        chemistry_edit.merge(o.chemistry_edit);
        hw_edit.merge(o.hw_edit);
        pages += o.pages;
    }

    friend bool operator==(const ReportCell&, const ReportCell&) = default;
};

struct BenchmarkReport {
    std::string method = "layoutmetrics";
    ReportCell en;
    ReportCell zh;
    std::map<std::string, ReportCell> by_category; // doc_category, pooled languages
    std::vector<std::string> warnings;

    void add_page(const PageScores& s) {
        (s.language == Language::EN ? en : zh).add(s);
        const std::string key = s.doc_category.empty() ? "uncategorized" : s.doc_category;
        by_category[key].add(s);
        for (const std::string& w : s.warnings) warnings.push_back("page " + s.page_id + ": " + w);
    }
    std::size_t total_pages() const { return en.pages + zh.pages; }
    /// Chemistry and handwriting are reported over all pages pooled.
    ReportCell pooled() const {
        ReportCell all = en;
        all.merge(zh);
        return all;
    }

    friend bool operator==(const BenchmarkReport&, const BenchmarkReport&) = default;
};

/// Mean of the present component means: text, formula, table edit, read
/// order. Chemistry and handwriting stay out; they have dedicated columns.
inline std::optional<double> overall_edit(const ReportCell& cell) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const MetricAggregate* m :
         {&cell.text_edit, &cell.formula_edit, &cell.table_edit, &cell.read_order_edit}) {
        if (const auto v = m->mean()) {
            sum += *v;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

/// Runs matching once, then every metric whose kind the GT page exhibits.
inline PageScores score_page(const PageDocument& pred, const PageDocument& gt,
                             const MatchConfig& mcfg = {}, const NormalizationConfig& ncfg = {}) {
    PageScores s;
    s.page_id = gt.page_id;
    s.language = gt.language;
    s.doc_category = gt.doc_category;

    const MatchAssignment match = match_blocks(pred, gt, mcfg, ncfg);

    bool gt_text = false, gt_formula = false, gt_table = false, gt_chem = false, gt_hw = false,
         gt_ordered = false;
    for (const Block& b : gt.blocks) {
        gt_text |= is_text_like(b.category);
        gt_formula |= b.category == BlockCategory::Formula;
        gt_table |= b.category == BlockCategory::Table;
        gt_chem |= b.category == BlockCategory::Chemistry;
        gt_hw |= b.category == BlockCategory::Handwriting;
        gt_ordered |= !excluded_from_reading_order(b.category);
    }

    if (gt_text) s.text_edit = global_text_edit(pred, gt, ncfg);
    if (gt_formula) {
        const auto m = restrict_to_category(match, pred, gt, BlockCategory::Formula);
        s.formula_edit = category_edit(pred, gt, BlockCategory::Formula, m, ncfg);
    }
    if (gt_chem) {
        const auto m = restrict_to_category(match, pred, gt, BlockCategory::Chemistry);
        s.chemistry_edit = category_edit(pred, gt, BlockCategory::Chemistry, m, ncfg);
    }
    if (gt_hw) {
        const auto m = restrict_to_category(match, pred, gt, BlockCategory::Handwriting);
        s.hw_edit = category_edit(pred, gt, BlockCategory::Handwriting, m, ncfg);
    }
    if (gt_table) {
        const auto m = restrict_to_category(match, pred, gt, BlockCategory::Table);
        MetricAggregate teds_agg, edit_agg;
        for (const MatchPair& pr : m.pairs) {
            const std::string& pc = pred.blocks[pr.pred_index].content;
            const std::string& gc = gt.blocks[pr.gt_index].content;
            edit_agg.add(table_edit(pc, gc, ncfg));
            try {
                bool both_malformed = false;
                const double v = teds(pc, gc, ncfg, &both_malformed);
                if (both_malformed)
                    s.warnings.push_back("both tables malformed at gt block " +
                                         std::to_string(pr.gt_index));
                teds_agg.add(v);
            } catch (const MalformedTable&) {
                s.warnings.push_back("malformed ground-truth table at block " +
                                     std::to_string(pr.gt_index));
            }
        }
        for (const std::size_t g : m.unmatched_gt) {
            edit_agg.add(1.0);
            try {
                parse_table_tree(gt.blocks[g].content, ncfg);
                teds_agg.add(0.0); // missing predicted table
            } catch (const MalformedTable&) {
                s.warnings.push_back("malformed ground-truth table at block " + std::to_string(g));
            }
        }
        for (std::size_t i = 0; i < m.unmatched_pred.size(); ++i) {
            edit_agg.add(1.0); // hallucinated table
            teds_agg.add(0.0);
        }
        s.table_teds = teds_agg.mean();
        s.table_edit = edit_agg.mean();
    }
    if (gt_ordered) s.read_order_edit = read_order_edit(match, pred, gt);
    return s;
}

enum class ReportFormat { Json, Csv, Markdown };

inline std::optional<ReportFormat> report_format_from_name(std::string_view name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "markdown" || name == "md") return ReportFormat::Markdown;
    return std::nullopt;
}

namespace detail {

inline std::string fmt_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string fmt_exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct MetricField {
    const char* name;
    MetricAggregate ReportCell::* member;
    bool is_teds; // presented x100, higher is better
};

inline constexpr std::array<MetricField, 7> metric_fields = {{
    {"text_edit", &ReportCell::text_edit, false},
    {"formula_edit", &ReportCell::formula_edit, false},
    {"table_teds", &ReportCell::table_teds, true},
    {"table_edit", &ReportCell::table_edit, false},
    {"read_order_edit", &ReportCell::read_order_edit, false},
    {"chemistry_edit", &ReportCell::chemistry_edit, false},
    {"hw_edit", &ReportCell::hw_edit, false},
}};

inline std::string present_metric(const std::optional<double>& mean, bool is_teds) {
    if (!mean) return "-";
    return is_teds ? fmt_fixed(*mean * 100.0, 1) : fmt_fixed(*mean, 3);
}

inline std::string csv_field(std::string_view s) {
    bool needs_quote = false;
    for (const char c : s)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') needs_quote = true;
    if (!needs_quote) return std::string(s);
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

inline nlohmann::ordered_json aggregate_to_json(const MetricAggregate& m) {
    nlohmann::ordered_json j;
    j["sum"] = m.sum;
    j["count"] = m.count;
    if (const auto v = m.mean()) j["mean"] = *v;
    return j;
}

inline nlohmann::ordered_json cell_to_json(const ReportCell& cell) {
    nlohmann::ordered_json j;
    j["pages"] = cell.pages;
    nlohmann::ordered_json metrics;
    for (const MetricField& f : metric_fields) metrics[f.name] = aggregate_to_json(cell.*(f.member));
    j["metrics"] = metrics;
    if (const auto v = overall_edit(cell)) j["overall_edit"] = *v;
    return j;
}

inline MetricAggregate aggregate_from_json(const nlohmann::json& j) {
    MetricAggregate m;
    m.sum = j.at("sum").get<double>();
    m.count = j.at("count").get<std::size_t>();
    return m;
}

inline ReportCell cell_from_json(const nlohmann::json& j) {
    ReportCell cell;
    cell.pages = j.at("pages").get<std::size_t>();
    const auto& metrics = j.at("metrics");
    for (const MetricField& f : metric_fields)
        if (metrics.contains(f.name)) cell.*(f.member) = aggregate_from_json(metrics.at(f.name));
    return cell;
}

inline std::string emit_markdown(const BenchmarkReport& r) {
    std::string out = "# Benchmark Report\n\n";
    out += "- method: " + r.method + "\n";
    out += "- pages: " + std::to_string(r.total_pages()) + " (EN " + std::to_string(r.en.pages) +
           ", ZH " + std::to_string(r.zh.pages) + ")\n\n";

    struct Column {
        std::string header;
        std::string value;
    };
    std::vector<Column> cols;
    cols.push_back({"Methods", r.method});
    auto push_pair = [&](const std::string& title, const std::optional<double>& en_v,
                         const std::optional<double>& zh_v, bool is_teds) {
        cols.push_back({title + " EN", present_metric(en_v, is_teds)});
        cols.push_back({title + " ZH", present_metric(zh_v, is_teds)});
    };
    push_pair("Overall Edit ↓", overall_edit(r.en), overall_edit(r.zh), false);
    push_pair("Text Edit ↓", r.en.text_edit.mean(), r.zh.text_edit.mean(), false);
    push_pair("Formula Edit ↓", r.en.formula_edit.mean(), r.zh.formula_edit.mean(), false);
    push_pair("Table TEDS ↑", r.en.table_teds.mean(), r.zh.table_teds.mean(), true);
    push_pair("Table Edit ↓", r.en.table_edit.mean(), r.zh.table_edit.mean(), false);
    push_pair("ReadOrder Edit ↓", r.en.read_order_edit.mean(), r.zh.read_order_edit.mean(), false);
    const ReportCell all = r.pooled();
    cols.push_back({"Chemistry Edit ↓ ALL", present_metric(all.chemistry_edit.mean(), false)});
    cols.push_back({"HW Edit ↓ ALL", present_metric(all.hw_edit.mean(), false)});

    out += "## Results\n\n|";
    for (const Column& c : cols) out += " " + c.header + " |";
    out += "\n|";
    for (std::size_t i = 0; i < cols.size(); ++i) out += "---|";
    out += "\n";
    if (r.total_pages() > 0) {
        out += "|";
        for (const Column& c : cols) out += " " + c.value + " |";
        out += "\n";
    }

    out += "\n## Per document category\n\n";
    out += "| Category | Pages | Overall Edit ↓ | Text Edit ↓ | Formula Edit ↓ | Table TEDS ↑ |"
           " Table Edit ↓ | ReadOrder Edit ↓ | Chemistry Edit ↓ | HW Edit ↓ |\n";
    out += "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& [name, cell] : r.by_category) {
        out += "| " + name + " | " + std::to_string(cell.pages) + " | " +
               present_metric(overall_edit(cell), false) + " |";
        for (const MetricField& f : metric_fields)
            out += " " + present_metric((cell.*(f.member)).mean(), f.is_teds) + " |";
        out += "\n";
    }

    out += "\n## Warnings\n\n";
    if (r.warnings.empty()) {
        out += "none\n";
    } else {
        for (const std::string& w : r.warnings) out += "- " + w + "\n";
    }
    return out;
}

inline void emit_csv_cell(std::string& out, std::string_view section, std::string_view key,
                          const ReportCell& cell) {
    out += std::string(csv_field(section)) + "," + csv_field(key) + ",pages,," +
           std::to_string(cell.pages) + "\n";
    for (const MetricField& f : metric_fields) {
        const MetricAggregate& m = cell.*(f.member);
        out += std::string(csv_field(section)) + "," + csv_field(key) + "," + f.name + "," +
               fmt_exact(m.sum) + "," + std::to_string(m.count) + "\n";
    }
}

inline std::string emit_csv(const BenchmarkReport& r) {
    std::string out = "section,key,metric,sum,count\n";
    out += "meta,method," + csv_field(r.method) + ",,\n";
    emit_csv_cell(out, "language", "en", r.en);
    emit_csv_cell(out, "language", "zh", r.zh);
    for (const auto& [name, cell] : r.by_category) emit_csv_cell(out, "category", name, cell);
    for (std::size_t i = 0; i < r.warnings.size(); ++i)
        out += "warning," + std::to_string(i) + "," + csv_field(r.warnings[i]) + ",,\n";
    return out;
}

inline std::string emit_json(const BenchmarkReport& r) {
    nlohmann::ordered_json j;
    j["method"] = r.method;
    nlohmann::ordered_json pages;
    pages["total"] = r.total_pages();
    pages["en"] = r.en.pages;
    pages["zh"] = r.zh.pages;
    j["pages"] = pages;
    nlohmann::ordered_json langs;
    langs["en"] = cell_to_json(r.en);
    langs["zh"] = cell_to_json(r.zh);
    j["languages"] = langs;
    nlohmann::ordered_json cats = nlohmann::ordered_json::object();
    for (const auto& [name, cell] : r.by_category) cats[name] = cell_to_json(cell);
    j["categories"] = cats;
    const ReportCell all = r.pooled();
    nlohmann::ordered_json pooled;
    pooled["chemistry_edit"] = aggregate_to_json(all.chemistry_edit);
    pooled["hw_edit"] = aggregate_to_json(all.hw_edit);
    j["all"] = pooled;
    j["warnings"] = r.warnings;
    return j.dump(2) + "\n";
}

/// Splits one CSV record; quoted fields may contain commas and doubled quotes.
inline std::vector<std::string> split_csv_record(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

} // namespace detail

/// Deterministic textual report; byte-identical output for equal reports.
inline std::string emit_report(const BenchmarkReport& r, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: return detail::emit_json(r);
        case ReportFormat::Csv: return detail::emit_csv(r);
        case ReportFormat::Markdown: return detail::emit_markdown(r);
    }
    return {};
}

inline BenchmarkReport report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad report JSON: ") + e.what());
    }
    try {
        BenchmarkReport r;
        r.method = j.at("method").get<std::string>();
        r.en = detail::cell_from_json(j.at("languages").at("en"));
        r.zh = detail::cell_from_json(j.at("languages").at("zh"));
        for (const auto& [name, cell] : j.at("categories").items())
            r.by_category[name] = detail::cell_from_json(cell);
        for (const auto& w : j.at("warnings")) r.warnings.push_back(w.get<std::string>());
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad report JSON shape: ") + e.what());
    }
}

inline BenchmarkReport report_from_csv(const std::string& text) try {
    BenchmarkReport r;
    std::size_t pos = 0;
    bool first = true;
    std::map<std::size_t, std::string> warnings_by_index;
    while (pos < text.size()) {
        // record boundary: first newline outside quotes
        std::size_t eol = pos;
        bool quoted = false;
        while (eol < text.size() && (quoted || text[eol] != '\n')) {
            if (text[eol] == '"') quoted = !quoted;
            ++eol;
        }
        const std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        const auto fields = detail::split_csv_record(line);
        if (first) {
            first = false;
            if (fields.size() != 5 || fields[0] != "section")
                throw InvalidInput("bad report CSV header");
            continue;
        }
        if (fields.size() != 5) throw InvalidInput("bad report CSV record");
        const std::string& section = fields[0];
        if (section == "meta") {
            if (fields[1] == "method") r.method = fields[2];
            continue;
        }
        if (section == "warning") {
            warnings_by_index[std::stoul(fields[1])] = fields[2];
            continue;
        }
        ReportCell* cell = nullptr;
        if (section == "language") {
            cell = (fields[1] == "en") ? &r.en : (fields[1] == "zh") ? &r.zh : nullptr;
        } else if (section == "category") {
            cell = &r.by_category[fields[1]];
        }
        if (!cell) throw InvalidInput("unknown report CSV section: " + section);
        if (fields[2] == "pages") {
            cell->pages = std::stoul(fields[4]);
            continue;
        }
        bool known = false;
        for (const detail::MetricField& f : detail::metric_fields) {
            if (fields[2] == f.name) {
                (cell->*(f.member)).sum = std::strtod(fields[3].c_str(), nullptr);
                (cell->*(f.member)).count = std::stoul(fields[4]);
                known = true;
            }
        }
        if (!known) throw InvalidInput("unknown report CSV metric: " + fields[2]);
    }
    for (auto& [idx, text_w] : warnings_by_index) r.warnings.push_back(std::move(text_w));
    return r;
} catch (const InvalidInput&) {
    throw;
} catch (const std::exception& e) {
    throw InvalidInput(std::string("bad report CSV: ") + e.what());
}

/// One page's scores as a JSON line for per_page_scores.jsonl.
inline std::string page_scores_to_json_line(const PageScores& s) {
    nlohmann::ordered_json j;
    j["page_id"] = s.page_id;
    j["language"] = std::string(language_name(s.language));
    j["doc_category"] = s.doc_category;
    auto put = [&](const char* name, const std::optional<double>& v) {
        if (v) j[name] = *v;
        else j[name] = nullptr;
    };
    put("text_edit", s.text_edit);
    put("formula_edit", s.formula_edit);
    put("table_teds", s.table_teds);
    put("table_edit", s.table_edit);
    put("read_order_edit", s.read_order_edit);
    put("chemistry_edit", s.chemistry_edit);
    put("hw_edit", s.hw_edit);
    j["warnings"] = s.warnings;
    return j.dump();
}

} // namespace layoutmetrics
