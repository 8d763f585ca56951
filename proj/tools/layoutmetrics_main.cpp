// Command line front end: evaluate / reward / mine / normalize / report.
// Exit codes: 0 success, 1 I/O or system failure, 2 invalid input data.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "layoutmetrics/layoutmetrics.hpp"

namespace {

namespace fs = std::filesystem;
using namespace layoutmetrics;

constexpr int kExitOk = 0;
constexpr int kExitIoError = 1;
constexpr int kExitBadInput = 2;

struct CliConfig {
    std::string config_path;
    std::optional<double> match_threshold;
    std::optional<std::string> weights;
    std::optional<std::string> mine_range;
    std::size_t workers = 1;
    std::string format;
    bool no_normalize = false;
};

void add_common_flags(CLI::App* cmd, CliConfig& cli) {
    cmd->add_option("--config", cli.config_path,
                    "JSON config file (default: $LAYOUTMETRICS_CONFIG when set)");
    cmd->add_flag("--no-normalize", cli.no_normalize, "Disable all content normalization");
}

std::vector<double> parse_number_list(const std::string& text, std::size_t expected,
                                      const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string piece = text.substr(pos, comma - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(piece, &used));
            if (used != piece.size()) throw std::invalid_argument(piece);
        } catch (const std::exception&) {
            throw InvalidInput(std::string("bad ") + what + " value: \"" + piece + "\"");
        }
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    if (out.size() != expected)
        throw InvalidInput(std::string(what) + " needs " + std::to_string(expected) +
                           " comma-separated numbers");
    return out;
}

/// Resolves config file + flag overrides into one effective configuration.
ToolConfig effective_config(const CliConfig& cli) {
    ToolConfig cfg;
    std::string path = cli.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("LAYOUTMETRICS_CONFIG"); env && *env) path = env;
    }
    if (!path.empty()) cfg = load_config_file(path);
    if (cli.no_normalize) cfg.norm.enabled = false;
    if (cli.match_threshold) {
        if (*cli.match_threshold < 0.0 || *cli.match_threshold > 1.0)
            throw InvalidInput("--match-threshold must be in [0,1]");
        cfg.match.threshold = *cli.match_threshold;
    }
    if (cli.weights) {
        const auto w = parse_number_list(*cli.weights, 3, "--weights");
        cfg.weights = RewardWeights::normalized(w[0], w[1], w[2]);
    }
    if (cli.mine_range) {
        const auto r = parse_number_list(*cli.mine_range, 2, "--mine-range");
        if (r[0] < 0.0 || r[1] > 1.0 || r[0] > r[1])
            throw InvalidInput("--mine-range must satisfy 0 <= lo <= hi <= 1");
        cfg.mining = {r[0], r[1]};
    }
    return cfg;
}

void write_file_or_throw(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open for writing: " + path.string());
    out << content;
    out.flush();
    if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

int cmd_evaluate(const std::string& pred_dir, const std::string& gt_dir,
                 const std::string& manifest_path, const std::string& out_dir,
                 const CliConfig& cli) {
    const ToolConfig cfg = effective_config(cli);
    if (cli.workers < 1) throw InvalidInput("--workers must be >= 1");

    const auto manifest = load_manifest(manifest_path);
    EvaluateOptions opts;
    opts.match = cfg.match;
    opts.norm = cfg.norm;
    opts.workers = cli.workers;
    const CorpusResult result = evaluate_corpus(pred_dir, gt_dir, manifest, opts);

    fs::create_directories(out_dir);
    std::string jsonl;
    for (const PageScores& s : result.pages) jsonl += page_scores_to_json_line(s) + "\n";
    write_file_or_throw(fs::path(out_dir) / "per_page_scores.jsonl", jsonl);
    write_file_or_throw(fs::path(out_dir) / "report.json",
                        emit_report(result.report, ReportFormat::Json));
    write_file_or_throw(fs::path(out_dir) / "report.csv",
                        emit_report(result.report, ReportFormat::Csv));
    write_file_or_throw(fs::path(out_dir) / "report.md",
                        emit_report(result.report, ReportFormat::Markdown));

    if (!cli.format.empty()) {
        const auto fmt = report_format_from_name(cli.format);
        if (!fmt) throw InvalidInput("unknown --format: " + cli.format);
        std::cout << emit_report(result.report, *fmt);
    } else {
        std::cout << "evaluated " << result.pages.size() << " pages, "
                  << result.report.warnings.size() << " warnings, reports in " << out_dir << "\n";
    }
    return kExitOk;
}

int cmd_reward(const std::string& pred_file, const std::string& gt_file, const CliConfig& cli) {
    const ToolConfig cfg = effective_config(cli);
    const auto pred = read_text_file(pred_file);
    if (!pred) throw std::ios_base::failure("cannot read prediction: " + pred_file);
    const auto gt = read_text_file(gt_file);
    if (!gt) throw std::ios_base::failure("cannot read ground truth: " + gt_file);

    const RewardBreakdown r = compute_reward(*pred, *gt, cfg.weights, cfg.match, cfg.norm);
    nlohmann::ordered_json j;
    j["r_text"] = r.r_text;
    j["r_bbox"] = r.r_bbox;
    j["r_order"] = r.r_order;
    j["total"] = r.total;
    std::cout << j.dump() << "\n";
    return kExitOk;
}

int cmd_mine(const std::string& records_file, const std::string& out_file, const CliConfig& cli) {
    const ToolConfig cfg = effective_config(cli);
    const auto text = read_text_file(records_file);
    if (!text) throw std::ios_base::failure("cannot read records file: " + records_file);

    std::vector<MiningRecord> records;
    std::size_t line_no = 0, skipped = 0;
    std::size_t pos = 0;
    while (pos < text->size()) {
        std::size_t eol = text->find('\n', pos);
        if (eol == std::string::npos) eol = text->size();
        const std::string line = text->substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            std::cerr << "mine: skipping malformed record at line " << line_no << "\n";
            ++skipped;
            continue;
        }
        if (!j.is_object() || !j.contains("sample_id") || !j.contains("pred_path") ||
            !j.contains("gt_path") || !j["sample_id"].is_string() || !j["pred_path"].is_string() ||
            !j["gt_path"].is_string()) {
            std::cerr << "mine: skipping record with missing fields at line " << line_no << "\n";
            ++skipped;
            continue;
        }
        MiningRecord rec;
        rec.sample_id = j["sample_id"].get<std::string>();
        const auto pred = read_text_file(j["pred_path"].get<std::string>());
        rec.pred_html = pred ? *pred : ""; // missing prediction counts as empty output
        const auto gt = read_text_file(j["gt_path"].get<std::string>());
        if (!gt) {
            std::cerr << "mine: skipping " << rec.sample_id << ": cannot read ground truth\n";
            ++skipped;
            continue;
        }
        rec.gt_html = *gt;
        records.push_back(std::move(rec));
    }

    const auto results = mine_hard_samples(records, cfg.mining, cfg.norm);
    std::string out;
    std::size_t selected = 0, emitted = 0;
    for (const MiningResult& r : results) {
        if (r.gt_error) {
            std::cerr << "mine: skipping " << r.sample_id << ": unparseable ground truth\n";
            ++skipped;
            continue;
        }
        nlohmann::ordered_json j;
        j["sample_id"] = r.sample_id;
        j["ned"] = r.ned;
        j["selected"] = r.selected;
        out += j.dump() + "\n";
        ++emitted;
        if (r.selected) ++selected;
    }
    if (out_file.empty()) std::cout << out;
    else write_file_or_throw(out_file, out);
    std::cerr << "mine: selected " << selected << "/" << emitted << " samples";
    if (skipped) std::cerr << " (" << skipped << " skipped)";
    std::cerr << "\n";
    return kExitOk;
}

int cmd_normalize(const std::string& kind, const std::string& in_file, const CliConfig& cli) {
    const ToolConfig cfg = effective_config(cli);
    std::string input;
    if (in_file.empty()) {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        input = buf.str();
    } else {
        const auto text = read_text_file(in_file);
        if (!text) throw std::ios_base::failure("cannot read input: " + in_file);
        input = *text;
    }
    if (kind == "text") std::cout << normalize_text(input, cfg.norm) << "\n";
    else if (kind == "latex") std::cout << normalize_latex(input, cfg.norm) << "\n";
    else if (kind == "table") std::cout << normalize_table_html(input, cfg.norm) << "\n";
    else throw InvalidInput("unknown --kind: " + kind);
    return kExitOk;
}

int cmd_report(const std::string& in_file, const std::string& format) {
    const auto text = read_text_file(in_file);
    if (!text) throw std::ios_base::failure("cannot read report: " + in_file);
    BenchmarkReport report;
    const std::size_t first = text->find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (*text)[first] == '{') report = report_from_json(*text);
    else report = report_from_csv(*text);
    const auto fmt = report_format_from_name(format);
    if (!fmt) throw InvalidInput("unknown --format: " + format);
    std::cout << emit_report(report, *fmt);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Layout-aware document parsing metrics: benchmark evaluation, "
                 "RL reward scoring, and hard-sample mining over block-structured HTML pages"};
    app.require_subcommand(1);
    CliConfig cli;

    auto* evaluate = app.add_subcommand("evaluate", "Score a prediction corpus against ground truth");
    std::string pred_dir, gt_dir, manifest_path, out_dir = ".";
    evaluate->add_option("pred_dir", pred_dir, "Directory of predicted pages")->required();
    evaluate->add_option("gt_dir", gt_dir, "Directory of ground-truth pages")->required();
    evaluate->add_option("manifest", manifest_path, "JSON-lines manifest")->required();
    evaluate->add_option("--out", out_dir, "Output directory (default .)");
    evaluate->add_option("--workers", cli.workers, "Worker thread count (default 1)");
    evaluate->add_option("--match-threshold", cli.match_threshold, "Similarity threshold override");
    evaluate->add_option("--format", cli.format, "Echo report to stdout: json, csv, or markdown");
    add_common_flags(evaluate, cli);

    auto* reward = app.add_subcommand("reward", "Reward breakdown for one prediction/gt page pair");
    std::string pred_file, gt_file;
    reward->add_option("pred_file", pred_file, "Predicted page HTML")->required();
    reward->add_option("gt_file", gt_file, "Ground-truth page HTML")->required();
    reward->add_option("--weights", cli.weights, "w_text,w_bbox,w_order (normalized to sum 1)");
    reward->add_option("--match-threshold", cli.match_threshold, "Similarity threshold override");
    add_common_flags(reward, cli);

    auto* mine = app.add_subcommand("mine", "Select hard samples by global text edit distance");
    std::string records_file, mine_out;
    mine->add_option("records", records_file, "JSON-lines {sample_id, pred_path, gt_path}")
        ->required();
    mine->add_option("--out", mine_out, "Output JSONL file (default stdout)");
    mine->add_option("--mine-range", cli.mine_range, "lo,hi inclusive selection band");
    add_common_flags(mine, cli);

    auto* normalize = app.add_subcommand("normalize", "Normalize text, LaTeX, or table HTML");
    std::string kind = "text", in_file;
    normalize->add_option("--kind", kind, "text (default), latex, or table");
    normalize->add_option("--in", in_file, "Input file (default stdin)");
    add_common_flags(normalize, cli);

    auto* report = app.add_subcommand("report", "Re-emit a stored report in another format");
    std::string report_in, report_format = "markdown";
    report->add_option("in", report_in, "report.json or report.csv")->required();
    report->add_option("--format", report_format, "json, csv, or markdown (default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        if (evaluate->parsed())
            return cmd_evaluate(pred_dir, gt_dir, manifest_path, out_dir, cli);
        if (reward->parsed()) return cmd_reward(pred_file, gt_file, cli);
        if (mine->parsed()) return cmd_mine(records_file, mine_out, cli);
        if (normalize->parsed()) return cmd_normalize(kind, in_file, cli);
        if (report->parsed()) return cmd_report(report_in, report_format);
    } catch (const InvalidGroundTruth& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const MissingPageId& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const MalformedTable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const MalformedHtml& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
    return kExitOk;
}
