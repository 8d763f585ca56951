#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "layoutmetrics/corpus.hpp"
#include "layoutmetrics/errors.hpp"
#include "layoutmetrics/matching.hpp"
#include "layoutmetrics/normalize.hpp"
#include "layoutmetrics/reward.hpp"

namespace layoutmetrics {

struct ToolConfig {
    NormalizationConfig norm;
    MatchConfig match;
    RewardWeights weights;
    MiningConfig mining;
};

namespace detail {

template <typename T>
inline T config_get(const nlohmann::json& section, const char* key, const T& fallback,
                    const char* section_name) {
    if (!section.contains(key)) return fallback;
    try {
        return section.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidInput(std::string("config: bad value type for ") + section_name + "." + key);
    }
}

inline void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> known,
                                const char* where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw InvalidInput(std::string("config: unknown key ") + where + "." + key);
    }
}

} // namespace detail

/// Config document: optional "normalization", "match", "reward_weights", and
/// "mining" sections; omitted keys keep their defaults. Unknown keys are
/// errors so typos never silently change a benchmark run.
inline ToolConfig parse_config_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidInput("config root must be a JSON object");
    detail::reject_unknown_keys(j, {"normalization", "match", "reward_weights", "mining"},
                                "(root)");
    ToolConfig cfg;
    if (j.contains("normalization")) {
        const auto& s = j["normalization"];
        detail::reject_unknown_keys(s,
                                    {"enabled", "collapse_whitespace", "unicode_compat_fold",
                                     "fullwidth_to_halfwidth", "latex_strip_list",
                                     "table_drop_attrs"},
                                    "normalization");
        auto& n = cfg.norm;
        n.enabled = detail::config_get(s, "enabled", n.enabled, "normalization");
        n.collapse_whitespace =
            detail::config_get(s, "collapse_whitespace", n.collapse_whitespace, "normalization");
        n.unicode_compat_fold =
            detail::config_get(s, "unicode_compat_fold", n.unicode_compat_fold, "normalization");
        n.fullwidth_to_halfwidth = detail::config_get(s, "fullwidth_to_halfwidth",
                                                      n.fullwidth_to_halfwidth, "normalization");
        n.latex_strip_list =
            detail::config_get(s, "latex_strip_list", n.latex_strip_list, "normalization");
        n.table_drop_attrs =
            detail::config_get(s, "table_drop_attrs", n.table_drop_attrs, "normalization");
    }
    if (j.contains("match")) {
        const auto& s = j["match"];
        detail::reject_unknown_keys(s, {"threshold", "category_must_agree"}, "match");
        cfg.match.threshold = detail::config_get(s, "threshold", cfg.match.threshold, "match");
        cfg.match.category_must_agree =
            detail::config_get(s, "category_must_agree", cfg.match.category_must_agree, "match");
        if (cfg.match.threshold < 0.0 || cfg.match.threshold > 1.0)
            throw InvalidInput("config: match.threshold must be in [0,1]");
    }
    if (j.contains("reward_weights")) {
        const auto& s = j["reward_weights"];
        detail::reject_unknown_keys(s, {"text", "bbox", "order"}, "reward_weights");
        const double text = detail::config_get(s, "text", cfg.weights.w_text, "reward_weights");
        const double bbox = detail::config_get(s, "bbox", cfg.weights.w_bbox, "reward_weights");
        const double order = detail::config_get(s, "order", cfg.weights.w_order, "reward_weights");
        cfg.weights = RewardWeights::normalized(text, bbox, order);
    }
    if (j.contains("mining")) {
        const auto& s = j["mining"];
        detail::reject_unknown_keys(s, {"lo", "hi"}, "mining");
        cfg.mining.lo = detail::config_get(s, "lo", cfg.mining.lo, "mining");
        cfg.mining.hi = detail::config_get(s, "hi", cfg.mining.hi, "mining");
        if (cfg.mining.lo < 0.0 || cfg.mining.hi > 1.0 || cfg.mining.lo > cfg.mining.hi)
            throw InvalidInput("config: mining bounds must satisfy 0 <= lo <= hi <= 1");
    }
    return cfg;
}

inline ToolConfig load_config_file(const std::filesystem::path& path) {
    const auto text = read_text_file(path);
    if (!text) throw InvalidInput("cannot read config file: " + path.string());
    return parse_config_json(*text);
}

} // namespace layoutmetrics
