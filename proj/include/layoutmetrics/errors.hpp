#pragma once

#include <stdexcept>
#include <string>

namespace layoutmetrics {

/// Top-level tags are unbalanced or a block element is never closed.
struct MalformedHtml : std::runtime_error {
    explicit MalformedHtml(const std::string& what) : std::runtime_error(what) {}
};

/// A page id was required by the caller but none could be derived.
struct MissingPageId : std::runtime_error {
    explicit MissingPageId(const std::string& what) : std::runtime_error(what) {}
};

/// A table fragment cannot be parsed into a table tree.
struct MalformedTable : std::runtime_error {
    explicit MalformedTable(const std::string& what) : std::runtime_error(what) {}
};

/// Ground-truth input is unusable (unparseable page, unreadable file).
struct InvalidGroundTruth : std::runtime_error {
    explicit InvalidGroundTruth(const std::string& what) : std::runtime_error(what) {}
};

/// A manifest or config file is syntactically invalid; message names the line.
struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

} // namespace layoutmetrics
