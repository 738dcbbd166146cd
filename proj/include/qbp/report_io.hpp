#pragma once

// Report serialization: one JSON file per grid point (content-addressed by a
// hash of the config echo plus seed) and a combined CSV with a fixed column
// order. Wall times stay out of the CSV so reruns are byte-comparable.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "qbp/config.hpp"
#include "qbp/harness.hpp"

namespace qbp {

std::uint64_t fnv1a64(const std::string& s);

nlohmann::json report_to_json(const MetricsReport& rep, const RunConfig& cfg,
                              const GridPoint& point);

// Rebuilds the grid-point labels embedded in a report (config round-trip).
struct ReportLabels {
    std::string family;
    std::size_t d = 0;
    double p = 0.0;
    std::string policy;
    std::string placement;
    std::string quant;
    std::size_t rounds = 1;
    bool use_osd = true;
    std::uint64_t seed = 0;
};
ReportLabels labels_from_json(const nlohmann::json& j);

std::string csv_header();
std::string csv_row(const MetricsReport& rep, const GridPoint& point, std::uint64_t seed);

// File name for a grid-point report: <label>__<hash16>.json
std::string report_file_name(const MetricsReport& rep, const GridPoint& point);

} // namespace qbp
