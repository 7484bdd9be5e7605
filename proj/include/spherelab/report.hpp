#pragma once

#include <filesystem>

#include "spherelab/experiments.hpp"

namespace spherelab {

struct ReportOptions {
    bool csv = true;
    bool json = true;
    bool svg = false;
};

// Writes report.csv (one row per measurement: experiment,param_json,abscissa,
// value), report.json (full records, schema_version field), and optional
// self-contained log-log SVG plots with the fitted line. Identical inputs
// produce identical bytes. Refuses records with no measurements.
std::vector<std::filesystem::path> emit_report(const std::vector<ExperimentRecord>& records,
                                               const std::filesystem::path& outdir,
                                               const ReportOptions& opt = {});

std::string records_to_csv(const std::vector<ExperimentRecord>& records);
std::string records_to_json(const std::vector<ExperimentRecord>& records);
std::string record_to_svg(const ExperimentRecord& record);

// Parse-back of the CSV schema: (experiment, param_json, abscissa, value) rows.
struct CsvRow {
    std::string experiment;
    std::string param_json;
    double abscissa;
    double value;
};
std::vector<CsvRow> parse_report_csv(const std::string& text);

}  // namespace spherelab
