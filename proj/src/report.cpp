#include "spherelab/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace spherelab {

using json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

json params_json(const ExperimentRecord& rec) {
    json p = json::object();
    for (const auto& [k, v] : rec.params) p[k] = v;
    return p;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

void check_records(const std::vector<ExperimentRecord>& records) {
    if (records.empty()) throw std::domain_error("emit_report: no records");
    for (const auto& rec : records)
        if (rec.measurements.empty())
            throw std::domain_error("emit_report: record '" + rec.experiment +
                                    "' has no measurements");
}

}  // namespace

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
    check_records(records);
    std::string out = "experiment,param_json,abscissa,value\n";
    for (const auto& rec : records) {
        const std::string pj = csv_escape(params_json(rec).dump());
        for (const auto& [x, y] : rec.measurements) {
            out += rec.experiment;
            out += ",";
            out += pj;
            out += ",";
            out += format_double(x);
            out += ",";
            out += format_double(y);
            out += "\n";
        }
    }
    return out;
}

std::string records_to_json(const std::vector<ExperimentRecord>& records) {
    check_records(records);
    json root;
    root["schema_version"] = kSchemaVersion;
    root["generator"] = kVersion;
    json recs = json::array();
    for (const auto& rec : records) {
        json j;
        j["experiment"] = rec.experiment;
        j["params"] = params_json(rec);
        j["seed"] = rec.seed;
        j["version"] = rec.version;
        if (!rec.classification.empty()) j["classification"] = rec.classification;
        json ms = json::array();
        for (const auto& [x, y] : rec.measurements) ms.push_back(json::array({x, y}));
        j["measurements"] = ms;
        if (rec.fit) {
            json f;
            f["slope"] = rec.fit->slope;
            f["intercept"] = rec.fit->intercept;
            f["residual_rms"] = rec.fit->residual_rms;
            f["n_used"] = rec.fit->n_used;
            f["flagged"] = rec.fit->flagged;
            j["fit"] = f;
        }
        json ex = json::object();
        for (const auto& [k, v] : rec.extras) ex[k] = v;
        j["extras"] = ex;
        recs.push_back(j);
    }
    root["records"] = recs;
    return root.dump(2) + "\n";
}

std::string record_to_svg(const ExperimentRecord& record) {
    if (record.measurements.empty()) throw std::domain_error("svg: record has no measurements");
    const int W = 640, H = 480, margin = 60;

    bool loggable = true;
    for (const auto& [x, y] : record.measurements) loggable &= (x > 0.0 && y > 0.0);
    auto tx = [&](double v) { return loggable ? std::log10(v) : v; };

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& [x, y] : record.measurements) {
        xmin = std::min(xmin, tx(x));
        xmax = std::max(xmax, tx(x));
        ymin = std::min(ymin, tx(y));
        ymax = std::max(ymax, tx(y));
    }
    if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
    auto px = [&](double x) {
        return margin + (tx(x) - xmin) / (xmax - xmin) * (W - 2 * margin);
    };
    auto py = [&](double y) {
        return H - margin - (tx(y) - ymin) / (ymax - ymin) * (H - 2 * margin);
    };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(W) +
         "\" height=\"" + std::to_string(H) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + std::to_string(margin) + "\" y=\"30\" font-family=\"monospace\">" +
         record.experiment + (loggable ? " (log-log)" : "") + "</text>\n";
    s += "<line x1=\"" + std::to_string(margin) + "\" y1=\"" + std::to_string(H - margin) +
         "\" x2=\"" + std::to_string(W - margin) + "\" y2=\"" + std::to_string(H - margin) +
         "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + std::to_string(margin) + "\" y1=\"" + std::to_string(margin) +
         "\" x2=\"" + std::to_string(margin) + "\" y2=\"" + std::to_string(H - margin) +
         "\" stroke=\"black\"/>\n";
    for (const auto& [x, y] : record.measurements) {
        s += "<circle cx=\"" + format_double(px(x)) + "\" cy=\"" + format_double(py(y)) +
             "\" r=\"3\" fill=\"steelblue\"/>\n";
    }
    if (record.fit && loggable) {
        // fitted line in natural-log coordinates mapped back through base-10
        const double lx0 = xmin * std::log(10.0), lx1 = xmax * std::log(10.0);
        const double ly0 = record.fit->slope * lx0 + record.fit->intercept;
        const double ly1 = record.fit->slope * lx1 + record.fit->intercept;
        auto pxl = [&](double lx) {
            return margin + (lx / std::log(10.0) - xmin) / (xmax - xmin) * (W - 2 * margin);
        };
        auto pyl = [&](double ly) {
            return H - margin - (ly / std::log(10.0) - ymin) / (ymax - ymin) * (H - 2 * margin);
        };
        s += "<line x1=\"" + format_double(pxl(lx0)) + "\" y1=\"" + format_double(pyl(ly0)) +
             "\" x2=\"" + format_double(pxl(lx1)) + "\" y2=\"" + format_double(pyl(ly1)) +
             "\" stroke=\"crimson\"/>\n";
        s += "<text x=\"" + std::to_string(margin) + "\" y=\"" + std::to_string(H - 20) +
             "\" font-family=\"monospace\">slope " + format_double(record.fit->slope) +
             " residual " + format_double(record.fit->residual_rms) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

std::vector<std::filesystem::path> emit_report(const std::vector<ExperimentRecord>& records,
                                               const std::filesystem::path& outdir,
                                               const ReportOptions& opt) {
    check_records(records);
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) throw std::ios_base::failure("cannot create output directory: " + outdir.string());

    std::vector<std::filesystem::path> written;
    auto write_file = [&](const std::filesystem::path& p, const std::string& content) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::ios_base::failure("cannot open for write: " + p.string());
        out << content;
        if (!out) throw std::ios_base::failure("write failed: " + p.string());
        written.push_back(p);
    };

    if (opt.csv) write_file(outdir / "report.csv", records_to_csv(records));
    if (opt.json) write_file(outdir / "report.json", records_to_json(records));
    if (opt.svg) {
        for (std::size_t i = 0; i < records.size(); ++i) {
            write_file(outdir / (records[i].experiment + "_" + std::to_string(i) + ".svg"),
                       record_to_svg(records[i]));
        }
    }
    return written;
}

std::vector<CsvRow> parse_report_csv(const std::string& text) {
    std::vector<CsvRow> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (line != "experiment,param_json,abscissa,value")
        throw std::ios_base::failure("unexpected report CSV header: " + line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        CsvRow row;
        std::size_t pos = line.find(',');
        row.experiment = line.substr(0, pos);
        ++pos;
        std::string pj;
        if (line[pos] == '"') {
            ++pos;
            while (pos < line.size()) {
                if (line[pos] == '"' && pos + 1 < line.size() && line[pos + 1] == '"') {
                    pj += '"';
                    pos += 2;
                } else if (line[pos] == '"') {
                    ++pos;
                    break;
                } else {
                    pj += line[pos++];
                }
            }
            ++pos;  // the comma after the closing quote
        } else {
            std::size_t end = line.find(',', pos);
            pj = line.substr(pos, end - pos);
            pos = end + 1;
        }
        row.param_json = pj;
        std::size_t comma = line.find(',', pos);
        row.abscissa = std::stod(line.substr(pos, comma - pos));
        row.value = std::stod(line.substr(comma + 1));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace spherelab
