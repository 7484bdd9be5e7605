#include "spherelab/lattice_function.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spherelab/common.hpp"

namespace spherelab {

using json = nlohmann::ordered_json;

LatticeFunction LatticeFunction::delta(int dim) {
    LatticeFunction f(dim, Kind::Sparse);
    LatticePoint origin;
    origin.dim = dim;
    f.values_.emplace(origin, 1.0);
    return f;
}

LatticeFunction LatticeFunction::constant(int dim, double value) {
    LatticeFunction f(dim, Kind::Constant);
    f.constant_value_ = value;
    return f;
}

LatticeFunction LatticeFunction::box(int dim, std::int64_t side) {
    if (side < 1) throw std::domain_error("box indicator: side must be >= 1");
    LatticeFunction f(dim, Kind::Box);
    f.box_side_ = side;
    return f;
}

LatticeFunction LatticeFunction::sparse(int dim,
                                        std::vector<std::pair<LatticePoint, double>> entries) {
    LatticeFunction f(dim, Kind::Sparse);
    for (auto& [p, v] : entries) {
        if (p.dim != dim) throw std::domain_error("sparse function: point dimension mismatch");
        if (v != 0.0) f.values_[p] = v;  // deduplicated, last write wins
    }
    return f;
}

double LatticeFunction::at(const LatticePoint& p) const {
    switch (kind_) {
        case Kind::Constant:
            return constant_value_;
        case Kind::Box: {
            for (int i = 0; i < dim_; ++i)
                if (p.c[i] < 0 || p.c[i] >= box_side_) return 0.0;
            return 1.0;
        }
        case Kind::Sparse: {
            auto it = values_.find(p);
            return it == values_.end() ? 0.0 : it->second;
        }
    }
    return 0.0;
}

std::size_t LatticeFunction::support_size() const {
    switch (kind_) {
        case Kind::Constant:
            throw guard_error("constant function has no finite support");
        case Kind::Box: {
            std::size_t n = 1;
            for (int i = 0; i < dim_; ++i) n *= static_cast<std::size_t>(box_side_);
            return n;
        }
        case Kind::Sparse:
            return values_.size();
    }
    return 0;
}

std::vector<std::pair<LatticePoint, double>> LatticeFunction::sorted_entries() const {
    std::vector<std::pair<LatticePoint, double>> out;
    if (kind_ == Kind::Constant)
        throw guard_error("constant function has no finite support");
    if (kind_ == Kind::Box) {
        if (support_size() > (1u << 22))
            throw guard_error("box indicator too large to materialize");
        LatticePoint p;
        p.dim = dim_;
        // odometer over [0, side)^dim, lexicographic
        std::vector<std::int64_t> idx(static_cast<std::size_t>(dim_), 0);
        while (true) {
            for (int i = 0; i < dim_; ++i) p.c[i] = static_cast<std::int32_t>(idx[i]);
            out.emplace_back(p, 1.0);
            int i = dim_ - 1;
            while (i >= 0 && ++idx[static_cast<std::size_t>(i)] == box_side_)
                idx[static_cast<std::size_t>(i--)] = 0;
            if (i < 0) break;
        }
        return out;
    }
    out.assign(values_.begin(), values_.end());
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

void LatticeFunction::set(const LatticePoint& p, double v) {
    if (kind_ != Kind::Sparse) throw guard_error("set() is only valid on sparse functions");
    if (p.dim != dim_) throw std::domain_error("set(): point dimension mismatch");
    if (v == 0.0)
        values_.erase(p);
    else
        values_[p] = v;
}

void LatticeFunction::dump_csv(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open for write: " + file.string());
    for (int i = 0; i < dim_; ++i) out << "coord_" << (i + 1) << ",";
    out << "value\n";
    for (const auto& [p, v] : sorted_entries()) {
        for (int i = 0; i < dim_; ++i) out << p.c[i] << ",";
        out << format_double(v) << "\n";
    }
    if (!out) throw std::ios_base::failure("write failed: " + file.string());
}

LatticeFunction LatticeFunction::load_csv(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open for read: " + file.string());
    std::string header;
    std::getline(in, header);
    int dim = 0;
    {
        std::stringstream ss(header);
        std::string col;
        while (std::getline(ss, col, ',')) {
            if (col.rfind("coord_", 0) == 0) ++dim;
        }
    }
    if (dim < 1 || dim > kMaxDim)
        throw std::ios_base::failure("bad function CSV header: " + header);
    std::vector<std::pair<LatticePoint, double>> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        LatticePoint p;
        p.dim = dim;
        for (int i = 0; i < dim; ++i) {
            if (!std::getline(ss, field, ','))
                throw std::ios_base::failure("bad function CSV row: " + line);
            p.c[i] = static_cast<std::int32_t>(std::stol(field));
        }
        if (!std::getline(ss, field))
            throw std::ios_base::failure("bad function CSV row: " + line);
        entries.emplace_back(p, std::stod(field));
    }
    return sparse(dim, std::move(entries));
}

std::string LatticeFunction::to_json() const {
    json j;
    j["dim"] = dim_;
    switch (kind_) {
        case Kind::Constant:
            j["kind"] = "constant";
            j["value"] = constant_value_;
            break;
        case Kind::Box:
            j["kind"] = "box";
            j["side"] = box_side_;
            break;
        case Kind::Sparse: {
            j["kind"] = "sparse";
            json pts = json::array();
            json vals = json::array();
            for (const auto& [p, v] : sorted_entries()) {
                json coords = json::array();
                for (int i = 0; i < dim_; ++i) coords.push_back(p.c[i]);
                pts.push_back(coords);
                vals.push_back(v);
            }
            j["points"] = pts;
            j["values"] = vals;
            break;
        }
    }
    return j.dump();
}

LatticeFunction LatticeFunction::from_json(const std::string& text) {
    json j = json::parse(text);
    const int dim = j.at("dim").get<int>();
    if (dim < 1 || dim > kMaxDim) throw std::domain_error("function JSON: bad dimension");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return constant(dim, j.at("value").get<double>());
    if (kind == "box") return box(dim, j.at("side").get<std::int64_t>());
    if (kind != "sparse") throw std::domain_error("function JSON: unknown kind " + kind);
    const auto& pts = j.at("points");
    const auto& vals = j.at("values");
    if (pts.size() != vals.size()) throw std::domain_error("function JSON: size mismatch");
    std::vector<std::pair<LatticePoint, double>> entries;
    entries.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        LatticePoint p;
        p.dim = dim;
        if (static_cast<int>(pts[i].size()) != dim)
            throw std::domain_error("function JSON: point dimension mismatch");
        for (int k = 0; k < dim; ++k) p.c[k] = pts[i][static_cast<std::size_t>(k)].get<std::int32_t>();
        entries.emplace_back(p, vals[i].get<double>());
    }
    return sparse(dim, std::move(entries));
}

}  // namespace spherelab
