#pragma once

#include <filesystem>
#include <unordered_map>
#include <vector>

#include "spherelab/lattice.hpp"

namespace spherelab {

// A function Z^d -> R. Sparse maps carry an explicit finite support; the two
// analytic families the experiments need beyond that (the constant and the
// box indicator chi_{[0,L)^d}) are handled symbolically.
class LatticeFunction {
  public:
    enum class Kind { Sparse, Constant, Box };

    static LatticeFunction delta(int dim);  // point mass at the origin
    static LatticeFunction constant(int dim, double value = 1.0);
    static LatticeFunction box(int dim, std::int64_t side);
    static LatticeFunction sparse(int dim,
                                  std::vector<std::pair<LatticePoint, double>> entries);

    int dim() const { return dim_; }
    Kind kind() const { return kind_; }
    double constant_value() const { return constant_value_; }
    std::int64_t box_side() const { return box_side_; }
    bool finite_support() const { return kind_ != Kind::Constant; }

    double at(const LatticePoint& p) const;
    std::size_t support_size() const;  // Box counts side^dim; Constant throws

    // Sorted (lexicographic) copy of the support with values; Box is
    // materialized on demand, Constant throws guard_error.
    std::vector<std::pair<LatticePoint, double>> sorted_entries() const;

    const std::unordered_map<LatticePoint, double, LatticePointHash>& values() const {
        return values_;
    }

    void set(const LatticePoint& p, double v);  // Sparse only

    // CSV (coord_1..coord_d,value) and a compact JSON form. Symbolic kinds
    // round-trip through JSON only.
    void dump_csv(const std::filesystem::path& file) const;
    static LatticeFunction load_csv(const std::filesystem::path& file);
    std::string to_json() const;
    static LatticeFunction from_json(const std::string& text);

  private:
    LatticeFunction(int dim, Kind kind) : dim_(dim), kind_(kind) {}
    int dim_;
    Kind kind_;
    double constant_value_ = 0.0;
    std::int64_t box_side_ = 0;
    std::unordered_map<LatticePoint, double, LatticePointHash> values_;
};

}  // namespace spherelab
