#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "spherelab/common.hpp"

namespace spherelab {

// A point of Z^d, d <= kMaxDim. Unused trailing coordinates are zero so that
// equality/hash can run over the full array.
struct LatticePoint {
    std::array<std::int32_t, kMaxDim> c{};
    int dim = 0;

    std::int64_t norm2() const {
        std::int64_t s = 0;
        for (int i = 0; i < dim; ++i) s += std::int64_t(c[i]) * c[i];
        return s;
    }
    bool operator==(const LatticePoint&) const = default;
    // lexicographic
    bool operator<(const LatticePoint& o) const {
        for (int i = 0; i < dim; ++i)
            if (c[i] != o.c[i]) return c[i] < o.c[i];
        return false;
    }
};

struct LatticePointHash {
    std::size_t operator()(const LatticePoint& p) const {
        std::uint64_t h = 1469598103934665603ull;
        for (int i = 0; i < p.dim; ++i) {
            h ^= static_cast<std::uint32_t>(p.c[i]);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

// Counts r_k(lambda) = #{u in Z^k : |u|^2 = lambda} for lambda = 0..lambda_max,
// built by convolving r_1 against itself k times. Immutable once built.
class RepresentationTable {
  public:
    RepresentationTable(int dim, std::int64_t lambda_max);

    int dim() const { return dim_; }
    std::int64_t lambda_max() const { return lambda_max_; }

    std::int64_t count(std::int64_t lambda) const {
        if (lambda < 0 || lambda > lambda_max_)
            throw std::out_of_range("representation table: lambda out of range");
        return counts_[static_cast<std::size_t>(lambda)];
    }

    // Exact integer text dump (columns: lambda,count) with a version-stamped header.
    void dump_csv(const std::filesystem::path& file) const;
    static RepresentationTable load_csv(const std::filesystem::path& file);

  private:
    RepresentationTable() = default;
    int dim_ = 0;
    std::int64_t lambda_max_ = -1;
    std::vector<std::int64_t> counts_;
};

// All lattice points with |u|^2 = lambda in Z^d, in lexicographic order.
std::vector<LatticePoint> sphere_points(int d, std::int64_t lambda);

// Visitor form of the above (same order, no materialization).
void for_each_sphere_point(int d, std::int64_t lambda,
                           const std::function<void(const LatticePoint&)>& fn);

// N(lambda) for the l-linear operator in dimension d, i.e. r_{l*d}(lambda).
// `table` must be the representation table of dimension l*d.
std::int64_t count_N(const RepresentationTable& table, int d, std::int64_t lambda, int arity);

// Diagnostic series (lambda, N(lambda)/lambda^{l*d/2-1}) for lambda in [lo, hi].
std::vector<std::pair<std::int64_t, double>> regularity_ratio(const RepresentationTable& table,
                                                              int d, std::int64_t lambda_lo,
                                                              std::int64_t lambda_hi, int arity);

}  // namespace spherelab
