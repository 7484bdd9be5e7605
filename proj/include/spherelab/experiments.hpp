#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spherelab/averaging.hpp"
#include "spherelab/fit.hpp"

namespace spherelab {

// Deterministic uniform source: the mt19937_64 stream is fully specified by
// the standard; the [0,1) mapping avoids the implementation-defined
// distribution adaptors.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(eng_() %
                                              static_cast<std::uint64_t>(hi - lo + 1));
    }

  private:
    std::mt19937_64 eng_;
};

LatticeFunction random_sparse_function(Rng& rng, int dim, int support_size,
                                       std::int64_t coord_box);

struct ExperimentRecord {
    std::string experiment;
    std::vector<std::pair<std::string, std::string>> params;  // ordered
    std::vector<std::pair<double, double>> measurements;      // (abscissa, value)
    std::optional<FitResult> fit;
    std::vector<std::pair<std::string, double>> extras;  // named scalar outcomes
    std::string classification;                          // sharpness growth class, if any
    std::uint64_t seed = 0;
    std::string version;

    void add_param(const std::string& k, const std::string& v) { params.emplace_back(k, v); }
    void add_extra(const std::string& k, double v) { extras.emplace_back(k, v); }
    double extra(const std::string& k) const;
};

struct SweepGrid {
    struct Triple {
        double p, q, r;
        bool violates_necessary = false;  // 1/r > 1/p + 1/q
    };
    std::vector<Triple> triples;
    std::string family;                 // "box", "random-sparse", "delta-constant"
    std::vector<std::int64_t> sizes;    // size schedule

    static SweepGrid make(const std::vector<std::array<double, 3>>& pqr, std::string family,
                          std::vector<std::int64_t> sizes);
};

// chi_L x chi_L scaling: the r-norm of the maximal average against the
// closed-form norm product, slopes fitted in log L.
ExperimentRecord run_scaling_experiment(int d, const std::vector<std::int64_t>& L_list, double p,
                                        double q, double r, std::int64_t lambda_max = 4);

// Partial sums over |x| <= R of (r_d((n-1)|x|^2) / N(n|x|^2))^p with growth
// classification (convergent / log-like / power-like).
ExperimentRecord run_sharpness_experiment(int d, int n, std::int64_t R_max, double p);

// Per-triple max norm ratio across the size schedule plus a growth-trend fit.
std::vector<ExperimentRecord> run_holder_sweep(const SweepGrid& grid, int d,
                                               std::int64_t lambda_max = 4);

// Max over minor-arc theta samples of sup_xi |S_N|, fitted exponent in N.
ExperimentRecord run_weyl_experiment(const std::vector<std::int64_t>& N_list, int samples = 256,
                                     std::uint64_t seed = 20240901);

// Minor-arc integral growth/decay over dyadic N: returns the normalized series
// (with delta_fit and the derived alpha_2) and the unnormalized series.
std::vector<ExperimentRecord> run_error_decay_experiment(int d,
                                                         const std::vector<std::int64_t>& N_list);

// |sigma_exact - main term| along the axis frequency grid per lambda, layer
// magnitudes, windowed-integral-vs-Bessel ratio at xi = 0.
std::vector<ExperimentRecord> run_multiplier_comparison(int d,
                                                        const std::vector<std::int64_t>& lambda_list,
                                                        int xi_points = 41,
                                                        std::int64_t q_max = 0);

// Partial sums of sum_q phi(q) q^{-d(1-1/p)} up to Q with dyadic checkpoints;
// extras carry the stabilization tail and the growth factor.
ExperimentRecord run_singular_series_scan(int d, double p, std::int64_t Q);

}  // namespace spherelab
