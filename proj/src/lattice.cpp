#include "spherelab/lattice.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace spherelab {

RepresentationTable::RepresentationTable(int dim, std::int64_t lambda_max)
    : dim_(dim), lambda_max_(lambda_max) {
    if (dim < 1) throw std::domain_error("representation table: dim must be >= 1");
    if (lambda_max < 0) throw std::domain_error("representation table: lambda_max must be >= 0");

    const auto n = static_cast<std::size_t>(lambda_max) + 1;
    // r_0 = delta at 0; convolve with r_1 dim times. One pass costs
    // O(lambda_max^{1/2}) per entry: r_{j+1}(m) = r_j(m) + 2*sum_{u>=1} r_j(m-u^2).
    counts_.assign(n, 0);
    counts_[0] = 1;
    std::vector<std::int64_t> next(n);
    for (int pass = 0; pass < dim; ++pass) {
        for (std::int64_t m = 0; m <= lambda_max; ++m) {
            std::int64_t s = counts_[static_cast<std::size_t>(m)];
            for (std::int64_t u = 1; u * u <= m; ++u)
                s = checked_add(s, checked_mul(2, counts_[static_cast<std::size_t>(m - u * u)]));
            next[static_cast<std::size_t>(m)] = s;
        }
        counts_.swap(next);
    }
}

void RepresentationTable::dump_csv(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open for write: " + file.string());
    out << "# spherelab rtable v1 dim=" << dim_ << " lambda_max=" << lambda_max_ << "\n";
    out << "lambda,count\n";
    for (std::int64_t m = 0; m <= lambda_max_; ++m)
        out << m << "," << counts_[static_cast<std::size_t>(m)] << "\n";
    if (!out) throw std::ios_base::failure("write failed: " + file.string());
}

RepresentationTable RepresentationTable::load_csv(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open for read: " + file.string());
    std::string header;
    std::getline(in, header);
    int dim = 0;
    long long lmax = -1;
    if (std::sscanf(header.c_str(), "# spherelab rtable v1 dim=%d lambda_max=%lld", &dim, &lmax) !=
        2)
        throw std::ios_base::failure("bad table header (wrong version stamp?): " + file.string());
    std::string cols;
    std::getline(in, cols);
    if (cols != "lambda,count")
        throw std::ios_base::failure("bad table column header: " + file.string());

    RepresentationTable t;
    t.dim_ = dim;
    t.lambda_max_ = lmax;
    t.counts_.resize(static_cast<std::size_t>(lmax) + 1);
    std::string line;
    std::int64_t expect = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::ios_base::failure("bad table row: " + line);
        std::int64_t lam = 0, cnt = 0;
        auto r1 = std::from_chars(line.data(), line.data() + comma, lam);
        auto r2 = std::from_chars(line.data() + comma + 1, line.data() + line.size(), cnt);
        if (r1.ec != std::errc{} || r2.ec != std::errc{} || lam != expect)
            throw std::ios_base::failure("bad table row: " + line);
        t.counts_[static_cast<std::size_t>(lam)] = cnt;
        ++expect;
    }
    if (expect != lmax + 1) throw std::ios_base::failure("truncated table: " + file.string());
    return t;
}

namespace {

// Coordinate descent: fix c[i] with c[i]^2 <= remaining budget, recurse.
// Iterating c[i] in increasing order yields lexicographic output.
void descend(int d, int i, std::int64_t budget, LatticePoint& p,
             const std::function<void(const LatticePoint&)>& fn) {
    if (i == d) {
        if (budget == 0) fn(p);
        return;
    }
    if (i == d - 1) {
        // last coordinate: budget must be a perfect square
        std::int64_t r = isqrt_floor(budget);
        if (r * r != budget) return;
        if (r == 0) {
            p.c[i] = 0;
            fn(p);
        } else {
            p.c[i] = static_cast<std::int32_t>(-r);
            fn(p);
            p.c[i] = static_cast<std::int32_t>(r);
            fn(p);
        }
        p.c[i] = 0;
        return;
    }
    std::int64_t r = isqrt_floor(budget);
    for (std::int64_t v = -r; v <= r; ++v) {
        p.c[i] = static_cast<std::int32_t>(v);
        descend(d, i + 1, budget - v * v, p, fn);
    }
    p.c[i] = 0;
}

}  // namespace

void for_each_sphere_point(int d, std::int64_t lambda,
                           const std::function<void(const LatticePoint&)>& fn) {
    if (d < 1 || d > kMaxDim) throw std::domain_error("sphere_points: dimension out of range");
    if (lambda < 0) throw std::domain_error("sphere_points: lambda must be >= 0");
    LatticePoint p;
    p.dim = d;
    descend(d, 0, lambda, p, fn);
}

std::vector<LatticePoint> sphere_points(int d, std::int64_t lambda) {
    std::vector<LatticePoint> pts;
    for_each_sphere_point(d, lambda, [&](const LatticePoint& p) { pts.push_back(p); });
    return pts;
}

std::int64_t count_N(const RepresentationTable& table, int d, std::int64_t lambda, int arity) {
    if (table.dim() != d * arity)
        throw std::domain_error("count_N: table dimension must equal d*arity");
    return table.count(lambda);
}

std::vector<std::pair<std::int64_t, double>> regularity_ratio(const RepresentationTable& table,
                                                              int d, std::int64_t lambda_lo,
                                                              std::int64_t lambda_hi, int arity) {
    const double expo = 0.5 * d * arity - 1.0;
    if (expo <= 0.0)
        throw std::domain_error("regularity_ratio: requires l*d/2 - 1 > 0");
    if (lambda_lo < 1) throw std::domain_error("regularity_ratio: lambda must be >= 1");
    std::vector<std::pair<std::int64_t, double>> out;
    out.reserve(static_cast<std::size_t>(lambda_hi - lambda_lo + 1));
    for (std::int64_t lam = lambda_lo; lam <= lambda_hi; ++lam) {
        double ratio = static_cast<double>(count_N(table, d, lam, arity)) /
                       std::pow(static_cast<double>(lam), expo);
        out.emplace_back(lam, ratio);
    }
    return out;
}

}  // namespace spherelab
