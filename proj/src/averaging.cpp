#include "spherelab/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "spherelab/common.hpp"

namespace spherelab {

namespace {

LatticePoint add(const LatticePoint& a, const LatticePoint& b) {
    LatticePoint r;
    r.dim = a.dim;
    for (int i = 0; i < a.dim; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

LatticePoint sub(const LatticePoint& a, const LatticePoint& b) {
    LatticePoint r;
    r.dim = a.dim;
    for (int i = 0; i < a.dim; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}

using ValueMap = std::unordered_map<LatticePoint, double, LatticePointHash>;

void check_family(const std::vector<LatticeFunction>& fs, const RepresentationTable& rd,
                  const RepresentationTable& rld) {
    if (fs.empty()) throw std::domain_error("multilinear average: needs at least one function");
    const int d = fs.front().dim();
    for (const auto& f : fs)
        if (f.dim() != d) throw std::domain_error("multilinear average: dimension mismatch");
    if (rd.dim() != d)
        throw std::domain_error("multilinear average: rd table must have dimension d");
    if (rld.dim() != d * static_cast<int>(fs.size()))
        throw std::domain_error("multilinear average: rld table must have dimension l*d");
}

}  // namespace

LatticeFunction shell_convolve(const LatticeFunction& f, std::int64_t k,
                               const RepresentationTable& rd) {
    if (rd.dim() != f.dim()) throw std::domain_error("shell_convolve: table dimension mismatch");
    const std::int64_t shell_count = rd.count(k);  // also the range gate
    if (f.kind() == LatticeFunction::Kind::Constant)
        return LatticeFunction::constant(f.dim(),
                                         f.constant_value() * static_cast<double>(shell_count));
    std::vector<std::pair<LatticePoint, double>> out;
    if (shell_count > 0) {
        const auto support = f.sorted_entries();
        out.reserve(support.size() * static_cast<std::size_t>(shell_count));
        for_each_sphere_point(f.dim(), k, [&](const LatticePoint& u) {
            for (const auto& [s, v] : support) out.emplace_back(add(s, u), v);
        });
    }
    // sparse() deduplicates by last-write; accumulate explicitly instead
    LatticeFunction g = LatticeFunction::sparse(f.dim(), {});
    ValueMap acc;
    for (const auto& [p, v] : out) acc[p] += v;
    for (const auto& [p, v] : acc)
        if (v != 0.0) g.set(p, v);
    return g;
}

namespace {

// conv[i][k] is either a scalar (constant slot) or a materialized map.
struct SlotShells {
    bool is_constant = false;
    std::vector<double> scalars;     // per k
    std::vector<ValueMap> maps;      // per k
};

AverageResult make_result(LatticeFunction values, std::int64_t lambda, int arity) {
    AverageResult res{std::move(values), lambda, arity};
    return res;
}

}  // namespace

AverageResult multilinear_average(const std::vector<LatticeFunction>& fs, std::int64_t lambda,
                                  const RepresentationTable& rd, const RepresentationTable& rld) {
    check_family(fs, rd, rld);
    const int d = fs.front().dim();
    const int l = static_cast<int>(fs.size());
    const std::int64_t n_l = rld.count(lambda);
    if (n_l == 0)
        throw std::domain_error("multilinear average: empty sphere (undefined average) at lambda=" +
                                std::to_string(lambda));

    bool all_constant = true;
    for (const auto& f : fs) all_constant &= !f.finite_support();
    if (all_constant) {
        // sum over compositions of prod r_d(k_i) is exactly N_l; the average of
        // constants is the product of the constants.
        double prod = 1.0;
        for (const auto& f : fs) prod *= f.constant_value();
        return make_result(LatticeFunction::constant(d, prod), lambda, l);
    }

    std::vector<SlotShells> conv(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i) {
        auto& slot = conv[static_cast<std::size_t>(i)];
        if (!fs[static_cast<std::size_t>(i)].finite_support()) {
            slot.is_constant = true;
            slot.scalars.resize(static_cast<std::size_t>(lambda) + 1);
            for (std::int64_t k = 0; k <= lambda; ++k)
                slot.scalars[static_cast<std::size_t>(k)] =
                    fs[static_cast<std::size_t>(i)].constant_value() *
                    static_cast<double>(rd.count(k));
        } else {
            slot.maps.resize(static_cast<std::size_t>(lambda) + 1);
            for (std::int64_t k = 0; k <= lambda; ++k)
                slot.maps[static_cast<std::size_t>(k)] =
                    shell_convolve(fs[static_cast<std::size_t>(i)], k, rd).values();
        }
    }

    // Enumerate compositions k_1+...+k_l = lambda; evaluate each product over
    // the support of its smallest finite factor.
    ValueMap result;
    std::vector<std::int64_t> ks(static_cast<std::size_t>(l), 0);
    std::function<void(int, std::int64_t)> recurse = [&](int slot, std::int64_t left) {
        if (slot == l - 1) {
            ks[static_cast<std::size_t>(slot)] = left;
            // pick the smallest finite factor as the iteration base
            int base = -1;
            std::size_t base_size = 0;
            double const_prod = 1.0;
            for (int i = 0; i < l; ++i) {
                const auto k = static_cast<std::size_t>(ks[static_cast<std::size_t>(i)]);
                if (conv[static_cast<std::size_t>(i)].is_constant) {
                    const_prod *= conv[static_cast<std::size_t>(i)].scalars[k];
                } else {
                    const auto& m = conv[static_cast<std::size_t>(i)].maps[k];
                    if (m.empty()) return;  // empty shell factor kills the term
                    if (base < 0 || m.size() < base_size) {
                        base = i;
                        base_size = m.size();
                    }
                }
            }
            if (const_prod == 0.0) return;
            const auto& base_map =
                conv[static_cast<std::size_t>(base)].maps[static_cast<std::size_t>(
                    ks[static_cast<std::size_t>(base)])];
            for (const auto& [x, v0] : base_map) {
                double prod = v0 * const_prod;
                for (int i = 0; i < l && prod != 0.0; ++i) {
                    if (i == base || conv[static_cast<std::size_t>(i)].is_constant) continue;
                    const auto& m = conv[static_cast<std::size_t>(i)].maps[static_cast<std::size_t>(
                        ks[static_cast<std::size_t>(i)])];
                    auto it = m.find(x);
                    if (it == m.end()) {
                        prod = 0.0;
                        break;
                    }
                    prod *= it->second;
                }
                if (prod != 0.0) result[x] += prod;
            }
            return;
        }
        for (std::int64_t k = 0; k <= left; ++k) {
            ks[static_cast<std::size_t>(slot)] = k;
            recurse(slot + 1, left - k);
        }
    };
    recurse(0, lambda);

    LatticeFunction out = LatticeFunction::sparse(d, {});
    const double inv = 1.0 / static_cast<double>(n_l);
    for (const auto& [x, v] : result)
        if (v != 0.0) out.set(x, v * inv);
    return make_result(std::move(out), lambda, l);
}

AverageResult multilinear_average_direct(const std::vector<LatticeFunction>& fs,
                                         std::int64_t lambda, const RepresentationTable& rd,
                                         const RepresentationTable& rld, std::int64_t guard) {
    check_family(fs, rd, rld);
    const int d = fs.front().dim();
    const int l = static_cast<int>(fs.size());
    const std::int64_t n_l = rld.count(lambda);
    if (n_l == 0)
        throw std::domain_error("multilinear average: empty sphere (undefined average) at lambda=" +
                                std::to_string(lambda));
    if (n_l > guard)
        throw guard_error("direct enumeration guard exceeded: " + std::to_string(n_l) +
                          " tuples > " + std::to_string(guard));

    bool all_constant = true;
    for (const auto& f : fs) all_constant &= !f.finite_support();
    if (all_constant) {
        double prod = 1.0;
        for (const auto& f : fs) prod *= f.constant_value();
        return make_result(LatticeFunction::constant(d, prod), lambda, l);
    }

    // pivot: the finite slot with the smallest support
    int pivot = -1;
    std::size_t pivot_size = 0;
    for (int i = 0; i < l; ++i) {
        if (!fs[static_cast<std::size_t>(i)].finite_support()) continue;
        std::size_t sz = fs[static_cast<std::size_t>(i)].support_size();
        if (pivot < 0 || sz < pivot_size) {
            pivot = i;
            pivot_size = sz;
        }
    }
    const auto pivot_support = fs[static_cast<std::size_t>(pivot)].sorted_entries();

    ValueMap result;
    std::vector<LatticePoint> tuple(static_cast<std::size_t>(l));
    std::function<void(int, std::int64_t)> recurse = [&](int slot, std::int64_t left) {
        if (slot == l) {
            for (const auto& [s, vp] : pivot_support) {
                const LatticePoint x = add(s, tuple[static_cast<std::size_t>(pivot)]);
                double prod = vp;
                for (int i = 0; i < l && prod != 0.0; ++i) {
                    if (i == pivot) continue;
                    prod *= fs[static_cast<std::size_t>(i)].at(
                        sub(x, tuple[static_cast<std::size_t>(i)]));
                }
                if (prod != 0.0) result[x] += prod;
            }
            return;
        }
        const bool last = (slot == l - 1);
        const std::int64_t k_lo = last ? left : 0;
        for (std::int64_t k = k_lo; k <= left; ++k) {
            for_each_sphere_point(d, k, [&](const LatticePoint& u) {
                tuple[static_cast<std::size_t>(slot)] = u;
                recurse(slot + 1, left - k);
            });
            if (last) break;
        }
    };
    recurse(0, lambda);

    LatticeFunction out = LatticeFunction::sparse(d, {});
    const double inv = 1.0 / static_cast<double>(n_l);
    for (const auto& [x, v] : result)
        if (v != 0.0) out.set(x, v * inv);
    return make_result(std::move(out), lambda, l);
}

MaximalResult maximal_average(const std::vector<LatticeFunction>& fs,
                              const std::vector<std::int64_t>& lambda_range,
                              const RepresentationTable& rd, const RepresentationTable& rld) {
    check_family(fs, rd, rld);
    const int d = fs.front().dim();

    MaximalResult res{LatticeFunction::sparse(d, {}), {}, {}, {}};
    bool all_constant = true;
    for (const auto& f : fs) all_constant &= !f.finite_support();

    if (all_constant) {
        double best = 0.0;
        std::int64_t best_lambda = -1;
        for (std::int64_t lam : lambda_range) {
            if (rld.count(lam) == 0) {
                res.skipped.push_back(lam);
                continue;
            }
            res.used.push_back(lam);
            double prod = 1.0;
            for (const auto& f : fs) prod *= f.constant_value();
            if (std::fabs(prod) >= best) {
                best = std::fabs(prod);
                best_lambda = lam;
            }
        }
        if (res.used.empty())
            throw std::domain_error("maximal average: empty effective lambda range");
        res.values = LatticeFunction::constant(d, best);
        LatticePoint origin;
        origin.dim = d;
        res.argmax.emplace(origin, best_lambda);
        return res;
    }

    ValueMap best;
    for (std::int64_t lam : lambda_range) {
        if (rld.count(lam) == 0) {
            res.skipped.push_back(lam);
            continue;
        }
        res.used.push_back(lam);
        AverageResult avg = multilinear_average(fs, lam, rd, rld);
        for (const auto& [x, v] : avg.values.values()) {
            double m = std::fabs(v);
            auto it = best.find(x);
            if (it == best.end() || m > it->second) {
                best[x] = m;
                res.argmax[x] = lam;
            }
        }
    }
    if (res.used.empty())
        throw std::domain_error("maximal average: empty effective lambda range");
    for (const auto& [x, v] : best)
        if (v != 0.0) res.values.set(x, v);
    return res;
}

double lp_norm(const LatticeFunction& f, double p) {
    if (p < 1.0) throw std::domain_error("lp_norm: p must be >= 1");
    const bool inf = std::isinf(p);
    switch (f.kind()) {
        case LatticeFunction::Kind::Constant:
            if (!inf)
                throw std::domain_error("lp_norm: constant function only has an infinity norm");
            return std::fabs(f.constant_value());
        case LatticeFunction::Kind::Box:
            if (inf) return 1.0;
            return std::pow(static_cast<double>(f.box_side()),
                            static_cast<double>(f.dim()) / p);
        case LatticeFunction::Kind::Sparse: {
            const auto entries = f.sorted_entries();
            if (inf) {
                double m = 0.0;
                for (const auto& [x, v] : entries) m = std::max(m, std::fabs(v));
                return m;
            }
            std::vector<double> powers;
            powers.reserve(entries.size());
            for (const auto& [x, v] : entries) powers.push_back(std::pow(std::fabs(v), p));
            return std::pow(pairwise_sum(powers), 1.0 / p);
        }
    }
    return 0.0;
}

double norm_ratio(const std::vector<LatticeFunction>& fs, const std::vector<double>& p_list,
                  double r, const std::vector<std::int64_t>& lambda_range,
                  const RepresentationTable& rd, const RepresentationTable& rld) {
    if (p_list.size() != fs.size())
        throw std::domain_error("norm_ratio: one exponent per function required");
    double denom = 1.0;
    for (std::size_t i = 0; i < fs.size(); ++i) denom *= lp_norm(fs[i], p_list[i]);
    if (denom == 0.0) throw std::domain_error("norm_ratio: zero norm in the denominator");
    MaximalResult maximal = maximal_average(fs, lambda_range, rd, rld);
    return lp_norm(maximal.values, r) / denom;
}

}  // namespace spherelab
