#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spikebasis/basis.hpp"
#include "spikebasis/costs.hpp"
#include "spikebasis/errors.hpp"
#include "spikebasis/process.hpp"
#include "spikebasis/rng.hpp"

namespace spikebasis {

/// Which cost functional to optimize and for which process.
struct CostSpec {
    CostName name = CostName::Lp;
    double p = 1.0;
    ProcessKind process = ProcessKind::GeneralizedSpike;
};

/// Official closed-form evaluation of a cost spec on a basis.
inline double evaluate_cost(const CostSpec& spec, const Basis& b) {
    switch (spec.name) {
        case CostName::Lp:
            return cost_lp_closed(b, spec.p, spec.process).value;
        case CostName::MarginalEntropy:
            return cost_marginal_entropy(b, spec.process).value;
        case CostName::Kurtosis:
            if (spec.process != ProcessKind::GeneralizedSpike)
                throw std::invalid_argument(
                    "evaluate_cost: kurtosis cost is defined for the generalized process");
            return cost_kurtosis(b).value;
    }
    throw std::logic_error("evaluate_cost: unreachable");
}

struct SearchConfig {
    int n = 2;
    DictionaryClass dictionary = DictionaryClass::Orthonormal;
    CostSpec cost;
    int restarts = 20;
    int max_iters = 200;  // coordinate sweeps per restart
    double step_tolerance = 1e-10;
    std::uint64_t seed = 0;
};

struct TracePoint {
    int restart = 0;
    int iteration = 0;
    double cost = 0.0;
};

struct SearchResult {
    Basis best_basis;
    double best_cost = 0.0;
    std::vector<TracePoint> trace;
    bool converged = false;
    double canonical_residual = 0.0;  // against the standard basis
    int restarts_agreeing = 0;

    explicit SearchResult(Basis b) : best_basis(std::move(b)) {}
};

namespace detail {

/// Cost of an orthogonal matrix without building a Basis. On O(n) the
/// cofactors equal det(B) b_ij, |det| = 1, so every closed form reduces to
/// a function of the entries: l^p sums over entries, column entropies for
/// the discrete marginal entropy, entry fourth powers for the kurtosis.
inline double orthogonal_matrix_cost(const CostSpec& spec, const Matrix& m) {
    const int n = m.rows();
    switch (spec.name) {
        case CostName::Lp: {
            if (spec.p == 0.0) {
                const double thr = 1e-12 * m.max_abs();
                int nz = 0;
                for (double v : m.data())
                    if (std::abs(v) > thr) ++nz;
                return static_cast<double>(nz) / n;
            }
            double s = 0.0;
            for (double v : m.data()) s += std::pow(std::abs(v), spec.p);
            if (spec.process == ProcessKind::SimpleSpike) return s / n;
            const double coeff = std::tgamma(spec.p) /
                                 (n * std::pow(2.0, 0.5 * spec.p - 1.0) *
                                  std::tgamma(0.5 * spec.p));
            return coeff * s;
        }
        case CostName::MarginalEntropy: {
            double h = 0.0;
            for (int j = 0; j < n; ++j) h += discrete_entropy_bits(m.col(j));
            return h;
        }
        case CostName::Kurtosis:
            return -(3.0 / n) * (kurtosis_surrogate(m) - 1.0);
    }
    throw std::logic_error("orthogonal_matrix_cost: unreachable");
}

/// B(t) = b0 + cos(t) bc + sin(t) bs along one Givens angle, with the other
/// angles frozen: for B(t) = L G(t) R the dependence on t is affine in
/// (cos t, sin t), with rank-two coefficient matrices built from columns
/// k, l of L and rows k, l of R.
struct LineModel {
    Matrix b0, bc, bs;

    Matrix at(double t) const {
        const double c = std::cos(t);
        const double s = std::sin(t);
        const int n = b0.rows();
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = b0(i, j) + c * bc(i, j) + s * bs(i, j);
        return m;
    }
};

inline LineModel line_model(const Matrix& left, const Matrix& right, int k, int l) {
    const int n = left.rows();
    LineModel lm{Matrix(n, n), Matrix(n, n), Matrix(n, n)};
    const Matrix prod = left * right;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // G(t) rows k, l: [c, -s; s, c] acting between L and R.
            lm.bc(i, j) = left(i, k) * right(k, j) + left(i, l) * right(l, j);
            lm.bs(i, j) = left(i, l) * right(k, j) - left(i, k) * right(l, j);
            lm.b0(i, j) = prod(i, j) - lm.bc(i, j);
        }
    return lm;
}

/// Angles solving u cos(t) + v sin(t) = w, if any.
inline void append_trig_solutions(double u, double v, double w, std::vector<double>& out) {
    const double r = std::hypot(u, v);
    if (r < 1e-13) return;
    double c = w / r;
    if (std::abs(c) > 1.0 + 1e-9) return;
    c = std::clamp(c, -1.0, 1.0);
    const double phi = std::atan2(v, u);
    const double d = std::acos(c);
    out.push_back(phi + d);
    out.push_back(phi - d);
}

/// Exact angles at which the discrete objective can change along the line:
/// value coincidences inside a column for the marginal entropy, entry
/// zero crossings for the l^0 count.
inline std::vector<double> discrete_candidates(const CostSpec& spec, const LineModel& lm) {
    std::vector<double> out;
    const int n = lm.b0.rows();
    if (spec.name == CostName::MarginalEntropy) {
        for (int j = 0; j < n; ++j)
            for (int i1 = 0; i1 < n; ++i1)
                for (int i2 = i1 + 1; i2 < n; ++i2)
                    append_trig_solutions(lm.bc(i1, j) - lm.bc(i2, j),
                                          lm.bs(i1, j) - lm.bs(i2, j),
                                          lm.b0(i2, j) - lm.b0(i1, j), out);
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                append_trig_solutions(lm.bc(i, j), lm.bs(i, j), -lm.b0(i, j), out);
    }
    return out;
}

/// Pull toward further coincidences: a soft count of near-equal value pairs
/// within each column. Used only to order otherwise equal-cost moves of the
/// discrete entropy descent, which is flat almost everywhere.
inline double coincidence_affinity(const Matrix& m, double tau = 0.05) {
    const int n = m.rows();
    double s = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = i1 + 1; i2 < n; ++i2) {
                const double d = (m(i1, j) - m(i2, j)) / tau;
                s += std::exp(-0.5 * d * d);
            }
    return s;
}

template <typename F>
double golden_min(const F& f, double a, double b, double tol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

inline bool is_discrete_cost(const CostSpec& spec) {
    return spec.name == CostName::MarginalEntropy ||
           (spec.name == CostName::Lp && spec.p == 0.0);
}

}  // namespace detail

/// Rotation planes in lexicographic order; SO(n) is parameterized by one
/// angle per plane. Column sign flips never change any of the costs here,
/// so every optimum class has a representative in SO(n) and the search can
/// stay inside it.
inline std::vector<std::pair<int, int>> givens_pairs(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) pairs.emplace_back(k, l);
    return pairs;
}

inline Matrix givens_rotation(int n, int k, int l, double theta) {
    Matrix g = Matrix::identity(n);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    g(k, k) = c;
    g(l, l) = c;
    g(k, l) = -s;
    g(l, k) = s;
    return g;
}

inline Matrix givens_product(int n, const std::vector<std::pair<int, int>>& pairs,
                             const std::vector<double>& angles) {
    Matrix b = Matrix::identity(n);
    for (std::size_t i = 0; i < pairs.size(); ++i)
        b = b * givens_rotation(n, pairs[i].first, pairs[i].second, angles[i]);
    return b;
}

/// Cyclic coordinate descent over the Givens angles of SO(n), with several
/// random restarts. Each line is minimized by a grid scan plus golden
/// refinement; the two discrete costs instead enumerate the angles where the
/// objective can change (value coincidences, entry zero crossings) and may
/// take equal-cost moves ordered by the coincidence affinity, since their
/// landscapes are flat almost everywhere. One trace point per sweep records
/// the official cost.
inline SearchResult search_orthogonal(const SearchConfig& cfg) {
    if (cfg.dictionary != DictionaryClass::Orthonormal)
        throw std::invalid_argument(
            "search_orthogonal: only the orthonormal dictionary is searchable here");
    if (cfg.n < 2 || cfg.n > 12)
        throw std::invalid_argument("search_orthogonal: n must lie in [2, 12]");
    if (cfg.restarts < 1 || cfg.max_iters < 1 || !(cfg.step_tolerance > 0.0))
        throw std::invalid_argument("search_orthogonal: bad iteration controls");
    if (cfg.cost.name == CostName::Kurtosis && cfg.cost.process != ProcessKind::GeneralizedSpike)
        throw std::invalid_argument(
            "search_orthogonal: kurtosis cost requires the generalized process");
    if (cfg.cost.name == CostName::MarginalEntropy &&
        cfg.cost.process != ProcessKind::SimpleSpike)
        throw std::invalid_argument(
            "search_orthogonal: entropy search supports the simple process only; the "
            "generalized cost is unbounded below near signed permutations");
    if (cfg.cost.name == CostName::Lp && (!(cfg.cost.p >= 0.0) || cfg.cost.p > 2.0))
        throw std::invalid_argument("search_orthogonal: p must lie in [0, 2]");

    const int n = cfg.n;
    const auto pairs = givens_pairs(n);
    const int m = static_cast<int>(pairs.size());
    const bool discrete = detail::is_discrete_cost(cfg.cost);
    const double pi = std::numbers::pi;
    constexpr int kScanPoints = 48;

    std::optional<Matrix> best_entries;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<TracePoint> trace;
    std::vector<double> restart_costs;
    bool best_converged = false;

    for (int r = 0; r < cfg.restarts; ++r) {
        Rng rng(cfg.seed + static_cast<std::uint64_t>(r));
        std::vector<double> angles(static_cast<std::size_t>(m));
        for (double& a : angles) a = rng.uniform(-pi, pi);

        double cost_now = detail::orthogonal_matrix_cost(cfg.cost, givens_product(n, pairs, angles));
        trace.push_back({r, 0, cost_now});
        int stall = 0;
        bool converged = false;
        int lateral_budget = discrete ? 30 * m : 0;

        for (int sweep = 1; sweep <= cfg.max_iters; ++sweep) {
            // Suffix products of the rotations after each position.
            std::vector<Matrix> suffix(static_cast<std::size_t>(m + 1));
            suffix[static_cast<std::size_t>(m)] = Matrix::identity(n);
            for (int i = m - 1; i >= 0; --i)
                suffix[static_cast<std::size_t>(i)] =
                    givens_rotation(n, pairs[static_cast<std::size_t>(i)].first,
                                    pairs[static_cast<std::size_t>(i)].second,
                                    angles[static_cast<std::size_t>(i)]) *
                    suffix[static_cast<std::size_t>(i + 1)];

            Matrix left = Matrix::identity(n);
            bool moved_primary = false;
            bool moved_lateral = false;

            for (int i = 0; i < m; ++i) {
                const auto [k, l] = pairs[static_cast<std::size_t>(i)];
                const detail::LineModel lm =
                    detail::line_model(left, suffix[static_cast<std::size_t>(i + 1)], k, l);
                const auto line_cost = [&](double t) {
                    return detail::orthogonal_matrix_cost(cfg.cost, lm.at(t));
                };

                double t_cur = angles[static_cast<std::size_t>(i)];
                const double c_cur = line_cost(t_cur);

                if (discrete) {
                    const std::vector<double> cand = detail::discrete_candidates(cfg.cost, lm);
                    // Lowest cost wins; ties (the landscape is flat almost
                    // everywhere) go to the highest coincidence affinity,
                    // which steers plateau moves toward configurations where
                    // further merges are within reach of a later line.
                    double c_min = c_cur;
                    for (double t : cand) c_min = std::min(c_min, line_cost(t));

                    if (c_min < c_cur - 1e-9) {
                        double t_best = t_cur;
                        double a_best = -1.0;
                        for (double t : cand) {
                            if (line_cost(t) > c_min + 1e-9) continue;
                            const double a = detail::coincidence_affinity(lm.at(t));
                            if (a > a_best) {
                                a_best = a;
                                t_best = t;
                            }
                        }
                        angles[static_cast<std::size_t>(i)] = std::remainder(t_best, 2.0 * pi);
                        moved_primary = true;
                    } else if (lateral_budget > 0) {
                        double t_best = t_cur;
                        double a_best = detail::coincidence_affinity(lm.at(t_cur));
                        for (double t : cand) {
                            if (line_cost(t) > c_cur + 1e-9 || std::abs(t - t_cur) <= 1e-9)
                                continue;
                            const double a = detail::coincidence_affinity(lm.at(t));
                            if (a > a_best + 1e-9) {
                                a_best = a;
                                t_best = t;
                            }
                        }
                        if (std::abs(t_best - t_cur) > 1e-9) {
                            angles[static_cast<std::size_t>(i)] = std::remainder(t_best, 2.0 * pi);
                            --lateral_budget;
                            moved_lateral = true;
                        }
                    }
                } else {
                    double t_best = t_cur;
                    double c_best = c_cur;
                    const double spacing = 2.0 * pi / kScanPoints;
                    for (int g = 0; g < kScanPoints; ++g) {
                        const double t = -pi + spacing * g;
                        const double c = line_cost(t);
                        if (c < c_best) {
                            c_best = c;
                            t_best = t;
                        }
                    }
                    const double t_ref =
                        detail::golden_min(line_cost, t_best - spacing, t_best + spacing, 1e-12);
                    if (line_cost(t_ref) < c_best) t_best = t_ref;
                    if (line_cost(t_best) < c_cur)
                        angles[static_cast<std::size_t>(i)] = std::remainder(t_best, 2.0 * pi);
                }

                left = left * givens_rotation(n, k, l, angles[static_cast<std::size_t>(i)]);
            }

            const double cost_after = detail::orthogonal_matrix_cost(cfg.cost, left);
            trace.push_back({r, sweep, cost_after});
            const double gain = cost_now - cost_after;
            cost_now = cost_after;

            if (gain <= cfg.step_tolerance && !moved_primary && !moved_lateral) {
                ++stall;
            } else if (gain <= cfg.step_tolerance && !moved_primary && moved_lateral) {
                // Lateral wandering without progress should not run forever.
                stall += (lateral_budget == 0) ? 2 : 0;
            } else {
                stall = 0;
            }
            if (stall >= 2) {
                converged = true;
                break;
            }
        }

        restart_costs.push_back(cost_now);
        if (cost_now < best_cost) {
            best_cost = cost_now;
            best_entries = givens_product(n, pairs, angles);
            best_converged = converged;
        }
    }

    SearchResult result{Basis(*best_entries)};
    result.best_cost = evaluate_cost(cfg.cost, result.best_basis);
    result.trace = std::move(trace);
    result.converged = best_converged;
    result.canonical_residual =
        canonicalize(result.best_basis, Basis(Matrix::identity(n))).residual;
    result.restarts_agreeing = static_cast<int>(
        std::count_if(restart_costs.begin(), restart_costs.end(),
                      [&](double c) { return c <= best_cost + 1e-6; }));
    return result;
}

/// Exhaustive scan of the one-parameter family of 2x2 rotations on a grid
/// over [0, pi/2). Grid angles where the cost is undefined (entropy of a
/// marginal with an atom) are recorded as NaN and skipped for the argmin.
struct BruteForce2dResult {
    std::vector<double> thetas;
    std::vector<double> costs;
    double theta_star = 0.0;
    double cost_star = 0.0;
};

inline BruteForce2dResult brute_force_2d(const CostSpec& spec, int grid_points) {
    if (grid_points < 2) throw std::invalid_argument("brute_force_2d: need at least 2 points");
    BruteForce2dResult out;
    out.cost_star = std::numeric_limits<double>::infinity();
    const double half_pi = 0.5 * std::numbers::pi;
    for (int g = 0; g < grid_points; ++g) {
        const double theta = half_pi * (static_cast<double>(g) / grid_points);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const Basis b(Matrix::from_rows({{c, -s}, {s, c}}));
        double value = std::numeric_limits<double>::quiet_NaN();
        try {
            value = evaluate_cost(spec, b);
        } catch (const AtomicMarginalError&) {
        }
        out.thetas.push_back(theta);
        out.costs.push_back(value);
        if (!std::isnan(value) && value < out.cost_star) {
            out.cost_star = value;
            out.theta_star = theta;
        }
    }
    return out;
}

/// One point of the family diag(a, 1/a, 1, ..., 1) in SL±(n, R): the
/// kurtosis cost, the closed form -(3(n-1)/n^2)(a^4 + a^-4 + n - 2) it must
/// match, and their difference. The family drives the cost to -infinity as
/// a grows, so no kurtosis minimizer exists over the volume-preserving
/// dictionary.
struct SlDivergenceRow {
    double a = 0.0;
    double cost = 0.0;
    double formula = 0.0;
    double difference = 0.0;
};

inline std::vector<SlDivergenceRow> sl_divergence_demo(int n,
                                                       const std::vector<double>& a_values) {
    if (n < 2) throw std::invalid_argument("sl_divergence_demo: need n >= 2");
    if (a_values.empty()) throw std::invalid_argument("sl_divergence_demo: no a values");
    std::vector<SlDivergenceRow> rows;
    rows.reserve(a_values.size());
    for (double a : a_values) {
        if (a == 0.0 || !std::isfinite(a))
            throw std::invalid_argument("sl_divergence_demo: a must be finite and nonzero");
        Matrix m = Matrix::identity(n);
        m(0, 0) = a;
        m(1, 1) = 1.0 / a;
        const Basis b(std::move(m));
        if (!is_volume_preserving(b.det()))
            throw std::logic_error("sl_divergence_demo: family member left SL±(n, R)");
        SlDivergenceRow row;
        row.a = a;
        row.cost = cost_kurtosis(b).value;
        const double a4 = a * a * a * a;
        row.formula = -(3.0 * (n - 1) / (static_cast<double>(n) * n)) *
                      (a4 + 1.0 / a4 + static_cast<double>(n - 2));
        row.difference = row.cost - row.formula;
        rows.push_back(row);
    }
    return rows;
}

/// Surrogate value, its bound and whether the bound is attained. On O(n)
/// the matrix of squared entries is doubly stochastic, so the fourth-power
/// sum is at most n with equality exactly at signed permutations.
struct DoublyStochasticBound {
    double surrogate = 0.0;
    double bound = 0.0;
    bool at_signed_permutation = false;
};

inline DoublyStochasticBound doubly_stochastic_bound(const Basis& b) {
    if (!is_orthonormal(b.entries()))
        throw NotOrthonormalError("doubly_stochastic_bound: basis is not orthonormal");
    DoublyStochasticBound out;
    out.surrogate = kurtosis_surrogate(b.entries());
    out.bound = static_cast<double>(b.n());
    out.at_signed_permutation = is_signed_permutation(b.entries());
    return out;
}

/// Counterexample hunt over SL±(n, R) for the l^p cost of the generalized
/// process: the claimed minimizer is the standard basis (an isolated point
/// of an unbounded dictionary, so there is nothing to descend along), and
/// this draws random volume-preserving bases trying to beat it. best_basis
/// stays the standard basis unless a member does.
inline SearchResult ensemble_cp_volume_preserving(const SearchConfig& cfg) {
    if (cfg.dictionary != DictionaryClass::VolumePreserving)
        throw std::invalid_argument("ensemble_cp_volume_preserving: wrong dictionary");
    if (cfg.cost.name != CostName::Lp || !(cfg.cost.p >= 0.0) || cfg.cost.p > 1.0)
        throw std::invalid_argument(
            "ensemble_cp_volume_preserving: requires the l^p cost with p in [0, 1]");
    if (cfg.n < 2) throw std::invalid_argument("ensemble_cp_volume_preserving: need n >= 2");
    constexpr int kBatch = 50;

    SearchResult result{Basis(Matrix::identity(cfg.n))};
    result.best_cost = evaluate_cost(cfg.cost, result.best_basis);
    result.converged = true;
    result.canonical_residual = 0.0;
    int agreeing = 0;

    for (int r = 0; r < cfg.restarts; ++r) {
        Rng rng(cfg.seed + static_cast<std::uint64_t>(r));
        double batch_min = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kBatch; ++i) {
            const Basis member = random_volume_preserving(cfg.n, rng);
            const double c = evaluate_cost(cfg.cost, member);
            batch_min = std::min(batch_min, c);
            if (c < result.best_cost - 1e-12) {
                result.best_cost = c;
                result.best_basis = member;
                result.converged = false;
                result.canonical_residual =
                    canonicalize(member, Basis(Matrix::identity(cfg.n))).residual;
            }
        }
        result.trace.push_back({r, kBatch, batch_min});
        if (batch_min >= result.best_cost - 1e-12) ++agreeing;
    }
    result.restarts_agreeing = agreeing;
    return result;
}

}  // namespace spikebasis
