#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spikebasis/basis.hpp"
#include "spikebasis/errors.hpp"
#include "spikebasis/process.hpp"
#include "spikebasis/quadrature.hpp"

namespace spikebasis {

enum class CostName { Lp, MarginalEntropy, Kurtosis };
enum class CostMethod { ClosedForm, MonteCarlo, ExactDiscrete };

/// Value of a cost functional together with its per-coordinate breakdown
/// (value is always the sum of per_coordinate) and how it was obtained.
struct CostReport {
    CostName cost_name = CostName::Lp;
    double value = 0.0;
    std::optional<double> p;
    std::vector<double> per_coordinate;
    CostMethod method = CostMethod::ClosedForm;
    ProcessKind process = ProcessKind::GeneralizedSpike;
    std::optional<long long> sample_count;
    std::optional<std::uint64_t> seed;
    std::optional<double> standard_error;
};

/// Expected l^p quasi-norm cost E ||B^{-1} X||_p^p in closed form.
/// For p = 0 this is the expected number of nonzero coordinates, which for
/// both processes is the nonzero count of the inverse matrix divided by n
/// (entries below 1e-12 relative to the largest count as zero). For p > 0
/// the simple process averages |entry|^p over the inverse; the generalized
/// process uses the cofactor moment formula. p is capped at 2: beyond the
/// variance the quasi-norm no longer measures sparsity and the minimization
/// results downstream do not apply.
inline CostReport cost_lp_closed(const Basis& b, double p, ProcessKind process) {
    if (!(p >= 0.0) || p > 2.0)
        throw std::invalid_argument("cost_lp_closed: p must lie in [0, 2]");
    const int n = b.n();
    CostReport r;
    r.cost_name = CostName::Lp;
    r.p = p;
    r.process = process;
    r.method = CostMethod::ClosedForm;
    r.per_coordinate.assign(static_cast<std::size_t>(n), 0.0);

    const Matrix& a = b.inverse();
    if (p == 0.0) {
        const double thr = 1e-12 * a.max_abs();
        for (int i = 0; i < n; ++i) {
            int nz = 0;
            for (int j = 0; j < n; ++j)
                if (std::abs(a(i, j)) > thr) ++nz;
            r.per_coordinate[static_cast<std::size_t>(i)] = static_cast<double>(nz) / n;
        }
    } else if (process == ProcessKind::SimpleSpike) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += std::pow(std::abs(a(i, j)), p);
            r.per_coordinate[static_cast<std::size_t>(i)] = s / n;
        }
    } else {
        for (int j = 0; j < n; ++j)
            r.per_coordinate[static_cast<std::size_t>(j)] = abs_moment(b, j, p);
    }

    for (double v : r.per_coordinate) r.value += v;
    return r;
}

/// Monte Carlo estimate of the l^p cost from pregenerated samples, with the
/// plug-in standard error of the total. The l^0 count treats coordinates
/// below 1e-10 of the sample's largest coordinate as zero.
inline CostReport cost_lp_monte_carlo(const Basis& b, double p,
                                      const std::vector<SpikeSample>& samples,
                                      ProcessKind process) {
    if (!(p >= 0.0) || p > 1.0)
        throw std::invalid_argument("cost_lp_monte_carlo: p must lie in [0, 1]");
    if (samples.empty()) throw std::invalid_argument("cost_lp_monte_carlo: no samples");
    const int n = b.n();
    CostReport r;
    r.cost_name = CostName::Lp;
    r.p = p;
    r.process = process;
    r.method = CostMethod::MonteCarlo;
    r.per_coordinate.assign(static_cast<std::size_t>(n), 0.0);
    r.sample_count = static_cast<long long>(samples.size());

    double total_sum = 0.0;
    double total_sq = 0.0;
    for (const SpikeSample& s : samples) {
        const std::vector<double> y = analysis_coordinates(b, s);
        double t = 0.0;
        if (p == 0.0) {
            double ymax = 0.0;
            for (double v : y) ymax = std::max(ymax, std::abs(v));
            const double thr = 1e-10 * ymax;
            for (int i = 0; i < n; ++i) {
                const double c = std::abs(y[static_cast<std::size_t>(i)]) > thr ? 1.0 : 0.0;
                r.per_coordinate[static_cast<std::size_t>(i)] += c;
                t += c;
            }
        } else {
            for (int i = 0; i < n; ++i) {
                const double c = std::pow(std::abs(y[static_cast<std::size_t>(i)]), p);
                r.per_coordinate[static_cast<std::size_t>(i)] += c;
                t += c;
            }
        }
        total_sum += t;
        total_sq += t * t;
    }

    const double nsamp = static_cast<double>(samples.size());
    for (double& v : r.per_coordinate) v /= nsamp;
    r.value = total_sum / nsamp;
    if (samples.size() > 1) {
        const double var = (total_sq - total_sum * total_sum / nsamp) / (nsamp - 1.0);
        r.standard_error = std::sqrt(std::max(var, 0.0) / nsamp);
    }
    return r;
}

/// Kurtosis cost -sum_j kappa(Y_j) for the generalized process, evaluated
/// from the cofactor moments of an arbitrary invertible basis. Minimizing
/// this maximizes the summed kurtosis of the transformed coordinates.
inline CostReport cost_kurtosis(const Basis& b) {
    CostReport r;
    r.cost_name = CostName::Kurtosis;
    r.process = ProcessKind::GeneralizedSpike;
    r.method = CostMethod::ClosedForm;
    r.per_coordinate.reserve(static_cast<std::size_t>(b.n()));
    for (int j = 0; j < b.n(); ++j) {
        r.per_coordinate.push_back(-central_moments(b, j).kurtosis);
        r.value += r.per_coordinate.back();
    }
    return r;
}

/// The summed kurtosis written directly in the cofactors:
///   (3/n) sum_j [ sum_i cof_ij^4 - (1/n) (sum_i cof_ij^2)^2 ].
/// Equals -cost_kurtosis(b).value; kept separate so the sign convention of
/// the cost is pinned by a test rather than by reading the code.
inline double kurtosis_bracket(const Basis& b) {
    const int n = b.n();
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        double s2 = 0.0;
        double s4 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double c = b.cofactor(i, j);
            const double c2 = c * c;
            s2 += c2;
            s4 += c2 * c2;
        }
        total += s4 - s2 * s2 / n;
    }
    return 3.0 * total / n;
}

/// Fourth-power sum of the entries, sum_ij b_ij^4. On O(n) the kurtosis
/// cost is a decreasing affine function of this surrogate.
inline double kurtosis_surrogate(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) {
        const double v2 = v * v;
        s += v2 * v2;
    }
    return s;
}

/// Kurtosis cost on an orthonormal basis via the entry fourth powers:
/// cofactors reduce to det(B) b_ij there, giving
///   cost = -(3/n) (sum_ij b_ij^4 - 1).
inline CostReport cost_kurtosis_orthonormal(const Basis& b) {
    if (!is_orthonormal(b.entries()))
        throw NotOrthonormalError("cost_kurtosis_orthonormal: basis is not orthonormal");
    const int n = b.n();
    CostReport r;
    r.cost_name = CostName::Kurtosis;
    r.process = ProcessKind::GeneralizedSpike;
    r.method = CostMethod::ClosedForm;
    r.per_coordinate.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double s4 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = b.entries()(i, j);
            s4 += v * v * v * v;
        }
        r.per_coordinate.push_back(-(3.0 / n) * (s4 - 1.0 / n));
        r.value += r.per_coordinate.back();
    }
    return r;
}

/// Differential entropy in bits of one atom-free Gaussian-mixture marginal,
/// by adaptive quadrature of -f log2 f over [-10 sigma_max, 10 sigma_max].
inline double marginal_entropy_quadrature(const MarginalModel& m, double abs_tol = 1e-9) {
    if (m.has_atom)
        throw AtomicMarginalError(
            "marginal_entropy_quadrature: marginal has a point mass, "
            "differential entropy undefined");
    double sigma_max = 0.0;
    for (double s : m.sigmas) sigma_max = std::max(sigma_max, s);
    const double limit = 10.0 * sigma_max;
    const auto integrand = [&m](double y) {
        const double f = marginal_pdf(m, y);
        return f > 0.0 ? -f * std::log2(f) : 0.0;
    };
    // The mixture is even in y.
    return 2.0 * integrate_adaptive(integrand, 0.0, limit, 0.5 * abs_tol);
}

/// Sum of marginal entropies sum_j H(Y_j) in bits. Simple process: exact
/// discrete entropy of each row of the inverse. Generalized process:
/// quadrature over the mixture densities; throws AtomicMarginalError when
/// any cofactor vanishes, since a point mass puts the differential entropy
/// at minus infinity.
inline CostReport cost_marginal_entropy(const Basis& b, ProcessKind process) {
    const int n = b.n();
    CostReport r;
    r.cost_name = CostName::MarginalEntropy;
    r.process = process;
    r.per_coordinate.reserve(static_cast<std::size_t>(n));
    if (process == ProcessKind::SimpleSpike) {
        r.method = CostMethod::ExactDiscrete;
        for (int j = 0; j < n; ++j) {
            r.per_coordinate.push_back(simple_spike_marginal_entropy(b, j));
            r.value += r.per_coordinate.back();
        }
    } else {
        r.method = CostMethod::ClosedForm;
        for (int j = 0; j < n; ++j) {
            r.per_coordinate.push_back(marginal_entropy_quadrature(marginal_model(b, j)));
            r.value += r.per_coordinate.back();
        }
    }
    return r;
}

/// Mutual information I(Y_1; ...; Y_n) of the transformed simple process in
/// bits: the marginal-entropy sum minus the joint entropy, and the joint
/// entropy log2(n) is invariant under any invertible transform. Requires
/// |det B| = 1 so the coordinatewise laws stay discrete with mass 1/n.
inline double mutual_information_simple(const Basis& b) {
    if (!is_volume_preserving(b.det()))
        throw NotVolumePreservingError("mutual_information_simple: |det B| must be 1");
    return cost_marginal_entropy(b, ProcessKind::SimpleSpike).value -
           std::log2(static_cast<double>(b.n()));
}

}  // namespace spikebasis
