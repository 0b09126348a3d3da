#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "spikebasis/basis.hpp"
#include "spikebasis/errors.hpp"
#include "spikebasis/rng.hpp"

namespace spikebasis {

enum class ProcessKind { SimpleSpike, GeneralizedSpike };

/// One realization: a spike of the given amplitude at `location` (zero-based),
/// zeros elsewhere. The simple process always has amplitude 1.
struct SpikeSample {
    int n = 0;
    int location = 0;
    double amplitude = 1.0;

    std::vector<double> vector() const {
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        x[static_cast<std::size_t>(location)] = amplitude;
        return x;
    }
};

inline std::vector<SpikeSample> sample_simple(int n, long long count, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_simple: need n >= 1");
    if (count < 0) throw std::invalid_argument("sample_simple: count must be nonnegative");
    Rng rng(seed);
    std::vector<SpikeSample> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long long s = 0; s < count; ++s) out.push_back({n, rng.uniform_index(n), 1.0});
    return out;
}

inline std::vector<SpikeSample> sample_generalized(int n, long long count, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_generalized: need n >= 1");
    if (count < 0) throw std::invalid_argument("sample_generalized: count must be nonnegative");
    Rng rng(seed);
    std::vector<SpikeSample> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long long s = 0; s < count; ++s) {
        const int loc = rng.uniform_index(n);
        out.push_back({n, loc, rng.normal()});
    }
    return out;
}

/// Coordinates of the sample under the analysis transform, amplitude times
/// column `location` of the inverse basis matrix.
inline std::vector<double> analysis_coordinates(const Basis& b, const SpikeSample& s) {
    if (s.n != b.n()) throw std::invalid_argument("analysis_coordinates: dimension mismatch");
    std::vector<double> y = b.inverse().col(s.location);
    for (double& v : y) v *= s.amplitude;
    return y;
}

/// Exact law of one transformed coordinate of the generalized process:
/// an equal-weight mixture of n centered Gaussians whose scales are the
/// absolute cofactors |cofactor(i, j)| of the basis (the basis is assumed
/// volume preserving when this is read as a density in y). A zero scale is
/// a point mass at the origin; has_atom flags that case.
struct MarginalModel {
    int coordinate = 0;
    double weight = 0.0;
    std::vector<double> sigmas;
    bool has_atom = false;

    double atom_mass() const {
        std::size_t z = 0;
        for (double s : sigmas)
            if (s < tol::kSingularMinor) ++z;
        return weight * static_cast<double>(z);
    }
};

inline MarginalModel marginal_model(const Basis& b, int j) {
    if (j < 0 || j >= b.n()) throw std::out_of_range("marginal_model: coordinate out of range");
    MarginalModel m;
    m.coordinate = j;
    m.weight = 1.0 / b.n();
    m.sigmas.reserve(static_cast<std::size_t>(b.n()));
    for (int i = 0; i < b.n(); ++i) m.sigmas.push_back(std::abs(b.cofactor(i, j)));
    m.has_atom = std::any_of(m.sigmas.begin(), m.sigmas.end(),
                             [](double s) { return s < tol::kSingularMinor; });
    return m;
}

/// Density of the absolutely continuous part of the mixture at y.
inline double marginal_pdf(const MarginalModel& m, double y) {
    double f = 0.0;
    for (double s : m.sigmas) {
        if (s < tol::kSingularMinor) continue;
        const double z = y / s;
        f += std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
    }
    return m.weight * f;
}

inline double marginal_cdf(const MarginalModel& m, double y) {
    double f = 0.0;
    for (double s : m.sigmas) {
        if (s < tol::kSingularMinor) {
            if (y >= 0.0) f += 1.0;
            continue;
        }
        f += 0.5 * std::erfc(-y / (s * std::sqrt(2.0)));
    }
    return m.weight * f;
}

/// E|Y_j|^p for the generalized process in closed form,
///   Gamma(p) / (n 2^(p/2 - 1) Gamma(p/2)) * sum_i |cofactor(i, j)|^p,
/// valid for p > 0.
inline double abs_moment(const Basis& b, int j, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("abs_moment: need p > 0");
    if (j < 0 || j >= b.n()) throw std::out_of_range("abs_moment: coordinate out of range");
    double s = 0.0;
    for (int i = 0; i < b.n(); ++i) s += std::pow(std::abs(b.cofactor(i, j)), p);
    const double coeff =
        std::tgamma(p) / (b.n() * std::pow(2.0, 0.5 * p - 1.0) * std::tgamma(0.5 * p));
    return coeff * s;
}

struct CentralMoments {
    double mu2 = 0.0;
    double mu4 = 0.0;
    double kurtosis = 0.0;
};

/// Second and fourth central moments of a transformed coordinate and the
/// kurtosis mu4 - 3 mu2^2 (the mean is zero by symmetry).
inline CentralMoments central_moments(const Basis& b, int j) {
    CentralMoments cm;
    cm.mu2 = abs_moment(b, j, 2.0);
    cm.mu4 = abs_moment(b, j, 4.0);
    cm.kurtosis = cm.mu4 - 3.0 * cm.mu2 * cm.mu2;
    return cm;
}

struct MomentTable {
    int coordinate = 0;
    double mu2 = 0.0;
    double mu4 = 0.0;
    double kurtosis = 0.0;
    std::vector<double> ps;
    std::vector<double> abs_moments;
};

inline MomentTable moment_table(const Basis& b, int j, const std::vector<double>& ps) {
    MomentTable t;
    t.coordinate = j;
    const CentralMoments cm = central_moments(b, j);
    t.mu2 = cm.mu2;
    t.mu4 = cm.mu4;
    t.kurtosis = cm.kurtosis;
    t.ps = ps;
    t.abs_moments.reserve(ps.size());
    for (double p : ps) t.abs_moments.push_back(abs_moment(b, j, p));
    return t;
}

/// Shannon entropy in bits of a discrete law given by a list of values each
/// carrying probability 1/size; values within merge_tol of their sorted
/// neighbor are one outcome.
inline double discrete_entropy_bits(std::vector<double> values, double merge_tol = 1e-12) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double count_term = 0.0;
    std::size_t group = 1;
    for (std::size_t i = 1; i <= values.size(); ++i) {
        if (i < values.size() && values[i] - values[i - 1] <= merge_tol) {
            ++group;
            continue;
        }
        count_term += static_cast<double>(group) * std::log2(static_cast<double>(group));
        group = 1;
    }
    return std::log2(n) - count_term / n;
}

/// Entropy in bits of one transformed coordinate of the simple process.
/// Y_j takes each value of row j of the inverse matrix with probability 1/n.
inline double simple_spike_marginal_entropy(const Basis& b, int j) {
    if (j < 0 || j >= b.n())
        throw std::out_of_range("simple_spike_marginal_entropy: coordinate out of range");
    return discrete_entropy_bits(b.inverse().row(j));
}

/// Vasicek m-spacing estimate of differential entropy in bits, for Monte
/// Carlo cross-checks of the quadrature path.
inline double entropy_mspacing(std::vector<double> samples, int m = 0) {
    const int n = static_cast<int>(samples.size());
    if (n < 4) throw std::invalid_argument("entropy_mspacing: need at least 4 samples");
    if (m <= 0) m = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
    if (2 * m >= n) throw std::invalid_argument("entropy_mspacing: m too large");
    std::sort(samples.begin(), samples.end());
    double h = 0.0;
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - m);
        const int hi = std::min(n - 1, i + m);
        const double gap = samples[static_cast<std::size_t>(hi)] - samples[static_cast<std::size_t>(lo)];
        h += std::log(std::max(gap * n / (hi - lo), 1e-300));
    }
    return h / (n * std::numbers::ln2);
}

}  // namespace spikebasis
