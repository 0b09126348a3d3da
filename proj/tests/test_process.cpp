#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "spikebasis/basis.hpp"
#include "spikebasis/process.hpp"
#include "spikebasis/quadrature.hpp"

using namespace spikebasis;

namespace {

Basis rotation2(double t) {
    return Basis(Matrix::from_rows({{std::cos(t), -std::sin(t)}, {std::sin(t), std::cos(t)}}));
}

}  // namespace

TEST_CASE("samplers are deterministic in the seed") {
    const auto a = sample_generalized(5, 100, 42);
    const auto b = sample_generalized(5, 100, 42);
    const auto c = sample_generalized(5, 100, 43);
    REQUIRE(a.size() == 100);
    bool equal = true;
    bool all_same_as_c = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        equal = equal && a[i].location == b[i].location && a[i].amplitude == b[i].amplitude;
        all_same_as_c = all_same_as_c && a[i].location == c[i].location &&
                        a[i].amplitude == c[i].amplitude;
    }
    REQUIRE(equal);
    REQUIRE_FALSE(all_same_as_c);
}

TEST_CASE("simple samples are unit spikes at roughly uniform locations") {
    const int n = 6;
    const auto samples = sample_simple(n, 60000, 1);
    std::vector<int> counts(n, 0);
    for (const auto& s : samples) {
        REQUIRE(s.amplitude == 1.0);
        REQUIRE(s.location >= 0);
        REQUIRE(s.location < n);
        ++counts[static_cast<std::size_t>(s.location)];
        if (&s == &samples.front()) {
            const auto v = s.vector();
            REQUIRE(v.size() == static_cast<std::size_t>(n));
            double sum = 0.0;
            for (double x : v) sum += x;
            REQUIRE(sum == 1.0);
        }
    }
    for (int c : counts) {
        // 10000 expected per cell; 5 sigma is about 480.
        REQUIRE(std::abs(c - 10000) < 500);
    }
}

TEST_CASE("generalized amplitudes look standard normal") {
    const auto samples = sample_generalized(3, 200000, 5);
    oracle::RunningStats amp;
    for (const auto& s : samples) amp.add(s.amplitude);
    REQUIRE(std::abs(amp.mean) < 4.0 * amp.standard_error());
    REQUIRE(std::abs(amp.variance() - 1.0) < 0.02);
}

TEST_CASE("analysis coordinates equal a scaled inverse column") {
    const Basis b = rotation2(0.7);
    const SpikeSample s{2, 1, -2.5};
    const auto y = analysis_coordinates(b, s);
    REQUIRE_THAT(y[0], Catch::Matchers::WithinAbs(-2.5 * b.inverse()(0, 1), 1e-15));
    REQUIRE_THAT(y[1], Catch::Matchers::WithinAbs(-2.5 * b.inverse()(1, 1), 1e-15));
}

TEST_CASE("marginal model lists absolute cofactors") {
    const Basis b = rotation2(0.4);
    const MarginalModel m = marginal_model(b, 0);
    REQUIRE(m.weight == 0.5);
    REQUIRE_THAT(m.sigmas[0], Catch::Matchers::WithinAbs(std::cos(0.4), 1e-15));
    REQUIRE_THAT(m.sigmas[1], Catch::Matchers::WithinAbs(std::sin(0.4), 1e-15));
    REQUIRE_FALSE(m.has_atom);

    const MarginalModel atom = marginal_model(Basis(Matrix::identity(2)), 0);
    REQUIRE(atom.has_atom);
    REQUIRE_THAT(atom.atom_mass(), Catch::Matchers::WithinAbs(0.5, 1e-15));
}

TEST_CASE("marginal pdf integrates to one and cdf reaches the right limits") {
    const Basis b = rotation2(0.9);
    for (int j = 0; j < 2; ++j) {
        const MarginalModel m = marginal_model(b, j);
        const double mass =
            integrate_adaptive([&m](double y) { return marginal_pdf(m, y); }, -12.0, 12.0, 1e-10);
        REQUIRE_THAT(mass, Catch::Matchers::WithinAbs(1.0, 1e-8));
        REQUIRE_THAT(marginal_cdf(m, 12.0), Catch::Matchers::WithinAbs(1.0, 1e-9));
        REQUIRE_THAT(marginal_cdf(m, -12.0), Catch::Matchers::WithinAbs(0.0, 1e-9));
        REQUIRE_THAT(marginal_cdf(m, 0.0), Catch::Matchers::WithinAbs(0.5, 1e-12));
    }
}

TEST_CASE("closed-form moments match the independent Gamma form") {
    Rng rng(31);
    for (int n = 2; n <= 5; ++n) {
        const Basis b = random_volume_preserving(n, rng);
        for (int j = 0; j < n; ++j) {
            const MarginalModel m = marginal_model(b, j);
            for (double p : {0.5, 1.0, 1.7, 2.0, 3.0, 4.0}) {
                double expect = 0.0;
                for (double s : m.sigmas) expect += oracle::normal_abs_moment(s, p) / n;
                REQUIRE_THAT(abs_moment(b, j, p), Catch::Matchers::WithinAbs(expect, 1e-12));
            }
        }
    }
    REQUIRE_THROWS_AS(abs_moment(Basis(Matrix::identity(2)), 0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(abs_moment(Basis(Matrix::identity(2)), 5, 1.0), std::out_of_range);
}

TEST_CASE("central moments reuse the exact p=2 and p=4 values") {
    const Basis b = rotation2(1.1);
    const CentralMoments cm = central_moments(b, 1);
    REQUIRE(cm.mu2 == abs_moment(b, 1, 2.0));
    REQUIRE(cm.mu4 == abs_moment(b, 1, 4.0));
    REQUIRE(cm.kurtosis == cm.mu4 - 3.0 * cm.mu2 * cm.mu2);

    // For any 2x2 rotation the two mixture scales are |cos| and |sin|, so
    // mu2 = 1/2 and mu4 = (3/2)(cos^4 + sin^4).
    REQUIRE_THAT(cm.mu2, Catch::Matchers::WithinAbs(0.5, 1e-15));
    const double c4 = std::pow(std::cos(1.1), 4.0) + std::pow(std::sin(1.1), 4.0);
    REQUIRE_THAT(cm.mu4, Catch::Matchers::WithinAbs(1.5 * c4, 1e-14));
}

TEST_CASE("moment table is consistent with its pieces") {
    const Basis b = rotation2(0.3);
    const MomentTable t = moment_table(b, 0, {0.5, 1.0, 2.0});
    REQUIRE(t.coordinate == 0);
    REQUIRE(t.ps.size() == 3);
    REQUIRE(t.abs_moments[2] == t.mu2);
    REQUIRE(t.kurtosis == central_moments(b, 0).kurtosis);
}

TEST_CASE("discrete entropy merges equal values") {
    REQUIRE(discrete_entropy_bits({1.0, 1.0, 1.0, 1.0}) == 0.0);
    REQUIRE_THAT(discrete_entropy_bits({0.5, -0.5, 0.5, -0.5}),
                 Catch::Matchers::WithinAbs(1.0, 1e-15));
    // Merge tolerance: values 1e-13 apart are one outcome, 1e-3 apart are two.
    REQUIRE(discrete_entropy_bits({1.0, 1.0 + 1e-13}) == 0.0);
    REQUIRE_THAT(discrete_entropy_bits({1.0, 1.0 + 1e-3}), Catch::Matchers::WithinAbs(1.0, 1e-15));
    // {a, a, b} has entropy log2(3) - (2/3).
    REQUIRE_THAT(discrete_entropy_bits({2.0, 2.0, 7.0}),
                 Catch::Matchers::WithinAbs(std::log2(3.0) - 2.0 / 3.0, 1e-14));
}

TEST_CASE("simple-process marginal entropies for reference bases") {
    // Standard basis: each row of the inverse holds one 1 and n-1 zeros.
    for (int n : {2, 3, 4, 7}) {
        const Basis id(Matrix::identity(n));
        const double expect =
            std::log2(static_cast<double>(n)) - (n - 1.0) * std::log2(n - 1.0) / n;
        for (int j = 0; j < n; ++j)
            REQUIRE_THAT(simple_spike_marginal_entropy(id, j),
                         Catch::Matchers::WithinAbs(expect, 1e-14));
    }
    // Haar pair: the averaging row is constant, the differencing row is not.
    const Basis haar = reference_lsdb(2);
    REQUIRE(simple_spike_marginal_entropy(haar, 0) == 0.0);
    REQUIRE(simple_spike_marginal_entropy(haar, 1) == 1.0);

    // Dyadic reference: the averaging row is constant, the rest split evenly.
    const Basis walsh = reference_lsdb(4);
    REQUIRE(simple_spike_marginal_entropy(walsh, 0) == 0.0);
    for (int j = 1; j < 4; ++j)
        REQUIRE_THAT(simple_spike_marginal_entropy(walsh, j),
                     Catch::Matchers::WithinAbs(1.0, 1e-15));

    // Reflector rows take the value (n-2)/n once and -2/n elsewhere.
    for (int n : {5, 6, 8}) {
        const Basis hr = householder_reflector(n);
        const double expect =
            std::log2(static_cast<double>(n)) - (n - 1.0) * std::log2(n - 1.0) / n;
        for (int j = 0; j < n; ++j)
            REQUIRE_THAT(simple_spike_marginal_entropy(hr, j),
                         Catch::Matchers::WithinAbs(expect, 1e-14));
    }
}

TEST_CASE("m-spacing entropy estimate approaches the Gaussian closed form") {
    Rng rng(37);
    std::vector<double> sample(20000);
    for (double& x : sample) x = rng.normal();
    const double estimate = entropy_mspacing(sample);
    const double exact = 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e);
    REQUIRE_THAT(estimate, Catch::Matchers::WithinAbs(exact, 0.05));
}
