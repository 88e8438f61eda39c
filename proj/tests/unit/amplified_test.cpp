#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/hermite.hpp>
#include <gtest/gtest.h>

#include "macroreal/amplified.hpp"

using namespace macroreal;

namespace {

double phi_reference(int n, double x) {
    const double norm =
        std::sqrt(std::ldexp(1.0, n) * boost::math::factorial<double>(n) * std::sqrt(std::numbers::pi));
    return boost::math::hermite(n, x) * std::exp(-0.5 * x * x) / norm;
}

// CDF of x_theta for a state diagonal in n, which is angle independent.
double diagonal_cdf_reference(const std::vector<double> &p, double x) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double t) {
            double s = 0.0;
            for (std::size_t n = 0; n < p.size(); ++n) s += p[n] * std::pow(phi_reference(static_cast<int>(n), t), 2);
            return s;
        },
        -20.0, x, 12, 1e-13);
}

DensityMatrix superposition_01(int cutoff) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cutoff + 1);
    v(0) = v(1) = 1.0 / std::sqrt(2.0);
    return DensityMatrix::pure(FockVector::from_amplitudes(cutoff, 1, v));
}

// <k, M-k| U |n, M-n> for the rotation [[c, -s], [s, c]] by binomial expansion of
// (c c2^dag + s c1^dag)^n (-s c2^dag + c c1^dag)^{M-n}.
double rotation_element(int m, int k, int n, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const int j = k - i;
        if (j < 0 || j > m - n) continue;
        sum += boost::math::binomial_coefficient<double>(n, i) * std::pow(c, i) * std::pow(s, n - i) *
               boost::math::binomial_coefficient<double>(m - n, j) * std::pow(-s, j) * std::pow(c, m - n - j);
    }
    const auto f = [](int x) { return boost::math::factorial<double>(x); };
    return sum * std::sqrt(f(k) * f(m - k) / (f(n) * f(m - n)));
}

} // namespace

TEST(AmplifiedPovm, RotationBlockMatchesBinomialExpansion) {
    for (int m = 0; m <= 9; ++m) {
        const Eigen::MatrixXcd w = detail::quarter_rotation_block(m, m + 1);
        for (int k = 0; k <= m; ++k)
            for (int n = 0; n <= m; ++n)
                EXPECT_NEAR(std::abs(w(k, n) - rotation_element(m, k, n, std::numbers::pi / 4.0)), 0.0, 1e-13)
                    << m << "," << k << "," << n;
    }
}

TEST(AmplifiedPovm, StaysCompleteAtLargeSignalCutoff) {
    // Large alpha with many signal levels; completeness is set by the ancilla tail only.
    const auto povm = build_site_povm(8.0, 0.3, 32, 160);
    EXPECT_LT(povm.completeness_deficit, 1e-12);
}

TEST(AmplifiedPovm, ModeMatrixIsRotationAfterSplitter) {
    const double t = 0.37;
    const Eigen::Matrix2cd u = amplified_mode_matrix(t);
    EXPECT_LT((u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    const cplx i(0.0, 1.0);
    Eigen::Matrix2cd expected;
    expected << std::exp(-i * t), std::exp(i * t), -i * std::exp(-i * t), i * std::exp(i * t);
    EXPECT_LT((u - expected / std::sqrt(2.0)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(AmplifiedPovm, CompleteAndPositive) {
    const auto povm = build_site_povm(2.0, 0.4, 10, recommended_ancilla_cutoff(2.0));
    EXPECT_LT(povm.completeness_deficit, 1e-6);
    for (const auto &e : povm.elements) {
        EXPECT_LT((e - e.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(e, Eigen::EigenvaluesOnly);
        EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-12);
    }
}

TEST(AmplifiedPovm, NoAncillaNoSignalGivesZero) {
    const auto povm = build_site_povm(0.0, 0.0, 4, 0);
    const auto vac = SchmidtDiagonalState::vacuum(4);
    PovmCache cache;
    const auto d = amplified_joint_distribution(vac, 0.0, 0.0, 0.0, 4, 0, cache);
    for (std::size_t i = 0; i < d.axis_a.values.size(); ++i) {
        for (std::size_t j = 0; j < d.axis_b.values.size(); ++j) {
            const double expected = d.axis_a.values[i] == 0.0 && d.axis_b.values[j] == 0.0 ? 1.0 : 0.0;
            EXPECT_NEAR(d.probabilities(i, j), expected, 1e-15);
        }
    }
    EXPECT_LT(povm.completeness_deficit, 1e-12);
}

TEST(AmplifiedPovm, MeanTracksDoubledQuadratureAngle) {
    // For (|0> + |1>)/sqrt(2): <D> = alpha cos(2t), and <x_{2t}> = cos(2t)/sqrt(2).
    const double alpha = 3.0;
    const auto rho = superposition_01(4);
    PovmCache cache;
    for (double t : {0.0, 0.3, 0.9, 2.0}) {
        const auto law = amplified_rescaled_law(rho, alpha, t, 4, recommended_ancilla_cutoff(alpha), cache);
        double mean = 0.0;
        for (std::size_t k = 0; k < law.values.size(); ++k) mean += law.values[k] * law.probabilities[k];
        EXPECT_NEAR(mean, std::cos(2.0 * t) / std::sqrt(2.0), 1e-9) << t;
    }
}

TEST(AmplifiedPovm, IncompleteAncillaFailsAndNamesCutoffs) {
    try {
        build_site_povm(4.0, 0.2, 6, 3);
        FAIL() << "expected NonConvergence";
    } catch (const NonConvergence &e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("ancilla cutoff 3"), std::string::npos) << what;
        EXPECT_NE(what.find("smaller: ancilla"), std::string::npos) << what;
        EXPECT_GT(e.residual(), 1e-4);
    }
}

TEST(AmplifiedJoint, NormalizedWithMatchingMarginals) {
    const auto s = pair_coherent(1.1, 14);
    const double alpha = 2.0;
    const int na = recommended_ancilla_cutoff(alpha);
    PovmCache cache;
    const auto d = amplified_joint_distribution(s, alpha, 0.2, 0.7, 14, na, cache);
    EXPECT_NEAR(d.total(), 1.0, 1e-6);
    EXPECT_GT(d.probabilities.minCoeff(), -1e-12);
    // Site A alone sees the reduced state diag(c_n^2).
    const auto law = amplified_rescaled_law(s.reduced(), alpha, 0.2, 14, na, cache);
    const auto ma = d.marginal_a();
    for (std::size_t k = 0; k < ma.size(); ++k) EXPECT_NEAR(ma[k], law.probabilities[k], 1e-6);
    EXPECT_DOUBLE_EQ(d.setting_a.angle, 0.4);
    EXPECT_THROW(amplified_joint_distribution(s, alpha, 0.2, 0.7, 5, na, cache), InvalidArgument);
}

TEST(AmplifiedJoint, MarginalIgnoresRemoteSetting) {
    const auto s = pair_coherent(1.1, 14);
    PovmCache cache;
    const auto a = amplified_joint_distribution(s, 2.0, 0.2, 0.0, 14, 25, cache).marginal_a();
    const auto b = amplified_joint_distribution(s, 2.0, 0.2, 1.3, 14, 25, cache).marginal_a();
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-6);
}

TEST(AmplifiedLimit, KolmogorovDistanceShrinksWithAlpha) {
    const auto s = pair_coherent(1.1, 14);
    const auto rho = s.reduced();
    std::vector<double> p;
    for (double c : s.coefficients()) p.push_back(c * c);
    PovmCache cache;
    double previous = 1.0;
    for (double alpha : {2.0, 4.0, 8.0}) {
        const auto law = amplified_rescaled_law(rho, alpha, 0.3, 14, recommended_ancilla_cutoff(alpha), cache);
        const double dist = kolmogorov_distance(law, [&](double x) { return diagonal_cdf_reference(p, x); });
        EXPECT_LT(dist, previous) << alpha;
        EXPECT_NEAR(dist, homodyne_limit_distance(rho, alpha, 0.3, 14, recommended_ancilla_cutoff(alpha), cache), 1e-9);
        previous = dist;
    }
}

TEST(PovmCache, SharesEntriesAcrossThreads) {
    PovmCache cache;
    std::vector<std::shared_ptr<const SitePovm>> got(4);
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < 4; ++t) pool.emplace_back([&, t] { got[t] = cache.get(2.0, 0.5, 6, 25); });
    }
    EXPECT_EQ(cache.size(), 1u);
    for (const auto &g : got) EXPECT_EQ(g, got[0]);
    const auto again = cache.get(2.0, 0.5, 6, 25);
    EXPECT_EQ(again, got[0]);
    const auto fresh = build_site_povm(2.0, 0.5, 6, 25);
    for (std::size_t k = 0; k < fresh.elements.size(); ++k)
        EXPECT_EQ((fresh.elements[k] - again->elements[k]).cwiseAbs().maxCoeff(), 0.0);
}
