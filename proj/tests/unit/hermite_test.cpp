#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/hermite.hpp>
#include <gtest/gtest.h>

#include "macroreal/hermite.hpp"

using namespace macroreal;

namespace {

// phi_n from the physicists' polynomial, H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)).
double phi_reference(int n, double x) {
    const double norm = std::sqrt(std::ldexp(1.0, n) * boost::math::factorial<double>(n) * std::sqrt(std::numbers::pi));
    return boost::math::hermite(n, x) * std::exp(-0.5 * x * x) / norm;
}

double overlap_reference(int n, int m, double lo, double hi) {
    auto f = [&](double x) { return phi_reference(n, x) * phi_reference(m, x); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-13);
}

} // namespace

TEST(HermiteFunctions, RecurrenceMatchesPolynomialForm) {
    std::vector<double> out(26);
    for (double x : {-4.0, -1.3, 0.0, 0.2, 2.7, 5.5}) {
        hermite_functions(x, out);
        for (int n = 0; n <= 25; ++n) EXPECT_NEAR(out[n], phi_reference(n, x), 1e-12) << "n=" << n << " x=" << x;
    }
}

TEST(HermiteFunctions, HighOrdersStayFinite) {
    std::vector<double> out(301);
    hermite_functions(20.0, out);
    for (double v : out) EXPECT_TRUE(std::isfinite(v));
}

TEST(GaussPanels, IntegratesPolynomialsExactly) {
    const auto rule = gauss_legendre_panels({-1.0, 0.3, 2.0}, 0.4);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 9);
    EXPECT_NEAR(s, (std::pow(2.0, 10) - 1.0) / 10.0, 1e-11);
    EXPECT_TRUE(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));
    EXPECT_THROW(gauss_legendre_panels({1.0}, 0.1), InvalidArgument);
}

TEST(HalfLineOverlaps, ParityStructure) {
    const HermiteBasisCache cache(40);
    const auto &g = cache.half_line_overlaps();
    for (int n = 0; n <= 40; ++n) {
        for (int m = 0; m <= 40; ++m) {
            if ((n + m) % 2 == 0) {
                EXPECT_NEAR(g(n, m), n == m ? 0.5 : 0.0, 1e-12) << n << "," << m;
            }
        }
    }
}

TEST(HalfLineOverlaps, OddEntriesMatchAdaptiveIntegration) {
    const HermiteBasisCache cache(20);
    const double x_max = HermiteBasisCache::support_radius(20) + 4.0;
    for (auto [n, m] : std::vector<std::pair<int, int>>{{0, 1}, {1, 4}, {3, 8}, {7, 12}, {19, 20}, {2, 17}}) {
        EXPECT_NEAR(cache.half_line_overlap(n, m), overlap_reference(n, m, 0.0, x_max), 1e-11) << n << "," << m;
    }
    // Closed form for the lowest pair: int_0^inf phi_0 phi_1 = 1/sqrt(2 pi).
    EXPECT_NEAR(cache.half_line_overlap(0, 1), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-13);
    EXPECT_THROW(cache.half_line_overlap(0, 21), InvalidArgument);
}

TEST(IntervalOverlaps, TailsAndCdfAreConsistent) {
    const HermiteBasisCache cache(12);
    const double a = 0.7;
    const Eigen::MatrixXd upper = cache.upper_tail_overlaps(a);
    const Eigen::MatrixXd lower = cache.lower_cdf_overlaps(a);
    // upper(a) + lower(a) is the full-line Gram matrix.
    EXPECT_LT((upper + lower - Eigen::MatrixXd::Identity(13, 13)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(upper(2, 5), overlap_reference(2, 5, a, 14.0), 1e-11);
    EXPECT_NEAR(cache.upper_tail_overlaps(-a)(3, 6), overlap_reference(3, 6, -a, 14.0), 1e-11);
    EXPECT_NEAR(cache.interval_overlaps(-0.4, 1.1)(4, 4), overlap_reference(4, 4, -0.4, 1.1), 1e-12);
    EXPECT_EQ(cache.upper_tail_overlaps(100.0).cwiseAbs().maxCoeff(), 0.0);
}
