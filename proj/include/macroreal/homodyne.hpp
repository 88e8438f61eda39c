// Copyright 2026 The macroreal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Ideal quadrature measurements x_thetaA, x_thetaB on Schmidt-diagonal
 * states. With <x_theta|n> = e^{-i n theta} phi_n(x) the joint amplitude is
 *   psi(x, y) = sum_n c_n e^{-i n (thetaA + thetaB)} phi_n(x) phi_n(y),
 * so every statistic depends on the angles only through their sum.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "macroreal/errors.hpp"
#include "macroreal/fock.hpp"
#include "macroreal/hermite.hpp"
#include "macroreal/outcomes.hpp"
#include "macroreal/schmidt.hpp"

namespace macroreal {

inline constexpr int kMinGridPoints = 400;

/// Symmetric composite Gauss-Legendre grid on +-(sqrt(2 cutoff) + 6) with
/// at least `min_points` nodes. Zero and every +-breakpoint are panel edges.
inline QuadratureRule homodyne_grid(int cutoff, int min_points = kMinGridPoints,
                                    const std::vector<double> &breakpoints = {}) {
    if (min_points < 1) throw InvalidArgument("grid needs a positive point count");
    const double half = HermiteBasisCache::support_radius(cutoff);
    std::vector<double> edges{-half, 0.0, half};
    for (double b : breakpoints) {
        if (std::abs(b) < half) {
            edges.push_back(b);
            edges.push_back(-b);
        }
    }
    const int panels = (min_points + kGaussOrder - 1) / kGaussOrder;
    const double width = std::min(0.5, 2.0 * half / panels);
    return gauss_legendre_panels(edges, width);
}

/// Joint density of (x_thetaA, y_thetaB) sampled on a quadrature grid,
/// stored as cell masses density * w_i * w_j.
inline JointOutcomeDistribution joint_quadrature_pdf(const SchmidtDiagonalState &state,
                                                     double theta_a, double theta_b,
                                                     const QuadratureRule &grid) {
    if (grid.size() < static_cast<std::size_t>(kMinGridPoints)) {
        throw InvalidArgument("quadrature grid has " + std::to_string(grid.size()) +
                              " points, need at least " + std::to_string(kMinGridPoints));
    }
    const int c = state.cutoff();
    const Eigen::MatrixXd phi = hermite_table(grid.nodes, c);
    const double sum = theta_a + theta_b;
    Eigen::VectorXcd coeff(c + 1);
    for (int n = 0; n <= c; ++n) coeff(n) = std::polar(state.coefficients()[static_cast<std::size_t>(n)], -n * sum);
    const Eigen::MatrixXcd amp = phi.cast<cplx>() * coeff.asDiagonal() * phi.transpose().cast<cplx>();

    const Eigen::Map<const Eigen::VectorXd> w(grid.weights.data(), static_cast<Eigen::Index>(grid.size()));
    JointOutcomeDistribution dist;
    dist.axis_a = {grid.nodes, grid.weights};
    dist.axis_b = {grid.nodes, grid.weights};
    dist.probabilities = w.asDiagonal() * amp.cwiseAbs2() * w.asDiagonal();
    dist.setting_a = {Site::A, theta_a};
    dist.setting_b = {Site::B, theta_b};
    dist.alpha = 0.0;

    const double deficit = std::abs(1.0 - dist.total());
    if (deficit > 1e-4) {
        throw NonConvergence("quadrature grid under-resolves the state: normalization deficit " +
                                 detail::format_double(deficit),
                             deficit);
    }
    return dist;
}

inline JointOutcomeDistribution joint_quadrature_pdf(const SchmidtDiagonalState &state,
                                                     double theta_a, double theta_b) {
    return joint_quadrature_pdf(state, theta_a, theta_b, homodyne_grid(state.cutoff()));
}

/// Sign correlator as a cosine series in the angle sum,
///   K(s) = sum_{d >= 1} A_d cos(d s),
///   A_d = 2 sum_n c_n c_{n+d} S_{n,n+d}^2,  S_nm = int sign(x) phi_n phi_m dx.
/// S_nm = 2 G_nm for odd n + m and vanishes otherwise.
class SignCorrelatorSeries {
  public:
    explicit SignCorrelatorSeries(const SchmidtDiagonalState &state)
        : SignCorrelatorSeries(state, HermiteBasisCache(state.cutoff())) {}

    SignCorrelatorSeries(const SchmidtDiagonalState &state, const HermiteBasisCache &basis) {
        const int c = state.cutoff();
        if (basis.max_n() < c) throw InvalidArgument("Hermite cache smaller than state cutoff");
        const auto &g = basis.half_line_overlaps();
        const auto &coef = state.coefficients();
        harmonics_.assign(static_cast<std::size_t>(c + 1), 0.0);
        for (int d = 1; d <= c; d += 2) {
            double a = 0.0;
            for (int n = 0; n + d <= c; ++n) {
                const double s = 2.0 * g(n, n + d);
                a += coef[static_cast<std::size_t>(n)] * coef[static_cast<std::size_t>(n + d)] * s * s;
            }
            harmonics_[static_cast<std::size_t>(d)] = 2.0 * a;
        }
    }

    double operator()(double angle_sum) const {
        double k = 0.0;
        for (std::size_t d = 1; d < harmonics_.size(); d += 2)
            k += harmonics_[d] * std::cos(static_cast<double>(d) * angle_sum);
        return k;
    }

    const std::vector<double> &harmonics() const noexcept { return harmonics_; }

  private:
    std::vector<double> harmonics_;
};

/// Ideal-homodyne sign correlator from half-line overlaps.
inline double sign_correlator(const SchmidtDiagonalState &state, double theta_a, double theta_b) {
    return SignCorrelatorSeries(state)(theta_a + theta_b);
}

/// Same correlator by direct summation over a quadrature grid.
inline double sign_correlator_on_grid(const SchmidtDiagonalState &state, double theta_a,
                                      double theta_b, const QuadratureRule &grid) {
    return sign_correlator(joint_quadrature_pdf(state, theta_a, theta_b, grid));
}

/// Region table of the ideal quadrature measurement from interval overlaps.
inline RegionTable homodyne_region_table(const SchmidtDiagonalState &state, double theta_a,
                                         double theta_b, const RegionBinning &binning,
                                         const HermiteBasisCache &basis) {
    const int c = state.cutoff();
    if (basis.max_n() < c) throw InvalidArgument("Hermite cache smaller than state cutoff");
    // Region 2 is [delta, inf), region 1 its mirror image, region 0 the rest.
    const Eigen::MatrixXd upper = basis.upper_tail_overlaps(binning.delta).topLeftCorner(c + 1, c + 1);
    Eigen::MatrixXd lower = upper;
    for (int n = 0; n <= c; ++n)
        for (int m = 0; m <= c; ++m)
            if ((n + m) % 2 != 0) lower(n, m) = -lower(n, m);
    const Eigen::MatrixXd middle = Eigen::MatrixXd::Identity(c + 1, c + 1) - upper - lower;
    const std::array<const Eigen::MatrixXd *, 3> overlap{&lower, &middle, &upper};

    const double sum = theta_a + theta_b;
    Eigen::MatrixXd weight(c + 1, c + 1);
    const auto &coef = state.coefficients();
    for (int n = 0; n <= c; ++n)
        for (int m = 0; m <= c; ++m)
            weight(n, m) = coef[static_cast<std::size_t>(n)] * coef[static_cast<std::size_t>(m)] * std::cos((n - m) * sum);

    RegionTable table;
    table.delta = binning.delta;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t s = 0; s < 3; ++s)
            table.cells[r][s] = (weight.array() * overlap[r]->array() * overlap[s]->array()).sum();
    return table;
}

inline RegionTable homodyne_region_table(const SchmidtDiagonalState &state, double theta_a,
                                         double theta_b, const RegionBinning &binning) {
    return homodyne_region_table(state, theta_a, theta_b, binning, HermiteBasisCache(state.cutoff()));
}

/// CDF of x_theta for a single-mode state,
///   F(x) = Re sum_nm rho_nm e^{-i(n-m) theta} int_{-inf}^x phi_n phi_m.
inline double quadrature_cdf(const DensityMatrix &rho, double theta, double x,
                             const HermiteBasisCache &basis) {
    if (rho.modes() != 1) throw InvalidArgument("quadrature CDF needs a single-mode state");
    const int c = rho.cutoff();
    if (basis.max_n() < c) throw InvalidArgument("Hermite cache smaller than state cutoff");
    const Eigen::MatrixXd l = basis.lower_cdf_overlaps(x);
    double f = 0.0;
    for (int n = 0; n <= c; ++n)
        for (int m = 0; m <= c; ++m)
            f += (rho.matrix()(n, m) * std::polar(1.0, -(n - m) * theta)).real() * l(n, m);
    return f;
}

} // namespace macroreal
