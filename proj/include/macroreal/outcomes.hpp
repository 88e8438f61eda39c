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
 * Joint outcome tables for two-site measurements, sign binning and the
 * three-region (1 / 0 / 2) binning with middle half-width delta.
 */

#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "macroreal/errors.hpp"

namespace macroreal {

enum class Site { A, B };

inline double normalize_angle(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(angle, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

/// Quadrature angle theta of x_theta at one site.
struct MeasurementSetting {
    Site site = Site::A;
    double angle = 0.0;

    MeasurementSetting() = default;
    MeasurementSetting(Site s, double a) : site(s), angle(normalize_angle(a)) {}

    /// Rotation angle of the number-difference apparatus that measures
    /// x_angle in the strong-ancilla limit (J_t(pi/2) tracks x_{2t}).
    double schwinger_angle() const noexcept { return 0.5 * angle; }
};

/// Outcome values along one axis. Continuous axes carry quadrature weights;
/// discrete axes leave `weights` empty.
struct OutcomeAxis {
    std::vector<double> values;
    std::vector<double> weights;
};

struct JointOutcomeDistribution {
    OutcomeAxis axis_a;
    OutcomeAxis axis_b;
    Eigen::MatrixXd probabilities; ///< cell masses, rows index axis_a, columns axis_b
    MeasurementSetting setting_a{Site::A, 0.0};
    MeasurementSetting setting_b{Site::B, 0.0};
    double alpha = 0.0; ///< 0 means ideal homodyne

    bool continuous() const noexcept { return !axis_a.weights.empty(); }
    double total() const { return probabilities.sum(); }

    std::vector<double> marginal_a() const {
        const Eigen::VectorXd m = probabilities.rowwise().sum();
        return {m.data(), m.data() + m.size()};
    }
    std::vector<double> marginal_b() const {
        const Eigen::VectorXd m = probabilities.colwise().sum().transpose();
        return {m.data(), m.data() + m.size()};
    }

    /// Probability density at grid node (i, j); equals the mass on discrete axes.
    double density(Eigen::Index i, Eigen::Index j) const {
        if (!continuous()) return probabilities(i, j);
        return probabilities(i, j) / (axis_a.weights[static_cast<std::size_t>(i)] *
                                      axis_b.weights[static_cast<std::size_t>(j)]);
    }
};

/// +1 for outcomes >= 0, -1 otherwise.
inline double sign_of_outcome(double x) noexcept { return x >= 0.0 ? 1.0 : -1.0; }

/// E[S_A S_B] under sign binning.
inline double sign_correlator(const JointOutcomeDistribution &dist) {
    double k = 0.0;
    for (Eigen::Index i = 0; i < dist.probabilities.rows(); ++i) {
        const double sa = sign_of_outcome(dist.axis_a.values[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < dist.probabilities.cols(); ++j)
            k += sa * sign_of_outcome(dist.axis_b.values[static_cast<std::size_t>(j)]) *
                 dist.probabilities(i, j);
    }
    return k;
}

enum class Region { One = 0, Zero = 1, Two = 2 };

/// Region 2: x >= delta. Region 1: x <= -delta (x < 0 when delta = 0, so
/// that delta = 0 reproduces sign binning). Region 0: the open middle.
struct RegionBinning {
    double delta = 0.0;

    explicit RegionBinning(double d = 0.0) : delta(d) {
        if (!(d >= 0.0) || !std::isfinite(d)) {
            throw InvalidArgument("region half-width delta must be finite and >= 0");
        }
    }

    Region region_of(double x) const noexcept {
        if (x >= delta) return Region::Two;
        if (x <= -delta) return Region::One;
        return Region::Zero;
    }

    friend bool operator==(const RegionBinning &, const RegionBinning &) = default;
};

/// Nine-cell joint table P_{rs}, r at site A and s at site B.
struct RegionTable {
    double delta = 0.0;
    std::array<std::array<double, 3>, 3> cells{};

    double P(Region a, Region b) const {
        return cells[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }

    /// Union probability such as P_{10,20} = P(A in {1,0}, B in {2,0}).
    double P(std::initializer_list<Region> as, std::initializer_list<Region> bs) const {
        double s = 0.0;
        for (auto a : as)
            for (auto b : bs) s += P(a, b);
        return s;
    }

    double marginal_a(Region a) const { return P({a}, {Region::One, Region::Zero, Region::Two}); }
    double marginal_b(Region b) const { return P({Region::One, Region::Zero, Region::Two}, {b}); }
    double total() const { return P({Region::One, Region::Zero, Region::Two}, {Region::One, Region::Zero, Region::Two}); }

    /// P_{2,2} + P_{1,1} - P_{10,20} - P_{20,10}.
    double k_lower() const {
        using enum Region;
        return P(Two, Two) + P(One, One) - P({One, Zero}, {Two, Zero}) - P({Two, Zero}, {One, Zero});
    }

    /// P_{20,20} + P_{10,10} - P_{1,2} - P_{2,1}.
    double k_upper() const {
        using enum Region;
        return P({Two, Zero}, {Two, Zero}) + P({One, Zero}, {One, Zero}) - P(One, Two) - P(Two, One);
    }
};

/// Bins every cell of a joint distribution. Continuous grids are exact when
/// +-delta are panel edges of the grid.
inline RegionTable region_probabilities(const JointOutcomeDistribution &dist,
                                        const RegionBinning &binning) {
    RegionTable table;
    table.delta = binning.delta;
    for (Eigen::Index i = 0; i < dist.probabilities.rows(); ++i) {
        const auto ra = static_cast<std::size_t>(binning.region_of(dist.axis_a.values[static_cast<std::size_t>(i)]));
        for (Eigen::Index j = 0; j < dist.probabilities.cols(); ++j) {
            const auto rb = static_cast<std::size_t>(binning.region_of(dist.axis_b.values[static_cast<std::size_t>(j)]));
            table.cells[ra][rb] += dist.probabilities(i, j);
        }
    }
    return table;
}

} // namespace macroreal
