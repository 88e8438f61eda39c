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
 * CHSH tests on quadrature outcomes with sign binning,
 *   E = K(t, f) - K(t, f') + K(t', f) + K(t', f'),
 * and the three-region variant
 *   E_d = Kl(t, f) - Ku(t, f') + Kl(t', f) + Kl(t', f').
 *
 * Correlator slots are ordered (t, f), (t, f'), (t', f), (t', f').
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "macroreal/amplified.hpp"
#include "macroreal/errors.hpp"
#include "macroreal/hermite.hpp"
#include "macroreal/homodyne.hpp"
#include "macroreal/outcomes.hpp"
#include "macroreal/schmidt.hpp"

namespace macroreal {

/// Quadrature angles: theta, theta' at A and phi, phi' at B.
struct ChshAngles {
    double theta = 0.0;
    double theta_p = 0.0;
    double phi = 0.0;
    double phi_p = 0.0;

    /// Angle pairs in correlator-slot order.
    std::array<std::pair<double, double>, 4> pairs() const {
        return {{{theta, phi}, {theta, phi_p}, {theta_p, phi}, {theta_p, phi_p}}};
    }

    ChshAngles normalized() const {
        return {normalize_angle(theta), normalize_angle(theta_p), normalize_angle(phi), normalize_angle(phi_p)};
    }
};

struct ConvergenceInfo {
    int cutoff_signal = 0;
    int cutoff_ancilla = 0;         ///< 0 in ideal mode
    double state_tail_mass = 0.0;
    double completeness_deficit = 0.0;
    bool converged = true;
};

struct BellReport {
    ChshAngles angles;
    std::array<double, 4> K{};
    std::optional<double> E;
    std::optional<double> E_delta;
    std::optional<std::array<RegionTable, 4>> tables;
    std::array<double, 4> K_lower{};
    std::array<double, 4> K_upper{};
    double alpha = 0.0; ///< 0 means ideal homodyne
    ConvergenceInfo convergence;

    bool violated() const { return E && *E > 2.0; }
    bool violated_delta() const { return E_delta && *E_delta > 2.0; }

    /// Largest single-site region-0 probability over the four setting pairs.
    double p0_max() const {
        double p = 0.0;
        if (!tables) return p;
        for (const auto &t : *tables)
            p = std::max({p, t.marginal_a(Region::Zero), t.marginal_b(Region::Zero)});
        return p;
    }
};

inline double chsh_combination(const std::array<double, 4> &k) { return k[0] - k[1] + k[2] + k[3]; }

inline double modified_combination(const std::array<double, 4> &lower, const std::array<double, 4> &upper) {
    return lower[0] - upper[1] + lower[2] + lower[3];
}

/// Fills K bounds and E_delta from four region tables.
inline void apply_region_tables(BellReport &report, const std::array<RegionTable, 4> &tables,
                                const RegionBinning &binning) {
    for (std::size_t i = 0; i < 4; ++i) {
        if (tables[i].delta != binning.delta) {
            throw InvalidArgument("region table " + std::to_string(i) + " was binned with delta " +
                                  detail::format_double(tables[i].delta) + ", expected " +
                                  detail::format_double(binning.delta));
        }
        report.K_lower[i] = tables[i].k_lower();
        report.K_upper[i] = tables[i].k_upper();
    }
    report.tables = tables;
    report.E_delta = modified_combination(report.K_lower, report.K_upper);
}

inline BellReport modified_chsh(const std::array<RegionTable, 4> &tables, const RegionBinning &binning) {
    BellReport report;
    apply_region_tables(report, tables, binning);
    return report;
}

/// Ideal-homodyne CHSH value.
inline BellReport chsh_E(const SchmidtDiagonalState &state, const ChshAngles &angles) {
    const SignCorrelatorSeries series(state);
    BellReport report;
    report.angles = angles.normalized();
    const auto pairs = angles.pairs();
    for (std::size_t i = 0; i < 4; ++i) report.K[i] = series(pairs[i].first + pairs[i].second);
    report.E = chsh_combination(report.K);
    report.convergence.cutoff_signal = state.cutoff();
    report.convergence.state_tail_mass = state.tail_mass();
    return report;
}

inline BellReport chsh_E(const SchmidtDiagonalState &state, double theta, double theta_p, double phi,
                         double phi_p) {
    return chsh_E(state, ChshAngles{theta, theta_p, phi, phi_p});
}

/// Ideal-homodyne CHSH value with region tables for the given binning.
inline BellReport chsh_with_regions(const SchmidtDiagonalState &state, const ChshAngles &angles,
                                    const RegionBinning &binning, const HermiteBasisCache &basis) {
    BellReport report = chsh_E(state, angles);
    std::array<RegionTable, 4> tables;
    const auto pairs = angles.pairs();
    for (std::size_t i = 0; i < 4; ++i)
        tables[i] = homodyne_region_table(state, pairs[i].first, pairs[i].second, binning, basis);
    apply_region_tables(report, tables, binning);
    return report;
}

inline BellReport chsh_with_regions(const SchmidtDiagonalState &state, const ChshAngles &angles,
                                    const RegionBinning &binning) {
    return chsh_with_regions(state, angles, binning, HermiteBasisCache(state.cutoff()));
}

/// Representative angles for the sums s1 = t + f, s2 = t + f', s3 = t' + f.
inline ChshAngles angles_from_sums(double s1, double s2, double s3) {
    return ChshAngles{0.0, s3 - s1, s1, s2}.normalized();
}

/// Gains below this are rounding noise near the flat top of E.
inline constexpr double kImprovementFloor = 1e-14;

/// Maximizes the ideal E over the angle sums (s1, s2, s3); the fourth sum is
/// s3 - s1 + s2. A coarse grid of `resolution` points per sum is followed by
/// a compass search that halves its step until it falls below `tolerance`.
inline BellReport optimize_chsh(const SchmidtDiagonalState &state, int resolution = 24,
                                double tolerance = 1e-9) {
    if (resolution < 1) throw InvalidArgument("grid resolution must be >= 1");
    if (!(tolerance > 0.0)) throw InvalidArgument("refinement tolerance must be > 0");
    const SignCorrelatorSeries series(state);
    auto value = [&](const std::array<double, 3> &s) {
        return series(s[0]) - series(s[1]) + series(s[2]) + series(s[2] - s[0] + s[1]);
    };

    const double step0 = 2.0 * std::numbers::pi / resolution;
    std::array<double, 3> best{0.0, 0.0, 0.0};
    double best_e = value(best);
    for (int i = 0; i < resolution; ++i)
        for (int j = 0; j < resolution; ++j)
            for (int l = 0; l < resolution; ++l) {
                const std::array<double, 3> s{i * step0, j * step0, l * step0};
                const double e = value(s);
                if (e > best_e) {
                    best_e = e;
                    best = s;
                }
            }

    for (double step = step0 / 2.0; step >= tolerance;) {
        bool moved = false;
        for (std::size_t axis = 0; axis < 3; ++axis) {
            for (double dir : {1.0, -1.0}) {
                auto trial = best;
                trial[axis] += dir * step;
                const double e = value(trial);
                if (e > best_e + kImprovementFloor) {
                    best_e = e;
                    best = trial;
                    moved = true;
                }
            }
        }
        if (!moved) step /= 2.0;
    }
    return chsh_E(state, angles_from_sums(best[0], best[1], best[2]));
}

/// Joint distributions of the amplified measurement for the four slots.
/// Each quadrature angle t is measured with apparatus angle t/2.
inline std::array<JointOutcomeDistribution, 4>
amplified_distributions(const SchmidtDiagonalState &state, double alpha, const ChshAngles &angles,
                        int signal_cutoff, int ancilla_cutoff, PovmCache &cache = PovmCache::shared()) {
    std::array<JointOutcomeDistribution, 4> out;
    const auto pairs = angles.normalized().pairs();
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = amplified_joint_distribution(state, alpha, 0.5 * pairs[i].first, 0.5 * pairs[i].second,
                                              signal_cutoff, ancilla_cutoff, cache);
    }
    return out;
}

/// CHSH report from amplified distributions. Sign binning puts J = 0 at +1.
inline BellReport amplified_report(const std::array<JointOutcomeDistribution, 4> &dists,
                                   const ChshAngles &angles,
                                   const std::optional<RegionBinning> &binning = std::nullopt) {
    BellReport report;
    report.angles = angles.normalized();
    for (std::size_t i = 0; i < 4; ++i) report.K[i] = sign_correlator(dists[i]);
    report.E = chsh_combination(report.K);
    report.alpha = dists[0].alpha;
    if (binning) {
        std::array<RegionTable, 4> tables;
        for (std::size_t i = 0; i < 4; ++i) tables[i] = region_probabilities(dists[i], *binning);
        apply_region_tables(report, tables, *binning);
    }
    return report;
}

inline BellReport amplified_chsh(const SchmidtDiagonalState &state, double alpha, const ChshAngles &angles,
                                 int signal_cutoff, int ancilla_cutoff,
                                 const std::optional<RegionBinning> &binning = std::nullopt,
                                 PovmCache &cache = PovmCache::shared()) {
    const auto dists = amplified_distributions(state, alpha, angles, signal_cutoff, ancilla_cutoff, cache);
    BellReport report = amplified_report(dists, angles, binning);
    report.convergence.cutoff_signal = signal_cutoff;
    report.convergence.cutoff_ancilla = ancilla_cutoff;
    report.convergence.state_tail_mass = state.tail_mass();
    for (const auto &[a, b] : angles.normalized().pairs()) {
        report.convergence.completeness_deficit =
            std::max(report.convergence.completeness_deficit,
                     amplified_completeness_deficit(alpha, 0.5 * a, 0.5 * b, signal_cutoff, ancilla_cutoff, cache));
    }
    report.convergence.converged = report.convergence.completeness_deficit <= kCompletenessTolerance;
    return report;
}

} // namespace macroreal
