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
 * Harmonic-oscillator eigenfunctions phi_n(x) (normalized for the
 * x = (a + a^dag)/sqrt(2) convention) and their overlap integrals over
 * half lines and intervals, evaluated with composite Gauss-Legendre rules.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "macroreal/errors.hpp"

namespace macroreal {

/// Nodes and weights of a composite quadrature rule.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

inline constexpr int kGaussOrder = 20;

/// Composite Gauss-Legendre rule. Every breakpoint becomes a panel edge;
/// gaps wider than `max_panel_width` are split evenly.
inline QuadratureRule gauss_legendre_panels(std::vector<double> breakpoints,
                                            double max_panel_width) {
    if (breakpoints.size() < 2) throw InvalidArgument("need at least two breakpoints");
    if (!(max_panel_width > 0.0)) throw InvalidArgument("panel width must be positive");
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    using Gauss = boost::math::quadrature::gauss<double, kGaussOrder>;
    const auto &abscissa = Gauss::abscissa();
    const auto &weight = Gauss::weights();

    QuadratureRule rule;
    for (std::size_t b = 0; b + 1 < breakpoints.size(); ++b) {
        const double lo = breakpoints[b];
        const double hi = breakpoints[b + 1];
        const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel_width)));
        const double h = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = lo + (p + 0.5) * h;
            const double half = 0.5 * h;
            // Boost stores the non-negative half of a symmetric rule.
            for (std::size_t i = 0; i < abscissa.size(); ++i) {
                const double x = abscissa[i];
                if (x == 0.0) {
                    rule.nodes.push_back(mid);
                    rule.weights.push_back(half * weight[i]);
                    continue;
                }
                rule.nodes.push_back(mid - half * x);
                rule.weights.push_back(half * weight[i]);
                rule.nodes.push_back(mid + half * x);
                rule.weights.push_back(half * weight[i]);
            }
        }
    }
    // Keep nodes ordered so grids read naturally.
    std::vector<std::size_t> order(rule.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return rule.nodes[l] < rule.nodes[r]; });
    QuadratureRule sorted;
    sorted.nodes.reserve(order.size());
    sorted.weights.reserve(order.size());
    for (auto i : order) {
        sorted.nodes.push_back(rule.nodes[i]);
        sorted.weights.push_back(rule.weights[i]);
    }
    return sorted;
}

/// Fills out[n] = phi_n(x) for n = 0..out.size()-1 by the stable three-term
/// recurrence phi_{n+1} = sqrt(2/(n+1)) x phi_n - sqrt(n/(n+1)) phi_{n-1}.
inline void hermite_functions(double x, std::span<double> out) {
    if (out.empty()) return;
    out[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (out.size() == 1) return;
    out[1] = std::numbers::sqrt2 * x * out[0];
    for (std::size_t n = 1; n + 1 < out.size(); ++n) {
        const double nd = static_cast<double>(n);
        out[n + 1] = std::sqrt(2.0 / (nd + 1.0)) * x * out[n] - std::sqrt(nd / (nd + 1.0)) * out[n - 1];
    }
}

/// Rows index points, columns index n = 0..max_n.
inline Eigen::MatrixXd hermite_table(std::span<const double> xs, int max_n) {
    Eigen::MatrixXd table(static_cast<Eigen::Index>(xs.size()), max_n + 1);
    std::vector<double> row(static_cast<std::size_t>(max_n + 1));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        hermite_functions(xs[i], row);
        for (int n = 0; n <= max_n; ++n) table(static_cast<Eigen::Index>(i), n) = row[static_cast<std::size_t>(n)];
    }
    return table;
}

/// Precomputed eigenfunctions on a half-line quadrature grid together with
/// the half-line overlap matrix G_nm = int_0^inf phi_n phi_m dx.
///
/// Beyond x_max = sqrt(2 max_n) + 6 every phi_n is deep in its Gaussian tail,
/// so integrals are cut there.
class HermiteBasisCache {
  public:
    static constexpr double kPanelWidth = 0.25;

    explicit HermiteBasisCache(int max_n) : max_n_(max_n) {
        if (max_n < 0) throw InvalidArgument("max_n must be >= 0");
        x_max_ = support_radius(max_n);
        rule_ = gauss_legendre_panels({0.0, x_max_}, kPanelWidth);
        values_ = hermite_table(rule_.nodes, max_n);
        half_line_ = weighted_gram(values_, rule_.weights);
    }

    static double support_radius(int max_n) { return std::sqrt(2.0 * max_n) + 6.0; }

    int max_n() const noexcept { return max_n_; }
    double x_max() const noexcept { return x_max_; }
    const QuadratureRule &grid() const noexcept { return rule_; }
    const Eigen::MatrixXd &values() const noexcept { return values_; }
    const Eigen::MatrixXd &half_line_overlaps() const noexcept { return half_line_; }

    double half_line_overlap(int n, int m) const {
        check_index(n);
        check_index(m);
        return half_line_(n, m);
    }

    /// U_nm(a) = int_a^inf phi_n phi_m dx.
    Eigen::MatrixXd upper_tail_overlaps(double a) const {
        if (a <= 0.0) {
            // int_a^inf = int_0^inf + int_a^0, and the second piece mirrors by parity.
            Eigen::MatrixXd out = half_line_;
            if (a < 0.0) out += parity_signed(interval_overlaps(0.0, -a));
            return out;
        }
        if (a >= x_max_) return Eigen::MatrixXd::Zero(max_n_ + 1, max_n_ + 1);
        return interval_overlaps(a, x_max_);
    }

    /// L_nm(x) = int_{-inf}^x phi_n phi_m dx.
    Eigen::MatrixXd lower_cdf_overlaps(double x) const {
        return parity_signed(upper_tail_overlaps(-x));
    }

    /// int_lo^hi phi_n phi_m dx for a finite interval.
    Eigen::MatrixXd interval_overlaps(double lo, double hi) const {
        if (hi < lo) throw InvalidArgument("interval bounds reversed");
        if (hi == lo) return Eigen::MatrixXd::Zero(max_n_ + 1, max_n_ + 1);
        const auto rule = gauss_legendre_panels({lo, hi}, kPanelWidth);
        return weighted_gram(hermite_table(rule.nodes, max_n_), rule.weights);
    }

  private:
    static Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd &values, const std::vector<double> &w) {
        const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
        return values.transpose() * wv.asDiagonal() * values;
    }

    /// Applies the (-1)^{n+m} reflection x -> -x to an overlap matrix.
    static Eigen::MatrixXd parity_signed(Eigen::MatrixXd m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                if ((i + j) % 2 != 0) m(i, j) = -m(i, j);
        return m;
    }

    void check_index(int n) const {
        if (n < 0 || n > max_n_) {
            throw InvalidArgument("Hermite index " + std::to_string(n) + " outside [0, " +
                                  std::to_string(max_n_) + "]");
        }
    }

    int max_n_;
    double x_max_;
    QuadratureRule rule_;
    Eigen::MatrixXd values_;
    Eigen::MatrixXd half_line_;
};

} // namespace macroreal
