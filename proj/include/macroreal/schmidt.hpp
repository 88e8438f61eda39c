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

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>

#include "macroreal/errors.hpp"
#include "macroreal/fock.hpp"

namespace macroreal {

/// Two-mode state sum_n c_n |n, n> with real coefficients.
class SchmidtDiagonalState {
  public:
    static SchmidtDiagonalState from_coefficients(std::vector<double> c,
                                                  std::optional<double> r0 = std::nullopt,
                                                  double tail_mass = 0.0) {
        if (c.empty()) throw InvalidArgument("Schmidt state needs at least one coefficient");
        double norm2 = 0.0;
        for (double v : c) {
            if (!std::isfinite(v)) throw InvalidArgument("non-finite Schmidt coefficient");
            norm2 += v * v;
        }
        if (std::abs(norm2 - 1.0) > 1e-10) {
            throw InvalidArgument("Schmidt coefficients have squared norm " + detail::format_double(norm2));
        }
        return SchmidtDiagonalState(std::move(c), r0, tail_mass);
    }

    static SchmidtDiagonalState vacuum(int cutoff) {
        std::vector<double> c(static_cast<std::size_t>(cutoff + 1), 0.0);
        c[0] = 1.0;
        return SchmidtDiagonalState(std::move(c), std::nullopt, 0.0);
    }

    const std::vector<double> &coefficients() const noexcept { return c_; }
    int cutoff() const noexcept { return static_cast<int>(c_.size()) - 1; }
    std::optional<double> r0() const noexcept { return r0_; }
    double tail_mass() const noexcept { return tail_mass_; }

    /// Largest n with c_n^2 above `eps`.
    int support(double eps = 1e-15) const {
        for (int n = cutoff(); n > 0; --n)
            if (c_[static_cast<std::size_t>(n)] * c_[static_cast<std::size_t>(n)] > eps) return n;
        return 0;
    }

    /// Reduced state of either mode: diag(c_n^2).
    DensityMatrix reduced() const {
        Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(cutoff() + 1, cutoff() + 1);
        for (int n = 0; n <= cutoff(); ++n) rho(n, n) = c_[static_cast<std::size_t>(n)] * c_[static_cast<std::size_t>(n)];
        return DensityMatrix::from_matrix(cutoff(), 1, std::move(rho));
    }

    FockVector as_two_mode() const {
        const int c = cutoff();
        Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(detail::fock_dimension(c, 2));
        for (int n = 0; n <= c; ++n) amps(n + (c + 1) * n) = c_[static_cast<std::size_t>(n)];
        return FockVector::from_amplitudes(c, 2, std::move(amps));
    }

    /// Same state on a different cutoff; shrinking must not drop weight.
    SchmidtDiagonalState with_cutoff(int new_cutoff) const {
        std::vector<double> c(static_cast<std::size_t>(new_cutoff + 1), 0.0);
        double dropped = 0.0;
        for (int n = 0; n <= cutoff(); ++n) {
            const double v = c_[static_cast<std::size_t>(n)];
            if (n <= new_cutoff) c[static_cast<std::size_t>(n)] = v;
            else dropped += v * v;
        }
        if (dropped > 1e-15) {
            throw NonConvergence("cutoff " + std::to_string(new_cutoff) + " drops Schmidt weight " +
                                     detail::format_double(dropped),
                                 dropped);
        }
        return SchmidtDiagonalState(std::move(c), r0_, tail_mass_);
    }

  private:
    SchmidtDiagonalState(std::vector<double> c, std::optional<double> r0, double tail)
        : c_(std::move(c)), r0_(r0), tail_mass_(tail) {}

    std::vector<double> c_;
    std::optional<double> r0_;
    double tail_mass_;
};

inline constexpr double kDefaultPairCoherentR0 = 1.1;
inline constexpr double kPairCoherentTailLimit = 1e-10;

/// Weight of the pair coherent state above `cutoff`, i.e.
/// sum_{n > cutoff} r0^{4n}/(n!)^2 / I_0(2 r0^2).
inline double pair_coherent_tail_mass(double r0, int cutoff) {
    if (!(r0 > 0.0)) throw InvalidArgument("r0 must be positive");
    const double lr = std::log(r0);
    const double norm = boost::math::cyl_bessel_i(0, 2.0 * r0 * r0);
    const double peak = r0 * r0;
    double tail = 0.0;
    for (int n = cutoff + 1;; ++n) {
        const double term = std::exp(4.0 * n * lr - 2.0 * detail::log_factorial(n));
        tail += term;
        if (n > peak && term < 1e-20 * (tail + 1e-300)) break;
        if (n > cutoff + 100000) break;
    }
    return tail / norm;
}

/// Smallest cutoff whose truncated weight is below `tail_limit`.
inline int pair_coherent_cutoff(double r0, double tail_limit = kPairCoherentTailLimit) {
    int c = 0;
    while (pair_coherent_tail_mass(r0, c) >= tail_limit) ++c;
    return c;
}

/// c_n proportional to r0^{2n}/n!, normalized on the truncated support.
inline SchmidtDiagonalState pair_coherent(double r0, int cutoff) {
    if (!(r0 > 0.0)) throw InvalidArgument("r0 must be positive, got " + detail::format_double(r0));
    if (cutoff < 0) throw InvalidArgument("cutoff must be >= 0");
    const double tail = pair_coherent_tail_mass(r0, cutoff);
    if (tail >= kPairCoherentTailLimit) {
        throw NonConvergence("pair coherent state with r0 = " + detail::format_double(r0) +
                                 " needs cutoff above " + std::to_string(cutoff) + ": tail mass " +
                                 detail::format_double(tail),
                             tail);
    }
    std::vector<double> logc(static_cast<std::size_t>(cutoff + 1));
    const double lr = std::log(r0);
    double top = -std::numeric_limits<double>::infinity();
    for (int n = 0; n <= cutoff; ++n) {
        logc[static_cast<std::size_t>(n)] = 2.0 * n * lr - detail::log_factorial(n);
        top = std::max(top, logc[static_cast<std::size_t>(n)]);
    }
    std::vector<double> c(logc.size());
    double norm2 = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) {
        c[n] = std::exp(logc[n] - top);
        norm2 += c[n] * c[n];
    }
    const double norm = std::sqrt(norm2);
    for (auto &v : c) v /= norm;
    return SchmidtDiagonalState::from_coefficients(std::move(c), r0, tail);
}

} // namespace macroreal
