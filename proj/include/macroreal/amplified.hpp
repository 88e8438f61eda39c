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
 * Amplified quadrature measurement. At each site the signal mode a1 meets a
 * coherent ancilla |alpha> (alpha real) on a 50/50 splitter,
 *   c+ = (a1 + a2)/sqrt(2),  c- = (-a1 + a2)/sqrt(2),
 * the outputs are rotated by
 *   c2 =  c+ cos(t) + e^{i phi} c- sin(t),
 *   c1 = -c+ sin(t) + e^{i phi} c- cos(t),   phi = pi/2,
 * and the detectors report D = N2 - N1, i.e. J = D/2. Then
 *   J = (e^{2it} a1^dag a2 + h.c.)/2  ->  (alpha/sqrt(2)) x_{2t},
 * so D/(alpha sqrt(2)) tends to the quadrature x_{2t} as alpha grows.
 *
 * Tracing out the ancilla leaves a POVM {E_D} on the signal mode.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "macroreal/errors.hpp"
#include "macroreal/fock.hpp"
#include "macroreal/hermite.hpp"
#include "macroreal/homodyne.hpp"
#include "macroreal/outcomes.hpp"
#include "macroreal/schmidt.hpp"

namespace macroreal {

inline constexpr double kCompletenessTolerance = 1e-6;
inline constexpr double kCompletenessFailure = 1e-4;

/// Ancilla cutoff covering the Poisson(alpha^2) photon number to ~7 sigma.
inline int recommended_ancilla_cutoff(double alpha) {
    return static_cast<int>(std::ceil((std::abs(alpha) + 3.0) * (std::abs(alpha) + 3.0)));
}

/// Mode transformation (a1, a2) -> (c2, c1): splitter, then rotation by t.
inline Eigen::Matrix2cd amplified_mode_matrix(double apparatus_angle) {
    const cplx phase = std::polar(1.0, std::numbers::pi / 2.0);
    Eigen::Matrix2cd rotation;
    rotation << std::cos(apparatus_angle), phase * std::sin(apparatus_angle),
        -std::sin(apparatus_angle), phase * std::cos(apparatus_angle);
    return rotation * beam_splitter_5050_matrix();
}

/// Signal-mode POVM of the amplified number-difference measurement.
struct SitePovm {
    double alpha = 0.0;
    double apparatus_angle = 0.0;
    int signal_cutoff = 0;
    int ancilla_cutoff = 0;
    int d_min = 0;                          ///< number difference of elements[0]
    std::vector<Eigen::MatrixXcd> elements; ///< E_D for D = d_min, d_min + 1, ...
    double completeness_deficit = 0.0;      ///< max |sum_D E_D - I|

    int number_difference(std::size_t index) const { return d_min + static_cast<int>(index); }
    double j_value(std::size_t index) const { return 0.5 * number_difference(index); }
};

namespace detail {

/// First `cols` columns of the M-photon representation of the real rotation
/// [[c, -s], [s, c]] at pi/4, in the basis |k>_{c2} |M - k>_{c1}. The
/// generator is i^k-conjugate to a real symmetric tridiagonal matrix with
/// spectrum M, M - 2, ..., -M, which is diagonalized directly.
inline Eigen::MatrixXcd quarter_rotation_block(int m, int cols) {
    const Eigen::Index dim = m + 1;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd sub(std::max<Eigen::Index>(dim - 1, 0));
    for (int k = 0; k < m; ++k) sub(k) = std::sqrt(static_cast<double>(k + 1) * (m - k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd &v = es.eigenvectors();
    Eigen::VectorXcd phase(dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const double lambda = 2.0 * std::round(0.5 * (es.eigenvalues()(r) + m)) - m;
        phase(r) = std::polar(1.0, 0.25 * std::numbers::pi * lambda);
    }
    const Eigen::Index c = std::min<Eigen::Index>(cols, dim);
    Eigen::MatrixXcd w = v * phase.asDiagonal() * v.topRows(c).transpose();
    static const cplx powers[4] = {1.0, cplx(0.0, 1.0), -1.0, cplx(0.0, -1.0)};
    for (Eigen::Index k = 0; k < dim; ++k)
        for (Eigen::Index n = 0; n < c; ++n) w(k, n) *= powers[((k - n) % 4 + 4) % 4];
    return w;
}

/// Memo of quarter_rotation_block, shared by every site POVM. A stored block
/// is reused when it has at least the requested columns.
class RotationBlockCache {
  public:
    std::shared_ptr<const Eigen::MatrixXcd> get(int m, int cols) {
        {
            std::shared_lock lock(mutex_);
            auto it = blocks_.find(m);
            if (it != blocks_.end() && it->second->cols() >= cols) return it->second;
        }
        auto block = std::make_shared<const Eigen::MatrixXcd>(quarter_rotation_block(m, cols));
        std::unique_lock lock(mutex_);
        auto &slot = blocks_[m];
        if (!slot || slot->cols() < block->cols()) slot = block;
        return slot;
    }

    static RotationBlockCache &shared() {
        static RotationBlockCache cache;
        return cache;
    }

  private:
    std::shared_mutex mutex_;
    std::map<int, std::shared_ptr<const Eigen::MatrixXcd>> blocks_;
};

} // namespace detail

/// Builds {E_D} on signal levels 0..signal_cutoff with the ancilla truncated
/// at ancilla_cutoff photons.
///
/// The mode matrix factors as diag(1, -i) R(pi/4) diag(1, -1) diag(e^{-it}, e^{it}),
/// so for input |n>|m> with M = n + m the output amplitude on |k>_{c2}|M - k>_{c1} is
///   (-i)^{M-k} (-1)^m e^{-it(n - m)} W_M(k, n),
/// with W_M the M-photon block of R(pi/4). E_D collects the k - l = D sector.
inline SitePovm build_site_povm(double alpha, double apparatus_angle, int signal_cutoff,
                                int ancilla_cutoff) {
    if (!std::isfinite(alpha)) throw InvalidArgument("alpha must be finite");
    if (signal_cutoff < 0 || ancilla_cutoff < 0) throw InvalidArgument("cutoffs must be >= 0");
    const int k_max = signal_cutoff + ancilla_cutoff;
    const int levels = signal_cutoff + 1;
    const Eigen::VectorXcd anc = coherent_amplitudes(alpha, ancilla_cutoff);

    // out[M](k, n): output amplitude for signal |n>, summed against the ancilla.
    std::vector<Eigen::MatrixXcd> out(static_cast<std::size_t>(k_max + 1));
    static const cplx minus_i_pow[4] = {1.0, cplx(0.0, -1.0), -1.0, cplx(0.0, 1.0)};
    for (int m_tot = 0; m_tot <= k_max; ++m_tot) {
        const int cols = std::min(levels, m_tot + 1);
        const auto block_ptr = detail::RotationBlockCache::shared().get(m_tot, cols);
        const Eigen::MatrixXcd &w = *block_ptr;
        Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(m_tot + 1, levels);
        for (int n = 0; n < cols; ++n) {
            const int m = m_tot - n;
            if (m > ancilla_cutoff) continue;
            const cplx coeff = anc(m) * (m % 2 == 0 ? 1.0 : -1.0) * std::polar(1.0, -apparatus_angle * (n - m));
            for (int k = 0; k <= m_tot; ++k) block(k, n) = coeff * minus_i_pow[(m_tot - k) % 4] * w(k, n);
        }
        out[static_cast<std::size_t>(m_tot)] = std::move(block);
    }

    SitePovm povm;
    povm.alpha = alpha;
    povm.apparatus_angle = apparatus_angle;
    povm.signal_cutoff = signal_cutoff;
    povm.ancilla_cutoff = ancilla_cutoff;
    povm.d_min = -k_max;
    povm.elements.assign(static_cast<std::size_t>(2 * k_max + 1), Eigen::MatrixXcd::Zero(levels, levels));

    for (int d = -k_max; d <= k_max; ++d) {
        const int first = std::abs(d);
        const Eigen::Index rows = (k_max - first) / 2 + 1;
        Eigen::MatrixXcd diag(rows, levels);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const int m_tot = first + 2 * static_cast<int>(r);
            diag.row(r) = out[static_cast<std::size_t>(m_tot)].row((m_tot + d) / 2);
        }
        povm.elements[static_cast<std::size_t>(d + k_max)] = diag.adjoint() * diag;
    }

    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(levels, levels);
    for (const auto &e : povm.elements) sum += e;
    povm.completeness_deficit = (sum - Eigen::MatrixXcd::Identity(levels, levels)).cwiseAbs().maxCoeff();
    if (povm.completeness_deficit > kCompletenessFailure) {
        const bool ancilla_smaller = ancilla_cutoff <= signal_cutoff;
        throw NonConvergence("amplified POVM incomplete: deficit " +
                                 detail::format_double(povm.completeness_deficit) + " at signal cutoff " +
                                 std::to_string(signal_cutoff) + ", ancilla cutoff " +
                                 std::to_string(ancilla_cutoff) + " (smaller: " +
                                 (ancilla_smaller ? "ancilla" : "signal") + ")",
                             povm.completeness_deficit);
    }
    return povm;
}

/// Thread-safe memo of site POVMs keyed by (alpha, angle, cutoffs). Lookups
/// share a lock; two threads may build the same entry and the first insert wins.
class PovmCache {
  public:
    using Key = std::tuple<double, double, int, int>;

    std::shared_ptr<const SitePovm> get(double alpha, double apparatus_angle, int signal_cutoff,
                                        int ancilla_cutoff) {
        const Key key{alpha, apparatus_angle, signal_cutoff, ancilla_cutoff};
        {
            std::shared_lock lock(mutex_);
            if (auto it = entries_.find(key); it != entries_.end()) return it->second;
        }
        auto built = std::make_shared<const SitePovm>(
            build_site_povm(alpha, apparatus_angle, signal_cutoff, ancilla_cutoff));
        std::unique_lock lock(mutex_);
        return entries_.try_emplace(key, std::move(built)).first->second;
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return entries_.size();
    }

    static PovmCache &shared() {
        static PovmCache cache;
        return cache;
    }

  private:
    mutable std::shared_mutex mutex_;
    std::map<Key, std::shared_ptr<const SitePovm>> entries_;
};

/// Joint distribution of (J_A, J_B) for a Schmidt-diagonal signal state,
///   P(D_A, D_B) = sum_{n n'} c_n c_n' E_{D_A}(n, n') F_{D_B}(n, n').
/// Angles are apparatus angles t; the outcome tracks x_{2t}.
inline JointOutcomeDistribution amplified_joint_distribution(const SchmidtDiagonalState &state,
                                                             double alpha, double apparatus_a,
                                                             double apparatus_b, int signal_cutoff,
                                                             int ancilla_cutoff,
                                                             PovmCache &cache = PovmCache::shared()) {
    if (state.support() > signal_cutoff) {
        throw InvalidArgument("signal cutoff " + std::to_string(signal_cutoff) +
                              " is below the state's support " + std::to_string(state.support()));
    }
    const auto povm_a = cache.get(alpha, apparatus_a, signal_cutoff, ancilla_cutoff);
    const auto povm_b = cache.get(alpha, apparatus_b, signal_cutoff, ancilla_cutoff);
    const int levels = signal_cutoff + 1;
    const auto outcomes = static_cast<Eigen::Index>(povm_a->elements.size());

    Eigen::VectorXd c = Eigen::VectorXd::Zero(levels);
    for (int n = 0; n <= std::min(signal_cutoff, state.cutoff()); ++n) c(n) = state.coefficients()[static_cast<std::size_t>(n)];
    const Eigen::MatrixXd cc = c * c.transpose();

    Eigen::MatrixXcd a(outcomes, levels * levels);
    Eigen::MatrixXcd b(outcomes, levels * levels);
    for (Eigen::Index d = 0; d < outcomes; ++d) {
        const Eigen::MatrixXcd ea = povm_a->elements[static_cast<std::size_t>(d)].cwiseProduct(cc.cast<cplx>());
        a.row(d) = Eigen::Map<const Eigen::RowVectorXcd>(ea.data(), ea.size());
        const auto &eb = povm_b->elements[static_cast<std::size_t>(d)];
        b.row(d) = Eigen::Map<const Eigen::RowVectorXcd>(eb.data(), eb.size());
    }

    JointOutcomeDistribution dist;
    dist.probabilities = (a * b.transpose()).real();
    for (Eigen::Index d = 0; d < outcomes; ++d) {
        dist.axis_a.values.push_back(povm_a->j_value(static_cast<std::size_t>(d)));
        dist.axis_b.values.push_back(povm_b->j_value(static_cast<std::size_t>(d)));
    }
    dist.setting_a = {Site::A, 2.0 * apparatus_a};
    dist.setting_b = {Site::B, 2.0 * apparatus_b};
    dist.alpha = alpha;
    return dist;
}

/// Largest completeness deficit of the two site POVMs behind a distribution.
inline double amplified_completeness_deficit(double alpha, double apparatus_a, double apparatus_b,
                                             int signal_cutoff, int ancilla_cutoff,
                                             PovmCache &cache = PovmCache::shared()) {
    return std::max(cache.get(alpha, apparatus_a, signal_cutoff, ancilla_cutoff)->completeness_deficit,
                    cache.get(alpha, apparatus_b, signal_cutoff, ancilla_cutoff)->completeness_deficit);
}

/// Discrete law as sorted (value, probability) pairs.
struct DiscreteLaw {
    std::vector<double> values;
    std::vector<double> probabilities;
};

/// Law of D/(alpha sqrt(2)) for a single-mode signal state, which tends to
/// the law of x_{2t}.
inline DiscreteLaw amplified_rescaled_law(const DensityMatrix &rho, double alpha,
                                          double apparatus_angle, int signal_cutoff,
                                          int ancilla_cutoff, PovmCache &cache = PovmCache::shared()) {
    if (rho.modes() != 1) throw InvalidArgument("single-mode state required");
    if (!(alpha > 0.0)) throw InvalidArgument("rescaling needs alpha > 0");
    if (rho.cutoff() > signal_cutoff) throw InvalidArgument("state exceeds the signal cutoff");
    const auto povm = cache.get(alpha, apparatus_angle, signal_cutoff, ancilla_cutoff);
    const int c = rho.cutoff();
    DiscreteLaw law;
    for (std::size_t d = 0; d < povm->elements.size(); ++d) {
        const double p = (rho.matrix() * povm->elements[d].topLeftCorner(c + 1, c + 1)).trace().real();
        law.values.push_back(povm->number_difference(d) / (alpha * std::numbers::sqrt2));
        law.probabilities.push_back(p);
    }
    return law;
}

/// sup_x |F_law(x) - cdf(x)| for a discrete law against a continuous CDF.
template <typename Cdf>
double kolmogorov_distance(const DiscreteLaw &law, Cdf &&cdf, double negligible = 1e-15) {
    double below = 0.0;
    double dist = 0.0;
    for (std::size_t i = 0; i < law.values.size(); ++i) {
        const double p = law.probabilities[i];
        if (std::abs(p) <= negligible) {
            below += p;
            continue;
        }
        const double f = cdf(law.values[i]);
        dist = std::max(dist, std::abs(below - f));
        below += p;
        dist = std::max(dist, std::abs(below - f));
    }
    return dist;
}

/// Kolmogorov distance between D/(alpha sqrt(2)) and the ideal x_{2t}.
inline double homodyne_limit_distance(const DensityMatrix &rho, double alpha, double apparatus_angle,
                                      int signal_cutoff, int ancilla_cutoff,
                                      PovmCache &cache = PovmCache::shared()) {
    const auto law = amplified_rescaled_law(rho, alpha, apparatus_angle, signal_cutoff, ancilla_cutoff, cache);
    const HermiteBasisCache basis(rho.cutoff());
    return kolmogorov_distance(law, [&](double x) {
        return quadrature_cdf(rho, 2.0 * apparatus_angle, x, basis);
    });
}

} // namespace macroreal
