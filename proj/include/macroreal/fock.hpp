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
 * Truncated bosonic Fock-space algebra: state vectors, density matrices,
 * single-mode operators and passive two-mode linear optics.
 *
 * Multi-mode basis index is the little-endian digit expansion of the
 * per-mode occupations: index = n_0 + (c+1) n_1 + (c+1)^2 n_2 + ...
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "macroreal/errors.hpp"

namespace macroreal {

using cplx = std::complex<double>;

inline constexpr double kNormTolerance = 1e-9;

namespace detail {

inline Eigen::Index fock_dimension(int cutoff, int modes) {
    if (cutoff < 0) {
        throw InvalidArgument("cutoff must be >= 0, got " + std::to_string(cutoff));
    }
    if (modes < 1) {
        throw InvalidArgument("mode count must be >= 1, got " + std::to_string(modes));
    }
    constexpr Eigen::Index kMaxDimension = Eigen::Index{1} << 26;
    Eigen::Index dim = 1;
    for (int m = 0; m < modes; ++m) {
        dim *= cutoff + 1;
        if (dim > kMaxDimension) {
            throw InvalidArgument("Fock space too large: cutoff " + std::to_string(cutoff) +
                                  " with " + std::to_string(modes) + " modes");
        }
    }
    return dim;
}

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

} // namespace detail

class FockVector {
  public:
    static FockVector vacuum(int cutoff, int modes = 1) {
        Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(detail::fock_dimension(cutoff, modes));
        amps(0) = 1.0;
        return FockVector(cutoff, modes, std::move(amps));
    }

    /// Wraps an amplitude array that must already have unit norm.
    static FockVector from_amplitudes(int cutoff, int modes, Eigen::VectorXcd amps) {
        check_length(cutoff, modes, amps);
        const double norm2 = amps.squaredNorm();
        if (std::abs(norm2 - 1.0) > kNormTolerance) {
            throw InvalidArgument("amplitudes are not normalized: squared norm " +
                                  detail::format_double(norm2));
        }
        return FockVector(cutoff, modes, std::move(amps));
    }

    /// Rescales an arbitrary nonzero amplitude array to unit norm.
    static FockVector normalized(int cutoff, int modes, Eigen::VectorXcd amps) {
        check_length(cutoff, modes, amps);
        const double norm = amps.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw InvalidArgument("cannot normalize a zero or non-finite amplitude array");
        }
        amps /= norm;
        return FockVector(cutoff, modes, std::move(amps));
    }

    int cutoff() const noexcept { return cutoff_; }
    int modes() const noexcept { return modes_; }
    Eigen::Index dimension() const noexcept { return amps_.size(); }
    const Eigen::VectorXcd &amplitudes() const noexcept { return amps_; }
    double norm_squared() const { return amps_.squaredNorm(); }

    Eigen::Index index_of(std::span<const int> occupation) const {
        if (static_cast<int>(occupation.size()) != modes_) {
            throw InvalidArgument("occupation has " + std::to_string(occupation.size()) +
                                  " entries for a " + std::to_string(modes_) + "-mode state");
        }
        Eigen::Index index = 0;
        Eigen::Index stride = 1;
        for (int m = 0; m < modes_; ++m) {
            const int n = occupation[static_cast<std::size_t>(m)];
            if (n < 0 || n > cutoff_) {
                throw InvalidArgument("occupation " + std::to_string(n) + " outside [0, " +
                                      std::to_string(cutoff_) + "]");
            }
            index += n * stride;
            stride *= cutoff_ + 1;
        }
        return index;
    }

    std::vector<int> occupation_of(Eigen::Index index) const {
        std::vector<int> occ(static_cast<std::size_t>(modes_));
        for (int m = 0; m < modes_; ++m) {
            occ[static_cast<std::size_t>(m)] = static_cast<int>(index % (cutoff_ + 1));
            index /= cutoff_ + 1;
        }
        return occ;
    }

    cplx amplitude(std::span<const int> occupation) const { return amps_(index_of(occupation)); }
    cplx amplitude(std::initializer_list<int> occupation) const {
        return amplitude(std::span<const int>(occupation.begin(), occupation.size()));
    }

    /// Photon-number distribution of one mode, marginalized over the others.
    std::vector<double> number_distribution(int mode = 0) const {
        check_mode(mode);
        std::vector<double> p(static_cast<std::size_t>(cutoff_ + 1), 0.0);
        const Eigen::Index stride = stride_of(mode);
        for (Eigen::Index i = 0; i < amps_.size(); ++i) {
            p[static_cast<std::size_t>((i / stride) % (cutoff_ + 1))] += std::norm(amps_(i));
        }
        return p;
    }

    /// Largest occupation, over all modes, carrying weight above `eps`.
    int support(double eps = 1e-15) const {
        int top = 0;
        for (int m = 0; m < modes_; ++m) {
            const auto p = number_distribution(m);
            for (int n = cutoff_; n > top; --n) {
                if (p[static_cast<std::size_t>(n)] > eps) {
                    top = n;
                    break;
                }
            }
        }
        return top;
    }

    /// Re-embeds the state at another cutoff. Shrinking is allowed only when
    /// the discarded levels carry no weight above `eps`.
    FockVector with_cutoff(int new_cutoff, double eps = 1e-15) const {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(detail::fock_dimension(new_cutoff, modes_));
        double dropped = 0.0;
        for (Eigen::Index i = 0; i < amps_.size(); ++i) {
            const auto occ = occupation_of(i);
            bool fits = true;
            Eigen::Index j = 0;
            Eigen::Index stride = 1;
            for (int m = 0; m < modes_; ++m) {
                const int n = occ[static_cast<std::size_t>(m)];
                fits = fits && n <= new_cutoff;
                j += n * stride;
                stride *= new_cutoff + 1;
            }
            if (fits) {
                out(j) = amps_(i);
            } else {
                dropped += std::norm(amps_(i));
            }
        }
        if (dropped > eps) {
            throw NonConvergence("re-embedding at cutoff " + std::to_string(new_cutoff) +
                                     " drops weight " + detail::format_double(dropped),
                                 dropped);
        }
        return FockVector(new_cutoff, modes_, std::move(out));
    }

    Eigen::Index stride_of(int mode) const {
        Eigen::Index stride = 1;
        for (int m = 0; m < mode; ++m) stride *= cutoff_ + 1;
        return stride;
    }

  private:
    FockVector(int cutoff, int modes, Eigen::VectorXcd amps)
        : cutoff_(cutoff), modes_(modes), amps_(std::move(amps)) {}

    static void check_length(int cutoff, int modes, const Eigen::VectorXcd &amps) {
        const Eigen::Index dim = detail::fock_dimension(cutoff, modes);
        if (amps.size() != dim) {
            throw InvalidArgument("amplitude array has length " + std::to_string(amps.size()) +
                                  ", expected " + std::to_string(dim));
        }
    }

    void check_mode(int mode) const {
        if (mode < 0 || mode >= modes_) {
            throw InvalidArgument("mode " + std::to_string(mode) + " out of range");
        }
    }

    int cutoff_;
    int modes_;
    Eigen::VectorXcd amps_;
};

/// Single-mode operator truncated to levels 0..cutoff.
struct ModeOperator {
    int cutoff = 0;
    Eigen::MatrixXcd matrix;
    std::string label;

    ModeOperator adjoint() const { return {cutoff, matrix.adjoint(), label + "^dag"}; }

    ModeOperator power(int k) const {
        if (k < 0) throw InvalidArgument("negative operator power");
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(cutoff + 1, cutoff + 1);
        for (int i = 0; i < k; ++i) out = out * matrix;
        return {cutoff, std::move(out), label + "^" + std::to_string(k)};
    }

    friend ModeOperator operator*(const ModeOperator &lhs, const ModeOperator &rhs) {
        if (lhs.cutoff != rhs.cutoff) throw InvalidArgument("operator cutoffs differ");
        return {lhs.cutoff, lhs.matrix * rhs.matrix, lhs.label + "*" + rhs.label};
    }
};

namespace ops {

inline ModeOperator identity(int cutoff) {
    detail::fock_dimension(cutoff, 1);
    return {cutoff, Eigen::MatrixXcd::Identity(cutoff + 1, cutoff + 1), "1"};
}

inline ModeOperator annihilation(int cutoff) {
    detail::fock_dimension(cutoff, 1);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
    for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {cutoff, std::move(a), "a"};
}

inline ModeOperator creation(int cutoff) {
    auto a = annihilation(cutoff);
    return {cutoff, a.matrix.adjoint(), "a^dag"};
}

inline ModeOperator number(int cutoff) {
    detail::fock_dimension(cutoff, 1);
    Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
    for (int k = 0; k <= cutoff; ++k) n(k, k) = static_cast<double>(k);
    return {cutoff, std::move(n), "n"};
}

/// x = (a^dag + a)/sqrt(2).
inline ModeOperator position(int cutoff) {
    const auto a = annihilation(cutoff).matrix;
    return {cutoff, (a + a.adjoint()) / std::numbers::sqrt2, "x"};
}

/// p = i(a^dag - a)/sqrt(2).
inline ModeOperator momentum(int cutoff) {
    const auto a = annihilation(cutoff).matrix;
    return {cutoff, cplx(0.0, 1.0) * (a.adjoint() - a) / std::numbers::sqrt2, "p"};
}

/// P = (a - a^dag)/i, which equals sqrt(2) p.
inline ModeOperator amplitude_P(int cutoff) {
    const auto a = annihilation(cutoff).matrix;
    return {cutoff, (a - a.adjoint()) / cplx(0.0, 1.0), "P"};
}

/// x_theta = x cos(theta) + p sin(theta) = (a e^{-i theta} + a^dag e^{i theta})/sqrt(2).
inline ModeOperator rotated_quadrature(int cutoff, double theta) {
    const auto a = annihilation(cutoff).matrix;
    const cplx phase = std::polar(1.0, theta);
    return {cutoff, (a * std::conj(phase) + a.adjoint() * phase) / std::numbers::sqrt2,
            "x_theta"};
}

} // namespace ops

/// Operator on the full multi-mode truncated space.
struct FockOperator {
    int cutoff = 0;
    int modes = 1;
    Eigen::MatrixXcd matrix;
};

/// Kronecker product of one factor per mode, in little-endian mode order.
inline FockOperator tensor(std::span<const ModeOperator> factors) {
    if (factors.empty()) throw InvalidArgument("tensor product needs at least one factor");
    const int cutoff = factors[0].cutoff;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (const auto &f : factors) {
        if (f.cutoff != cutoff) throw InvalidArgument("tensor factors have different cutoffs");
        // Higher modes are the slower index, so new factors go on the left.
        Eigen::MatrixXcd next(out.rows() * f.matrix.rows(), out.cols() * f.matrix.cols());
        for (Eigen::Index i = 0; i < f.matrix.rows(); ++i)
            for (Eigen::Index j = 0; j < f.matrix.cols(); ++j)
                next.block(i * out.rows(), j * out.cols(), out.rows(), out.cols()) =
                    f.matrix(i, j) * out;
        out = std::move(next);
    }
    return {cutoff, static_cast<int>(factors.size()), std::move(out)};
}

inline FockOperator embed(const ModeOperator &op, int mode, int modes) {
    if (mode < 0 || mode >= modes) throw InvalidArgument("mode index out of range");
    std::vector<ModeOperator> factors(static_cast<std::size_t>(modes), ops::identity(op.cutoff));
    factors[static_cast<std::size_t>(mode)] = op;
    return tensor(factors);
}

/// Applies a single-mode matrix to one mode of a raw multi-mode amplitude array.
inline Eigen::VectorXcd apply_to_mode(const Eigen::MatrixXcd &op, int mode, int cutoff, int modes,
                                      const Eigen::VectorXcd &v) {
    const Eigen::Index levels = cutoff + 1;
    if (op.rows() != levels || op.cols() != levels || v.size() != detail::fock_dimension(cutoff, modes)) {
        throw InvalidArgument("operator and state dimensions do not match");
    }
    Eigen::Index stride = 1;
    for (int m = 0; m < mode; ++m) stride *= levels;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) == cplx(0.0)) continue;
        const Eigen::Index digit = (i / stride) % levels;
        const Eigen::Index base = i - digit * stride;
        for (Eigen::Index r = 0; r < levels; ++r) {
            const cplx m = op(r, digit);
            if (m != cplx(0.0)) out(base + r * stride) += m * v(i);
        }
    }
    return out;
}

class DensityMatrix {
  public:
    static DensityMatrix pure(const FockVector &psi) {
        return DensityMatrix(psi.cutoff(), psi.modes(),
                             psi.amplitudes() * psi.amplitudes().adjoint());
    }

    /// Validates Hermiticity, unit trace and positivity.
    static DensityMatrix from_matrix(int cutoff, int modes, Eigen::MatrixXcd rho) {
        const Eigen::Index dim = detail::fock_dimension(cutoff, modes);
        if (rho.rows() != dim || rho.cols() != dim) {
            throw InvalidArgument("density matrix has wrong dimension");
        }
        if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
            throw InvalidArgument("density matrix is not Hermitian");
        }
        const double tr = rho.trace().real();
        if (std::abs(tr - 1.0) > kNormTolerance) {
            throw InvalidArgument("density matrix trace is " + detail::format_double(tr));
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -1e-10) {
            throw InvalidArgument("density matrix has a negative eigenvalue");
        }
        return DensityMatrix(cutoff, modes, std::move(rho));
    }

    int cutoff() const noexcept { return cutoff_; }
    int modes() const noexcept { return modes_; }
    const Eigen::MatrixXcd &matrix() const noexcept { return rho_; }

    std::vector<double> number_distribution(int mode = 0) const {
        const auto probe = FockVector::vacuum(cutoff_, modes_);
        const Eigen::Index stride = probe.stride_of(mode);
        std::vector<double> p(static_cast<std::size_t>(cutoff_ + 1), 0.0);
        for (Eigen::Index i = 0; i < rho_.rows(); ++i) {
            p[static_cast<std::size_t>((i / stride) % (cutoff_ + 1))] += rho_(i, i).real();
        }
        return p;
    }

  private:
    DensityMatrix(int cutoff, int modes, Eigen::MatrixXcd rho)
        : cutoff_(cutoff), modes_(modes), rho_(std::move(rho)) {}

    int cutoff_;
    int modes_;
    Eigen::MatrixXcd rho_;
};

// --- expectation values ---------------------------------------------------

inline cplx expectation(const FockVector &psi, const FockOperator &op) {
    if (op.cutoff != psi.cutoff() || op.modes != psi.modes() ||
        op.matrix.rows() != psi.dimension()) {
        throw InvalidArgument("operator does not act on this state's space");
    }
    return psi.amplitudes().dot(op.matrix * psi.amplitudes());
}

inline cplx expectation(const FockVector &psi, const ModeOperator &op, int mode = 0) {
    if (op.cutoff != psi.cutoff()) {
        throw InvalidArgument("operator cutoff " + std::to_string(op.cutoff) +
                              " does not match state cutoff " + std::to_string(psi.cutoff()));
    }
    if (mode < 0 || mode >= psi.modes()) throw InvalidArgument("mode index out of range");
    return psi.amplitudes().dot(
        apply_to_mode(op.matrix, mode, psi.cutoff(), psi.modes(), psi.amplitudes()));
}

/// Expectation of a product operator with one factor per mode.
inline cplx expectation(const FockVector &psi, std::span<const ModeOperator> factors) {
    if (static_cast<int>(factors.size()) != psi.modes()) {
        throw InvalidArgument("need one factor per mode");
    }
    Eigen::VectorXcd v = psi.amplitudes();
    for (int m = 0; m < psi.modes(); ++m) {
        const auto &f = factors[static_cast<std::size_t>(m)];
        if (f.cutoff != psi.cutoff()) throw InvalidArgument("factor cutoff mismatch");
        v = apply_to_mode(f.matrix, m, psi.cutoff(), psi.modes(), v);
    }
    return psi.amplitudes().dot(v);
}

inline cplx expectation(const DensityMatrix &rho, const FockOperator &op) {
    if (op.cutoff != rho.cutoff() || op.modes != rho.modes()) {
        throw InvalidArgument("operator does not act on this state's space");
    }
    return (rho.matrix() * op.matrix).trace();
}

inline cplx expectation(const DensityMatrix &rho, const ModeOperator &op, int mode = 0) {
    if (op.cutoff != rho.cutoff()) throw InvalidArgument("operator cutoff mismatch");
    if (rho.modes() == 1) return (rho.matrix() * op.matrix).trace();
    return expectation(rho, embed(op, mode, rho.modes()));
}

// --- state constructors ---------------------------------------------------

/// (|N> + e^{i phase}|0>)/sqrt(2).
inline FockVector make_number_superposition(int n, double phase, int cutoff) {
    if (n < 1) throw InvalidArgument("photon number N must be >= 1, got " + std::to_string(n));
    if (cutoff < n) {
        throw InvalidArgument("cutoff " + std::to_string(cutoff) + " is below N = " +
                              std::to_string(n));
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(cutoff + 1);
    amps(0) = std::polar((1.0 / std::numbers::sqrt2), phase);
    amps(n) = (1.0 / std::numbers::sqrt2);
    return FockVector::from_amplitudes(cutoff, 1, std::move(amps));
}

/// (|N,0> + |0,N>)/sqrt(2).
inline FockVector make_noon(int n, int cutoff) {
    if (n < 1) throw InvalidArgument("photon number N must be >= 1, got " + std::to_string(n));
    if (cutoff < n) {
        throw InvalidArgument("cutoff " + std::to_string(cutoff) + " is below N = " +
                              std::to_string(n));
    }
    auto psi = FockVector::vacuum(cutoff, 2);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(psi.dimension());
    amps(psi.index_of(std::vector<int>{n, 0})) = (1.0 / std::numbers::sqrt2);
    amps(psi.index_of(std::vector<int>{0, n})) = (1.0 / std::numbers::sqrt2);
    return FockVector::from_amplitudes(cutoff, 2, std::move(amps));
}

/// Coherent-state amplitudes e^{-|a|^2/2} a^n / sqrt(n!) for n = 0..cutoff,
/// evaluated in log space, not renormalized.
inline Eigen::VectorXcd coherent_amplitudes(cplx alpha, int cutoff) {
    detail::fock_dimension(cutoff, 1);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(cutoff + 1);
    const double r = std::abs(alpha);
    if (r == 0.0) {
        amps(0) = 1.0;
        return amps;
    }
    const double lr = std::log(r);
    const double arg = std::arg(alpha);
    for (int n = 0; n <= cutoff; ++n) {
        const double logmag = -0.5 * r * r + n * lr - 0.5 * detail::log_factorial(n);
        amps(n) = std::polar(std::exp(logmag), n * arg);
    }
    return amps;
}

/// Poisson(|alpha|^2) weight strictly above `cutoff`, summed directly.
inline double coherent_tail_mass(cplx alpha, int cutoff) {
    const double mean = std::norm(alpha);
    if (mean == 0.0) return 0.0;
    const double lm = std::log(mean);
    double tail = 0.0;
    for (int n = cutoff + 1;; ++n) {
        const double term = std::exp(-mean + n * lm - detail::log_factorial(n));
        tail += term;
        if (n > mean && term < 1e-18 * (tail + 1e-300)) break;
        if (n > cutoff + 100000) break;
    }
    return tail;
}

struct CoherentVector {
    FockVector state;
    double tail_mass; ///< probability weight lost to truncation before renormalizing
};

inline CoherentVector coherent_vector(cplx alpha, int cutoff) {
    auto amps = coherent_amplitudes(alpha, cutoff);
    const double tail = coherent_tail_mass(alpha, cutoff);
    return {FockVector::normalized(cutoff, 1, std::move(amps)), tail};
}

// --- passive linear optics on two modes -----------------------------------

namespace detail {

/// One application of (u c0^dag + v c1^dag) to a fixed-total-photon state
/// stored as g[k] = amplitude of |k, t-k>.
inline std::vector<cplx> raise_sector(const std::vector<cplx> &g, cplx u, cplx v) {
    const std::size_t t = g.size() - 1;
    std::vector<cplx> out(t + 2, cplx(0.0));
    for (std::size_t k = 0; k <= t; ++k) {
        out[k + 1] += u * std::sqrt(static_cast<double>(k + 1)) * g[k];
        out[k] += v * std::sqrt(static_cast<double>(t - k + 1)) * g[k];
    }
    return out;
}

} // namespace detail

/// Output modes for the 50/50 splitter: c+ = (a1 + a2)/sqrt(2),
/// c- = (-a1 + a2)/sqrt(2). Rows are output modes, columns input modes.
inline Eigen::Matrix2cd beam_splitter_5050_matrix() {
    Eigen::Matrix2cd u;
    u << 1.0, 1.0, -1.0, 1.0;
    return u / std::numbers::sqrt2;
}

/// Re-expresses a two-mode state in the output modes c = U a of a passive
/// element. Output keeps the input cutoff; weight pushed above it is an
/// error when larger than `max_lost_mass`.
inline FockVector apply_linear_optics(const FockVector &in, const Eigen::Matrix2cd &u,
                                      double max_lost_mass = 1e-10) {
    if (in.modes() != 2) {
        throw InvalidArgument("linear optics needs a 2-mode state, got " +
                              std::to_string(in.modes()) + " modes");
    }
    if (((u * u.adjoint()) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvalidArgument("mode transformation is not unitary");
    }
    const int c = in.cutoff();
    // a_i^dag = sum_j U(j, i) c_j^dag
    const cplx u1 = u(0, 0), v1 = u(1, 0);
    const cplx u2 = u(0, 1), v2 = u(1, 1);

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(in.dimension());
    double lost = 0.0;
    for (int total = 0; total <= 2 * c; ++total) {
        std::vector<cplx> sector(static_cast<std::size_t>(total + 1), cplx(0.0));
        bool any = false;
        for (int n1 = std::max(0, total - c); n1 <= std::min(c, total); ++n1) {
            const int n2 = total - n1;
            const cplx amp = in.amplitudes()(n1 + (c + 1) * n2);
            if (amp == cplx(0.0)) continue;
            any = true;
            std::vector<cplx> g{cplx(1.0)};
            for (int m = 1; m <= n2; ++m) {
                g = detail::raise_sector(g, u2, v2);
                for (auto &x : g) x /= std::sqrt(static_cast<double>(m));
            }
            for (int m = 1; m <= n1; ++m) {
                g = detail::raise_sector(g, u1, v1);
                for (auto &x : g) x /= std::sqrt(static_cast<double>(m));
            }
            for (int k = 0; k <= total; ++k) sector[static_cast<std::size_t>(k)] += amp * g[static_cast<std::size_t>(k)];
        }
        if (!any) continue;
        for (int k = 0; k <= total; ++k) {
            const int l = total - k;
            const cplx a = sector[static_cast<std::size_t>(k)];
            if (k <= c && l <= c) {
                out(k + (c + 1) * l) = a;
            } else {
                lost += std::norm(a);
            }
        }
    }
    if (lost > max_lost_mass) {
        throw NonConvergence("linear optics pushed weight " + detail::format_double(lost) +
                                 " above cutoff " + std::to_string(c),
                             lost);
    }
    return FockVector::normalized(c, 2, std::move(out));
}

inline FockVector beam_splitter_5050(const FockVector &in) {
    return apply_linear_optics(in, beam_splitter_5050_matrix());
}

} // namespace macroreal
