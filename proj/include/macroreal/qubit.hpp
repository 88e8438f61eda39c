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
 * Dense N-qubit registers, GHZ states and the Svetlichny operator
 * Pi_N = prod_j F_j, together with the bound obeyed by models that are
 * local across a single bipartition C|S.
 *
 * Bit k of a basis index is site k; bit value 0 is spin up (sigma_Z = +1).
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "macroreal/errors.hpp"

namespace macroreal {

using cplx = std::complex<double>;

inline constexpr int kMaxDenseSites = 14;

class QubitRegisterState {
  public:
    static QubitRegisterState all_up(int n_sites) {
        check_sites(n_sites);
        Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_sites);
        amps(0) = 1.0;
        return QubitRegisterState(n_sites, std::move(amps));
    }

    static QubitRegisterState from_amplitudes(int n_sites, Eigen::VectorXcd amps) {
        check_sites(n_sites);
        if (amps.size() != (Eigen::Index{1} << n_sites)) {
            throw InvalidArgument("amplitude array length does not match 2^N");
        }
        if (std::abs(amps.squaredNorm() - 1.0) > 1e-12) {
            throw InvalidArgument("qubit register amplitudes are not normalized");
        }
        return QubitRegisterState(n_sites, std::move(amps));
    }

    int n_sites() const noexcept { return n_sites_; }
    const Eigen::VectorXcd &amplitudes() const noexcept { return amps_; }

  private:
    QubitRegisterState(int n, Eigen::VectorXcd amps) : n_sites_(n), amps_(std::move(amps)) {}

    static void check_sites(int n) {
        if (n < 2 || n > kMaxDenseSites) {
            throw InvalidArgument("site count " + std::to_string(n) + " outside [2, " +
                                  std::to_string(kMaxDenseSites) + "]");
        }
    }

    int n_sites_;
    Eigen::VectorXcd amps_;
};

/// sigma_theta = sigma_X cos(theta) + sigma_Y sin(theta) at one site.
struct SiteSetting {
    int site = 0;
    double angle = 0.0;
};

/// (|up...up> - |down...down>)/sqrt(2).
inline QubitRegisterState make_ghz(int n_sites) {
    if (n_sites < 2 || n_sites > kMaxDenseSites) {
        throw InvalidArgument("GHZ site count " + std::to_string(n_sites) + " outside [2, " +
                              std::to_string(kMaxDenseSites) + "]");
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_sites);
    amps(0) = (1.0 / std::numbers::sqrt2);
    amps(amps.size() - 1) = -(1.0 / std::numbers::sqrt2);
    return QubitRegisterState::from_amplitudes(n_sites, std::move(amps));
}

inline Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

inline Eigen::Matrix2cd pauli_y() {
    Eigen::Matrix2cd m;
    m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    return m;
}

inline Eigen::Matrix2cd sigma_theta(double theta) {
    return pauli_x() * std::cos(theta) + pauli_y() * std::sin(theta);
}

/// Applies a 2x2 matrix to one site of a dense register amplitude array.
inline Eigen::VectorXcd apply_site(const Eigen::Matrix2cd &op, int site, const Eigen::VectorXcd &v) {
    const Eigen::Index mask = Eigen::Index{1} << site;
    Eigen::VectorXcd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i & mask) continue;
        const cplx lo = v(i);
        const cplx hi = v(i | mask);
        out(i) = op(0, 0) * lo + op(0, 1) * hi;
        out(i | mask) = op(1, 0) * lo + op(1, 1) * hi;
    }
    return out;
}

/// First angle of F_N = sigma_{t} + i sigma_{t + pi/2} at the last site.
/// See svetlichny_expectation for why this is 3pi/4 rather than pi/4.
inline constexpr double kSvetlichnyLastSiteAngle = 3.0 * std::numbers::pi / 4.0;

/// <psi| Pi_N |psi> with F_j = sigma_X + i sigma_Y for j < N and
/// F_N = sigma_{t} + i sigma_{t + pi/2}.
///
/// With the minus-sign GHZ state, t = pi/4 puts <Pi_N> at phase 3pi/4 where
/// Re + Im vanishes; t = 3pi/4 rotates it onto pi/4 where Re + Im = 2^{N-1/2}.
inline cplx svetlichny_expectation(const QubitRegisterState &psi,
                                   double last_site_angle = kSvetlichnyLastSiteAngle) {
    const int n = psi.n_sites();
    const cplx i(0.0, 1.0);
    const Eigen::Matrix2cd f = pauli_x() + i * pauli_y();
    const Eigen::Matrix2cd f_last =
        sigma_theta(last_site_angle) + i * sigma_theta(last_site_angle + std::numbers::pi / 2.0);
    Eigen::VectorXcd v = psi.amplitudes();
    for (int site = 0; site < n; ++site) v = apply_site(site == n - 1 ? f_last : f, site, v);
    return psi.amplitudes().dot(v);
}

/// <Re Pi_N> + <Im Pi_N>.
inline double svetlichny_value(const QubitRegisterState &psi,
                               double last_site_angle = kSvetlichnyLastSiteAngle) {
    const cplx e = svetlichny_expectation(psi, last_site_angle);
    return e.real() + e.imag();
}

/// Largest value of Re(C S) + Im(C S) when C and S are confined to the boxes
/// |Re C|, |Im C| <= 2^{N-k-1} and |Re S|, |Im S| <= 2^{k-1}.
///
/// The objective is bilinear, so its maximum over the product of boxes sits
/// on one of the 16 vertices; hidden-variable mixtures cannot exceed it.
inline double hybrid_bound(int n_sites, int k) {
    if (n_sites < 2) throw InvalidArgument("N must be >= 2");
    if (k < 1 || k > n_sites - 1) {
        throw InvalidArgument("bipartition k = " + std::to_string(k) + " outside [1, " +
                              std::to_string(n_sites - 1) + "]");
    }
    const double c_box = std::ldexp(1.0, n_sites - k - 1);
    const double s_box = std::ldexp(1.0, k - 1);
    double best = -std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < 16; ++mask) {
        const double re_c = (mask & 1 ? 1.0 : -1.0) * c_box;
        const double im_c = (mask & 2 ? 1.0 : -1.0) * c_box;
        const double re_s = (mask & 4 ? 1.0 : -1.0) * s_box;
        const double im_s = (mask & 8 ? 1.0 : -1.0) * s_box;
        const double value = re_c * re_s - im_c * im_s + re_c * im_s + im_c * re_s;
        best = std::max(best, value);
    }
    return best;
}

struct SvetlichnyReport {
    int n_sites = 0;
    int k = 0;
    double quantum_value = 0.0;
    double hybrid_bound = 0.0;
    bool violated = false;
    bool computed = true; ///< false when reported from the closed forms
};

inline SvetlichnyReport make_svetlichny_report(int n_sites, int k, double quantum, double bound,
                                               bool computed) {
    return {n_sites, k, quantum, bound, quantum > bound + 1e-9, computed};
}

/// GHZ Svetlichny test across the bipartition with k sites on S. Dense
/// simulation up to kMaxDenseSites, closed forms 2^{N-1/2} and 2^{N-1} beyond.
inline SvetlichnyReport svetlichny_report(int n_sites, int k) {
    const double bound = hybrid_bound(n_sites, k);
    if (n_sites <= kMaxDenseSites) {
        return make_svetlichny_report(n_sites, k, svetlichny_value(make_ghz(n_sites)), bound, true);
    }
    return make_svetlichny_report(n_sites, k, std::pow(2.0, n_sites - 0.5), bound, false);
}

/// Distribution of the collective sigma_Z (sum over the listed sites).
inline std::map<int, double> collective_sz_distribution(const QubitRegisterState &psi,
                                                        const std::vector<int> &sites) {
    std::map<int, double> dist;
    const auto &a = psi.amplitudes();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double p = std::norm(a(i));
        if (p == 0.0) continue;
        int sz = 0;
        for (int s : sites) sz += (i >> s) & 1 ? -1 : 1;
        dist[sz] += p;
    }
    return dist;
}

/// P(collective sigma_Z of C = N-k | collective sigma_Z of S = k) with S the
/// last k sites and C the first N-k.
inline double bipartition_inference_check(const QubitRegisterState &psi, int k) {
    const int n = psi.n_sites();
    if (k < 1 || k > n - 1) {
        throw InvalidArgument("bipartition k = " + std::to_string(k) + " outside [1, " +
                              std::to_string(n - 1) + "]");
    }
    const Eigen::Index s_mask = ((Eigen::Index{1} << k) - 1) << (n - k);
    const Eigen::Index c_mask = (Eigen::Index{1} << (n - k)) - 1;
    double p_s = 0.0;
    double p_joint = 0.0;
    const auto &a = psi.amplitudes();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (i & s_mask) continue; // S not all up
        const double p = std::norm(a(i));
        p_s += p;
        if ((i & c_mask) == 0) p_joint += p;
    }
    if (p_s == 0.0) throw InvalidArgument("conditioning event has zero probability");
    return p_joint / p_s;
}

inline double bipartition_inference_check(int n_sites, int k) {
    return bipartition_inference_check(make_ghz(n_sites), k);
}

} // namespace macroreal
