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
 * Mixture-model signatures: the variance-product inequality
 *   (sum_i (Delta n)_i^2) (Delta P^N)^2 >= |<[n, P^N]>|^2 / 4
 * obeyed by every two-component mixture whose components live in the two
 * outcome bins of n, and the NOON coherence moment <a^dag^N b^N>.
 */

#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "macroreal/errors.hpp"
#include "macroreal/fock.hpp"

namespace macroreal {

/// Two-bin partition of an observable's outcomes: below the boundary is
/// bin 1 ("dead"), at or above it is bin 2 ("alive").
struct BinRule {
    std::string observable = "n";
    double boundary = 0.0;

    int bin_of(double outcome) const noexcept { return outcome < boundary ? 0 : 1; }
};

struct BinStats {
    double weight = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

/// Per-bin weight and conditional moments. An empty bin is absent, not zero.
struct BinnedStats {
    std::array<std::optional<BinStats>, 2> bins;
};

inline BinnedStats binned_conditional_stats(const std::map<double, double> &distribution,
                                            const BinRule &rule) {
    double total = 0.0;
    for (const auto &[x, p] : distribution) {
        if (p < 0.0) throw InvalidArgument("negative probability at outcome " + detail::format_double(x));
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidArgument("distribution is not normalized: deficit " +
                              detail::format_double(1.0 - total));
    }
    std::array<double, 2> w{}, s1{}, s2{};
    for (const auto &[x, p] : distribution) {
        const int b = rule.bin_of(x);
        w[b] += p;
        s1[b] += p * x;
    }
    BinnedStats out;
    for (int b = 0; b < 2; ++b) {
        if (w[b] <= 0.0) continue;
        const double mean = s1[b] / w[b];
        for (const auto &[x, p] : distribution)
            if (rule.bin_of(x) == b) s2[b] += p * (x - mean) * (x - mean);
        out.bins[b] = BinStats{w[b], mean, s2[b] / w[b]};
    }
    return out;
}

/// Photon-number distribution given as probabilities of n = 0, 1, 2, ...
inline BinnedStats binned_conditional_stats(const std::vector<double> &number_distribution,
                                            const BinRule &rule) {
    std::map<double, double> dist;
    for (std::size_t n = 0; n < number_distribution.size(); ++n) {
        if (number_distribution[n] != 0.0) dist[static_cast<double>(n)] = number_distribution[n];
    }
    return binned_conditional_stats(dist, rule);
}

struct MixtureComponent {
    double weight = 0.0;
    std::variant<FockVector, DensityMatrix> state;
};

/// Classical mixture rho = sum_i P_i rho_i over states on a common space.
class MixtureSpec {
  public:
    explicit MixtureSpec(std::vector<MixtureComponent> components)
        : components_(std::move(components)) {
        if (components_.empty()) throw InvalidArgument("mixture needs at least one component");
        double total = 0.0;
        cutoff_ = space_of(components_.front()).first;
        modes_ = space_of(components_.front()).second;
        for (const auto &c : components_) {
            if (!(c.weight >= 0.0)) throw InvalidArgument("mixture weights must be nonnegative");
            total += c.weight;
            if (space_of(c) != std::pair{cutoff_, modes_}) {
                throw InvalidArgument("mixture components live on different spaces");
            }
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw InvalidArgument("mixture weights sum to " + detail::format_double(total));
        }
    }

    const std::vector<MixtureComponent> &components() const noexcept { return components_; }
    int cutoff() const noexcept { return cutoff_; }
    int modes() const noexcept { return modes_; }

    DensityMatrix density() const {
        const Eigen::Index dim = detail::fock_dimension(cutoff_, modes_);
        Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
        for (const auto &c : components_) rho += c.weight * density_of(c).matrix();
        // Re-symmetrize so validation sees an exactly Hermitian matrix.
        rho = 0.5 * (rho + rho.adjoint()).eval();
        return DensityMatrix::from_matrix(cutoff_, modes_, std::move(rho));
    }

    static DensityMatrix density_of(const MixtureComponent &c) {
        if (const auto *psi = std::get_if<FockVector>(&c.state)) return DensityMatrix::pure(*psi);
        return std::get<DensityMatrix>(c.state);
    }

  private:
    static std::pair<int, int> space_of(const MixtureComponent &c) {
        return std::visit([](const auto &s) { return std::pair{s.cutoff(), s.modes()}; }, c.state);
    }

    std::vector<MixtureComponent> components_;
    int cutoff_ = 0;
    int modes_ = 1;
};

template <typename Op>
cplx mixture_expectation(const MixtureSpec &spec, const Op &op) {
    cplx total(0.0);
    for (const auto &c : spec.components()) {
        total += c.weight * std::visit([&](const auto &s) { return expectation(s, op); }, c.state);
    }
    return total;
}

struct TypeIReport {
    double within_bin_variance_sum = 0.0; ///< sum_i (Delta n)_i^2 over present bins
    double weighted_variant = 0.0;        ///< sum_i P_i (Delta n)_i^2
    double var_PN = 0.0;                  ///< (Delta P^N)^2
    cplx commutator_mean{0.0, 0.0};       ///< <[n, P^N]>
    double lhs = 0.0;
    double lhs_weighted = 0.0;
    double rhs = 0.0;
    bool violated = false;
    BinnedStats bins;
    int working_cutoff = 0;
    double tail_mass = 0.0;
};

namespace detail {

inline int density_support(const DensityMatrix &rho, double eps = 1e-15) {
    const auto p = rho.number_distribution(0);
    for (int n = static_cast<int>(p.size()) - 1; n > 0; --n)
        if (p[static_cast<std::size_t>(n)] > eps) return n;
    return 0;
}

} // namespace detail

/// Evaluates the variance-product inequality for a single-mode state.
///
/// P^N is built by matrix powers at cutoff support + headroom; when P^N
/// applied to the state leaks above that cutoff by more than 1e-12 of its
/// weight the call fails with NonConvergence carrying the leaked fraction.
inline TypeIReport type_one_statistic(const DensityMatrix &rho, const BinRule &rule, int power,
                                      int headroom) {
    if (rho.modes() != 1) throw InvalidArgument("type I statistic needs a single-mode state");
    if (power < 1) throw InvalidArgument("power N must be >= 1");
    if (headroom < 0) throw InvalidArgument("headroom must be >= 0");

    TypeIReport report;
    report.bins = binned_conditional_stats(rho.number_distribution(0), rule);
    for (const auto &bin : report.bins.bins) {
        if (!bin) continue;
        report.within_bin_variance_sum += bin->variance;
        report.weighted_variant += bin->weight * bin->variance;
    }

    const int support = detail::density_support(rho);
    const int exact = support + std::max(headroom, power);
    report.working_cutoff = support + headroom;

    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(exact + 1, exact + 1);
    r.topLeftCorner(support + 1, support + 1) = rho.matrix().topLeftCorner(support + 1, support + 1);
    const Eigen::MatrixXcd pn = ops::amplitude_P(exact).power(power).matrix;

    const Eigen::MatrixXcd pushed = pn * r * pn.adjoint();
    const double pushed_total = pushed.trace().real();
    double leaked = 0.0;
    for (int n = report.working_cutoff + 1; n <= exact; ++n) leaked += pushed(n, n).real();
    report.tail_mass = pushed_total > 0.0 ? leaked / pushed_total : 0.0;
    if (report.tail_mass > 1e-12) {
        throw NonConvergence("P^" + std::to_string(power) + " needs more headroom than " +
                                 std::to_string(headroom) + ": tail mass " +
                                 detail::format_double(report.tail_mass),
                             report.tail_mass);
    }

    const double mean_pn = (r * pn).trace().real();
    report.var_PN = pushed_total - mean_pn * mean_pn;
    const Eigen::MatrixXcd n_op = ops::number(exact).matrix;
    report.commutator_mean = (r * (n_op * pn - pn * n_op)).trace();

    report.lhs = report.within_bin_variance_sum * report.var_PN;
    report.lhs_weighted = report.weighted_variant * report.var_PN;
    report.rhs = 0.25 * std::norm(report.commutator_mean);
    report.violated = report.lhs < report.rhs - 1e-12;
    return report;
}

inline TypeIReport type_one_statistic(const FockVector &psi, const BinRule &rule, int power,
                                      int headroom) {
    return type_one_statistic(DensityMatrix::pure(psi), rule, power, headroom);
}

inline TypeIReport type_one_statistic(const MixtureSpec &spec, const BinRule &rule, int power,
                                      int headroom) {
    return type_one_statistic(spec.density(), rule, power, headroom);
}

/// a^dag^N b^N on a two-mode space (mode 0 is a, mode 1 is b).
inline FockOperator noon_operator(int cutoff, int n) {
    if (n < 1) throw InvalidArgument("N must be >= 1");
    if (cutoff < n) {
        throw NonConvergence("cutoff " + std::to_string(cutoff) + " cannot hold N = " +
                                 std::to_string(n) + " photons",
                             1.0);
    }
    const std::array<ModeOperator, 2> factors{ops::creation(cutoff).power(n),
                                              ops::annihilation(cutoff).power(n)};
    return tensor(factors);
}

/// <a^dag^N b^N> by sparse ladder application.
inline cplx noon_moment(const FockVector &psi, int n) {
    if (psi.modes() != 2) throw InvalidArgument("NOON moment needs a 2-mode state");
    if (n < 1) throw InvalidArgument("N must be >= 1");
    const int c = psi.cutoff();
    if (c < n) {
        throw NonConvergence("cutoff " + std::to_string(c) + " cannot hold N = " +
                                 std::to_string(n) + " photons",
                             1.0);
    }
    const auto &amps = psi.amplitudes();
    cplx total(0.0);
    for (int na = 0; na + n <= c; ++na) {
        for (int nb = n; nb <= c; ++nb) {
            const cplx ket = amps(na + (c + 1) * nb);
            if (ket == cplx(0.0)) continue;
            // b^N |nb> = sqrt(nb!/(nb-N)!) |nb-N>,  a^dag^N |na> = sqrt((na+N)!/na!) |na+N>
            const double coeff = std::exp(0.5 * (detail::log_factorial(nb) - detail::log_factorial(nb - n) +
                                                 detail::log_factorial(na + n) - detail::log_factorial(na)));
            const cplx bra = amps((na + n) + (c + 1) * (nb - n));
            total += std::conj(bra) * coeff * ket;
        }
    }
    return total;
}

inline cplx noon_moment(const DensityMatrix &rho, int n) {
    if (rho.modes() != 2) throw InvalidArgument("NOON moment needs a 2-mode state");
    return expectation(rho, noon_operator(rho.cutoff(), n));
}

inline cplx noon_moment(const MixtureSpec &spec, int n) {
    if (spec.modes() != 2) throw InvalidArgument("NOON moment needs a 2-mode state");
    return mixture_expectation(spec, noon_operator(spec.cutoff(), n));
}

} // namespace macroreal
