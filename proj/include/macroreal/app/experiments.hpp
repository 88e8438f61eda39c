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
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "macroreal/app/config.hpp"
#include "macroreal/app/csv.hpp"
#include "macroreal/macroreal.hpp"

namespace macroreal::app {

enum ExitCode : int { kExitOk = 0, kExitInvalidConfig = 1, kExitNonConvergence = 2 };

/// Runs task(i) for i in [0, n) on `threads` workers. Results come back in
/// index order; the lowest-index failure is rethrown.
template <typename R>
std::vector<R> ordered_map(std::size_t n, int threads, const std::function<R(std::size_t)> &task) {
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i] = task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto count = static_cast<std::size_t>(std::max(1, threads));
    if (count == 1 || n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < std::min(count, n); ++t) pool.emplace_back(worker);
    }
    for (const auto &e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(n);
    for (auto &s : slots) out.push_back(std::move(*s));
    return out;
}

struct RunResult {
    Table table;
    std::string summary;
    /// Result columns compared by verify; bookkeeping columns are not gated.
    std::vector<std::string> gated;
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline RunResult run_typeone(const TypeOneParams &p, int scale, int threads) {
    const std::vector<std::string> header{"N", "phase", "cutoff", "lhs", "rhs", "lhs_weighted", "violated"};
    struct Point {
        int n;
        double phase;
    };
    std::vector<Point> grid;
    for (int n : p.N)
        for (double ph : p.phase) grid.push_back({n, ph});
    const int cutoff = p.cutoff * scale;
    auto reports = ordered_map<TypeIReport>(grid.size(), threads, [&](std::size_t i) {
        const auto [n, ph] = grid[i];
        const int headroom = p.headroom.value_or(2 * n) * scale;
        const BinRule rule{"n", p.boundary.value_or(0.5 * n)};
        return type_one_statistic(make_number_superposition(n, ph, cutoff), rule, n, headroom);
    });
    Table t;
    t.header = header;
    int violations = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto &r = reports[i];
        violations += r.violated;
        t.rows.push_back(RowBuilder(header)
                             .integer(grid[i].n)
                             .num(grid[i].phase)
                             .integer(cutoff)
                             .num(r.lhs)
                             .num(r.rhs)
                             .num(r.lhs_weighted)
                             .flag(r.violated)
                             .done());
    }
    return {std::move(t),
            "typeone: " + std::to_string(grid.size()) + " rows; violations: " + std::to_string(violations) +
                "; any violation: " + (violations ? "yes" : "no"),
            {"lhs", "rhs", "lhs_weighted"}};
}

inline RunResult run_noon(const NoonParams &p, int scale, int threads) {
    const std::vector<std::string> header{"N", "moment_re", "moment_im"};
    auto moments = ordered_map<cplx>(p.N.size(), threads, [&](std::size_t i) {
        const int n = p.N[i];
        const int cutoff = p.cutoff.value_or(n) * scale;
        const FockVector noon = make_noon(n, cutoff);
        if (p.state == "noon") return noon_moment(noon, n);
        const auto basis = [&](int na, int nb) {
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(macroreal::detail::fock_dimension(cutoff, 2));
            v(na + (cutoff + 1) * nb) = 1.0;
            return FockVector::from_amplitudes(cutoff, 2, std::move(v));
        };
        return noon_moment(MixtureSpec({{0.5, basis(n, 0)}, {0.5, basis(0, n)}}), n);
    });
    Table t;
    t.header = header;
    double largest = 0.0;
    for (std::size_t i = 0; i < p.N.size(); ++i) {
        largest = std::max(largest, std::abs(moments[i]));
        t.rows.push_back(RowBuilder(header).integer(p.N[i]).num(moments[i].real()).num(moments[i].imag()).done());
    }
    return {std::move(t),
            "noon: " + std::to_string(p.N.size()) + " rows; max |moment| = " + fmt(largest) +
                "; coherence detected: " + (largest > 1e-12 ? "yes" : "no"),
            {"moment_re", "moment_im"}};
}

inline RunResult run_svetlichny(const SvetlichnyParams &p, int threads) {
    const std::vector<std::string> header{"N", "k", "quantum_value", "hybrid_bound", "violated"};
    std::vector<std::pair<int, int>> grid;
    for (int n : p.N) {
        switch (p.k_mode) {
        case SvetlichnyParams::KMode::Half: grid.emplace_back(n, std::max(1, n / 2)); break;
        case SvetlichnyParams::KMode::Fixed: grid.emplace_back(n, p.k); break;
        case SvetlichnyParams::KMode::All:
            for (int k = 1; k < n; ++k) grid.emplace_back(n, k);
            break;
        }
    }
    auto reports = ordered_map<SvetlichnyReport>(grid.size(), threads, [&](std::size_t i) {
        return svetlichny_report(grid[i].first, grid[i].second);
    });
    Table t;
    t.header = header;
    double best_ratio = 0.0;
    bool any = false;
    for (const auto &r : reports) {
        any = any || r.violated;
        best_ratio = std::max(best_ratio, r.quantum_value / r.hybrid_bound);
        t.rows.push_back(RowBuilder(header)
                             .integer(r.n_sites)
                             .integer(r.k)
                             .num(r.quantum_value)
                             .num(r.hybrid_bound)
                             .flag(r.violated)
                             .done());
    }
    return {std::move(t),
            "svetlichny: " + std::to_string(grid.size()) + " rows; max quantum/bound = " + fmt(best_ratio) +
                "; any violation: " + (any ? "yes" : "no"),
            {"quantum_value", "hybrid_bound"}};
}

/// Effective cutoffs for one alpha at the given scale.
inline int ancilla_cutoff_for(const MlrParams &p, double alpha, int scale) {
    if (alpha == 0.0) return 0;
    return p.cutoff_ancilla.value_or(recommended_ancilla_cutoff(alpha)) * scale;
}

inline ChshAngles mlr_angles(const MlrParams &p, const SchmidtDiagonalState &state, int scale) {
    if (p.angles) return p.angles->normalized();
    return optimize_chsh(state, p.grid_resolution * scale, p.refine_tol).angles;
}

inline RunResult run_mlr_chsh(const MlrParams &p, int scale, int threads) {
    const std::vector<std::string> header{"r0",   "alpha", "theta", "theta_p", "phi", "phi_p", "K_tp",
                                          "K_tpp", "K_tpt", "K_tptp", "E", "cutoff_signal",
                                          "cutoff_ancilla", "converged"};
    const int ns = p.cutoff_signal * scale;
    const SchmidtDiagonalState state = pair_coherent(p.r0, ns);
    const ChshAngles angles = mlr_angles(p, state, scale);
    auto reports = ordered_map<BellReport>(p.alpha.size(), threads, [&](std::size_t i) {
        const double alpha = p.alpha[i];
        if (alpha == 0.0) return chsh_E(state, angles);
        return amplified_chsh(state, alpha, angles, ns, ancilla_cutoff_for(p, alpha, scale));
    });
    Table t;
    t.header = header;
    double best = -1e300;
    double best_alpha = 0.0;
    for (std::size_t i = 0; i < p.alpha.size(); ++i) {
        const auto &r = reports[i];
        if (*r.E > best) {
            best = *r.E;
            best_alpha = p.alpha[i];
        }
        t.rows.push_back(RowBuilder(header)
                             .num(p.r0)
                             .num(p.alpha[i])
                             .num(r.angles.theta)
                             .num(r.angles.theta_p)
                             .num(r.angles.phi)
                             .num(r.angles.phi_p)
                             .num(r.K[0])
                             .num(r.K[1])
                             .num(r.K[2])
                             .num(r.K[3])
                             .num(*r.E)
                             .integer(ns)
                             .integer(ancilla_cutoff_for(p, p.alpha[i], scale))
                             .flag(r.convergence.converged)
                             .done());
    }
    return {std::move(t),
            "mlr-chsh: " + std::to_string(p.alpha.size()) + " rows; max E = " + fmt(best) + " (alpha = " +
                fmt(best_alpha) + "); violation: " + (best > 2.0 ? "yes" : "no"),
            {"K_tp", "K_tpp", "K_tpt", "K_tptp", "E"}};
}

inline RunResult run_mlr_sweep(const MlrParams &p, int scale, int threads) {
    const std::vector<std::string> header{"r0", "alpha", "delta", "E", "E_delta", "P0_max", "violated_delta"};
    const int ns = p.cutoff_signal * scale;
    const SchmidtDiagonalState state = pair_coherent(p.r0, ns);
    const ChshAngles angles = mlr_angles(p, state, scale);
    // One task per alpha; its rows cover every delta in order.
    auto groups = ordered_map<std::vector<BellReport>>(p.alpha.size(), threads, [&](std::size_t i) {
        const double alpha = p.alpha[i];
        std::vector<BellReport> out;
        if (alpha == 0.0) {
            const HermiteBasisCache basis(state.cutoff());
            for (double d : p.delta) out.push_back(chsh_with_regions(state, angles, RegionBinning(d), basis));
        } else {
            const auto dists = amplified_distributions(state, alpha, angles, ns, ancilla_cutoff_for(p, alpha, scale));
            for (double d : p.delta) out.push_back(amplified_report(dists, angles, RegionBinning(d)));
        }
        return out;
    });
    Table t;
    t.header = header;
    double best_e = -1e300;
    double best_ed = -1e300;
    bool any = false;
    for (std::size_t i = 0; i < p.alpha.size(); ++i) {
        for (std::size_t j = 0; j < p.delta.size(); ++j) {
            const auto &r = groups[i][j];
            best_e = std::max(best_e, *r.E);
            best_ed = std::max(best_ed, *r.E_delta);
            any = any || r.violated_delta();
            t.rows.push_back(RowBuilder(header)
                                 .num(p.r0)
                                 .num(p.alpha[i])
                                 .num(p.delta[j])
                                 .num(*r.E)
                                 .num(*r.E_delta)
                                 .num(r.p0_max())
                                 .flag(r.violated_delta())
                                 .done());
        }
    }
    const std::size_t rows = t.rows.size();
    return {std::move(t),
            "mlr-sweep: " + std::to_string(rows) + " rows; max E = " + fmt(best_e) +
                "; max E_delta = " + fmt(best_ed) + "; any E_delta violation: " + (any ? "yes" : "no"),
            {"E", "E_delta", "P0_max"}};
}

} // namespace detail

inline RunResult run_experiment(const RunConfig &cfg, int threads = 1) {
    const int s = cfg.scale;
    return std::visit(
        [&](const auto &p) -> RunResult {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, TypeOneParams>) return detail::run_typeone(p, s, threads);
            else if constexpr (std::is_same_v<P, NoonParams>) return detail::run_noon(p, s, threads);
            else if constexpr (std::is_same_v<P, SvetlichnyParams>) return detail::run_svetlichny(p, threads);
            else if (cfg.experiment == "mlr-sweep") return detail::run_mlr_sweep(p, s, threads);
            else return detail::run_mlr_chsh(p, s, threads);
        },
        cfg.params);
}

struct ColumnDrift {
    std::string column;
    double max_drift = 0.0; ///< max |base - doubled|; 0 for identical text cells
    bool gated = false;
    bool text_changed = false;
};

struct VerifyResult {
    RunResult base;
    RunResult doubled;
    std::vector<ColumnDrift> drift;
    bool passed = true;
};

/// Re-runs with every cutoff and grid doubled and compares column by column.
inline VerifyResult verify_experiment(const RunConfig &cfg, int threads = 1) {
    VerifyResult v;
    v.base = run_experiment(cfg, threads);
    RunConfig twice = cfg;
    twice.scale = 2 * cfg.scale;
    v.doubled = run_experiment(twice, threads);
    const Table &a = v.base.table;
    const Table &b = v.doubled.table;
    if (a.rows.size() != b.rows.size()) throw std::logic_error("row count changed under doubling");
    const std::set<std::string> gated(v.base.gated.begin(), v.base.gated.end());
    for (std::size_t c = 0; c < a.header.size(); ++c) {
        ColumnDrift d{a.header[c], 0.0, gated.contains(a.header[c]), false};
        for (std::size_t r = 0; r < a.rows.size(); ++r) {
            const std::string &x = a.rows[r][c];
            const std::string &y = b.rows[r][c];
            if (x == y) continue;
            try {
                d.max_drift = std::max(d.max_drift, std::abs(std::stod(x) - std::stod(y)));
            } catch (const std::exception &) {
                d.text_changed = true;
            }
        }
        if (d.gated && (d.max_drift > cfg.verify_tolerance || d.text_changed)) v.passed = false;
        v.drift.push_back(d);
    }
    return v;
}

} // namespace macroreal::app
