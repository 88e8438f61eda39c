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
 * JSON run configurations. Every experiment reads a flat object:
 *
 *   { "experiment": "mlr-sweep", "r0": 1.1, "alpha": [2, 4], "delta": [0, 1],
 *     "output": "sweep.csv" }
 *
 * Angles are in radians. Unknown keys and out-of-range values are rejected
 * before anything is computed.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "macroreal/bell.hpp"

namespace macroreal::app {

using json = nlohmann::json;

/// Invalid configuration; `key()` names the offending entry.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string key, const std::string &what)
        : std::runtime_error("config key '" + key + "': " + what), key_(std::move(key)) {}
    const std::string &key() const noexcept { return key_; }

  private:
    std::string key_;
};

inline const std::vector<std::string> &experiment_names() {
    static const std::vector<std::string> names{"typeone", "noon", "svetlichny", "mlr-chsh", "mlr-sweep"};
    return names;
}

struct TypeOneParams {
    std::vector<int> N;
    std::vector<double> phase{0.0};
    int cutoff = 0;
    std::optional<int> headroom; ///< default 2N
    std::optional<double> boundary; ///< default N/2
};

struct NoonParams {
    std::vector<int> N;
    std::optional<int> cutoff; ///< default N
    std::string state = "noon"; ///< or "mixture"
};

struct SvetlichnyParams {
    enum class KMode { Half, Fixed, All };
    std::vector<int> N;
    KMode k_mode = KMode::Half;
    int k = 0;
};

struct MlrParams {
    double r0 = kDefaultPairCoherentR0;
    std::vector<double> alpha{0.0};
    std::vector<double> delta{0.0};
    std::optional<ChshAngles> angles;
    int cutoff_signal = 30;
    std::optional<int> cutoff_ancilla; ///< default ceil((alpha + 3)^2)
    int grid_resolution = 24;
    double refine_tol = 1e-9;
};

struct RunConfig {
    std::string experiment;
    std::optional<std::string> output;
    long long seed = 0;
    double verify_tolerance = 1e-3;
    /// Multiplies every cutoff and grid size; verify runs at 2.
    int scale = 1;
    std::variant<TypeOneParams, NoonParams, SvetlichnyParams, MlrParams> params;
};

namespace detail {

class KeyReader {
  public:
    explicit KeyReader(const json &obj) : obj_(obj) {}

    bool has(const std::string &key) const { return obj_.contains(key); }

    const json &raw(const std::string &key) {
        used_.insert(key);
        return obj_.at(key);
    }

    std::optional<double> number(const std::string &key, double lo, double hi) {
        if (!has(key)) return std::nullopt;
        return check_number(key, raw(key), lo, hi);
    }

    std::optional<int> integer(const std::string &key, int lo, int hi) {
        if (!has(key)) return std::nullopt;
        return check_integer(key, raw(key), lo, hi);
    }

    std::optional<std::string> string(const std::string &key) {
        if (!has(key)) return std::nullopt;
        const json &v = raw(key);
        if (!v.is_string()) throw ConfigError(key, "expected a string");
        return v.get<std::string>();
    }

    /// Accepts a scalar or a non-empty array.
    std::optional<std::vector<double>> numbers(const std::string &key, double lo, double hi) {
        if (!has(key)) return std::nullopt;
        std::vector<double> out;
        for (const json &v : as_list(key)) out.push_back(check_number(key, v, lo, hi));
        return out;
    }

    std::optional<std::vector<int>> integers(const std::string &key, int lo, int hi) {
        if (!has(key)) return std::nullopt;
        std::vector<int> out;
        for (const json &v : as_list(key)) out.push_back(check_integer(key, v, lo, hi));
        return out;
    }

    void reject_unknown() const {
        for (const auto &[key, value] : obj_.items())
            if (!used_.contains(key)) throw ConfigError(key, "unknown key");
    }

  private:
    std::vector<json> as_list(const std::string &key) {
        const json &v = raw(key);
        if (v.is_array()) {
            if (v.empty()) throw ConfigError(key, "list must not be empty");
            return v.get<std::vector<json>>();
        }
        return {v};
    }

    static double check_number(const std::string &key, const json &v, double lo, double hi) {
        if (!v.is_number()) throw ConfigError(key, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x) || x < lo || x > hi) {
            throw ConfigError(key, "value " + macroreal::detail::format_double(x) + " outside [" +
                                       macroreal::detail::format_double(lo) + ", " +
                                       macroreal::detail::format_double(hi) + "]");
        }
        return x;
    }

    static int check_integer(const std::string &key, const json &v, int lo, int hi) {
        if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
        const long long x = v.get<long long>();
        if (x < lo || x > hi) {
            throw ConfigError(key, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                                       std::to_string(hi) + "]");
        }
        return static_cast<int>(x);
    }

    const json &obj_;
    std::set<std::string> used_;
};

inline int max_of(const std::vector<int> &v) {
    int m = std::numeric_limits<int>::min();
    for (int x : v) m = std::max(m, x);
    return m;
}

inline TypeOneParams parse_typeone(KeyReader &r) {
    TypeOneParams p;
    if (!r.has("N")) throw ConfigError("N", "required");
    p.N = *r.integers("N", 1, 64);
    if (auto v = r.numbers("phase", -1e6, 1e6)) p.phase = *v;
    if (!r.has("cutoff")) throw ConfigError("cutoff", "required");
    p.cutoff = *r.integer("cutoff", 0, 2000);
    if (p.cutoff < max_of(p.N)) {
        throw ConfigError("cutoff", "cutoff " + std::to_string(p.cutoff) + " is below N = " +
                                        std::to_string(max_of(p.N)));
    }
    p.headroom = r.integer("headroom", 0, 2000);
    p.boundary = r.number("boundary", -1e6, 1e6);
    return p;
}

inline NoonParams parse_noon(KeyReader &r) {
    NoonParams p;
    if (!r.has("N")) throw ConfigError("N", "required");
    p.N = *r.integers("N", 1, 20);
    p.cutoff = r.integer("cutoff", 1, 60);
    if (p.cutoff && *p.cutoff < max_of(p.N)) {
        throw ConfigError("cutoff", "cutoff " + std::to_string(*p.cutoff) + " is below N = " +
                                        std::to_string(max_of(p.N)));
    }
    if (auto s = r.string("state")) {
        if (*s != "noon" && *s != "mixture") throw ConfigError("state", "expected \"noon\" or \"mixture\"");
        p.state = *s;
    }
    return p;
}

inline SvetlichnyParams parse_svetlichny(KeyReader &r) {
    SvetlichnyParams p;
    if (!r.has("N")) throw ConfigError("N", "required");
    p.N = *r.integers("N", 2, 60);
    if (r.has("k")) {
        const json &k = r.raw("k");
        if (k.is_string()) {
            if (k.get<std::string>() != "all") throw ConfigError("k", "expected an integer or \"all\"");
            p.k_mode = SvetlichnyParams::KMode::All;
        } else if (k.is_number_integer()) {
            p.k_mode = SvetlichnyParams::KMode::Fixed;
            p.k = k.get<int>();
            for (int n : p.N) {
                if (p.k < 1 || p.k > n - 1) {
                    throw ConfigError("k", "k = " + std::to_string(p.k) + " is outside [1, " +
                                               std::to_string(n - 1) + "] for N = " + std::to_string(n));
                }
            }
        } else {
            throw ConfigError("k", "expected an integer or \"all\"");
        }
    }
    return p;
}

inline MlrParams parse_mlr(KeyReader &r, bool sweep) {
    MlrParams p;
    if (auto v = r.number("r0", 1e-6, 5.0)) p.r0 = *v;
    if (auto v = r.numbers("alpha", 0.0, 20.0)) p.alpha = *v;
    if (sweep) {
        if (auto v = r.numbers("delta", 0.0, 1e6)) p.delta = *v;
    }
    if (r.has("angles")) {
        const json &a = r.raw("angles");
        if (!a.is_object()) throw ConfigError("angles", "expected an object with theta, theta_p, phi, phi_p");
        KeyReader ar(a);
        ChshAngles angles;
        const char *names[] = {"theta", "theta_p", "phi", "phi_p"};
        double *slots[] = {&angles.theta, &angles.theta_p, &angles.phi, &angles.phi_p};
        for (int i = 0; i < 4; ++i) {
            const std::string key = names[i];
            if (!ar.has(key)) throw ConfigError("angles." + key, "required");
            try {
                *slots[i] = *ar.number(key, -1e3, 1e3);
            } catch (const ConfigError &e) {
                throw ConfigError("angles." + key, e.what());
            }
        }
        try {
            ar.reject_unknown();
        } catch (const ConfigError &e) {
            throw ConfigError("angles." + e.key(), "unknown key");
        }
        p.angles = angles;
    }
    if (auto v = r.integer("cutoff_signal", 1, 200)) p.cutoff_signal = *v;
    p.cutoff_ancilla = r.integer("cutoff_ancilla", 0, 1000);
    if (auto v = r.integer("grid_resolution", 1, 400)) p.grid_resolution = *v;
    if (auto v = r.number("refine_tol", 1e-15, 0.1)) p.refine_tol = *v;
    return p;
}

} // namespace detail

/// Validates a parsed JSON document. `expected` (if non-empty) must match
/// the document's experiment.
inline RunConfig parse_config(const json &doc, const std::string &expected = {}) {
    if (!doc.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    detail::KeyReader r(doc);
    RunConfig cfg;
    const auto experiment = r.string("experiment");
    if (!experiment) throw ConfigError("experiment", "required");
    cfg.experiment = *experiment;
    const auto &names = experiment_names();
    if (std::find(names.begin(), names.end(), cfg.experiment) == names.end()) {
        throw ConfigError("experiment", "unknown experiment \"" + cfg.experiment + "\"");
    }
    if (!expected.empty() && expected != cfg.experiment) {
        throw ConfigError("experiment", "config is for \"" + cfg.experiment + "\", not \"" + expected + "\"");
    }
    cfg.output = r.string("output");
    if (r.has("seed")) {
        const json &s = r.raw("seed");
        if (!s.is_number_integer()) throw ConfigError("seed", "expected an integer");
        cfg.seed = s.get<long long>();
    }
    if (auto v = r.number("verify_tolerance", 1e-15, 1e3)) cfg.verify_tolerance = *v;

    if (cfg.experiment == "typeone") cfg.params = detail::parse_typeone(r);
    else if (cfg.experiment == "noon") cfg.params = detail::parse_noon(r);
    else if (cfg.experiment == "svetlichny") cfg.params = detail::parse_svetlichny(r);
    else cfg.params = detail::parse_mlr(r, cfg.experiment == "mlr-sweep");
    r.reject_unknown();
    return cfg;
}

inline RunConfig parse_config_text(const std::string &text, const std::string &expected = {}) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc, expected);
}

inline RunConfig load_config(const std::string &path, const std::string &expected = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), expected);
}

} // namespace macroreal::app
