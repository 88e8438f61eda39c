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

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace macroreal::app {

/// Raised when a row would carry a NaN or infinity.
class NonFiniteValue : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// 12 significant digits.
inline std::string format_number(double v, const std::string &column) {
    if (!std::isfinite(v)) throw NonFiniteValue("non-finite value in column " + column);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return buf;
}

inline std::string format_int(long long v) { return std::to_string(v); }
inline std::string format_bool(bool v) { return v ? "true" : "false"; }

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string &name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::out_of_range("no column " + name);
    }

    void write(std::ostream &out) const {
        auto line = [&](const std::vector<std::string> &cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out << ',';
                out << cells[i];
            }
            out << '\n';
        };
        line(header);
        for (const auto &r : rows) line(r);
    }
};

/// Builds one row in header order.
class RowBuilder {
  public:
    explicit RowBuilder(const std::vector<std::string> &header) : header_(header) {}

    RowBuilder &num(double v) {
        cells_.push_back(format_number(v, header_.at(cells_.size())));
        return *this;
    }
    RowBuilder &integer(long long v) {
        cells_.push_back(format_int(v));
        return *this;
    }
    RowBuilder &flag(bool v) {
        cells_.push_back(format_bool(v));
        return *this;
    }

    std::vector<std::string> done() {
        if (cells_.size() != header_.size()) throw std::logic_error("row width does not match header");
        return std::move(cells_);
    }

  private:
    const std::vector<std::string> &header_;
    std::vector<std::string> cells_;
};

} // namespace macroreal::app
