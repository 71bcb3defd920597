// SPDX-License-Identifier: Apache-2.0
//
// mmrelay - mixed-resolution multipair massive MIMO relaying laboratory
// Copyright (C) 2026 The mmrelay authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Minimal CSV writer: '#'-prefixed comment lines, a header row, and numbers
// printed with 9 significant digits.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace mmrelay
{

inline std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

struct CsvCell
{
    std::string text;
    CsvCell(double v) : text(format_number(v)) {}
    CsvCell(int v) : text(std::to_string(v)) {}
    CsvCell(long v) : text(std::to_string(v)) {}
    CsvCell(unsigned long v) : text(std::to_string(v)) {}
    CsvCell(std::string s) : text(std::move(s)) {}
    CsvCell(const char *s) : text(s) {}
};

class CsvWriter
{
  public:
    explicit CsvWriter(std::ostream &os) : os_(os) {}

    void comment(const std::string &text) { os_ << "# " << text << '\n'; }

    void header(const std::vector<std::string> &names)
    {
        columns_ = names.size();
        line(names);
    }

    void row(const std::vector<CsvCell> &cells)
    {
        std::vector<std::string> t;
        t.reserve(cells.size());
        for (const auto &c : cells)
            t.push_back(c.text);
        line(t);
    }

    std::size_t columns() const { return columns_; }

  private:
    void line(const std::vector<std::string> &fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i)
            os_ << (i ? "," : "") << fields[i];
        os_ << '\n';
    }

    std::ostream &os_;
    std::size_t columns_ = 0;
};

} // namespace mmrelay
