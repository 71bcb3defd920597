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

#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace
{
struct Run
{
    int status = -1;
    std::string out;
};

Run run(const std::string &args)
{
    Run r;
    const std::string cmd = std::string(MMRELAY_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE *p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0)
        r.out.append(buf, n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

struct Csv
{
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::map<std::string, std::string>> rows;

    double num(std::size_t i, const std::string &col) const { return std::stod(rows.at(i).at(col)); }
};

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string x;
    while (std::getline(ss, x, ','))
        f.push_back(x);
    return f;
}

Csv parse(const std::string &text)
{
    Csv c;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        if (line[0] == '#')
        {
            c.comments.push_back(line);
            continue;
        }
        const auto f = split(line);
        if (c.header.empty())
        {
            c.header = f;
            continue;
        }
        REQUIRE(f.size() == c.header.size());
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < f.size(); ++i)
            row[c.header[i]] = f[i];
        c.rows.push_back(row);
    }
    return c;
}

std::string slurp(const std::string &path)
{
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Significant digits in a decimal token such as 1.23456789e-05.
int significant_digits(const std::string &tok)
{
    std::string mant = tok.substr(0, tok.find_first_of("eE"));
    std::string digits;
    for (char ch : mant)
        if (ch >= '0' && ch <= '9')
            digits += ch;
    const auto first = digits.find_first_not_of('0');
    if (first == std::string::npos)
        return 0;
    digits = digits.substr(first);
    if (mant.find('.') != std::string::npos)
        return static_cast<int>(digits.size());
    const auto last = digits.find_last_not_of('0');
    return static_cast<int>(last + 1);
}
} // namespace

TEST_CASE("rate-vs-m writes a replayable, deterministic sweep", "[cli]")
{
    const std::string args = "rate-vs-m --m-list 32,128,256 --bits 1,2,inf --trials 50 --seed 7";
    const auto a = run(args);
    REQUIRE(a.status == 0);
    const auto csv = parse(a.out);
    REQUIRE(csv.comments.size() == 1);
    CHECK(csv.comments[0].find("seed=7") != std::string::npos);
    CHECK(csv.comments[0].find("m_list=32;128;256") != std::string::npos);
    CHECK(csv.header == std::vector<std::string>{"M", "K", "kappa", "b", "source", "sum_rate"});
    REQUIRE(csv.rows.size() == 3 * 3 * 3);

    // Same seed, same bytes.
    CHECK(run(args).out == a.out);
    CHECK(run("rate-vs-m --m-list 32,128,256 --bits 1,2,inf --trials 50 --seed 8").out != a.out);

    std::map<std::string, double> exact;
    for (std::size_t i = 0; i < csv.rows.size(); ++i)
    {
        const auto &r = csv.rows[i];
        CHECK(significant_digits(r.at("sum_rate")) <= 9);
        if (r.at("source") == "exact")
            exact[r.at("M") + "/" + r.at("b")] = csv.num(i, "sum_rate");
    }
    for (std::size_t i = 0; i < csv.rows.size(); ++i)
        if (csv.rows[i].at("source") == "approx" && std::stoi(csv.rows[i].at("M")) >= 128)
        {
            const double e = exact.at(csv.rows[i].at("M") + "/" + csv.rows[i].at("b"));
            CHECK(std::abs(csv.num(i, "sum_rate") - e) <= 0.05 * e);
        }
    for (const char *M : {"32", "128", "256"})
        for (const char *b : {"1", "2"})
            CHECK(exact.at(std::string(M) + "/inf") >= exact.at(std::string(M) + "/" + b));
}

TEST_CASE("power-scaling has an M-independent limit and keeps the kappa ordering", "[cli]")
{
    const auto r = run("power-scaling --m-list 256,1024,4096,16384 --kappa 0,0.5,1 --bits 2 --k 4 --seed 3");
    REQUIRE(r.status == 0);
    const auto csv = parse(r.out);
    REQUIRE(csv.rows.size() == 12);
    std::map<std::string, std::vector<double>> exact, limit;
    for (std::size_t i = 0; i < csv.rows.size(); ++i)
    {
        exact[csv.rows[i].at("kappa")].push_back(csv.num(i, "exact"));
        limit[csv.rows[i].at("kappa")].push_back(csv.num(i, "limit"));
    }
    for (auto &[kappa, v] : limit)
    {
        for (double x : v)
            CHECK(x == v.front());
        const double last = exact[kappa].back();
        CHECK(std::abs(last - v.back()) <= 0.05 * v.back());
    }
    for (std::size_t m = 0; m < 4; ++m)
    {
        CHECK(exact["0"][m] < exact["0.5"][m]);
        CHECK(exact["0.5"][m] < exact["1"][m]);
    }
}

TEST_CASE("allocate never reports the optimized scheme below uniform", "[cli]")
{
    const std::string trace = "cli_trace_test.csv";
    std::remove(trace.c_str());
    const auto r = run("allocate --m-list 64,128 --k 4 --drops 2 --budget-db 10 --max-iter 20 --trace " + trace);
    REQUIRE(r.status == 0);
    const auto csv = parse(r.out);
    REQUIRE(csv.rows.size() == 8);
    CHECK(csv.comments.at(0).find("budget_db=10") != std::string::npos);
    for (std::size_t i = 0; i < csv.rows.size(); i += 2)
    {
        REQUIRE(csv.rows[i].at("scheme") == "uniform");
        REQUIRE(csv.rows[i + 1].at("scheme") == "optimized");
        CHECK(csv.num(i + 1, "sum_rate") >= csv.num(i, "sum_rate"));
    }
    const auto t = parse(slurp(trace));
    REQUIRE(t.comments.size() == 1);
    CHECK(t.header.front() == "iteration");
    CHECK(t.header.back() == "sum_rate");
    CHECK(t.header.size() == 1 + 4 + 1 + 4 + 1);
    CHECK(!t.rows.empty());
    std::remove(trace.c_str());
}

TEST_CASE("energy ranks the all-low-resolution array first", "[cli]")
{
    // b_low = b_high makes both extremes use identical converters; that
    // corner is covered by the validation suite.
    const auto r = run("energy --m-list 128 --kappa 0,0.5,1 --bits 1,2,3,4,5,6,7,8,9,10,11");
    REQUIRE(r.status == 0);
    const auto csv = parse(r.out);
    REQUIRE(csv.rows.size() == 33);
    CHECK(csv.header == std::vector<std::string>{"M", "b_low", "kappa", "sum_rate", "P_total_mW", "ee_bits_per_joule"});
    std::map<std::string, std::map<std::string, double>> ee;
    for (std::size_t i = 0; i < csv.rows.size(); ++i)
        ee[csv.rows[i].at("b_low")][csv.rows[i].at("kappa")] = csv.num(i, "ee_bits_per_joule");
    for (auto &[b, row] : ee)
    {
        CHECK(row.at("0") > row.at("0.5"));
        CHECK(row.at("0.5") > row.at("1"));
    }
}

TEST_CASE("validate reports and sets the exit status", "[cli]")
{
    const auto r = run("validate --checks 3,5");
    CHECK(r.status == 0);
    CHECK(r.out.find("PASS  [3]") != std::string::npos);
    CHECK(r.out.find("PASS  [5]") != std::string::npos);
    CHECK(r.out.find("ALL PASS") != std::string::npos);
}

TEST_CASE("bad input is rejected with a nonzero status", "[cli]")
{
    CHECK(run("").status != 0);
    CHECK(run("rate-vs-m --bits 0").status == 2);
    CHECK(run("rate-vs-m --bits two").status == 2);
    CHECK(run("rate-vs-m --kappa 1.5").status == 2);
    CHECK(run("energy --bits inf").status == 2);
    CHECK(run("energy --bits 13").status == 2);
    CHECK(run("validate --checks 10").status == 2);
    CHECK(run("allocate --theta 1.0 --m-list 16 --k 2").status != 0);
    CHECK(run("rate-vs-m --m-list 16 --trials 0 --out /nonexistent-dir/out.csv").status == 1);
}
