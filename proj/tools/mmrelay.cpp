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

// Command-line experiment harness. Every subcommand writes CSV with a
// '#' line recording the full configuration and seed; powers are entered in
// dB here and converted to linear scale before reaching the library.

#include "mmrelay/mmrelay.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace
{
using namespace mmrelay;

struct Settings
{
    std::vector<int> m_list;
    int k = 10;
    std::vector<double> kappa{0.5};
    std::vector<std::string> bits;
    double ps_db = 10.0;
    double pr_db = 10.0;
    double budget_db = 10.0;
    long trials = 1000;
    std::uint64_t seed = 1;
    std::string out = "-";
    unsigned threads = 0;
    // allocate
    double theta = 1.1;
    double eps = 1e-4;
    int max_iter = 50;
    int drops = 1;
    std::string trace;
    // validate
    std::vector<int> checks{1, 2, 3, 4, 5, 6, 7, 8, 9};
};

Resolution parse_bits(const std::string &s)
{
    std::string t = s;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "inf" || t == "infinite")
        return Resolution::infinite();
    std::size_t used = 0;
    int b = 0;
    try
    {
        b = std::stoi(t, &used);
    }
    catch (const std::exception &)
    {
        used = 0;
    }
    if (used != t.size() || b < 1)
        throw std::invalid_argument("invalid resolution '" + s + "': expected a positive bit count or 'inf'");
    return Resolution::bits(b);
}

std::vector<Resolution> parse_bits_list(const std::vector<std::string> &v)
{
    if (v.empty())
        throw std::invalid_argument("--bits: list is empty");
    std::vector<Resolution> out;
    for (const auto &s : v)
        out.push_back(parse_bits(s));
    return out;
}

template <class T> std::string join(const std::vector<T> &v)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? ";" : "") << v[i];
    return os.str();
}

void require(bool ok, const std::string &what)
{
    if (!ok)
        throw std::invalid_argument(what);
}

void check_grid(const Settings &s)
{
    require(!s.m_list.empty(), "--m-list: list is empty");
    for (int M : s.m_list)
        require(M >= 1, "--m-list: antenna counts must be positive");
    require(s.k >= 1, "--k: need at least one user pair");
    require(!s.kappa.empty(), "--kappa: list is empty");
    for (double k : s.kappa)
        require(k >= 0.0 && k <= 1.0, "--kappa: values must lie in [0, 1]");
}

// Output sink: a file, or stdout for "-".
class Output
{
  public:
    explicit Output(const std::string &path)
    {
        if (path != "-")
        {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw std::runtime_error("cannot open output file '" + path + "'");
        }
        path_ = path;
    }
    std::ostream &stream() { return file_ ? *file_ : std::cout; }
    void finish()
    {
        stream().flush();
        if (!stream())
            throw std::runtime_error("write failed for '" + path_ + "'");
    }

  private:
    std::unique_ptr<std::ofstream> file_;
    std::string path_;
};

SystemConfig make_cfg(int M, double kappa, int K, Resolution b, double p_S, double p_R)
{
    return SystemConfig::Builder{}.antennas(M).kappa(kappa).users(K).bits(b).source_power(p_S).relay_power(p_R).build();
}

void cmd_rate_vs_m(const Settings &s)
{
    check_grid(s);
    const auto bits = parse_bits_list(s.bits);
    require(s.trials == 0 || s.trials >= 2, "--trials: use 0 to skip Monte Carlo or at least 2");
    const auto profile = drop_users(s.seed, s.k);
    const double p_S = db_to_linear(s.ps_db), p_R = db_to_linear(s.pr_db);

    Output out(s.out);
    CsvWriter csv(out.stream());
    csv.comment("command=rate-vs-m m_list=" + join(s.m_list) + " k=" + std::to_string(s.k) + " kappa=" + join(s.kappa) +
                " bits=" + join(s.bits) + " ps_db=" + format_number(s.ps_db) + " pr_db=" + format_number(s.pr_db) +
                " trials=" + std::to_string(s.trials) + " seed=" + std::to_string(s.seed));
    csv.header({"M", "K", "kappa", "b", "source", "sum_rate"});
    McOptions mo;
    mo.threads = s.threads;
    for (double kappa : s.kappa)
        for (std::size_t bi = 0; bi < bits.size(); ++bi)
            for (int M : s.m_list)
            {
                const auto cfg = make_cfg(M, kappa, s.k, bits[bi], p_S, p_R);
                const std::string b = bits[bi].to_string();
                csv.row({M, s.k, cfg.kappa(), b, "exact", exact_rate(profile, cfg).sum_rate});
                csv.row({M, s.k, cfg.kappa(), b, "approx", approx_rate(profile, cfg).sum_rate});
                if (s.trials > 0)
                {
                    const auto mc = simulated_rate(profile, cfg, s.trials,
                                                   derive_seed(s.seed, static_cast<std::uint64_t>(M), bi), mo);
                    csv.row({M, s.k, cfg.kappa(), b, "mc", mc.sum_rate});
                }
            }
    out.finish();
}

void cmd_power_scaling(const Settings &s)
{
    check_grid(s);
    const auto bits = parse_bits_list(s.bits);
    const auto profile = drop_users(s.seed, s.k);
    const double E_S = db_to_linear(s.ps_db), E_R = db_to_linear(s.pr_db);

    Output out(s.out);
    CsvWriter csv(out.stream());
    csv.comment("command=power-scaling m_list=" + join(s.m_list) + " k=" + std::to_string(s.k) +
                " kappa=" + join(s.kappa) + " bits=" + join(s.bits) + " es_db=" + format_number(s.ps_db) +
                " er_db=" + format_number(s.pr_db) + " seed=" + std::to_string(s.seed) + " powers=E/M");
    csv.header({"M", "kappa", "b", "exact", "approx", "limit"});
    for (const auto &b : bits)
        for (double kappa : s.kappa)
            for (int M : s.m_list)
            {
                const auto cfg = SystemConfig::Builder{}
                                     .antennas(M)
                                     .kappa(kappa)
                                     .users(s.k)
                                     .bits(b)
                                     .budgets(E_S, E_R)
                                     .build()
                                     .with_scaled_powers();
                std::vector<long double> parts;
                for (double v : scaling_limit(profile, cfg))
                    parts.push_back(v);
                csv.row({M, cfg.kappa(), b.to_string(), exact_rate(profile, cfg).sum_rate,
                         approx_rate(profile, cfg).sum_rate, double(pairwise_sum(parts))});
            }
    out.finish();
}

void cmd_allocate(const Settings &s)
{
    check_grid(s);
    const auto bits = parse_bits_list(s.bits);
    require(bits.size() == 1, "--bits: allocate takes a single resolution");
    require(s.kappa.size() == 1, "--kappa: allocate takes a single value");
    require(s.drops >= 1, "--drops: need at least one drop");
    const double P_T = db_to_linear(s.budget_db);
    AllocationOptions ao;
    ao.theta = s.theta;
    ao.eps = s.eps;
    ao.max_iter = s.max_iter;

    const std::string config = "command=allocate m_list=" + join(s.m_list) + " k=" + std::to_string(s.k) +
                               " kappa=" + join(s.kappa) + " bits=" + join(s.bits) +
                               " budget_db=" + format_number(s.budget_db) + " theta=" + format_number(s.theta) +
                               " eps=" + format_number(s.eps) + " max_iter=" + std::to_string(s.max_iter) +
                               " drops=" + std::to_string(s.drops) + " seed=" + std::to_string(s.seed);
    Output out(s.out);
    CsvWriter csv(out.stream());
    csv.comment(config);
    csv.header({"M", "drop", "scheme", "sum_rate", "iterations", "converged"});
    bool first = true;
    for (int M : s.m_list)
        for (int d = 0; d < s.drops; ++d)
        {
            const auto profile = drop_users(derive_seed(s.seed, static_cast<std::uint64_t>(d)), s.k);
            const auto cfg = make_cfg(M, s.kappa.front(), s.k, bits.front(), 1.0, 1.0);
            const auto uni = uniform_allocation(profile, cfg, P_T);
            const auto opt = allocate(profile, cfg, P_T, ao);
            csv.row({M, d, "uniform", uni.sum_rate, 0, 1});
            csv.row({M, d, "optimized", opt.sum_rate, opt.iterations, opt.converged ? 1 : 0});
            if (first && !s.trace.empty())
            {
                Output tr(s.trace);
                CsvWriter(tr.stream()).comment(config + " trace_M=" + std::to_string(M) + " trace_drop=0");
                write_allocation_trace_csv(tr.stream(), opt);
                tr.finish();
            }
            first = false;
        }
    out.finish();
}

void cmd_energy(const Settings &s)
{
    check_grid(s);
    const auto bits = parse_bits_list(s.bits);
    for (const auto &b : bits)
        require(!b.is_infinite(), "--bits: energy needs finite low-resolution bit counts");
    const PowerModel model;
    for (const auto &b : bits)
        require(b.value() <= model.b_high, "--bits: low resolution cannot exceed " + std::to_string(model.b_high));
    const auto profile = drop_users(s.seed, s.k);
    const double p_S = db_to_linear(s.ps_db), p_R = db_to_linear(s.pr_db);

    Output out(s.out);
    CsvWriter csv(out.stream());
    csv.comment("command=energy m_list=" + join(s.m_list) + " k=" + std::to_string(s.k) + " kappa=" + join(s.kappa) +
                " bits=" + join(s.bits) + " ps_db=" + format_number(s.ps_db) + " pr_db=" + format_number(s.pr_db) +
                " seed=" + std::to_string(s.seed) + " b_high=" + std::to_string(model.b_high) +
                " bandwidth_hz=" + format_number(model.bandwidth_hz));
    csv.header({"M", "b_low", "kappa", "sum_rate", "P_total_mW", "ee_bits_per_joule"});
    for (int M : s.m_list)
        for (double kappa : s.kappa)
        {
            double best = -1.0;
            int best_b = 0;
            for (const auto &b : bits)
            {
                const auto cfg = make_cfg(M, kappa, s.k, b, p_S, p_R);
                const double ee = energy_efficiency(profile, cfg, model);
                csv.row({M, b.value(), cfg.kappa(), exact_rate(profile, cfg).sum_rate,
                         total_power(cfg, model, b.value()) * 1e3, ee});
                if (ee > best)
                {
                    best = ee;
                    best_b = b.value();
                }
            }
            std::cerr << "M=" << M << " kappa=" << kappa << ": most energy-efficient b_low=" << best_b << '\n';
        }
    out.finish();
}

int cmd_validate(const Settings &s)
{
    validation::ValidationOptions vo;
    vo.seed = s.seed;
    vo.threads = s.threads;
    const auto checks = validation::all_checks();
    for (int c : s.checks)
        require(c >= 1 && c <= static_cast<int>(checks.size()),
                "--checks: criteria are numbered 1.." + std::to_string(checks.size()));
    Output out(s.out);
    int failed = 0;
    for (int c : s.checks)
    {
        const auto r = checks[static_cast<std::size_t>(c - 1)](vo);
        validation::print_result(out.stream(), r);
        out.stream().flush();
        failed += r.passed ? 0 : 1;
    }
    out.stream() << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " check(s) FAILED") << '\n';
    out.finish();
    return failed == 0 ? 0 : 1;
}

void add_common(CLI::App *sub, Settings &s, bool mc)
{
    sub->add_option("--m-list", s.m_list, "Relay antenna counts")->delimiter(',');
    sub->add_option("--k", s.k, "Number of user pairs");
    sub->add_option("--kappa", s.kappa, "High-resolution antenna shares")->delimiter(',');
    sub->add_option("--bits", s.bits, "Resolutions in bits, or inf")->delimiter(',');
    sub->add_option("--seed", s.seed, "Master seed");
    sub->add_option("--out", s.out, "Output CSV path, - for stdout");
    if (mc)
    {
        sub->add_option("--trials", s.trials, "Monte Carlo trials per point, 0 to skip");
        sub->add_option("--threads", s.threads, "Monte Carlo worker threads, 0 for all cores");
    }
}
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Mixed-resolution multipair massive MIMO relaying: rates, power allocation and energy efficiency"};
    app.require_subcommand(1);

    Settings rate, scaling, alloc, energy, valid;
    rate.m_list = {16, 32, 64, 128, 256, 512};
    rate.bits = {"1", "2", "3", "inf"};
    scaling.m_list = {64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384};
    scaling.kappa = {0.0, 0.5, 1.0};
    scaling.bits = {"2"};
    alloc.m_list = {64, 128, 256, 512};
    alloc.bits = {"2"};
    energy.m_list = {128};
    energy.kappa = {0.0, 0.25, 0.5, 0.75, 1.0};
    energy.bits = {"1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11", "12"};
    valid.seed = validation::ValidationOptions{}.seed;

    auto *c_rate = app.add_subcommand("rate-vs-m", "Sum rate against the array size: exact, approximate, Monte Carlo");
    add_common(c_rate, rate, true);
    c_rate->add_option("--ps-db", rate.ps_db, "Source power per user [dB]");
    c_rate->add_option("--pr-db", rate.pr_db, "Relay power [dB]");

    auto *c_scal = app.add_subcommand("power-scaling", "Rate under p = E/M power scaling and its large-array limit");
    add_common(c_scal, scaling, false);
    c_scal->add_option("--ps-db", scaling.ps_db, "Source energy budget E_S [dB]");
    c_scal->add_option("--pr-db", scaling.pr_db, "Relay energy budget E_R [dB]");

    auto *c_alloc = app.add_subcommand("allocate", "Optimized against uniform power allocation");
    add_common(c_alloc, alloc, false);
    c_alloc->add_option("--budget-db", alloc.budget_db, "Total power budget P_T [dB]");
    c_alloc->add_option("--theta", alloc.theta, "Trust-region factor, > 1");
    c_alloc->add_option("--eps", alloc.eps, "Stopping tolerance on the SINR step");
    c_alloc->add_option("--max-iter", alloc.max_iter, "Iteration cap");
    c_alloc->add_option("--drops", alloc.drops, "User drops per array size");
    c_alloc->add_option("--trace", alloc.trace, "Write the iteration trace of the first run to this CSV");

    auto *c_en = app.add_subcommand("energy", "Energy efficiency against the low resolution and high-resolution share");
    add_common(c_en, energy, false);
    c_en->add_option("--ps-db", energy.ps_db, "Source power per user [dB]");
    c_en->add_option("--pr-db", energy.pr_db, "Relay power [dB]");

    auto *c_val = app.add_subcommand("validate", "Run the numerical validation suite");
    c_val->add_option("--checks", valid.checks, "Check numbers to run (1-9)")->delimiter(',');
    c_val->add_option("--seed", valid.seed, "Master seed");
    c_val->add_option("--threads", valid.threads, "Monte Carlo worker threads, 0 for all cores");
    c_val->add_option("--out", valid.out, "Report path, - for stdout");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (c_rate->parsed())
            cmd_rate_vs_m(rate);
        else if (c_scal->parsed())
            cmd_power_scaling(scaling);
        else if (c_alloc->parsed())
            cmd_allocate(alloc);
        else if (c_en->parsed())
            cmd_energy(energy);
        else if (c_val->parsed())
            return cmd_validate(valid);
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
