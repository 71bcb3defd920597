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

// Geometric programming in standard form
//
//   minimize    f0(x)
//   subject to  f_i(x) <= 1,  i = 1..m,     x > 0,
//
// with posynomial f0 and f_i. Substituting x = exp(y) and taking logarithms
// turns every posynomial into a convex log-sum-exp function of y; the
// resulting problem is solved with a log-barrier Newton method. A phase I
// problem finds a strictly feasible start when none is given.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mmrelay
{

// c * prod_j x_j^{a_j}, c > 0.
struct Monomial
{
    double coeff = 1.0;
    std::vector<double> exps;
};

class Posynomial
{
  public:
    explicit Posynomial(int n_vars = 0) : n_(n_vars) {}

    int n_vars() const { return n_; }
    const std::vector<Monomial> &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    Posynomial &add(double coeff, std::vector<double> exps)
    {
        if (!(coeff > 0.0) || !std::isfinite(coeff))
            throw std::invalid_argument("Posynomial: coefficients must be finite and strictly positive");
        if (static_cast<int>(exps.size()) != n_)
            throw std::invalid_argument("Posynomial: exponent vector has wrong length");
        for (double a : exps)
            if (!std::isfinite(a))
                throw std::invalid_argument("Posynomial: exponents must be finite");
        terms_.push_back({coeff, std::move(exps)});
        return *this;
    }
    Posynomial &add(const Monomial &m) { return add(m.coeff, m.exps); }

    // Product with a monomial.
    Posynomial times(const Monomial &m) const
    {
        Posynomial out(n_);
        for (const auto &t : terms_)
        {
            std::vector<double> e(t.exps);
            for (int j = 0; j < n_; ++j)
                e[j] += m.exps[j];
            out.add(t.coeff * m.coeff, std::move(e));
        }
        return out;
    }

    double operator()(const std::vector<double> &x) const
    {
        double s = 0.0;
        for (const auto &t : terms_)
        {
            double v = t.coeff;
            for (int j = 0; j < n_; ++j)
                if (t.exps[j] != 0.0)
                    v *= std::pow(x[j], t.exps[j]);
            s += v;
        }
        return s;
    }

    // log f(exp(y)) with gradient and Hessian.
    double log_eval(const Eigen::VectorXd &y, Eigen::VectorXd *grad = nullptr, Eigen::MatrixXd *hess = nullptr) const
    {
        const auto T = terms_.size();
        Eigen::VectorXd z(static_cast<Eigen::Index>(T));
        for (std::size_t i = 0; i < T; ++i)
        {
            double v = std::log(terms_[i].coeff);
            for (int j = 0; j < n_; ++j)
                v += terms_[i].exps[j] * y[j];
            z[Eigen::Index(i)] = v;
        }
        const double zmax = z.maxCoeff();
        const Eigen::VectorXd w_unnorm = (z.array() - zmax).exp();
        const double sum = w_unnorm.sum();
        const double value = zmax + std::log(sum);
        if (grad || hess)
        {
            const Eigen::VectorXd w = w_unnorm / sum;
            Eigen::VectorXd g = Eigen::VectorXd::Zero(n_);
            for (std::size_t i = 0; i < T; ++i)
                for (int j = 0; j < n_; ++j)
                    g[j] += w[Eigen::Index(i)] * terms_[i].exps[j];
            if (hess)
            {
                Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n_, n_);
                for (std::size_t i = 0; i < T; ++i)
                {
                    const Eigen::Map<const Eigen::VectorXd> a(terms_[i].exps.data(), n_);
                    H.noalias() += w[Eigen::Index(i)] * (a * a.transpose());
                }
                H.noalias() -= g * g.transpose();
                *hess = H;
            }
            if (grad)
                *grad = g;
        }
        return value;
    }

  private:
    int n_;
    std::vector<Monomial> terms_;
};

inline Posynomial monomial(int n_vars, double coeff, std::vector<double> exps)
{
    Posynomial p(n_vars);
    p.add(coeff, std::move(exps));
    return p;
}

struct GpProblem
{
    int n_vars = 0;
    Posynomial objective;
    std::vector<Posynomial> constraints; // each <= 1
    std::vector<std::string> names;      // optional labels, used in error messages

    void add_constraint(Posynomial p, std::string name = {})
    {
        if (p.n_vars() != n_vars || p.size() == 0)
            throw std::invalid_argument("GpProblem: constraint has wrong dimension or no terms");
        constraints.push_back(std::move(p));
        names.push_back(name.empty() ? "constraint " + std::to_string(constraints.size() - 1) : std::move(name));
    }
};

struct GpOptions
{
    double tol = 1e-9;          // bound on the duality gap m / t
    double mu = 20.0;           // barrier parameter growth
    double t0 = 1.0;
    int max_outer = 100;
    int max_newton = 200;       // per centering step
    std::optional<std::vector<double>> x0; // starting point (need not be feasible)
};

enum class GpStatus
{
    optimal,
    max_iterations,
};

struct GpSolution
{
    std::vector<double> x;
    double objective = 0.0;
    double gap = 0.0;           // m / t at termination
    int newton_steps = 0;
    int outer_iterations = 0;
    bool converged = false;
    GpStatus status = GpStatus::optimal;
};

class GpInfeasible : public std::runtime_error
{
  public:
    GpInfeasible(int index, std::string name, double violation)
        : std::runtime_error("GP infeasible: " + name + " cannot be satisfied (minimum of max log-violation " +
                             std::to_string(violation) + ")"),
          index_(index), name_(std::move(name)), violation_(violation)
    {
    }
    int constraint_index() const { return index_; }
    const std::string &constraint_name() const { return name_; }
    double violation() const { return violation_; }

  private:
    int index_;
    std::string name_;
    double violation_;
};

namespace detail
{
// Smooth convex function of y: value, gradient and Hessian in one call.
using ConvexFn = std::function<double(const Eigen::VectorXd &, Eigen::VectorXd *, Eigen::MatrixXd *)>;

struct BarrierResult
{
    Eigen::VectorXd y;
    double t = 0.0;
    int newton_steps = 0;
    int outer = 0;
    bool converged = false;
    bool stopped_early = false;
};

// Log-barrier method for min f0 s.t. f_i <= 0, from a strictly feasible y.
// `stop` is checked after every Newton step and ends the run early.
inline BarrierResult barrier_solve(const ConvexFn &f0, const std::vector<ConvexFn> &cons, Eigen::VectorXd y,
                                   const GpOptions &opt, const std::function<bool(const Eigen::VectorXd &)> &stop = {})
{
    const auto n = y.size();
    const double m = static_cast<double>(cons.size());
    BarrierResult res;
    double t = opt.t0;

    auto phi = [&](const Eigen::VectorXd &v, Eigen::VectorXd *g, Eigen::MatrixXd *H) -> double {
        Eigen::VectorXd gi;
        Eigen::MatrixXd Hi;
        double val = t * f0(v, g, H);
        if (g)
            *g *= t;
        if (H)
            *H *= t;
        for (const auto &c : cons)
        {
            const double fi = c(v, g ? &gi : nullptr, H ? &Hi : nullptr);
            if (!(fi < 0.0))
                return std::numeric_limits<double>::infinity();
            val -= std::log(-fi);
            if (g)
                *g += gi / (-fi);
            if (H)
                *H += Hi / (-fi) + (gi * gi.transpose()) / (fi * fi);
        }
        return val;
    };

    for (res.outer = 0; res.outer < opt.max_outer; ++res.outer)
    {
        // Centering by damped Newton.
        for (int it = 0; it < opt.max_newton; ++it)
        {
            Eigen::VectorXd g(n);
            Eigen::MatrixXd H(n, n);
            const double val = phi(y, &g, &H);
            // Jacobi-scaled Newton system; a growing ridge only if the
            // factorization fails or does not yield a descent direction.
            const Eigen::VectorXd d = H.diagonal().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
            const Eigen::MatrixXd Hs = d.asDiagonal() * H * d.asDiagonal();
            Eigen::VectorXd dy;
            bool ok = false;
            for (double ridge = 0.0; ridge <= 1.0 && !ok; ridge = ridge == 0.0 ? 1e-14 : ridge * 100.0)
            {
                Eigen::MatrixXd A = Hs;
                A.diagonal().array() += ridge;
                Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
                if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
                    continue;
                dy = d.asDiagonal() * ldlt.solve(-(d.asDiagonal() * g));
                ok = dy.allFinite() && g.dot(dy) < 0.0;
            }
            if (!ok)
                dy = -g;
            const double lambda2 = -g.dot(dy);
            // Centered once the decrement reaches the resolution of phi itself.
            if (lambda2 / 2.0 <= std::max(1e-12, 16.0 * std::numeric_limits<double>::epsilon() * std::abs(val)))
                break;
            double s = 1.0;
            bool moved = false;
            for (int ls = 0; ls < 80; ++ls, s *= 0.5)
            {
                const Eigen::VectorXd yn = y + s * dy;
                const double vn = phi(yn, nullptr, nullptr);
                if (std::isfinite(vn) && vn <= val - 0.25 * s * lambda2)
                {
                    y = yn;
                    moved = true;
                    break;
                }
            }
            ++res.newton_steps;
            if (stop && stop(y))
            {
                res.y = y;
                res.t = t;
                res.stopped_early = true;
                return res;
            }
            if (!moved)
                break;
        }
        if (m / t < opt.tol)
        {
            res.converged = true;
            break;
        }
        t *= opt.mu;
    }
    res.y = y;
    res.t = t;
    return res;
}

inline ConvexFn log_posynomial(const Posynomial &p)
{
    return [&p](const Eigen::VectorXd &y, Eigen::VectorXd *g, Eigen::MatrixXd *H) { return p.log_eval(y, g, H); };
}
} // namespace detail

inline GpSolution solve_gp(const GpProblem &gp, const GpOptions &opt = {})
{
    const int n = gp.n_vars;
    if (n < 1)
        throw std::invalid_argument("solve_gp: need at least one variable");
    if (gp.objective.n_vars() != n || gp.objective.size() == 0)
        throw std::invalid_argument("solve_gp: objective has wrong dimension or no terms");
    for (const auto &c : gp.constraints)
        if (c.n_vars() != n || c.size() == 0)
            throw std::invalid_argument("solve_gp: constraint has wrong dimension or no terms");

    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    if (opt.x0)
    {
        if (static_cast<int>(opt.x0->size()) != n)
            throw std::invalid_argument("solve_gp: starting point has wrong dimension");
        for (int j = 0; j < n; ++j)
        {
            if (!((*opt.x0)[j] > 0.0))
                throw std::invalid_argument("solve_gp: starting point must be positive");
            y[j] = std::log((*opt.x0)[j]);
        }
    }

    std::vector<detail::ConvexFn> cons;
    for (const auto &c : gp.constraints)
        cons.push_back(detail::log_posynomial(c));

    auto max_violation = [&](const Eigen::VectorXd &v, int *arg = nullptr) {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cons.size(); ++i)
        {
            const double f = cons[i](v, nullptr, nullptr);
            if (f > worst)
            {
                worst = f;
                if (arg)
                    *arg = static_cast<int>(i);
            }
        }
        return worst;
    };

    int newton = 0;
    if (!cons.empty() && !(max_violation(y) < 0.0))
    {
        // Phase I: minimize s subject to log f_i(y) <= s over (y, s).
        Eigen::VectorXd ys(n + 1);
        ys.head(n) = y;
        ys[n] = max_violation(y) + 1.0;
        const detail::ConvexFn f0 = [n](const Eigen::VectorXd &v, Eigen::VectorXd *g, Eigen::MatrixXd *H) {
            if (g)
            {
                *g = Eigen::VectorXd::Zero(n + 1);
                (*g)[n] = 1.0;
            }
            if (H)
                *H = Eigen::MatrixXd::Zero(n + 1, n + 1);
            return v[n];
        };
        std::vector<detail::ConvexFn> lifted;
        for (const auto &c : cons)
            lifted.push_back([c, n](const Eigen::VectorXd &v, Eigen::VectorXd *g, Eigen::MatrixXd *H) {
                Eigen::VectorXd gi;
                Eigen::MatrixXd Hi;
                const double f = c(v.head(n), g ? &gi : nullptr, H ? &Hi : nullptr);
                if (g)
                {
                    g->resize(n + 1);
                    g->head(n) = gi;
                    (*g)[n] = -1.0;
                }
                if (H)
                {
                    *H = Eigen::MatrixXd::Zero(n + 1, n + 1);
                    H->topLeftCorner(n, n) = Hi;
                }
                return f - v[n];
            });
        // The slack is bounded below to keep phase I from running off when
        // the constraints can be made arbitrarily slack.
        lifted.push_back([n](const Eigen::VectorXd &v, Eigen::VectorXd *g, Eigen::MatrixXd *H) {
            if (g)
            {
                *g = Eigen::VectorXd::Zero(n + 1);
                (*g)[n] = -1.0;
            }
            if (H)
                *H = Eigen::MatrixXd::Zero(n + 1, n + 1);
            return -1.0 - v[n];
        });
        GpOptions o1 = opt;
        o1.tol = 1e-10;
        const auto r1 = detail::barrier_solve(f0, lifted, ys, o1, [&](const Eigen::VectorXd &v) {
            return max_violation(v.head(n)) < -1e-6;
        });
        newton += r1.newton_steps;
        y = r1.y.head(n);
        int arg = 0;
        const double viol = max_violation(y, &arg);
        if (!(viol < 0.0))
            throw GpInfeasible(arg, gp.names.empty() ? "constraint " + std::to_string(arg) : gp.names[arg], viol);
    }

    const auto obj = detail::log_posynomial(gp.objective);
    detail::BarrierResult r;
    if (cons.empty())
    {
        // Unconstrained: a single Newton run with no barrier (t fixed at 1).
        GpOptions o = opt;
        o.max_outer = 1;
        r = detail::barrier_solve(obj, cons, y, o);
        r.converged = true;
    }
    else
        r = detail::barrier_solve(obj, cons, y, opt);

    GpSolution sol;
    sol.x.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        sol.x[j] = std::exp(r.y[j]);
    sol.objective = gp.objective(sol.x);
    sol.gap = cons.empty() ? 0.0 : static_cast<double>(cons.size()) / r.t;
    sol.newton_steps = newton + r.newton_steps;
    sol.outer_iterations = r.outer;
    sol.converged = r.converged;
    sol.status = r.converged ? GpStatus::optimal : GpStatus::max_iterations;
    return sol;
}

} // namespace mmrelay
