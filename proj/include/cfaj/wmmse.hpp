// SPDX-License-Identifier: Apache-2.0
//
// cfaj - anti-jamming beamforming for downlink cell-free mmWave MIMO
// Copyright (C) 2026 The cfaj authors
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

#ifndef CFAJ_WMMSE_HPP
#define CFAJ_WMMSE_HPP

// Weighted-MMSE baseline with jamming and error-bound terms folded into the
// receiver covariance:
//   J_k = sum_j Hbar_k f_j f_j^H Hbar_k^H + sum_g q_{g,k} R_{g,k} + sh2_k I
//   sh2_k = sigma2 + EN^UB_k + QE^UB_k
//   E_k(w) = |w^H a_k - 1|^2 + sum_{j != k} |w^H Hbar_k f_j|^2
//            + w^H (sum_g q R) w + sh2_k ||w||^2,     a_k = Hbar_k f_k
// Block coordinate descent on h = sum_k (W_k E_k - log W_k).

#include "ao.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfaj
{

struct WmmseConfig
{
    int max_inner = 100;
    double tol = 1e-5;          // relative change of h
    int max_ap_sweeps = 20;     // Gauss-Seidel passes over APs per precoder update
    double sweep_tol = 1e-8;    // relative change of f ending the passes
    double power_tol = 1e-6;    // |p(lambda) - P_max| <= power_tol * P_max

    void validate() const
    {
        if (max_inner < 1 || max_ap_sweeps < 1 || !(tol > 0.0) || !(sweep_tol >= 0.0) || !(power_tol > 0.0))
            throw std::invalid_argument("WmmseConfig: invalid parameters");
    }
};

inline CMat wmmse_covariance(const PriorSet &ps, const std::vector<CVec> &f, const JammingPowers &q, int k)
{
    const CMat &H = ps.Hbar[static_cast<std::size_t>(k)];
    CMat J = jamming_covariance(ps, q, k);
    for (const auto &fj : f)
    {
        CVec b = H * fj;
        J += b * b.adjoint();
    }
    J.diagonal().array() += ps.floor_term(k);
    return hermitian_part(J);
}

inline CVec wmmse_receiver(const PriorSet &ps, const std::vector<CVec> &f, const JammingPowers &q, int k)
{
    const CVec a = ps.Hbar[static_cast<std::size_t>(k)] * f[static_cast<std::size_t>(k)];
    return solve_hpd(wmmse_covariance(ps, f, q, k), a);
}

inline std::vector<CVec> wmmse_receiver(const PriorSet &ps, const std::vector<CVec> &f, const JammingPowers &q)
{
    check_beamformers(ps, f, q);
    std::vector<CVec> w;
    for (int k = 0; k < ps.K; ++k)
        w.push_back(wmmse_receiver(ps, f, q, k));
    return w;
}

/// E_k for an arbitrary receive vector.
inline double wmmse_mse(const PriorSet &ps, const std::vector<CVec> &f, const CVec &w, const JammingPowers &q, int k)
{
    const CMat &H = ps.Hbar[static_cast<std::size_t>(k)];
    double e = std::norm(w.dot(H * f[static_cast<std::size_t>(k)]) - 1.0);
    for (int j = 0; j < ps.K; ++j)
        if (j != k)
            e += std::norm(w.dot(H * f[static_cast<std::size_t>(j)]));
    // PSD form; at large q rounding in R can push it slightly negative.
    e += std::max(0.0, (w.adjoint() * jamming_covariance(ps, q, k) * w)(0).real());
    e += ps.floor_term(k) * w.squaredNorm();
    return e;
}

/// E_k at the MMSE receiver: 1 - a^H J^-1 a.
inline double wmmse_mse_closed(const PriorSet &ps, const std::vector<CVec> &f, const JammingPowers &q, int k)
{
    const CVec a = ps.Hbar[static_cast<std::size_t>(k)] * f[static_cast<std::size_t>(k)];
    const CVec x = solve_hpd(wmmse_covariance(ps, f, q, k), a);
    return 1.0 - a.dot(x).real();
}

inline double wmmse_weight(double E)
{
    if (!(E > 0.0) || !std::isfinite(E))
        throw NumericalError("wmmse_weight: mean squared error " + format_double(E) + " is not positive");
    return 1.0 / E;
}

struct PrecoderUpdate
{
    std::vector<CVec> f;
    std::vector<double> lambda; // [l]
    int sweeps = 0;
};

namespace detail
{
/// min_x sum_k x_k^H C x_k - 2 Re(b_k^H x_k) + lambda sum_k ||x_k||^2 subject
/// to sum_k ||x_k||^2 <= P_max, solved in the eigenbasis of C.
struct ApSubproblem
{
    Eigen::SelfAdjointEigenSolver<CMat> eig;
    std::vector<CVec> coeff; // U^H b_k

    explicit ApSubproblem(const CMat &C) : eig(C) {}

    void set_rhs(const std::vector<CVec> &b)
    {
        coeff.clear();
        for (const auto &bk : b)
            coeff.push_back(eig.eigenvectors().adjoint() * bk);
    }

    double cutoff() const
    {
        const auto &d = eig.eigenvalues();
        return 1e-12 * std::max(std::abs(d(d.size() - 1)), 1e-300);
    }

    double power(double lambda) const
    {
        const auto &d = eig.eigenvalues();
        const double cut = cutoff();
        double p = 0.0;
        for (const auto &c : coeff)
            for (Index i = 0; i < d.size(); ++i)
            {
                const double den = std::max(d(i), 0.0) + lambda;
                if (lambda == 0.0 && d(i) <= cut)
                    continue; // pseudo-inverse on the null space
                p += std::norm(c(i)) / (den * den);
            }
        return p;
    }

    std::vector<CVec> solution(double lambda) const
    {
        const auto &d = eig.eigenvalues();
        const double cut = cutoff();
        std::vector<CVec> x;
        for (const auto &c : coeff)
        {
            CVec y(c.size());
            for (Index i = 0; i < d.size(); ++i)
                y(i) = (lambda == 0.0 && d(i) <= cut) ? cd(0.0) : c(i) / (std::max(d(i), 0.0) + lambda);
            x.push_back(eig.eigenvectors() * y);
        }
        return x;
    }
};

inline double find_lambda(const ApSubproblem &sub, double P_max, double power_tol, int ap)
{
    if (sub.power(0.0) <= P_max)
        return 0.0;
    const auto &d = sub.eig.eigenvalues();
    double lo = 0.0;
    double hi = std::max(1e-12 * std::abs(d(d.size() - 1)), 1e-300);
    int grow = 0;
    while (sub.power(hi) > P_max)
    {
        lo = hi;
        hi *= 10.0;
        if (++grow > 400 || !std::isfinite(hi))
            throw NumericalError("wmmse_precoder: no lambda bracket for AP " + std::to_string(ap) + " in [" +
                                 format_double(lo) + ", " + format_double(hi) + "]");
    }
    for (int i = 0; i < 300; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        const double p = sub.power(mid);
        if (p > P_max)
            lo = mid;
        else
            hi = mid;
        if (std::abs(sub.power(hi) - P_max) <= power_tol * P_max)
            break;
    }
    return hi;
}
} // namespace detail

/// Minimizes sum_k W_k E_k over f under per-AP power constraints by exact
/// per-AP block updates swept until f settles. For AP l:
///   (C_ll + lambda_l I) f_lk = W_k g_kl - sum_{i != l} C_li f_ik
///   C_li = sum_j W_j g_jl g_ji^H,  g_k = Hbar_k^H w_k
/// with lambda_l >= 0 chosen by bisection (zero when the constraint is slack).
inline PrecoderUpdate wmmse_precoder(const PriorSet &ps, const std::vector<CVec> &w, const std::vector<double> &W,
                                     const std::vector<CVec> &f_init, const WmmseConfig &cfg = {})
{
    cfg.validate();
    const int K = ps.K;
    const Index M = ps.M;
    std::vector<CVec> g;
    for (int k = 0; k < K; ++k)
        g.push_back(ps.Hbar[static_cast<std::size_t>(k)].adjoint() * w[static_cast<std::size_t>(k)]);

    PrecoderUpdate out;
    out.f = f_init;
    out.lambda.assign(static_cast<std::size_t>(ps.L), 0.0);
    // s[j][k] = g_j^H f_k over all APs
    std::vector<std::vector<cd>> s(static_cast<std::size_t>(K), std::vector<cd>(static_cast<std::size_t>(K)));
    for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k)
            s[j][k] = g[j].dot(out.f[k]);

    // C_ll depends on (w, W) only, so each AP's eigenbasis is computed once.
    std::vector<detail::ApSubproblem> subs;
    for (int l = 0; l < ps.L; ++l)
    {
        CMat C = CMat::Zero(M, M);
        for (int j = 0; j < K; ++j)
        {
            auto gl = g[j].segment(l * M, M);
            C += W[j] * gl * gl.adjoint();
        }
        subs.emplace_back(hermitian_part(C));
    }

    for (int sweep = 0; sweep < cfg.max_ap_sweeps; ++sweep)
    {
        double change = 0.0;
        double norm = 0.0;
        for (int l = 0; l < ps.L; ++l)
        {
            std::vector<CVec> b;
            for (int k = 0; k < K; ++k)
            {
                CVec bk = W[k] * g[k].segment(l * M, M);
                for (int j = 0; j < K; ++j)
                {
                    auto gl = g[j].segment(l * M, M);
                    bk -= (W[j] * (s[j][k] - gl.dot(out.f[k].segment(l * M, M)))) * gl;
                }
                b.push_back(std::move(bk));
            }
            detail::ApSubproblem &sub = subs[static_cast<std::size_t>(l)];
            sub.set_rhs(b);
            const double lambda = detail::find_lambda(sub, ps.P_max, cfg.power_tol, l);
            out.lambda[l] = lambda;
            const auto x = sub.solution(lambda);
            for (int k = 0; k < K; ++k)
            {
                CVec old = out.f[k].segment(l * M, M);
                out.f[k].segment(l * M, M) = x[k];
                change += (x[k] - old).squaredNorm();
                norm += x[k].squaredNorm();
                for (int j = 0; j < K; ++j)
                    s[j][k] += g[j].segment(l * M, M).dot(x[k] - old);
            }
        }
        out.sweeps = sweep + 1;
        if (ps.L == 1 || change <= cfg.sweep_tol * cfg.sweep_tol * std::max(norm, 1e-300))
            break;
    }
    return out;
}

struct WmmseState
{
    std::vector<CVec> w;
    std::vector<double> W;
    std::vector<CVec> f;
    std::vector<double> lambda;
    std::vector<double> objective; // h after each full iteration
    int iterations = 0;
};

inline double wmmse_objective(const PriorSet &ps, const std::vector<CVec> &f, const std::vector<CVec> &w,
                              const std::vector<double> &W, const JammingPowers &q)
{
    double h = 0.0;
    for (int k = 0; k < ps.K; ++k)
        h += W[k] * wmmse_mse(ps, f, w[k], q, k) - std::log(W[k]);
    return h;
}

/// Receiver, weight and precoder updates until h changes by less than tol
/// (relative) or max_inner iterations.
inline WmmseState wmmse_solve(const PriorSet &ps, const std::vector<CVec> &f0, const JammingPowers &q,
                              const WmmseConfig &cfg = {})
{
    cfg.validate();
    check_beamformers(ps, f0, q);
    WmmseState st;
    st.f = project_power(f0, ps.L, ps.M, ps.P_max);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.max_inner; ++it)
    {
        st.w = wmmse_receiver(ps, st.f, q);
        st.W.clear();
        for (int k = 0; k < ps.K; ++k)
            st.W.push_back(wmmse_weight(wmmse_mse(ps, st.f, st.w[k], q, k)));
        auto up = wmmse_precoder(ps, st.w, st.W, st.f, cfg);
        st.f = std::move(up.f);
        st.lambda = std::move(up.lambda);
        const double h = wmmse_objective(ps, st.f, st.w, st.W, q);
        st.objective.push_back(h);
        st.iterations = it + 1;
        if (std::abs(prev - h) <= cfg.tol * std::max(1.0, std::abs(h)))
            break;
        prev = h;
    }
    return st;
}

/// WMMSE replaces both beamforming updates of the alternation; the
/// receivers are normalized to unit norm before factorization.
inline DesignStage wmmse_stage(const WmmseConfig &wcfg, double delta)
{
    return [wcfg, delta](const PriorSet &ps, const std::vector<CVec> &f, const std::vector<CVec> &, const JammingPowers &q) {
        WmmseState st = wmmse_solve(ps, f, q, wcfg);
        StageOutput out;
        for (const auto &wk : st.w)
        {
            const double n = wk.norm();
            out.w_fd.push_back(n > 0.0 ? CVec(fix_phase(wk / n)) : CVec(CVec::Unit(wk.size(), 0)));
        }
        out.f_fd = std::move(st.f);
        out.eta = softmax_eta(sinr_lb(ps, out.f_fd, out.w_fd, q), delta);
        return out;
    };
}

inline AoResult wmmse_ao(const ScenarioConfig &sc, const PriorSet &ps, const AoConfig &cfg = {},
                         const WmmseConfig &wcfg = {})
{
    return run_alternation(sc, ps, cfg, wmmse_stage(wcfg, cfg.pga.delta));
}

} // namespace cfaj

#endif
