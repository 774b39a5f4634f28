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

#ifndef CFAJ_TRANSMIT_HPP
#define CFAJ_TRANSMIT_HPP

// Max-min fair transmit beamforming under per-AP power constraints. The
// minimum over UEs is replaced by the softmax surrogate
//   eta = sum_k xi_k e^{delta xi_k} / sum_k e^{delta xi_k},  delta < 0,
// and maximized by projected gradient ascent with Armijo backtracking.
//
// Gradient convention: for a real step eps and direction u,
//   eta(f + eps u) - eta(f) = 2 eps Re<g, u> + O(eps^2).

#include "receive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cfaj
{

struct PgaConfig
{
    double delta = -4.0;
    int max_iters = 200;
    double armijo_init = 1.0;
    double armijo_shrink = 0.5;
    double armijo_c = 1e-4;
    int max_backtracks = 30;
    double tol_eta = 1e-5;
    // Spectral (Barzilai-Borwein) trial step after the first iteration.
    bool spectral_step = true;
    bool record_trace = false;

    void validate() const
    {
        if (!(delta < 0.0))
            throw std::invalid_argument("PgaConfig: delta must be negative");
        if (!(tol_eta > 0.0))
            throw std::invalid_argument("PgaConfig: tol_eta must be positive");
        if (max_iters < 0 || max_backtracks < 0)
            throw std::invalid_argument("PgaConfig: iteration limits must be nonnegative");
        if (!(armijo_init > 0.0) || !(armijo_shrink > 0.0 && armijo_shrink < 1.0))
            throw std::invalid_argument("PgaConfig: invalid Armijo parameters");
    }
};

/// The SINR lower bound with receivers fixed reduces to scalar products
/// with the effective channels g_k = Hbar_k^H w_k:
///   xi_k = |g_k^H f_k|^2 / (sum_{j != k} |g_k^H f_j|^2 + zeta_k)
/// zeta_k = sum_g q_{g,k} w_k^H R_{g,k} w_k + EN^UB_k + QE^UB_k + sigma2.
struct SinrModel
{
    std::vector<CVec> g;
    std::vector<double> zeta;
    int L = 0;
    int M = 0;
    double P_max = 0.0;

    int K() const { return static_cast<int>(g.size()); }
};

inline SinrModel make_sinr_model(const PriorSet &ps, const std::vector<CVec> &w, const JammingPowers &q)
{
    if (static_cast<int>(w.size()) != ps.K)
        throw std::invalid_argument("expected one receive vector per UE");
    SinrModel m;
    m.L = ps.L;
    m.M = ps.M;
    m.P_max = ps.P_max;
    for (int k = 0; k < ps.K; ++k)
    {
        const CVec &wk = w[static_cast<std::size_t>(k)];
        m.g.push_back(ps.Hbar[static_cast<std::size_t>(k)].adjoint() * wk);
        double jam = 0.0;
        for (int g = 0; g < ps.G; ++g)
            jam += q(g, k) * (wk.adjoint() * ps.R_jam[g][k] * wk)(0).real();
        m.zeta.push_back(jam + ps.floor_term(k));
    }
    return m;
}

inline std::vector<double> sinr_lb(const SinrModel &m, const std::vector<CVec> &f)
{
    const int K = m.K();
    std::vector<double> xi(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
    {
        double interference = 0.0;
        double signal = 0.0;
        for (int j = 0; j < K; ++j)
        {
            double p = std::norm(m.g[k].dot(f[static_cast<std::size_t>(j)]));
            if (j == k)
                signal = p;
            else
                interference += p;
        }
        xi[static_cast<std::size_t>(k)] = signal / (interference + m.zeta[k]);
    }
    return xi;
}

/// xi_k per UE for transmit vectors f and unit-norm receivers w.
inline std::vector<double> sinr_lb(const PriorSet &ps, const std::vector<CVec> &f, const std::vector<CVec> &w,
                                   const JammingPowers &q)
{
    check_beamformers(ps, f, q);
    return sinr_lb(make_sinr_model(ps, w, q), f);
}

namespace detail
{
/// Softmax weights p_k = e^{delta xi_k} / sum_j e^{delta xi_j}, shifted for
/// stability.
inline std::vector<double> softmax_weights(const std::vector<double> &xi, double delta)
{
    double top = -std::numeric_limits<double>::infinity();
    for (double x : xi)
        top = std::max(top, delta * x);
    std::vector<double> p(xi.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k)
    {
        p[k] = std::exp(delta * xi[k] - top);
        sum += p[k];
    }
    for (double &v : p)
        v /= sum;
    return p;
}
} // namespace detail

inline double softmax_eta(const std::vector<double> &xi, double delta)
{
    if (!(delta < 0.0))
        throw std::invalid_argument("softmax_eta: delta must be negative");
    if (xi.empty())
        throw std::invalid_argument("softmax_eta: empty input");
    auto p = detail::softmax_weights(xi, delta);
    double eta = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k)
        eta += p[k] * xi[k];
    return eta;
}

/// d eta / d xi_k = e^{delta xi_k} [(1 + delta xi_k) S0 - delta S1] / S0^2
/// with S0 = sum e^{delta xi}, S1 = sum xi e^{delta xi}; evaluated as
/// p_k (1 + delta (xi_k - eta)).
inline std::vector<double> softmax_eta_sensitivity(const std::vector<double> &xi, double delta)
{
    auto p = detail::softmax_weights(xi, delta);
    double eta = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k)
        eta += p[k] * xi[k];
    std::vector<double> d(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k)
        d[k] = p[k] * (1.0 + delta * (xi[k] - eta));
    return d;
}

/// grad_{f_k} eta = sum_kt (d eta / d xi_kt) grad_{f_k} xi_kt, where
///   grad_{f_k} xi_k  =  g_k g_k^H f_k / D_k
///   grad_{f_k} xi_kt = -|g_kt^H f_kt|^2 g_kt g_kt^H f_k / D_kt^2   (kt != k)
/// and D_kt = sum_{j != kt} |g_kt^H f_j|^2 + zeta_kt.
inline std::vector<CVec> eta_gradient(const SinrModel &m, const std::vector<CVec> &f, double delta)
{
    const int K = m.K();
    std::vector<double> signal(static_cast<std::size_t>(K));
    std::vector<double> denom(static_cast<std::size_t>(K));
    std::vector<double> xi(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
    {
        double interference = 0.0;
        for (int j = 0; j < K; ++j)
        {
            double p = std::norm(m.g[k].dot(f[static_cast<std::size_t>(j)]));
            if (j == k)
                signal[k] = p;
            else
                interference += p;
        }
        denom[k] = interference + m.zeta[k];
        xi[k] = signal[k] / denom[k];
    }
    const auto d = softmax_eta_sensitivity(xi, delta);

    std::vector<CVec> grad(static_cast<std::size_t>(K), CVec::Zero(f.front().size()));
    for (int k = 0; k < K; ++k)
        for (int kt = 0; kt < K; ++kt)
        {
            const double c = kt == k ? d[kt] / denom[kt] : -d[kt] * signal[kt] / (denom[kt] * denom[kt]);
            grad[k] += (c * m.g[kt].dot(f[static_cast<std::size_t>(k)])) * m.g[kt];
        }
    return grad;
}

inline std::vector<CVec> eta_gradient(const PriorSet &ps, const std::vector<CVec> &f, const std::vector<CVec> &w,
                                      const JammingPowers &q, double delta)
{
    check_beamformers(ps, f, q);
    return eta_gradient(make_sinr_model(ps, w, q), f, delta);
}

inline double ap_power(const std::vector<CVec> &f, int l, int M)
{
    double p = 0.0;
    for (const auto &fk : f)
        p += fk.segment(static_cast<Index>(l) * M, M).squaredNorm();
    return p;
}

/// Euclidean projection onto the per-AP power balls: AP l's blocks are
/// scaled by sqrt(P_max / p_l) whenever p_l = sum_k ||f_lk||^2 > P_max.
inline std::vector<CVec> project_power(std::vector<CVec> f, int L, int M, double P_max)
{
    for (int l = 0; l < L; ++l)
    {
        const double p = ap_power(f, l, M);
        if (p <= P_max)
            continue;
        const double s = std::sqrt(P_max / p);
        for (auto &fk : f)
            fk.segment(static_cast<Index>(l) * M, M) *= s;
    }
    return f;
}

/// MRT start: f_lk = sqrt(P_max / K) v_1(Hbar_lk), v_1 the dominant right
/// singular vector.
inline std::vector<CVec> mrt_init(const PriorSet &ps)
{
    std::vector<CVec> f(static_cast<std::size_t>(ps.K), CVec::Zero(ps.tx_dim()));
    const double amp = std::sqrt(ps.P_max / ps.K);
    for (int k = 0; k < ps.K; ++k)
        for (int l = 0; l < ps.L; ++l)
        {
            Eigen::JacobiSVD<CMat> svd(ps.Hbar_block(l, k), Eigen::ComputeThinV);
            f[k].segment(static_cast<Index>(l) * ps.M, ps.M) = amp * svd.matrixV().col(0);
        }
    return project_power(std::move(f), ps.L, ps.M, ps.P_max);
}

struct TxState
{
    std::vector<CVec> f;
    std::vector<double> zeta;
    std::vector<double> xi;
    double eta = 0.0;
    int iterations = 0;
    bool stalled = false;
    std::vector<double> eta_trace;
};

/// Projected gradient ascent on eta. Each accepted step satisfies the
/// Armijo condition eta(f+) >= eta(f) + c * 2 Re<grad, f+ - f>, so eta never
/// decreases. The trial step starts at twice the last accepted one.
inline TxState pga_solve(const SinrModel &m, const std::vector<CVec> &f0, const PgaConfig &cfg)
{
    cfg.validate();
    TxState st;
    st.zeta = m.zeta;
    st.f = project_power(f0, m.L, m.M, m.P_max);
    st.xi = sinr_lb(m, st.f);
    st.eta = softmax_eta(st.xi, cfg.delta);
    if (cfg.record_trace)
        st.eta_trace.push_back(st.eta);

    double step = cfg.armijo_init;
    std::vector<CVec> f_prev, g_prev;
    for (int it = 0; it < cfg.max_iters; ++it)
    {
        const auto grad = eta_gradient(m, st.f, cfg.delta);
        double gnorm2 = 0.0;
        for (const auto &g : grad)
            gnorm2 += g.squaredNorm();
        if (gnorm2 == 0.0 || !std::isfinite(gnorm2))
            break;
        if (cfg.spectral_step && !f_prev.empty())
        {
            // Ascent form of the BB1 step: <s,s> / -<s,y>, with y the change in gradient.
            double ss = 0.0, sy = 0.0;
            for (std::size_t k = 0; k < grad.size(); ++k)
            {
                const CVec s = st.f[k] - f_prev[k];
                ss += s.squaredNorm();
                sy += s.dot(grad[k] - g_prev[k]).real();
            }
            if (sy < 0.0 && std::isfinite(ss / -sy))
                step = ss / -sy;
        }
        f_prev = st.f;
        g_prev = grad;

        bool accepted = false;
        double lambda = step;
        std::vector<CVec> cand;
        std::vector<double> xi_c;
        double eta_c = st.eta;
        for (int b = 0; b <= cfg.max_backtracks; ++b)
        {
            cand = st.f;
            for (std::size_t k = 0; k < cand.size(); ++k)
                cand[k] += lambda * grad[k];
            cand = project_power(std::move(cand), m.L, m.M, m.P_max);
            double gain = 0.0;
            for (std::size_t k = 0; k < cand.size(); ++k)
                gain += 2.0 * grad[k].dot(cand[k] - st.f[k]).real();
            xi_c = sinr_lb(m, cand);
            eta_c = softmax_eta(xi_c, cfg.delta);
            if (eta_c >= st.eta + cfg.armijo_c * gain && eta_c >= st.eta)
            {
                accepted = true;
                break;
            }
            lambda *= cfg.armijo_shrink;
        }
        if (!accepted)
        {
            st.stalled = true;
            break;
        }
        const double change = eta_c - st.eta;
        st.f = std::move(cand);
        st.xi = std::move(xi_c);
        st.eta = eta_c;
        st.iterations = it + 1;
        if (cfg.record_trace)
            st.eta_trace.push_back(st.eta);
        step = lambda / cfg.armijo_shrink;
        if (std::abs(change) < cfg.tol_eta)
            break;
    }
    return st;
}

inline TxState pga_solve(const PriorSet &ps, const std::vector<CVec> &f0, const std::vector<CVec> &w,
                         const JammingPowers &q, const PgaConfig &cfg)
{
    check_beamformers(ps, f0, q);
    return pga_solve(make_sinr_model(ps, w, q), f0, cfg);
}

} // namespace cfaj

#endif
