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

#ifndef CFAJ_HYBRID_HPP
#define CFAJ_HYBRID_HPP

// Hybrid analog/digital factorization X ~ F B with unit-modulus F.
//
// Alternating minimization of ||X - F B||_F^2:
//   digital step: B = pinv(F) X (exact least squares)
//   analog step:  one sweep of exact per-entry phase updates of F
// Both steps are exact block minimizations, so the residual never grows.

#include "transmit.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cfaj
{

struct FactorizationConfig
{
    int max_iters = 50;
    double tol = 1e-6; // stop when the residual drop is below tol * ||X||^2

    void validate() const
    {
        if (max_iters < 0 || !(tol >= 0.0))
            throw std::invalid_argument("FactorizationConfig: invalid limits");
    }
};

struct AnalogDigital
{
    CMat analog;                 // rows x n_rf, unit modulus
    CMat digital;                // n_rf x cols
    std::vector<double> residual; // ||X - F B||^2 after each digital step
};

namespace detail
{
inline CMat least_squares(const CMat &F, const CMat &X)
{
    return Eigen::CompleteOrthogonalDecomposition<CMat>(F).solve(X);
}

/// Exact factorization when n_rf >= 2 cols: each column x is the sum of two
/// unit-modulus vectors scaled by c = max|x| / 2,
///   x_m = c (e^{j(psi+d)} + e^{j(psi-d)}),  d = acos(|x_m| / 2c).
inline CMat split_phase_init(const CMat &X, int n_rf)
{
    CMat F = CMat::Ones(X.rows(), n_rf);
    for (Index k = 0; k < X.cols(); ++k)
    {
        const double c = 0.5 * X.col(k).cwiseAbs().maxCoeff();
        if (c == 0.0)
            continue;
        for (Index m = 0; m < X.rows(); ++m)
        {
            const double psi = std::arg(X(m, k));
            const double d = std::acos(std::min(1.0, std::abs(X(m, k)) / (2.0 * c)));
            F(m, 2 * k) = std::polar(1.0, psi + d);
            F(m, 2 * k + 1) = std::polar(1.0, psi - d);
        }
    }
    return F;
}

inline CMat svd_phase_init(const CMat &X, int n_rf)
{
    CMat F = CMat::Ones(X.rows(), n_rf);
    Eigen::JacobiSVD<CMat> svd(X, Eigen::ComputeFullU);
    const Index r = std::min<Index>(n_rf, svd.matrixU().cols());
    for (Index n = 0; n < r; ++n)
        F.col(n) = unit_modulus(svd.matrixU().col(n));
    return F;
}

/// One sweep of per-entry phase updates. With row residual e_m = X_m - F_m B,
/// the optimal phase of F(m,n) given the rest is arg(e_m' B_n^H), where e_m'
/// excludes entry n's own contribution.
inline void analog_sweep(CMat &F, const CMat &B, const CMat &X)
{
    for (Index m = 0; m < F.rows(); ++m)
    {
        Eigen::RowVectorXcd e = X.row(m) - F.row(m) * B;
        for (Index n = 0; n < F.cols(); ++n)
        {
            e += F(m, n) * B.row(n);
            const cd c = e.dot(B.row(n)); // sum_j conj(e_j) B_nj
            if (std::abs(c) > 0.0)
                F(m, n) = std::conj(c) / std::abs(c);
            e -= F(m, n) * B.row(n);
        }
    }
}
} // namespace detail

/// Factorizes X (rows x cols) with n_rf analog chains.
inline AnalogDigital factorize_block(const CMat &X, int n_rf, const FactorizationConfig &cfg = {})
{
    cfg.validate();
    if (n_rf < 1 || n_rf > X.rows())
        throw std::invalid_argument("factorize_block: need 1 <= n_rf <= rows");
    if (!all_finite(X))
        throw std::invalid_argument("factorize_block: non-finite input");
    AnalogDigital out;
    out.analog = n_rf >= 2 * X.cols() ? detail::split_phase_init(X, n_rf) : detail::svd_phase_init(X, n_rf);
    out.digital = detail::least_squares(out.analog, X);
    const double scale = X.squaredNorm();
    double res = (X - out.analog * out.digital).squaredNorm();
    out.residual.push_back(res);
    for (int it = 0; it < cfg.max_iters; ++it)
    {
        if (res <= 1e-30 * std::max(scale, 1e-300))
            break;
        detail::analog_sweep(out.analog, out.digital, X);
        out.digital = detail::least_squares(out.analog, X);
        const double next = (X - out.analog * out.digital).squaredNorm();
        out.residual.push_back(next);
        const double drop = res - next;
        res = next;
        if (drop < cfg.tol * scale)
            break;
    }
    return out;
}

struct PrecoderFactorization
{
    std::vector<CMat> F_RF;   // [l], M x N_RF
    std::vector<CVec> f_BB;   // [k], L N_RF
    std::vector<std::vector<double>> residual; // [l]
    int M = 0;
    int N_RF = 0;

    /// Block-diagonal analog precoder, (L M) x (L N_RF).
    CMat analog_matrix() const
    {
        const Index L = static_cast<Index>(F_RF.size());
        CMat F = CMat::Zero(L * M, L * N_RF);
        for (Index l = 0; l < L; ++l)
            F.block(l * M, l * N_RF, M, N_RF) = F_RF[static_cast<std::size_t>(l)];
        return F;
    }

    std::vector<CVec> effective() const
    {
        std::vector<CVec> f;
        for (const auto &b : f_BB)
        {
            CVec fk(static_cast<Index>(F_RF.size()) * M);
            for (std::size_t l = 0; l < F_RF.size(); ++l)
                fk.segment(static_cast<Index>(l) * M, M) = F_RF[l] * b.segment(static_cast<Index>(l) * N_RF, N_RF);
            f.push_back(std::move(fk));
        }
        return f;
    }
};

/// Per-AP factorization of [f_{l,1} ... f_{l,K}] followed by per-AP power
/// re-projection of the digital part.
inline PrecoderFactorization factorize_precoder(const std::vector<CVec> &f, int L, int M, int N_RF, double P_max,
                                                const FactorizationConfig &cfg = {})
{
    if (f.empty())
        throw std::invalid_argument("factorize_precoder: no beamformers");
    if (N_RF < 1 || N_RF > M)
        throw std::invalid_argument("factorize_precoder: need 1 <= N_RF <= M");
    const Index K = static_cast<Index>(f.size());
    PrecoderFactorization out;
    out.M = M;
    out.N_RF = N_RF;
    out.f_BB.assign(f.size(), CVec::Zero(static_cast<Index>(L) * N_RF));
    for (int l = 0; l < L; ++l)
    {
        CMat X(M, K);
        for (Index k = 0; k < K; ++k)
        {
            if (f[k].size() != static_cast<Index>(L) * M)
                throw std::invalid_argument("factorize_precoder: beamformer has wrong dimension");
            X.col(k) = f[k].segment(static_cast<Index>(l) * M, M);
        }
        AnalogDigital ad = factorize_block(X, N_RF, cfg);
        double p = (ad.analog * ad.digital).squaredNorm();
        if (p > P_max)
            ad.digital *= std::sqrt(P_max / p);
        for (Index k = 0; k < K; ++k)
            out.f_BB[k].segment(static_cast<Index>(l) * N_RF, N_RF) = ad.digital.col(k);
        out.F_RF.push_back(std::move(ad.analog));
        out.residual.push_back(std::move(ad.residual));
    }
    return out;
}

struct CombinerFactorization
{
    CMat W_RF; // M_U x M_RF
    CVec w_BB; // M_RF
    std::vector<double> residual;

    CVec effective() const { return W_RF * w_BB; }
};

/// Factorizes one receive vector; the result is rescaled so that
/// ||W_RF w_BB|| = 1.
inline CombinerFactorization factorize_combiner(const CVec &w, int M_RF, const FactorizationConfig &cfg = {})
{
    if (M_RF < 1 || M_RF > w.size())
        throw std::invalid_argument("factorize_combiner: need 1 <= M_RF <= M_U");
    AnalogDigital ad = factorize_block(CMat(w), M_RF, cfg);
    CombinerFactorization out;
    out.W_RF = std::move(ad.analog);
    out.w_BB = ad.digital.col(0);
    out.residual = std::move(ad.residual);
    const double n = (out.W_RF * out.w_BB).norm();
    if (n > 0.0)
        out.w_BB /= n;
    else
    {
        out.w_BB.setZero();
        out.w_BB(0) = 1.0 / std::sqrt(static_cast<double>(w.size()));
    }
    return out;
}

} // namespace cfaj

#endif
