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

#ifndef CFAJ_TESTS_ORACLES_HPP
#define CFAJ_TESTS_ORACLES_HPP

// Reference computations that share no code with the library paths they
// check: finite differences, dense eigensolves, Monte Carlo expectations and
// brute-force scans.

#include "cfaj/cfaj.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace cfaj::test
{

/// Softmax surrogate written out directly (no max shift).
inline double eta_direct(const std::vector<double> &xi, double delta)
{
    double num = 0.0, den = 0.0;
    for (double x : xi)
    {
        num += x * std::exp(delta * x);
        den += std::exp(delta * x);
    }
    return num / den;
}

/// xi_k from the unreduced expression: (w^H Hbar f_k)(...)^* over the sum of
/// interference, jamming quadratic forms, the two bounds and noise.
inline std::vector<double> xi_direct(const PriorSet &ps, const std::vector<CVec> &f, const std::vector<CVec> &w,
                                     const JammingPowers &q)
{
    std::vector<double> xi;
    for (int k = 0; k < ps.K; ++k)
    {
        const CMat &H = ps.Hbar[k];
        const cd s = (w[k].adjoint() * H * f[k])(0);
        double den = ps.en_ub[k] + ps.qe_ub[k] + ps.sigma2;
        for (int j = 0; j < ps.K; ++j)
            if (j != k)
                den += std::norm((w[k].adjoint() * H * f[j])(0));
        for (int g = 0; g < ps.G; ++g)
            den += q(g, k) * (w[k].adjoint() * ps.R_jam[g][k] * w[k])(0).real();
        xi.push_back(std::norm(s) / den);
    }
    return xi;
}

/// Central differences of eta along each real and imaginary coordinate.
/// With the convention eta(f + eps u) - eta(f) = 2 eps Re<g, u>, the
/// derivative along the real unit e_i is 2 Re g_i and along j e_i is 2 Im g_i.
inline std::vector<CVec> eta_gradient_fd(const PriorSet &ps, const std::vector<CVec> &f, const std::vector<CVec> &w,
                                         const JammingPowers &q, double delta, double h = 1e-6)
{
    std::vector<CVec> g;
    for (int k = 0; k < ps.K; ++k)
    {
        CVec gk(f[k].size());
        for (Index i = 0; i < f[k].size(); ++i)
        {
            double parts[2];
            for (int c = 0; c < 2; ++c)
            {
                const cd step = c == 0 ? cd(h, 0.0) : cd(0.0, h);
                auto fp = f, fm = f;
                fp[k](i) += step;
                fm[k](i) -= step;
                parts[c] = (eta_direct(xi_direct(ps, fp, w, q), delta) - eta_direct(xi_direct(ps, fm, w, q), delta)) /
                           (2.0 * h);
            }
            gk(i) = cd(parts[0] / 2.0, parts[1] / 2.0);
        }
        g.push_back(gk);
    }
    return g;
}

/// Largest generalized eigenvalue and eigenvector of (A, B) from a dense
/// solve of the equivalent real symmetric-definite problem.
struct GeneralizedEig
{
    double value = 0.0;
    CVec vector;
};

inline GeneralizedEig dense_generalized_eig(const CMat &A, const CMat &B)
{
    const Index n = A.rows();
    auto realify = [n](const CMat &X) {
        Eigen::MatrixXd R(2 * n, 2 * n);
        R << X.real(), -X.imag(), X.imag(), X.real();
        return Eigen::MatrixXd(0.5 * (R + R.transpose()));
    };
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(realify(A), realify(B));
    const Index top = 2 * n - 1;
    GeneralizedEig out;
    out.value = es.eigenvalues()(top);
    const Eigen::VectorXd v = es.eigenvectors().col(top);
    out.vector = CVec(n);
    for (Index i = 0; i < n; ++i)
        out.vector(i) = cd(v(i), v(n + i));
    out.vector.normalize();
    return out;
}

/// Hermitian square root of a PSD matrix (negative round-off clipped).
inline CMat psd_sqrt(const CMat &C)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(C));
    return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
           es.eigenvectors().adjoint();
}

struct InterferenceEstimate
{
    double en = 0.0;
    double qe = 0.0;
};

/// Sample means over `draws` realizations of the estimation error
/// vec(Htilde_k) ~ CN(0, Q_k) and quantization error Sigma_{l,k} ~
/// CN(0, sigma_q2[l][k] I) of
///   EN_k = sum_j |w_k^H Htilde_k f_j|^2,  QE_k = sum_j |w_k^H Sigma_k f_j|^2.
inline InterferenceEstimate monte_carlo_en_qe(const PriorSet &ps, const std::vector<CVec> &f, const CVec &w, int k,
                                              int draws, Rng &rng)
{
    const Index M = ps.M, MU = ps.M_U;
    std::vector<CMat> roots;
    for (int l = 0; l < ps.L; ++l)
        roots.push_back(psd_sqrt(ps.Q[k].block(l)));
    InterferenceEstimate est;
    for (int n = 0; n < draws; ++n)
    {
        CMat Ht(MU, ps.L * M), Sg(MU, ps.L * M);
        for (int l = 0; l < ps.L; ++l)
        {
            const CVec z = roots[l] * complex_gaussian_vector(rng, M * MU);
            Ht.middleCols(l * M, M) = Eigen::Map<const CMat>(z.data(), MU, M);
            Sg.middleCols(l * M, M) = complex_gaussian_matrix(rng, MU, M, ps.sigma_q2[l][k]);
        }
        for (const auto &fj : f)
        {
            est.en += std::norm(w.dot(Ht * fj));
            est.qe += std::norm(w.dot(Sg * fj));
        }
    }
    est.en /= draws;
    est.qe /= draws;
    return est;
}

/// Largest grid value with min_xi(q) >= gamma on a uniform grid of n points
/// over [0, q_max]; -1 when even q = 0 fails.
inline double grid_scan_max_q(const std::function<double(double)> &min_xi, double gamma, double q_max, int n)
{
    double best = -1.0;
    for (int i = 0; i < n; ++i)
    {
        const double q = q_max * i / (n - 1);
        if (min_xi(q) >= gamma)
            best = q;
        else
            break;
    }
    return best;
}

} // namespace cfaj::test

#endif
