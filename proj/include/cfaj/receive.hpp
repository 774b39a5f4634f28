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

#ifndef CFAJ_RECEIVE_HPP
#define CFAJ_RECEIVE_HPP

// Full-digital receive beamforming by maximizing the SINR lower bound
//   xi_k(w) = w^H A_k w / w^H B_k w
// as a generalized Rayleigh quotient.

#include "priors.hpp"

#include <stdexcept>
#include <vector>

namespace cfaj
{

/// Jamming powers q_{g,k}, G x K, in watts.
using JammingPowers = RMat;

inline JammingPowers uniform_jamming(int G, int K, double q) { return JammingPowers::Constant(G, K, q); }

inline void check_beamformers(const PriorSet &ps, const std::vector<CVec> &f, const JammingPowers &q)
{
    if (static_cast<int>(f.size()) != ps.K)
        throw std::invalid_argument("expected one transmit vector per UE");
    for (const auto &fk : f)
    {
        if (fk.size() != ps.tx_dim())
            throw std::invalid_argument("transmit vector has wrong dimension");
        if (!all_finite(fk))
            throw std::invalid_argument("transmit vector has non-finite entries");
    }
    if (q.rows() != ps.G || q.cols() != ps.K)
        throw std::invalid_argument("jamming power matrix must be G x K");
    if (!q.allFinite() || (q.size() > 0 && q.minCoeff() < 0.0))
        throw std::invalid_argument("jamming powers must be finite and nonnegative");
}

/// sum_g q_{g,k} R_{g,k}
inline CMat jamming_covariance(const PriorSet &ps, const JammingPowers &q, int k)
{
    CMat S = CMat::Zero(ps.M_U, ps.M_U);
    for (int g = 0; g < ps.G; ++g)
        S += q(g, k) * ps.R_jam[g][k];
    return S;
}

struct GrqOperands
{
    CVec a; // Hbar_k f_k, so A = a a^H
    CMat A;
    CMat B;
};

/// A_k = Hbar_k f_k f_k^H Hbar_k^H
/// B_k = sum_{j != k} Hbar_k f_j f_j^H Hbar_k^H + sum_g q_{g,k} R_{g,k}
///       + (EN^UB_k + QE^UB_k + sigma2) I
inline GrqOperands build_grq_operands(const PriorSet &ps, const std::vector<CVec> &f, const JammingPowers &q, int k)
{
    check_beamformers(ps, f, q);
    const CMat &H = ps.Hbar[static_cast<std::size_t>(k)];
    GrqOperands op;
    op.a = H * f[static_cast<std::size_t>(k)];
    op.A = op.a * op.a.adjoint();
    op.B = jamming_covariance(ps, q, k);
    for (int j = 0; j < ps.K; ++j)
    {
        if (j == k)
            continue;
        CVec b = H * f[static_cast<std::size_t>(j)];
        op.B += b * b.adjoint();
    }
    op.B.diagonal().array() += ps.floor_term(k);
    op.B = hermitian_part(op.B);
    return op;
}

inline double rayleigh_quotient(const CMat &A, const CMat &B, const CVec &w)
{
    return (w.adjoint() * A * w)(0).real() / (w.adjoint() * B * w)(0).real();
}

struct GrqSolution
{
    CVec w;
    double quotient = 0.0;
};

/// Dominant generalized eigenvector of (A, B) for rank-one A = a a^H:
/// w = B^-1 a / ||B^-1 a||, with quotient a^H B^-1 a. The global phase is
/// fixed so that the largest-magnitude entry is real and nonnegative.
inline GrqSolution grq_receiver(const GrqOperands &op)
{
    if (!all_finite(op.B) || !all_finite(op.a))
        throw std::invalid_argument("grq_receiver: non-finite operands");
    CVec x = solve_hpd(op.B, op.a);
    GrqSolution s;
    const double n = x.norm();
    if (n == 0.0)
    {
        // a = 0: every unit vector attains the (zero) optimum.
        s.w = CVec::Zero(op.a.size());
        s.w(0) = 1.0;
        return s;
    }
    s.w = fix_phase(x / n);
    s.quotient = rayleigh_quotient(op.A, op.B, s.w);
    return s;
}

/// Receive beamformers of all UEs, solved independently.
inline std::vector<CVec> receive_beamformers(const PriorSet &ps, const std::vector<CVec> &f, const JammingPowers &q)
{
    std::vector<CVec> w;
    w.reserve(static_cast<std::size_t>(ps.K));
    for (int k = 0; k < ps.K; ++k)
        w.push_back(grq_receiver(build_grq_operands(ps, f, q, k)).w);
    return w;
}

} // namespace cfaj

#endif
