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

#ifndef CFAJ_TESTS_FIXTURES_HPP
#define CFAJ_TESTS_FIXTURES_HPP

// Small synthetic instances shared by the test programs.

#include "cfaj/cfaj.hpp"

#include <cstdint>
#include <vector>

namespace cfaj::test
{

struct Dims
{
    int L = 2;
    int K = 3;
    int G = 2;
    int M = 4;
    int M_U = 2;
};

/// Random PSD matrix of the given rank, scaled to trace ~ scale * n.
inline CMat random_psd(Rng &rng, Index n, Index rank, double scale = 1.0)
{
    CMat X = complex_gaussian_matrix(rng, n, rank, scale / static_cast<double>(rank));
    return hermitian_part(X * X.adjoint());
}

/// PriorSet with i.i.d. CN(0, 1) channels, unit-ish jamming covariances and
/// noise/bound floors of comparable size, so every term of the SINR matters.
inline PriorSet random_priors(Rng &rng, const Dims &d, double sigma2 = 0.1, double bound = 0.05)
{
    PriorSet ps;
    ps.L = d.L;
    ps.K = d.K;
    ps.G = d.G;
    ps.M = d.M;
    ps.M_U = d.M_U;
    ps.P_max = 1.0;
    ps.sigma2 = sigma2;
    ps.alpha = 1.0;
    for (int k = 0; k < d.K; ++k)
    {
        ps.Hbar.push_back(complex_gaussian_matrix(rng, d.M_U, static_cast<Index>(d.L) * d.M));
        ps.Q.push_back(ErrorCovariance::isotropic(d.L, static_cast<Index>(d.M) * d.M_U, 0.0));
        ps.lambda_max_Q.push_back(0.0);
        ps.omega.push_back(0.0);
        ps.en_ub.push_back(bound);
        ps.qe_ub.push_back(bound);
    }
    ps.sigma_q2.assign(static_cast<std::size_t>(d.L), std::vector<double>(static_cast<std::size_t>(d.K), 0.0));
    ps.R_jam.resize(static_cast<std::size_t>(d.G));
    for (int g = 0; g < d.G; ++g)
        for (int k = 0; k < d.K; ++k)
            ps.R_jam[g].push_back(random_psd(rng, d.M_U, 1));
    return ps;
}

inline std::vector<CVec> random_transmit(Rng &rng, const PriorSet &ps)
{
    std::vector<CVec> f;
    for (int k = 0; k < ps.K; ++k)
        f.push_back(complex_gaussian_vector(rng, ps.tx_dim(), 1.0 / (ps.K * ps.M)));
    return project_power(std::move(f), ps.L, ps.M, ps.P_max);
}

inline std::vector<CVec> random_receive(Rng &rng, const PriorSet &ps)
{
    std::vector<CVec> w;
    for (int k = 0; k < ps.K; ++k)
        w.push_back(random_unit_vector(rng, ps.M_U));
    return w;
}

/// Channels and priors of one desk-scale trial, as the harness builds them.
inline TrialScene desk_trial(std::uint64_t seed, const ScenarioConfig &sc = ScenarioConfig::desk(),
                             const EstimationConfig &est = {})
{
    return make_trial_scene(PointConfig{sc, est}, seed, true, false);
}

} // namespace cfaj::test

#endif
