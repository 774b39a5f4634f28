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

#ifndef CFAJ_DUMPS_HPP
#define CFAJ_DUMPS_HPP

// Audit dumps: realized channels as labeled matrix blocks, and eigenvalue
// spectra of the jamming covariances and estimation-error covariances as CSV.
//
// Channel dump layout:
//   cfaj-channels 1
//   dims <L> <K> <G> <M_U> <M> <M_J>
//   H_<l>_<k> <M_U> <M> ...   for l, k in order
//   J_<g>_<k> <M_U> <M_J> ... for g, k in order

#include "matrix_io.hpp"
#include "priors.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cfaj
{

struct ChannelDump
{
    int L = 0;
    int K = 0;
    int G = 0;
    std::vector<std::vector<CMat>> H; // [l][k]
    std::vector<std::vector<CMat>> J; // [g][k]
};

inline void write_channels(std::ostream &os, const ChannelSet &cs)
{
    const Index M_U = cs.L > 0 ? cs.H(0, 0).rows() : 0;
    const Index M = cs.L > 0 ? cs.H(0, 0).cols() : 0;
    const Index M_J = cs.G > 0 ? cs.J(0, 0).cols() : 0;
    os << "cfaj-channels 1\n";
    os << "dims " << cs.L << ' ' << cs.K << ' ' << cs.G << ' ' << M_U << ' ' << M << ' ' << M_J << '\n';
    for (int l = 0; l < cs.L; ++l)
        for (int k = 0; k < cs.K; ++k)
            write_matrix_block(os, "H_" + std::to_string(l) + "_" + std::to_string(k), cs.H(l, k));
    for (int g = 0; g < cs.G; ++g)
        for (int k = 0; k < cs.K; ++k)
            write_matrix_block(os, "J_" + std::to_string(g) + "_" + std::to_string(k), cs.J(g, k));
}

inline ChannelDump read_channels(std::istream &is)
{
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "cfaj-channels" || version != 1)
        throw std::runtime_error("read_channels: not a version-1 channel dump");
    std::string tag;
    ChannelDump d;
    Index M_U = 0, M = 0, M_J = 0;
    if (!(is >> tag >> d.L >> d.K >> d.G >> M_U >> M >> M_J) || tag != "dims")
        throw std::runtime_error("read_channels: malformed dims line");
    auto expect = [&](const std::string &label, Index rows, Index cols) {
        MatrixBlock b = read_matrix_block(is);
        if (b.label != label || b.matrix.rows() != rows || b.matrix.cols() != cols)
            throw std::runtime_error("read_channels: expected block " + label);
        return b.matrix;
    };
    d.H.resize(static_cast<std::size_t>(d.L));
    for (int l = 0; l < d.L; ++l)
        for (int k = 0; k < d.K; ++k)
            d.H[l].push_back(expect("H_" + std::to_string(l) + "_" + std::to_string(k), M_U, M));
    d.J.resize(static_cast<std::size_t>(d.G));
    for (int g = 0; g < d.G; ++g)
        for (int k = 0; k < d.K; ++k)
            d.J[g].push_back(expect("J_" + std::to_string(g) + "_" + std::to_string(k), M_U, M_J));
    return d;
}

/// CSV with columns kind,index,k,position,eigenvalue. kind is "R_jam" (index
/// = jammer) or "Q" (index = AP block); eigenvalues ascending.
inline void write_prior_spectra(std::ostream &os, const PriorSet &ps)
{
    os << "kind,index,k,position,eigenvalue\n";
    for (int g = 0; g < ps.G; ++g)
        for (int k = 0; k < ps.K; ++k)
        {
            Eigen::SelfAdjointEigenSolver<CMat> es(ps.R_jam[g][k], Eigen::EigenvaluesOnly);
            for (Index i = 0; i < es.eigenvalues().size(); ++i)
                os << "R_jam," << g << ',' << k << ',' << i << ',' << format_double(es.eigenvalues()(i)) << '\n';
        }
    for (int k = 0; k < ps.K; ++k)
        for (int l = 0; l < ps.Q[k].num_blocks(); ++l)
        {
            Eigen::SelfAdjointEigenSolver<CMat> es(ps.Q[k].block(l), Eigen::EigenvaluesOnly);
            for (Index i = 0; i < es.eigenvalues().size(); ++i)
                os << "Q," << l << ',' << k << ',' << i << ',' << format_double(es.eigenvalues()(i)) << '\n';
        }
}

} // namespace cfaj

#endif
