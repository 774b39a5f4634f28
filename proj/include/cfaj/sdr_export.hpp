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

#ifndef CFAJ_SDR_EXPORT_HPP
#define CFAJ_SDR_EXPORT_HPP

// Export of the lifted transmit problem for an external SDP solver. With
// receivers and jamming powers fixed, the variables are U_k = f_k f_k^H
// (L M x L M, PSD; rank one dropped):
//
//   maximize   t
//   subject to tr(Phi_k U_k) >= t (sum_{j != k} tr(Phi_k U_j) + zeta_k)   all k
//              sum_k tr(S_l U_k) <= P_max                                  all l
//              U_k >= 0
//
// Phi_k = Hbar_k^H w_k w_k^H Hbar_k, zeta_k as in the SINR lower bound, and
// S_l the diagonal selector of AP l's antenna block.
//
// File layout:
//   cfaj-sdr 1
//   dims <L> <M> <K>
//   P_max <value>
//   zeta <k> <value>          K lines
//   Phi_<k> <LM> <LM> ...     K matrix blocks
//   S_<l> <LM> <LM> ...       L matrix blocks
//   end

#include "matrix_io.hpp"
#include "transmit.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfaj
{

struct SdrInstance
{
    int L = 0;
    int M = 0;
    int K = 0;
    double P_max = 0.0;
    std::vector<double> zeta; // [k]
    std::vector<CMat> Phi;    // [k]
    std::vector<CMat> S;      // [l]
};

inline CMat ap_selector(int L, int M, int l)
{
    CMat S = CMat::Zero(static_cast<Index>(L) * M, static_cast<Index>(L) * M);
    S.diagonal().segment(static_cast<Index>(l) * M, M).setOnes();
    return S;
}

inline SdrInstance make_sdr_instance(const PriorSet &ps, const std::vector<CVec> &w, const JammingPowers &q)
{
    const SinrModel m = make_sinr_model(ps, w, q);
    SdrInstance inst;
    inst.L = ps.L;
    inst.M = ps.M;
    inst.K = ps.K;
    inst.P_max = ps.P_max;
    inst.zeta = m.zeta;
    for (const auto &g : m.g)
        inst.Phi.push_back(g * g.adjoint());
    for (int l = 0; l < ps.L; ++l)
        inst.S.push_back(ap_selector(ps.L, ps.M, l));
    return inst;
}

inline void write_sdr(std::ostream &os, const SdrInstance &inst)
{
    os << "cfaj-sdr 1\n";
    os << "dims " << inst.L << ' ' << inst.M << ' ' << inst.K << '\n';
    os << "P_max " << format_double(inst.P_max) << '\n';
    for (std::size_t k = 0; k < inst.zeta.size(); ++k)
        os << "zeta " << k << ' ' << format_double(inst.zeta[k]) << '\n';
    for (std::size_t k = 0; k < inst.Phi.size(); ++k)
        write_matrix_block(os, "Phi_" + std::to_string(k), inst.Phi[k]);
    for (std::size_t l = 0; l < inst.S.size(); ++l)
        write_matrix_block(os, "S_" + std::to_string(l), inst.S[l]);
    os << "end\n";
}

inline SdrInstance read_sdr(std::istream &is)
{
    std::string tok;
    int version = 0;
    if (!(is >> tok >> version) || tok != "cfaj-sdr" || version != 1)
        throw std::runtime_error("read_sdr: not a version-1 SDR export");
    SdrInstance inst;
    if (!(is >> tok >> inst.L >> inst.M >> inst.K) || tok != "dims")
        throw std::runtime_error("read_sdr: malformed dims line");
    std::string value;
    if (!(is >> tok >> value) || tok != "P_max")
        throw std::runtime_error("read_sdr: missing P_max");
    inst.P_max = parse_double(value);
    for (int k = 0; k < inst.K; ++k)
    {
        int idx = -1;
        if (!(is >> tok >> idx >> value) || tok != "zeta" || idx != k)
            throw std::runtime_error("read_sdr: malformed zeta line");
        inst.zeta.push_back(parse_double(value));
    }
    const Index n = static_cast<Index>(inst.L) * inst.M;
    auto expect = [&](const std::string &label) {
        MatrixBlock b = read_matrix_block(is);
        if (b.label != label || b.matrix.rows() != n || b.matrix.cols() != n)
            throw std::runtime_error("read_sdr: expected block " + label);
        return b.matrix;
    };
    for (int k = 0; k < inst.K; ++k)
        inst.Phi.push_back(expect("Phi_" + std::to_string(k)));
    for (int l = 0; l < inst.L; ++l)
        inst.S.push_back(expect("S_" + std::to_string(l)));
    if (!(is >> tok) || tok != "end")
        throw std::runtime_error("read_sdr: missing end marker");
    return inst;
}

} // namespace cfaj

#endif
