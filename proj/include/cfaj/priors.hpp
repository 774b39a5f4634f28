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

#ifndef CFAJ_PRIORS_HPP
#define CFAJ_PRIORS_HPP

// Statistical side information available to the beamformer designer:
// channel estimates, fronthaul-quantized channels, the estimation error
// covariance Q_k, quantization variances, jamming covariances R_{g,k} and
// the resulting upper bounds on the estimation (EN) and quantization (QE)
// interference terms.

#include "scene.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cfaj
{

enum class EstimationMode
{
    pilot_mmse,
    synthetic_nmse
};

/// Order in which estimation error and fronthaul quantization compose.
enum class QuantizationOrder
{
    estimate_then_quantize, // Hbar = alpha * Hhat + Sigma
    quantize_then_estimate  // Hbar = alpha * H + Sigma + (Hhat - H)
};

struct EstimationConfig
{
    EstimationMode mode = EstimationMode::synthetic_nmse;
    int tau_p = 40;           // pilot length (symbols)
    double rho_p = 0.1;       // pilot power (watts)
    double nmse_target = 0.01;
    int quant_bits = 4;
    bool quantize = true;
    QuantizationOrder order = QuantizationOrder::estimate_then_quantize;
    int jammer_stat_draws = 200;

    void validate(int K) const
    {
        if (mode == EstimationMode::pilot_mmse && tau_p < K)
            throw std::invalid_argument("EstimationConfig: pilot mode needs tau_p >= K for orthogonal pilots");
        if (tau_p < 1)
            throw std::invalid_argument("EstimationConfig: tau_p must be >= 1");
        if (!(rho_p > 0.0))
            throw std::invalid_argument("EstimationConfig: rho_p must be positive");
        if (!(nmse_target >= 0.0 && nmse_target < 1.0))
            throw std::invalid_argument("EstimationConfig: nmse_target must lie in [0, 1)");
        if (quant_bits < 1 || quant_bits > 5)
            throw std::invalid_argument("EstimationConfig: quant_bits must be in 1..5");
        if (jammer_stat_draws < 1)
            throw std::invalid_argument("EstimationConfig: jammer_stat_draws must be >= 1");
    }
};

/// Distortion factor of a uniform quantizer with the given bits per sample.
inline double quantization_alpha(int bits)
{
    static constexpr std::array<double, 5> table = {0.6366, 0.8825, 0.96546, 0.990503, 0.997501};
    if (bits < 1 || bits > 5)
        throw std::invalid_argument("quantization_alpha: bits must be in 1..5, got " + std::to_string(bits));
    return table[static_cast<std::size_t>(bits - 1)];
}

/// Block-diagonal error covariance of vec(H_k) with one (M M_U)^2 block per
/// AP. Isotropic blocks are stored as scales to avoid materializing them.
struct ErrorCovariance
{
    Index block_dim = 0;
    std::vector<double> iso;   // scale per AP, when isotropic
    std::vector<CMat> blocks;  // dense blocks, otherwise

    static ErrorCovariance isotropic(int num_blocks, Index block_dim, double scale)
    {
        ErrorCovariance q;
        q.block_dim = block_dim;
        q.iso.assign(static_cast<std::size_t>(num_blocks), scale);
        return q;
    }

    bool is_isotropic() const { return blocks.empty(); }
    int num_blocks() const { return static_cast<int>(is_isotropic() ? iso.size() : blocks.size()); }

    CMat block(int l) const
    {
        if (is_isotropic())
            return iso[static_cast<std::size_t>(l)] * CMat::Identity(block_dim, block_dim);
        return blocks[static_cast<std::size_t>(l)];
    }

    double lambda_max() const
    {
        double m = 0.0;
        if (is_isotropic())
        {
            for (double s : iso)
                m = std::max(m, s);
            return m;
        }
        bool first = true;
        for (const auto &b : blocks)
        {
            double v = cfaj::lambda_max(b);
            m = first ? v : std::max(m, v);
            first = false;
        }
        return m;
    }

    double trace() const
    {
        double t = 0.0;
        if (is_isotropic())
        {
            for (double s : iso)
                t += s * static_cast<double>(block_dim);
            return t;
        }
        for (const auto &b : blocks)
            t += b.trace().real();
        return t;
    }
};

/// Covariance of vec(H) over alpha ~ CN(0, 1) at fixed angles and gains:
/// sum_p beta_p v_p v_p^H with v_p = conj(a_tx) (x) a_rx.
inline CMat link_covariance(const std::vector<PathComponent> &paths, const ArrayGeometry &geom_tx,
                            const ArrayGeometry &geom_rx, bool normalize)
{
    const Index n = static_cast<Index>(geom_tx.size()) * geom_rx.size();
    CMat R = CMat::Zero(n, n);
    for (const auto &p : paths)
    {
        CVec ar = steering_vector(geom_rx, p.mu_rx, p.nu_rx);
        CVec at = steering_vector(geom_tx, p.mu_tx, p.nu_tx).conjugate();
        CVec v(n);
        for (Index c = 0; c < at.size(); ++c)
            v.segment(c * ar.size(), ar.size()) = at(c) * ar;
        R += p.gain_large * v * v.adjoint();
    }
    if (normalize && !paths.empty())
        R /= static_cast<double>(paths.size());
    return R;
}

struct LinkEstimate
{
    CVec h_hat;
    CMat R_hat;
};

/// LMMSE estimate of h ~ CN(0, R) from y = tau_p Ft h + n,
/// n ~ CN(0, tau_p sigma2 I):
///   h_hat = R Ft^H Psi^-1 y,  R_hat = tau_p R Ft^H Psi^-1 Ft R,
///   Psi = tau_p Ft R Ft^H + sigma2 I.
inline LinkEstimate mmse_link_estimate(const CMat &R, const CMat &Ft, const CVec &y, double tau_p, double sigma2)
{
    CMat Psi = tau_p * Ft * R * Ft.adjoint();
    Psi.diagonal().array() += sigma2;
    Eigen::LLT<CMat> llt(Psi);
    if (llt.info() != Eigen::Success)
        throw NumericalError("mmse_link_estimate: Psi is singular (sigma2 = " + std::to_string(sigma2) +
                             ", trace(Psi) = " + std::to_string(Psi.trace().real()) + ")");
    CMat RFh = R * Ft.adjoint();
    LinkEstimate e;
    e.h_hat = RFh * llt.solve(y);
    e.R_hat = tau_p * RFh * llt.solve(RFh.adjoint());
    return e;
}

/// Uplink probing operator acting on vec(H) for H in C^{M_U x M}: the UE
/// sends sqrt(rho_p) times the first d identity columns, d = min(M_U, tau_p / K),
/// so the projected observation is tau_p S^T H with S = sqrt(rho_p) I_{:,1:d}.
inline CMat pilot_operator(int M, int M_U, int K, int tau_p, double rho_p)
{
    const int d = std::max(1, std::min(M_U, tau_p / K));
    CMat St = CMat::Zero(d, M_U);
    for (int i = 0; i < d; ++i)
        St(i, i) = std::sqrt(rho_p);
    CMat Ft = CMat::Zero(static_cast<Index>(M) * d, static_cast<Index>(M) * M_U);
    for (int m = 0; m < M; ++m)
        Ft.block(static_cast<Index>(m) * d, static_cast<Index>(m) * M_U, d, M_U) = St;
    return Ft;
}

struct EstimateResult
{
    std::vector<std::vector<CMat>> H_hat; // [l][k]
    std::vector<ErrorCovariance> Q;       // [k]
};

/// Pilot-based MMSE estimation of every AP-UE channel.
inline EstimateResult mmse_estimate(const ScenarioConfig &cfg, const EstimationConfig &est,
                                    const ChannelSet &channels, Rng &rng)
{
    est.validate(cfg.K);
    const auto ap = cfg.ap_array();
    const auto ue = cfg.ue_array();
    const CMat Ft = pilot_operator(cfg.M, cfg.M_U, cfg.K, est.tau_p, est.rho_p);
    const double tau = static_cast<double>(est.tau_p);
    EstimateResult out;
    out.H_hat.assign(static_cast<std::size_t>(cfg.L), std::vector<CMat>(static_cast<std::size_t>(cfg.K)));
    out.Q.resize(static_cast<std::size_t>(cfg.K));
    for (int k = 0; k < cfg.K; ++k)
    {
        out.Q[k].block_dim = static_cast<Index>(cfg.M) * cfg.M_U;
        for (int l = 0; l < cfg.L; ++l)
        {
            const CMat R = link_covariance(channels.ap_ue[l][k].paths, ap, ue, cfg.normalize_paths);
            const CVec h = vec(channels.H(l, k));
            CVec y = tau * Ft * h + complex_gaussian_vector(rng, Ft.rows(), tau * cfg.sigma2);
            LinkEstimate e = mmse_link_estimate(R, Ft, y, tau, cfg.sigma2);
            out.H_hat[l][k] = Eigen::Map<const CMat>(e.h_hat.data(), cfg.M_U, cfg.M);
            out.Q[k].blocks.push_back(repair_psd(R - e.R_hat, 1e-10, "estimation error covariance"));
        }
    }
    return out;
}

/// Estimation error injected as i.i.d. CN(0, c_k) entries with
/// c_k = nmse * E||H_k||^2 / (L M M_U), so Q_k = c_k I exactly.
inline EstimateResult synthetic_error(const ScenarioConfig &cfg, double nmse_target, const ChannelSet &channels,
                                      Rng &rng)
{
    if (!(nmse_target >= 0.0 && nmse_target < 1.0))
        throw std::invalid_argument("synthetic_error: nmse_target must lie in [0, 1)");
    EstimateResult out;
    out.H_hat.assign(static_cast<std::size_t>(cfg.L), std::vector<CMat>(static_cast<std::size_t>(cfg.K)));
    const Index block = static_cast<Index>(cfg.M) * cfg.M_U;
    for (int k = 0; k < cfg.K; ++k)
    {
        double power = 0.0;
        for (int l = 0; l < cfg.L; ++l)
            power += channels.mean_power(l, k, cfg.normalize_paths);
        const double c = nmse_target * power / (static_cast<double>(cfg.L) * static_cast<double>(block));
        for (int l = 0; l < cfg.L; ++l)
        {
            CMat err = c > 0.0 ? complex_gaussian_matrix(rng, cfg.M_U, cfg.M, c) : CMat::Zero(cfg.M_U, cfg.M);
            out.H_hat[l][k] = channels.H(l, k) + err;
        }
        out.Q.push_back(ErrorCovariance::isotropic(cfg.L, block, c));
    }
    return out;
}

/// sigma_q^2 = alpha (1 - alpha) tau_p rho_p beta_lk^2 /
///             (tau_p rho_p sum_{j != k} beta_lj |phi_k^H phi_j|^2 + 1)
/// interferers holds (beta_lj, |phi_k^H phi_j|^2) for every j != k.
inline double quantization_variance(double alpha, double tau_p, double rho_p, double beta_lk,
                                    const std::vector<std::pair<double, double>> &interferers)
{
    double contamination = 0.0;
    for (const auto &[beta, overlap] : interferers)
        contamination += beta * overlap;
    return alpha * (1.0 - alpha) * tau_p * rho_p * beta_lk * beta_lk / (tau_p * rho_p * contamination + 1.0);
}

/// Hbar = alpha * H_hat + Sigma, vec(Sigma) ~ CN(0, sigma_q2 I).
inline CMat quantize_channel(const CMat &H_hat, double alpha, double sigma_q2, Rng &rng)
{
    CMat out = alpha * H_hat;
    if (sigma_q2 > 0.0)
        out += complex_gaussian_matrix(rng, H_hat.rows(), H_hat.cols(), sigma_q2);
    return out;
}

/// Normalized dominant right singular vector of J (the jammer's MRT beam).
inline CVec jammer_beam(const CMat &J)
{
    Eigen::JacobiSVD<CMat> svd(J, Eigen::ComputeThinV);
    return svd.matrixV().col(0);
}

/// Sample average of J w_J w_J^H J^H over small-scale redraws at fixed
/// geometry, with w_J recomputed for every realization.
inline CMat jammer_covariance(const std::vector<PathComponent> &paths, const ArrayGeometry &geom_jammer,
                              const ArrayGeometry &geom_ue, bool normalize, int draws, Rng &rng)
{
    if (draws < 1)
        throw std::invalid_argument("jammer_covariance: draws must be >= 1");
    auto local = paths;
    CMat R = CMat::Zero(geom_ue.size(), geom_ue.size());
    for (int n = 0; n < draws; ++n)
    {
        redraw_small_scale(local, rng);
        const CMat J = channel_matrix(local, geom_jammer, geom_ue, normalize);
        const CVec x = J * jammer_beam(J);
        R += x * x.adjoint();
    }
    R /= static_cast<double>(draws);
    return hermitian_part(R);
}

struct PriorSet
{
    int L = 0;
    int K = 0;
    int G = 0;
    int M = 0;
    int M_U = 0;
    double P_max = 0.0;
    double sigma2 = 0.0;
    double alpha = 1.0;
    std::vector<CMat> Hbar;                    // [k], M_U x (L M), AP blocks side by side
    std::vector<ErrorCovariance> Q;            // [k]
    std::vector<double> lambda_max_Q;          // [k]
    std::vector<std::vector<double>> sigma_q2; // [l][k]
    std::vector<double> omega;                 // [k], max_l sigma_q2[l][k]
    std::vector<std::vector<CMat>> R_jam;      // [g][k], M_U x M_U
    std::vector<double> en_ub;                 // [k]
    std::vector<double> qe_ub;                 // [k]

    Index tx_dim() const { return static_cast<Index>(L) * M; }
    auto Hbar_block(int l, int k) const { return Hbar[static_cast<std::size_t>(k)].middleCols(static_cast<Index>(l) * M, M); }

    /// EN^UB + QE^UB + sigma2: the beamformer-independent part of the
    /// SINR lower-bound denominator.
    double floor_term(int k) const { return en_ub[k] + qe_ub[k] + sigma2; }
};

struct ErrorBounds
{
    std::vector<double> en_ub;
    std::vector<double> qe_ub;
};

/// EN^UB_k = L K P_max lambda_max(Q_k), QE^UB_k = L K P_max omega_k.
inline ErrorBounds en_qe_upper_bounds(const std::vector<double> &lambda_max_Q, const std::vector<double> &omega,
                                      int L, int K, double P_max, double jitter = 1e-12)
{
    ErrorBounds b;
    const double scale = static_cast<double>(L) * K * P_max;
    for (std::size_t k = 0; k < lambda_max_Q.size(); ++k)
    {
        double lm = lambda_max_Q[k];
        if (lm < -jitter)
            throw NumericalError("en_qe_upper_bounds: lambda_max(Q_k) = " + std::to_string(lm) + " is negative");
        b.en_ub.push_back(scale * std::max(lm, 0.0));
        b.qe_ub.push_back(scale * omega[k]);
    }
    return b;
}

inline EstimateResult estimate_channels(const ScenarioConfig &cfg, const EstimationConfig &est,
                                        const ChannelSet &channels, Rng &rng)
{
    est.validate(cfg.K);
    if (est.mode == EstimationMode::pilot_mmse)
        return mmse_estimate(cfg, est, channels, rng);
    return synthetic_error(cfg, est.nmse_target, channels, rng);
}

/// R_jam[g][k] for every jammer-UE pair.
inline std::vector<std::vector<CMat>> jammer_covariances(const ScenarioConfig &cfg, const EstimationConfig &est,
                                                         const ChannelSet &channels, Rng &rng)
{
    const auto jam = cfg.jammer_array();
    const auto ue = cfg.ue_array();
    std::vector<std::vector<CMat>> R(static_cast<std::size_t>(cfg.G));
    for (int g = 0; g < cfg.G; ++g)
        for (int k = 0; k < cfg.K; ++k)
            R[g].push_back(jammer_covariance(channels.jam_ue[g][k].paths, jam, ue, cfg.normalize_paths,
                                             est.jammer_stat_draws, rng));
    return R;
}

/// Combines estimates and jamming statistics into a PriorSet. With
/// quantize = false the fronthaul is ideal (alpha = 1, no quantization noise).
inline PriorSet assemble_priors(const ScenarioConfig &cfg, const EstimationConfig &est, const ChannelSet &channels,
                                const EstimateResult &estimates, std::vector<std::vector<CMat>> R_jam, bool quantize,
                                Rng &rng)
{
    est.validate(cfg.K);
    PriorSet ps;
    ps.L = cfg.L;
    ps.K = cfg.K;
    ps.G = cfg.G;
    ps.M = cfg.M;
    ps.M_U = cfg.M_U;
    ps.P_max = cfg.P_max;
    ps.sigma2 = cfg.sigma2;
    ps.alpha = quantize ? quantization_alpha(est.quant_bits) : 1.0;
    ps.Q = estimates.Q;
    ps.R_jam = std::move(R_jam);
    ps.sigma_q2.assign(static_cast<std::size_t>(cfg.L), std::vector<double>(static_cast<std::size_t>(cfg.K), 0.0));
    ps.omega.assign(static_cast<std::size_t>(cfg.K), 0.0);

    // Unit-norm pilots phi_k = e_{k mod tau_p}: overlap 1 when reused, else 0.
    const double tau = static_cast<double>(est.tau_p);
    for (int l = 0; l < cfg.L; ++l)
        for (int k = 0; k < cfg.K; ++k)
        {
            if (!quantize)
                continue;
            std::vector<std::pair<double, double>> interferers;
            for (int j = 0; j < cfg.K; ++j)
                if (j != k)
                    interferers.emplace_back(channels.beta(l, j), (j % est.tau_p) == (k % est.tau_p) ? 1.0 : 0.0);
            ps.sigma_q2[l][k] = quantization_variance(ps.alpha, tau, est.rho_p, channels.beta(l, k), interferers);
        }

    for (int k = 0; k < cfg.K; ++k)
    {
        CMat Hk(cfg.M_U, static_cast<Index>(cfg.L) * cfg.M);
        for (int l = 0; l < cfg.L; ++l)
        {
            const CMat &Hhat = estimates.H_hat[l][k];
            CMat Hbar;
            if (est.order == QuantizationOrder::estimate_then_quantize)
                Hbar = quantize_channel(Hhat, ps.alpha, ps.sigma_q2[l][k], rng);
            else
                Hbar = quantize_channel(channels.H(l, k), ps.alpha, ps.sigma_q2[l][k], rng) + (Hhat - channels.H(l, k));
            Hk.middleCols(static_cast<Index>(l) * cfg.M, cfg.M) = Hbar;
            ps.omega[k] = std::max(ps.omega[k], ps.sigma_q2[l][k]);
        }
        ps.Hbar.push_back(std::move(Hk));
        ps.lambda_max_Q.push_back(ps.Q[k].lambda_max());
    }
    auto b = en_qe_upper_bounds(ps.lambda_max_Q, ps.omega, cfg.L, cfg.K, cfg.P_max);
    ps.en_ub = std::move(b.en_ub);
    ps.qe_ub = std::move(b.qe_ub);
    return ps;
}

inline PriorSet build_priors(const ScenarioConfig &cfg, const EstimationConfig &est, const ChannelSet &channels,
                             Rng &rng)
{
    EstimateResult e = estimate_channels(cfg, est, channels, rng);
    auto R = jammer_covariances(cfg, est, channels, rng);
    return assemble_priors(cfg, est, channels, e, std::move(R), est.quantize, rng);
}

} // namespace cfaj

#endif
