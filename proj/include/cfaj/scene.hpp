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

#ifndef CFAJ_SCENE_HPP
#define CFAJ_SCENE_HPP

// Deployment geometry and Saleh-Valenzuela channel synthesis with uniform
// planar arrays at APs, UEs and jammers.

#include "linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace cfaj
{

/// Uniform planar array with m_h horizontal and m_v vertical elements.
struct ArrayGeometry
{
    int m_h = 1;
    int m_v = 1;
    double d_h = 0.5;
    double d_v = 0.5;
    double wavelength = 1.0;

    int size() const { return m_h * m_v; }

    void validate() const
    {
        if (m_h < 1 || m_v < 1)
            throw std::invalid_argument("ArrayGeometry: element counts must be >= 1");
        if (!(d_h > 0.0) || !(d_v > 0.0) || !(wavelength > 0.0))
            throw std::invalid_argument("ArrayGeometry: spacings and wavelength must be positive");
    }

    /// Squarest factorization elements = m_h * m_v with m_h >= m_v and
    /// half-wavelength spacing.
    static ArrayGeometry half_wavelength(int elements, double wavelength)
    {
        if (elements < 1)
            throw std::invalid_argument("ArrayGeometry: element count must be >= 1");
        int m_v = 1;
        for (int d = 1; d * d <= elements; ++d)
            if (elements % d == 0)
                m_v = d;
        return {elements / m_v, m_v, wavelength / 2.0, wavelength / 2.0, wavelength};
    }
};

/// UPA response for virtual angles (mu, nu). Entry p * m_v + q carries the
/// phase 2 pi (d_h p mu + d_v q nu) / wavelength.
inline CVec steering_vector(const ArrayGeometry &geom, double mu, double nu)
{
    geom.validate();
    if (!(std::abs(mu) <= 1.0) || !(std::abs(nu) <= 1.0))
        throw std::invalid_argument("steering_vector: virtual angles must lie in [-1, 1]");
    const double kh = 2.0 * pi * geom.d_h / geom.wavelength;
    const double kv = 2.0 * pi * geom.d_v / geom.wavelength;
    CVec a(geom.size());
    for (int p = 0; p < geom.m_h; ++p)
        for (int q = 0; q < geom.m_v; ++q)
            a(p * geom.m_v + q) = std::polar(1.0, kh * p * mu) * std::polar(1.0, kv * q * nu);
    return a;
}

enum class LargeScaleModel
{
    log_distance, // beta_dB = intercept - slope * log10(d / 1 m) + N(0, shadow_std^2)
    fixed         // beta_dB = fixed_db for every link
};

struct LargeScaleParams
{
    LargeScaleModel model = LargeScaleModel::log_distance;
    double intercept_db = -30.5;
    double slope = 36.7;
    double shadow_std_db = 4.0;
    double fixed_db = -100.0;
};

struct ScenarioConfig
{
    int L = 3;    // APs
    int K = 5;    // UEs
    int G = 2;    // jammers
    int M = 16;   // antennas per AP
    int N_RF = 8; // RF chains per AP
    int M_U = 8;  // antennas per UE
    int M_RF = 4; // RF chains per UE
    int M_J = 36; // antennas per jammer
    int P = 3;     // paths per AP-UE link
    int P_bar = 3; // paths per jammer-UE link
    double P_max = 1.0;                    // watts, per AP
    double sigma2 = dbm_to_watt(-107.0);   // watts
    double gamma_th = 1.0;                 // linear
    double region_side = 1000.0;           // meters
    std::uint64_t rng_seed = 1;
    double wavelength = 0.0107;            // meters (28 GHz)
    double angle_spread_deg = 5.0;
    bool normalize_paths = false;          // divide H by sqrt(P)
    LargeScaleParams large_scale;

    void validate() const
    {
        if (L < 1 || K < 1 || G < 0 || M < 1 || N_RF < 1 || M_U < 1 || M_RF < 1 || M_J < 1 || P < 1 || P_bar < 1)
            throw std::invalid_argument("ScenarioConfig: counts must be >= 1 (G >= 0)");
        if (N_RF > M)
            throw std::invalid_argument("ScenarioConfig: N_RF must not exceed M");
        if (M_RF > M_U)
            throw std::invalid_argument("ScenarioConfig: M_RF must not exceed M_U");
        if (!(P_max > 0.0) || !(sigma2 > 0.0))
            throw std::invalid_argument("ScenarioConfig: P_max and sigma2 must be positive");
        if (!(gamma_th > 0.0) || !(region_side > 0.0) || !(wavelength > 0.0))
            throw std::invalid_argument("ScenarioConfig: gamma_th, region_side, wavelength must be positive");
        if (angle_spread_deg < 0.0)
            throw std::invalid_argument("ScenarioConfig: angle spread must be nonnegative");
    }

    ArrayGeometry ap_array() const { return ArrayGeometry::half_wavelength(M, wavelength); }
    ArrayGeometry ue_array() const { return ArrayGeometry::half_wavelength(M_U, wavelength); }
    ArrayGeometry jammer_array() const { return ArrayGeometry::half_wavelength(M_J, wavelength); }

    /// Halved antenna counts for fast suites.
    static ScenarioConfig desk() { return {}; }

    /// Antenna counts of the reference deployment.
    static ScenarioConfig paper()
    {
        ScenarioConfig c;
        c.M = 36;
        c.N_RF = 18;
        c.M_U = 16;
        c.M_RF = 8;
        c.M_J = 36;
        return c;
    }
};

/// Array placement: boresight normal plus the in-plane horizontal and
/// vertical element axes (orthonormal).
struct ArrayFrame
{
    Vec3 normal = Vec3::UnitX();
    Vec3 horizontal = Vec3::UnitY();
    Vec3 vertical = Vec3::UnitZ();
};

struct Node
{
    Vec3 position = Vec3::Zero();
    ArrayFrame frame;
};

struct Deployment
{
    std::vector<Node> aps;
    std::vector<Node> ues;
    std::vector<Node> jammers;
};

inline ArrayFrame frame_facing(const Vec3 &normal)
{
    ArrayFrame f;
    f.normal = normal.normalized();
    Vec3 h = Vec3::UnitZ().cross(f.normal);
    if (h.norm() < 1e-9)
        h = Vec3::UnitY();
    f.horizontal = h.normalized();
    f.vertical = f.normal.cross(f.horizontal).normalized();
    return f;
}

/// APs evenly spaced on the x = 0 face (arrays in the yoz plane), UEs and
/// jammers uniform in the cube. UE arrays are parallel to yoz facing the APs;
/// jammer arrays face the cube centroid.
inline Deployment generate_scenario(const ScenarioConfig &cfg, Rng &rng)
{
    cfg.validate();
    const double s = cfg.region_side;
    Deployment d;
    for (int l = 0; l < cfg.L; ++l)
    {
        Node ap;
        ap.position = Vec3(0.0, (l + 0.5) * s / cfg.L, s / 2.0);
        ap.frame = ArrayFrame{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
        d.aps.push_back(ap);
    }
    std::uniform_real_distribution<double> u(0.0, s);
    for (int k = 0; k < cfg.K; ++k)
    {
        Node ue;
        double x = u(rng);
        double y = u(rng);
        double z = u(rng);
        ue.position = Vec3(x, y, z);
        ue.frame = ArrayFrame{-Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
        d.ues.push_back(ue);
    }
    const Vec3 centroid(s / 2.0, s / 2.0, s / 2.0);
    for (int g = 0; g < cfg.G; ++g)
    {
        Node j;
        double x = u(rng);
        double y = u(rng);
        double z = u(rng);
        j.position = Vec3(x, y, z);
        Vec3 n = centroid - j.position;
        j.frame = frame_facing(n.norm() > 1e-9 ? n : Vec3::UnitX());
        d.jammers.push_back(j);
    }
    return d;
}

/// One propagation path. gain_small is the complex small-scale coefficient,
/// gain_large the (linear) large-scale power gain.
struct PathComponent
{
    cd gain_small{1.0, 0.0};
    double gain_large = 1.0;
    double mu_rx = 0.0;
    double nu_rx = 0.0;
    double mu_tx = 0.0;
    double nu_tx = 0.0;
};

struct Link
{
    std::vector<PathComponent> paths;
    CMat matrix;
};

/// Large-scale power gain (linear) for a link of length distance.
inline double large_scale_gain(const LargeScaleParams &p, double distance, Rng &rng)
{
    if (p.model == LargeScaleModel::fixed)
        return db_to_linear(p.fixed_db);
    std::normal_distribution<double> shadow(0.0, p.shadow_std_db);
    double d = std::max(distance, 1.0);
    double s = p.shadow_std_db > 0.0 ? shadow(rng) : 0.0;
    return db_to_linear(p.intercept_db - p.slope * std::log10(d) + s);
}

namespace detail
{
struct SphericalDir
{
    double azimuth;
    double elevation; // measured from the vertical array axis
};

inline SphericalDir local_direction(const ArrayFrame &f, const Vec3 &dir)
{
    Vec3 u = dir.normalized();
    double c = std::clamp(u.dot(f.vertical), -1.0, 1.0);
    return {std::atan2(u.dot(f.horizontal), u.dot(f.normal)), std::acos(c)};
}

inline std::pair<double, double> virtual_angles(double azimuth, double elevation)
{
    double mu = std::clamp(std::sin(elevation) * std::sin(azimuth), -1.0, 1.0);
    double nu = std::clamp(std::cos(elevation), -1.0, 1.0);
    return {mu, nu};
}
} // namespace detail

/// H = sum_p alpha_p sqrt(beta_p) a_rx(mu, nu) a_tx(mu, nu)^H
inline CMat channel_matrix(const std::vector<PathComponent> &paths, const ArrayGeometry &geom_tx,
                           const ArrayGeometry &geom_rx, bool normalize = false)
{
    CMat H = CMat::Zero(geom_rx.size(), geom_tx.size());
    for (const auto &p : paths)
    {
        CVec ar = steering_vector(geom_rx, p.mu_rx, p.nu_rx);
        CVec at = steering_vector(geom_tx, p.mu_tx, p.nu_tx);
        H += (p.gain_small * std::sqrt(p.gain_large)) * ar * at.adjoint();
    }
    if (normalize && !paths.empty())
        H /= std::sqrt(static_cast<double>(paths.size()));
    return H;
}

/// Draws a fresh alpha ~ CN(0, 1) for every path; angles and beta untouched.
inline void redraw_small_scale(std::vector<PathComponent> &paths, Rng &rng)
{
    for (auto &p : paths)
        p.gain_small = complex_gaussian(rng, 1.0);
}

/// Paths of one tx -> rx link: line-of-sight direction in each array frame
/// plus an independent uniform spread per path in (azimuth, elevation), one
/// large-scale gain shared by all paths, alpha ~ CN(0, 1).
inline Link synthesize_channel(const Node &tx, const Node &rx, int num_paths, const ArrayGeometry &geom_tx,
                               const ArrayGeometry &geom_rx, const ScenarioConfig &cfg, Rng &rng)
{
    if (num_paths < 1)
        throw std::invalid_argument("synthesize_channel: number of paths must be >= 1");
    const Vec3 d = rx.position - tx.position;
    const double dist = d.norm();
    const Vec3 dir = dist > 0.0 ? Vec3(d / dist) : Vec3::UnitX();
    const auto dep = detail::local_direction(tx.frame, dir);
    const auto arr = detail::local_direction(rx.frame, -dir);
    const double spread = cfg.angle_spread_deg * pi / 180.0;
    std::uniform_real_distribution<double> u(-spread, spread);

    Link link;
    const double beta = large_scale_gain(cfg.large_scale, dist, rng);
    for (int p = 0; p < num_paths; ++p)
    {
        PathComponent pc;
        double az_tx = dep.azimuth + u(rng);
        double el_tx = dep.elevation + u(rng);
        double az_rx = arr.azimuth + u(rng);
        double el_rx = arr.elevation + u(rng);
        std::tie(pc.mu_tx, pc.nu_tx) = detail::virtual_angles(az_tx, el_tx);
        std::tie(pc.mu_rx, pc.nu_rx) = detail::virtual_angles(az_rx, el_rx);
        pc.gain_large = beta;
        pc.gain_small = complex_gaussian(rng, 1.0);
        link.paths.push_back(pc);
    }
    link.matrix = channel_matrix(link.paths, geom_tx, geom_rx, cfg.normalize_paths);
    return link;
}

/// Every AP -> UE and jammer -> UE link of one deployment.
struct ChannelSet
{
    int L = 0;
    int K = 0;
    int G = 0;
    std::vector<std::vector<Link>> ap_ue;  // [l][k], M_U x M
    std::vector<std::vector<Link>> jam_ue; // [g][k], M_U x M_J

    const CMat &H(int l, int k) const { return ap_ue[l][k].matrix; }
    const CMat &J(int g, int k) const { return jam_ue[g][k].matrix; }

    /// [H_1k, ..., H_Lk], M_U x (L M)
    CMat stacked(int k) const
    {
        const Index rows = ap_ue[0][k].matrix.rows();
        const Index cols = ap_ue[0][k].matrix.cols();
        CMat out(rows, cols * L);
        for (int l = 0; l < L; ++l)
            out.middleCols(l * cols, cols) = ap_ue[l][k].matrix;
        return out;
    }

    /// Link large-scale gain (shared across the link's paths).
    double beta(int l, int k) const { return ap_ue[l][k].paths.front().gain_large; }

    /// E ||H_lk||_F^2 over small-scale fading at fixed geometry.
    double mean_power(int l, int k, bool normalized) const
    {
        const auto &link = ap_ue[l][k];
        double s = 0.0;
        for (const auto &p : link.paths)
            s += p.gain_large;
        if (normalized)
            s /= static_cast<double>(link.paths.size());
        return s * static_cast<double>(link.matrix.size());
    }
};

inline ChannelSet generate_channels(const ScenarioConfig &cfg, const Deployment &dep, Rng &rng)
{
    cfg.validate();
    ChannelSet cs;
    cs.L = cfg.L;
    cs.K = cfg.K;
    cs.G = cfg.G;
    const auto ap = cfg.ap_array();
    const auto ue = cfg.ue_array();
    const auto jam = cfg.jammer_array();
    cs.ap_ue.resize(cfg.L);
    for (int l = 0; l < cfg.L; ++l)
        for (int k = 0; k < cfg.K; ++k)
            cs.ap_ue[l].push_back(synthesize_channel(dep.aps[l], dep.ues[k], cfg.P, ap, ue, cfg, rng));
    cs.jam_ue.resize(cfg.G);
    for (int g = 0; g < cfg.G; ++g)
        for (int k = 0; k < cfg.K; ++k)
            cs.jam_ue[g].push_back(synthesize_channel(dep.jammers[g], dep.ues[k], cfg.P_bar, jam, ue, cfg, rng));
    return cs;
}

} // namespace cfaj

#endif
