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

#ifndef CFAJ_AO_HPP
#define CFAJ_AO_HPP

// Alternating optimization of receive, transmit and hybrid beamformers with
// a scalar search for the largest jamming power every UE can tolerate.

#include "hybrid.hpp"
#include "matrix_io.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfaj
{

struct QSearchConfig
{
    double q_hi_factor = 1e6; // initial bracket q_hi = q_hi_factor * P_max
    double expansion = 10.0;
    int max_expansions = 30;
    double rel_tol = 1e-6;
    int max_bisections = 200;

    void validate() const
    {
        if (!(q_hi_factor > 0.0) || !(expansion > 1.0) || !(rel_tol > 0.0) || max_expansions < 0 || max_bisections < 1)
            throw std::invalid_argument("QSearchConfig: invalid parameters");
    }
};

struct QSearchResult
{
    double q = 0.0;
    bool infeasible = false; // min xi < gamma_th already at q = 0
    bool unbounded = false;  // still feasible at the largest bracket tried
    int evaluations = 0;
};

/// Largest q in [0, q_hi] with min_xi(q) >= gamma_th for a nonincreasing
/// min_xi. With vacuous = true (no jammers) the search returns q_hi.
inline QSearchResult bisect_max_q(const std::function<double(double)> &min_xi, double gamma_th, double P_max,
                                  bool vacuous, const QSearchConfig &cfg = {})
{
    cfg.validate();
    QSearchResult r;
    auto feasible = [&](double q) {
        ++r.evaluations;
        return min_xi(q) >= gamma_th;
    };
    double hi = cfg.q_hi_factor * P_max;
    if (!feasible(0.0))
    {
        r.infeasible = true;
        return r;
    }
    if (vacuous)
    {
        r.q = hi;
        return r;
    }
    double lo = 0.0;
    int expansions = 0;
    while (feasible(hi))
    {
        if (expansions == cfg.max_expansions)
        {
            r.q = hi;
            r.unbounded = true;
            return r;
        }
        lo = hi;
        hi *= cfg.expansion;
        ++expansions;
    }
    for (int i = 0; i < cfg.max_bisections && hi - lo > cfg.rel_tol * hi; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid))
            lo = mid;
        else
            hi = mid;
    }
    r.q = lo;
    return r;
}

/// q-independent pieces of xi_k(q) for fixed beamformers with q_{g,k} = q:
///   xi_k(q) = signal_k / (interference_k + q jam_k + floor_k)
struct SinrParts
{
    std::vector<double> signal;
    std::vector<double> interference;
    std::vector<double> jam;
    std::vector<double> floor;

    std::vector<double> xi(double q) const
    {
        std::vector<double> out(signal.size());
        for (std::size_t k = 0; k < signal.size(); ++k)
            out[k] = signal[k] / (interference[k] + q * jam[k] + floor[k]);
        return out;
    }

    double min_xi(double q) const
    {
        const auto x = xi(q);
        return x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
    }
};

inline SinrParts sinr_parts(const PriorSet &ps, const std::vector<CVec> &f, const std::vector<CVec> &w)
{
    check_beamformers(ps, f, uniform_jamming(ps.G, ps.K, 0.0));
    if (static_cast<int>(w.size()) != ps.K)
        throw std::invalid_argument("sinr_parts: expected one receive vector per UE");
    SinrParts p;
    for (int k = 0; k < ps.K; ++k)
    {
        const CVec g = ps.Hbar[static_cast<std::size_t>(k)].adjoint() * w[static_cast<std::size_t>(k)];
        double interference = 0.0;
        for (int j = 0; j < ps.K; ++j)
            if (j != k)
                interference += std::norm(g.dot(f[static_cast<std::size_t>(j)]));
        double jam = 0.0;
        for (int gi = 0; gi < ps.G; ++gi)
            jam += (w[k].adjoint() * ps.R_jam[gi][k] * w[k])(0).real();
        p.signal.push_back(std::norm(g.dot(f[static_cast<std::size_t>(k)])));
        p.interference.push_back(interference);
        p.jam.push_back(jam);
        p.floor.push_back(ps.floor_term(k));
    }
    return p;
}

/// Maximum resistible common jamming power for fixed (effective) beamformers.
inline QSearchResult max_resistible_q(const PriorSet &ps, const std::vector<CVec> &f, const std::vector<CVec> &w,
                                      double gamma_th, const QSearchConfig &cfg = {})
{
    const SinrParts parts = sinr_parts(ps, f, w);
    return bisect_max_q([&](double q) { return parts.min_xi(q); }, gamma_th, ps.P_max, ps.G == 0, cfg);
}

struct HybridSet
{
    PrecoderFactorization precoder;
    std::vector<CombinerFactorization> combiners; // [k]

    std::vector<CVec> f() const { return precoder.effective(); }

    std::vector<CVec> w() const
    {
        std::vector<CVec> out;
        for (const auto &c : combiners)
            out.push_back(c.effective());
        return out;
    }
};

struct AoConfig
{
    int T = 3;
    double kappa_rel = 1e-3; // kappa = kappa_rel * P_max
    bool hybrid = true;      // false: keep the full-digital beamformers
    PgaConfig pga;
    FactorizationConfig factorization;
    QSearchConfig qsearch;

    void validate() const
    {
        if (T < 1)
            throw std::invalid_argument("AoConfig: T must be >= 1");
        if (!(kappa_rel >= 0.0))
            throw std::invalid_argument("AoConfig: kappa must be nonnegative");
        pga.validate();
        factorization.validate();
        qsearch.validate();
    }
};

struct AoStep
{
    int alternation = 0;
    double q = 0.0;           // accepted q^t
    double q_candidate = 0.0; // q from this alternation's beamformers
    double min_xi = 0.0;      // min_k xi_k at the accepted q
    double eta = 0.0;
    double seconds = 0.0;     // elapsed since the start of the run
    bool reverted = false;    // candidate rejected, previous beamformers kept
    bool infeasible = false;
    std::vector<double> xi;
};

struct AoTrace
{
    std::vector<AoStep> steps;

    void write_csv(std::ostream &os) const
    {
        os << "alternation,q_watts,min_xi,eta,seconds\n";
        for (const auto &s : steps)
            os << s.alternation << ',' << format_double(s.q) << ',' << format_double(s.min_xi) << ','
               << format_double(s.eta) << ',' << format_double(s.seconds) << '\n';
    }
};

struct AoResult
{
    HybridSet beams;
    std::vector<CVec> f;    // effective transmit vectors used for q
    std::vector<CVec> w;    // effective receive vectors used for q
    std::vector<CVec> f_fd; // full-digital transmit vectors before factorization
    std::vector<CVec> w_fd;
    double q = 0.0;
    bool infeasible = false;
    bool unbounded = false;
    std::vector<double> xi; // at q
    AoTrace trace;
};

/// One alternation's full-digital design given the current effective
/// beamformers and jamming power.
struct StageOutput
{
    std::vector<CVec> w_fd;
    std::vector<CVec> f_fd;
    double eta = 0.0;
};
using DesignStage = std::function<StageOutput(const PriorSet &, const std::vector<CVec> &f, const std::vector<CVec> &w,
                                              const JammingPowers &q)>;

namespace detail
{
inline HybridSet hybridize(const PriorSet &ps, int N_RF, int M_RF, const std::vector<CVec> &f,
                           const std::vector<CVec> &w, const FactorizationConfig &cfg)
{
    HybridSet h;
    h.precoder = factorize_precoder(f, ps.L, ps.M, N_RF, ps.P_max, cfg);
    for (const auto &wk : w)
        h.combiners.push_back(factorize_combiner(wk, M_RF, cfg));
    return h;
}

/// Full-digital stand-in with the same interface (identity "factorization").
inline HybridSet digital_set(const PriorSet &ps, const std::vector<CVec> &f, const std::vector<CVec> &w)
{
    HybridSet h;
    h.precoder.M = ps.M;
    h.precoder.N_RF = ps.M;
    for (int l = 0; l < ps.L; ++l)
        h.precoder.F_RF.push_back(CMat::Identity(ps.M, ps.M));
    h.precoder.f_BB = f;
    for (const auto &wk : w)
    {
        CombinerFactorization c;
        c.W_RF = CMat::Identity(wk.size(), wk.size());
        c.w_BB = wk / wk.norm();
        h.combiners.push_back(std::move(c));
    }
    return h;
}

inline std::vector<CVec> mrc_init(const PriorSet &ps, const std::vector<CVec> &f)
{
    std::vector<CVec> w;
    for (int k = 0; k < ps.K; ++k)
    {
        CVec a = ps.Hbar[static_cast<std::size_t>(k)] * f[static_cast<std::size_t>(k)];
        const double n = a.norm();
        if (n > 0.0)
            w.push_back(fix_phase(a / n));
        else
        {
            CVec e = CVec::Zero(ps.M_U);
            e(0) = 1.0;
            w.push_back(e);
        }
    }
    return w;
}
} // namespace detail

/// Generic alternation: stage -> factorization -> q search. A candidate whose
/// q is below the previous one is rejected (the previous beamformers stay),
/// which makes the accepted q sequence nondecreasing. Stops after T
/// alternations or when the gain drops to kappa or below.
inline AoResult run_alternation(const ScenarioConfig &sc, const PriorSet &ps, const AoConfig &cfg,
                                const DesignStage &stage)
{
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
    const double kappa = cfg.kappa_rel * ps.P_max;

    auto realize = [&](const std::vector<CVec> &f, const std::vector<CVec> &w) {
        return cfg.hybrid ? detail::hybridize(ps, sc.N_RF, sc.M_RF, f, w, cfg.factorization)
                          : detail::digital_set(ps, f, w);
    };

    AoResult res;
    res.f_fd = mrt_init(ps);
    res.w_fd = detail::mrc_init(ps, res.f_fd);
    res.beams = realize(res.f_fd, res.w_fd);
    res.f = res.beams.f();
    res.w = res.beams.w();
    auto qs = max_resistible_q(ps, res.f, res.w, sc.gamma_th, cfg.qsearch);
    res.q = qs.q;
    res.infeasible = qs.infeasible;
    res.unbounded = qs.unbounded;
    res.xi = sinr_parts(ps, res.f, res.w).xi(res.q);

    for (int t = 1; t <= cfg.T; ++t)
    {
        StageOutput out;
        try
        {
            out = stage(ps, res.f, res.w, uniform_jamming(ps.G, ps.K, res.q));
        }
        catch (const std::exception &e)
        {
            throw std::runtime_error("alternation " + std::to_string(t) + ": " + e.what());
        }
        HybridSet beams = realize(out.f_fd, out.w_fd);
        auto f = beams.f();
        auto w = beams.w();
        const SinrParts parts = sinr_parts(ps, f, w);
        auto cand = bisect_max_q([&](double q) { return parts.min_xi(q); }, sc.gamma_th, ps.P_max, ps.G == 0,
                                 cfg.qsearch);

        AoStep step;
        step.alternation = t;
        step.q_candidate = cand.q;
        step.eta = out.eta;
        const double q_prev = res.q;
        // Feasibility counts as an improvement even when q stays at 0.
        const bool better = cand.q > q_prev || (cand.q == q_prev && !(cand.infeasible && !res.infeasible));
        if (better)
        {
            res.beams = std::move(beams);
            res.f = std::move(f);
            res.w = std::move(w);
            res.f_fd = std::move(out.f_fd);
            res.w_fd = std::move(out.w_fd);
            res.q = cand.q;
            res.infeasible = cand.infeasible;
            res.unbounded = cand.unbounded;
            res.xi = parts.xi(res.q);
        }
        else
            step.reverted = true;
        step.q = res.q;
        step.infeasible = res.infeasible;
        step.xi = res.xi;
        step.min_xi = res.xi.empty() ? 0.0 : *std::min_element(res.xi.begin(), res.xi.end());
        step.seconds = elapsed();
        res.trace.steps.push_back(std::move(step));
        if (res.q - q_prev <= kappa)
            break;
    }
    return res;
}

/// Receive update (GRQ, then combiner factorization) followed by the
/// transmit update (PGA against the hybrid combiners).
inline DesignStage ajhbf_stage(const ScenarioConfig &sc, const AoConfig &cfg)
{
    return [sc, cfg](const PriorSet &ps, const std::vector<CVec> &f, const std::vector<CVec> &, const JammingPowers &q) {
        StageOutput out;
        out.w_fd = receive_beamformers(ps, f, q);
        std::vector<CVec> w_eff;
        for (const auto &wk : out.w_fd)
            w_eff.push_back(cfg.hybrid ? factorize_combiner(wk, sc.M_RF, cfg.factorization).effective() : wk);
        TxState tx = pga_solve(ps, f, w_eff, q, cfg.pga);
        out.f_fd = std::move(tx.f);
        out.eta = tx.eta;
        return out;
    };
}

inline AoResult ao_ajhbf(const ScenarioConfig &sc, const PriorSet &ps, const AoConfig &cfg = {})
{
    return run_alternation(sc, ps, cfg, ajhbf_stage(sc, cfg));
}

} // namespace cfaj

#endif
