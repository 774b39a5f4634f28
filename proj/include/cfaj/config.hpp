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

#ifndef CFAJ_CONFIG_HPP
#define CFAJ_CONFIG_HPP

// Experiment specification files (JSON, versioned schema, unknown keys
// rejected). See configs/ for examples and docs/formats.md for every key.

#include "wmmse.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfaj
{

inline constexpr int experiment_schema_version = 1;

inline const std::vector<std::string> &registered_schemes()
{
    static const std::vector<std::string> s = {"ao-ajhbf", "wmmse", "ao-ajhbf-noquant"};
    return s;
}

inline const std::vector<std::string> &sweep_axes()
{
    static const std::vector<std::string> a = {"M", "G", "nmse", "M_U", "P_max_w", "gamma_th_db"};
    return a;
}

struct SweepSpec
{
    std::string axis = "M";
    std::vector<double> values = {16};
    double n_rf_ratio = 0.5;        // M axis: N_RF = round(ratio * M)
    int jammer_antennas_total = 36; // G axis: M_J = total / G
};

struct OutputSpec
{
    bool record_runtime = false; // false keeps results.csv byte-reproducible
    bool plots = true;
    bool traces = false;         // per-run alternation traces
};

struct ExperimentSpec
{
    std::string name = "experiment";
    std::string preset = "desk";
    std::uint64_t base_seed = 1;
    int trials = 1;
    std::vector<std::string> schemes = {"ao-ajhbf"};
    SweepSpec sweep;
    ScenarioConfig scenario = ScenarioConfig::desk();
    EstimationConfig estimation;
    AoConfig ao;
    WmmseConfig wmmse;
    OutputSpec output;

    void validate() const
    {
        if (trials < 1)
            throw std::invalid_argument("experiment: trials must be >= 1");
        if (schemes.empty())
            throw std::invalid_argument("experiment: scheme list is empty");
        for (const auto &s : schemes)
            if (std::find(registered_schemes().begin(), registered_schemes().end(), s) == registered_schemes().end())
                throw std::invalid_argument("experiment: unknown scheme '" + s + "'");
        if (std::set<std::string>(schemes.begin(), schemes.end()).size() != schemes.size())
            throw std::invalid_argument("experiment: duplicate scheme");
        if (std::find(sweep_axes().begin(), sweep_axes().end(), sweep.axis) == sweep_axes().end())
            throw std::invalid_argument("experiment: unknown sweep axis '" + sweep.axis + "'");
        if (sweep.values.empty())
            throw std::invalid_argument("experiment: sweep values are empty");
        if (!(sweep.n_rf_ratio > 0.0 && sweep.n_rf_ratio <= 1.0) || sweep.jammer_antennas_total < 1)
            throw std::invalid_argument("experiment: invalid sweep coupling");
        scenario.validate();
        estimation.validate(scenario.K);
        ao.validate();
        wmmse.validate();
    }
};

namespace detail
{
using nlohmann::json;

inline void check_keys(const json &j, const std::string &where, std::initializer_list<const char *> allowed)
{
    if (!j.is_object())
        throw std::invalid_argument(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char *a) { return it.key() == a; }))
            throw std::invalid_argument(where + ": unknown key '" + it.key() + "'");
}

template <class T> void read_opt(const json &j, const char *key, T &out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

inline void read_scenario(const json &j, ScenarioConfig &c)
{
    check_keys(j, "scenario",
               {"L", "K", "G", "M", "N_RF", "M_U", "M_RF", "M_J", "P", "P_bar", "P_max_w", "sigma2_dbm",
                "gamma_th_db", "region_side_m", "wavelength_m", "angle_spread_deg", "normalize_paths",
                "large_scale"});
    read_opt(j, "L", c.L);
    read_opt(j, "K", c.K);
    read_opt(j, "G", c.G);
    read_opt(j, "M", c.M);
    read_opt(j, "N_RF", c.N_RF);
    read_opt(j, "M_U", c.M_U);
    read_opt(j, "M_RF", c.M_RF);
    read_opt(j, "M_J", c.M_J);
    read_opt(j, "P", c.P);
    read_opt(j, "P_bar", c.P_bar);
    read_opt(j, "P_max_w", c.P_max);
    if (j.contains("sigma2_dbm"))
        c.sigma2 = dbm_to_watt(j.at("sigma2_dbm").get<double>());
    if (j.contains("gamma_th_db"))
        c.gamma_th = db_to_linear(j.at("gamma_th_db").get<double>());
    read_opt(j, "region_side_m", c.region_side);
    read_opt(j, "wavelength_m", c.wavelength);
    read_opt(j, "angle_spread_deg", c.angle_spread_deg);
    read_opt(j, "normalize_paths", c.normalize_paths);
    if (j.contains("large_scale"))
    {
        const json &ls = j.at("large_scale");
        check_keys(ls, "scenario.large_scale", {"model", "intercept_db", "slope", "shadow_std_db", "fixed_db"});
        if (ls.contains("model"))
        {
            const auto m = ls.at("model").get<std::string>();
            if (m == "log_distance")
                c.large_scale.model = LargeScaleModel::log_distance;
            else if (m == "fixed")
                c.large_scale.model = LargeScaleModel::fixed;
            else
                throw std::invalid_argument("scenario.large_scale: unknown model '" + m + "'");
        }
        read_opt(ls, "intercept_db", c.large_scale.intercept_db);
        read_opt(ls, "slope", c.large_scale.slope);
        read_opt(ls, "shadow_std_db", c.large_scale.shadow_std_db);
        read_opt(ls, "fixed_db", c.large_scale.fixed_db);
    }
}

inline void read_estimation(const json &j, EstimationConfig &e)
{
    check_keys(j, "estimation",
               {"mode", "tau_p", "rho_p_w", "nmse", "quant_bits", "quantize", "order", "jammer_stat_draws"});
    if (j.contains("mode"))
    {
        const auto m = j.at("mode").get<std::string>();
        if (m == "pilot_mmse")
            e.mode = EstimationMode::pilot_mmse;
        else if (m == "synthetic_nmse")
            e.mode = EstimationMode::synthetic_nmse;
        else
            throw std::invalid_argument("estimation: unknown mode '" + m + "'");
    }
    if (j.contains("order"))
    {
        const auto o = j.at("order").get<std::string>();
        if (o == "estimate_then_quantize")
            e.order = QuantizationOrder::estimate_then_quantize;
        else if (o == "quantize_then_estimate")
            e.order = QuantizationOrder::quantize_then_estimate;
        else
            throw std::invalid_argument("estimation: unknown order '" + o + "'");
    }
    read_opt(j, "tau_p", e.tau_p);
    read_opt(j, "rho_p_w", e.rho_p);
    read_opt(j, "nmse", e.nmse_target);
    read_opt(j, "quant_bits", e.quant_bits);
    read_opt(j, "quantize", e.quantize);
    read_opt(j, "jammer_stat_draws", e.jammer_stat_draws);
}

inline void read_algorithm(const json &j, AoConfig &a, WmmseConfig &w)
{
    check_keys(j, "algorithm",
               {"T", "kappa_rel", "hybrid", "delta", "pga_max_iters", "tol_eta", "armijo_init", "armijo_shrink",
                "armijo_c", "max_backtracks", "pga_spectral_step", "factorization_max_iters", "factorization_tol", "q_hi_factor",
                "q_rel_tol", "wmmse_max_inner", "wmmse_tol", "wmmse_max_ap_sweeps"});
    read_opt(j, "T", a.T);
    read_opt(j, "kappa_rel", a.kappa_rel);
    read_opt(j, "hybrid", a.hybrid);
    read_opt(j, "delta", a.pga.delta);
    read_opt(j, "pga_max_iters", a.pga.max_iters);
    read_opt(j, "tol_eta", a.pga.tol_eta);
    read_opt(j, "armijo_init", a.pga.armijo_init);
    read_opt(j, "armijo_shrink", a.pga.armijo_shrink);
    read_opt(j, "armijo_c", a.pga.armijo_c);
    read_opt(j, "max_backtracks", a.pga.max_backtracks);
    read_opt(j, "pga_spectral_step", a.pga.spectral_step);
    read_opt(j, "factorization_max_iters", a.factorization.max_iters);
    read_opt(j, "factorization_tol", a.factorization.tol);
    read_opt(j, "q_hi_factor", a.qsearch.q_hi_factor);
    read_opt(j, "q_rel_tol", a.qsearch.rel_tol);
    read_opt(j, "wmmse_max_inner", w.max_inner);
    read_opt(j, "wmmse_tol", w.tol);
    read_opt(j, "wmmse_max_ap_sweeps", w.max_ap_sweeps);
}
} // namespace detail

inline ScenarioConfig preset_scenario(const std::string &name)
{
    if (name == "desk")
        return ScenarioConfig::desk();
    if (name == "paper")
        return ScenarioConfig::paper();
    throw std::invalid_argument("unknown preset '" + name + "' (expected desk or paper)");
}

/// Parses a spec document. A non-empty preset_override replaces the file's
/// preset; scenario keys in the file still apply on top of it.
inline ExperimentSpec parse_experiment(const nlohmann::json &j, const std::string &preset_override = "")
{
    using detail::check_keys;
    using detail::read_opt;
    check_keys(j, "experiment",
               {"schema_version", "name", "preset", "base_seed", "trials", "schemes", "sweep", "scenario",
                "estimation", "algorithm", "output"});
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != experiment_schema_version)
        throw std::invalid_argument("experiment: schema_version must be " + std::to_string(experiment_schema_version));
    ExperimentSpec s;
    read_opt(j, "name", s.name);
    read_opt(j, "preset", s.preset);
    if (!preset_override.empty())
        s.preset = preset_override;
    s.scenario = preset_scenario(s.preset);
    read_opt(j, "base_seed", s.base_seed);
    read_opt(j, "trials", s.trials);
    read_opt(j, "schemes", s.schemes);
    if (j.contains("sweep"))
    {
        const auto &sw = j.at("sweep");
        check_keys(sw, "sweep", {"axis", "values", "n_rf_ratio", "jammer_antennas_total"});
        read_opt(sw, "axis", s.sweep.axis);
        read_opt(sw, "values", s.sweep.values);
        read_opt(sw, "n_rf_ratio", s.sweep.n_rf_ratio);
        read_opt(sw, "jammer_antennas_total", s.sweep.jammer_antennas_total);
    }
    if (j.contains("scenario"))
        detail::read_scenario(j.at("scenario"), s.scenario);
    if (j.contains("estimation"))
        detail::read_estimation(j.at("estimation"), s.estimation);
    if (j.contains("algorithm"))
        detail::read_algorithm(j.at("algorithm"), s.ao, s.wmmse);
    if (j.contains("output"))
    {
        const auto &o = j.at("output");
        check_keys(o, "output", {"record_runtime", "plots", "traces"});
        read_opt(o, "record_runtime", s.output.record_runtime);
        read_opt(o, "plots", s.output.plots);
        read_opt(o, "traces", s.output.traces);
    }
    s.validate();
    return s;
}

struct PointConfig
{
    ScenarioConfig scenario;
    EstimationConfig estimation;
};

/// Scenario and estimation settings at one sweep value.
inline PointConfig apply_sweep(const ExperimentSpec &s, double value)
{
    PointConfig p{s.scenario, s.estimation};
    const std::string &a = s.sweep.axis;
    auto as_count = [&](const char *what) {
        const double r = std::round(value);
        if (r != value || r < 0)
            throw std::invalid_argument(std::string("sweep: ") + what + " must be a nonnegative integer");
        return static_cast<int>(r);
    };
    if (a == "M")
    {
        p.scenario.M = as_count("M");
        p.scenario.N_RF = std::max(1, static_cast<int>(std::lround(s.sweep.n_rf_ratio * p.scenario.M)));
    }
    else if (a == "G")
    {
        p.scenario.G = as_count("G");
        if (p.scenario.G > 0)
        {
            if (s.sweep.jammer_antennas_total % p.scenario.G != 0)
                throw std::invalid_argument("sweep: jammer antenna total not divisible by G");
            p.scenario.M_J = s.sweep.jammer_antennas_total / p.scenario.G;
        }
    }
    else if (a == "nmse")
        p.estimation.nmse_target = value;
    else if (a == "M_U")
    {
        p.scenario.M_U = as_count("M_U");
        p.scenario.M_RF = std::min(p.scenario.M_RF, p.scenario.M_U);
    }
    else if (a == "P_max_w")
        p.scenario.P_max = value;
    else if (a == "gamma_th_db")
        p.scenario.gamma_th = db_to_linear(value);
    p.scenario.validate();
    p.estimation.validate(p.scenario.K);
    return p;
}

inline nlohmann::json scenario_json(const ScenarioConfig &c)
{
    return {{"L", c.L},
            {"K", c.K},
            {"G", c.G},
            {"M", c.M},
            {"N_RF", c.N_RF},
            {"M_U", c.M_U},
            {"M_RF", c.M_RF},
            {"M_J", c.M_J},
            {"P", c.P},
            {"P_bar", c.P_bar},
            {"P_max_w", c.P_max},
            {"sigma2_dbm", 10.0 * std::log10(c.sigma2) + 30.0},
            {"gamma_th_db", linear_to_db(c.gamma_th)},
            {"region_side_m", c.region_side},
            {"wavelength_m", c.wavelength},
            {"angle_spread_deg", c.angle_spread_deg},
            {"normalize_paths", c.normalize_paths},
            {"large_scale",
             {{"model", c.large_scale.model == LargeScaleModel::fixed ? "fixed" : "log_distance"},
              {"intercept_db", c.large_scale.intercept_db},
              {"slope", c.large_scale.slope},
              {"shadow_std_db", c.large_scale.shadow_std_db},
              {"fixed_db", c.large_scale.fixed_db}}}};
}

/// Fully resolved spec, re-parseable by parse_experiment.
inline nlohmann::json experiment_json(const ExperimentSpec &s)
{
    const auto &e = s.estimation;
    return {{"schema_version", experiment_schema_version},
            {"name", s.name},
            {"preset", s.preset},
            {"base_seed", s.base_seed},
            {"trials", s.trials},
            {"schemes", s.schemes},
            {"sweep",
             {{"axis", s.sweep.axis},
              {"values", s.sweep.values},
              {"n_rf_ratio", s.sweep.n_rf_ratio},
              {"jammer_antennas_total", s.sweep.jammer_antennas_total}}},
            {"scenario", scenario_json(s.scenario)},
            {"estimation",
             {{"mode", e.mode == EstimationMode::pilot_mmse ? "pilot_mmse" : "synthetic_nmse"},
              {"tau_p", e.tau_p},
              {"rho_p_w", e.rho_p},
              {"nmse", e.nmse_target},
              {"quant_bits", e.quant_bits},
              {"quantize", e.quantize},
              {"order", e.order == QuantizationOrder::estimate_then_quantize ? "estimate_then_quantize"
                                                                             : "quantize_then_estimate"},
              {"jammer_stat_draws", e.jammer_stat_draws}}},
            {"algorithm",
             {{"T", s.ao.T},
              {"kappa_rel", s.ao.kappa_rel},
              {"hybrid", s.ao.hybrid},
              {"delta", s.ao.pga.delta},
              {"pga_max_iters", s.ao.pga.max_iters},
              {"tol_eta", s.ao.pga.tol_eta},
              {"armijo_init", s.ao.pga.armijo_init},
              {"armijo_shrink", s.ao.pga.armijo_shrink},
              {"armijo_c", s.ao.pga.armijo_c},
              {"max_backtracks", s.ao.pga.max_backtracks},
              {"pga_spectral_step", s.ao.pga.spectral_step},
              {"factorization_max_iters", s.ao.factorization.max_iters},
              {"factorization_tol", s.ao.factorization.tol},
              {"q_hi_factor", s.ao.qsearch.q_hi_factor},
              {"q_rel_tol", s.ao.qsearch.rel_tol},
              {"wmmse_max_inner", s.wmmse.max_inner},
              {"wmmse_tol", s.wmmse.tol},
              {"wmmse_max_ap_sweeps", s.wmmse.max_ap_sweeps}}},
            {"output",
             {{"record_runtime", s.output.record_runtime},
              {"plots", s.output.plots},
              {"traces", s.output.traces}}}};
}

} // namespace cfaj

#endif
