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

#ifndef CFAJ_HARNESS_HPP
#define CFAJ_HARNESS_HPP

// Seeded Monte Carlo experiment driver. Trial i of every sweep point uses
// seed base_seed + i, and every scheme of a trial sees the same channels and
// estimates. Results are merged in (point, trial, scheme) order, so outputs
// do not depend on the thread count.

#include "config.hpp"
#include "dumps.hpp"
#include "stats.hpp"
#include "svg.hpp"

#include <json.hpp>

#include <Eigen/Core>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cfaj
{

inline constexpr const char *tool_version = "1.0.0";
inline constexpr const char *jsr_definition =
    "JSR_dB = 10*log10(sum_{g,k} q_{g,k} / (K * P_max)) with q_{g,k} = q*, i.e. 10*log10(G * q* / P_max)";

inline double jsr_db(double q, int G, double P_max) { return 10.0 * std::log10(static_cast<double>(G) * q / P_max); }

struct TrialRecord
{
    std::string sweep_axis;
    double sweep_value = 0.0;
    std::string scheme;
    int trial = 0;
    std::uint64_t seed = 0;
    double q_watts = 0.0;
    double jsr_db = 0.0;
    double min_xi_db = 0.0;
    double runtime_s = 0.0;
    bool failed = false;
    bool infeasible = false;
    std::string error;
    std::vector<double> xi;
    AoTrace trace;
};

inline const char *results_header = "sweep_axis,sweep_value,scheme,trial,seed,q_watts,jsr_db,min_xi_db,runtime_s";

inline void write_results_csv(std::ostream &os, const std::vector<TrialRecord> &rows)
{
    os << results_header << '\n';
    for (const auto &r : rows)
        os << r.sweep_axis << ',' << format_double(r.sweep_value) << ',' << r.scheme << ',' << r.trial << ','
           << r.seed << ',' << format_double(r.q_watts) << ',' << format_double(r.jsr_db) << ','
           << format_double(r.min_xi_db) << ',' << format_double(r.runtime_s) << '\n';
}

inline std::vector<TrialRecord> read_results_csv(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line) || line != results_header)
        throw std::runtime_error("read_results_csv: unexpected header");
    std::vector<TrialRecord> rows;
    int lineno = 1;
    while (std::getline(is, line))
    {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(cell);
        if (f.size() != 9)
            throw std::runtime_error("read_results_csv: line " + std::to_string(lineno) + " has " +
                                     std::to_string(f.size()) + " fields");
        TrialRecord r;
        r.sweep_axis = f[0];
        r.sweep_value = parse_double(f[1]);
        r.scheme = f[2];
        r.trial = std::stoi(f[3]);
        r.seed = std::stoull(f[4]);
        r.q_watts = parse_double(f[5]);
        r.jsr_db = parse_double(f[6]);
        r.min_xi_db = parse_double(f[7]);
        r.runtime_s = parse_double(f[8]);
        r.failed = std::isnan(r.q_watts);
        r.infeasible = !r.failed && r.q_watts == 0.0;
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Channels, estimates and priors of one trial. The quantized and ideal
/// fronthaul variants share everything upstream of quantization.
struct TrialScene
{
    ScenarioConfig scenario;
    ChannelSet channels;
    PriorSet priors;
    PriorSet priors_noquant;
};

inline TrialScene make_trial_scene(const PointConfig &pc, std::uint64_t seed, bool need_quant, bool need_noquant)
{
    TrialScene s;
    s.scenario = pc.scenario;
    s.scenario.rng_seed = seed;
    Rng rng(seed);
    const Deployment dep = generate_scenario(s.scenario, rng);
    s.channels = generate_channels(s.scenario, dep, rng);
    const EstimateResult est = estimate_channels(s.scenario, pc.estimation, s.channels, rng);
    auto R = jammer_covariances(s.scenario, pc.estimation, s.channels, rng);
    if (need_quant)
    {
        Rng r = rng;
        s.priors = assemble_priors(s.scenario, pc.estimation, s.channels, est, R, pc.estimation.quantize, r);
    }
    if (need_noquant)
    {
        Rng r = rng;
        s.priors_noquant = assemble_priors(s.scenario, pc.estimation, s.channels, est, R, false, r);
    }
    return s;
}

inline AoResult run_scheme(const std::string &scheme, const TrialScene &ts, const ExperimentSpec &spec)
{
    if (scheme == "ao-ajhbf")
        return ao_ajhbf(ts.scenario, ts.priors, spec.ao);
    if (scheme == "wmmse")
        return wmmse_ao(ts.scenario, ts.priors, spec.ao, spec.wmmse);
    if (scheme == "ao-ajhbf-noquant")
        return ao_ajhbf(ts.scenario, ts.priors_noquant, spec.ao);
    throw std::invalid_argument("unknown scheme '" + scheme + "'");
}

/// All (point, trial, scheme) records, in that order.
inline std::vector<TrialRecord> run_trials(const ExperimentSpec &spec, int threads = 1)
{
    spec.validate();
    const std::size_t P = spec.sweep.values.size();
    const std::size_t T = static_cast<std::size_t>(spec.trials);
    const std::size_t S = spec.schemes.size();
    std::vector<PointConfig> points;
    for (double v : spec.sweep.values)
        points.push_back(apply_sweep(spec, v));
    const auto n_noquant = std::count(spec.schemes.begin(), spec.schemes.end(), "ao-ajhbf-noquant");
    const bool need_noquant = n_noquant > 0;
    const bool need_quant = static_cast<std::size_t>(n_noquant) < S;

    std::vector<TrialRecord> rows(P * T * S);
    auto task = [&](std::size_t idx) {
        const std::size_t p = idx / T;
        const std::size_t i = idx % T;
        const std::uint64_t seed = spec.base_seed + i;
        const int G = points[p].scenario.G;
        const double P_max = points[p].scenario.P_max;
        TrialScene ts;
        std::string scene_error;
        try
        {
            ts = make_trial_scene(points[p], seed, need_quant, need_noquant);
        }
        catch (const std::exception &e)
        {
            scene_error = std::string("scene: ") + e.what();
        }
        for (std::size_t s = 0; s < S; ++s)
        {
            TrialRecord &r = rows[(p * T + i) * S + s];
            r.sweep_axis = spec.sweep.axis;
            r.sweep_value = spec.sweep.values[p];
            r.scheme = spec.schemes[s];
            r.trial = static_cast<int>(i);
            r.seed = seed;
            const double nan = std::numeric_limits<double>::quiet_NaN();
            if (!scene_error.empty())
            {
                r.failed = true;
                r.error = scene_error;
                r.q_watts = r.jsr_db = r.min_xi_db = nan;
                continue;
            }
            const auto t0 = std::chrono::steady_clock::now();
            try
            {
                AoResult res = run_scheme(r.scheme, ts, spec);
                r.runtime_s = spec.output.record_runtime
                                  ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                                  : 0.0;
                r.q_watts = res.q;
                r.infeasible = res.infeasible;
                r.jsr_db = jsr_db(res.q, G, P_max);
                r.xi = res.xi;
                const double mx = res.xi.empty() ? 0.0 : *std::min_element(res.xi.begin(), res.xi.end());
                r.min_xi_db = linear_to_db(mx);
                r.trace = std::move(res.trace);
            }
            catch (const std::exception &e)
            {
                r.failed = true;
                r.error = e.what();
                r.q_watts = r.jsr_db = r.min_xi_db = nan;
            }
        }
    };

    const std::size_t n_tasks = P * T;
    const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(n_tasks)));
    if (n_threads == 1)
    {
        for (std::size_t t = 0; t < n_tasks; ++t)
            task(t);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < n_threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t t = next++; t < n_tasks; t = next++)
                task(t);
        });
    for (auto &th : pool)
        th.join();
    return rows;
}

namespace detail
{
/// Trend of one scheme across sorted sweep points from trial-paired sign
/// tests between consecutive points.
inline nlohmann::json trend_verdict(const std::vector<std::vector<double>> &by_point)
{
    nlohmann::json out;
    if (by_point.size() < 2)
    {
        out["verdict"] = "n/a";
        return out;
    }
    bool all_up = true, all_down = true, all_tied = true;
    nlohmann::json steps = nlohmann::json::array();
    for (std::size_t p = 0; p + 1 < by_point.size(); ++p)
    {
        std::vector<double> a, b;
        for (std::size_t i = 0; i < std::min(by_point[p].size(), by_point[p + 1].size()); ++i)
            if (!std::isnan(by_point[p][i]) && !std::isnan(by_point[p + 1][i]))
            {
                a.push_back(by_point[p + 1][i]);
                b.push_back(by_point[p][i]);
            }
        const SignTest up = sign_test(a, b);
        const SignTest down = sign_test(b, a);
        all_up = all_up && up.p_value < 0.05;
        all_down = all_down && down.p_value < 0.05;
        all_tied = all_tied && up.wins == 0 && up.losses == 0;
        steps.push_back({{"wins_up", up.wins}, {"wins_down", up.losses}, {"ties", up.ties},
                         {"p_increase", up.p_value}, {"p_decrease", down.p_value}});
    }
    out["steps"] = steps;
    out["verdict"] = all_tied ? "flat" : all_up ? "increasing" : all_down ? "decreasing" : "none";
    return out;
}

inline nlohmann::json finite_or_null(double v)
{
    if (std::isfinite(v))
        return v;
    return nullptr;
}
} // namespace detail

/// Per-point statistics, trend verdicts and paired scheme comparisons.
inline nlohmann::json summarize(const std::vector<TrialRecord> &rows)
{
    using nlohmann::json;
    std::vector<std::string> schemes;
    std::vector<double> values;
    std::string axis;
    int max_trial = -1;
    for (const auto &r : rows)
    {
        if (std::find(schemes.begin(), schemes.end(), r.scheme) == schemes.end())
            schemes.push_back(r.scheme);
        if (std::find(values.begin(), values.end(), r.sweep_value) == values.end())
            values.push_back(r.sweep_value);
        axis = r.sweep_axis;
        max_trial = std::max(max_trial, r.trial);
    }
    std::sort(values.begin(), values.end());
    const std::size_t T = static_cast<std::size_t>(max_trial + 1);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    // jsr[scheme][point][trial]
    std::vector<std::vector<std::vector<double>>> jsr(
        schemes.size(), std::vector<std::vector<double>>(values.size(), std::vector<double>(T, nan)));
    for (const auto &r : rows)
    {
        const auto s = std::find(schemes.begin(), schemes.end(), r.scheme) - schemes.begin();
        const auto p = std::find(values.begin(), values.end(), r.sweep_value) - values.begin();
        jsr[s][p][static_cast<std::size_t>(r.trial)] = r.failed ? nan : r.jsr_db;
    }

    json points = json::array();
    int failed_total = 0;
    for (std::size_t s = 0; s < schemes.size(); ++s)
        for (std::size_t p = 0; p < values.size(); ++p)
        {
            std::vector<double> finite_db;
            double linear_sum = 0.0;
            int ok = 0, failed = 0, infeasible = 0;
            for (double v : jsr[s][p])
            {
                if (std::isnan(v))
                {
                    ++failed;
                    continue;
                }
                ++ok;
                if (std::isfinite(v))
                {
                    finite_db.push_back(v);
                    linear_sum += std::pow(10.0, v / 10.0);
                }
                else
                    ++infeasible;
            }
            failed_total += failed;
            const Moments m = moments(finite_db);
            const double lin_db = ok > 0 ? 10.0 * std::log10(linear_sum / ok) : nan;
            points.push_back({{"scheme", schemes[s]},
                              {"sweep_value", values[p]},
                              {"trials", ok + failed},
                              {"failed", failed},
                              {"infeasible", infeasible},
                              {"jsr_db_linear_mean", detail::finite_or_null(lin_db)},
                              {"jsr_db_mean", detail::finite_or_null(m.n > 0 ? m.mean : nan)},
                              {"jsr_db_std", m.stddev},
                              {"jsr_db_stderr", m.stderr_}});
        }

    json trends = json::object();
    for (std::size_t s = 0; s < schemes.size(); ++s)
        trends[schemes[s]] = detail::trend_verdict(jsr[s]);

    json comparisons = json::array();
    for (std::size_t a = 0; a < schemes.size(); ++a)
        for (std::size_t b = 0; b < schemes.size(); ++b)
        {
            if (a == b)
                continue;
            std::vector<double> xa, xb;
            for (std::size_t p = 0; p < values.size(); ++p)
                for (std::size_t i = 0; i < T; ++i)
                    if (!std::isnan(jsr[a][p][i]) && !std::isnan(jsr[b][p][i]))
                    {
                        xa.push_back(jsr[a][p][i]);
                        xb.push_back(jsr[b][p][i]);
                    }
            const SignTest t = sign_test(xa, xb);
            comparisons.push_back({{"a", schemes[a]},
                                   {"b", schemes[b]},
                                   {"pairs", xa.size()},
                                   {"wins", t.wins},
                                   {"losses", t.losses},
                                   {"ties", t.ties},
                                   {"p_value", t.p_value},
                                   {"verdict", t.p_value < 0.05 ? "A>=B" : "not significant"}});
        }

    return {{"schema_version", 1},
            {"sweep_axis", axis},
            {"sweep_values", values},
            {"schemes", schemes},
            {"jsr_definition", jsr_definition},
            {"jsr_averaging", "jsr_db_linear_mean averages G*q/P_max in linear units before dB conversion "
                              "(infeasible trials count as zero); jsr_db_mean averages dB values of feasible trials"},
            {"failed_rows", failed_total},
            {"total_rows", rows.size()},
            {"points", points},
            {"trends", trends},
            {"comparisons", comparisons}};
}

/// JSR (linear-mean, dB) versus the sweep axis, one series per scheme, with
/// standard-error bars.
inline Chart chart_from_summary(const nlohmann::json &summary)
{
    Chart c;
    const std::string axis = summary.value("sweep_axis", std::string("sweep"));
    c.title = "Average resistible JSR vs " + axis;
    c.x_label = axis;
    c.y_label = "JSR (dB)";
    if (!summary.contains("schemes"))
        return c;
    for (const auto &name : summary.at("schemes"))
    {
        Series s;
        s.name = name.get<std::string>();
        for (const auto &p : summary.at("points"))
        {
            if (p.at("scheme") != name || p.at("jsr_db_linear_mean").is_null())
                continue;
            s.points.push_back({p.at("sweep_value").get<double>(), p.at("jsr_db_linear_mean").get<double>(),
                                p.at("jsr_db_stderr").get<double>()});
        }
        c.series.push_back(std::move(s));
    }
    return c;
}

inline nlohmann::json make_manifest(const ExperimentSpec &spec, const std::vector<std::string> &outputs)
{
    const double alpha = spec.estimation.quantize ? quantization_alpha(spec.estimation.quant_bits) : 1.0;
    return {{"schema_version", 1},
            {"tool", "cfaj"},
            {"version", tool_version},
            {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                  std::to_string(EIGEN_MINOR_VERSION)},
            {"seed_rule", "trial i uses seed base_seed + i at every sweep point and for every scheme"},
            {"quantization",
             {{"enabled", spec.estimation.quantize}, {"bits", spec.estimation.quant_bits}, {"alpha", alpha}}},
            {"jsr_definition", jsr_definition},
            {"spec", experiment_json(spec)},
            {"outputs", outputs}};
}

struct ExperimentOutcome
{
    std::vector<TrialRecord> rows;
    nlohmann::json summary;
    int failed = 0;
    int exit_code = 0; // 3 when more than 10% of rows failed
};

inline void write_text_file(const std::filesystem::path &p, const std::string &content)
{
    std::ofstream os(p, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write " + p.string());
    os << content;
}

inline std::string dump_json(const nlohmann::json &j) { return j.dump(2) + "\n"; }

/// Runs all trials and writes results.csv, summary.json, manifest.json, the
/// SVG plot and (optionally) alternation traces into out_dir.
inline ExperimentOutcome run_experiment(const ExperimentSpec &spec, const std::filesystem::path &out_dir,
                                        int threads = 1)
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    ExperimentOutcome out;
    out.rows = run_trials(spec, threads);
    std::vector<std::string> outputs = {"results.csv", "summary.json", "manifest.json"};

    std::ostringstream csv;
    write_results_csv(csv, out.rows);
    write_text_file(out_dir / "results.csv", csv.str());

    out.summary = summarize(out.rows);
    nlohmann::json errors = nlohmann::json::array();
    for (const auto &r : out.rows)
        if (r.failed)
        {
            ++out.failed;
            errors.push_back({{"scheme", r.scheme}, {"sweep_value", r.sweep_value}, {"trial", r.trial},
                              {"error", r.error}});
        }
    out.summary["errors"] = errors;
    write_text_file(out_dir / "summary.json", dump_json(out.summary));

    if (spec.output.plots)
    {
        const std::string name = "jsr_vs_" + spec.sweep.axis + ".svg";
        write_text_file(out_dir / name, render_svg(chart_from_summary(out.summary)));
        outputs.push_back(name);
    }
    if (spec.output.traces)
    {
        fs::create_directories(out_dir / "traces");
        for (const auto &r : out.rows)
        {
            if (r.failed)
                continue;
            std::ostringstream tr;
            r.trace.write_csv(tr);
            const std::string name = "traces/" + r.scheme + "_" + format_double(r.sweep_value) + "_" +
                                     std::to_string(r.trial) + ".csv";
            write_text_file(out_dir / name, tr.str());
        }
        outputs.push_back("traces/");
    }
    write_text_file(out_dir / "manifest.json", dump_json(make_manifest(spec, outputs)));
    out.exit_code = 10 * out.failed > static_cast<int>(out.rows.size()) ? 3 : 0;
    return out;
}

} // namespace cfaj

#endif
