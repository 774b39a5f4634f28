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

// Command-line driver.
//
//   cfaj run <spec.json>            run an experiment, write results to --out-dir
//   cfaj summarize <results.csv>    recompute summary.json from a results file
//   cfaj plot <summary.json>        render the JSR chart from a summary
//   cfaj dump <spec.json>           channel dump and prior spectra of one trial
//   cfaj export-sdr <spec.json>     lifted transmit problem of one trial
//
// The seed may also be set through CFAJ_SEED; --seed wins over it.

#include "cfaj/cfaj.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace
{

std::string read_file(const fs::path &p)
{
    std::ifstream is(p, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct CommonOptions
{
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::string out_dir = "out";
    std::string preset;
    bool record_runtime = false;
};

cfaj::ExperimentSpec load_spec(const std::string &file, const CommonOptions &o)
{
    const auto j = nlohmann::json::parse(read_file(file));
    auto spec = cfaj::parse_experiment(j, o.preset);
    if (const char *env = std::getenv("CFAJ_SEED"); env != nullptr && *env != '\0')
        spec.base_seed = std::stoull(env);
    if (o.seed)
        spec.base_seed = *o.seed;
    if (o.record_runtime)
        spec.output.record_runtime = true;
    spec.validate();
    return spec;
}

void print_summary(const nlohmann::json &summary)
{
    for (const auto &p : summary.at("points"))
    {
        std::cout << p.at("scheme").get<std::string>() << " @ " << summary.at("sweep_axis").get<std::string>() << '='
                  << p.at("sweep_value") << ": JSR " << p.at("jsr_db_linear_mean") << " dB (linear mean), "
                  << p.at("jsr_db_mean") << " dB (dB mean), infeasible " << p.at("infeasible") << ", failed "
                  << p.at("failed") << '\n';
    }
    for (auto it = summary.at("trends").begin(); it != summary.at("trends").end(); ++it)
        std::cout << "trend " << it.key() << ": " << it.value().at("verdict").get<std::string>() << '\n';
    for (const auto &c : summary.at("comparisons"))
        std::cout << c.at("a").get<std::string>() << " vs " << c.at("b").get<std::string>() << ": "
                  << c.at("verdict").get<std::string>() << " (p = " << c.at("p_value") << ")\n";
}

/// Runs AO-AJHBF on trial 0 of the first sweep point.
struct FirstTrial
{
    cfaj::TrialScene scene;
    cfaj::AoResult result;
};

FirstTrial first_trial(const cfaj::ExperimentSpec &spec, bool run_ao)
{
    FirstTrial t;
    const auto pc = cfaj::apply_sweep(spec, spec.sweep.values.front());
    t.scene = cfaj::make_trial_scene(pc, spec.base_seed, true, false);
    if (run_ao)
        t.result = cfaj::ao_ajhbf(t.scene.scenario, t.scene.priors, spec.ao);
    return t;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"cfaj: anti-jamming hybrid beamforming experiments"};
    app.require_subcommand(1);
    CommonOptions opt;
    std::string input;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--seed", opt.seed, "Base seed (overrides the spec file and CFAJ_SEED)");
        sub->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out-dir", opt.out_dir, "Output directory");
        sub->add_option("--preset", opt.preset, "Scenario preset")->check(CLI::IsMember({"paper", "desk"}));
    };

    auto *run = app.add_subcommand("run", "Run an experiment spec");
    run->add_option("spec", input, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
    add_common(run);
    run->add_flag("--record-runtime", opt.record_runtime, "Record wall time per run (breaks byte-reproducibility)");

    auto *summ = app.add_subcommand("summarize", "Summarize a results.csv");
    summ->add_option("results", input, "results.csv")->required()->check(CLI::ExistingFile);
    summ->add_option("--out-dir", opt.out_dir, "Output directory");

    auto *plot = app.add_subcommand("plot", "Plot a summary.json");
    plot->add_option("summary", input, "summary.json")->required()->check(CLI::ExistingFile);
    plot->add_option("--out-dir", opt.out_dir, "Output directory");

    auto *dump = app.add_subcommand("dump", "Write the channel dump and prior spectra of trial 0");
    dump->add_option("spec", input, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
    add_common(dump);

    auto *sdr = app.add_subcommand("export-sdr", "Export the lifted transmit problem of trial 0");
    sdr->add_option("spec", input, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
    add_common(sdr);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run)
        {
            const auto spec = load_spec(input, opt);
            const auto out = cfaj::run_experiment(spec, opt.out_dir, opt.threads);
            print_summary(out.summary);
            std::cout << "failed rows: " << out.failed << " of " << out.rows.size() << "\n";
            std::cout << "outputs written to " << opt.out_dir << '\n';
            return out.exit_code;
        }
        if (*summ)
        {
            std::ifstream is(input);
            const auto rows = cfaj::read_results_csv(is);
            const auto summary = cfaj::summarize(rows);
            fs::create_directories(opt.out_dir);
            cfaj::write_text_file(fs::path(opt.out_dir) / "summary.json", cfaj::dump_json(summary));
            print_summary(summary);
            return 0;
        }
        if (*plot)
        {
            const auto summary = nlohmann::json::parse(read_file(input));
            const auto chart = cfaj::chart_from_summary(summary);
            fs::create_directories(opt.out_dir);
            const auto name = "jsr_vs_" + summary.value("sweep_axis", std::string("sweep")) + ".svg";
            cfaj::write_text_file(fs::path(opt.out_dir) / name, cfaj::render_svg(chart));
            std::cout << "wrote " << (fs::path(opt.out_dir) / name).string() << '\n';
            return 0;
        }
        if (*dump)
        {
            const auto spec = load_spec(input, opt);
            const auto t = first_trial(spec, false);
            fs::create_directories(opt.out_dir);
            std::ostringstream ch, sp;
            cfaj::write_channels(ch, t.scene.channels);
            cfaj::write_prior_spectra(sp, t.scene.priors);
            cfaj::write_text_file(fs::path(opt.out_dir) / "channels.txt", ch.str());
            cfaj::write_text_file(fs::path(opt.out_dir) / "prior_spectra.csv", sp.str());
            std::cout << "wrote channels.txt and prior_spectra.csv to " << opt.out_dir << '\n';
            return 0;
        }
        if (*sdr)
        {
            const auto spec = load_spec(input, opt);
            const auto t = first_trial(spec, true);
            const auto &ps = t.scene.priors;
            const auto inst = cfaj::make_sdr_instance(ps, t.result.w, cfaj::uniform_jamming(ps.G, ps.K, t.result.q));
            fs::create_directories(opt.out_dir);
            std::ostringstream os;
            cfaj::write_sdr(os, inst);
            cfaj::write_text_file(fs::path(opt.out_dir) / "sdr_instance.txt", os.str());
            std::cout << "wrote sdr_instance.txt (q = " << t.result.q << " W) to " << opt.out_dir << '\n';
            return 0;
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
