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

#include "fixtures.hpp"

#include <catch_amalgamated.hpp>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cfaj;
using Catch::Approx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace
{
/// Small and fast experiment document.
json tiny_spec()
{
    return json::parse(R"({
        "schema_version": 1,
        "name": "tiny",
        "base_seed": 7,
        "trials": 2,
        "schemes": ["ao-ajhbf", "wmmse"],
        "sweep": {"axis": "M", "values": [4, 8]},
        "scenario": {"L": 2, "K": 2, "G": 1, "M_U": 4, "M_RF": 2, "M_J": 4},
        "estimation": {"jammer_stat_draws": 20}
    })");
}

std::string slurp(const fs::path &p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / ("cfaj_test_" + name);
    fs::remove_all(p);
    return p;
}

int count_elements(const boost::property_tree::ptree &t, const std::string &tag)
{
    int n = 0;
    for (const auto &child : t)
    {
        if (child.first == tag)
            ++n;
        n += count_elements(child.second, tag);
    }
    return n;
}

boost::property_tree::ptree parse_svg(const std::string &svg)
{
    std::istringstream is(svg);
    boost::property_tree::ptree t;
    boost::property_tree::read_xml(is, t);
    return t;
}

TrialRecord record(const std::string &scheme, double value, int trial, double jsr)
{
    TrialRecord r;
    r.sweep_axis = "M";
    r.sweep_value = value;
    r.scheme = scheme;
    r.trial = trial;
    r.seed = static_cast<std::uint64_t>(trial);
    r.jsr_db = jsr;
    r.q_watts = std::pow(10.0, jsr / 10.0);
    return r;
}
} // namespace

TEST_CASE("spec parsing rejects unknown keys and wrong schema versions")
{
    CHECK_NOTHROW(parse_experiment(tiny_spec()));
    auto bad = tiny_spec();
    bad["colour"] = "blue";
    CHECK_THROWS_AS(parse_experiment(bad), std::invalid_argument);
    bad = tiny_spec();
    bad["scenario"]["antennas"] = 4;
    CHECK_THROWS_AS(parse_experiment(bad), std::invalid_argument);
    bad = tiny_spec();
    bad["schema_version"] = 2;
    CHECK_THROWS_AS(parse_experiment(bad), std::invalid_argument);
    bad = tiny_spec();
    bad.erase("schema_version");
    CHECK_THROWS_AS(parse_experiment(bad), std::invalid_argument);
    bad = tiny_spec();
    bad["schemes"] = {"sdr"};
    CHECK_THROWS_AS(parse_experiment(bad), std::invalid_argument);
    bad = tiny_spec();
    bad["trials"] = 0;
    CHECK_THROWS_AS(parse_experiment(bad), std::invalid_argument);
    bad = tiny_spec();
    bad["sweep"]["values"] = json::array();
    CHECK_THROWS_AS(parse_experiment(bad), std::invalid_argument);
}

TEST_CASE("resolved spec re-parses to the same document")
{
    const auto s = parse_experiment(tiny_spec());
    const json j = experiment_json(s);
    CHECK(experiment_json(parse_experiment(j)) == j);
    CHECK(j.at("scenario").at("M_U") == 4);
}

TEST_CASE("preset override swaps the base scenario")
{
    json j = tiny_spec();
    j.erase("scenario");
    const auto desk = parse_experiment(j);
    const auto paper = parse_experiment(j, "paper");
    CHECK(desk.scenario.M_U == ScenarioConfig::desk().M_U);
    CHECK(paper.scenario.M_U == ScenarioConfig::paper().M_U);
    CHECK_THROWS_AS(parse_experiment(j, "huge"), std::invalid_argument);
}

TEST_CASE("sweep couplings on the antenna and jammer axes")
{
    auto s = parse_experiment(tiny_spec());
    CHECK(apply_sweep(s, 8).scenario.N_RF == 4);
    s.sweep.axis = "G";
    CHECK(apply_sweep(s, 4).scenario.M_J == 9);
    CHECK_THROWS_AS(apply_sweep(s, 5), std::invalid_argument);
    s.sweep.axis = "nmse";
    CHECK(apply_sweep(s, 0.1).estimation.nmse_target == 0.1);
}

TEST_CASE("JSR definition")
{
    CHECK(jsr_db(1.0, 1, 1.0) == 0.0);
    CHECK(jsr_db(0.5, 2, 1.0) == Approx(0.0).margin(1e-15));
    CHECK(jsr_db(10.0, 1, 0.1) == Approx(20.0));
    CHECK(std::isinf(jsr_db(0.0, 2, 1.0)));
}

TEST_CASE("sign test arithmetic")
{
    CHECK(binomial_upper_tail(20, 20) == Approx(std::pow(0.5, 20)));
    CHECK(binomial_upper_tail(3, 2) == Approx(0.5));
    CHECK(binomial_upper_tail(10, 0) == 1.0);
    std::vector<double> a(20), b(20);
    for (int i = 0; i < 20; ++i)
    {
        a[i] = i + 1.0;
        b[i] = i;
    }
    const auto t = sign_test(a, b);
    CHECK(t.wins == 20);
    CHECK(t.p_value < 0.05);
    CHECK(sign_test(b, a).p_value == 1.0);
}

TEST_CASE("moments of constant data")
{
    const auto m = moments({2.0, 2.0, 2.0});
    CHECK(m.mean == 2.0);
    CHECK(m.stddev == 0.0);
    CHECK(moments({5.0}).stddev == 0.0);
    CHECK(moments({1.0, 3.0}).stddev == Approx(std::sqrt(2.0)));
}

TEST_CASE("summary of constant results is flat with zero spread")
{
    std::vector<TrialRecord> rows;
    for (double v : {4.0, 8.0, 16.0})
        for (int t = 0; t < 5; ++t)
        {
            rows.push_back(record("ao-ajhbf", v, t, 3.0));
            rows.push_back(record("wmmse", v, t, 3.0));
        }
    const json s = summarize(rows);
    for (const auto &p : s.at("points"))
    {
        CHECK(p.at("jsr_db_std") == 0.0);
        CHECK(p.at("jsr_db_mean") == 3.0);
    }
    CHECK(s.at("trends").at("ao-ajhbf").at("verdict") == "flat");
    CHECK(s.at("trends").at("wmmse").at("verdict") == "flat");
}

TEST_CASE("one-sided paired comparison favors the dominating scheme")
{
    std::vector<TrialRecord> rows;
    for (int t = 0; t < 20; ++t)
    {
        rows.push_back(record("ao-ajhbf", 16.0, t, 10.0 + t));
        rows.push_back(record("wmmse", 16.0, t, 9.0 + t));
    }
    const json s = summarize(rows);
    bool seen = false;
    for (const auto &c : s.at("comparisons"))
        if (c.at("a") == "ao-ajhbf")
        {
            seen = true;
            CHECK(c.at("wins") == 20);
            CHECK(c.at("p_value").get<double>() < 0.05);
            CHECK(c.at("verdict") == "A>=B");
        }
        else
            CHECK(c.at("verdict") == "not significant");
    CHECK(seen);
    CHECK(s.at("trends").at("ao-ajhbf").at("verdict") == "n/a");
}

TEST_CASE("trend verdicts follow paired monotone data")
{
    std::vector<TrialRecord> rows;
    for (int p = 0; p < 3; ++p)
        for (int t = 0; t < 10; ++t)
        {
            rows.push_back(record("up", 4.0 * (p + 1), t, 1.0 * p + 0.01 * t));
            rows.push_back(record("down", 4.0 * (p + 1), t, -1.0 * p + 0.01 * t));
        }
    const json s = summarize(rows);
    CHECK(s.at("trends").at("up").at("verdict") == "increasing");
    CHECK(s.at("trends").at("down").at("verdict") == "decreasing");
}

TEST_CASE("infeasible trials count as zero in the linear mean and are dropped from the dB mean")
{
    std::vector<TrialRecord> rows = {record("ao-ajhbf", 4.0, 0, 10.0), record("ao-ajhbf", 4.0, 1, 0.0)};
    rows[1].jsr_db = -std::numeric_limits<double>::infinity();
    rows[1].q_watts = 0.0;
    const json p = summarize(rows).at("points").at(0);
    CHECK(p.at("infeasible") == 1);
    CHECK(p.at("jsr_db_mean") == 10.0);
    CHECK(p.at("jsr_db_linear_mean").get<double>() == Approx(10.0 * std::log10(5.0)));
}

TEST_CASE("results CSV round-trips")
{
    std::vector<TrialRecord> rows = {record("wmmse", 8.0, 3, 12.345678901234567)};
    std::stringstream ss;
    write_results_csv(ss, rows);
    const auto back = read_results_csv(ss);
    REQUIRE(back.size() == 1);
    CHECK(back[0].jsr_db == rows[0].jsr_db);
    CHECK(back[0].q_watts == rows[0].q_watts);
    CHECK(back[0].scheme == "wmmse");
    CHECK(back[0].trial == 3);
    std::istringstream bad("scheme,trial\n");
    CHECK_THROWS(read_results_csv(bad));
}

TEST_CASE("empty chart renders as well-formed SVG with bare axes")
{
    const auto t = parse_svg(render_svg(Chart{}));
    CHECK(count_elements(t, "svg") == 1);
    CHECK(count_elements(t, "polyline") == 0);
    CHECK(count_elements(t, "circle") == 0);
    CHECK(count_elements(t, "line") == 2);
}

TEST_CASE("two series of three points give two polylines and six markers")
{
    Chart c;
    c.title = "A & B <test>";
    for (int s = 0; s < 2; ++s)
    {
        Series ser;
        ser.name = s == 0 ? "ao-ajhbf" : "wmmse";
        for (int i = 0; i < 3; ++i)
            ser.points.push_back({4.0 * (i + 1), 10.0 * s + i, 0.5});
        c.series.push_back(ser);
    }
    const std::string svg = render_svg(c);
    const auto t = parse_svg(svg);
    CHECK(count_elements(t, "polyline") == 2);
    CHECK(count_elements(t, "circle") == 6);
    CHECK(render_svg(c) == svg);
}

TEST_CASE("a single trial of one scheme yields one row")
{
    auto j = tiny_spec();
    j["trials"] = 1;
    j["schemes"] = {"ao-ajhbf"};
    j["sweep"]["values"] = {4};
    const auto rows = run_trials(parse_experiment(j));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].seed == 7);
    CHECK_FALSE(rows[0].failed);
}

TEST_CASE("experiment outputs are deterministic across runs and thread counts")
{
    const auto spec = parse_experiment(tiny_spec());
    const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
    const auto ra = run_experiment(spec, a, 1);
    const auto rb = run_experiment(spec, b, 2);
    CHECK(ra.exit_code == 0);
    CHECK(ra.failed == 0);
    CHECK(slurp(a / "results.csv") == slurp(b / "results.csv"));
    CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
    CHECK(slurp(a / "jsr_vs_M.svg") == slurp(b / "jsr_vs_M.svg"));
    CHECK_NOTHROW(parse_svg(slurp(a / "jsr_vs_M.svg")));

    // Paired design: both schemes of a trial share the seed base_seed + trial.
    REQUIRE(ra.rows.size() == 2 * 2 * 2);
    for (std::size_t i = 0; i < ra.rows.size(); i += 2)
    {
        CHECK(ra.rows[i].seed == ra.rows[i + 1].seed);
        CHECK(ra.rows[i].seed == 7u + static_cast<unsigned>(ra.rows[i].trial));
        CHECK(ra.rows[i].scheme == "ao-ajhbf");
        CHECK(ra.rows[i + 1].scheme == "wmmse");
    }
    std::istringstream csv(slurp(a / "results.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "sweep_axis,sweep_value,scheme,trial,seed,q_watts,jsr_db,min_xi_db,runtime_s");
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("manifest records the quantization distortion factor")
{
    auto spec = parse_experiment(tiny_spec());
    CHECK(make_manifest(spec, {}).at("quantization").at("alpha").get<double>() == Approx(0.990503).margin(1e-12));
    spec.estimation.quantize = false;
    CHECK(make_manifest(spec, {}).at("quantization").at("alpha") == 1.0);
}

TEST_CASE("paired schemes see identical priors")
{
    const auto spec = parse_experiment(tiny_spec());
    const auto pc = apply_sweep(spec, 4);
    const auto a = make_trial_scene(pc, 9, true, true);
    const auto b = make_trial_scene(pc, 9, true, false);
    for (int k = 0; k < pc.scenario.K; ++k)
        CHECK(a.priors.Hbar[k] == b.priors.Hbar[k]);
    // The ideal-fronthaul variant differs only by quantization.
    CHECK(a.priors_noquant.qe_ub[0] == 0.0);
    CHECK(a.priors.qe_ub[0] > 0.0);
}
