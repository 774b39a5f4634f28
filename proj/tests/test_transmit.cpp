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
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

using namespace cfaj;
using Catch::Approx;

namespace
{
double min_of(const std::vector<double> &x) { return *std::min_element(x.begin(), x.end()); }

/// Phase-aligned relative distance min_theta ||a - e^{j theta} b|| / ||b||.
double aligned_distance(const CVec &a, const CVec &b)
{
    const cd c = b.dot(a);
    const cd rot = std::abs(c) > 0.0 ? c / std::abs(c) : cd(1.0);
    return (a - rot * b).norm() / b.norm();
}
} // namespace

TEST_CASE("a silent UE has zero SINR")
{
    Rng rng(1);
    test::Dims d;
    const auto ps = test::random_priors(rng, d);
    auto f = test::random_transmit(rng, ps);
    f[1].setZero();
    const auto xi = sinr_lb(ps, f, test::random_receive(rng, ps), uniform_jamming(d.G, d.K, 0.4));
    CHECK(xi[1] == 0.0);
    CHECK(xi[0] > 0.0);
}

TEST_CASE("single UE without jamming or errors reduces to SNR")
{
    Rng rng(2);
    test::Dims d;
    d.K = 1;
    d.G = 0;
    const auto ps = test::random_priors(rng, d, 0.2, 0.0);
    const auto f = test::random_transmit(rng, ps);
    const auto w = test::random_receive(rng, ps);
    const auto xi = sinr_lb(ps, f, w, uniform_jamming(0, 1, 0.0));
    CHECK(xi[0] == Approx(std::norm(w[0].dot(ps.Hbar[0] * f[0])) / 0.2).epsilon(1e-13));
}

TEST_CASE("SINR lower bound agrees with an independent evaluation")
{
    Rng rng(3);
    test::Dims d;
    d.M_U = 3;
    for (int t = 0; t < 20; ++t)
    {
        const auto ps = test::random_priors(rng, d);
        const auto f = test::random_transmit(rng, ps);
        const auto w = test::random_receive(rng, ps);
        const JammingPowers q = JammingPowers::Random(d.G, d.K).cwiseAbs();
        const auto a = sinr_lb(ps, f, w, q);
        const auto b = test::xi_direct(ps, f, w, q);
        for (int k = 0; k < d.K; ++k)
            REQUIRE(a[k] == Approx(b[k]).epsilon(1e-12));
    }
}

TEST_CASE("softmax surrogate values")
{
    CHECK(softmax_eta({2.5}, -4.0) == 2.5);
    CHECK(softmax_eta({1.0, 1.0, 1.0}, -4.0) == Approx(1.0).epsilon(1e-15));
    const double expect = (std::exp(-4.0) + 2.0 * std::exp(-8.0)) / (std::exp(-4.0) + std::exp(-8.0));
    CHECK(softmax_eta({1.0, 2.0}, -4.0) == Approx(expect).epsilon(1e-14));
    CHECK(softmax_eta({1.0, 2.0}, -4.0) == Approx(1.0180).margin(5e-5));
    CHECK_THROWS_AS(softmax_eta({1.0}, 0.5), std::invalid_argument);
}

TEST_CASE("softmax surrogate is sandwiched by the minimum")
{
    Rng rng(4);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    std::uniform_int_distribution<int> n(1, 8);
    for (int t = 0; t < 500; ++t)
    {
        std::vector<double> xi(static_cast<std::size_t>(n(rng)));
        for (double &x : xi)
            x = u(rng);
        const double delta = -0.5 - u(rng);
        const double eta = softmax_eta(xi, delta);
        const double lo = min_of(xi);
        REQUIRE(eta >= lo - 1e-12);
        REQUIRE(eta <= *std::max_element(xi.begin(), xi.end()) + 1e-12);
        REQUIRE(eta <= lo + std::log(static_cast<double>(xi.size())) / std::abs(delta) + 1e-12);
        REQUIRE(eta == Approx(test::eta_direct(xi, delta)).epsilon(1e-12));
    }
}

TEST_CASE("softmax surrogate survives large SINR values")
{
    const double eta = softmax_eta({1e3, 1e3 + 1.0}, -4.0);
    CHECK(std::isfinite(eta));
    CHECK(eta >= 1e3);
}

TEST_CASE("analytic gradient matches central finite differences")
{
    Rng rng(5);
    test::Dims d; // L=2, K=3, M=4, M_U=2
    double worst = 0.0;
    for (int t = 0; t < 20; ++t)
    {
        const auto ps = test::random_priors(rng, d);
        const auto f = test::random_transmit(rng, ps);
        const auto w = test::random_receive(rng, ps);
        const JammingPowers q = uniform_jamming(d.G, d.K, 0.3);
        const auto g = eta_gradient(ps, f, w, q, -4.0);
        const auto fd = test::eta_gradient_fd(ps, f, w, q, -4.0);
        for (int k = 0; k < d.K; ++k)
            for (Index i = 0; i < g[k].size(); ++i)
                for (double diff : {std::abs(g[k](i).real() - fd[k](i).real()), std::abs(g[k](i).imag() - fd[k](i).imag())})
                {
                    const double scale = std::max(std::abs(fd[k](i)), 1e-3 * fd[k].cwiseAbs().maxCoeff());
                    worst = std::max(worst, diff / scale);
                }
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("single-user gradient is the matched-filter direction")
{
    Rng rng(6);
    test::Dims d;
    d.K = 1;
    const auto ps = test::random_priors(rng, d);
    const auto f = test::random_transmit(rng, ps);
    const auto w = test::random_receive(rng, ps);
    const JammingPowers q = uniform_jamming(d.G, 1, 0.5);
    CHECK(softmax_eta_sensitivity({3.0}, -4.0)[0] == Approx(1.0));
    const SinrModel m = make_sinr_model(ps, w, q);
    const auto g = eta_gradient(m, f, -4.0);
    const CVec expect = m.g[0] * (m.g[0].dot(f[0]) / m.zeta[0]);
    CHECK((g[0] - expect).norm() < 1e-12 * expect.norm());
}

TEST_CASE("gradient step raises the minimum at a symmetric two-user point")
{
    SinrModel m;
    m.L = 1;
    m.M = 2;
    m.P_max = 10.0;
    m.g = {CVec(2), CVec(2)};
    m.g[0] << 1.0, 0.3;
    m.g[1] << 0.3, 1.0;
    m.zeta = {0.1, 0.1};
    std::vector<CVec> f = {CVec(2), CVec(2)};
    f[0] << 0.5, 0.0;
    f[1] << 0.0, 0.5;
    const auto xi = sinr_lb(m, f);
    REQUIRE(xi[0] == Approx(xi[1]));
    const auto g = eta_gradient(m, f, -4.0);
    auto fs = f;
    for (int k = 0; k < 2; ++k)
        fs[k] += 1e-4 * g[k];
    CHECK(min_of(sinr_lb(m, fs)) > min_of(xi));
}

TEST_CASE("projection onto per-AP power balls")
{
    const int L = 3, M = 2;
    std::vector<CVec> f(2, CVec::Zero(L * M));
    // AP 0 and 2 at half power, AP 1 at 4 P_max.
    f[0].segment(0, M) << 0.5, 0.0;
    f[1].segment(0, M) << 0.0, 0.5;
    f[0].segment(2, M) << 1.0, 1.0;
    f[1].segment(2, M) << 1.0, 1.0;
    f[0].segment(4, M) << cd(0.0, 0.5), 0.0;
    f[1].segment(4, M) << 0.0, 0.5;
    const auto p = project_power(f, L, M, 1.0);
    CHECK(p[0].segment(0, M) == f[0].segment(0, M));
    CHECK(p[1].segment(4, M) == f[1].segment(4, M));
    CHECK((p[0].segment(2, M) - 0.5 * f[0].segment(2, M)).norm() < 1e-15);
    CHECK(ap_power(p, 1, M) == Approx(1.0).epsilon(1e-15));

    const auto pp = project_power(p, L, M, 1.0);
    for (std::size_t k = 0; k < p.size(); ++k)
        CHECK((pp[k] - p[k]).norm() <= 1e-12 * p[k].norm());
}

TEST_CASE("MRT start is power feasible")
{
    Rng rng(7);
    const auto ps = test::random_priors(rng, test::Dims{});
    const auto f = mrt_init(ps);
    for (int l = 0; l < ps.L; ++l)
        CHECK(ap_power(f, l, ps.M) <= ps.P_max * (1.0 + 1e-12));
}

TEST_CASE("a stationary start is returned unchanged")
{
    Rng rng(8);
    const auto ps = test::random_priors(rng, test::Dims{});
    const std::vector<CVec> f0(static_cast<std::size_t>(ps.K), CVec::Zero(ps.tx_dim()));
    const auto st = pga_solve(ps, f0, test::random_receive(rng, ps), uniform_jamming(ps.G, ps.K, 0.0), PgaConfig{});
    CHECK(st.iterations == 0);
    for (const auto &fk : st.f)
        CHECK(fk.norm() == 0.0);
}

TEST_CASE("single UE and AP converge to maximum ratio transmission")
{
    Rng rng(9);
    for (int t = 0; t < 5; ++t)
    {
        test::Dims d;
        d.L = 1;
        d.K = 1;
        d.G = 0;
        d.M = 6;
        d.M_U = 3;
        const auto ps = test::random_priors(rng, d, 1.0, 0.0);
        const auto w = test::random_receive(rng, ps);
        const auto st = pga_solve(ps, mrt_init(ps), w, uniform_jamming(0, 1, 0.0), PgaConfig{});
        const CVec g = ps.Hbar[0].adjoint() * w[0];
        const CVec opt = std::sqrt(ps.P_max) * g / g.norm();
        CHECK(aligned_distance(st.f[0], opt) < 1e-3);
    }
}

TEST_CASE("PGA is monotone, feasible and close to a multi-start optimum")
{
    Rng rng(10);
    test::Dims d;
    d.L = 2;
    d.K = 2;
    d.M = 4;
    d.M_U = 2;
    for (int t = 0; t < 5; ++t)
    {
        const auto ps = test::random_priors(rng, d);
        const auto w = test::random_receive(rng, ps);
        const JammingPowers q = uniform_jamming(d.G, d.K, 0.1);
        PgaConfig cfg;
        cfg.record_trace = true;
        const auto st = pga_solve(ps, mrt_init(ps), w, q, cfg);
        for (std::size_t i = 1; i < st.eta_trace.size(); ++i)
            REQUIRE(st.eta_trace[i] >= st.eta_trace[i - 1]);
        for (int l = 0; l < ps.L; ++l)
            REQUIRE(ap_power(st.f, l, ps.M) <= ps.P_max * (1.0 + 1e-12));

        double best = min_of(st.xi);
        for (int s = 0; s < 50; ++s)
        {
            const auto r = pga_solve(ps, test::random_transmit(rng, ps), w, q, PgaConfig{});
            best = std::max(best, min_of(r.xi));
        }
        CHECK(min_of(st.xi) >= 0.98 * best);
    }
}
