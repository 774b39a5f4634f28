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

#ifndef CFAJ_STATS_HPP
#define CFAJ_STATS_HPP

#include <algorithm>
#include <cmath>
#include <vector>

namespace cfaj
{

struct Moments
{
    int n = 0;
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation (n - 1), 0 for n < 2
    double stderr_ = 0.0;
};

inline Moments moments(const std::vector<double> &x)
{
    Moments m;
    m.n = static_cast<int>(x.size());
    if (m.n == 0)
        return m;
    double s = 0.0;
    for (double v : x)
        s += v;
    m.mean = s / m.n;
    if (m.n < 2)
        return m;
    double ss = 0.0;
    for (double v : x)
        ss += (v - m.mean) * (v - m.mean);
    m.stddev = std::sqrt(ss / (m.n - 1));
    m.stderr_ = m.stddev / std::sqrt(static_cast<double>(m.n));
    return m;
}

struct SignTest
{
    int wins = 0;   // a > b
    int losses = 0; // a < b
    int ties = 0;
    double p_value = 1.0; // one-sided, H1: a tends to exceed b
};

/// P(X >= x) for X ~ Binomial(n, 1/2).
inline double binomial_upper_tail(int n, int x)
{
    if (x <= 0)
        return 1.0;
    if (x > n)
        return 0.0;
    double p = 0.0;
    for (int i = x; i <= n; ++i)
        p += std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) - n * std::log(2.0));
    return std::min(1.0, p);
}

/// Paired one-sided sign test; ties are dropped.
inline SignTest sign_test(const std::vector<double> &a, const std::vector<double> &b)
{
    SignTest t;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
    {
        if (a[i] > b[i])
            ++t.wins;
        else if (a[i] < b[i])
            ++t.losses;
        else
            ++t.ties;
    }
    t.p_value = binomial_upper_tail(t.wins + t.losses, t.wins);
    return t;
}

} // namespace cfaj

#endif
