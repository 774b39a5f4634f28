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

#ifndef CFAJ_LINALG_HPP
#define CFAJ_LINALG_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfaj
{

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;
using Index = Eigen::Index;
using Rng = std::mt19937_64;

inline constexpr double pi = 3.14159265358979323846;

/// Raised when a numerical invariant (positive definiteness, PSD-ness,
/// finiteness) is violated beyond round-off.
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Circularly-symmetric complex Gaussian sample with E|z|^2 = variance.
inline cd complex_gaussian(Rng &rng, double variance = 1.0)
{
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    double re = n(rng);
    double im = n(rng);
    return {re, im};
}

inline CMat complex_gaussian_matrix(Rng &rng, Index rows, Index cols, double variance = 1.0)
{
    CMat m(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r)
            m(r, c) = complex_gaussian(rng, variance);
    return m;
}

inline CVec complex_gaussian_vector(Rng &rng, Index n, double variance = 1.0)
{
    return complex_gaussian_matrix(rng, n, 1, variance);
}

/// Uniformly distributed unit-norm complex vector.
inline CVec random_unit_vector(Rng &rng, Index n)
{
    CVec v = complex_gaussian_vector(rng, n);
    return v / v.norm();
}

inline bool all_finite(const CMat &m)
{
    for (Index c = 0; c < m.cols(); ++c)
        for (Index r = 0; r < m.rows(); ++r)
            if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag()))
                return false;
    return true;
}

inline double hermitian_defect(const CMat &m)
{
    double n = m.norm();
    if (n == 0.0)
        return 0.0;
    return (m - m.adjoint()).norm() / n;
}

inline CMat hermitian_part(const CMat &m) { return 0.5 * (m + m.adjoint()); }

/// Largest eigenvalue of a Hermitian matrix.
inline double lambda_max(const CMat &m)
{
    if (m.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(es.eigenvalues().size() - 1);
}

/// Clips round-off negative eigenvalues of a Hermitian matrix at zero.
/// Eigenvalues below -tol * lambda_max mean the input was never PSD and
/// raise NumericalError.
inline CMat repair_psd(const CMat &m, double tol = 1e-10, const std::string &what = "matrix")
{
    if (m.size() == 0)
        return m;
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m));
    const RVec &ev = es.eigenvalues();
    double top = std::max(ev.maxCoeff(), 0.0);
    double bottom = ev.minCoeff();
    if (bottom >= 0.0)
        return hermitian_part(m);
    if (bottom < -tol * top || top == 0.0)
        throw NumericalError(what + " is not positive semidefinite: eigenvalue " + std::to_string(bottom) +
                             " vs lambda_max " + std::to_string(top));
    RVec clipped = ev.cwiseMax(0.0);
    return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
}

/// Solves B x = rhs for Hermitian positive definite B. On factorization
/// failure a jitter of 1e-12 * trace(B) / n is added once.
inline CVec solve_hpd(const CMat &B, const CVec &rhs)
{
    Eigen::LLT<CMat> llt(B);
    if (llt.info() == Eigen::Success)
        return llt.solve(rhs);
    const double jitter = 1e-12 * B.trace().real() / static_cast<double>(B.rows());
    CMat Bj = B;
    Bj.diagonal().array() += jitter;
    llt.compute(Bj);
    if (llt.info() != Eigen::Success)
        throw NumericalError("matrix is not positive definite even after jitter");
    return llt.solve(rhs);
}

/// Rotates the global phase so that the largest-magnitude entry is real and
/// nonnegative.
inline CVec fix_phase(const CVec &v)
{
    if (v.size() == 0)
        return v;
    Index idx = 0;
    v.cwiseAbs().maxCoeff(&idx);
    double a = std::abs(v(idx));
    if (a == 0.0)
        return v;
    return v * (std::conj(v(idx)) / a);
}

inline CVec unit_modulus(const CVec &v)
{
    CVec out(v.size());
    for (Index i = 0; i < v.size(); ++i)
        out(i) = std::polar(1.0, std::arg(v(i)));
    return out;
}

/// Column-major vectorization (stacks columns).
inline CVec vec(const CMat &m) { return Eigen::Map<const CVec>(m.data(), m.size()); }

} // namespace cfaj

#endif
