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

#ifndef CFAJ_MATRIX_IO_HPP
#define CFAJ_MATRIX_IO_HPP

// Plain-text complex matrix blocks used by the channel dump and the SDR
// export:
//
//   <label> <rows> <cols>
//   re im re im ...        (one line per row, row-major)
//
// Values are written in shortest round-trip form, so parsing a block back
// reproduces it bit-exactly.

#include "linalg.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

namespace cfaj
{

inline std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string &s)
{
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    double x = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::runtime_error("parse_double: malformed number '" + s + "'");
    return x;
}

inline void write_matrix_block(std::ostream &os, const std::string &label, const CMat &m)
{
    os << label << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Index r = 0; r < m.rows(); ++r)
    {
        for (Index c = 0; c < m.cols(); ++c)
        {
            if (c > 0)
                os << ' ';
            os << format_double(m(r, c).real()) << ' ' << format_double(m(r, c).imag());
        }
        os << '\n';
    }
}

struct MatrixBlock
{
    std::string label;
    CMat matrix;
};

/// Reads the next block. Labels are single whitespace-free tokens.
inline MatrixBlock read_matrix_block(std::istream &is)
{
    MatrixBlock b;
    Index rows = 0;
    Index cols = 0;
    if (!(is >> b.label >> rows >> cols))
        throw std::runtime_error("read_matrix_block: missing block header");
    if (rows < 0 || cols < 0)
        throw std::runtime_error("read_matrix_block: negative dimensions");
    b.matrix.resize(rows, cols);
    std::string re;
    std::string im;
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c)
        {
            if (!(is >> re >> im))
                throw std::runtime_error("read_matrix_block: truncated block '" + b.label + "'");
            b.matrix(r, c) = cd(parse_double(re), parse_double(im));
        }
    return b;
}

} // namespace cfaj

#endif
