// SPDX-License-Identifier: Apache-2.0
//
// lsmimo - large-scale MIMO array covariance and interference filtering toolkit
// Copyright (C) 2025-2026 The lsmimo developers
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

#ifndef lsmimo_csv_H
#define lsmimo_csv_H

#include <armadillo>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "scenario.hpp"

namespace lsmimo
{

// Column-oriented result set. Metadata keys are written as leading '#' comment
// lines and must make the run reproducible (seed and every resolved parameter).
struct ResultTable
{
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data; // data[c][row]
    std::vector<std::pair<std::string, std::string>> metadata;
    double runtime_seconds = 0.0; // informational only, never serialized (keeps reruns byte-identical)

    arma::uword n_rows() const
    {
        return columns.empty() ? 0 : arma::uword(data.front().size());
    }

    void add_meta(const std::string &key, const std::string &value)
    {
        metadata.emplace_back(key, value);
    }
};

// 17 significant digits, locale independent; round-trips any finite double
inline std::string format_double(double x)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

inline std::string format_double(arma::uword x)
{
    return std::to_string(x);
}

inline void write_csv(const ResultTable &table, std::ostream &out)
{
    for (const auto &col : table.data)
        if (col.size() != table.data.front().size())
            throw std::invalid_argument("write_csv: ragged columns");
    if (table.data.size() != table.columns.size())
        throw std::invalid_argument("write_csv: column name and data counts differ");

    for (const auto &kv : table.metadata)
        out << "# " << kv.first << " = " << kv.second << "\n";

    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << "\n";

    std::size_t rows = table.data.empty() ? 0 : table.data.front().size();
    for (std::size_t i = 0; i < rows; ++i)
    {
        for (std::size_t c = 0; c < table.data.size(); ++c)
            out << (c ? "," : "") << format_double(table.data[c][i]);
        out << "\n";
    }
}

inline void write_csv(const ResultTable &table, const std::string &path)
{
    std::ofstream out(path, std::ios::binary); // binary keeps line endings fixed
    if (!out)
        throw std::runtime_error("write_csv: cannot open " + path);
    write_csv(table, out);
    if (!out.good())
        throw std::runtime_error("write_csv: write failed for " + path);
}

inline ResultTable read_csv(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("read_csv: cannot open " + path);

    ResultTable table;
    std::string line;
    bool header_done = false;
    while (std::getline(in, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#')
        {
            std::size_t eq = line.find('=');
            if (eq != std::string::npos)
            {
                auto trim = [](std::string s)
                {
                    std::size_t a = s.find_first_not_of(" \t#");
                    std::size_t b = s.find_last_not_of(" \t");
                    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
                };
                table.add_meta(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
            }
            continue;
        }

        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            fields.push_back(field);

        if (!header_done)
        {
            table.columns = fields;
            table.data.assign(fields.size(), {});
            header_done = true;
            continue;
        }
        if (fields.size() != table.columns.size())
            throw std::runtime_error("read_csv: ragged row in " + path);
        for (std::size_t c = 0; c < fields.size(); ++c)
        {
            double v = 0.0;
            auto res = std::from_chars(fields[c].data(), fields[c].data() + fields[c].size(), v);
            if (res.ec != std::errc())
                throw std::runtime_error("read_csv: bad number '" + fields[c] + "' in " + path);
            table.data[c].push_back(v);
        }
    }
    return table;
}

// Geometry inspection dump: one row per antenna (index, x, y)
inline void write_geometry_csv(const ArrayGeometry &geom, const std::string &path)
{
    ResultTable t;
    t.add_meta("kind", to_string(geom.kind));
    t.add_meta("wavelength", format_double(geom.wavelength));
    t.columns = {"index", "x", "y"};
    t.data.assign(3, {});
    for (arma::uword m = 0; m < geom.n_antennas(); ++m)
    {
        t.data[0].push_back(double(m));
        t.data[1].push_back(geom.positions(m, 0));
        t.data[2].push_back(geom.positions(m, 1));
    }
    write_csv(t, path);
}

} // namespace lsmimo

#endif
