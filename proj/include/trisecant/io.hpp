// Copyright (c) 2026 The trisecant authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0.txt
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// File formats.
//
//   PeriodMatrix   {"g": int, "tau_re": [[...]], "tau_im": [[...]]}
//   AbelianPoint   {"re": [...], "im": [...]}
//   Curve          {"branch_points_re": [...], "branch_points_im": [...], "basepoint_index": int}
//   H              {"points": [AbelianPoint, ...], "xi": AbelianPoint (optional)}
//
// Emitted JSON keeps insertion order and prints floats with 17 significant
// digits, so every value survives a round trip exactly.

#ifndef TRISECANT_IO_HPP
#define TRISECANT_IO_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <trisecant/curves.hpp>
#include <trisecant/error.hpp>
#include <trisecant/ppav.hpp>
#include <trisecant/scan.hpp>
#include <trisecant/trisecant.hpp>

namespace trisecant::io
{

using json = nlohmann::ordered_json;

inline std::string format_double(double v)
{
    if (!std::isfinite(v)) {
        throw error(errc::non_finite, "cannot serialize a non-finite number");
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    // keep a float marker so "-0" and integral values re-parse as floats
    if (s.find_first_of(".e") == std::string::npos) {
        s += ".0";
    }
    return s;
}

namespace detail
{

inline void dump(const json &j, std::string &out)
{
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ',';
                }
                first = false;
                out += json(it.key()).dump();
                out += ':';
                dump(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) {
                    out += ',';
                }
                dump(j[i], out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float:
            out += format_double(j.get<double>());
            break;
        default:
            out += j.dump();
    }
}

} // namespace detail

inline std::string dump(const json &j)
{
    std::string out;
    detail::dump(j, out);
    out += '\n';
    return out;
}

inline std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw error(errc::io_failure, "cannot read " + path);
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << content) || !out.flush()) {
        throw error(errc::io_failure, "cannot write " + path);
    }
}

inline json parse_json(const std::string &text, const std::string &what)
{
    try {
        return json::parse(text);
    } catch (const json::exception &e) {
        throw error(errc::bad_flag, what + ": malformed JSON (" + e.what() + ")");
    }
}

namespace detail
{

inline const json &field(const json &j, const char *key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw error(errc::missing_input, std::string("missing field \"") + key + "\"");
    }
    return j.at(key);
}

inline std::vector<double> numbers(const json &j, const char *what)
{
    if (!j.is_array()) {
        throw error(errc::bad_flag, std::string(what) + " must be an array of numbers");
    }
    std::vector<double> v;
    for (const auto &x : j) {
        if (!x.is_number()) {
            throw error(errc::bad_flag, std::string(what) + " must be an array of numbers");
        }
        v.push_back(x.get<double>());
    }
    return v;
}

inline json array(const rvec &v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(v[i]);
    }
    return a;
}

} // namespace detail

inline PeriodMatrix parse_period_matrix(const json &j)
{
    const json &gj = detail::field(j, "g");
    if (!gj.is_number_integer() || gj.get<long long>() < 1) {
        throw error(errc::bad_flag, "\"g\" must be a positive integer");
    }
    const auto g = gj.get<Eigen::Index>();
    const json &re = detail::field(j, "tau_re");
    const json &im = detail::field(j, "tau_im");
    if (!re.is_array() || !im.is_array() || static_cast<Eigen::Index>(re.size()) != g
        || static_cast<Eigen::Index>(im.size()) != g) {
        throw error(errc::shape_mismatch, "tau_re/tau_im must be g x g");
    }
    cmat tau(g, g);
    for (Eigen::Index r = 0; r < g; ++r) {
        const auto row_re = detail::numbers(re[static_cast<std::size_t>(r)], "tau_re row");
        const auto row_im = detail::numbers(im[static_cast<std::size_t>(r)], "tau_im row");
        if (static_cast<Eigen::Index>(row_re.size()) != g || static_cast<Eigen::Index>(row_im.size()) != g) {
            throw error(errc::shape_mismatch, "tau_re/tau_im must be g x g");
        }
        for (Eigen::Index c = 0; c < g; ++c) {
            tau(r, c) = cplx(row_re[static_cast<std::size_t>(c)], row_im[static_cast<std::size_t>(c)]);
        }
    }
    return validate_period_matrix(tau);
}

inline json to_json(const PeriodMatrix &tau)
{
    json j;
    j["g"] = tau.genus();
    json re = json::array(), im = json::array();
    for (int r = 0; r < tau.genus(); ++r) {
        re.push_back(detail::array(tau.tau().row(r).real().transpose()));
        im.push_back(detail::array(tau.tau().row(r).imag().transpose()));
    }
    j["tau_re"] = re;
    j["tau_im"] = im;
    return j;
}

inline AbelianPoint parse_point(const json &j)
{
    const auto re = detail::numbers(detail::field(j, "re"), "\"re\"");
    const auto im = detail::numbers(detail::field(j, "im"), "\"im\"");
    if (re.size() != im.size() || re.empty()) {
        throw error(errc::shape_mismatch, "point \"re\" and \"im\" must have equal, non-zero length");
    }
    AbelianPoint p{cvec(static_cast<Eigen::Index>(re.size())), false};
    for (std::size_t i = 0; i < re.size(); ++i) {
        p.z[static_cast<Eigen::Index>(i)] = cplx(re[i], im[i]);
    }
    return p;
}

inline json to_json(const AbelianPoint &p)
{
    json j;
    j["re"] = detail::array(p.z.real());
    j["im"] = detail::array(p.z.imag());
    return j;
}

inline HyperellipticCurve parse_curve(const json &j)
{
    const auto re = detail::numbers(detail::field(j, "branch_points_re"), "branch_points_re");
    const auto im = detail::numbers(detail::field(j, "branch_points_im"), "branch_points_im");
    if (re.size() != im.size()) {
        throw error(errc::shape_mismatch, "branch_points_re and branch_points_im differ in length");
    }
    const json &bj = detail::field(j, "basepoint_index");
    if (!bj.is_number_integer() || bj.get<long long>() < 0) {
        throw error(errc::bad_flag, "basepoint_index must be a non-negative integer");
    }
    std::vector<cplx> pts;
    for (std::size_t i = 0; i < re.size(); ++i) {
        pts.emplace_back(re[i], im[i]);
    }
    return curve_from_branch_points(std::move(pts), bj.get<std::size_t>());
}

inline json to_json(const HyperellipticCurve &c)
{
    json j;
    json re = json::array(), im = json::array();
    for (auto e : c.branch_points()) {
        re.push_back(e.real());
        im.push_back(e.imag());
    }
    j["branch_points_re"] = re;
    j["branch_points_im"] = im;
    j["basepoint_index"] = c.basepoint_index();
    return j;
}

inline PointConfiguration parse_configuration(const json &j, const PeriodMatrix &tau)
{
    const json &pj = detail::field(j, "points");
    if (!pj.is_array()) {
        throw error(errc::bad_flag, "\"points\" must be an array");
    }
    std::vector<AbelianPoint> pts;
    for (const auto &p : pj) {
        pts.push_back(parse_point(p));
    }
    if (j.contains("xi")) {
        return make_configuration(tau, std::move(pts), parse_point(j.at("xi")));
    }
    return make_configuration(tau, std::move(pts));
}

inline json to_json(const PointConfiguration &cfg)
{
    json j;
    json pts = json::array();
    for (const auto &p : cfg.points) {
        pts.push_back(to_json(p));
    }
    j["points"] = pts;
    j["xi"] = to_json(cfg.xi);
    return j;
}

inline json to_json(const AbelJacobiResult &r)
{
    json j;
    j["image"] = to_json(r.image);
    j["est_error"] = r.est_error;
    j["path"] = r.path_spec;
    return j;
}

inline json to_json(const EquationReport &rep, const MinorSystem &sys)
{
    json j;
    j["g"] = sys.g;
    j["k"] = sys.k;
    json minors = json::array();
    for (std::size_t i = 0; i < rep.minors.size(); ++i) {
        json m;
        m["rows"] = sys.row_subsets[i];
        m["value_re"] = rep.minors[i].real();
        m["value_im"] = rep.minors[i].imag();
        m["normalized"] = rep.normalized[i];
        minors.push_back(m);
    }
    j["minors"] = minors;
    j["max_normalized_residual"] = rep.max_normalized;
    return j;
}

inline json to_json(const ScanReport &rep)
{
    json j;
    j["grid_resolution"] = rep.grid_resolution;
    j["tolerance"] = rep.tolerance;
    j["vacuous"] = rep.vacuous;
    j["min_residual"] = rep.min_residual;
    j["candidates"] = rep.candidates;
    j["evaluations"] = rep.evaluations;
    j["config"] = to_json(rep.config);
    json hits = json::array();
    for (const auto &h : rep.hits) {
        json hj;
        hj["x"] = to_json(h.x);
        json chart = json::array();
        for (Eigen::Index i = 0; i < h.chart.x.size(); ++i) {
            chart.push_back(h.chart.x[i]);
            chart.push_back(h.chart.y[i]);
        }
        hj["chart"] = chart;
        hj["residual"] = h.residual;
        hj["two_torsion"] = h.two_torsion;
        hj["degenerate"] = h.degenerate;
        hj["refined"] = h.refined;
        hits.push_back(hj);
    }
    j["hits"] = hits;
    return j;
}

inline std::string csv_header(int g)
{
    std::string h;
    for (int i = 1; i <= g; ++i) {
        h += "x" + std::to_string(i) + ",y" + std::to_string(i) + ",";
    }
    return h + "residual,two_torsion\n";
}

/// Columns: chart coordinates x1,y1,...,xg,yg, residual, two_torsion (0/1).
inline std::string to_csv(const ScanReport &rep)
{
    const int g = rep.config.xi.dim();
    std::string out = csv_header(g);
    for (const auto &h : rep.hits) {
        for (int i = 0; i < g; ++i) {
            out += format_double(h.chart.x[i]) + "," + format_double(h.chart.y[i]) + ",";
        }
        out += format_double(h.residual) + "," + (h.two_torsion ? "1" : "0") + "\n";
    }
    return out;
}

} // namespace trisecant::io

#endif
