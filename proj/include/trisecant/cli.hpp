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

// Batch front end.
//
//   trisecant_cli <command> [flags]
//
// Commands: theta, kummer, periods, abel-jacobi, equations, trisecant, scan.
// Results go to --out (or stdout); a manifest with input hashes, tolerances
// and versions goes to <out>.manifest.json (or a "manifest: {...}" line on
// the diagnostic stream). Exit codes: 0 success, 1 numerical failure, 2 bad
// input. Every failure prints "error: <Code>: <reason>" on one line.

#ifndef TRISECANT_CLI_HPP
#define TRISECANT_CLI_HPP

#include <array>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <openssl/evp.h>

#include <trisecant/curves.hpp>
#include <trisecant/error.hpp>
#include <trisecant/io.hpp>
#include <trisecant/ppav.hpp>
#include <trisecant/scan.hpp>
#include <trisecant/theta.hpp>
#include <trisecant/trisecant.hpp>

namespace trisecant::cli
{

inline constexpr const char *version = "0.1.0";

inline constexpr std::array<const char *, 7> commands = {"theta",     "kummer",    "periods", "abel-jacobi",
                                                         "equations", "trisecant", "scan"};

struct JobSpec {
    std::string command;
    std::string tau_path;
    std::string h_path;
    std::string curve_path;
    // point arguments: "re1,im1,re2,im2,..." or a path to an AbelianPoint .json
    std::string z;
    std::string x;
    std::string char_a;
    std::string char_b;
    int sheet = 1;
    double eps = 1e-12;
    double tol = 0;
    int grid = 16;
    std::string out;
    std::string format = "json";
    unsigned threads = 1;
    int refine_steps = 24;
    std::uint64_t max_evals = 4'000'000'000ULL;
};

namespace detail
{

inline bool ends_with(const std::string &s, const std::string &suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline std::vector<double> parse_list(const std::string &s, const char *flag)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception &) {
            throw error(errc::bad_flag, std::string(flag) + ": \"" + item + "\" is not a number");
        }
    }
    if (v.empty()) {
        throw error(errc::bad_flag, std::string(flag) + ": empty list");
    }
    return v;
}

inline AbelianPoint parse_point_arg(const std::string &s, const char *flag)
{
    if (ends_with(s, ".json")) {
        return io::parse_point(io::parse_json(io::read_file(s), s));
    }
    const auto v = parse_list(s, flag);
    if (v.size() % 2 != 0) {
        throw error(errc::bad_flag, std::string(flag) + ": expects interleaved re,im pairs");
    }
    AbelianPoint p{cvec(static_cast<Eigen::Index>(v.size() / 2)), false};
    for (std::size_t i = 0; i < v.size() / 2; ++i) {
        p.z[static_cast<Eigen::Index>(i)] = cplx(v[2 * i], v[2 * i + 1]);
    }
    return p;
}

inline void require(bool ok, const char *flag, const std::string &command)
{
    if (!ok) {
        throw error(errc::missing_input, command + " needs " + flag);
    }
}

inline void check_tol(double v, const char *flag)
{
    if (!(v > 0 && v < 1)) {
        throw error(errc::bad_flag, std::string(flag) + " must lie in (0, 1)");
    }
}

inline std::string sha256_hex(const std::string &data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw error(errc::io_failure, "SHA-256 failed");
    }
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) {
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return os.str();
}

inline void check_dim(const AbelianPoint &p, const PeriodMatrix &tau, const char *flag)
{
    if (p.dim() != tau.genus()) {
        throw error(errc::dimension_mismatch, std::string(flag) + " has dimension " + std::to_string(p.dim())
                                                  + ", tau has genus " + std::to_string(tau.genus()));
    }
}

} // namespace detail

/// argv excludes the program name.
inline JobSpec parse_job(const std::vector<std::string> &argv)
{
    if (argv.empty()) {
        throw error(errc::unknown_command, "no command given");
    }
    JobSpec spec;
    spec.command = argv.front();
    bool known = false;
    for (const char *c : commands) {
        known = known || spec.command == c;
    }
    if (!known) {
        throw error(errc::unknown_command, "unknown command \"" + spec.command + "\"");
    }

    CLI::App app{"trisecant " + spec.command};
    std::optional<double> tol;
    std::optional<unsigned> threads;
    std::optional<std::string> format;
    app.add_option("--tau", spec.tau_path);
    app.add_option("--H", spec.h_path);
    app.add_option("--curve", spec.curve_path);
    app.add_option("--z", spec.z);
    app.add_option("--x", spec.x);
    app.add_option("--a", spec.char_a);
    app.add_option("--b", spec.char_b);
    app.add_option("--sheet", spec.sheet);
    app.add_option("--eps", spec.eps);
    app.add_option("--tol", tol);
    app.add_option("--grid", spec.grid);
    app.add_option("--out", spec.out);
    app.add_option("--format", format);
    app.add_option("--threads", threads);
    app.add_option("--refine-steps", spec.refine_steps);
    app.add_option("--max-evals", spec.max_evals);

    std::vector<std::string> rest(argv.begin() + 1, argv.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::ParseError &e) {
        throw error(errc::bad_flag, e.what());
    }

    const std::string &cmd = spec.command;
    auto has = [](const std::string &s) { return !s.empty(); };
    if (cmd == "theta" || cmd == "kummer") {
        detail::require(has(spec.tau_path), "--tau", cmd);
        detail::require(has(spec.z), "--z", cmd);
    } else if (cmd == "periods") {
        detail::require(has(spec.curve_path), "--curve", cmd);
    } else if (cmd == "abel-jacobi") {
        detail::require(has(spec.curve_path), "--curve", cmd);
        detail::require(has(spec.x), "--x", cmd);
    } else if (cmd == "equations") {
        detail::require(has(spec.tau_path), "--tau", cmd);
        detail::require(has(spec.h_path), "--H", cmd);
        detail::require(has(spec.z), "--z", cmd);
    } else if (cmd == "trisecant") {
        detail::require(has(spec.tau_path), "--tau", cmd);
        detail::require(has(spec.h_path), "--H", cmd);
        detail::require(has(spec.x), "--x", cmd);
    } else {
        detail::require(has(spec.tau_path), "--tau", cmd);
        detail::require(has(spec.h_path), "--H", cmd);
    }

    if (cmd == "scan") {
        spec.tol = tol.value_or(1e-4);
        spec.eps = app.count("--eps") ? spec.eps : 1e-10;
    } else if (cmd == "periods" || cmd == "abel-jacobi") {
        spec.tol = tol.value_or(1e-12);
    } else {
        spec.tol = tol.value_or(1e-6);
    }
    detail::check_tol(spec.tol, "--tol");
    detail::check_tol(spec.eps, "--eps");

    if (format) {
        spec.format = *format;
    } else if (cmd == "scan") {
        spec.format = detail::ends_with(spec.out, ".json") ? "json" : "csv";
    }
    if (spec.format != "json" && spec.format != "csv") {
        throw error(errc::bad_flag, "--format must be json or csv");
    }
    if (spec.format == "csv" && cmd != "scan") {
        throw error(errc::bad_flag, "--format csv is only available for scan");
    }
    if (spec.sheet != 1 && spec.sheet != -1) {
        throw error(errc::bad_flag, "--sheet must be 1 or -1");
    }
    if (spec.grid < 4) {
        throw error(errc::bad_flag, "--grid must be at least 4");
    }
    if (spec.refine_steps < 0) {
        throw error(errc::bad_flag, "--refine-steps must be non-negative");
    }
    if (threads) {
        spec.threads = *threads;
    } else if (const char *env = std::getenv("TRISECANT_THREADS")) {
        try {
            spec.threads = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception &) {
            throw error(errc::bad_flag, "TRISECANT_THREADS is not a number");
        }
    }
    if (spec.threads == 0) {
        throw error(errc::bad_flag, "--threads must be positive");
    }
    return spec;
}

namespace detail
{

struct job_output {
    std::string body;
    io::json extra = io::json::object();
};

inline PeriodMatrix load_tau(const JobSpec &s)
{
    return io::parse_period_matrix(io::parse_json(io::read_file(s.tau_path), s.tau_path));
}

inline PointConfiguration load_config(const JobSpec &s, const PeriodMatrix &tau)
{
    return io::parse_configuration(io::parse_json(io::read_file(s.h_path), s.h_path), tau);
}

inline HyperellipticCurve load_curve(const JobSpec &s)
{
    return io::parse_curve(io::parse_json(io::read_file(s.curve_path), s.curve_path));
}

inline job_output execute(const JobSpec &s)
{
    job_output r;
    const std::string &cmd = s.command;
    if (cmd == "theta") {
        const auto tau = load_tau(s);
        const auto z = parse_point_arg(s.z, "--z");
        check_dim(z, tau, "--z");
        ThetaCharacteristic ch = ThetaCharacteristic::zero(tau.genus());
        if (!s.char_a.empty()) {
            const auto a = parse_list(s.char_a, "--a");
            ch.a = Eigen::Map<const rvec>(a.data(), static_cast<Eigen::Index>(a.size()));
        }
        if (!s.char_b.empty()) {
            const auto b = parse_list(s.char_b, "--b");
            ch.b = Eigen::Map<const rvec>(b.data(), static_cast<Eigen::Index>(b.size()));
        }
        EvalParams params;
        params.eps = s.eps;
        const cplx v = riemann_theta(z, tau, ch, params);
        io::json j;
        j["value_re"] = v.real();
        j["value_im"] = v.imag();
        j["eps"] = s.eps;
        io::json cj;
        cj["a"] = io::detail::array(ch.a);
        cj["b"] = io::detail::array(ch.b);
        j["characteristic"] = cj;
        r.body = io::dump(j);
    } else if (cmd == "kummer") {
        const auto tau = load_tau(s);
        const auto z = parse_point_arg(s.z, "--z");
        check_dim(z, tau, "--z");
        EvalParams params;
        params.eps = s.eps;
        const cvec v = second_order_basis(z, tau, params);
        io::json j;
        j["coords_re"] = io::detail::array(v.real());
        j["coords_im"] = io::detail::array(v.imag());
        j["eps"] = s.eps;
        r.body = io::dump(j);
    } else if (cmd == "periods") {
        const auto curve = load_curve(s);
        const auto p = period_matrix(curve, s.tol);
        r.body = io::dump(io::to_json(p.tau));
        r.extra["asymmetry"] = p.asymmetry;
        r.extra["est_error"] = p.est_error;
        r.extra["quadrature_nodes"] = p.nodes;
    } else if (cmd == "abel-jacobi") {
        const auto curve = load_curve(s);
        const auto xv = parse_list(s.x, "--x");
        if (xv.size() != 2) {
            throw error(errc::bad_flag, "--x expects re,im of one complex number");
        }
        const cplx x(xv[0], xv[1]);
        const auto periods = period_matrix(curve, s.tol);
        const bool at_branch = curve.is_branch_point(x, 1e-10 * curve.scale());
        const auto aj = abel_jacobi(curve, periods, CurvePoint{x, s.sheet, at_branch}, s.tol);
        io::json j = io::to_json(aj);
        j["tau"] = io::to_json(periods.tau);
        r.body = io::dump(j);
    } else if (cmd == "equations") {
        const auto tau = load_tau(s);
        const auto cfg = load_config(s, tau);
        const auto z = parse_point_arg(s.z, "--z");
        check_dim(z, tau, "--z");
        const auto sys = minor_system(tau.genus(), static_cast<int>(cfg.size()));
        const auto rep = evaluate_equations(build_theta_matrix(tau, cfg, z, s.eps), sys);
        io::json j = io::to_json(rep, sys);
        io::json lines = io::json::array();
        std::istringstream ls(sys.listing());
        for (std::string line; std::getline(ls, line);) {
            lines.push_back(line);
        }
        j["equations"] = lines;
        r.body = io::dump(j);
    } else if (cmd == "trisecant") {
        const auto tau = load_tau(s);
        const auto cfg = load_config(s, tau);
        const auto x = parse_point_arg(s.x, "--x");
        check_dim(x, tau, "--x");
        const auto m = trisecant_membership(tau, cfg, x, s.tol, s.eps);
        io::json j;
        j["member"] = m.member;
        j["witness"] = m.witness;
        j["minor_residual"] = m.minor_residual;
        j["routes_agree"] = m.routes_agree;
        r.body = io::dump(j);
    } else {
        const auto tau = load_tau(s);
        const auto cfg = load_config(s, tau);
        ScanOptions opt;
        opt.grid_resolution = s.grid;
        opt.rel_tol = s.tol;
        opt.eps = s.eps;
        opt.threads = s.threads;
        opt.max_evaluations = s.max_evals;
        opt.refine_steps = s.refine_steps;
        const auto rep = krichever_scan(tau, cfg, opt);
        r.body = s.format == "csv" ? io::to_csv(rep) : io::dump(io::to_json(rep));
        r.extra["hits"] = rep.hits.size();
        r.extra["evaluations"] = rep.evaluations;
        r.extra["wall_seconds"] = rep.wall_seconds;
    }
    return r;
}

inline io::json manifest(const JobSpec &s, const io::json &extra)
{
    io::json m;
    m["command"] = s.command;
    m["version"] = version;
    m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "."
                         + std::to_string(EIGEN_MINOR_VERSION);
    io::json inputs = io::json::array();
    auto add_input = [&](const char *flag, const std::string &value, bool is_file) {
        if (value.empty()) {
            return;
        }
        io::json in;
        in["flag"] = flag;
        in["value"] = value;
        in["sha256"] = sha256_hex(is_file ? io::read_file(value) : value);
        inputs.push_back(in);
    };
    add_input("--tau", s.tau_path, true);
    add_input("--H", s.h_path, true);
    add_input("--curve", s.curve_path, true);
    add_input("--z", s.z, ends_with(s.z, ".json"));
    add_input("--x", s.x, ends_with(s.x, ".json"));
    add_input("--a", s.char_a, false);
    add_input("--b", s.char_b, false);
    m["inputs"] = inputs;
    io::json tol;
    tol["eps"] = s.eps;
    tol["tol"] = s.tol;
    if (s.command == "scan") {
        tol["grid"] = s.grid;
        tol["refine_steps"] = s.refine_steps;
        tol["max_evals"] = s.max_evals;
    }
    m["tolerances"] = tol;
    m["threads"] = s.threads;
    m["format"] = s.format;
    m["output"] = s.out.empty() ? "stdout" : s.out;
    for (auto it = extra.begin(); it != extra.end(); ++it) {
        m[it.key()] = it.value();
    }
    return m;
}

inline int fail(std::ostream &diag, errc code, const std::string &msg)
{
    std::string line = msg;
    for (char &c : line) {
        if (c == '\n' || c == '\r') {
            c = ' ';
        }
    }
    diag << "error: " << errc_name(code) << ": " << line << '\n';
    return is_numerical(code) ? 1 : 2;
}

} // namespace detail

/// Runs the job; returns the exit code.
inline int run_job(const JobSpec &spec, std::ostream &out, std::ostream &diag)
{
    try {
        const auto r = detail::execute(spec);
        const std::string m = io::dump(detail::manifest(spec, r.extra));
        if (spec.out.empty()) {
            out << r.body;
            diag << "manifest: " << m;
        } else {
            io::write_file(spec.out, r.body);
            io::write_file(spec.out + ".manifest.json", m);
        }
        return 0;
    } catch (const error &e) {
        return detail::fail(diag, e.code(), e.what());
    } catch (const std::bad_alloc &) {
        return detail::fail(diag, errc::budget_exceeded, "out of memory");
    }
}

/// parse_job + run_job with usage errors mapped to exit code 2.
inline int main(const std::vector<std::string> &argv, std::ostream &out, std::ostream &diag)
{
    JobSpec spec;
    try {
        spec = parse_job(argv);
    } catch (const error &e) {
        return detail::fail(diag, e.code(), e.what());
    }
    return run_job(spec, out, diag);
}

} // namespace trisecant::cli

#endif
