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

// Grid scan of the fundamental domain for points x with K(x + c_1),
// K(x + c_2), K(x + c_3) collinear.
//
// The grid is regular in the real chart, x_i, y_i in {-1/2 + k/N}. Grid
// points that are discrete local minima of the residual (over the 4g axis
// neighbours) and fall below `refine_below` are polished by a compass
// search whose step halves `refine_steps` times. Every hit is tagged with
// two certificates:
//   two_torsion  2x + c_1 + c_2 + c_3 is a 2-torsion point;
//   degenerate   2x + c_i + c_j lies in the lattice for some i < j, so two of
//                the Kummer points coincide and collinearity is automatic.

#ifndef TRISECANT_SCAN_HPP
#define TRISECANT_SCAN_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include <trisecant/error.hpp>
#include <trisecant/ppav.hpp>
#include <trisecant/theta.hpp>
#include <trisecant/trisecant.hpp>

namespace trisecant
{

struct ScanOptions {
    int grid_resolution = 16;
    double rel_tol = 1e-4;
    double eps = 1e-10;
    unsigned threads = 1;
    // cap on Kummer evaluations (each one lattice sum for all 2^g coordinates)
    std::uint64_t max_evaluations = 4'000'000'000ULL;
    int refine_steps = 24;
    double refine_below = 0.05;
    double torsion_tol = 1e-6;
};

struct ScanHit {
    AbelianPoint x;
    Chart chart;
    double residual = 0;
    bool two_torsion = false;
    bool degenerate = false;
    bool refined = false;
};

struct ScanReport {
    int grid_resolution = 0;
    double tolerance = 0;
    PointConfiguration config;
    std::vector<ScanHit> hits;
    double min_residual = std::numeric_limits<double>::infinity();
    // g = 1: every 2 x 3 matrix has rank <= 2, all grid points are hits
    bool vacuous = false;
    std::uint64_t evaluations = 0;
    std::size_t candidates = 0;
    double wall_seconds = 0;
};

namespace detail
{

class scan_residual
{
public:
    scan_residual(const PeriodMatrix &tau, const PointConfiguration &cfg, double eps) : m_kummer(tau, eps), m_cfg(cfg) {}

    double operator()(const rvec &x, const rvec &y) const
    {
        const cvec z = from_chart(x, y, m_kummer.tau());
        std::vector<KummerPoint> pts;
        pts.reserve(3);
        for (const auto &c : m_cfg.points) {
            pts.push_back(KummerPoint{m_kummer(z + c.z)});
        }
        return third_singular_ratio(unit_columns(pts));
    }

private:
    KummerMap m_kummer;
    const PointConfiguration &m_cfg;
};

// Runs f(i) for i in [0, count) on `threads` workers; the first exception
// is rethrown.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F &&f)
{
    threads = std::max(1u, threads);
    if (threads == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) {
            f(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) {
                    err = std::current_exception();
                }
                next = count;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto &t : pool) {
        t.join();
    }
    if (err) {
        std::rethrow_exception(err);
    }
}

inline double wrap_half(double v)
{
    return v - std::floor(v + 0.5);
}

} // namespace detail

inline ScanReport krichever_scan(const PeriodMatrix &tau, const PointConfiguration &config, const ScanOptions &opt)
{
    const auto t0 = std::chrono::steady_clock::now();
    if (config.size() != 3) {
        throw error(errc::config_invalid, "the scan needs |H| = 3");
    }
    if (opt.grid_resolution < 4) {
        throw error(errc::out_of_range, "grid resolution must be at least 4");
    }
    if (!(opt.rel_tol > 0 && opt.rel_tol < 1)) {
        throw error(errc::invalid_eps, "rel_tol must lie in (0, 1)");
    }
    const int g = tau.genus();
    const int dims = 2 * g;
    const auto res = static_cast<std::size_t>(opt.grid_resolution);
    double total = 1;
    for (int d = 0; d < dims; ++d) {
        total *= static_cast<double>(res);
    }
    if (total * 3 > static_cast<double>(opt.max_evaluations) || total > 1e10) {
        throw error(errc::budget_exceeded, "grid needs more Kummer evaluations than the budget allows");
    }
    const auto count = static_cast<std::size_t>(total);

    ScanReport rep;
    rep.grid_resolution = opt.grid_resolution;
    rep.tolerance = opt.rel_tol;
    rep.config = config;
    rep.vacuous = basis_size(g) < 3;

    const detail::scan_residual residual(tau, config, opt.eps);
    const double h = 1.0 / static_cast<double>(res);
    // index -> chart; coordinate order (x_1, y_1, ..., x_g, y_g), last fastest
    auto coords = [&](std::size_t idx) {
        std::vector<std::size_t> k(static_cast<std::size_t>(dims));
        for (int d = dims - 1; d >= 0; --d) {
            k[static_cast<std::size_t>(d)] = idx % res;
            idx /= res;
        }
        return k;
    };
    auto chart_of = [&](const std::vector<std::size_t> &k) {
        Chart c{rvec(g), rvec(g)};
        for (int i = 0; i < g; ++i) {
            c.x[i] = -0.5 + h * static_cast<double>(k[static_cast<std::size_t>(2 * i)]);
            c.y[i] = -0.5 + h * static_cast<double>(k[static_cast<std::size_t>(2 * i + 1)]);
        }
        return c;
    };

    std::vector<double> values(count);
    detail::parallel_for(count, opt.threads, [&](std::size_t idx) {
        const Chart c = chart_of(coords(idx));
        values[idx] = residual(c.x, c.y);
    });
    std::uint64_t evals = 3 * static_cast<std::uint64_t>(count);

    const cvec csum = config.sum();
    auto make_hit = [&](const Chart &c, double r, bool refined) {
        ScanHit hit;
        hit.chart = c;
        hit.x = AbelianPoint{from_chart(c.x, c.y, tau), true};
        hit.residual = r;
        hit.refined = refined;
        hit.two_torsion = is_two_torsion(AbelianPoint{2.0 * hit.x.z + csum, false}, tau, opt.torsion_tol);
        for (std::size_t i = 0; i < 3 && !hit.degenerate; ++i) {
            for (std::size_t j = i + 1; j < 3; ++j) {
                const cvec s = 2.0 * hit.x.z + config.points[i].z + config.points[j].z;
                if (torus_distance(s, cvec::Zero(g), tau) <= opt.torsion_tol) {
                    hit.degenerate = true;
                }
            }
        }
        return hit;
    };

    for (double v : values) {
        rep.min_residual = std::min(rep.min_residual, v);
    }

    if (rep.vacuous) {
        for (std::size_t idx = 0; idx < count; ++idx) {
            rep.hits.push_back(make_hit(chart_of(coords(idx)), values[idx], false));
        }
        rep.evaluations = evals;
        rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    }

    // Discrete local minima below the refinement threshold.
    std::vector<std::size_t> cands;
    for (std::size_t idx = 0; idx < count; ++idx) {
        const double v = values[idx];
        if (!(v <= opt.refine_below)) {
            continue;
        }
        const auto k = coords(idx);
        bool is_min = true;
        std::size_t stride = 1;
        for (int d = dims - 1; d >= 0 && is_min; --d) {
            const std::size_t kd = k[static_cast<std::size_t>(d)];
            const std::size_t up = idx - kd * stride + ((kd + 1) % res) * stride;
            const std::size_t dn = idx - kd * stride + ((kd + res - 1) % res) * stride;
            if (values[up] < v || values[dn] < v) {
                is_min = false;
            }
            stride *= res;
        }
        if (is_min) {
            cands.push_back(idx);
        }
    }
    rep.candidates = cands.size();

    struct refined_point {
        Chart c;
        double r;
        std::uint64_t evals;
    };
    std::vector<refined_point> refined(cands.size());
    if (static_cast<double>(evals) + 3.0 * static_cast<double>(cands.size()) * (opt.refine_steps + 1) * 4 * dims
            * 8 > static_cast<double>(opt.max_evaluations)) {
        throw error(errc::budget_exceeded, "refinement would exceed the evaluation budget");
    }
    detail::parallel_for(cands.size(), opt.threads, [&](std::size_t ci) {
        Chart c = chart_of(coords(cands[ci]));
        double best = values[cands[ci]];
        double step = h;
        std::uint64_t used = 0;
        for (int level = 0; level <= opt.refine_steps; ++level) {
            for (int it = 0; it < 8; ++it) {
                Chart trial_best = c;
                double trial_r = best;
                for (int d = 0; d < dims; ++d) {
                    for (double sgn : {1.0, -1.0}) {
                        Chart t = c;
                        double &coord = (d % 2 == 0) ? t.x[d / 2] : t.y[d / 2];
                        coord = detail::wrap_half(coord + sgn * step);
                        const double r = residual(t.x, t.y);
                        used += 3;
                        if (r < trial_r) {
                            trial_r = r;
                            trial_best = t;
                        }
                    }
                }
                if (!(trial_r < best)) {
                    break;
                }
                best = trial_r;
                c = trial_best;
            }
            step *= 0.5;
        }
        refined[ci] = refined_point{c, best, used};
    });

    for (const auto &rp : refined) {
        evals += rp.evals;
    }
    rep.evaluations = evals;

    auto duplicate = [&](const Chart &c) {
        const cvec z = from_chart(c.x, c.y, tau);
        return std::any_of(rep.hits.begin(), rep.hits.end(),
                           [&](const ScanHit &hit) { return torus_distance(hit.x.z, z, tau) <= 1e-6; });
    };
    std::size_t ci = 0;
    for (std::size_t idx = 0; idx < count; ++idx) {
        const bool is_cand = ci < cands.size() && cands[ci] == idx;
        if (is_cand) {
            const auto &rp = refined[ci++];
            rep.min_residual = std::min(rep.min_residual, rp.r);
            if (rp.r <= opt.rel_tol && !duplicate(rp.c)) {
                rep.hits.push_back(make_hit(rp.c, rp.r, true));
            }
        } else if (values[idx] <= opt.rel_tol) {
            const Chart c = chart_of(coords(idx));
            if (!duplicate(c)) {
                rep.hits.push_back(make_hit(c, values[idx], false));
            }
        }
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace trisecant

#endif
