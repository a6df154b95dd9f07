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

#ifndef TRISECANT_QUADRATURE_HPP
#define TRISECANT_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

namespace trisecant::quadrature
{

struct rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// N-point Gauss-Chebyshev rule for int_{-1}^{1} f(t) / sqrt(1 - t^2) dt.
inline rule gauss_chebyshev(std::size_t n)
{
    rule r;
    r.nodes.resize(n);
    r.weights.assign(n, std::numbers::pi / static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        r.nodes[k] = std::cos((2.0 * static_cast<double>(k) + 1.0) * std::numbers::pi / (2.0 * static_cast<double>(n)));
    }
    return r;
}

namespace detail
{

// (P_n(x), P_n'(x)) by the three-term recurrence; n >= 1, |x| < 1.
inline std::pair<double, double> legendre(std::size_t n, double x)
{
    double p0 = 1, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
        const auto kd = static_cast<double>(k);
        const double p2 = ((2 * kd - 1) * x * p1 - (kd - 1) * p0) / kd;
        p0 = p1;
        p1 = p2;
    }
    return {p1, static_cast<double>(n) * (x * p1 - p0) / (x * x - 1)};
}

} // namespace detail

/// N-point Gauss-Legendre rule on [0, 1], nodes ascending (N >= 1).
inline rule gauss_legendre01(std::size_t n)
{
    rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const auto nd = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = detail::legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const double dp = detail::legendre(n, x).second;
        const double w = 2 / ((1 - x * x) * dp * dp);
        r.nodes[n - 1 - i] = 0.5 * (1 + x);
        r.weights[n - 1 - i] = 0.5 * w;
        r.nodes[i] = 0.5 * (1 - x);
        r.weights[i] = 0.5 * w;
    }
    return r;
}

} // namespace trisecant::quadrature

#endif
