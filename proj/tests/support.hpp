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

// Shared fixtures and independent oracles for the test suites.

#ifndef TRISECANT_TESTS_SUPPORT_HPP
#define TRISECANT_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <trisecant/curves.hpp>
#include <trisecant/ppav.hpp>
#include <trisecant/theta.hpp>
#include <trisecant/trisecant.hpp>

namespace support
{

using namespace trisecant;

inline constexpr double pi = 3.14159265358979323846;
inline const cplx I(0, 1);

/// Symmetric tau with Im tau = A A^T + lift I, Re tau uniform in [-1/2, 1/2].
inline PeriodMatrix random_tau(std::mt19937_64 &rng, int g, double lift = 0.6)
{
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    rmat a(g, g), x(g, g);
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            a(i, j) = u(rng);
            x(i, j) = u(rng);
        }
    }
    const rmat y = a * a.transpose() + lift * rmat::Identity(g, g);
    const rmat xs = 0.5 * (x + x.transpose());
    cmat tau(g, g);
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            tau(i, j) = cplx(xs(i, j), y(i, j));
        }
    }
    return validate_period_matrix(tau);
}

/// Point with chart coordinates uniform in [-1/2, 1/2).
inline AbelianPoint random_point(std::mt19937_64 &rng, const PeriodMatrix &tau)
{
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const int g = tau.genus();
    rvec x(g), y(g);
    for (int i = 0; i < g; ++i) {
        x[i] = u(rng);
        y[i] = u(rng);
    }
    return AbelianPoint{from_chart(x, y, tau), false};
}

/// Box sum over |n_i| <= radius, one std::exp per term.
inline cplx brute_theta(const cvec &z, const cmat &tau, const rvec &a, const rvec &b, int radius)
{
    const auto g = tau.rows();
    std::vector<int> n(static_cast<std::size_t>(g), -radius);
    cplx sum = 0;
    for (;;) {
        cvec v(g);
        for (Eigen::Index i = 0; i < g; ++i) {
            v[i] = static_cast<double>(n[static_cast<std::size_t>(i)]) + a[i];
        }
        const cplx q = (v.transpose() * tau * v)(0, 0);
        const cplx l = (v.transpose() * (z + b.cast<cplx>()))(0, 0);
        sum += std::exp(I * pi * q + 2.0 * I * pi * l);
        Eigen::Index k = 0;
        while (k < g && ++n[static_cast<std::size_t>(k)] > radius) {
            n[static_cast<std::size_t>(k)] = -radius;
            ++k;
        }
        if (k == g) {
            break;
        }
    }
    return sum;
}

inline cplx brute_theta(const cvec &z, const cmat &tau, int radius)
{
    return brute_theta(z, tau, rvec::Zero(tau.rows()), rvec::Zero(tau.rows()), radius);
}

/// theta[sigma/2; 0](2z, 2 tau) by box sums.
inline cvec brute_second_order(const cvec &z, const cmat &tau, int radius)
{
    const auto g = static_cast<int>(tau.rows());
    cvec out(1 << g);
    for (unsigned s = 0; s < (1u << g); ++s) {
        rvec a(g);
        for (int i = 0; i < g; ++i) {
            a[i] = 0.5 * ((s >> (g - 1 - i)) & 1u);
        }
        out[s] = brute_theta(2.0 * z, 2.0 * tau, a, rvec::Zero(g), radius);
    }
    return out;
}

/// Laplace expansion along the first row.
inline cplx cofactor_det(const cmat &m)
{
    const auto n = m.rows();
    if (n == 1) {
        return m(0, 0);
    }
    cplx d = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        cmat sub(n - 1, n - 1);
        for (Eigen::Index r = 1; r < n; ++r) {
            for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
                if (c != j) {
                    sub(r - 1, cc++) = m(r, c);
                }
            }
        }
        d += ((j % 2 == 0) ? 1.0 : -1.0) * m(0, j) * cofactor_det(sub);
    }
    return d;
}

inline cmat random_cmat(std::mt19937_64 &rng, Eigen::Index rows, Eigen::Index cols)
{
    std::normal_distribution<double> n(0, 1);
    cmat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = cplx(n(rng), n(rng));
        }
    }
    return m;
}

/// Genus-2 test curve y^2 = x(x-1)(x-2)(x-3)(x-4), basepoint at 0.
struct genus2_curve {
    HyperellipticCurve curve = curve_from_branch_points({0, 1, 2, 3, 4}, 0);
    CurvePeriods periods = period_matrix(curve);

    AbelianPoint aj(cplx x, int sheet = 1) const
    {
        return abel_jacobi(curve, periods, CurvePoint{x, sheet, false}).image;
    }

    std::vector<AbelianPoint> h() const
    {
        return {aj({1.5, 0.7}), aj({2.6, -0.4}), aj({3.3, 1.1})};
    }

    /// x = (AJ(q) - c_1 - c_2 - c_3) / 2.
    AbelianPoint curve_x(cplx q, int sheet = 1) const
    {
        cvec s = aj(q, sheet).z;
        for (const auto &c : h()) {
            s -= c.z;
        }
        return AbelianPoint{0.5 * s, false};
    }
};

} // namespace support

#endif
