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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include <trisecant/theta.hpp>
#include <trisecant/trisecant.hpp>

#include "support.hpp"

using namespace trisecant;
using support::I;
using support::pi;

namespace
{

PeriodMatrix tau_i()
{
    return validate_period_matrix(cmat::Constant(1, 1, I));
}

AbelianPoint zero_point(int g)
{
    return AbelianPoint{cvec::Zero(g), false};
}

EvalParams with_eps(double eps)
{
    EvalParams p;
    p.eps = eps;
    return p;
}

errc code_of(const std::function<void()> &f)
{
    try {
        f();
    } catch (const error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return errc::io_failure;
}

std::vector<ThetaCharacteristic> half_characteristics(int g)
{
    std::vector<ThetaCharacteristic> out;
    for (unsigned bits = 0; bits < (1u << (2 * g)); ++bits) {
        ThetaCharacteristic ch = ThetaCharacteristic::zero(g);
        for (int i = 0; i < g; ++i) {
            ch.a[i] = 0.5 * ((bits >> i) & 1u);
            ch.b[i] = 0.5 * ((bits >> (g + i)) & 1u);
        }
        out.push_back(ch);
    }
    return out;
}

} // namespace

TEST(TruncationRadius, MonotoneInEps)
{
    std::mt19937_64 rng(5);
    for (int g = 1; g <= 3; ++g) {
        const auto tau = support::random_tau(rng, g);
        double prev = 0;
        for (double eps : {1e-1, 1e-3, 1e-6, 1e-9, 1e-12, 1e-15}) {
            const double r = truncation_radius(tau, 0, eps);
            EXPECT_GE(r, prev);
            prev = r;
        }
    }
}

TEST(TruncationRadius, TailBelowEps)
{
    const double r = truncation_radius(tau_i(), 0, 1e-12);
    // terms exp(-pi n^2), metric |T n| = sqrt(pi) |n|
    double tail = 0;
    for (int n = -50; n <= 50; ++n) {
        if (std::sqrt(pi) * std::abs(n) > r) {
            tail += std::exp(-pi * n * n);
        }
    }
    EXPECT_LT(tail, 1e-12);
}

TEST(TruncationRadius, Errors)
{
    EXPECT_EQ(code_of([] { truncation_radius(tau_i(), 0, 0); }), errc::invalid_eps);
    EXPECT_EQ(code_of([] { truncation_radius(tau_i(), 0, 1); }), errc::invalid_eps);
    EXPECT_EQ(code_of([] { truncation_radius(tau_i(), -1, 1e-6); }), errc::out_of_range);
}

TEST(RiemannTheta, KnownValue)
{
    const cplx v = riemann_theta(zero_point(1), tau_i(), ThetaCharacteristic::zero(1), with_eps(1e-12));
    const cplx brute = support::brute_theta(cvec::Zero(1), cmat::Constant(1, 1, I), 10);
    EXPECT_LE(std::abs(v - brute), 1e-12);
    EXPECT_LE(std::abs(brute - std::pow(pi, 0.25) / std::tgamma(0.75)), 1e-10);
    EXPECT_NEAR(v.real(), 1.0864348112133080, 1e-12);
}

TEST(RiemannTheta, MatchesBruteForce)
{
    std::mt19937_64 rng(21);
    for (int g = 1; g <= 3; ++g) {
        const auto tau = support::random_tau(rng, g);
        for (const auto &ch : half_characteristics(g)) {
            const auto z = support::random_point(rng, tau);
            const cplx v = riemann_theta(z, tau, ch, with_eps(1e-13));
            const cplx b = support::brute_theta(z.z, tau.tau(), ch.a, ch.b, g == 3 ? 7 : 10);
            EXPECT_LE(std::abs(v - b), 1e-11 * std::max(1.0, std::abs(b)));
        }
    }
}

TEST(RiemannTheta, OddCharacteristicsVanishAtZero)
{
    std::mt19937_64 rng(22);
    for (int g = 1; g <= 3; ++g) {
        const auto tau = support::random_tau(rng, g);
        double max_even = 0;
        std::vector<double> odd;
        for (const auto &ch : half_characteristics(g)) {
            const double v = std::abs(riemann_theta(zero_point(g), tau, ch, with_eps(1e-13)));
            if (ch.parity()) {
                odd.push_back(v);
            } else {
                max_even = std::max(max_even, v);
            }
        }
        EXPECT_EQ(odd.size(), static_cast<std::size_t>((1 << (g - 1)) * ((1 << g) - 1)));
        for (double v : odd) {
            EXPECT_LE(v, 1e-10 * max_even);
        }
    }
}

TEST(RiemannTheta, Parity)
{
    std::mt19937_64 rng(23);
    const auto tau = support::random_tau(rng, 2);
    for (const auto &ch : half_characteristics(2)) {
        const auto z = support::random_point(rng, tau);
        const cplx plus = riemann_theta(z, tau, ch);
        const cplx minus = riemann_theta(AbelianPoint{-z.z, false}, tau, ch);
        const double sign = ch.parity() ? -1.0 : 1.0;
        EXPECT_LE(std::abs(minus - sign * plus), 1e-10 * std::max(1.0, std::abs(plus)));
    }
}

TEST(RiemannTheta, Refinement)
{
    std::mt19937_64 rng(24);
    for (int g = 1; g <= 3; ++g) {
        const auto tau = support::random_tau(rng, g);
        const auto z = support::random_point(rng, tau);
        const auto ch = ThetaCharacteristic::zero(g);
        for (double eps : {1e-2, 1e-4, 1e-8}) {
            const cplx coarse = riemann_theta(z, tau, ch, with_eps(eps));
            const cplx fine = riemann_theta(z, tau, ch, with_eps(eps / 2));
            EXPECT_LE(std::abs(coarse - fine), eps * std::max(1.0, std::abs(fine)));
        }
    }
}

TEST(RiemannTheta, Errors)
{
    const auto t = tau_i();
    EXPECT_EQ(code_of([&] { riemann_theta(zero_point(1), t, ThetaCharacteristic::zero(1), with_eps(0)); }),
              errc::invalid_eps);
    EXPECT_EQ(code_of([&] { riemann_theta(zero_point(1), t, ThetaCharacteristic::zero(2)); }),
              errc::dimension_mismatch);
    EXPECT_EQ(code_of([&] { riemann_theta(zero_point(2), t, ThetaCharacteristic::zero(1)); }),
              errc::dimension_mismatch);
    EvalParams tight;
    tight.max_points = 2;
    EXPECT_EQ(code_of([&] { riemann_theta(zero_point(1), t, ThetaCharacteristic::zero(1), tight); }),
              errc::convergence_budget_exceeded);
    ThetaCharacteristic bad = ThetaCharacteristic::zero(1);
    bad.a[0] = 0.25;
    EXPECT_EQ(code_of([&] { riemann_theta(zero_point(1), t, bad); }), errc::out_of_range);
}

TEST(QuasiPeriodFactor, Trivial)
{
    std::mt19937_64 rng(30);
    const auto tau = support::random_tau(rng, 2);
    const auto z = support::random_point(rng, tau);
    const auto ch = ThetaCharacteristic::zero(2);
    LatticeVector lv = LatticeVector::zero(2);
    EXPECT_LE(std::abs(quasi_period_factor(z, tau, lv, ch) - 1.0), 1e-15);
    lv.m << 2, -1;
    EXPECT_LE(std::abs(quasi_period_factor(z, tau, lv, ch) - 1.0), 1e-12);
}

TEST(QuasiPeriodFactor, Identity)
{
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> k(-2, 2);
    for (int trial = 0; trial < 60; ++trial) {
        const int g = 1 + trial % 3;
        const auto tau = support::random_tau(rng, g);
        const auto z = support::random_point(rng, tau);
        const auto chars = half_characteristics(g);
        const auto &ch = chars[static_cast<std::size_t>(trial) % chars.size()];
        LatticeVector lv{ivec(g), ivec(g)};
        for (int i = 0; i < g; ++i) {
            lv.m[i] = k(rng);
            lv.n[i] = k(rng);
        }
        const cplx lhs = riemann_theta(AbelianPoint{z.z + lattice_point(lv, tau), false}, tau, ch, with_eps(1e-12));
        const cplx rhs = quasi_period_factor(z, tau, lv, ch) * riemann_theta(z, tau, ch, with_eps(1e-12));
        EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::abs(rhs)) << "trial " << trial;
    }
}

TEST(SecondOrderBasis, Sizes)
{
    std::mt19937_64 rng(40);
    for (int g = 1; g <= 3; ++g) {
        const auto tau = support::random_tau(rng, g);
        EXPECT_EQ(second_order_basis(zero_point(g), tau).size(), 1 << g);
        EXPECT_EQ(basis_size(g), 1u << g);
    }
}

TEST(SecondOrderBasis, ScalarExample)
{
    const cvec v = second_order_basis(zero_point(1), tau_i(), with_eps(1e-13));
    const cmat two_i = cmat::Constant(1, 1, 2.0 * I);
    rvec half = rvec::Constant(1, 0.5);
    EXPECT_LE(std::abs(v[0] - support::brute_theta(cvec::Zero(1), two_i, 10)), 1e-12);
    EXPECT_LE(std::abs(v[1] - support::brute_theta(cvec::Zero(1), two_i, half, rvec::Zero(1), 10)), 1e-12);
}

TEST(SecondOrderBasis, MatchesBruteForce)
{
    std::mt19937_64 rng(41);
    for (int g = 1; g <= 3; ++g) {
        const auto tau = support::random_tau(rng, g);
        const auto z = support::random_point(rng, tau);
        const cvec v = second_order_basis(z, tau, with_eps(1e-13));
        const cvec b = support::brute_second_order(z.z, tau.tau(), g == 3 ? 6 : 9);
        EXPECT_LE((v - b).cwiseAbs().maxCoeff(), 1e-11 * std::max(1.0, b.cwiseAbs().maxCoeff()));
    }
}

TEST(SecondOrderBasis, EvenAndLatticeProjective)
{
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> k(-2, 2);
    for (int trial = 0; trial < 30; ++trial) {
        const int g = 1 + trial % 3;
        const auto tau = support::random_tau(rng, g);
        const auto z = support::random_point(rng, tau);
        const cvec v = second_order_basis(z, tau);
        const cvec w = second_order_basis(AbelianPoint{-z.z, false}, tau);
        EXPECT_LE((v - w).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, v.cwiseAbs().maxCoeff()));
        LatticeVector lv{ivec(g), ivec(g)};
        for (int i = 0; i < g; ++i) {
            lv.m[i] = k(rng);
            lv.n[i] = k(rng);
        }
        const cvec shifted = second_order_basis(AbelianPoint{z.z + lattice_point(lv, tau), false}, tau);
        EXPECT_LE(projective_angle(v, shifted), 1e-8);
    }
}

TEST(KummerMap, AgreesWithSeries)
{
    std::mt19937_64 rng(43);
    for (int g = 1; g <= 3; ++g) {
        const auto tau = support::random_tau(rng, g);
        const KummerMap k(tau, 1e-12);
        EXPECT_GT(k.lattice_size(), 0u);
        for (int t = 0; t < 10; ++t) {
            cvec z = support::random_point(rng, tau).z;
            z += lattice_point(LatticeVector{ivec::Constant(g, t % 3 - 1), ivec::Constant(g, 1 - t % 2)}, tau);
            const cvec a = k(z);
            const cvec b = second_order_basis(AbelianPoint{z, false}, tau);
            EXPECT_LE(projective_angle(a, b), 1e-10);
        }
    }
}
