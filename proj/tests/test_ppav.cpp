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

#include <functional>
#include <random>

#include <trisecant/ppav.hpp>

#include "support.hpp"

using namespace trisecant;
using support::I;

namespace
{

PeriodMatrix tau_i()
{
    return validate_period_matrix(cmat::Constant(1, 1, I));
}

AbelianPoint pt(cplx v)
{
    return AbelianPoint{cvec::Constant(1, v), false};
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

} // namespace

TEST(ValidatePeriodMatrix, AcceptsUpperHalfPlane)
{
    const auto t = tau_i();
    EXPECT_EQ(t.genus(), 1);
    cmat m(2, 2);
    m << I, 0.5, 0.5, 2.0 * I;
    EXPECT_EQ(validate_period_matrix(m).genus(), 2);
}

TEST(ValidatePeriodMatrix, Rejects)
{
    EXPECT_EQ(code_of([] { validate_period_matrix(cmat::Constant(1, 1, -I)); }), errc::not_positive_definite);
    cmat asym(2, 2);
    asym << I, 0.5, 0.4, I;
    EXPECT_EQ(code_of([&] { validate_period_matrix(asym); }), errc::not_symmetric);
    cmat nan = cmat::Constant(1, 1, cplx(std::nan(""), 1));
    EXPECT_EQ(code_of([&] { validate_period_matrix(nan); }), errc::non_finite);
    EXPECT_EQ(code_of([] { validate_period_matrix(cmat(2, 3)); }), errc::shape_mismatch);
}

TEST(ReduceModLattice, Examples)
{
    const auto t = tau_i();
    auto [r0, l0] = reduce_mod_lattice(pt(0), t);
    EXPECT_LT(std::abs(r0.z[0]), 1e-15);
    EXPECT_TRUE(l0.is_zero());

    auto [r1, l1] = reduce_mod_lattice(pt(cplx(1, 2)), t);
    EXPECT_LT(std::abs(r1.z[0]), 1e-14);
    EXPECT_EQ(l1.m[0], 1);
    EXPECT_EQ(l1.n[0], 2);

    auto [r2, l2] = reduce_mod_lattice(pt(0.6), t);
    EXPECT_NEAR(r2.z[0].real(), -0.4, 1e-15);
    EXPECT_EQ(l2.m[0], 1);
    EXPECT_EQ(l2.n[0], 0);
    EXPECT_TRUE(r2.reduced);
}

TEST(ReduceModLattice, BoundaryFoldsToLowerEdge)
{
    const auto r = reduce(pt(0.5), tau_i());
    EXPECT_DOUBLE_EQ(r.z[0].real(), -0.5);
}

TEST(ReduceModLattice, IdempotentAndConsistent)
{
    std::mt19937_64 rng(11);
    for (int g = 1; g <= 3; ++g) {
        const auto tau = support::random_tau(rng, g);
        std::uniform_real_distribution<double> u(-5, 5);
        for (int t = 0; t < 20; ++t) {
            cvec z(g);
            for (int i = 0; i < g; ++i) {
                z[i] = cplx(u(rng), u(rng));
            }
            auto [r, lv] = reduce_mod_lattice(AbelianPoint{z, false}, tau);
            EXPECT_LT((r.z + lattice_point(lv, tau) - z).cwiseAbs().maxCoeff(), 1e-12);
            auto [r2, lv2] = reduce_mod_lattice(r, tau);
            EXPECT_TRUE(lv2.is_zero());
            EXPECT_LT((r2.z - r.z).cwiseAbs().maxCoeff(), 1e-14);
            const Chart c = to_chart(r.z, tau);
            EXPECT_TRUE((c.x.array() >= -0.5).all() && (c.x.array() < 0.5).all());
            EXPECT_TRUE((c.y.array() >= -0.5).all() && (c.y.array() < 0.5).all());
        }
    }
}

TEST(MultiplyPoint, Examples)
{
    const auto t = tau_i();
    const auto z = pt(cplx(0.3, 0.2));
    EXPECT_LT(torus_distance(multiply_point(z, 1, t).z, reduce(z, t).z, t), 1e-15);
    EXPECT_LT(torus_distance(multiply_point(pt(cplx(0.5, 0.5)), 2, t).z, cvec::Zero(1), t), 1e-15);
    EXPECT_NEAR(multiply_point(pt(0.3), 2, t).z[0].real(), -0.4, 1e-15);
}

TEST(MultiplyPoint, Additive)
{
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> k(-8, 8);
    for (int g = 1; g <= 3; ++g) {
        const auto tau = support::random_tau(rng, g);
        for (int t = 0; t < 20; ++t) {
            const auto z = support::random_point(rng, tau);
            const int k1 = k(rng), k2 = k(rng);
            const cvec lhs = multiply_point(z, k1 + k2, tau).z;
            const cvec rhs = multiply_point(z, k1, tau).z + multiply_point(z, k2, tau).z;
            EXPECT_LE(torus_distance(lhs, rhs, tau), 1e-10);
        }
    }
}

TEST(TwoTorsion, Examples)
{
    const auto t = tau_i();
    EXPECT_TRUE(is_two_torsion(pt(cplx(0.5, 0.5)), t, 1e-12));
    EXPECT_TRUE(is_two_torsion(pt(0), t, 1e-12));
    EXPECT_FALSE(is_two_torsion(pt(0.3), t, 1e-12));
    EXPECT_EQ(code_of([&] { is_two_torsion(pt(0), t, -1); }), errc::invalid_eps);
}

TEST(TwoTorsion, Points)
{
    const auto t = tau_i();
    const auto pts = two_torsion_points(t);
    ASSERT_EQ(pts.size(), 4u);
    for (cplx want : {cplx(0, 0), cplx(0.5, 0), cplx(0, 0.5), cplx(0.5, 0.5)}) {
        bool found = false;
        for (const auto &p : pts) {
            found = found || torus_distance(p.z, cvec::Constant(1, want), t) < 1e-14;
        }
        EXPECT_TRUE(found) << want;
    }
    std::mt19937_64 rng(3);
    const auto tau2 = support::random_tau(rng, 2);
    const auto pts2 = two_torsion_points(tau2);
    ASSERT_EQ(pts2.size(), 16u);
    for (std::size_t i = 0; i < pts2.size(); ++i) {
        EXPECT_TRUE(is_two_torsion(pts2[i], tau2, 1e-12));
        for (std::size_t j = i + 1; j < pts2.size(); ++j) {
            EXPECT_GT(torus_distance(pts2[i].z, pts2[j].z, tau2), 0.1);
        }
    }
}

TEST(HalvePoint, CountsAndInverse)
{
    EXPECT_EQ(halve_point(pt(0), tau_i()).size(), 4u);
    std::mt19937_64 rng(13);
    for (int g = 1; g <= 3; ++g) {
        const auto tau = support::random_tau(rng, g);
        for (int t = 0; t < 10; ++t) {
            const auto z = support::random_point(rng, tau);
            const auto halves = halve_point(multiply_point(z, 2, tau), tau);
            ASSERT_EQ(halves.size(), std::size_t{1} << (2 * g));
            double best = 1;
            for (const auto &h : halves) {
                best = std::min(best, torus_distance(h.z, z.z, tau));
                EXPECT_LE(torus_distance(2.0 * h.z, 2.0 * z.z, tau), 1e-10);
            }
            EXPECT_LE(best, 1e-10);
        }
    }
}

TEST(Dimensions, Mismatch)
{
    std::mt19937_64 rng(1);
    const auto tau = support::random_tau(rng, 2);
    EXPECT_EQ(code_of([&] { reduce(pt(0), tau); }), errc::dimension_mismatch);
}
