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

// Points of the complex torus X = C^g / (Z^g + tau Z^g).
//
// Every point z is written in the real chart z = x + tau y, with x, y real
// g-vectors. Lattice reduction, torsion tests and distances are all done in
// that chart, where the lattice is simply Z^2g.

#ifndef TRISECANT_PPAV_HPP
#define TRISECANT_PPAV_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <trisecant/error.hpp>

namespace trisecant
{

using cplx = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;
using rvec = Eigen::VectorXd;
using rmat = Eigen::MatrixXd;
using ivec = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

/// A validated point of the Siegel upper half space.
///
/// Construct through validate_period_matrix(). Besides tau itself the object
/// caches Im(tau), its inverse and its Cholesky factor, which all lattice and
/// theta computations need.
class PeriodMatrix
{
public:
    int genus() const noexcept
    {
        return static_cast<int>(m_tau.rows());
    }
    const cmat &tau() const noexcept
    {
        return m_tau;
    }
    const rmat &im() const noexcept
    {
        return m_im;
    }
    const rmat &im_inverse() const noexcept
    {
        return m_im_inv;
    }
    // Smallest eigenvalue of Im(tau).
    double im_min_eigenvalue() const noexcept
    {
        return m_im_lmin;
    }

    friend PeriodMatrix validate_period_matrix(const cmat &);

private:
    PeriodMatrix() = default;

    cmat m_tau;
    rmat m_im;
    rmat m_im_inv;
    double m_im_lmin = 0;
};

struct AbelianPoint {
    cvec z;
    bool reduced = false;

    int dim() const noexcept
    {
        return static_cast<int>(z.size());
    }
};

/// The lattice element m + tau n.
struct LatticeVector {
    ivec m;
    ivec n;

    static LatticeVector zero(int g)
    {
        return {ivec::Zero(g), ivec::Zero(g)};
    }
    bool is_zero() const
    {
        return (m.array() == 0).all() && (n.array() == 0).all();
    }
};

inline double max_abs(const cmat &a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool all_finite(const cmat &a)
{
    return a.allFinite();
}

inline PeriodMatrix validate_period_matrix(const cmat &tau_raw)
{
    if (tau_raw.rows() == 0 || tau_raw.rows() != tau_raw.cols()) {
        throw error(errc::shape_mismatch, "period matrix must be square and non-empty");
    }
    if (!all_finite(tau_raw)) {
        throw error(errc::non_finite, "period matrix has non-finite entries");
    }
    const double scale = max_abs(tau_raw);
    const double asym = max_abs(tau_raw - tau_raw.transpose());
    if (asym > 1e-12 * scale) {
        throw error(errc::not_symmetric, "period matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
    }

    PeriodMatrix pm;
    pm.m_tau = tau_raw;
    pm.m_im = tau_raw.imag();
    Eigen::LLT<rmat> llt(pm.m_im);
    if (llt.info() != Eigen::Success) {
        throw error(errc::not_positive_definite, "Im(tau) is not positive definite");
    }
    const rmat l = llt.matrixL();
    if ((l.diagonal().array() <= 0.0).any()) {
        throw error(errc::not_positive_definite, "Im(tau) is not positive definite");
    }
    pm.m_im_inv = llt.solve(rmat::Identity(pm.m_im.rows(), pm.m_im.cols()));
    Eigen::SelfAdjointEigenSolver<rmat> es(pm.m_im, Eigen::EigenvaluesOnly);
    pm.m_im_lmin = es.eigenvalues().minCoeff();
    if (!(pm.m_im_lmin > 0)) {
        throw error(errc::not_positive_definite, "Im(tau) is not positive definite");
    }
    return pm;
}

/// Real chart coordinates (x, y) with z = x + tau y.
struct Chart {
    rvec x;
    rvec y;
};

inline Chart to_chart(const cvec &z, const PeriodMatrix &tau)
{
    Chart c;
    c.y = tau.im_inverse() * z.imag();
    c.x = z.real() - tau.tau().real() * c.y;
    return c;
}

inline cvec from_chart(const rvec &x, const rvec &y, const PeriodMatrix &tau)
{
    return x.cast<cplx>() + tau.tau() * y.cast<cplx>();
}

inline cvec lattice_point(const LatticeVector &lv, const PeriodMatrix &tau)
{
    return lv.m.cast<double>().cast<cplx>() + tau.tau() * lv.n.cast<double>().cast<cplx>();
}

namespace detail
{

// Fold v into [-1/2, 1/2); returns the integer that was removed.
inline long long fold(double &v)
{
    const double k = std::floor(v + 0.5);
    v -= k;
    return static_cast<long long>(k);
}

inline void check_dims(const AbelianPoint &p, const PeriodMatrix &tau)
{
    if (p.dim() != tau.genus()) {
        throw error(errc::dimension_mismatch, "point dimension does not match the genus");
    }
}

} // namespace detail

/// Reduce z into the fundamental domain [-1/2, 1/2)^2g of the real chart.
///
/// Returns (z0, lv) with z = z0 + m + tau n.
inline std::pair<AbelianPoint, LatticeVector> reduce_mod_lattice(const AbelianPoint &p, const PeriodMatrix &tau)
{
    detail::check_dims(p, tau);
    if (!p.z.allFinite()) {
        throw error(errc::non_finite, "point has non-finite coordinates");
    }
    const int g = tau.genus();
    Chart c = to_chart(p.z, tau);
    LatticeVector lv = LatticeVector::zero(g);
    for (int i = 0; i < g; ++i) {
        lv.n[i] = detail::fold(c.y[i]);
        lv.m[i] = detail::fold(c.x[i]);
    }
    return {AbelianPoint{from_chart(c.x, c.y, tau), true}, lv};
}

inline AbelianPoint reduce(const AbelianPoint &p, const PeriodMatrix &tau)
{
    return reduce_mod_lattice(p, tau).first;
}

/// Chart-space distance between two points modulo the lattice (max norm).
inline double torus_distance(const cvec &a, const cvec &b, const PeriodMatrix &tau)
{
    Chart c = to_chart(a - b, tau);
    double d = 0;
    for (Eigen::Index i = 0; i < c.x.size(); ++i) {
        d = std::max(d, std::abs(c.x[i] - std::round(c.x[i])));
        d = std::max(d, std::abs(c.y[i] - std::round(c.y[i])));
    }
    return d;
}

inline AbelianPoint multiply_point(const AbelianPoint &p, long long k, const PeriodMatrix &tau)
{
    return reduce(AbelianPoint{p.z * static_cast<double>(k), false}, tau);
}

inline bool is_two_torsion(const AbelianPoint &p, const PeriodMatrix &tau, double tol)
{
    if (!(tol > 0)) {
        throw error(errc::invalid_eps, "torsion tolerance must be positive");
    }
    detail::check_dims(p, tau);
    return torus_distance(2.0 * p.z, cvec::Zero(p.dim()), tau) <= tol;
}

/// The 4^g points (m + tau n)/2 with m, n in {0,1}^g, reduced.
///
/// Ordered by the bit pattern (n, m), m varying fastest; index 0 is the origin.
inline std::vector<AbelianPoint> two_torsion_points(const PeriodMatrix &tau)
{
    const int g = tau.genus();
    const std::size_t count = std::size_t(1) << (2 * g);
    std::vector<AbelianPoint> out;
    out.reserve(count);
    for (std::size_t bits = 0; bits < count; ++bits) {
        rvec x(g), y(g);
        for (int i = 0; i < g; ++i) {
            x[i] = ((bits >> i) & 1u) ? 0.5 : 0.0;
            y[i] = ((bits >> (g + i)) & 1u) ? 0.5 : 0.0;
        }
        out.push_back(reduce(AbelianPoint{from_chart(x, y, tau), false}, tau));
    }
    return out;
}

/// All 4^g solutions xi of 2 xi = s modulo the lattice.
inline std::vector<AbelianPoint> halve_point(const AbelianPoint &s, const PeriodMatrix &tau)
{
    detail::check_dims(s, tau);
    const cvec half = 0.5 * s.z;
    std::vector<AbelianPoint> out;
    for (const auto &t : two_torsion_points(tau)) {
        out.push_back(reduce(AbelianPoint{half + t.z, false}, tau));
    }
    return out;
}

} // namespace trisecant

#endif
