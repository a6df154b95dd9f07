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

// Riemann theta functions with half-integer characteristics,
//
//   theta[a;b](z, tau) = sum_{n in Z^g} exp(pi i (n+a)^T tau (n+a) + 2 pi i (n+a)^T (z+b)),
//
// and the second-order basis theta_sigma(z) = theta[sigma/2; 0](2z, 2 tau).
//
// Normalization: the returned values are the raw series values. Writing
// Im z = Im(tau) y, every term has modulus
//
//   exp(pi y^T Im(tau) y) * exp(-|T (n + a + y)|^2),   T^T T = pi Im(tau),
//
// and the truncation guarantees that the discarded terms sum, in modulus, to
// at most eps * exp(pi y^T Im(tau) y). For Im z inside one fundamental domain
// the growth factor is O(1).

#ifndef TRISECANT_THETA_HPP
#define TRISECANT_THETA_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <trisecant/error.hpp>
#include <trisecant/ppav.hpp>

namespace trisecant
{

struct ThetaCharacteristic {
    rvec a;
    rvec b;

    static ThetaCharacteristic zero(int g)
    {
        return {rvec::Zero(g), rvec::Zero(g)};
    }

    /// sigma in {0,1}^g (lexicographic index, first coordinate most
    /// significant) mapped to (sigma/2, 0).
    static ThetaCharacteristic from_sigma(int g, unsigned sigma)
    {
        ThetaCharacteristic ch = zero(g);
        for (int i = 0; i < g; ++i) {
            ch.a[i] = ((sigma >> (g - 1 - i)) & 1u) ? 0.5 : 0.0;
        }
        return ch;
    }

    int dim() const noexcept
    {
        return static_cast<int>(a.size());
    }

    // 4 a^T b mod 2; 1 for odd characteristics.
    int parity() const
    {
        long long s = 0;
        for (int i = 0; i < dim(); ++i) {
            s += std::llround(2 * a[i]) * std::llround(2 * b[i]);
        }
        return static_cast<int>(s & 1);
    }

    void validate() const
    {
        if (a.size() != b.size()) {
            throw error(errc::dimension_mismatch, "characteristic vectors differ in length");
        }
        auto half = [](double v) { return v == 0.0 || v == 0.5; };
        for (int i = 0; i < dim(); ++i) {
            if (!half(a[i]) || !half(b[i])) {
                throw error(errc::out_of_range, "characteristic entries must be 0 or 1/2");
            }
        }
    }
};

struct EvalParams {
    double eps = 1e-12;
    std::optional<double> radius_override;
    // Upper bound on the number of lattice points a single evaluation may visit.
    double max_points = 1e8;
};

namespace detail
{

inline void check_eps(double eps)
{
    if (!(eps > 0 && eps < 1)) {
        throw error(errc::invalid_eps, "eps must lie in (0, 1)");
    }
}

// Radius R (in the metric |T w|) beyond which the Gaussian tail
// sum_{|T(n+c)| > R} exp(-|T(n+c)|^2) is at most eps, for every shift c.
//
// With lmin the smallest eigenvalue of T^T T and any beta in (0,1):
//   tail <= exp(-(1-beta) R^2) * sum_n exp(-beta lmin |n+c|^2)
//        <= exp(-(1-beta) R^2) * (1 + sqrt(pi / (beta lmin)))^g.
// Minimizing over a fixed beta grid keeps R monotone in eps and lmin.
inline double gaussian_tail_radius(int g, double lmin, double eps)
{
    check_eps(eps);
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 45; ++k) {
        const double beta = 0.02 * k;
        const double logb = g * std::log1p(std::sqrt(std::numbers::pi / (beta * lmin)));
        const double r2 = (logb - std::log(eps)) / (1 - beta);
        best = std::min(best, std::sqrt(std::max(r2, 0.0)));
    }
    return best;
}

// Upper-triangular T with T^T T = q.
inline rmat upper_cholesky(const rmat &q)
{
    Eigen::LLT<rmat> llt(q);
    if (llt.info() != Eigen::Success) {
        throw error(errc::not_positive_definite, "quadratic form is not positive definite");
    }
    return llt.matrixU();
}

inline double enumeration_bound(const rmat &t, double radius)
{
    double count = 1;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        count *= 2 * radius / t(i, i) + 1;
    }
    return count;
}

// Calls f(n) for every n in Z^g with |T (n + c)| <= radius, T upper
// triangular. The visiting order is fixed (lexicographic from the last
// coordinate down), which keeps summation results reproducible.
template <typename F>
void for_each_in_ellipsoid(const rmat &t, const rvec &c, double radius, F &&f)
{
    const int g = static_cast<int>(t.rows());
    std::vector<long long> n(static_cast<std::size_t>(g));
    std::vector<double> w(static_cast<std::size_t>(g));
    const double r2 = radius * radius;

    auto rec = [&](auto &&self, int i, double acc) -> void {
        double s = 0;
        for (int j = i + 1; j < g; ++j) {
            s += t(i, j) * w[static_cast<std::size_t>(j)];
        }
        const double rem = r2 - acc;
        if (rem < 0) {
            return;
        }
        const double h = std::sqrt(rem);
        const double tii = t(i, i);
        const double lo = (-h - s) / tii - c[i];
        const double hi = (h - s) / tii - c[i];
        for (auto k = static_cast<long long>(std::ceil(lo)); k <= static_cast<long long>(std::floor(hi)); ++k) {
            n[static_cast<std::size_t>(i)] = k;
            const double wi = static_cast<double>(k) + c[i];
            w[static_cast<std::size_t>(i)] = wi;
            const double v = tii * wi + s;
            if (i == 0) {
                f(n);
            } else {
                self(self, i - 1, acc + v * v);
            }
        }
    };
    rec(rec, g - 1, 0.0);
}

// Neumaier-compensated complex accumulator.
class compensated_sum
{
public:
    void add(cplx v) noexcept
    {
        add_part(m_re, m_cre, v.real());
        add_part(m_im, m_cim, v.imag());
    }
    cplx value() const noexcept
    {
        return {m_re + m_cre, m_im + m_cim};
    }

private:
    static void add_part(double &sum, double &comp, double v) noexcept
    {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }

    double m_re = 0, m_cre = 0, m_im = 0, m_cim = 0;
};

inline cplx quad_form(const cmat &q, const std::vector<double> &w)
{
    cplx s(0, 0);
    const auto g = static_cast<Eigen::Index>(w.size());
    for (Eigen::Index i = 0; i < g; ++i) {
        const double wi = w[static_cast<std::size_t>(i)];
        s += q(i, i) * (wi * wi);
        for (Eigen::Index j = i + 1; j < g; ++j) {
            s += q(i, j) * (2 * wi * w[static_cast<std::size_t>(j)]);
        }
    }
    return s;
}

inline cplx dot(const std::vector<double> &w, const cvec &z)
{
    cplx s(0, 0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        s += w[i] * z[static_cast<Eigen::Index>(i)];
    }
    return s;
}

inline void check_point(const cvec &z, const PeriodMatrix &tau)
{
    if (z.size() != tau.genus()) {
        throw error(errc::dimension_mismatch, "point dimension does not match the genus");
    }
    if (!z.allFinite()) {
        throw error(errc::non_finite, "point has non-finite coordinates");
    }
}

inline double resolve_radius(const EvalParams &params, int g, double lmin)
{
    if (params.radius_override) {
        if (!(*params.radius_override > 0)) {
            throw error(errc::out_of_range, "radius override must be positive");
        }
        return *params.radius_override;
    }
    return gaussian_tail_radius(g, lmin, params.eps);
}

inline void check_budget(const rmat &t, double radius, const EvalParams &params)
{
    if (enumeration_bound(t, radius) > params.max_points) {
        throw error(errc::convergence_budget_exceeded, "theta truncation needs more lattice points than the budget allows");
    }
}

} // namespace detail

/// Truncation radius, in the metric |T w| with T^T T = pi Im(tau), such that
/// the terms with |T (n + a + y)| > R sum to at most eps (relative to the
/// growth factor). The bound holds uniformly in the shift a + y, so y_norm
/// only has to be a valid norm.
inline double truncation_radius(const PeriodMatrix &tau, double y_norm, double eps)
{
    detail::check_eps(eps);
    if (!(y_norm >= 0)) {
        throw error(errc::out_of_range, "y_norm must be non-negative");
    }
    return detail::gaussian_tail_radius(tau.genus(), std::numbers::pi * tau.im_min_eigenvalue(), eps);
}

inline cplx riemann_theta(const AbelianPoint &p, const PeriodMatrix &tau, const ThetaCharacteristic &ch,
                          const EvalParams &params = {})
{
    detail::check_eps(params.eps);
    detail::check_point(p.z, tau);
    ch.validate();
    const int g = tau.genus();
    if (ch.dim() != g) {
        throw error(errc::dimension_mismatch, "characteristic dimension does not match the genus");
    }

    const rmat t = detail::upper_cholesky(std::numbers::pi * tau.im());
    const double radius = detail::resolve_radius(params, g, std::numbers::pi * tau.im_min_eigenvalue());
    detail::check_budget(t, radius, params);

    const rvec y = tau.im_inverse() * p.z.imag();
    const rvec shift = ch.a + y;
    const cvec zb = p.z + ch.b.cast<cplx>();
    const cmat &tm = tau.tau();
    const cplx ipi(0, std::numbers::pi);

    detail::compensated_sum acc;
    std::vector<double> w(static_cast<std::size_t>(g));
    detail::for_each_in_ellipsoid(t, shift, radius, [&](const std::vector<long long> &n) {
        for (int i = 0; i < g; ++i) {
            w[static_cast<std::size_t>(i)] = static_cast<double>(n[static_cast<std::size_t>(i)]) + ch.a[i];
        }
        acc.add(std::exp(ipi * (detail::quad_form(tm, w) + 2.0 * detail::dot(w, zb))));
    });
    return acc.value();
}

/// Multiplier mu with theta[a;b](z + m + tau n) = mu * theta[a;b](z):
///   mu = exp(2 pi i (a.m - b.n) - pi i n^T tau n - 2 pi i n^T z).
inline cplx quasi_period_factor(const AbelianPoint &p, const PeriodMatrix &tau, const LatticeVector &lv,
                                const ThetaCharacteristic &ch)
{
    detail::check_point(p.z, tau);
    const cvec n = lv.n.cast<double>().cast<cplx>();
    const rvec m = lv.m.cast<double>();
    const rvec nr = lv.n.cast<double>();
    const double phase = ch.a.dot(m) - ch.b.dot(nr);
    const cplx quad = n.transpose() * tau.tau() * n;
    const cplx lin = n.transpose() * p.z;
    const cplx ipi(0, std::numbers::pi);
    return std::exp(ipi * (2.0 * phase - quad - 2.0 * lin));
}

inline unsigned basis_size(int g)
{
    return 1u << g;
}

/// (theta_sigma(z))_sigma with theta_sigma(z) = theta[sigma/2; 0](2z, 2 tau),
/// sigma in lexicographic order on {0,1}^g.
///
/// All 2^g components come out of a single lattice sum: with m = 2n + sigma,
/// theta_sigma(z) = sum_{m = sigma mod 2} exp(pi i/2 m^T tau m + 2 pi i m^T z).
inline cvec second_order_basis(const AbelianPoint &p, const PeriodMatrix &tau, const EvalParams &params = {})
{
    detail::check_eps(params.eps);
    detail::check_point(p.z, tau);
    const int g = tau.genus();
    // The sum is theta[sigma/2;0](2z, 2tau); its form is 2 pi Im(tau) in the
    // variable n + sigma/2, i.e. pi/2 Im(tau) in m. Radii refer to the former.
    const double half_pi = 0.5 * std::numbers::pi;
    const rmat t = detail::upper_cholesky(half_pi * tau.im());
    const double radius = detail::resolve_radius(params, g, 2 * std::numbers::pi * tau.im_min_eigenvalue());
    detail::check_budget(t, radius, params);

    const rvec y = tau.im_inverse() * p.z.imag();
    const rvec shift = 2.0 * y;
    const cmat &tm = tau.tau();
    const cplx ipi(0, std::numbers::pi);

    std::vector<detail::compensated_sum> acc(basis_size(g));
    std::vector<double> m(static_cast<std::size_t>(g));
    detail::for_each_in_ellipsoid(t, shift, radius, [&](const std::vector<long long> &n) {
        unsigned sigma = 0;
        for (int i = 0; i < g; ++i) {
            const long long k = n[static_cast<std::size_t>(i)];
            m[static_cast<std::size_t>(i)] = static_cast<double>(k);
            sigma = (sigma << 1) | static_cast<unsigned>(k & 1);
        }
        acc[sigma].add(std::exp(ipi * (0.5 * detail::quad_form(tm, m) + 2.0 * detail::dot(m, p.z))));
    });

    cvec out(basis_size(g));
    for (unsigned s = 0; s < basis_size(g); ++s) {
        out[s] = acc[s].value();
    }
    return out;
}

/// Projective Kummer coordinates for repeated evaluation on one tau.
///
/// Points are first reduced into the fundamental domain, which rescales all
/// of theta_sigma by one common factor. The lattice set and the factors
/// exp(pi i/2 m^T tau m) are then fixed, and each evaluation only multiplies
/// them by powers of exp(2 pi i z_k).
class KummerMap
{
public:
    KummerMap(const PeriodMatrix &tau, double eps) : m_tau(tau)
    {
        detail::check_eps(eps);
        const int g = tau.genus();
        const rmat t = detail::upper_cholesky(0.5 * std::numbers::pi * tau.im());
        // shift 2y has entries in [-1, 1] after reduction
        const double spread = t.operatorNorm() * std::sqrt(static_cast<double>(g));
        const double radius
            = detail::gaussian_tail_radius(g, 2 * std::numbers::pi * tau.im_min_eigenvalue(), eps) + spread;
        if (detail::enumeration_bound(t, radius) > 1e7) {
            throw error(errc::convergence_budget_exceeded, "Kummer lattice set too large");
        }
        const cplx ipi(0, std::numbers::pi);
        m_lo.assign(static_cast<std::size_t>(g), 0);
        m_hi.assign(static_cast<std::size_t>(g), 0);
        std::vector<double> m(static_cast<std::size_t>(g));
        detail::for_each_in_ellipsoid(t, rvec::Zero(g), radius, [&](const std::vector<long long> &n) {
            unsigned sigma = 0;
            for (int i = 0; i < g; ++i) {
                const auto iu = static_cast<std::size_t>(i);
                const long long k = n[iu];
                m[iu] = static_cast<double>(k);
                m_points.push_back(static_cast<int>(k));
                m_lo[iu] = std::min(m_lo[iu], static_cast<int>(k));
                m_hi[iu] = std::max(m_hi[iu], static_cast<int>(k));
                sigma = (sigma << 1) | static_cast<unsigned>(k & 1);
            }
            m_sigma.push_back(sigma);
            m_weight.push_back(std::exp(0.5 * ipi * detail::quad_form(tau.tau(), m)));
        });
    }

    const PeriodMatrix &tau() const noexcept
    {
        return m_tau;
    }

    std::size_t lattice_size() const noexcept
    {
        return m_sigma.size();
    }

    /// Coordinates proportional to second_order_basis(z).
    cvec operator()(const cvec &z) const
    {
        const int g = m_tau.genus();
        const cvec z0 = reduce(AbelianPoint{z, false}, m_tau).z;
        // powers[i][k - lo_i] = exp(2 pi i k z0_i)
        std::vector<std::vector<cplx>> powers(static_cast<std::size_t>(g));
        for (int i = 0; i < g; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            const cplx w = std::exp(cplx(0, 2 * std::numbers::pi) * z0[i]);
            const cplx winv = 1.0 / w;
            auto &pw = powers[iu];
            pw.assign(static_cast<std::size_t>(m_hi[iu] - m_lo[iu] + 1), cplx(1, 0));
            const auto zero = static_cast<std::size_t>(-m_lo[iu]);
            for (std::size_t k = zero + 1; k < pw.size(); ++k) {
                pw[k] = pw[k - 1] * w;
            }
            for (std::size_t k = zero; k-- > 0;) {
                pw[k] = pw[k + 1] * winv;
            }
        }
        std::vector<detail::compensated_sum> acc(basis_size(g));
        const int *mp = m_points.data();
        for (std::size_t k = 0; k < m_sigma.size(); ++k, mp += g) {
            cplx term = m_weight[k];
            for (int i = 0; i < g; ++i) {
                const auto iu = static_cast<std::size_t>(i);
                term *= powers[iu][static_cast<std::size_t>(mp[i] - m_lo[iu])];
            }
            acc[m_sigma[k]].add(term);
        }
        cvec out(basis_size(g));
        for (unsigned s = 0; s < basis_size(g); ++s) {
            out[s] = acc[s].value();
        }
        return out;
    }

private:
    PeriodMatrix m_tau;
    std::vector<int> m_points;
    std::vector<int> m_lo;
    std::vector<int> m_hi;
    std::vector<unsigned> m_sigma;
    std::vector<cplx> m_weight;
};

} // namespace trisecant

#endif
