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

// Hyperelliptic curves y^2 = prod_i (x - e_i), their period matrices and the
// Abel-Jacobi map.
//
// Homology basis. Sort the branch points by real part (ties by imaginary
// part) to e_1, ..., e_N and cut the plane along [e_1,e_2], [e_3,e_4], ...;
// for odd N the last cut is the horizontal ray from e_N to +infinity. On the
// cut plane
//
//   y_1(x) = prod_k h_k(x),  h_k(x) = (x - a_k) sqrt((x - b_k)/(x - a_k))
//
// is single valued (principal square roots; the ray factor is i sqrt(a - x)).
// This is "sheet 1". A_k is the counterclockwise loop around cut k on sheet 1,
// k = 1..g. B_k encircles e_{2k}, ..., e_{2g+1}: it leaves cut k on sheet 1,
// passes to the left of the intermediate cuts, enters sheet 2 through the
// last cut and comes back on the right. Every period reduces to integrals
// over segments between consecutive sorted branch points, with the 1/sqrt
// endpoint singularities absorbed by Gauss-Chebyshev nodes.

#ifndef TRISECANT_CURVES_HPP
#define TRISECANT_CURVES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <trisecant/error.hpp>
#include <trisecant/ppav.hpp>
#include <trisecant/quadrature.hpp>

namespace trisecant
{

struct Cut {
    cplx a;
    cplx b; // unused for the ray
    bool ray = false;

    cplx factor(cplx x) const
    {
        if (ray) {
            return cplx(0, 1) * std::sqrt(a - x);
        }
        return (x - a) * std::sqrt((x - b) / (x - a));
    }
};

class HyperellipticCurve
{
public:
    const std::vector<cplx> &branch_points() const noexcept
    {
        return m_points;
    }
    int genus() const noexcept
    {
        return m_genus;
    }
    std::size_t basepoint_index() const noexcept
    {
        return m_base;
    }
    cplx basepoint() const
    {
        return m_points[m_base];
    }
    // Branch points in homology order.
    const std::vector<cplx> &sorted() const noexcept
    {
        return m_sorted;
    }
    const std::vector<Cut> &cuts() const noexcept
    {
        return m_cuts;
    }
    double scale() const noexcept
    {
        return m_scale;
    }

    /// Sheet-1 value y_1(x) of the cut-plane square root.
    cplx sheet_value(cplx x) const
    {
        cplx y(1, 0);
        for (const auto &c : m_cuts) {
            y *= c.factor(x);
        }
        return y;
    }

    /// prod_i (x - e_i).
    cplx polynomial(cplx x) const
    {
        cplx p(1, 0);
        for (auto e : m_points) {
            p *= x - e;
        }
        return p;
    }

    bool is_branch_point(cplx x, double tol) const
    {
        return std::any_of(m_points.begin(), m_points.end(), [&](cplx e) { return std::abs(e - x) <= tol; });
    }

    friend HyperellipticCurve curve_from_branch_points(std::vector<cplx>, std::size_t);

private:
    std::vector<cplx> m_points;
    std::vector<cplx> m_sorted;
    std::vector<Cut> m_cuts;
    int m_genus = 0;
    std::size_t m_base = 0;
    double m_scale = 1;
};

/// A point of the curve: x and the sheet, y = y_sign * y_1(x). Branch points
/// carry at_branch and y = 0.
struct CurvePoint {
    cplx x;
    int y_sign = 1;
    bool at_branch = false;
};

namespace detail
{

inline double cross(cplx u, cplx v)
{
    return u.real() * v.imag() - u.imag() * v.real();
}

// Proper intersection of closed segments [p1,p2] and [q1,q2], ignoring
// contacts at shared endpoints.
inline bool segments_cross(cplx p1, cplx p2, cplx q1, cplx q2)
{
    auto same = [](cplx u, cplx v) { return std::abs(u - v) == 0.0; };
    if (same(p1, q1) || same(p1, q2) || same(p2, q1) || same(p2, q2)) {
        return false;
    }
    const double d1 = cross(p2 - p1, q1 - p1);
    const double d2 = cross(p2 - p1, q2 - p1);
    const double d3 = cross(q2 - q1, p1 - q1);
    const double d4 = cross(q2 - q1, p2 - q1);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    auto on = [](cplx a, cplx b, cplx c) {
        return std::abs(cross(b - a, c - a)) <= 1e-14 * std::abs(b - a) * std::abs(c - a)
               && std::min(a.real(), b.real()) <= c.real() && c.real() <= std::max(a.real(), b.real())
               && std::min(a.imag(), b.imag()) <= c.imag() && c.imag() <= std::max(a.imag(), b.imag());
    };
    return on(p1, p2, q1) || on(p1, p2, q2) || on(q1, q2, p1) || on(q1, q2, p2);
}

} // namespace detail

inline HyperellipticCurve curve_from_branch_points(std::vector<cplx> points, std::size_t basepoint_index)
{
    if (points.size() < 3) {
        throw error(errc::too_few_points, "a hyperelliptic curve needs at least 3 branch points");
    }
    for (auto e : points) {
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
            throw error(errc::non_finite, "branch points must be finite");
        }
    }
    if (basepoint_index >= points.size()) {
        throw error(errc::out_of_range, "basepoint index out of range");
    }
    double scale = 1;
    for (auto e : points) {
        scale = std::max(scale, std::abs(e));
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (std::abs(points[i] - points[j]) <= 1e-10 * scale) {
                throw error(errc::duplicate_branch_points, "branch points are not pairwise distinct");
            }
        }
    }

    HyperellipticCurve c;
    c.m_points = std::move(points);
    c.m_genus = static_cast<int>((c.m_points.size() - 1) / 2);
    c.m_base = basepoint_index;
    c.m_scale = scale;
    c.m_sorted = c.m_points;
    std::sort(c.m_sorted.begin(), c.m_sorted.end(), [](cplx u, cplx v) {
        return u.real() < v.real() || (u.real() == v.real() && u.imag() < v.imag());
    });
    for (std::size_t k = 0; k + 1 < c.m_sorted.size(); k += 2) {
        c.m_cuts.push_back(Cut{c.m_sorted[k], c.m_sorted[k + 1], false});
    }
    if (c.m_sorted.size() % 2 == 1) {
        c.m_cuts.push_back(Cut{c.m_sorted.back(), {}, true});
    }
    return c;
}

/// Periods of x^i dx / y (i = 0..g-1) and the normalized period matrix.
struct CurvePeriods {
    PeriodMatrix tau;
    // Raw periods, rows = differentials, columns = cycles.
    cmat a_periods;
    cmat b_periods;
    // A^{-1}: maps raw integrals to normalized coordinates.
    cmat normalizer;
    double asymmetry = 0;
    double est_error = 0;
    std::size_t nodes = 0;
};

struct AbelJacobiResult {
    AbelianPoint image;
    std::string path_spec;
    double est_error = 0;
};

namespace detail
{

// Far endpoint used when testing the ray cut for crossings.
inline cplx ray_end(const HyperellipticCurve &c)
{
    return c.cuts().back().a + cplx(4 * c.scale() + 1, 0);
}

inline void check_homology_geometry(const HyperellipticCurve &c)
{
    const auto &cuts = c.cuts();
    auto seg = [&](const Cut &k) { return std::pair<cplx, cplx>{k.a, k.ray ? ray_end(c) : k.b}; };
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        for (std::size_t j = i + 1; j < cuts.size(); ++j) {
            auto [p1, p2] = seg(cuts[i]);
            auto [q1, q2] = seg(cuts[j]);
            if (segments_cross(p1, p2, q1, q2)) {
                throw error(errc::homology_construction_failure, "branch cuts intersect");
            }
        }
    }
    // The gaps [e_{2j}, e_{2j+1}] carry the B-cycles and must avoid all cuts.
    const auto &e = c.sorted();
    for (std::size_t j = 1; j + 1 < e.size(); j += 2) {
        for (const auto &k : cuts) {
            auto [q1, q2] = seg(k);
            if (segments_cross(e[j], e[j + 1], q1, q2)) {
                throw error(errc::homology_construction_failure, "B-cycle path crosses a branch cut");
            }
        }
    }
}

// Product of the cut factors except cut `skip`.
inline cplx other_factors(const HyperellipticCurve &c, cplx x, std::size_t skip)
{
    cplx r(1, 0);
    for (std::size_t j = 0; j < c.cuts().size(); ++j) {
        if (j != skip) {
            r *= c.cuts()[j].factor(x);
        }
    }
    return r;
}

// int_{-1}^{1} x^i / R(x) dt / sqrt(1-t^2) on finite cut k, i = 0..g-1.
inline cvec cut_integral(const HyperellipticCurve &c, std::size_t k, const quadrature::rule &r)
{
    const int g = c.genus();
    const Cut &cut = c.cuts()[k];
    const cplx mid = 0.5 * (cut.a + cut.b);
    const cplx hl = 0.5 * (cut.b - cut.a);
    cvec acc = cvec::Zero(g);
    for (std::size_t q = 0; q < r.nodes.size(); ++q) {
        const cplx x = mid + hl * r.nodes[q];
        const cplx f = r.weights[q] / other_factors(c, x, k);
        cplx xp(1, 0);
        for (int i = 0; i < g; ++i) {
            acc[i] += f * xp;
            xp *= x;
        }
    }
    return acc;
}

// int_a^b x^i dx / y_1(x) along a segment that avoids every cut except at
// its endpoints, both of which are branch points.
inline cvec gap_integral(const HyperellipticCurve &c, cplx a, cplx b, const quadrature::rule &r)
{
    const int g = c.genus();
    const cplx mid = 0.5 * (a + b);
    const cplx hl = 0.5 * (b - a);
    cvec acc = cvec::Zero(g);
    for (std::size_t q = 0; q < r.nodes.size(); ++q) {
        const double t = r.nodes[q];
        const cplx x = mid + hl * t;
        const cplx f = r.weights[q] * hl * std::sqrt(1 - t * t) / c.sheet_value(x);
        cplx xp(1, 0);
        for (int i = 0; i < g; ++i) {
            acc[i] += f * xp;
            xp *= x;
        }
    }
    return acc;
}

inline std::pair<cmat, cmat> raw_periods(const HyperellipticCurve &c, std::size_t n)
{
    const int g = c.genus();
    const auto r = quadrature::gauss_chebyshev(n);
    const auto &e = c.sorted();
    const cplx two_i(0, 2);

    std::vector<cvec> cut_int(static_cast<std::size_t>(g));
    for (int k = 0; k < g; ++k) {
        cut_int[static_cast<std::size_t>(k)] = cut_integral(c, static_cast<std::size_t>(k), r);
    }
    // gap j (0-based) joins e[2j+1] and e[2j+2], j = 0..g-1
    std::vector<cvec> gap_int(static_cast<std::size_t>(g));
    for (int j = 0; j < g; ++j) {
        gap_int[static_cast<std::size_t>(j)] = gap_integral(c, e[2 * j + 1], e[2 * j + 2], r);
    }

    cmat a(g, g), b(g, g);
    for (int k = 0; k < g; ++k) {
        // counterclockwise around cut k
        a.col(k) = two_i * cut_int[static_cast<std::size_t>(k)];
        // Intermediate cuts are passed on the left on sheet 1 and on the
        // right on sheet 2; their boundary values coincide and cancel.
        cvec path = cvec::Zero(g);
        for (int j = k; j < g; ++j) {
            path += gap_int[static_cast<std::size_t>(j)];
        }
        b.col(k) = 2.0 * path;
    }
    return {a, b};
}

} // namespace detail

/// Normalized period matrix of the curve.
///
/// Node counts double from 32 until every raw period changes by at most
/// tol/4 (relative to the largest period), up to 2^16 nodes.
inline CurvePeriods period_matrix(const HyperellipticCurve &curve, double tol = 1e-12)
{
    if (!(tol > 0 && tol < 1)) {
        throw error(errc::invalid_eps, "quadrature tolerance must lie in (0, 1)");
    }
    detail::check_homology_geometry(curve);
    const int g = curve.genus();

    std::size_t n = 32;
    auto [a, b] = detail::raw_periods(curve, n);
    double change = 0;
    for (;;) {
        if (n > (std::size_t(1) << 16)) {
            throw error(errc::quadrature_failure, "period quadrature did not converge");
        }
        auto [a2, b2] = detail::raw_periods(curve, 2 * n);
        const double scale = std::max({1.0, max_abs(a2), max_abs(b2)});
        change = std::max(max_abs(a2 - a), max_abs(b2 - b)) / scale;
        a = std::move(a2);
        b = std::move(b2);
        n *= 2;
        if (change <= tol / 4) {
            break;
        }
    }

    Eigen::PartialPivLU<cmat> lu(a);
    if (!(std::abs(lu.determinant()) > 0)) {
        throw error(errc::homology_construction_failure, "A-period matrix is singular");
    }
    const cmat ainv = lu.inverse();
    cmat tau = ainv * b;

    // A single orientation convention is used for every B-cycle, so Im(tau)
    // is either positive or negative definite.
    Eigen::SelfAdjointEigenSolver<rmat> es(0.5 * (rmat(tau.imag()) + rmat(tau.imag()).transpose()),
                                           Eigen::EigenvaluesOnly);
    if (es.eigenvalues().maxCoeff() < 0) {
        tau = -tau;
        b = -b;
    }
    CurvePeriods out{validate_period_matrix(cmat::Identity(g, g) * cplx(0, 1)), a, b, ainv, 0, change, n};
    out.asymmetry = max_abs(tau - tau.transpose());
    if (out.asymmetry > std::max(1e-8, 10 * tol) * std::max(1.0, max_abs(tau))) {
        throw error(errc::homology_construction_failure,
                    "Riemann relations fail: period matrix asymmetry " + std::to_string(out.asymmetry));
    }
    const cmat sym = 0.5 * (tau + tau.transpose());
    try {
        out.tau = validate_period_matrix(sym);
    } catch (const error &) {
        throw error(errc::homology_construction_failure, "Riemann relations fail: Im(tau) is not positive definite");
    }
    out.est_error = change * std::max(1.0, max_abs(ainv)) * std::max({1.0, max_abs(a), max_abs(b)});
    return out;
}

namespace detail
{

// Analytic continuation of s = sqrt(G(u)) from (u0, s0) to u1: take the root
// closest to the previous value, halving the step whenever the jump exceeds
// half the previous modulus.
template <typename G>
cplx continue_sqrt(const G &gfun, double u0, cplx s0, double u1, int depth = 0)
{
    const cplx cand = std::sqrt(gfun(u1));
    const cplx pick = std::abs(cand - s0) <= std::abs(cand + s0) ? cand : -cand;
    if (std::abs(pick - s0) <= 0.5 * std::abs(s0)) {
        return pick;
    }
    if (depth > 48) {
        throw error(errc::quadrature_failure, "sheet tracking failed: path runs into a branch point");
    }
    const double um = 0.5 * (u0 + u1);
    const cplx sm = continue_sqrt(gfun, u0, s0, um, depth + 1);
    return continue_sqrt(gfun, um, sm, u1, depth + 1);
}

struct segment_result {
    cvec integral;
    cplx y_end;
};

// int x^i dx / y along [a, b], x(u) = a + (b-a) sin^2(pi u / 2), with y
// continued from y_start (ignored when a is a branch point). Branch-point
// endpoints are factored out of y so the integrand stays smooth.
inline segment_result segment_integral(const HyperellipticCurve &c, cplx a, cplx b, bool a_branch, bool b_branch,
                                       cplx y_start, const quadrature::rule &r)
{
    const int g = c.genus();
    const double btol = 1e-12 * c.scale();
    auto xof = [&](double u) {
        const double s = std::sin(0.5 * std::numbers::pi * u);
        return a + (b - a) * (s * s);
    };
    auto gfun = [&](double u) {
        const cplx x = xof(u);
        cplx p(1, 0);
        for (auto e : c.branch_points()) {
            if ((a_branch && std::abs(e - a) <= btol) || (b_branch && std::abs(e - b) <= btol)) {
                continue;
            }
            p *= x - e;
        }
        return p;
    };
    const cplx sa = std::sqrt(b - a);
    const cplx sb = std::sqrt(a - b);
    auto fa = [&](double u) { return a_branch ? sa * std::sin(0.5 * std::numbers::pi * u) : cplx(1, 0); };
    auto fb = [&](double u) { return b_branch ? sb * std::cos(0.5 * std::numbers::pi * u) : cplx(1, 0); };

    cplx s = a_branch ? std::sqrt(gfun(0.0)) : y_start / fb(0.0);
    double u = 0;
    cvec acc = cvec::Zero(g);
    for (std::size_t q = 0; q < r.nodes.size(); ++q) {
        const double uq = r.nodes[q];
        s = continue_sqrt(gfun, u, s, uq);
        u = uq;
        const cplx x = xof(uq);
        const cplx dx = (b - a) * (0.5 * std::numbers::pi * std::sin(std::numbers::pi * uq));
        const cplx f = r.weights[q] * dx / (fa(uq) * fb(uq) * s);
        cplx xp(1, 0);
        for (int i = 0; i < g; ++i) {
            acc[i] += f * xp;
            xp *= x;
        }
    }
    s = continue_sqrt(gfun, u, s, 1.0);
    return {acc, b_branch ? cplx(0, 0) : fa(1.0) * s};
}

} // namespace detail

/// Abel-Jacobi image of p along the polygon basepoint -> waypoints -> p.x,
/// reduced modulo the lattice. Waypoints must avoid the branch points.
inline AbelJacobiResult abel_jacobi_along(const HyperellipticCurve &curve, const CurvePeriods &periods,
                                          const CurvePoint &p, const std::vector<cplx> &waypoints,
                                          double tol = 1e-12)
{
    if (!(tol > 0 && tol < 1)) {
        throw error(errc::invalid_eps, "quadrature tolerance must lie in (0, 1)");
    }
    if (p.y_sign != 1 && p.y_sign != -1) {
        throw error(errc::out_of_range, "y_sign must be +1 or -1");
    }
    const double btol = 1e-10 * curve.scale();
    if (p.at_branch && !curve.is_branch_point(p.x, btol)) {
        throw error(errc::out_of_range, "point flagged at_branch is not a branch point");
    }
    const int g = curve.genus();
    const cplx p0 = curve.basepoint();
    const bool end_branch = p.at_branch || curve.is_branch_point(p.x, btol);

    std::ostringstream spec;
    spec.precision(17);
    spec << "polygon " << p0;
    if (std::abs(p.x - p0) <= btol) {
        AbelJacobiResult res{reduce(AbelianPoint{cvec::Zero(g), false}, periods.tau), spec.str() + " (empty)", 0};
        return res;
    }

    std::vector<cplx> verts{p0};
    verts.insert(verts.end(), waypoints.begin(), waypoints.end());
    verts.push_back(p.x);
    for (std::size_t i = 1; i < verts.size(); ++i) {
        spec << " -> " << verts[i];
    }

    auto run = [&](std::size_t n) {
        const auto r = quadrature::gauss_legendre01(n);
        cvec total = cvec::Zero(g);
        cplx y(0, 0);
        for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
            const bool last = i + 2 == verts.size();
            auto seg = detail::segment_integral(curve, verts[i], verts[i + 1], i == 0, last && end_branch, y, r);
            total += seg.integral;
            y = seg.y_end;
        }
        return std::pair<cvec, cplx>{total, y};
    };

    std::size_t n = 24;
    auto [raw, y_end] = run(n);
    double change = 0;
    for (;;) {
        if (n > 4096) {
            throw error(errc::quadrature_failure, "Abel-Jacobi quadrature did not converge");
        }
        auto [raw2, y2] = run(2 * n);
        change = max_abs(periods.normalizer * (raw2 - raw));
        raw = std::move(raw2);
        y_end = y2;
        n *= 2;
        if (change <= tol / 4) {
            break;
        }
    }

    cvec image = periods.normalizer * raw;
    bool flipped = false;
    if (!end_branch) {
        // The continuation reached either p or its hyperelliptic conjugate;
        // with a Weierstrass basepoint AJ(conj p) = -AJ(p).
        const cplx target = static_cast<double>(p.y_sign) * curve.sheet_value(p.x);
        if (std::abs(y_end - target) > std::abs(y_end + target)) {
            image = -image;
            flipped = true;
        }
    }
    spec << (flipped ? ", conjugate sheet" : ", direct sheet") << ", nodes " << n;
    return AbelJacobiResult{reduce(AbelianPoint{image, false}, periods.tau), spec.str(), change};
}

/// Abel-Jacobi image along the straight segment from the basepoint, bent
/// around any branch point lying close to it.
inline AbelJacobiResult abel_jacobi(const HyperellipticCurve &curve, const CurvePeriods &periods,
                                    const CurvePoint &p, double tol = 1e-12)
{
    const cplx p0 = curve.basepoint();
    const cplx d = p.x - p0;
    std::vector<cplx> way;
    if (std::abs(d) > 0) {
        const double clearance = 0.05 * std::abs(d);
        for (auto e : curve.branch_points()) {
            if (e == p0 || std::abs(e - p.x) <= 1e-10 * curve.scale()) {
                continue;
            }
            const double t = ((e - p0) * std::conj(d)).real() / std::norm(d);
            if (t <= 0 || t >= 1) {
                continue;
            }
            const double dist = std::abs(p0 + t * d - e);
            if (dist < clearance) {
                // detour through a point beside the obstruction
                const cplx normal = cplx(0, 1) * d / std::abs(d);
                const double side = detail::cross(d, e - p0) >= 0 ? -1.0 : 1.0;
                way.push_back(e + side * normal * (0.25 * std::abs(d)));
                break;
            }
        }
    }
    return abel_jacobi_along(curve, periods, p, way, tol);
}

} // namespace trisecant

#endif
