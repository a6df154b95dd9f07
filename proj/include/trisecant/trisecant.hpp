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

// Determinantal theta equations for a finite set H = {c_1, ..., c_{n+2}} of
// points on a principally polarized abelian variety.
//
// Given xi with 2 xi = c_1 + ... + c_{n+2}, the locus in z is cut out by the
// (n+2)-minors of the 2^g x (n+2) matrix
//
//   M[sigma][j] = theta_sigma(z - xi + c_j).
//
// For n = 1 this is the trisecant condition: with x = z - xi the Kummer
// points K(x + c_j) = (theta_sigma(x + c_j))_sigma are collinear. Vanishing is
// decided on normalized quantities (minors over column-norm products,
// singular value ratios of unit columns), since raw theta values vary by
// orders of magnitude across the torus.

#ifndef TRISECANT_TRISECANT_HPP
#define TRISECANT_TRISECANT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <trisecant/error.hpp>
#include <trisecant/ppav.hpp>
#include <trisecant/theta.hpp>

namespace trisecant
{

struct PointConfiguration {
    std::vector<AbelianPoint> points;
    AbelianPoint xi;

    int n() const noexcept
    {
        return static_cast<int>(points.size()) - 2;
    }
    std::size_t size() const noexcept
    {
        return points.size();
    }
    cvec sum() const
    {
        cvec s = cvec::Zero(xi.dim());
        for (const auto &c : points) {
            s += c.z;
        }
        return s;
    }
};

inline constexpr double config_tolerance = 1e-9;

inline PointConfiguration make_configuration(const PeriodMatrix &tau, std::vector<AbelianPoint> points,
                                             const AbelianPoint &xi)
{
    const int g = tau.genus();
    if (points.size() < 2) {
        throw error(errc::config_invalid, "H needs at least 2 points");
    }
    for (const auto &c : points) {
        if (c.dim() != g || xi.dim() != g) {
            throw error(errc::dimension_mismatch, "configuration point dimension does not match the genus");
        }
        if (!c.z.allFinite()) {
            throw error(errc::non_finite, "configuration point has non-finite coordinates");
        }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (torus_distance(points[i].z, points[j].z, tau) <= config_tolerance) {
                throw error(errc::config_invalid, "points of H are not pairwise distinct modulo the lattice");
            }
        }
    }
    PointConfiguration cfg{std::move(points), xi};
    if (torus_distance(2.0 * xi.z, cfg.sum(), tau) > config_tolerance) {
        throw error(errc::config_invalid, "2 xi differs from c_1 + ... + c_{n+2} modulo the lattice");
    }
    return cfg;
}

/// Configuration with xi the first of the halve_point() solutions.
inline PointConfiguration make_configuration(const PeriodMatrix &tau, std::vector<AbelianPoint> points)
{
    if (points.empty()) {
        throw error(errc::config_invalid, "H needs at least 2 points");
    }
    cvec s = cvec::Zero(tau.genus());
    for (const auto &c : points) {
        if (c.dim() != tau.genus()) {
            throw error(errc::dimension_mismatch, "configuration point dimension does not match the genus");
        }
        s += c.z;
    }
    const auto xis = halve_point(AbelianPoint{s, false}, tau);
    return make_configuration(tau, std::move(points), xis.front());
}

struct ThetaMatrix {
    cmat entries;
    AbelianPoint z;
    double eps = 0;
};

inline ThetaMatrix build_theta_matrix(const PeriodMatrix &tau, const PointConfiguration &config, const AbelianPoint &z,
                                      double eps = 1e-12)
{
    if (z.dim() != tau.genus() || config.xi.dim() != tau.genus()) {
        throw error(errc::config_invalid, "evaluation point or configuration has the wrong dimension");
    }
    EvalParams params;
    params.eps = eps;
    const int g = tau.genus();
    ThetaMatrix m{cmat(basis_size(g), static_cast<Eigen::Index>(config.size())), z, eps};
    for (std::size_t j = 0; j < config.size(); ++j) {
        const AbelianPoint arg{z.z - config.xi.z + config.points[j].z, false};
        m.entries.col(static_cast<Eigen::Index>(j)) = second_order_basis(arg, tau, params);
    }
    return m;
}

struct MinorSystem {
    int g = 0;
    int k = 0;
    std::vector<std::vector<unsigned>> row_subsets;

    /// One line per equation: det over rows {sigma...} of theta_sigma(z - xi + c_j).
    std::string listing() const
    {
        std::ostringstream os;
        for (const auto &rows : row_subsets) {
            os << "det over rows {";
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i) {
                    os << ", ";
                }
                for (int b = g - 1; b >= 0; --b) {
                    os << ((rows[i] >> b) & 1u);
                }
            }
            os << "} of theta_sigma(z - xi + c_j), j = 1.." << k << " = 0\n";
        }
        return os.str();
    }
};

inline std::size_t binomial(std::size_t n, std::size_t k)
{
    if (k > n) {
        return 0;
    }
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

/// All strictly increasing k-subsets of {0, ..., 2^g - 1}, lexicographic.
/// Tuples with a repeated sigma give identically vanishing determinants and
/// are left out.
inline MinorSystem minor_system(int g, int k)
{
    if (g < 1 || g > 16) {
        throw error(errc::out_of_range, "genus out of range");
    }
    const int rows = 1 << g;
    if (k < 2) {
        throw error(errc::out_of_range, "minor size must be at least 2");
    }
    if (k > rows) {
        throw error(errc::k_too_large, "k = " + std::to_string(k) + " exceeds 2^g = " + std::to_string(rows)
                                           + ": every point satisfies the system");
    }
    MinorSystem sys{g, k, {}};
    std::vector<unsigned> cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        cur[static_cast<std::size_t>(i)] = static_cast<unsigned>(i);
    }
    for (;;) {
        sys.row_subsets.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == static_cast<unsigned>(rows - k + i)) {
            --i;
        }
        if (i < 0) {
            break;
        }
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return sys;
}

struct EquationReport {
    std::vector<cplx> minors;
    // |minor| / product of the column norms of the selected submatrix
    std::vector<double> normalized;
    double max_normalized = 0;
};

inline EquationReport evaluate_equations(const cmat &m, const MinorSystem &sys)
{
    if (m.rows() != (Eigen::Index(1) << sys.g) || m.cols() != sys.k) {
        throw error(errc::shape_mismatch, "matrix shape does not match the minor system");
    }
    EquationReport rep;
    rep.minors.reserve(sys.row_subsets.size());
    rep.normalized.reserve(sys.row_subsets.size());
    cmat sub(sys.k, sys.k);
    for (const auto &rows : sys.row_subsets) {
        for (int i = 0; i < sys.k; ++i) {
            sub.row(i) = m.row(rows[static_cast<std::size_t>(i)]);
        }
        const cplx det = sub.determinant();
        double denom = 1;
        for (int j = 0; j < sys.k; ++j) {
            denom *= sub.col(j).norm();
        }
        denom = std::max(denom, std::numeric_limits<double>::min());
        rep.minors.push_back(det);
        rep.normalized.push_back(std::abs(det) / denom);
        rep.max_normalized = std::max(rep.max_normalized, rep.normalized.back());
    }
    return rep;
}

inline EquationReport evaluate_equations(const ThetaMatrix &m, const MinorSystem &sys)
{
    return evaluate_equations(m.entries, sys);
}

template <typename Derived>
rvec singular_values(const Eigen::MatrixBase<Derived> &m)
{
    using plain = typename Derived::PlainObject;
    Eigen::JacobiSVD<plain> svd(m.eval());
    return svd.singularValues();
}

/// Number of singular values above rel_tol times the largest.
template <typename Derived>
int numeric_rank(const Eigen::MatrixBase<Derived> &m, double rel_tol)
{
    if (!(rel_tol > 0 && rel_tol < 1)) {
        throw error(errc::invalid_eps, "rel_tol must lie in (0, 1)");
    }
    if (m.size() == 0) {
        return 0;
    }
    const rvec s = singular_values(m);
    if (!(s[0] > 0)) {
        return 0;
    }
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s[i] > rel_tol * s[0]) {
            ++r;
        }
    }
    return r;
}

struct KummerPoint {
    cvec coords;

    int dim() const noexcept
    {
        return static_cast<int>(coords.size());
    }
};

/// Angle between the complex lines spanned by a and b.
inline double projective_angle(const cvec &a, const cvec &b)
{
    const double na = a.norm();
    const double nb = b.norm();
    if (!(na > 0) || !(nb > 0)) {
        return std::numbers::pi / 2;
    }
    const cvec ua = a / na;
    const cvec ub = b / nb;
    const cvec perp = ub - ua * ua.dot(ub);
    return std::asin(std::min(1.0, perp.norm()));
}

inline KummerPoint kummer_point(const AbelianPoint &z, const PeriodMatrix &tau, double eps = 1e-12)
{
    EvalParams params;
    params.eps = eps;
    KummerPoint k{second_order_basis(z, tau, params)};
    if (!(k.coords.cwiseAbs().maxCoeff() > 0)) {
        throw error(errc::all_coordinates_vanish, "all second-order theta values vanish");
    }
    return k;
}

struct CollinearityResult {
    bool collinear = false;
    // sigma_3 / sigma_1 of the unit-normalized coordinate columns
    double witness = 0;
};

namespace detail
{

inline cmat unit_columns(std::span<const KummerPoint> pts)
{
    cmat m(pts.front().dim(), static_cast<Eigen::Index>(pts.size()));
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (pts[j].dim() != pts.front().dim()) {
            throw error(errc::dimension_mismatch, "Kummer points of different dimension");
        }
        const double nrm = pts[j].coords.norm();
        if (!(nrm > 0)) {
            throw error(errc::all_coordinates_vanish, "Kummer point with all coordinates zero");
        }
        m.col(static_cast<Eigen::Index>(j)) = pts[j].coords / nrm;
    }
    return m;
}

inline double third_singular_ratio(const cmat &m)
{
    const rvec s = singular_values(m);
    if (s.size() < 3 || !(s[0] > 0)) {
        return 0;
    }
    return s[2] / s[0];
}

} // namespace detail

/// Collinearity in P^N: the unit-normalized coordinate vectors span at most a
/// plane. The witness is sigma_3 / sigma_1 (0 when N < 2).
inline CollinearityResult collinearity_test(std::span<const KummerPoint> pts, double rel_tol)
{
    if (pts.size() < 3) {
        throw error(errc::dimension_mismatch, "collinearity needs at least three points");
    }
    const cmat m = detail::unit_columns(pts);
    CollinearityResult r;
    r.witness = detail::third_singular_ratio(m);
    r.collinear = numeric_rank(m, rel_tol) <= 2;
    return r;
}

struct MembershipResult {
    bool member = false;
    double witness = 0;
    double minor_residual = 0;
    bool routes_agree = true;
};

/// Is 2x + c_1 + c_2 + c_3 on the trisecant locus? Decided by collinearity of
/// K(x + c_j) and cross-checked by the minors of M at z = x + xi (both routes
/// use rel_tol as threshold).
inline MembershipResult trisecant_membership(const PeriodMatrix &tau, const PointConfiguration &config,
                                             const AbelianPoint &x, double rel_tol, double eps = 1e-12)
{
    if (config.size() != 3) {
        throw error(errc::config_invalid, "trisecant membership needs |H| = 3");
    }
    std::vector<KummerPoint> pts;
    for (const auto &c : config.points) {
        pts.push_back(kummer_point(AbelianPoint{x.z + c.z, false}, tau, eps));
    }
    const auto col = collinearity_test(pts, rel_tol);

    MembershipResult r;
    r.member = col.collinear;
    r.witness = col.witness;
    if (basis_size(tau.genus()) >= 3) {
        const ThetaMatrix m = build_theta_matrix(tau, config, AbelianPoint{x.z + config.xi.z, false}, eps);
        r.minor_residual = evaluate_equations(m, minor_system(tau.genus(), 3)).max_normalized;
    }
    r.routes_agree = (r.minor_residual <= rel_tol) == r.member;
    return r;
}

struct TranslateSearchResult {
    double min_witness = std::numeric_limits<double>::infinity();
    double min_minor_residual = std::numeric_limits<double>::infinity();
    std::size_t best_xi = 0;
    std::size_t best_shift = 0;
    bool routes_agree = true;
};

/// Minimum of the membership residuals over every xi with 2 xi = sum c_j and
/// every two-torsion shift of x: the half-period conventions the equations
/// leave open.
inline TranslateSearchResult translate_search(const PeriodMatrix &tau, const std::vector<AbelianPoint> &h,
                                              const AbelianPoint &x, double rel_tol, double eps = 1e-12)
{
    cvec s = cvec::Zero(tau.genus());
    for (const auto &c : h) {
        s += c.z;
    }
    const auto xis = halve_point(AbelianPoint{s, false}, tau);
    const auto shifts = two_torsion_points(tau);
    TranslateSearchResult best;
    for (std::size_t i = 0; i < xis.size(); ++i) {
        const auto cfg = make_configuration(tau, h, xis[i]);
        for (std::size_t t = 0; t < shifts.size(); ++t) {
            const auto r = trisecant_membership(tau, cfg, AbelianPoint{x.z + shifts[t].z, false}, rel_tol, eps);
            best.routes_agree = best.routes_agree && r.routes_agree;
            best.min_minor_residual = std::min(best.min_minor_residual, r.minor_residual);
            if (r.witness < best.min_witness) {
                best.min_witness = r.witness;
                best.best_xi = i;
                best.best_shift = t;
            }
        }
    }
    return best;
}

/// Index i = 2g - 2 - m g + deg H, defined when 2g - 2 >= m g - deg H >= g - 1.
inline int brill_noether_index(int g, int m, int deg_h)
{
    if (g < 1 || m < 1 || deg_h < 1) {
        throw error(errc::out_of_range, "g, m and deg H must be positive");
    }
    const long long mid = static_cast<long long>(m) * g - deg_h;
    if (mid > 2LL * g - 2) {
        throw error(errc::out_of_range, "upper bound violated: m g - deg H > 2g - 2");
    }
    if (mid < static_cast<long long>(g) - 1) {
        throw error(errc::out_of_range, "lower bound violated: m g - deg H < g - 1");
    }
    return static_cast<int>(2LL * g - 2 - mid);
}

} // namespace trisecant

#endif
