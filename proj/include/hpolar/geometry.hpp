#pragma once

#include "hpolar/body.hpp"

#include <cmath>
#include <limits>

namespace hpolar {

namespace detail {

inline Mat hpoly_vertices(const HPolytope& hp) {
    const int n = hp.dim();
    const int m = static_cast<int>(hp.normals().rows());
    if (n > 4) throw numeric_error("hpolytope vertex enumeration limited to n <= 4");
    if (hull::detail::binomial_guard(m, n) > 2e5)
        throw numeric_error("hpolytope vertex enumeration work cap exceeded");

    const double scale = std::max(1.0, hp.offsets().maxCoeff());
    const double tol = 1e-9 * scale;

    std::vector<Vec> verts;
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    do {
        Mat a(n, n);
        Vec c(n);
        for (int i = 0; i < n; ++i) {
            a.row(i) = hp.normals().row(idx[static_cast<std::size_t>(i)]);
            c[i] = hp.offsets()[idx[static_cast<std::size_t>(i)]];
        }
        Eigen::FullPivLU<Mat> lu(a);
        lu.setThreshold(1e-9);
        if (lu.rank() != n) continue;
        Vec x = lu.solve(c);
        if ((hp.normals() * x - hp.offsets()).maxCoeff() <= tol) {
            bool dup = false;
            for (const Vec& v : verts)
                if ((v - x).cwiseAbs().maxCoeff() <= 1e-8 * scale) { dup = true; break; }
            if (!dup) verts.push_back(x);
        }
    } while (hull::detail::next_combination(idx, m));

    if (verts.empty()) throw numeric_error("hpolytope: no feasible basic solution found");
    Mat out(static_cast<int>(verts.size()), n);
    for (std::size_t i = 0; i < verts.size(); ++i) out.row(static_cast<int>(i)) = verts[i];
    return out;
}

inline double support_hpoly_lp(const HPolytope& hp, const Vec& u) {
    const int n = hp.dim();
    lp::Problem p;
    p.c.resize(2 * n);
    p.c << u, -u;
    p.A.resize(hp.normals().rows(), 2 * n);
    p.A << hp.normals(), -hp.normals();
    p.b = hp.offsets();
    p.E.resize(0, 2 * n);
    p.f.resize(0);
    auto sol = lp::maximize(p);
    if (sol.status == lp::Status::unbounded)
        throw numeric_error("hpolytope support: unbounded direction");
    if (sol.status != lp::Status::optimal)
        throw numeric_error("hpolytope support: solver failed");
    return sol.objective;
}

/// Largest t with t*u inside conv(V), via LP over hull coefficients.
inline double ray_scale_vpoly_lp(const VPolytope& vp, const Vec& u) {
    const int n = vp.dim();
    const int k = static_cast<int>(vp.vertices().rows());
    lp::Problem p;
    p.c = Vec::Zero(k + 1);
    p.c[k] = 1.0;
    p.A.resize(0, k + 1);
    p.b.resize(0);
    p.E = Mat::Zero(n + 1, k + 1);
    p.E.block(0, 0, n, k) = vp.vertices().transpose();
    p.E.block(0, k, n, 1) = -u;
    p.E.row(n).head(k).setOnes();
    p.f = Vec::Zero(n + 1);
    p.f[n] = 1.0;
    auto sol = lp::maximize(p);
    if (sol.status != lp::Status::optimal)
        throw numeric_error("vpolytope ray shoot: solver failed");
    return sol.objective;
}

inline bool contains_vpoly_lp(const VPolytope& vp, const Vec& x) {
    const int n = vp.dim();
    const int k = static_cast<int>(vp.vertices().rows());
    lp::Problem p;
    p.c = Vec::Zero(k);
    p.A.resize(0, k);
    p.b.resize(0);
    p.E = Mat::Zero(n + 1, k);
    p.E.block(0, 0, n, k) = vp.vertices().transpose();
    p.E.row(n).setOnes();
    p.f.resize(n + 1);
    p.f << x, 1.0;
    return lp::maximize(p).status == lp::Status::optimal;
}

} // namespace detail

/// sup{x . u : x in X}.
inline double support(const Body& body, const Vec& u) {
    require_dim(body.dim(), static_cast<int>(u.size()), "support");
    if (u.cwiseAbs().maxCoeff() == 0.0) throw numeric_error("support: zero direction");

    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ellipsoid>) {
                Vec w = s.form().llt().solve(u);
                return std::sqrt(s.hbar() * u.dot(w));
            } else if constexpr (std::is_same_v<T, Box>) {
                return s.half_widths().dot(u.cwiseAbs());
            } else if constexpr (std::is_same_v<T, VPolytope>) {
                return (s.vertices() * u).maxCoeff();
            } else {
                const int n = s.dim();
                const int m = static_cast<int>(s.normals().rows());
                if (n <= 4 && hull::detail::binomial_guard(m, n) <= 2e5)
                    return (detail::hpoly_vertices(s) * u).maxCoeff();
                return detail::support_hpoly_lp(s, u);
            }
        },
        body.shape);
}

/// Radius of the smallest origin-centered ball containing the body
/// (an upper bound for H-polytopes). Used to scale geometric tolerances.
inline double circumradius(const Body& body) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ellipsoid>) {
                Eigen::SelfAdjointEigenSolver<Mat> es(s.form(), Eigen::EigenvaluesOnly);
                return std::sqrt(s.hbar() / es.eigenvalues().minCoeff());
            } else if constexpr (std::is_same_v<T, Box>) {
                return s.half_widths().norm();
            } else if constexpr (std::is_same_v<T, VPolytope>) {
                return s.vertices().rowwise().norm().maxCoeff();
            } else {
                double sq = 0.0;
                for (int i = 0; i < s.dim(); ++i) {
                    Vec e = Vec::Zero(s.dim());
                    e[i] = 1.0;
                    double w = support(Body(s, 1.0), e);
                    sq += w * w;
                }
                return std::sqrt(sq);
            }
        },
        body.shape);
}

inline double default_tolerance(const Body& body) {
    return kGeomTol * std::max(1.0, circumradius(body));
}

/// Half-widths of the axis-aligned bounding box (symmetric bodies).
inline Vec bounding_half_widths(const Body& body) {
    const int n = body.dim();
    Vec hw(n);
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e[i] = 1.0;
        hw[i] = support(body, e);
    }
    return hw;
}

/// Signed outward residual of the defining inequalities in length units:
/// <= 0 inside, > 0 outside. NaN when only an LP yes/no answer exists.
inline double membership_residual(const Body& body, const Vec& x) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ellipsoid>) {
                double gauge = std::sqrt(std::max(0.0, s.gauge_squared(x)));
                if (gauge <= 1e-300) return -std::numeric_limits<double>::infinity();
                return (gauge - 1.0) * x.norm() / gauge;
            } else if constexpr (std::is_same_v<T, Box>) {
                return (x.cwiseAbs() - s.half_widths()).maxCoeff();
            } else if constexpr (std::is_same_v<T, VPolytope>) {
                if (s.is_cross_polytope()) {
                    double gauge = (x.cwiseAbs().cwiseQuotient(s.cross_radii())).sum();
                    if (gauge <= 1e-300) return -std::numeric_limits<double>::infinity();
                    return (gauge - 1.0) * x.norm() / gauge;
                }
                if (s.has_facets())
                    return (s.facet_normals() * x - s.facet_offsets()).maxCoeff();
                return std::numeric_limits<double>::quiet_NaN();
            } else {
                Vec slack = s.normals() * x - s.offsets();
                double worst = -std::numeric_limits<double>::infinity();
                for (int i = 0; i < slack.size(); ++i)
                    worst = std::max(worst, slack[i] / s.normals().row(i).norm());
                return worst;
            }
        },
        body.shape);
}

/// Membership up to tolerance tol on the defining inequalities.
inline bool contains(const Body& body, const Vec& x, double tol) {
    require_dim(body.dim(), static_cast<int>(x.size()), "contains");
    double r = membership_residual(body, x);
    if (std::isnan(r)) {
        // V-polytope without cached facets: exact linear feasibility.
        return detail::contains_vpoly_lp(std::get<VPolytope>(body.shape), x);
    }
    return r <= tol;
}

inline bool contains(const Body& body, const Vec& x) {
    return contains(body, x, default_tolerance(body));
}

/// The hbar-polar dual X^h = {p : p . x <= h for all x in X}.
inline Body polar_dual(const Body& body, double hbar) {
    if (!(hbar > 0.0)) throw invalid_body_error("polar_dual: hbar must be positive");
    return std::visit(
        [&](const auto& s) -> Body {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ellipsoid>) {
                // {A x.x <= h} -> {A^{-1} p.p <= h} once A is read at scale h.
                return Body(Ellipsoid(spd_inverse(s.form_at(hbar)), hbar));
            } else if constexpr (std::is_same_v<T, Box>) {
                Vec radii = hbar * s.half_widths().cwiseInverse();
                Body cross = make_cross_polytope(radii, hbar);
                return cross;
            } else if constexpr (std::is_same_v<T, VPolytope>) {
                Vec offsets = Vec::Constant(s.vertices().rows(), hbar);
                return Body(HPolytope(s.vertices(), offsets), hbar);
            } else {
                Mat verts(s.normals().rows(), s.dim());
                for (int i = 0; i < s.normals().rows(); ++i)
                    verts.row(i) = (hbar / s.offsets()[i]) * s.normals().row(i);
                return Body(VPolytope(verts), hbar);
            }
        },
        body.shape);
}

inline Body polar_dual(const Body& body) { return polar_dual(body, body.hbar); }

/// Image M X of the body under an invertible linear map.
inline Body apply_linear(const Body& body, const Mat& m) {
    const int n = body.dim();
    if (m.rows() != n || m.cols() != n) throw dimension_error("apply_linear: matrix shape");
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    if (sv.minCoeff() <= 1e-12 * sv.maxCoeff())
        throw numeric_error("apply_linear: matrix is singular");
    Mat minv = svd.solve(Mat::Identity(n, n));

    return std::visit(
        [&](const auto& s) -> Body {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ellipsoid>) {
                Mat a = minv.transpose() * s.form() * minv;
                return Body(Ellipsoid(0.5 * (a + a.transpose()), s.hbar()));
            } else if constexpr (std::is_same_v<T, Box>) {
                const int corners = 1 << n;
                if (n > 16) throw numeric_error("apply_linear: box corner blowup beyond n=16");
                Mat verts(corners, n);
                for (int c = 0; c < corners; ++c) {
                    Vec v(n);
                    for (int j = 0; j < n; ++j)
                        v[j] = ((c >> j) & 1) ? s.half_widths()[j] : -s.half_widths()[j];
                    verts.row(c) = (m * v).transpose();
                }
                return Body(VPolytope(verts), body.hbar);
            } else if constexpr (std::is_same_v<T, VPolytope>) {
                Mat verts = s.vertices() * m.transpose();
                return Body(VPolytope(verts), body.hbar);
            } else {
                Mat normals = s.normals() * minv;  // rows become M^{-T} a_j
                return Body(HPolytope(normals, s.offsets()), body.hbar);
            }
        },
        body.shape);
}

enum class InclusionMode { exact, sampled };

namespace detail {

inline std::optional<Mat> vertex_representation(const Body& body) {
    return std::visit(
        [&](const auto& s) -> std::optional<Mat> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, VPolytope>) {
                return s.vertices();
            } else if constexpr (std::is_same_v<T, Box>) {
                const int n = s.dim();
                if (n > 16) return std::nullopt;
                Mat verts(1 << n, n);
                for (int c = 0; c < (1 << n); ++c)
                    for (int j = 0; j < n; ++j)
                        verts(c, j) = ((c >> j) & 1) ? s.half_widths()[j] : -s.half_widths()[j];
                return verts;
            } else if constexpr (std::is_same_v<T, HPolytope>) {
                if (s.dim() <= 4) return hpoly_vertices(s);
                return std::nullopt;
            } else {
                return std::nullopt;
            }
        },
        body.shape);
}

} // namespace detail

/// Inclusion inner subset-of outer. Exact mode uses the eigenvalue criterion
/// for ellipsoid pairs and vertex membership when the inner body has a vertex
/// representation; sampled mode compares support functions over n_dirs
/// quasi-uniform directions and may return false positives.
inline bool is_subset(const Body& inner, const Body& outer,
                      InclusionMode mode = InclusionMode::exact, int n_dirs = 256) {
    require_dim(inner.dim(), outer.dim(), "is_subset");
    const int n = inner.dim();

    if (mode == InclusionMode::exact) {
        const auto* ein = std::get_if<Ellipsoid>(&inner.shape);
        const auto* eout = std::get_if<Ellipsoid>(&outer.shape);
        if (ein && eout) {
            // inner subset outer iff A_out <= A_in in the Loewner order,
            // i.e. lambda_max(A_out^{1/2} A_in^{-1} A_out^{1/2}) <= 1.
            Mat a_in = ein->form() / ein->hbar();
            Mat a_out = eout->form() / eout->hbar();
            Mat half = spd_sqrt(a_out);
            Mat middle = half * spd_inverse(a_in) * half;
            Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (middle + middle.transpose()),
                                                  Eigen::EigenvaluesOnly);
            return es.eigenvalues().maxCoeff() <= 1.0 + 1e-10;
        }
        if (auto verts = detail::vertex_representation(inner)) {
            double tol = default_tolerance(outer);
            for (int i = 0; i < verts->rows(); ++i)
                if (!contains(outer, verts->row(i).transpose(), tol)) return false;
            return true;
        }
        throw numeric_error("is_subset: no exact criterion for this body pair");
    }

    double tol = kGeomTol * std::max(1.0, circumradius(outer));
    for (const Vec& u : direction_set(n, n_dirs, 0x51ab5e1ful)) {
        if (support(inner, u) > support(outer, u) + tol) return false;
    }
    return true;
}

/// Scale t such that t*u lies on the boundary.
inline double boundary_scale(const Body& body, const Vec& u) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Ellipsoid>) {
                return std::sqrt(s.hbar() / u.dot(s.form() * u));
            } else if constexpr (std::is_same_v<T, Box>) {
                double t = std::numeric_limits<double>::infinity();
                for (int j = 0; j < s.dim(); ++j)
                    if (u[j] != 0.0) t = std::min(t, s.half_widths()[j] / std::abs(u[j]));
                return t;
            } else if constexpr (std::is_same_v<T, VPolytope>) {
                if (s.is_cross_polytope())
                    return 1.0 / (u.cwiseAbs().cwiseQuotient(s.cross_radii())).sum();
                if (s.has_facets()) {
                    double t = std::numeric_limits<double>::infinity();
                    Vec proj = s.facet_normals() * u;
                    for (int f = 0; f < proj.size(); ++f)
                        if (proj[f] > 0.0) t = std::min(t, s.facet_offsets()[f] / proj[f]);
                    return t;
                }
                return detail::ray_scale_vpoly_lp(s, u);
            } else {
                double t = std::numeric_limits<double>::infinity();
                Vec proj = s.normals() * u;
                for (int f = 0; f < proj.size(); ++f)
                    if (proj[f] > 0.0) t = std::min(t, s.offsets()[f] / proj[f]);
                return t;
            }
        },
        body.shape);
}

/// Deterministic boundary sample: random directions scaled to the boundary.
inline std::vector<Vec> sample_boundary(const Body& body, int count, std::uint64_t seed) {
    if (count < 1) throw numeric_error("sample_boundary: count must be >= 1");
    const int n = body.dim();
    Rng rng(seed);
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Vec u = random_direction(n, rng);
        double t = boundary_scale(body, u);
        if (!std::isfinite(t) || t <= 0.0)
            throw numeric_error("sample_boundary: degenerate ray scale");
        pts.push_back(t * u);
    }
    return pts;
}

} // namespace hpolar
