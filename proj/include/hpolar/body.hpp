#pragma once

#include "hpolar/common.hpp"
#include "hpolar/hull.hpp"
#include "hpolar/linprog.hpp"

#include <optional>
#include <utility>
#include <variant>

namespace hpolar {

/// Centered ellipsoid {x : form x . x <= hbar}.
class Ellipsoid {
public:
    Ellipsoid(Mat form, double hbar) : form_(std::move(form)), hbar_(hbar) {
        if (form_.rows() != form_.cols() || form_.rows() < 1)
            throw invalid_body_error("ellipsoid: form must be square");
        if (!is_symmetric(form_))
            throw invalid_body_error("ellipsoid: form not symmetric within 1e-12");
        form_ = 0.5 * (form_ + form_.transpose());
        double min_eig = 0.0;
        if (!is_spd(form_, &min_eig))
            throw invalid_body_error("ellipsoid: form not positive definite (min eigenvalue " +
                                     std::to_string(min_eig) + ")");
        if (!(hbar_ > 0.0)) throw invalid_body_error("ellipsoid: hbar must be positive");
    }

    int dim() const { return static_cast<int>(form_.rows()); }
    const Mat& form() const { return form_; }
    double hbar() const { return hbar_; }

    /// Form rescaled so the body reads {x : A x . x <= new_hbar}.
    Mat form_at(double new_hbar) const { return form_ * (new_hbar / hbar_); }

    double gauge_squared(const Vec& x) const { return x.dot(form_ * x) / hbar_; }

private:
    Mat form_;
    double hbar_;
};

/// Axis-aligned box, the product of [-a_j, a_j].
class Box {
public:
    explicit Box(Vec half_widths) : half_widths_(std::move(half_widths)) {
        if (half_widths_.size() < 1) throw invalid_body_error("box: empty half-width list");
        if (half_widths_.minCoeff() <= 0.0)
            throw invalid_body_error("box: half-widths must be positive");
    }

    int dim() const { return static_cast<int>(half_widths_.size()); }
    const Vec& half_widths() const { return half_widths_; }

private:
    Vec half_widths_;
};

/// Convex hull of a centrally symmetric vertex set spanning R^n.
///
/// Constructors symmetrize: a vertex whose mirror is missing gets the mirror
/// appended, and the fact is recorded. Facets are enumerated eagerly for
/// n <= 4 so that membership tests are exact and cheap; cross-polytopes
/// (one +/- vertex pair per axis) are recognized in any dimension.
class VPolytope {
public:
    explicit VPolytope(Mat vertices) : vertices_(std::move(vertices)) {
        const int n = static_cast<int>(vertices_.cols());
        if (vertices_.rows() < 1 || n < 1) throw invalid_body_error("vpolytope: no vertices");
        const double scale = std::max(1.0, vertices_.cwiseAbs().maxCoeff());
        const double tol = kSymTol * scale;

        deduplicate(tol);
        symmetrize(tol);

        Eigen::JacobiSVD<Mat> svd(vertices_);
        if (svd.singularValues().minCoeff() <= 1e-10 * scale)
            throw invalid_body_error("vpolytope: vertices do not span R^n (origin not interior)");

        detect_cross(tol);
        if (n <= 4 && !is_cross_) {
            if (auto f = hull::enumerate_facets(vertices_)) {
                facet_normals_ = std::move(f->normals);
                facet_offsets_ = std::move(f->offsets);
                has_facets_ = true;
            }
        }
    }

    int dim() const { return static_cast<int>(vertices_.cols()); }
    const Mat& vertices() const { return vertices_; }
    bool symmetrized() const { return symmetrized_; }

    bool is_cross_polytope() const { return is_cross_; }
    const Vec& cross_radii() const { return cross_radii_; }

    bool has_facets() const { return has_facets_; }
    const Mat& facet_normals() const { return facet_normals_; }
    const Vec& facet_offsets() const { return facet_offsets_; }

private:
    void deduplicate(double tol) {
        std::vector<int> keep;
        for (int i = 0; i < vertices_.rows(); ++i) {
            bool dup = false;
            for (int j : keep)
                if ((vertices_.row(i) - vertices_.row(j)).cwiseAbs().maxCoeff() <= tol) {
                    dup = true;
                    break;
                }
            if (!dup) keep.push_back(i);
        }
        if (static_cast<int>(keep.size()) != vertices_.rows()) {
            Mat compact(static_cast<int>(keep.size()), vertices_.cols());
            for (std::size_t i = 0; i < keep.size(); ++i)
                compact.row(static_cast<int>(i)) = vertices_.row(keep[i]);
            vertices_ = std::move(compact);
        }
    }

    void symmetrize(double tol) {
        std::vector<int> unmatched;
        for (int i = 0; i < vertices_.rows(); ++i) {
            bool found = false;
            for (int j = 0; j < vertices_.rows(); ++j)
                if ((vertices_.row(i) + vertices_.row(j)).cwiseAbs().maxCoeff() <= tol) {
                    found = true;
                    break;
                }
            if (!found) unmatched.push_back(i);
        }
        if (unmatched.empty()) return;
        Mat extended(vertices_.rows() + static_cast<int>(unmatched.size()), vertices_.cols());
        extended.topRows(vertices_.rows()) = vertices_;
        for (std::size_t i = 0; i < unmatched.size(); ++i)
            extended.row(vertices_.rows() + static_cast<int>(i)) = -vertices_.row(unmatched[i]);
        vertices_ = std::move(extended);
        symmetrized_ = true;
    }

    void detect_cross(double tol) {
        const int n = dim();
        if (vertices_.rows() != 2 * n) return;
        Vec plus = Vec::Constant(n, -1.0), minus = Vec::Constant(n, -1.0);
        for (int i = 0; i < vertices_.rows(); ++i) {
            int axis = -1;
            for (int j = 0; j < n; ++j) {
                if (std::abs(vertices_(i, j)) > tol) {
                    if (axis >= 0) return;  // more than one nonzero coordinate
                    axis = j;
                }
            }
            if (axis < 0) return;
            double v = vertices_(i, axis);
            if (v > 0.0) {
                if (plus[axis] >= 0.0) return;
                plus[axis] = v;
            } else {
                if (minus[axis] >= 0.0) return;
                minus[axis] = -v;
            }
        }
        for (int j = 0; j < n; ++j)
            if (plus[j] <= 0.0 || minus[j] <= 0.0 || std::abs(plus[j] - minus[j]) > tol) return;
        is_cross_ = true;
        cross_radii_ = plus;
    }

    Mat vertices_;
    bool symmetrized_ = false;
    bool is_cross_ = false;
    Vec cross_radii_;
    bool has_facets_ = false;
    Mat facet_normals_;
    Vec facet_offsets_;
};

/// Bounded intersection of symmetric halfspace pairs {x : a_j . x <= c_j}.
class HPolytope {
public:
    HPolytope(Mat normals, Vec offsets)
        : normals_(std::move(normals)), offsets_(std::move(offsets)) {
        const int n = static_cast<int>(normals_.cols());
        if (normals_.rows() < 1 || n < 1) throw invalid_body_error("hpolytope: no halfspaces");
        if (normals_.rows() != offsets_.size())
            throw invalid_body_error("hpolytope: normals/offsets size mismatch");
        if (offsets_.minCoeff() <= 0.0)
            throw invalid_body_error("hpolytope: offsets must be positive");
        for (int i = 0; i < normals_.rows(); ++i)
            if (normals_.row(i).cwiseAbs().maxCoeff() <= 0.0)
                throw invalid_body_error("hpolytope: zero normal");

        symmetrize();
        check_bounded();
    }

    int dim() const { return static_cast<int>(normals_.cols()); }
    const Mat& normals() const { return normals_; }
    const Vec& offsets() const { return offsets_; }
    bool symmetrized() const { return symmetrized_; }

private:
    void symmetrize() {
        const double scale = std::max(1.0, normals_.cwiseAbs().maxCoeff());
        const double ctol = kSymTol * std::max(1.0, offsets_.maxCoeff());
        std::vector<int> unmatched;
        for (int i = 0; i < normals_.rows(); ++i) {
            bool found = false;
            for (int j = 0; j < normals_.rows(); ++j)
                if ((normals_.row(i) + normals_.row(j)).cwiseAbs().maxCoeff() <=
                        kSymTol * scale &&
                    std::abs(offsets_[i] - offsets_[j]) <= ctol) {
                    found = true;
                    break;
                }
            if (!found) unmatched.push_back(i);
        }
        if (unmatched.empty()) return;
        Mat ext_n(normals_.rows() + static_cast<int>(unmatched.size()), normals_.cols());
        Vec ext_c(offsets_.size() + static_cast<int>(unmatched.size()));
        ext_n.topRows(normals_.rows()) = normals_;
        ext_c.head(offsets_.size()) = offsets_;
        for (std::size_t i = 0; i < unmatched.size(); ++i) {
            ext_n.row(normals_.rows() + static_cast<int>(i)) = -normals_.row(unmatched[i]);
            ext_c[offsets_.size() + static_cast<int>(i)] = offsets_[unmatched[i]];
        }
        normals_ = std::move(ext_n);
        offsets_ = std::move(ext_c);
        symmetrized_ = true;
    }

    // Support must be finite along every axis and a sample of random
    // directions; an unbounded LP in any of them rejects the body.
    void check_bounded() const {
        const int n = dim();
        std::vector<Vec> dirs;
        for (int i = 0; i < n; ++i) {
            Vec e = Vec::Zero(n);
            e[i] = 1.0;
            dirs.push_back(e);
            dirs.push_back(-e);
        }
        for (const Vec& d : direction_set(n, 16, 0x9e3779b97f4a7c15ull)) dirs.push_back(d);

        for (const Vec& u : dirs) {
            lp::Problem p;
            p.c.resize(2 * n);
            p.c << u, -u;
            p.A.resize(normals_.rows(), 2 * n);
            p.A << normals_, -normals_;
            p.b = offsets_;
            p.E.resize(0, 2 * n);
            p.f.resize(0);
            if (lp::maximize(p).status == lp::Status::unbounded)
                throw invalid_body_error("hpolytope: unbounded in direction of a sample ray");
        }
    }

    Mat normals_;
    Vec offsets_;
    bool symmetrized_ = false;
};

using BodyShape = std::variant<Ellipsoid, Box, VPolytope, HPolytope>;

/// A symmetric convex body together with the hbar at which duality is read.
struct Body {
    BodyShape shape;
    double hbar = 1.0;

    Body(Ellipsoid e) : shape(std::move(e)) { hbar = std::get<Ellipsoid>(shape).hbar(); }
    Body(Box b, double h = 1.0) : shape(std::move(b)), hbar(h) { check_hbar(); }
    Body(VPolytope v, double h = 1.0) : shape(std::move(v)), hbar(h) { check_hbar(); }
    Body(HPolytope hp, double h = 1.0) : shape(std::move(hp)), hbar(h) { check_hbar(); }
    Body(BodyShape s, double h) : shape(std::move(s)), hbar(h) { check_hbar(); }

    int dim() const {
        return std::visit([](const auto& s) { return s.dim(); }, shape);
    }

private:
    void check_hbar() const {
        if (!(hbar > 0.0)) throw invalid_body_error("body: hbar must be positive");
    }
};

inline Body make_ball(int n, double radius, double hbar = 1.0) {
    if (!(radius > 0.0)) throw invalid_body_error("ball: radius must be positive");
    // {x : |x| <= R} written as {x : (hbar/R^2) x . x <= hbar}.
    return Body(Ellipsoid(Mat::Identity(n, n) * (hbar / (radius * radius)), hbar));
}

inline Body make_box(const Vec& half_widths, double hbar = 1.0) {
    return Body(Box(half_widths), hbar);
}

inline Body make_cross_polytope(const Vec& radii, double hbar = 1.0) {
    const int n = static_cast<int>(radii.size());
    Mat verts = Mat::Zero(2 * n, n);
    for (int j = 0; j < n; ++j) {
        verts(2 * j, j) = radii[j];
        verts(2 * j + 1, j) = -radii[j];
    }
    return Body(VPolytope(verts), hbar);
}

} // namespace hpolar
