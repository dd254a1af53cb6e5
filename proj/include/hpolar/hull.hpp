#pragma once

#include "hpolar/common.hpp"

#include <optional>
#include <vector>

namespace hpolar::hull {

// Facets a·x <= c of a convex hull, unit normals, interior on the < side.
struct FacetList {
    Mat normals;  // m x n
    Vec offsets;  // m
};

namespace detail {

// Walks k-choose-n index subsets in lexicographic order.
inline bool next_combination(std::vector<int>& idx, int k) {
    int n = static_cast<int>(idx.size());
    for (int i = n - 1; i >= 0; --i) {
        if (idx[static_cast<std::size_t>(i)] < k - (n - i)) {
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < n; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

inline double binomial_guard(int k, int n) {
    double c = 1.0;
    for (int i = 0; i < n; ++i) c = c * (k - i) / (i + 1);
    return c;
}

} // namespace detail

/// Enumerates the supporting hyperplanes (facets) of conv(points) by testing
/// every n-point subset. points is k x n with the origin (or the caller's
/// interior reference) strictly inside the hull. Exponential in n; callers
/// restrict to n <= 4. Returns nullopt when the subset count exceeds the
/// work cap.
inline std::optional<FacetList> enumerate_facets(const Mat& points, double work_cap = 2e5) {
    const int k = static_cast<int>(points.rows());
    const int n = static_cast<int>(points.cols());
    const double scale = std::max(1.0, points.cwiseAbs().maxCoeff());
    const double tol = 1e-9 * scale;

    if (k < n || detail::binomial_guard(k, n) > work_cap) return std::nullopt;

    std::vector<Vec> normals;
    std::vector<double> offsets;

    auto is_duplicate = [&](const Vec& a, double c) {
        for (std::size_t i = 0; i < normals.size(); ++i)
            if ((normals[i] - a).cwiseAbs().maxCoeff() <= 1e-7 &&
                std::abs(offsets[i] - c) <= 1e-7 * scale)
                return true;
        return false;
    };

    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    do {
        Vec a;
        if (n == 1) {
            a = Vec::Ones(1);
        } else {
            Mat diffs(n - 1, n);
            for (int i = 1; i < n; ++i)
                diffs.row(i - 1) =
                    points.row(idx[static_cast<std::size_t>(i)]) - points.row(idx[0]);
            Eigen::FullPivLU<Mat> lu(diffs);
            lu.setThreshold(1e-9);
            if (lu.rank() != n - 1) continue;  // affinely dependent subset
            a = lu.kernel().col(0);
            a /= a.norm();
        }
        double c = a.dot(points.row(idx[0]));
        if (c < 0.0) { a = -a; c = -c; }
        if (c <= tol) continue;  // hyperplane through the interior point

        if ((points * a).maxCoeff() <= c + tol && !is_duplicate(a, c)) {
            normals.push_back(a);
            offsets.push_back(c);
        }
    } while (detail::next_combination(idx, k));

    FacetList out;
    out.normals.resize(static_cast<int>(normals.size()), n);
    out.offsets.resize(static_cast<int>(normals.size()));
    for (std::size_t i = 0; i < normals.size(); ++i) {
        out.normals.row(static_cast<int>(i)) = normals[i];
        out.offsets[static_cast<int>(i)] = offsets[i];
    }
    return out;
}

/// Exact volume of conv(points) by recursive fan triangulation from the
/// centroid: vol = sum over facets of dist * facet_volume / n.
inline double fan_volume(const Mat& points) {
    const int k = static_cast<int>(points.rows());
    const int n = static_cast<int>(points.cols());
    if (k == 0) return 0.0;
    if (n == 1) {
        return points.col(0).maxCoeff() - points.col(0).minCoeff();
    }

    Vec centroid = points.colwise().mean();
    Mat shifted = points.rowwise() - centroid.transpose();
    const double scale = std::max(1.0, shifted.cwiseAbs().maxCoeff());

    Eigen::JacobiSVD<Mat> svd(shifted);
    if (svd.singularValues().minCoeff() <= 1e-10 * scale) return 0.0;  // flat hull

    auto facets = enumerate_facets(shifted);
    if (!facets) throw numeric_error("fan_volume: facet enumeration work cap exceeded");

    double vol = 0.0;
    for (int f = 0; f < facets->normals.rows(); ++f) {
        Vec a = facets->normals.row(f);
        double c = facets->offsets[f];

        std::vector<int> on_facet;
        for (int i = 0; i < k; ++i)
            if (std::abs(shifted.row(i).dot(a) - c) <= 1e-8 * scale) on_facet.push_back(i);
        if (static_cast<int>(on_facet.size()) < n) continue;

        // Orthonormal basis of the facet hyperplane.
        Eigen::HouseholderQR<Mat> qr(a);
        Mat q = qr.householderQ();
        Mat basis = q.rightCols(n - 1);

        Mat facet_pts(static_cast<int>(on_facet.size()), n - 1);
        for (std::size_t i = 0; i < on_facet.size(); ++i)
            facet_pts.row(static_cast<int>(i)) =
                shifted.row(on_facet[i]) * basis;

        vol += c * fan_volume(facet_pts) / n;
    }
    return vol;
}

} // namespace hpolar::hull
