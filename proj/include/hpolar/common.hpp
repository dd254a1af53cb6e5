#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hpolar {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Geometric predicates use this absolute tolerance scaled by the body's
// circumradius.
inline constexpr double kGeomTol = 1e-9;
// Symmetry of inputs (matrices, vertex sets) is enforced at this tolerance.
inline constexpr double kSymTol = 1e-12;
// Eigenvalue floor applied when forming SPD square roots.
inline constexpr double kSpdFloor = 1e-14;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A body value violates its representation invariants (non-SPD form,
/// asymmetric vertex set, unbounded halfspace intersection, ...).
struct invalid_body_error : error {
    using error::error;
};

struct dimension_error : error {
    using error::error;
};

/// Numerical failure inside an operation (singular matrix, degenerate
/// estimate, solver breakdown).
struct numeric_error : error {
    using error::error;
};

inline void require_dim(int expected, int got, const char* where) {
    if (expected != got)
        throw dimension_error(std::string(where) + ": dimension mismatch (" +
                              std::to_string(expected) + " vs " + std::to_string(got) + ")");
}

// splitmix64; used to derive independent per-worker and per-trial seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Vec gaussian_vector(int n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
}

/// Uniform random unit vector in R^n.
inline Vec random_direction(int n, Rng& rng) {
    for (;;) {
        Vec v = gaussian_vector(n, rng);
        double norm = v.norm();
        if (norm > 1e-12) return v / norm;
    }
}

/// Deterministic set of quasi-uniform unit directions (seeded Gaussian draws).
inline std::vector<Vec> direction_set(int n, int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec> dirs;
    dirs.reserve(count);
    for (int i = 0; i < count; ++i) dirs.push_back(random_direction(n, rng));
    return dirs;
}

inline bool is_symmetric(const Mat& m, double tol = kSymTol) {
    if (m.rows() != m.cols()) return false;
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

/// Eigendecomposition-backed check that a symmetric matrix is positive
/// definite. Returns the smallest eigenvalue through min_eig when given.
inline bool is_spd(const Mat& m, double* min_eig = nullptr) {
    if (!is_symmetric(m)) return false;
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues().minCoeff();
    if (min_eig) *min_eig = lo;
    return lo > 0.0;
}

namespace detail {

inline Mat spd_power(const Mat& a, double exponent, const char* where) {
    if (!is_symmetric(a)) throw invalid_body_error(std::string(where) + ": matrix not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    Vec lam = es.eigenvalues();
    const double scale = lam.cwiseAbs().maxCoeff();
    Vec powered(lam.size());
    for (int i = 0; i < lam.size(); ++i) {
        if (lam[i] <= 0.0 && lam[i] > -kSymTol * scale) lam[i] = kSpdFloor;
        if (lam[i] <= 0.0)
            throw invalid_body_error(std::string(where) + ": matrix not positive definite");
        powered[i] = std::pow(std::max(lam[i], kSpdFloor), exponent);
    }
    return es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace detail

/// Principal SPD square root.
inline Mat spd_sqrt(const Mat& a) { return detail::spd_power(a, 0.5, "spd_sqrt"); }

/// Principal SPD inverse square root.
inline Mat spd_inv_sqrt(const Mat& a) { return detail::spd_power(a, -0.5, "spd_inv_sqrt"); }

inline Mat spd_inverse(const Mat& a) { return detail::spd_power(a, -1.0, "spd_inverse"); }

} // namespace hpolar
