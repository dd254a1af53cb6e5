#pragma once

#include "hpolar/common.hpp"

#include <algorithm>
#include <limits>

namespace hpolar::lp {

enum class Status { optimal, infeasible, unbounded };

struct Solution {
    Status status = Status::infeasible;
    Vec x;
    double objective = 0.0;
};

/// maximize c·x  subject to  A x <= b,  E x = f,  x >= 0.
///
/// Dense two-phase tableau simplex with Bland's rule. Problem sizes in this
/// library are tiny (tens of variables), so no factorization updates or
/// sparsity are attempted.
struct Problem {
    Vec c;
    Mat A;  // may be 0 x n
    Vec b;
    Mat E;  // may be 0 x n
    Vec f;
};

namespace detail {

struct Tableau {
    Mat rows;              // m x (ncols + 1), last column is rhs
    Eigen::RowVectorXd cost;  // reduced cost row for the active phase
    std::vector<int> basis;   // basic variable index per row
    int n_struct = 0;
    int n_total = 0;       // structural + slack + artificial
    int first_artificial = 0;
    double eps = 1e-10;

    void pivot(int row, int col) {
        rows.row(row) /= rows(row, col);
        for (int i = 0; i < rows.rows(); ++i) {
            if (i == row) continue;
            double factor = rows(i, col);
            if (factor != 0.0) rows.row(i) -= factor * rows.row(row);
        }
        double cf = cost[col];
        if (cf != 0.0) cost -= cf * rows.row(row);
        basis[static_cast<std::size_t>(row)] = col;
    }

    // Returns optimal/unbounded. allow_artificial gates entering columns.
    Status iterate(bool allow_artificial) {
        const int m = static_cast<int>(rows.rows());
        const long max_iter = 200L * (m + n_total + 4);
        for (long it = 0; it < max_iter; ++it) {
            int enter = -1;
            for (int j = 0; j < n_total; ++j) {
                if (!allow_artificial && j >= first_artificial) break;
                if (cost[j] < -eps) { enter = j; break; }  // Bland: smallest index
            }
            if (enter < 0) return Status::optimal;

            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                double a = rows(i, enter);
                if (a <= eps) continue;
                double ratio = rows(i, n_total) / a;
                if (ratio < best_ratio - eps ||
                    (ratio < best_ratio + eps &&
                     (leave < 0 || basis[static_cast<std::size_t>(i)] <
                                       basis[static_cast<std::size_t>(leave)]))) {
                    best_ratio = std::min(ratio, best_ratio);
                    leave = i;
                }
            }
            if (leave < 0) return Status::unbounded;
            pivot(leave, enter);
        }
        throw numeric_error("simplex: iteration limit exceeded");
    }
};

} // namespace detail

inline Solution maximize(const Problem& p) {
    const int n = static_cast<int>(p.c.size());
    const int mi = static_cast<int>(p.A.rows());
    const int me = static_cast<int>(p.E.rows());
    const int m = mi + me;

    double scale = 1.0;
    if (mi) scale = std::max(scale, p.A.cwiseAbs().maxCoeff());
    if (me) scale = std::max(scale, p.E.cwiseAbs().maxCoeff());
    if (mi) scale = std::max(scale, p.b.cwiseAbs().maxCoeff());
    if (me) scale = std::max(scale, p.f.cwiseAbs().maxCoeff());

    // Rows with negative rhs are flipped; flipped inequality rows need a
    // surplus column and an artificial, as do all equality rows.
    int n_art = me;
    std::vector<bool> flipped(static_cast<std::size_t>(mi), false);
    for (int i = 0; i < mi; ++i)
        if (p.b[i] < 0.0) { flipped[static_cast<std::size_t>(i)] = true; ++n_art; }

    detail::Tableau t;
    t.n_struct = n;
    t.n_total = n + mi + n_art;
    t.first_artificial = n + mi;
    t.eps = 1e-10 * (1.0 + scale);
    t.rows = Mat::Zero(m, t.n_total + 1);
    t.basis.assign(static_cast<std::size_t>(m), -1);

    int art = t.first_artificial;
    for (int i = 0; i < mi; ++i) {
        double sign = flipped[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
        t.rows.block(i, 0, 1, n) = sign * p.A.row(i);
        t.rows(i, t.n_total) = sign * p.b[i];
        t.rows(i, n + i) = sign;  // slack (+1) or surplus (-1)
        if (flipped[static_cast<std::size_t>(i)]) {
            t.rows(i, art) = 1.0;
            t.basis[static_cast<std::size_t>(i)] = art++;
        } else {
            t.basis[static_cast<std::size_t>(i)] = n + i;
        }
    }
    for (int k = 0; k < me; ++k) {
        int i = mi + k;
        double sign = p.f[k] < 0.0 ? -1.0 : 1.0;
        t.rows.block(i, 0, 1, n) = sign * p.E.row(k);
        t.rows(i, t.n_total) = sign * p.f[k];
        t.rows(i, art) = 1.0;
        t.basis[static_cast<std::size_t>(i)] = art++;
    }

    Solution sol;

    if (n_art > 0) {
        // Phase 1: minimize the sum of artificials.
        t.cost = Eigen::RowVectorXd::Zero(t.n_total + 1);
        for (int j = t.first_artificial; j < t.n_total; ++j) t.cost[j] = 1.0;
        for (int i = 0; i < m; ++i)
            if (t.basis[static_cast<std::size_t>(i)] >= t.first_artificial)
                t.cost -= t.rows.row(i);
        if (t.iterate(true) != Status::optimal)
            throw numeric_error("simplex: phase 1 unbounded");
        if (-t.cost[t.n_total] > 1e-7 * (1.0 + scale)) {
            sol.status = Status::infeasible;
            return sol;
        }
        // Drive leftover artificials out of the basis where possible.
        for (int i = 0; i < m; ++i) {
            if (t.basis[static_cast<std::size_t>(i)] < t.first_artificial) continue;
            int col = -1;
            for (int j = 0; j < t.first_artificial; ++j)
                if (std::abs(t.rows(i, j)) > t.eps) { col = j; break; }
            if (col >= 0) t.pivot(i, col);
            // else: redundant row; the artificial stays basic at value 0.
        }
    }

    // Phase 2: minimize -c·x with artificials barred from entering.
    t.cost = Eigen::RowVectorXd::Zero(t.n_total + 1);
    t.cost.head(n) = -p.c.transpose();
    for (int i = 0; i < m; ++i) {
        int j = t.basis[static_cast<std::size_t>(i)];
        if (j < t.n_total && t.cost[j] != 0.0) t.cost -= t.cost[j] * t.rows.row(i);
    }
    Status st = t.iterate(false);
    if (st == Status::unbounded) {
        sol.status = Status::unbounded;
        return sol;
    }

    sol.status = Status::optimal;
    sol.x = Vec::Zero(n);
    for (int i = 0; i < m; ++i) {
        int j = t.basis[static_cast<std::size_t>(i)];
        if (j < n) sol.x[j] = t.rows(i, t.n_total);
    }
    sol.objective = p.c.dot(sol.x);
    return sol;
}

} // namespace hpolar::lp
