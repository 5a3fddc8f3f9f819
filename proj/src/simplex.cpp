#include "simplex.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace garmod::detail {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kCostEps = 1e-9;
constexpr long kRefactorEvery = 800;

struct Model {
    int m = 0;
    int n = 0;
    std::vector<std::vector<int>> cols;  // row indices with coefficient 1
    std::vector<double> cost;
    std::vector<double> rhs;
};

class RevisedSimplex {
public:
    RevisedSimplex(const Model& model, std::vector<int> basis)
        : md_(model), m_(model.m), basis_(std::move(basis)) {
        binv_.assign(static_cast<size_t>(m_) * static_cast<size_t>(m_), 0.0);
        for (int i = 0; i < m_; ++i) at(i, i) = 1.0;
        refactor();
    }

    long run(long max_pivots, std::chrono::steady_clock::time_point deadline) {
        long pivots = 0;
        int degenerate_run = 0;
        bool bland = false;
        std::vector<double> alpha(static_cast<size_t>(m_));
        std::vector<int> alpha_nz, row_nz;
        while (pivots < max_pivots) {
            if (pivots % 32 == 0 && std::chrono::steady_clock::now() > deadline) {
                timed_out_ = true;
                break;
            }
            int q = -1;
            double best = -kCostEps;
            for (int j = 0; j < md_.n; ++j) {
                double d = reduced_cost(j);
                if (d < best) {
                    q = j;
                    if (bland) break;
                    best = d;
                }
            }
            if (q < 0) break;
            double dq = reduced_cost(q);

            std::fill(alpha.begin(), alpha.end(), 0.0);
            for (int k : md_.cols[static_cast<size_t>(q)]) {
                for (int i = 0; i < m_; ++i) alpha[static_cast<size_t>(i)] += at(i, k);
            }
            int r = -1;
            double best_ratio = std::numeric_limits<double>::infinity(), best_piv = 0.0;
            alpha_nz.clear();
            for (int i = 0; i < m_; ++i) {
                double a = alpha[static_cast<size_t>(i)];
                if (std::fabs(a) > 1e-12) alpha_nz.push_back(i);
                if (a <= kPivotEps) continue;
                double ratio = xb_[static_cast<size_t>(i)] / a;
                bool take = ratio < best_ratio - 1e-12;
                if (!take && ratio <= best_ratio + 1e-12) {
                    take = bland ? basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(r)] : a > best_piv;
                }
                if (take) {
                    r = i;
                    best_ratio = std::min(ratio, best_ratio);
                    best_piv = a;
                }
            }
            if (r < 0) break;  // unbounded direction; cannot happen for covers
            if (best_ratio < 1e-12) {
                if (++degenerate_run > 50) bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }

            double ar = alpha[static_cast<size_t>(r)];
            double theta = xb_[static_cast<size_t>(r)] / ar;
            row_nz.clear();
            for (int k = 0; k < m_; ++k) {
                double& v = at(r, k);
                if (v != 0.0) {
                    v /= ar;
                    row_nz.push_back(k);
                }
            }
            for (int i : alpha_nz) {
                if (i == r) continue;
                double f = alpha[static_cast<size_t>(i)];
                for (int k : row_nz) at(i, k) -= f * at(r, k);
                xb_[static_cast<size_t>(i)] = std::max(0.0, xb_[static_cast<size_t>(i)] - f * theta);
            }
            xb_[static_cast<size_t>(r)] = theta;
            for (int k : row_nz) pi_[static_cast<size_t>(k)] += dq * at(r, k);
            basis_[static_cast<size_t>(r)] = q;
            ++pivots;
            if (pivots % kRefactorEvery == 0) refactor();
        }
        refactor();
        return pivots;
    }

    const std::vector<int>& basis() const { return basis_; }
    const std::vector<double>& xb() const { return xb_; }
    const std::vector<double>& duals() const { return pi_; }
    bool timed_out() const { return timed_out_; }

private:
    double& at(int i, int k) {
        return binv_[static_cast<size_t>(i) * static_cast<size_t>(m_) + static_cast<size_t>(k)];
    }

    double reduced_cost(int j) const {
        double d = md_.cost[static_cast<size_t>(j)];
        for (int k : md_.cols[static_cast<size_t>(j)]) d -= pi_[static_cast<size_t>(k)];
        return d;
    }

    void refactor() {
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
        for (int i = 0; i < m_; ++i) {
            for (int k : md_.cols[static_cast<size_t>(basis_[static_cast<size_t>(i)])]) b(k, i) = 1.0;
        }
        Eigen::MatrixXd inv = b.partialPivLu().inverse();
        for (int i = 0; i < m_; ++i) {
            for (int k = 0; k < m_; ++k) {
                double v = inv(i, k);
                at(i, k) = std::fabs(v) < 1e-13 ? 0.0 : v;
            }
        }
        refresh();
    }

    void refresh() {
        xb_.assign(static_cast<size_t>(m_), 0.0);
        pi_.assign(static_cast<size_t>(m_), 0.0);
        for (int i = 0; i < m_; ++i) {
            double cb = md_.cost[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
            for (int k = 0; k < m_; ++k) {
                double v = at(i, k);
                if (v == 0.0) continue;
                xb_[static_cast<size_t>(i)] += v * md_.rhs[static_cast<size_t>(k)];
                pi_[static_cast<size_t>(k)] += cb * v;
            }
            xb_[static_cast<size_t>(i)] = std::max(0.0, xb_[static_cast<size_t>(i)]);
        }
    }

    const Model& md_;
    int m_;
    std::vector<int> basis_;
    std::vector<double> binv_;
    std::vector<double> xb_;
    std::vector<double> pi_;
    bool timed_out_ = false;
};

}  // namespace

// Revised primal simplex over the columns: candidates, one artificial per cell lacking an
// unlimited unit column, then supply slacks. The starting basis is the identity.
LpResult solve_cover_lp(const CoverLp& lp, std::chrono::steady_clock::time_point deadline) {
    const int m_cells = lp.num_cells;
    const int m_sup = static_cast<int>(lp.limits.size());
    const int n_cand = static_cast<int>(lp.columns.size());

    Model md;
    md.m = m_cells + m_sup;
    std::vector<int> unit_col(static_cast<size_t>(m_cells), -1);
    for (int j = 0; j < n_cand; ++j) {
        std::vector<int> col = lp.columns[static_cast<size_t>(j)];
        int g = lp.column_group[static_cast<size_t>(j)];
        if (col.size() == 1 && g < 0 && unit_col[static_cast<size_t>(col[0])] < 0) {
            unit_col[static_cast<size_t>(col[0])] = j;
        }
        if (g >= 0) col.push_back(m_cells + g);
        md.cols.push_back(std::move(col));
        md.cost.push_back(1.0);
    }
    const double big_m = static_cast<double>(m_cells) + 1.0;
    std::vector<int> basis(static_cast<size_t>(md.m));
    std::vector<int> art_cols;
    for (int i = 0; i < m_cells; ++i) {
        if (unit_col[static_cast<size_t>(i)] >= 0) {
            basis[static_cast<size_t>(i)] = unit_col[static_cast<size_t>(i)];
            continue;
        }
        basis[static_cast<size_t>(i)] = static_cast<int>(md.cols.size());
        art_cols.push_back(static_cast<int>(md.cols.size()));
        md.cols.push_back({i});
        md.cost.push_back(big_m);
    }
    for (int g = 0; g < m_sup; ++g) {
        basis[static_cast<size_t>(m_cells + g)] = static_cast<int>(md.cols.size());
        md.cols.push_back({m_cells + g});
        md.cost.push_back(0.0);
    }
    md.n = static_cast<int>(md.cols.size());

    // Cover LPs are heavily degenerate; a small deterministic right-hand-side perturbation
    // keeps Dantzig pricing from stalling. Duals stay feasible for the exact problem.
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> jitter(1e-7, 1e-6);
    for (int i = 0; i < m_cells; ++i) md.rhs.push_back(1.0 + jitter(rng));
    for (double l : lp.limits) md.rhs.push_back(l);

    RevisedSimplex rs(md, basis);
    LpResult res;
    res.pivots = rs.run(50L * (md.m + md.n) + 1000, deadline);
    res.timed_out = rs.timed_out();

    for (int i = 0; i < md.m && !res.timed_out; ++i) {
        int b = rs.basis()[static_cast<size_t>(i)];
        if (b >= n_cand && b < n_cand + static_cast<int>(art_cols.size()) && rs.xb()[static_cast<size_t>(i)] > 1e-4) {
            res.feasible = false;
            return res;
        }
    }
    res.feasible = true;

    // Any duals with non-positive supply prices give a valid bound; recompute it from them
    // rather than trusting the iterate.
    const auto& y = rs.duals();
    double bound = 0.0;
    for (int i = 0; i < m_cells; ++i) bound += y[static_cast<size_t>(i)];
    std::vector<double> mu(static_cast<size_t>(m_sup));
    for (int g = 0; g < m_sup; ++g) {
        mu[static_cast<size_t>(g)] = std::min(0.0, y[static_cast<size_t>(m_cells + g)]);
        bound += mu[static_cast<size_t>(g)] * lp.limits[static_cast<size_t>(g)];
    }
    res.reduced_costs.assign(static_cast<size_t>(n_cand), 0.0);
    double worst = 0.0, negative_sum = 0.0;
    for (int j = 0; j < n_cand; ++j) {
        double rc = 1.0;
        for (int cell : lp.columns[static_cast<size_t>(j)]) rc -= y[static_cast<size_t>(cell)];
        int g = lp.column_group[static_cast<size_t>(j)];
        if (g >= 0) rc -= mu[static_cast<size_t>(g)];
        worst = std::min(worst, rc);
        negative_sum += std::min(0.0, rc);
        res.reduced_costs[static_cast<size_t>(j)] = std::max(0.0, rc);
    }
    // count >= bound + sum(rc * x) for every cover. Negative reduced costs lower the sum by
    // at most their total, and by at most |worst| for each of the <= num_cells choices.
    res.value = bound + std::max(negative_sum, worst * static_cast<double>(m_cells));
    return res;
}

}  // namespace garmod::detail
