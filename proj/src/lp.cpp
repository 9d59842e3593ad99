#include "omac/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace omac::lp {

const char* to_string(Status s) {
    switch (s) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::unbounded: return "unbounded";
        case Status::iteration_limit: return "iteration_limit";
    }
    return "?";
}

int Problem::add_var(double cost, bool free) {
    cost_.push_back(cost);
    free_.push_back(free);
    return static_cast<int>(cost_.size()) - 1;
}

int Problem::add_vars(int count, double cost, bool free) {
    int first = num_vars();
    for (int i = 0; i < count; ++i) add_var(cost, free);
    return first;
}

void Problem::add_row(std::vector<std::pair<int, double>> coeffs, Sense sense, double rhs) {
    for (const auto& [v, c] : coeffs) {
        if (v < 0 || v >= num_vars()) throw std::out_of_range("lp row references unknown variable");
        if (!std::isfinite(c)) throw std::invalid_argument("lp coefficient not finite");
    }
    if (!std::isfinite(rhs)) throw std::invalid_argument("lp rhs not finite");
    rows_.push_back({std::move(coeffs), sense, rhs});
}

namespace {

class Tableau {
public:
    // T: rows 0..m-1 constraints, row m objective (reduced costs); last column rhs.
    Eigen::MatrixXd T;
    std::vector<int> basis;
    int m = 0, n = 0;

    void pivot(int r, int e) {
        T.row(r) /= T(r, e);
        Eigen::VectorXd col = T.col(e);
        col(r) = 0;
        Eigen::RowVectorXd pr = T.row(r);
        T.noalias() -= col * pr;
        basis[static_cast<std::size_t>(r)] = e;
    }

    // Recomputes the tableau from a snapshot and the current basis to shed rounding drift.
    void refactor(const Eigen::MatrixXd& T0) {
        Eigen::MatrixXd B(m, m);
        for (int i = 0; i < m; ++i) B.col(i) = T0.col(basis[static_cast<std::size_t>(i)]).head(m);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        T.topRows(m) = lu.solve(T0.topRows(m));
        Eigen::RowVectorXd cb(m);
        for (int i = 0; i < m; ++i) cb[i] = T0(m, basis[static_cast<std::size_t>(i)]);
        T.row(m) = T0.row(m) - cb * T.topRows(m);
        for (int i = 0; i < m; ++i) T(m, basis[static_cast<std::size_t>(i)]) = 0;
    }

    // Runs simplex on the current objective row over columns allowed[j].
    Status run(const std::vector<bool>& allowed, const Options& opt, int& iterations) {
        const Eigen::MatrixXd T0 = T;
        int degenerate = 0, since_refactor = 0;
        bool bland = false;  // sticky once stalling is seen
        while (true) {
            if (++iterations > opt.max_iterations) return Status::iteration_limit;
            if (since_refactor >= 40) {
                refactor(T0);
                since_refactor = 0;
            }
            bland = bland || degenerate > 50;
            int e = -1;
            double best = -opt.tol;
            for (int j = 0; j < n; ++j) {
                if (!allowed[static_cast<std::size_t>(j)]) continue;
                double rc = T(m, j);
                if (rc < best) {
                    e = j;
                    best = rc;
                    if (bland) break;
                }
            }
            if (e < 0) {
                if (since_refactor == 0) return Status::optimal;
                refactor(T0);
                since_refactor = 0;
                continue;
            }
            // min ratio first, then break ties: Bland by basis index, otherwise largest pivot
            double ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i)
                if (T(i, e) > opt.tol) ratio = std::min(ratio, std::max(0.0, T(i, n)) / T(i, e));
            int r = -1;
            for (int i = 0; i < m; ++i) {
                double a = T(i, e);
                if (a <= opt.tol || std::max(0.0, T(i, n)) / a > ratio + 1e-12) continue;
                if (r < 0) r = i;
                else if (bland ? basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(r)] : a > T(r, e)) r = i;
            }
            if (r < 0) {
                if (since_refactor == 0) return Status::unbounded;
                refactor(T0);
                since_refactor = 0;
                continue;
            }
            degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
            pivot(r, e);
            ++since_refactor;
        }
    }
};

}  // namespace

Solution solve(const Problem& p, const Options& opt) {
    // Standard form columns: structural (free vars split), slack/surplus, artificial.
    const int nv = p.num_vars();
    std::vector<int> pos_col(static_cast<std::size_t>(nv)), neg_col(static_cast<std::size_t>(nv), -1);
    int ncols = 0;
    for (int v = 0; v < nv; ++v) {
        pos_col[static_cast<std::size_t>(v)] = ncols++;
        if (p.free_flags()[static_cast<std::size_t>(v)]) neg_col[static_cast<std::size_t>(v)] = ncols++;
    }
    const int m = p.num_rows();
    int n_slack = 0, n_art = 0;
    std::vector<double> sign(static_cast<std::size_t>(m));
    std::vector<Sense> sense(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const auto& row = p.rows()[static_cast<std::size_t>(i)];
        double s = row.rhs < 0 ? -1.0 : 1.0;
        Sense se = row.sense;
        if (s < 0 && se != Sense::eq) se = se == Sense::le ? Sense::ge : Sense::le;
        sign[static_cast<std::size_t>(i)] = s;
        sense[static_cast<std::size_t>(i)] = se;
        if (se != Sense::eq) ++n_slack;
        if (se != Sense::le) ++n_art;
    }
    const int n = ncols + n_slack + n_art;
    Tableau tb;
    tb.m = m;
    tb.n = n;
    tb.T = Eigen::MatrixXd::Zero(m + 1, n + 1);
    tb.basis.assign(static_cast<std::size_t>(m), -1);
    std::vector<bool> is_art(static_cast<std::size_t>(n), false);
    int slack_at = ncols, art_at = ncols + n_slack;
    for (int i = 0; i < m; ++i) {
        const auto& row = p.rows()[static_cast<std::size_t>(i)];
        double s = sign[static_cast<std::size_t>(i)];
        for (const auto& [v, c] : row.coeffs) {
            tb.T(i, pos_col[static_cast<std::size_t>(v)]) += s * c;
            if (neg_col[static_cast<std::size_t>(v)] >= 0) tb.T(i, neg_col[static_cast<std::size_t>(v)]) -= s * c;
        }
        tb.T(i, n) = s * row.rhs;
        Sense se = sense[static_cast<std::size_t>(i)];
        if (se == Sense::le) {
            tb.T(i, slack_at) = 1;
            tb.basis[static_cast<std::size_t>(i)] = slack_at++;
        } else {
            if (se == Sense::ge) tb.T(i, slack_at++) = -1;
            tb.T(i, art_at) = 1;
            is_art[static_cast<std::size_t>(art_at)] = true;
            tb.basis[static_cast<std::size_t>(i)] = art_at++;
        }
    }

    Solution sol;
    std::vector<bool> allowed(static_cast<std::size_t>(n), true);
    double scale = 1.0;
    for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(tb.T(i, n)));

    if (n_art > 0) {
        for (int i = 0; i < m; ++i)
            if (is_art[static_cast<std::size_t>(tb.basis[static_cast<std::size_t>(i)])]) tb.T.row(m) -= tb.T.row(i);
        for (int j = 0; j < n; ++j)
            if (is_art[static_cast<std::size_t>(j)]) tb.T(m, j) = 0;
        Status st = tb.run(allowed, opt, sol.iterations);
        if (st == Status::iteration_limit) {
            sol.status = st;
            return sol;
        }
        if (-tb.T(m, n) > 1e-9 * scale) {
            sol.status = Status::infeasible;
            return sol;
        }
        // drive remaining artificials out of the basis
        for (int i = 0; i < m; ++i) {
            if (!is_art[static_cast<std::size_t>(tb.basis[static_cast<std::size_t>(i)])]) continue;
            int e = -1;
            double best = opt.tol;
            for (int j = 0; j < n; ++j)
                if (!is_art[static_cast<std::size_t>(j)] && std::abs(tb.T(i, j)) > best) {
                    best = std::abs(tb.T(i, j));
                    e = j;
                }
            if (e >= 0) tb.pivot(i, e);  // otherwise the row is redundant; artificial stays at zero
        }
        for (int j = 0; j < n; ++j)
            if (is_art[static_cast<std::size_t>(j)]) allowed[static_cast<std::size_t>(j)] = false;
    }

    // phase 2 objective row
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (int v = 0; v < nv; ++v) {
        c[pos_col[static_cast<std::size_t>(v)]] = p.costs()[static_cast<std::size_t>(v)];
        if (neg_col[static_cast<std::size_t>(v)] >= 0) c[neg_col[static_cast<std::size_t>(v)]] = -p.costs()[static_cast<std::size_t>(v)];
    }
    tb.T.row(m).setZero();
    tb.T.row(m).head(n) = c.transpose();
    for (int i = 0; i < m; ++i) {
        double cb = c[tb.basis[static_cast<std::size_t>(i)]];
        if (cb != 0) tb.T.row(m) -= cb * tb.T.row(i);
    }
    Status st = tb.run(allowed, opt, sol.iterations);
    sol.status = st;
    if (st != Status::optimal) return sol;

    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i) z[tb.basis[static_cast<std::size_t>(i)]] = std::max(0.0, tb.T(i, n));
    sol.x.resize(nv);
    for (int v = 0; v < nv; ++v) {
        double val = z[pos_col[static_cast<std::size_t>(v)]];
        if (neg_col[static_cast<std::size_t>(v)] >= 0) val -= z[neg_col[static_cast<std::size_t>(v)]];
        sol.x[v] = val;
    }
    sol.objective = 0;
    for (int v = 0; v < nv; ++v) sol.objective += p.costs()[static_cast<std::size_t>(v)] * sol.x[v];
    return sol;
}

}  // namespace omac::lp
