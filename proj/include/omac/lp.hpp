#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace omac::lp {

enum class Sense { le, eq, ge };
enum class Status { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(Status s);

// min c'x subject to sparse rows, x >= 0 unless declared free.
class Problem {
public:
    int add_var(double cost = 0.0, bool free = false);
    int add_vars(int count, double cost = 0.0, bool free = false);
    void set_cost(int var, double cost) { cost_.at(static_cast<std::size_t>(var)) = cost; }
    void add_row(std::vector<std::pair<int, double>> coeffs, Sense sense, double rhs);

    int num_vars() const { return static_cast<int>(cost_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }

    struct Row {
        std::vector<std::pair<int, double>> coeffs;
        Sense sense;
        double rhs;
    };
    const std::vector<Row>& rows() const { return rows_; }
    const std::vector<double>& costs() const { return cost_; }
    const std::vector<bool>& free_flags() const { return free_; }

private:
    std::vector<double> cost_;
    std::vector<bool> free_;
    std::vector<Row> rows_;
};

struct Options {
    double tol = 1e-9;
    int max_iterations = 200000;
};

struct Solution {
    Status status = Status::infeasible;
    double objective = 0;
    Eigen::VectorXd x;
    int iterations = 0;
    bool optimal() const { return status == Status::optimal; }
};

// Dense two-phase tableau simplex. Dantzig pricing, switching to Bland's rule
// after a run of degenerate pivots so cycling cannot occur.
Solution solve(const Problem& p, const Options& opt = {});

}  // namespace omac::lp
