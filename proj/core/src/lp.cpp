#include "rectbound/lp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rectbound {

namespace {
constexpr double kPivotTol = 1e-8;
} // namespace

void LPInstance::add_row(std::vector<double> coeffs, RowSense s, double rhs,
                         std::string name) {
    if (static_cast<int>(coeffs.size()) != num_cols())
        throw std::invalid_argument("LPInstance::add_row: coefficient count mismatch");
    rows.push_back({std::move(coeffs), s, rhs, std::move(name)});
}

std::string LPInstance::dump() const {
    std::ostringstream os;
    os.precision(17);
    os << (sense == ObjSense::Min ? "min" : "max");
    for (double c : objective) os << ' ' << c;
    os << '\n';
    for (const auto& r : rows) {
        for (double c : r.coeffs) os << c << ' ';
        os << (r.sense == RowSense::LE ? "<=" : r.sense == RowSense::GE ? ">=" : "=")
           << ' ' << r.rhs;
        if (!r.name.empty()) os << "  # " << r.name;
        os << '\n';
    }
    return os.str();
}

namespace {

// Full-tableau two-phase simplex. Internally everything is a
// minimization with b >= 0; every row carries a unit column (slack for
// <=, artificial for >= and =) from which the duals are read.
class Simplex {
public:
    explicit Simplex(const LPInstance& inst) : inst_(inst) {
        m_ = inst.num_rows();
        n_ = inst.num_cols();
        build();
    }

    LPSolution run() {
        LPSolution sol;
        // phase 1
        if (num_art_ > 0) {
            set_costs(phase1_costs_);
            if (!iterate()) throw std::runtime_error("simplex: phase 1 unbounded");
            if (objective_value() > 1e-7) {
                sol.status = LPStatus::Infeasible;
                return sol;
            }
            drive_out_artificials();
        }
        // phase 2
        set_costs(phase2_costs_);
        blocked_from_ = n_ + num_slack_; // artificials may not re-enter
        if (!iterate()) {
            sol.status = LPStatus::Unbounded;
            return sol;
        }
        sol.status = LPStatus::Optimal;
        extract(sol);
        return sol;
    }

private:
    const LPInstance& inst_;
    int m_ = 0, n_ = 0;
    int num_slack_ = 0, num_art_ = 0;
    int cols_ = 0;                     // total columns in tableau
    int blocked_from_ = 1 << 30;       // columns >= this may not enter
    std::vector<std::vector<double>> T_; // m_ rows x (cols_+1), last = rhs
    std::vector<int> basis_;
    std::vector<double> costs_;        // current phase costs
    std::vector<double> phase1_costs_, phase2_costs_;
    std::vector<double> red_;          // reduced costs
    double obj_shift_ = 0.0;           // via basis costs
    std::vector<int> row_flip_;        // 1 if original row negated
    std::vector<int> unit_col_;        // per row: its unit column index

    void build() {
        // count auxiliaries; rows with negative rhs are negated first
        std::vector<RowSense> sense(m_);
        std::vector<double> rhs(m_);
        row_flip_.assign(m_, 0);
        for (int i = 0; i < m_; ++i) {
            sense[i] = inst_.rows[i].sense;
            rhs[i] = inst_.rows[i].rhs;
            if (rhs[i] < 0) {
                row_flip_[i] = 1;
                rhs[i] = -rhs[i];
                if (sense[i] == RowSense::LE) sense[i] = RowSense::GE;
                else if (sense[i] == RowSense::GE) sense[i] = RowSense::LE;
            }
        }
        for (int i = 0; i < m_; ++i) {
            if (sense[i] == RowSense::LE) ++num_slack_;       // slack only
            else if (sense[i] == RowSense::GE) { ++num_slack_; ++num_art_; }
            else ++num_art_;
        }
        cols_ = n_ + num_slack_ + num_art_;
        T_.assign(m_, std::vector<double>(cols_ + 1, 0.0));
        basis_.assign(m_, -1);
        unit_col_.assign(m_, -1);

        int slack_at = n_;
        int art_at = n_ + num_slack_;
        for (int i = 0; i < m_; ++i) {
            double sgn = row_flip_[i] ? -1.0 : 1.0;
            for (int j = 0; j < n_; ++j) T_[i][j] = sgn * inst_.rows[i].coeffs[j];
            T_[i][cols_] = rhs[i];
            if (sense[i] == RowSense::LE) {
                T_[i][slack_at] = 1.0;
                basis_[i] = slack_at;
                unit_col_[i] = slack_at;
                ++slack_at;
            } else if (sense[i] == RowSense::GE) {
                T_[i][slack_at] = -1.0; // surplus
                ++slack_at;
                T_[i][art_at] = 1.0;
                basis_[i] = art_at;
                unit_col_[i] = art_at;
                ++art_at;
            } else {
                T_[i][art_at] = 1.0;
                basis_[i] = art_at;
                unit_col_[i] = art_at;
                ++art_at;
            }
        }

        phase1_costs_.assign(cols_, 0.0);
        for (int j = n_ + num_slack_; j < cols_; ++j) phase1_costs_[j] = 1.0;
        phase2_costs_.assign(cols_, 0.0);
        double csgn = inst_.sense == ObjSense::Min ? 1.0 : -1.0;
        for (int j = 0; j < n_; ++j) phase2_costs_[j] = csgn * inst_.objective[j];
    }

    void set_costs(const std::vector<double>& c) {
        costs_ = c;
        recompute_reduced();
    }

    void recompute_reduced() {
        red_.assign(cols_, 0.0);
        obj_shift_ = 0.0;
        for (int i = 0; i < m_; ++i) obj_shift_ += costs_[basis_[i]] * T_[i][cols_];
        for (int j = 0; j < cols_; ++j) {
            double r = costs_[j];
            for (int i = 0; i < m_; ++i) r -= costs_[basis_[i]] * T_[i][j];
            red_[j] = r;
        }
    }

    double objective_value() const { return obj_shift_; }

    // returns false on unboundedness
    bool iterate() {
        const long stall_limit = 3L * (m_ + cols_);
        const long iter_limit = 10000L + 200L * (m_ + cols_);
        long stalled = 0;
        bool bland = false;
        double last_obj = objective_value();
        for (long it = 0; it < iter_limit; ++it) {
            int enter = -1;
            if (!bland) {
                // largest coefficient; strict < keeps the smallest index on ties
                double best = -kPivotTol;
                for (int j = 0; j < cols_; ++j) {
                    if (j >= blocked_from_) continue;
                    if (red_[j] < best) { best = red_[j]; enter = j; }
                }
            } else {
                for (int j = 0; j < cols_; ++j) {
                    if (j >= blocked_from_) continue;
                    if (red_[j] < -kPivotTol) { enter = j; break; }
                }
            }
            if (enter == -1) return true; // optimal
            // ratio test (Bland ties toward smallest basis index)
            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i) {
                if (T_[i][enter] > kPivotTol) {
                    double ratio = T_[i][cols_] / T_[i][enter];
                    if (ratio < best_ratio - 1e-12 ||
                        (std::fabs(ratio - best_ratio) <= 1e-12 &&
                         (leave == -1 || basis_[i] < basis_[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == -1) return false; // unbounded
            pivot(leave, enter);
            double obj = objective_value();
            if (obj < last_obj - 1e-12) {
                stalled = 0;
                last_obj = obj;
            } else if (++stalled > stall_limit) {
                bland = true;
            }
        }
        throw std::runtime_error("simplex: iteration limit exceeded");
    }

    void pivot(int r, int c) {
        double pv = T_[r][c];
        for (int j = 0; j <= cols_; ++j) T_[r][j] /= pv;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            double f = T_[i][c];
            if (f == 0.0) continue;
            for (int j = 0; j <= cols_; ++j) T_[i][j] -= f * T_[r][j];
        }
        double fr = red_[c];
        for (int j = 0; j < cols_; ++j) red_[j] -= fr * T_[r][j];
        basis_[r] = c;
        obj_shift_ = 0.0;
        for (int i = 0; i < m_; ++i) obj_shift_ += costs_[basis_[i]] * T_[i][cols_];
    }

    // after phase 1, pivot basic artificials out where possible
    void drive_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_ + num_slack_) continue;
            int enter = -1;
            for (int j = 0; j < n_ + num_slack_; ++j)
                if (std::fabs(T_[i][j]) > kPivotTol) { enter = j; break; }
            if (enter != -1) pivot(i, enter);
            // a fully zero row stays with its artificial at level 0
        }
    }

    void extract(LPSolution& sol) const {
        sol.primal.assign(n_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_) sol.primal[basis_[i]] = T_[i][cols_];
        double csgn = inst_.sense == ObjSense::Min ? 1.0 : -1.0;
        sol.objective = csgn * objective_value();

        // duals from the unit column of each row: y_i = c_unit - red_unit
        sol.dual.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            int uc = unit_col_[i];
            double y = costs_[uc] - red_[uc];
            if (row_flip_[i]) y = -y;
            sol.dual[i] = csgn * y;
        }
        sol.dual_objective = 0.0;
        for (int i = 0; i < m_; ++i)
            sol.dual_objective += sol.dual[i] * inst_.rows[i].rhs;
        sol.gap = sol.objective - sol.dual_objective;
    }
};

} // namespace

LPSolution solve(const LPInstance& inst) {
    if (inst.num_rows() > 5000 || inst.num_cols() > 200000)
        throw std::invalid_argument("solve: instance exceeds size caps");
    Simplex s(inst);
    return s.run();
}

LPSolution solve_with_row_generation(LPInstance master,
                                     const SeparationOracle& separation,
                                     int max_rounds) {
    LPSolution sol = solve(master);
    for (int round = 0; round < max_rounds; ++round) {
        if (sol.status != LPStatus::Optimal) return sol;
        auto row = separation(sol);
        if (!row) return sol;
        master.rows.push_back(std::move(*row));
        sol = solve(master);
    }
    throw std::runtime_error("solve_with_row_generation: round cap exceeded");
}

} // namespace rectbound
