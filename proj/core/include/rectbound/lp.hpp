#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rectbound {

enum class RowSense { LE, GE, EQ };
enum class ObjSense { Min, Max };
enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPRow {
    std::vector<double> coeffs; // dense, one per column
    RowSense sense = RowSense::LE;
    double rhs = 0.0;
    std::string name;
};

// Dense LP over x >= 0. All variable lower bounds are 0.
struct LPInstance {
    ObjSense sense = ObjSense::Min;
    std::vector<double> objective; // one per column
    std::vector<LPRow> rows;
    std::vector<std::string> col_names;

    int num_cols() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }
    void add_row(std::vector<double> coeffs, RowSense s, double rhs,
                 std::string name = {});

    // plain-text tableau dump, one row per line, exact decimal rendering
    std::string dump() const;
};

struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    std::vector<double> primal;
    std::vector<double> dual; // one per row, signed for the original senses
    double objective = 0.0;
    double dual_objective = 0.0;
    double gap = 0.0;
};

// Dense two-phase primal simplex, 1e-8 pivot tolerance, deterministic
// (largest-coefficient entering rule, Bland's rule after stalling).
LPSolution solve(const LPInstance& inst);

// Callback returns the most violated constraint for the current point, or
// nullopt when no constraint is violated by more than 1e-8.
using SeparationOracle =
    std::function<std::optional<LPRow>(const LPSolution&)>;

LPSolution solve_with_row_generation(LPInstance master,
                                     const SeparationOracle& separation,
                                     int max_rounds = 100000);

} // namespace rectbound
