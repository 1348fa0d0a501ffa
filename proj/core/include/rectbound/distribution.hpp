#pragma once
#include <vector>

namespace rectbound {

// Probability mass function over X x Y with marginal/conditional access.
struct Distribution {
    int x_size = 0;
    int y_size = 0;
    std::vector<double> mass; // row-major, mass[x*y_size+y]

    Distribution() = default;
    Distribution(int xs, int ys)
        : x_size(xs), y_size(ys), mass(static_cast<size_t>(xs) * ys, 0.0) {}

    double operator()(int x, int y) const {
        return mass[static_cast<size_t>(x) * y_size + y];
    }
    double& at(int x, int y) { return mass[static_cast<size_t>(x) * y_size + y]; }

    double total() const;
    std::vector<double> marginal_x() const;
    std::vector<double> marginal_y() const;
    // p(y|x); zero row gives the zero vector (flagged by caller if needed)
    std::vector<double> conditional_y_given_x(int x) const;
    std::vector<double> conditional_x_given_y(int y) const;

    static Distribution uniform(int xs, int ys);

    void normalize();
    void validate() const; // sums to 1 within 1e-9, entries >= 0
};

} // namespace rectbound
