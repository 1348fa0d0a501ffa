#include "rectbound/distribution.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rectbound {

double Distribution::total() const {
    return std::accumulate(mass.begin(), mass.end(), 0.0);
}

std::vector<double> Distribution::marginal_x() const {
    std::vector<double> m(x_size, 0.0);
    for (int x = 0; x < x_size; ++x)
        for (int y = 0; y < y_size; ++y) m[x] += (*this)(x, y);
    return m;
}

std::vector<double> Distribution::marginal_y() const {
    std::vector<double> m(y_size, 0.0);
    for (int x = 0; x < x_size; ++x)
        for (int y = 0; y < y_size; ++y) m[y] += (*this)(x, y);
    return m;
}

std::vector<double> Distribution::conditional_y_given_x(int x) const {
    std::vector<double> c(y_size, 0.0);
    double px = 0.0;
    for (int y = 0; y < y_size; ++y) px += (*this)(x, y);
    if (px > 0.0)
        for (int y = 0; y < y_size; ++y) c[y] = (*this)(x, y) / px;
    return c;
}

std::vector<double> Distribution::conditional_x_given_y(int y) const {
    std::vector<double> c(x_size, 0.0);
    double py = 0.0;
    for (int x = 0; x < x_size; ++x) py += (*this)(x, y);
    if (py > 0.0)
        for (int x = 0; x < x_size; ++x) c[x] = (*this)(x, y) / py;
    return c;
}

Distribution Distribution::uniform(int xs, int ys) {
    Distribution d(xs, ys);
    double v = 1.0 / (static_cast<double>(xs) * ys);
    for (auto& m : d.mass) m = v;
    return d;
}

void Distribution::normalize() {
    double s = total();
    if (s <= 0.0) throw std::invalid_argument("Distribution: zero total mass");
    for (auto& m : mass) m /= s;
}

void Distribution::validate() const {
    if (x_size <= 0 || y_size <= 0 ||
        mass.size() != static_cast<size_t>(x_size) * y_size)
        throw std::invalid_argument("Distribution: size mismatch");
    for (double m : mass)
        if (m < 0.0 || !std::isfinite(m))
            throw std::invalid_argument("Distribution: negative or non-finite mass");
    if (std::fabs(total() - 1.0) > 1e-9)
        throw std::invalid_argument("Distribution: masses do not sum to 1");
}

} // namespace rectbound
