#include "rectbound/rectangle.hpp"

namespace rectbound {

double mass_of(const Rectangle& R, const Distribution& lambda) {
    double s = 0.0;
    for (int x = 0; x < lambda.x_size; ++x) {
        if (!((R.rows >> x) & 1ULL)) continue;
        for (int y = 0; y < lambda.y_size; ++y)
            if ((R.cols >> y) & 1ULL) s += lambda(x, y);
    }
    return s;
}

double good_mass(const Rectangle& R, const Distribution& lambda,
                 const Relation& g, int z) {
    double s = 0.0;
    for (int x = 0; x < lambda.x_size; ++x) {
        if (!((R.rows >> x) & 1ULL)) continue;
        for (int y = 0; y < lambda.y_size; ++y)
            if (((R.cols >> y) & 1ULL) && g.accepts(x, y, z)) s += lambda(x, y);
    }
    return s;
}

} // namespace rectbound
