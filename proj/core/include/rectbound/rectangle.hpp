#pragma once
#include <cstdint>

#include "rectbound/distribution.hpp"
#include "rectbound/relation.hpp"

namespace rectbound {

// Combinatorial rectangle A x B, A subset of X, B subset of Y, as bitmasks.
// Caps |X|,|Y| at 64.
struct Rectangle {
    uint64_t rows = 0;
    uint64_t cols = 0;

    bool contains(int x, int y) const {
        return ((rows >> x) & 1ULL) && ((cols >> y) & 1ULL);
    }
    bool empty() const { return rows == 0 || cols == 0; }
};

// lambda(R)
double mass_of(const Rectangle& R, const Distribution& lambda);

// lambda(g^{-1}(z) ∩ R)
double good_mass(const Rectangle& R, const Distribution& lambda,
                 const Relation& g, int z);

} // namespace rectbound
