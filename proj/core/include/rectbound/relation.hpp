#pragma once
#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rectbound {

// A finite relation f subset of X x Y x Z, stored as the table of accepted
// output sets f(x,y). Total functions are the special case |f(x,y)| = 1.
// Promise inputs accept every z.
struct Relation {
    int x_size = 0;
    int y_size = 0;
    int z_size = 0;
    // accept[x*y_size+y] is the sorted set of accepted outputs for (x,y).
    std::vector<std::vector<int>> accept;

    Relation() = default;
    Relation(int xs, int ys, int zs)
        : x_size(xs), y_size(ys), z_size(zs),
          accept(static_cast<size_t>(xs) * ys) {}

    const std::vector<int>& at(int x, int y) const {
        return accept[static_cast<size_t>(x) * y_size + y];
    }
    std::vector<int>& at(int x, int y) {
        return accept[static_cast<size_t>(x) * y_size + y];
    }

    bool accepts(int x, int y, int z) const {
        const auto& s = at(x, y);
        return std::binary_search(s.begin(), s.end(), z);
    }

    // true iff f(x,y) = {z}
    bool unique_answer(int x, int y, int z) const {
        const auto& s = at(x, y);
        return s.size() == 1 && s[0] == z;
    }

    // total boolean function: z_size == 2 and every cell a singleton
    bool is_total_boolean() const {
        if (z_size != 2) return false;
        for (const auto& s : accept)
            if (s.size() != 1) return false;
        return true;
    }

    bool is_total_function() const {
        for (const auto& s : accept)
            if (s.size() != 1) return false;
        return true;
    }

    void validate() const;
};

// f^t on X^t x Y^t x Z^t; a z-tuple is accepted iff every coordinate is.
Relation product_relation(const Relation& f, int t);

// Mixed-radix index helpers for product domains (coordinate 0 is the
// most significant digit).
inline int tuple_index(const std::vector<int>& digits, int base) {
    int idx = 0;
    for (int d : digits) idx = idx * base + d;
    return idx;
}
inline std::vector<int> tuple_digits(int idx, int base, int t) {
    std::vector<int> d(t);
    for (int i = t - 1; i >= 0; --i) { d[i] = idx % base; idx /= base; }
    return d;
}

} // namespace rectbound
