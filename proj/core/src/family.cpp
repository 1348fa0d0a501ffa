#include "rectbound/family.hpp"

#include <cmath>
#include <stdexcept>

namespace rectbound {

namespace {

int popcount(unsigned v) { return __builtin_popcount(v); }

// boolean value -> singleton accept set
std::vector<int> single(int z) { return {z}; }

std::vector<int> all_of(int zs) {
    std::vector<int> s(zs);
    for (int i = 0; i < zs; ++i) s[i] = i;
    return s;
}

} // namespace

std::vector<std::string> family_names() {
    return {"EQ", "AND", "XOR", "IP", "DISJ", "GHD", "TRIBES"};
}

FamilyInstance make_family(const std::string& name, int n) {
    if (n <= 0 || n > 6)
        throw std::invalid_argument("make_family: need 1 <= n <= 6 (2^n <= 64)");
    const int sz = 1 << n;
    Relation f(sz, sz, 2);

    auto fill = [&](auto fn) {
        for (int x = 0; x < sz; ++x)
            for (int y = 0; y < sz; ++y) f.at(x, y) = single(fn(x, y) ? 1 : 0);
    };

    if (name == "EQ") {
        fill([](int x, int y) { return x == y; });
    } else if (name == "AND") {
        // 1 iff every bit of x and of y is set (x = y = 1...1); for n = 1
        // this is the plain two-bit AND
        fill([sz](int x, int y) { return x == sz - 1 && y == sz - 1; });
    } else if (name == "XOR") {
        fill([](int x, int y) { return popcount(static_cast<unsigned>(x ^ y)) & 1; });
    } else if (name == "IP") {
        fill([](int x, int y) { return popcount(static_cast<unsigned>(x & y)) & 1; });
    } else if (name == "DISJ") {
        fill([](int x, int y) { return (x & y) == 0; });
    } else if (name == "TRIBES") {
        // AND of ORs over tribes of size ceil(sqrt(n)) (last tribe ragged)
        int w = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
        fill([n, w](int x, int y) {
            for (int start = 0; start < n; start += w) {
                bool tribe = false;
                for (int i = start; i < std::min(start + w, n); ++i)
                    if (((x >> i) & 1) && ((y >> i) & 1)) tribe = true;
                if (!tribe) return false;
            }
            return true;
        });
    } else if (name == "GHD") {
        // gap-Hamming promise: answer 1 if d(x,y) >= n/2 + g, 0 if
        // d(x,y) <= n/2 - g with g = ceil(sqrt(n)); outside the promise
        // every output is accepted
        int g = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
        for (int x = 0; x < sz; ++x)
            for (int y = 0; y < sz; ++y) {
                double d = popcount(static_cast<unsigned>(x ^ y));
                if (d >= n / 2.0 + g) f.at(x, y) = single(1);
                else if (d <= n / 2.0 - g) f.at(x, y) = single(0);
                else f.at(x, y) = all_of(2);
            }
    } else {
        throw std::invalid_argument("make_family: unknown family '" + name + "'");
    }

    return {std::move(f), Distribution::uniform(sz, sz)};
}

} // namespace rectbound
