#include "rectbound/relation.hpp"

namespace rectbound {

void Relation::validate() const {
    if (x_size <= 0 || y_size <= 0 || z_size <= 0)
        throw std::invalid_argument("Relation: sizes must be positive");
    if (accept.size() != static_cast<size_t>(x_size) * y_size)
        throw std::invalid_argument("Relation: accept table size mismatch");
    for (const auto& s : accept) {
        int prev = -1;
        for (int z : s) {
            if (z < 0 || z >= z_size)
                throw std::invalid_argument("Relation: output out of range");
            if (z <= prev)
                throw std::invalid_argument("Relation: accept sets must be sorted and unique");
            prev = z;
        }
    }
}

Relation product_relation(const Relation& f, int t) {
    if (t <= 0) throw std::invalid_argument("product_relation: t must be positive");
    double cells = 1.0;
    for (int i = 0; i < t; ++i) cells *= static_cast<double>(f.x_size) * f.y_size;
    if (cells > (1 << 20))
        throw std::invalid_argument("product_relation: |X|^t * |Y|^t exceeds 2^20");
    if (t == 1) return f;

    int xs = 1, ys = 1, zs = 1;
    for (int i = 0; i < t; ++i) { xs *= f.x_size; ys *= f.y_size; zs *= f.z_size; }

    Relation g(xs, ys, zs);
    for (int xi = 0; xi < xs; ++xi) {
        auto xd = tuple_digits(xi, f.x_size, t);
        for (int yi = 0; yi < ys; ++yi) {
            auto yd = tuple_digits(yi, f.y_size, t);
            // cross product of per-coordinate accept sets
            std::vector<std::vector<int>> parts(t);
            for (int i = 0; i < t; ++i) parts[i] = f.at(xd[i], yd[i]);
            std::vector<int> out;
            std::vector<int> pick(t, 0);
            bool any = true;
            for (int i = 0; i < t; ++i)
                if (parts[i].empty()) { any = false; break; }
            while (any) {
                std::vector<int> zt(t);
                for (int i = 0; i < t; ++i) zt[i] = parts[i][pick[i]];
                out.push_back(tuple_index(zt, f.z_size));
                int i = t - 1;
                while (i >= 0 && ++pick[i] == static_cast<int>(parts[i].size())) {
                    pick[i] = 0;
                    --i;
                }
                if (i < 0) break;
            }
            std::sort(out.begin(), out.end());
            g.at(xi, yi) = std::move(out);
        }
    }
    return g;
}

} // namespace rectbound
