#include "rectbound/json_io.hpp"

namespace rectbound {

using nlohmann::json;

json relation_to_json(const Relation& f) {
    json accept = json::array();
    for (int x = 0; x < f.x_size; ++x) {
        json row = json::array();
        for (int y = 0; y < f.y_size; ++y) row.push_back(f.at(x, y));
        accept.push_back(std::move(row));
    }
    return json{{"x_size", f.x_size},
                {"y_size", f.y_size},
                {"z_size", f.z_size},
                {"accept", std::move(accept)}};
}

Relation relation_from_json(const json& j) {
    Relation f(j.at("x_size").get<int>(), j.at("y_size").get<int>(),
               j.at("z_size").get<int>());
    const auto& accept = j.at("accept");
    for (int x = 0; x < f.x_size; ++x)
        for (int y = 0; y < f.y_size; ++y)
            f.at(x, y) = accept.at(x).at(y).get<std::vector<int>>();
    f.validate();
    return f;
}

json distribution_to_json(const Distribution& d) {
    json mass = json::array();
    for (int x = 0; x < d.x_size; ++x) {
        json row = json::array();
        for (int y = 0; y < d.y_size; ++y) row.push_back(d(x, y));
        mass.push_back(std::move(row));
    }
    return json{{"x_size", d.x_size}, {"y_size", d.y_size}, {"mass", std::move(mass)}};
}

Distribution distribution_from_json(const json& j) {
    Distribution d(j.at("x_size").get<int>(), j.at("y_size").get<int>());
    const auto& mass = j.at("mass");
    for (int x = 0; x < d.x_size; ++x)
        for (int y = 0; y < d.y_size; ++y)
            d.at(x, y) = mass.at(x).at(y).get<double>();
    d.validate();
    return d;
}

} // namespace rectbound
