#pragma once
#include "json.hpp"

#include "rectbound/distribution.hpp"
#include "rectbound/relation.hpp"

namespace rectbound {

nlohmann::json relation_to_json(const Relation& f);
Relation relation_from_json(const nlohmann::json& j);

nlohmann::json distribution_to_json(const Distribution& d);
Distribution distribution_from_json(const nlohmann::json& j);

} // namespace rectbound
