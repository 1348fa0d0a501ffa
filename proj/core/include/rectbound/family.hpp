#pragma once
#include <string>
#include <vector>

#include "rectbound/distribution.hpp"
#include "rectbound/relation.hpp"

namespace rectbound {

struct FamilyInstance {
    Relation relation;
    Distribution distribution; // canonical (uniform; see README)
};

// Built-in n-bit families on X = Y = {0,1}^n. Requires 2^n <= 64.
// EQ, AND, XOR, IP, DISJ, TRIBES are total boolean; GHD is a promise
// relation (inputs violating the gap promise accept every z).
FamilyInstance make_family(const std::string& name, int n);

std::vector<std::string> family_names();

} // namespace rectbound
