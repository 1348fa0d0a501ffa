#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "rectbound/directproduct.hpp"
#include "rectbound/family.hpp"
#include "rectbound/protocol.hpp"
#include "rectbound/sampler.hpp"
#include "rectbound/zerocomm.hpp"

namespace rectbound {

struct SuiteItem {
    std::string label;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string name;
    std::vector<SuiteItem> items;
    bool all_pass() const {
        for (const auto& it : items)
            if (!it.pass) return false;
        return !items.empty();
    }
};

struct SuiteOptions {
    std::string family = "AND";
    int n = 1;
    double eps = 0.3;
    uint64_t seed = 7;
    long long trials = 1000;
};

// Shared fixture: protocol tree in which Alice announces x and Bob
// answers a fixed choice from f(x, y).
ProtocolTree relation_tree(const Relation& f);

// Product of a base family with a deliberate answer flip on the last
// coordinate at (x, y) = (max, max); conditioning on success of the other
// coordinates is then non-trivial but high-probability.
ProductInstance flawed_product_instance(const std::string& family, int n, int t);

// Four-coin equality protocol that meets every hypothesis of the
// rectangle-extraction lemma exactly.
ZeroCommProtocol exact_eq_zerocomm();

SuiteResult suite_ratiovs1(const SuiteOptions& opt);
SuiteResult suite_substate(const SuiteOptions& opt);
SuiteResult suite_pinsker(const SuiteOptions& opt);
SuiteResult suite_probofg(const SuiteOptions& opt);
SuiteResult suite_distclose(const SuiteOptions& opt);
SuiteResult suite_singlemessagecloseness(const SuiteOptions& opt);
SuiteResult suite_probnonabort_reduced(const SuiteOptions& opt);
SuiteResult suite_zeroprotocolimpliesrec(const SuiteOptions& opt);
SuiteResult suite_goodcoordinate(const SuiteOptions& opt);
SuiteResult suite_dgeqsrec(const SuiteOptions& opt);
SuiteResult suite_eqv(const SuiteOptions& opt);

std::vector<std::string> suite_names();
// runs one named suite, or every suite for name == "all"
std::vector<SuiteResult> run_suites(const std::string& name,
                                    const SuiteOptions& opt);

} // namespace rectbound
