#include "doctest.h"

#include <cmath>
#include <vector>

#include "rectbound/family.hpp"
#include "rectbound/protocol.hpp"
#include "rectbound/rng.hpp"

using namespace rectbound;

namespace {

// full alternating tree of the given depth with random decision tables;
// z_size = 2, so the last transcript bit is the answer
ProtocolTree random_tree(SplitMix64& g, int nx, int ny, int depth) {
    ProtocolTree t;
    t.x_size = nx;
    t.y_size = ny;
    t.z_size = 2;
    // breadth-first complete binary tree: internal levels 0..depth-1
    int internal = (1 << depth) - 1;
    int total = (1 << (depth + 1)) - 1;
    t.nodes.resize(total);
    for (int i = 0; i < internal; ++i) {
        int level = 0;
        while ((2 << level) - 1 <= i) ++level;
        auto& nd = t.nodes[i];
        nd.leaf = false;
        nd.owner = level % 2;
        int in_size = nd.owner == 0 ? nx : ny;
        nd.decision.resize(in_size);
        for (auto& b : nd.decision) b = static_cast<int>(g.next_below(2));
        nd.child[0] = 2 * i + 1;
        nd.child[1] = 2 * i + 2;
    }
    for (int i = internal; i < total; ++i) t.nodes[i].leaf = true;
    t.validate();
    return t;
}

Distribution random_distribution(SplitMix64& g, int nx, int ny) {
    Distribution d(nx, ny);
    double s = 0;
    for (auto& v : d.mass) s += v = -std::log(1.0 - g.next_double());
    for (auto& v : d.mass) v /= s;
    return d;
}

} // namespace

TEST_CASE("single-leaf tree with a trivial answer space always outputs 0") {
    ProtocolTree t;
    t.x_size = 3;
    t.y_size = 3;
    t.z_size = 1;
    t.nodes.resize(1);
    t.nodes[0].leaf = true;
    t.validate();
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
            auto r = t.run(x, y);
            CHECK(r.output == 0);
            CHECK(r.transcript == 0);
        }
}

TEST_CASE("constant-answer tree always outputs that answer") {
    ProtocolTree t;
    t.x_size = 2;
    t.y_size = 2;
    t.z_size = 2;
    t.nodes.resize(3);
    t.nodes[0].leaf = false;
    t.nodes[0].owner = 1;
    t.nodes[0].decision = {1, 1}; // Bob always sends 1
    t.nodes[0].child[0] = 1;
    t.nodes[0].child[1] = 2;
    t.nodes[1].leaf = true;
    t.nodes[2].leaf = true;
    t.validate();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(t.run(x, y).output == 1);
}

TEST_CASE("alice-sends-x tree announces x in the leading transcript bits") {
    auto t = alice_sends_x_tree(2, 2, 2, {{0, 0}, {0, 1}});
    t.validate();
    auto lv = t.leaves();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            auto r = t.run(x, y);
            auto bits = t.path_bits(lv[r.transcript]);
            CHECK(bits.front() == x);
        }
}

TEST_CASE("alice-sends-x with Bob answering x AND y computes AND") {
    auto t = alice_sends_x_tree(2, 2, 2, {{0, 0}, {0, 1}});
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(t.run(x, y).output == (x & y));
}

TEST_CASE("tree JSON round trip preserves behavior") {
    SplitMix64 g(9);
    auto t = random_tree(g, 4, 4, 3);
    auto t2 = ProtocolTree::from_json(t.to_json());
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
            auto a = t.run(x, y);
            auto b = t2.run(x, y);
            CHECK(a.transcript == b.transcript);
            CHECK(a.output == b.output);
        }
}

TEST_CASE("alice-sends-x factorization: u_x selects the x branch, u_y is 1") {
    auto t = alice_sends_x_tree(2, 2, 2, {{0, 0}, {0, 1}});
    auto fac = factorize(t, Distribution::uniform(2, 2));
    CHECK(fac.q == doctest::Approx(1.0));
    auto lv = t.leaves();
    for (int m = 0; m < fac.m_size; ++m) {
        int first = t.path_bits(lv[m]).front();
        for (int x = 0; x < 2; ++x)
            CHECK(fac.ux(x, m) == doctest::Approx(first == x ? 1.0 : 0.0));
    }
    // y is only used in Bob's answer bit, which u_y tracks; every message
    // is announced by exactly one y per x branch, so u_y stays 0/1
    for (int y = 0; y < 2; ++y)
        for (int m = 0; m < fac.m_size; ++m)
            CHECK((fac.uy(y, m) == 0.0 || fac.uy(y, m) == 1.0));
}

TEST_CASE("single-leaf factorization is the trivial one") {
    ProtocolTree t;
    t.x_size = 2;
    t.y_size = 2;
    t.z_size = 1;
    t.nodes.resize(1);
    t.nodes[0].leaf = true;
    auto fac = factorize(t, Distribution::uniform(2, 2));
    CHECK(fac.m_size == 1);
    CHECK(fac.ux(0, 0) == doctest::Approx(1.0));
    CHECK(fac.ux(1, 0) == doctest::Approx(1.0));
    CHECK(fac.uy(0, 0) == doctest::Approx(1.0));
    CHECK(fac.q == doctest::Approx(1.0));
}

TEST_CASE("factorization reproduces direct simulation on random trees") {
    SplitMix64 g(77);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = random_tree(g, 4, 4, 3);
        auto p = random_distribution(g, 4, 4);
        auto fac = factorize(t, p);
        CHECK(std::abs(fac.mass() - fac.q) < 1e-12);
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y) {
                auto r = t.run(x, y);
                for (int m = 0; m < fac.m_size; ++m) {
                    double want = (m == r.transcript) ? p(x, y) : 0.0;
                    CHECK(std::abs(fac.joint(x, y, m) - want) < 1e-12);
                }
                CHECK(fac.output_of[r.transcript] == r.output);
            }
    }
}

TEST_CASE("conditioning on the full message set changes nothing") {
    SplitMix64 g(78);
    auto t = random_tree(g, 4, 4, 3);
    auto p = random_distribution(g, 4, 4);
    auto fac = factorize(t, p);
    std::vector<char> all(fac.m_size, 1);
    auto cond = condition_on_event(fac, all);
    CHECK(cond.q == doctest::Approx(fac.q));
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            for (int m = 0; m < fac.m_size; ++m)
                CHECK(cond.joint(x, y, m) ==
                      doctest::Approx(fac.joint(x, y, m)));
}

TEST_CASE("conditioning on one transcript restricts to its input rectangle") {
    auto t = alice_sends_x_tree(2, 2, 2, {{0, 0}, {0, 1}});
    auto fac = factorize(t, Distribution::uniform(2, 2));
    // pick the transcript reached by (1,1)
    int m0 = t.run(1, 1).transcript;
    std::vector<char> S(fac.m_size, 0);
    S[m0] = 1;
    auto cond = condition_on_event(fac, S);
    double total = 0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int m = 0; m < fac.m_size; ++m) {
                double v = cond.joint(x, y, m);
                total += v;
                if (m != m0) CHECK(v == doctest::Approx(0.0));
            }
    CHECK(total == doctest::Approx(1.0));
    CHECK(cond.joint(1, 1, m0) > 0.0);
}

TEST_CASE("conditioning matches the Bayes oracle on random trees and events") {
    SplitMix64 g(79);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = random_tree(g, 4, 4, 3);
        auto p = random_distribution(g, 4, 4);
        auto fac = factorize(t, p);
        std::vector<char> S(fac.m_size, 0);
        double pr_s = 0;
        for (auto& s : S) s = g.next_below(2) ? 1 : 0;
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y) {
                int m = t.run(x, y).transcript;
                if (S[m]) pr_s += p(x, y);
            }
        if (pr_s < 1e-9) continue;
        auto cond = condition_on_event(fac, S);
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y) {
                int m = t.run(x, y).transcript;
                for (int mm = 0; mm < fac.m_size; ++mm) {
                    double want = (mm == m && S[mm]) ? p(x, y) / pr_s : 0.0;
                    CHECK(std::abs(cond.joint(x, y, mm) - want) < 1e-9);
                }
            }
    }
}

TEST_CASE("transcript error measures the relation miss probability") {
    auto fam = make_family("AND", 1);
    auto good = alice_sends_x_tree(2, 2, 2, {{0, 0}, {0, 1}});
    CHECK(factorize(good, fam.distribution).err(fam.relation) ==
          doctest::Approx(0.0));
    auto bad = alice_sends_x_tree(2, 2, 2, {{0, 0}, {0, 0}}); // misses (1,1)
    CHECK(factorize(bad, fam.distribution).err(fam.relation) ==
          doctest::Approx(0.25));
}
