#include "doctest.h"

#include <cmath>
#include <vector>

#include "rectbound/directproduct.hpp"
#include "rectbound/family.hpp"
#include "rectbound/suites.hpp"

using namespace rectbound;

namespace {

// two-round Bob-only tree on 4x4 product inputs: he announces both bits of
// y as his answers, so coordinate i succeeds iff AND(x_i, y_i) == y_i
ProtocolTree guessing_product_tree() {
    ProtocolTree t;
    t.x_size = 4;
    t.y_size = 4;
    t.z_size = 4;
    t.nodes.resize(7);
    t.nodes[0].leaf = false;
    t.nodes[0].owner = 1;
    t.nodes[0].decision = {0, 0, 1, 1}; // y's coordinate-0 bit
    t.nodes[0].child[0] = 1;
    t.nodes[0].child[1] = 2;
    for (int i = 1; i <= 2; ++i) {
        t.nodes[i].leaf = false;
        t.nodes[i].owner = 1;
        t.nodes[i].decision = {0, 1, 0, 1}; // y's coordinate-1 bit
        t.nodes[i].child[0] = 2 * i + 1;
        t.nodes[i].child[1] = 2 * i + 2;
    }
    for (int i = 3; i < 7; ++i) t.nodes[i].leaf = true;
    t.validate();
    return t;
}

} // namespace

TEST_CASE("a perfect protocol at t = 1 always succeeds") {
    auto fam = make_family("AND", 1);
    auto tree = relation_tree(fam.relation);
    auto inst = make_product_instance(fam.relation, fam.distribution, 1, tree);
    auto sv = success_variables(inst);
    CHECK(sv.pr_success(1u) == doctest::Approx(1.0));
}

TEST_CASE("independent per-coordinate protocols multiply their successes") {
    auto fam = make_family("AND", 1);
    auto inst = make_product_instance(fam.relation, fam.distribution, 2,
                                      guessing_product_tree());
    auto sv = success_variables(inst);
    double p0 = sv.pr_success(0b01);
    double p1 = sv.pr_success(0b10);
    CHECK(p0 == doctest::Approx(0.75)); // wrong only at x_i=0, y_i=1
    CHECK(p1 == doctest::Approx(0.75));
    CHECK(sv.pr_success(0b11) == doctest::Approx(p0 * p1));
}

TEST_CASE("shared-budget success matches an exhaustive replay oracle") {
    auto inst = flawed_product_instance("AND", 1, 2);
    auto sv = success_variables(inst);
    for (uint32_t subset : {0u, 1u, 2u, 3u}) {
        double want = 0;
        for (int xv = 0; xv < 4; ++xv)
            for (int yv = 0; yv < 4; ++yv) {
                auto r = inst.tree.run(xv, yv);
                auto xd = tuple_digits(xv, 2, 2);
                auto yd = tuple_digits(yv, 2, 2);
                auto zd = tuple_digits(r.output, inst.base_f.z_size, 2);
                bool ok = true;
                for (int i = 0; i < 2; ++i)
                    if ((subset >> i) & 1)
                        ok = ok && inst.base_f.accepts(xd[i], yd[i], zd[i]);
                if (ok) want += inst.product_mu(xv, yv);
            }
        CHECK(sv.pr_success(subset) == doctest::Approx(want));
    }
}

TEST_CASE("t = 1 with no conditioning reduces to the plain factorization") {
    auto fam = make_family("AND", 1);
    auto tree = relation_tree(fam.relation);
    auto inst = make_product_instance(fam.relation, fam.distribution, 1, tree);
    auto fac = conditioned_coordinate_factorization(inst, {}, 0);
    auto plain = factorize(tree, fam.distribution);
    REQUIRE(fac.m_size % plain.m_size == 0);
    int coins = fac.m_size / plain.m_size;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int m = 0; m < plain.m_size; ++m) {
                double got = 0;
                for (int r = 0; r < coins; ++r)
                    got += fac.joint(x, y, r * plain.m_size + m);
                CHECK(std::abs(got - plain.joint(x, y, m)) < 1e-12);
            }
}

TEST_CASE("conditioned coordinate view matches direct conditioning") {
    auto inst = flawed_product_instance("AND", 1, 2);
    std::vector<int> C{0};
    int j = 1;
    auto fac = conditioned_coordinate_factorization(inst, C, j);

    // oracle: condition the full (xv, yv, m) joint on success at
    // coordinate 0, then marginalize to coordinate 1's inputs and m
    auto sv = success_variables(inst);
    const auto& full = sv.fac;
    int nm = full.m_size;
    std::vector<double> want(static_cast<size_t>(2) * 2 * nm, 0.0);
    double total = 0;
    for (int xv = 0; xv < 4; ++xv)
        for (int yv = 0; yv < 4; ++yv)
            for (int m = 0; m < nm; ++m) {
                double w = full.joint(xv, yv, m);
                if (w <= 0) continue;
                if (!(sv.t_mask[(static_cast<size_t>(xv) * 4 + yv) * nm + m] & 1u))
                    continue;
                auto xd = tuple_digits(xv, 2, 2);
                auto yd = tuple_digits(yv, 2, 2);
                want[(static_cast<size_t>(xd[j]) * 2 + yd[j]) * nm + m] += w;
                total += w;
            }
    for (auto& v : want) v /= total;

    REQUIRE(fac.m_size % nm == 0);
    int coins = fac.m_size / nm;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int m = 0; m < nm; ++m) {
                double got = 0;
                for (int r = 0; r < coins; ++r)
                    got += fac.joint(x, y, r * nm + m);
                CHECK(std::abs(got - want[(static_cast<size_t>(x) * 2 + y) * nm + m]) <
                      1e-9);
            }
}

TEST_CASE("conditioning on an impossible success event is an error") {
    // protocol answers a constant 0-tuple, base relation demands 1
    Relation f(2, 2, 2);
    for (auto& s : f.accept) s = {1};
    auto tree = alice_sends_x_tree(4, 4, 4, {{0, 0, 0, 0},
                                             {0, 0, 0, 0},
                                             {0, 0, 0, 0},
                                             {0, 0, 0, 0}});
    auto inst = make_product_instance(f, Distribution::uniform(2, 2), 2, tree);
    CHECK_THROWS(conditioned_coordinate_factorization(inst, {0}, 1));
}

TEST_CASE("independent protocols: every coordinate qualifies vacuously") {
    auto fam = make_family("AND", 1);
    auto inst = make_product_instance(fam.relation, fam.distribution, 2,
                                      guessing_product_tree());
    auto rep = check_goodcoordinate(inst, {}, 0.5, 4.0);
    REQUIRE(rep.precondition_ok);
    CHECK(rep.all_checks_ok);
    REQUIRE(rep.coords.size() == 2);
    for (const auto& cb : rep.coords) {
        CHECK(cb.qualifies);
        // conditioning on nothing leaves the inputs untouched
        CHECK(cb.relent == doctest::Approx(0.0));
    }
    CHECK(rep.j == 0);
}

TEST_CASE("shared-budget instance returns a coordinate meeting both bounds") {
    auto inst = flawed_product_instance("AND", 1, 2);
    double delta1 = 0.25;
    double comm = 8.0; // generous budget so c >= the true information cost
    auto rep = check_goodcoordinate(inst, {1}, delta1, comm);
    REQUIRE(rep.precondition_ok);
    CHECK(rep.all_checks_ok);
    REQUIRE(rep.j >= 0);
    const auto& cb = rep.coords[rep.j];
    CHECK(cb.qualifies);
    CHECK(cb.relent <= rep.bound_relent + 1e-9);
    CHECK(cb.info_r + cb.info_m <= rep.bound_info + 1e-9);
}

TEST_CASE("an unlikely conditioning event fails the precondition") {
    auto inst = flawed_product_instance("AND", 1, 2);
    // success probability is well below 2^{-delta1 t} for tiny delta1
    auto rep = check_goodcoordinate(inst, {0, 1}, 0.001, 8.0);
    CHECK_FALSE(rep.precondition_ok);
    CHECK_FALSE(rep.diagnostics.empty());
}

TEST_CASE("perfect per-coordinate protocols never decay") {
    auto fam = make_family("AND", 1);
    auto tree = relation_tree(fam.relation);
    auto curve = decay_experiment(fam.relation, fam.distribution, tree, 4, 1.0,
                                  2000, 11);
    REQUIRE(curve.size() == 4);
    for (const auto& pt : curve) CHECK(pt.success == doctest::Approx(1.0));
}

TEST_CASE("independent runs follow the product law within three sigma") {
    auto fam = make_family("AND", 1);
    auto tree = relation_tree(fam.relation);
    // budget 0: every coordinate answers the best a-priori guess (z = 0),
    // which is right with probability 3/4 independently per coordinate
    auto curve = decay_experiment(fam.relation, fam.distribution, tree, 6, 0.0,
                                  50000, 13);
    for (const auto& pt : curve) {
        double want = std::pow(0.75, pt.t);
        CHECK(std::abs(pt.success - want) <= 3 * pt.std_error + 1e-9);
    }
}

TEST_CASE("budget-starved curves are monotone non-increasing") {
    auto fam = make_family("AND", 1);
    auto tree = relation_tree(fam.relation);
    auto curve = decay_experiment(fam.relation, fam.distribution, tree, 8, 0.5,
                                  50000, 1);
    double prev = 1.0;
    for (const auto& pt : curve) {
        // allow Monte-Carlo noise on top of monotonicity
        CHECK(pt.success <= prev + 3 * pt.std_error + 1e-9);
        prev = pt.success;
    }
}

TEST_CASE("rejects a protocol tree whose input space does not match") {
    auto fam = make_family("AND", 1);
    auto tree = relation_tree(fam.relation); // 2x2 tree, wrong for t=2
    CHECK_THROWS(
        make_product_instance(fam.relation, fam.distribution, 2, tree));
}
