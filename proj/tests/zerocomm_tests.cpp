#include "doctest.h"

#include <cmath>
#include <vector>

#include "rectbound/family.hpp"
#include "rectbound/suites.hpp"
#include "rectbound/zerocomm.hpp"

using namespace rectbound;

namespace {

// one shared coin: answer z0 on A0 x B0, abort elsewhere
ZeroCommProtocol one_rectangle_protocol(int nx, int ny, int nz, int z0,
                                        uint64_t rows, uint64_t cols) {
    ZeroCommProtocol P;
    P.x_size = nx;
    P.y_size = ny;
    P.z_size = nz;
    P.coin_count = 1;
    P.coin_mass = {1.0};
    P.alice.assign(nx, -1);
    P.bob.assign(ny, -1);
    for (int x = 0; x < nx; ++x)
        if ((rows >> x) & 1) P.alice[x] = z0;
    for (int y = 0; y < ny; ++y)
        if ((cols >> y) & 1) P.bob[y] = z0;
    return P;
}

} // namespace

TEST_CASE("protocol validation rejects malformed tables") {
    ZeroCommProtocol P = one_rectangle_protocol(2, 2, 2, 1, 0b01, 0b01);
    P.validate();
    P.coin_mass = {0.5};
    CHECK_THROWS(P.validate());
    P.coin_mass = {1.0};
    P.alice[0] = 5;
    CHECK_THROWS(P.validate());
}

TEST_CASE("one-coin protocol conditions to its rectangle, renormalized") {
    auto P = one_rectangle_protocol(2, 2, 2, 1, 0b01, 0b11); // {0} x {0,1}
    auto xy = Distribution::uniform(2, 2);
    auto cj = conditioned_joint(P, xy);
    CHECK(cj.pr_agree == doctest::Approx(0.5));
    CHECK(cj.x1y1(0, 0) == doctest::Approx(0.5));
    CHECK(cj.x1y1(0, 1) == doctest::Approx(0.5));
    CHECK(cj.x1y1(1, 0) == doctest::Approx(0.0));
    CHECK(cj.x1y1(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("a protocol that always aborts cannot be conditioned") {
    ZeroCommProtocol P = one_rectangle_protocol(2, 2, 2, 1, 0, 0);
    CHECK_THROWS(conditioned_joint(P, Distribution::uniform(2, 2)));
}

TEST_CASE("two disjoint one-rectangle coins mix by coin mass") {
    ZeroCommProtocol P;
    P.x_size = 2;
    P.y_size = 2;
    P.z_size = 2;
    P.coin_count = 2;
    P.coin_mass = {0.75, 0.25};
    // coin 0: answer 1 on {0} x {0}; coin 1: answer 0 on {1} x {1}
    P.alice = {1, -1, -1, 0};
    P.bob = {1, -1, -1, 0};
    auto xy = Distribution::uniform(2, 2);
    auto cj = conditioned_joint(P, xy);
    CHECK(cj.pr_agree == doctest::Approx(0.25)); // each coin agrees on 1 cell
    // conditioned mixture: 0.75 on (0,0), 0.25 on (1,1)
    CHECK(cj.x1y1(0, 0) == doctest::Approx(0.75));
    CHECK(cj.x1y1(1, 1) == doctest::Approx(0.25));
    CHECK(cj.rz_mass[0 * 2 + 1] == doctest::Approx(0.75 * 0.25));
    CHECK(cj.rz_mass[1 * 2 + 0] == doctest::Approx(0.25 * 0.25));
}

TEST_CASE("always-correct one-rectangle protocol extracts itself") {
    // f = EQ on 2x2; rectangle {0} x {0} answers 1, always correct there
    auto fam = make_family("EQ", 1);
    auto P = one_rectangle_protocol(2, 2, 2, 1, 0b01, 0b01);
    auto cj = conditioned_joint(P, fam.distribution);
    // reference = the conditioned inputs themselves, so the closeness
    // hypothesis holds with any eps
    double c = -std::log2(cj.pr_agree) + 0.1;
    auto res = extract_rectangle(P, cj.x1y1, fam.relation, fam.relation, 1,
                                 0.01, 0.1, 0.5, 0.3, c);
    // reference distribution equals the conditioned one, so l1 = 0
    REQUIRE(res.hypotheses_ok);
    REQUIRE(res.found);
    CHECK(res.r0 == 0);
    CHECK(res.err == doctest::Approx(0.0));
    CHECK(res.relent_value == doctest::Approx(res.minent_value));
    // the restriction covers the whole reference mass: S_inf = -log 1 = 0
    CHECK(res.minent_value == doctest::Approx(0.0));
    CHECK(res.rect.contains(0, 0));
}

TEST_CASE("extraction picks the dominant good coin in a mixture") {
    // coin 0 (mass 0.95): correct answer 1 on the (1,1) cell of AND
    // coin 1 (mass 0.05): wrong answer 1 on the (0,0) cell
    ZeroCommProtocol P;
    P.x_size = 2;
    P.y_size = 2;
    P.z_size = 2;
    P.coin_count = 2;
    P.coin_mass = {0.95, 0.05};
    P.alice = {-1, 1, 1, -1};
    P.bob = {-1, 1, 1, -1};
    auto fam = make_family("AND", 1);
    auto cj = conditioned_joint(P, fam.distribution);
    // eps covers the conditioned wrong-answer mass of 0.05
    double c = -std::log2(cj.pr_agree) + 0.1;
    auto res = extract_rectangle(P, cj.x1y1, fam.relation, fam.relation, 1,
                                 0.06, 0.3, 0.5, 1.5, c);
    REQUIRE(res.hypotheses_ok);
    REQUIRE(res.found);
    CHECK(res.r0 == 0);
    CHECK(res.err <= res.err_bound + 1e-12);
    CHECK(res.relent_value <= res.relent_budget + 1e-12);
}

TEST_CASE("violated closeness hypothesis is reported, not silently passed") {
    auto fam = make_family("EQ", 1);
    auto P = one_rectangle_protocol(2, 2, 2, 1, 0b01, 0b01);
    // reference = uniform, but the conditioned inputs are a point mass:
    // l1 = 0.75 > eps = 0.1
    auto res = extract_rectangle(P, fam.distribution, fam.relation,
                                 fam.relation, 1, 0.1, 0.3, 0.9, 5.0, 3.0);
    CHECK_FALSE(res.hypotheses_ok);
    CHECK_FALSE(res.found);
    CHECK_FALSE(res.diagnostics.empty());
}

TEST_CASE("the four-coin equality protocol satisfies the full report") {
    auto P = exact_eq_zerocomm();
    auto fam = make_family("EQ", 1);
    auto rep = srec_violation_report(P, fam.distribution, fam.relation, 1,
                                     0.01, 0.1, 0.5, 0.3, 2.0);
    CHECK(rep.all_extractions_found);
    CHECK(rep.g_count > 0);
    CHECK(rep.consistent);
    CHECK_FALSE(rep.srec_infinite);
    CHECK(rep.srec_value < rep.budget);
}

TEST_CASE("constant relation gives a zero smooth bound in the report") {
    // full-rectangle protocol always answering 1, f constant 1
    auto P = one_rectangle_protocol(2, 2, 2, 1, 0b11, 0b11);
    Relation f(2, 2, 2);
    for (auto& s : f.accept) s = {1};
    auto rep = srec_violation_report(P, Distribution::uniform(2, 2), f, 1,
                                     0.01, 0.1, 0.5, 0.3, 1.0);
    CHECK(rep.all_extractions_found);
    CHECK(rep.consistent);
    CHECK(rep.srec_value == doctest::Approx(0.0));
    CHECK(rep.srec_value < rep.budget);
}

TEST_CASE("sampler runs materialize as a zero-communication protocol") {
    auto fam = make_family("AND", 1);
    auto fac = factorize(relation_tree(fam.relation), fam.distribution);
    ConfigOverrides ov;
    ov.Delta = 2.0;
    ov.T = 1;
    ov.k = 1;
    ov.reduced = true;
    auto cfg = make_config(1.0, 0.3, 1.0, fac.m_size, ov);
    auto P = sampler_to_zerocomm(fac, cfg, 4);
    P.validate();
    CHECK(P.x_size == 2);
    CHECK(P.y_size == 2);
    auto cj = conditioned_joint(P, fam.distribution);
    CHECK(cj.pr_agree > 0.0);
    CHECK(cj.pr_agree <= 1.0);
}

TEST_CASE("the bridge rejects non-reduced configurations") {
    auto fam = make_family("AND", 1);
    auto fac = factorize(relation_tree(fam.relation), fam.distribution);
    auto cfg = make_config(1.0, 0.3, 1.0, fac.m_size);
    CHECK_THROWS(sampler_to_zerocomm(fac, cfg, 4));
}
