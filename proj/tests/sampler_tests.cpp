#include "doctest.h"

#include <cmath>
#include <vector>

#include "rectbound/directproduct.hpp"
#include "rectbound/family.hpp"
#include "rectbound/infotheory.hpp"
#include "rectbound/rng.hpp"
#include "rectbound/sampler.hpp"
#include "rectbound/suites.hpp"

using namespace rectbound;

namespace {

// p uniform 2x2, a single always-sent message: the fully degenerate run
TranscriptFactorization degenerate_instance() {
    TranscriptFactorization fac;
    fac.p = Distribution::uniform(2, 2);
    fac.m_size = 1;
    fac.u_x = {1.0, 1.0};
    fac.u_y = {1.0, 1.0};
    fac.q = 1.0;
    fac.output_of = {0};
    return fac;
}

// two-coordinate AND product conditioned on success at the other
// coordinate; every input keeps positive mass and q stays below 1
TranscriptFactorization conditioned_and_instance() {
    auto inst = flawed_product_instance("AND", 1, 2);
    return conditioned_coordinate_factorization(inst, {1}, 0);
}

// small unconditioned instance for the Monte Carlo runs (tiny |M| keeps
// the per-trial loop short)
TranscriptFactorization mc_instance() {
    auto fam = make_family("AND", 1);
    return factorize(relation_tree(fam.relation), fam.distribution);
}

SamplerConfig config_for(const TranscriptFactorization& fac, double eps) {
    JointTable jt({"x", "y", "m"}, {fac.p.x_size, fac.p.y_size, fac.m_size});
    for (int x = 0; x < fac.p.x_size; ++x)
        for (int y = 0; y < fac.p.y_size; ++y)
            for (int m = 0; m < fac.m_size; ++m) {
                int idx[3] = {x, y, m};
                jt.at(idx) = fac.joint(x, y, m);
            }
    double info = cond_mutual_info(jt, "x", "m", "y") +
                  cond_mutual_info(jt, "y", "m", "x");
    double c = std::max(1.0, info * 1.05 + 0.01);
    return make_config(c, eps, std::min(1.0, fac.q), fac.m_size);
}

} // namespace

TEST_CASE("parameter derivation matches the closed forms") {
    auto cfg = make_config(1.0, 0.3, 1.0, 4);
    CHECK(cfg.Delta == doctest::Approx((1.0 / 0.3 + 1.0) / 0.3 + 2.0));
    CHECK(cfg.Delta == doctest::Approx(16.4444444444).epsilon(1e-9));
    CHECK(cfg.k == 4); // ceil(log2((3/0.3) ln(1/0.3))) = ceil(log2 12.0397)
    long long want_t = static_cast<long long>(
        std::ceil(2.0 * 4 * std::pow(2.0, cfg.Delta) * std::log(1.0 / 0.3)));
    CHECK(cfg.T == want_t);
}

TEST_CASE("parameter overrides require the reduced flag") {
    ConfigOverrides ov;
    ov.Delta = 4.0;
    CHECK_THROWS(make_config(1.0, 0.3, 1.0, 4, ov));
    ov.reduced = true;
    auto cfg = make_config(1.0, 0.3, 1.0, 4, ov);
    CHECK(cfg.Delta == doctest::Approx(4.0));
    CHECK(cfg.reduced);
}

TEST_CASE("epsilon outside (0, 1/3) is rejected") {
    CHECK_THROWS(make_config(1.0, 0.0, 1.0, 4));
    CHECK_THROWS(make_config(1.0, 0.34, 1.0, 4));
    CHECK_THROWS(make_config(1.0, 0.3, 0.0, 4));
}

TEST_CASE("degenerate instance: all acceptance weights are 1") {
    auto fac = degenerate_instance();
    auto der = derived_quantities(fac);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            CHECK(der.axy(x, y) == doctest::Approx(1.0));
            CHECK(der.mxy(x, y, 0) == doctest::Approx(1.0));
        }
    for (int x = 0; x < 2; ++x) {
        CHECK(der.alpha_x[x] == doctest::Approx(1.0));
        CHECK(der.vx(x, 0) == doctest::Approx(1.0));
    }
}

TEST_CASE("alice-sends-x factorization has unit cell acceptance everywhere") {
    auto fam = make_family("AND", 1);
    auto fac = factorize(relation_tree(fam.relation), fam.distribution);
    auto der = derived_quantities(fac);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            CHECK(der.axy(x, y) == doctest::Approx(1.0));
}

TEST_CASE("per-input message law matches the marginal-conditional oracle") {
    auto fac = conditioned_and_instance();
    auto der = derived_quantities(fac);
    for (int x = 0; x < fac.p.x_size; ++x) {
        // oracle: Pr[m | X=x] from the explicit joint
        double px = 0;
        std::vector<double> pm(fac.m_size, 0.0);
        for (int y = 0; y < fac.p.y_size; ++y)
            for (int m = 0; m < fac.m_size; ++m) {
                pm[m] += fac.joint(x, y, m);
                px += fac.joint(x, y, m);
            }
        for (int m = 0; m < fac.m_size; ++m) {
            double want = pm[m] / px;
            double got = fac.ux(x, m) * der.vx(x, m) / der.alpha_x[x];
            CHECK(std::abs(got - want) < 1e-12);
        }
    }
}

TEST_CASE("degenerate instance: the good sets are everything") {
    auto fac = degenerate_instance();
    auto der = derived_quantities(fac);
    auto cfg = config_for(fac, 0.3);
    auto pre = check_main_lemma_preconditions(fac, der, cfg);
    CHECK(pre.ok);
    CHECK(pre.relent_xy_p == doctest::Approx(0.0));
    CHECK(pre.info_budget == doctest::Approx(0.0));
    auto gs = good_sets(fac, der, cfg);
    for (int c = 0; c < 4; ++c) {
        CHECK(gs.g1[c] == 1);
        CHECK(gs.g2[c] == 1);
        CHECK(gs.g[c] == 1);
    }
    CHECK(gs.claim_g1);
    CHECK(gs.claim_g2);
    CHECK(gs.claim_g12);
    CHECK(gs.claim_inclusion);
}

TEST_CASE("conditioned instance passes every good-set claim at eps 0.3") {
    auto fac = conditioned_and_instance();
    auto der = derived_quantities(fac);
    auto cfg = config_for(fac, 0.3);
    auto gs = good_sets(fac, der, cfg);
    CHECK(gs.claim_g1);
    CHECK(gs.claim_g2);
    CHECK(gs.claim_g12);
    CHECK(gs.claim_inclusion);
}

TEST_CASE("violated information budget is a precondition error") {
    auto fac = conditioned_and_instance();
    auto der = derived_quantities(fac);
    SamplerConfig cfg = make_config(1e-6, 0.3, std::min(1.0, fac.q), fac.m_size);
    auto pre = check_main_lemma_preconditions(fac, der, cfg);
    CHECK_FALSE(pre.ok);
    CHECK_THROWS(good_sets(fac, der, cfg));
}

TEST_CASE("degenerate instance: idealized outcome equals the real one") {
    auto fac = degenerate_instance();
    auto der = derived_quantities(fac);
    auto cfg = config_for(fac, 0.3);
    auto out = idealized_outcome(fac, der, cfg);
    CHECK(out.l1_xym == doctest::Approx(0.0));
    CHECK(out.C == doctest::Approx(1.0));
    CHECK(out.bound_ok);
}

TEST_CASE("conditioned instance: idealized outcome within 10 eps") {
    auto fac = conditioned_and_instance();
    auto der = derived_quantities(fac);
    auto cfg = config_for(fac, 0.3);
    auto out = idealized_outcome(fac, der, cfg);
    CHECK(out.bound_ok);
    CHECK(out.l1_xym <= 10 * cfg.eps + 1e-9);
    CHECK(out.l1_outputs <= out.l1_xym + 1e-12);
    // normalizer equals the total idealized weight, including the 1/q factor
    double total = 0;
    for (int x = 0; x < fac.p.x_size; ++x)
        for (int y = 0; y < fac.p.y_size; ++y)
            for (int m = 0; m < fac.m_size; ++m)
                total += fac.p(x, y) *
                         out.w[(static_cast<size_t>(x) * fac.p.y_size + y) *
                                   fac.m_size +
                               m] /
                         fac.q;
    CHECK(out.C == doctest::Approx(total));
}

TEST_CASE("two-table closeness: g equal to f gives distance zero") {
    std::vector<double> h{0.5, 0.5};
    std::vector<double> f{0.3, 0.7, 0.6, 0.4};
    auto rep = check_distclose(h, f, f, 2, 2, 0.0, 0.0);
    CHECK(rep.conditions_ok);
    CHECK(rep.l1 == doctest::Approx(0.0));
    CHECK(rep.C == doctest::Approx(1.0));
    CHECK(rep.pass);
}

TEST_CASE("two-table closeness over 1000 random admissible instances") {
    SplitMix64 g(55);
    int passes = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        int na = 2 + static_cast<int>(g.next_below(3));
        int nb = 2 + static_cast<int>(g.next_below(3));
        std::vector<double> h(na);
        double s = 0;
        for (auto& v : h) s += v = -std::log(1.0 - g.next_double());
        for (auto& v : h) v /= s;
        std::vector<double> f(static_cast<size_t>(na) * nb), gg(f.size());
        // shrink some entries on a subset of rows; delta1 covers the worst
        // per-row loss and delta2 the h-mass of every touched row
        double delta1 = 0, delta2 = 0;
        for (int a = 0; a < na; ++a) {
            double rs = 0;
            for (int b = 0; b < nb; ++b)
                rs += f[a * nb + b] = -std::log(1.0 - g.next_double());
            for (int b = 0; b < nb; ++b) f[a * nb + b] /= rs;
            bool modify = g.next_below(2) == 0;
            double removed = 0;
            for (int b = 0; b < nb; ++b) {
                double v = f[a * nb + b];
                if (modify && g.next_below(3) == 0 && removed + v <= 0.4) {
                    gg[a * nb + b] = v * g.next_double();
                    removed += v;
                } else {
                    gg[a * nb + b] = v;
                }
            }
            if (removed > 0) {
                delta1 = std::max(delta1, removed);
                delta2 += h[a];
            }
        }
        delta1 = std::min(1.0, delta1 + 1e-12);
        auto rep = check_distclose(h, f, gg, na, nb, delta1, delta2 + 1e-12);
        if (rep.conditions_ok && rep.pass) ++passes;
    }
    CHECK(passes == 1000);
}

TEST_CASE("degenerate accept probability is exactly alpha_x / (|M| 2^Delta)") {
    auto fac = degenerate_instance();
    auto der = derived_quantities(fac);
    ConfigOverrides ov;
    ov.Delta = 2.0;
    ov.reduced = true;
    auto cfg = make_config(1.0, 0.3, 1.0, 1, ov);
    auto gs = good_sets(fac, der, cfg);
    auto ap = analytic_accept_probabilities(fac, der, cfg, gs, 0, 0);
    CHECK(ap.alice == doctest::Approx(1.0 / (1 * 4)));
    CHECK(ap.in_g12);
}

TEST_CASE("accept-probability sandwich holds on good cells of the pipeline") {
    auto fac = conditioned_and_instance();
    auto der = derived_quantities(fac);
    auto cfg = config_for(fac, 0.3);
    auto gs = good_sets(fac, der, cfg);
    int checked = 0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            auto ap = analytic_accept_probabilities(fac, der, cfg, gs, x, y);
            if (!ap.in_g12) continue;
            CHECK(ap.sandwich_ok);
            ++checked;
        }
    CHECK(checked > 0);
}

TEST_CASE("monte carlo runs are reproducible for a fixed seed") {
    auto fac = degenerate_instance();
    ConfigOverrides ov;
    ov.Delta = 2.0;
    ov.k = 2;
    ov.reduced = true;
    auto cfg = make_config(1.0, 0.05, 1.0, 1, ov);
    auto a = run_monte_carlo(fac, cfg, 20000, 123);
    auto b = run_monte_carlo(fac, cfg, 20000, 123);
    CHECK(a.pr_E.value == b.pr_E.value);
    CHECK(a.pr_H.value == b.pr_H.value);
    CHECK(a.hist_l1 == b.hist_l1);
    CHECK(a.h_events == b.h_events);
    auto c = run_monte_carlo(fac, cfg, 20000, 124);
    CHECK(a.pr_E.value != c.pr_E.value);
}

TEST_CASE("monte carlo histogram tracks the idealized outcome") {
    auto fac = mc_instance();
    ConfigOverrides ov;
    ov.Delta = 3.0;
    ov.reduced = true;
    auto cfg = make_config(1.0, 0.05, std::min(1.0, fac.q), fac.m_size, ov);
    auto rep = run_monte_carlo(fac, cfg, 100000, 7);
    CHECK(rep.h_events > 30);
    CHECK(rep.hist_ok);
    CHECK(rep.pr_H.value > 0.0);
    // the agreement bound: Pr[Bc | E] small at small eps
    CHECK(rep.pr_Bc_given_E.value <= cfg.eps + 3 * rep.pr_Bc_given_E.std_error);
}

TEST_CASE("pairwise-independent and fully random hashes behave alike") {
    auto fac = mc_instance();
    ConfigOverrides ov;
    ov.Delta = 3.0;
    ov.reduced = true;
    auto cfg = make_config(1.0, 0.05, std::min(1.0, fac.q), fac.m_size, ov);
    auto affine = run_monte_carlo(fac, cfg, 100000, 7, false);
    auto random = run_monte_carlo(fac, cfg, 100000, 7, true);
    double se = 3 * (affine.pr_E.std_error + random.pr_E.std_error) + 1e-9;
    CHECK(std::abs(affine.pr_E.value - random.pr_E.value) <= se);
}
