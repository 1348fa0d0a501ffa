#include "rectbound/suites.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rectbound/bounds.hpp"
#include "rectbound/infotheory.hpp"
#include "rectbound/rng.hpp"

namespace rectbound {

namespace {

std::vector<double> random_dist(SplitMix64& rng, int n) {
    std::vector<double> v(n);
    double s = 0.0;
    for (auto& x : v) {
        x = -std::log(1.0 - rng.next_double() + 1e-300);
        s += x;
    }
    for (auto& x : v) x /= s;
    return v;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

SuiteItem counted_item(const std::string& label, long long good,
                       long long total) {
    SuiteItem it;
    it.label = label;
    it.pass = good == total;
    it.detail = std::to_string(good) + "/" + std::to_string(total);
    return it;
}

} // namespace

ProtocolTree relation_tree(const Relation& f) {
    std::vector<std::vector<int>> out(f.x_size, std::vector<int>(f.y_size, 0));
    for (int x = 0; x < f.x_size; ++x)
        for (int y = 0; y < f.y_size; ++y) out[x][y] = f.at(x, y).front();
    return alice_sends_x_tree(f.x_size, f.y_size, f.z_size, out);
}

ProductInstance flawed_product_instance(const std::string& family, int n,
                                        int t) {
    FamilyInstance fam = make_family(family, n);
    const Relation& f = fam.relation;
    if (f.x_size > 4 || f.y_size > 4)
        throw std::invalid_argument("flawed_product_instance: base too large");
    int nxv = 1, nyv = 1;
    for (int i = 0; i < t; ++i) {
        nxv *= f.x_size;
        nyv *= f.y_size;
    }
    std::vector<std::vector<int>> out(nxv, std::vector<int>(nyv, 0));
    for (int xv = 0; xv < nxv; ++xv) {
        auto xd = tuple_digits(xv, f.x_size, t);
        for (int yv = 0; yv < nyv; ++yv) {
            auto yd = tuple_digits(yv, f.y_size, t);
            std::vector<int> zd(t);
            for (int i = 0; i < t; ++i) zd[i] = f.at(xd[i], yd[i]).front();
            if (xd[t - 1] == f.x_size - 1 && yd[t - 1] == f.y_size - 1)
                zd[t - 1] = (zd[t - 1] + 1) % f.z_size;
            out[xv][yv] = tuple_index(zd, f.z_size);
        }
    }
    int nzv = 1;
    for (int i = 0; i < t; ++i) nzv *= f.z_size;
    ProtocolTree tree = alice_sends_x_tree(nxv, nyv, nzv, out);
    return make_product_instance(f, fam.distribution, t, std::move(tree));
}

ZeroCommProtocol exact_eq_zerocomm() {
    // four coins, each certifying one input cell of 2x2 equality
    ZeroCommProtocol P;
    P.x_size = 2;
    P.y_size = 2;
    P.z_size = 2;
    P.coin_count = 4;
    P.coin_mass.assign(4, 0.25);
    P.alice.assign(8, -1);
    P.bob.assign(8, -1);
    auto set = [&](int r, int ax, int az, int by, int bz) {
        P.alice[static_cast<size_t>(ax) * 4 + r] = az;
        P.bob[static_cast<size_t>(by) * 4 + r] = bz;
    };
    set(0, 0, 1, 0, 1);
    set(1, 1, 1, 1, 1);
    set(2, 0, 0, 1, 0);
    set(3, 1, 0, 0, 0);
    return P;
}

SuiteResult suite_ratiovs1(const SuiteOptions& opt) {
    SuiteResult res{"ratiovs1", {}};
    SplitMix64 rng(split_seed(opt.seed, 0x11));
    long long good = 0, pre = 0;
    for (long long i = 0; i < opt.trials; ++i) {
        int n = 2 + static_cast<int>(rng.next_below(7));
        auto a = random_dist(rng, n);
        auto b = random_dist(rng, n);
        double eps = 0.01 + 0.48 * rng.next_double();
        double theta = eps / 2.0;
        std::vector<double> ap(n);
        for (int k = 0; k < n; ++k) ap[k] = (1.0 - theta) * a[k] + theta * b[k];
        double r = 0.05 + 0.9 * rng.next_double();
        auto out = check_ratio_lemma(a, ap, eps, r);
        if (out.precondition_ok) ++pre;
        if (out.precondition_ok && out.pass) ++good;
    }
    res.items.push_back(counted_item("preconditions hold", pre, opt.trials));
    res.items.push_back(counted_item("both tail bounds", good, opt.trials));
    return res;
}

SuiteResult suite_substate(const SuiteOptions& opt) {
    SuiteResult res{"substate", {}};
    SplitMix64 rng(split_seed(opt.seed, 0x22));
    long long good = 0;
    for (long long i = 0; i < opt.trials; ++i) {
        int n = 2 + static_cast<int>(rng.next_below(7));
        auto x = random_dist(rng, n);
        auto xp = random_dist(rng, n);
        double delta = 0.05 + 0.9 * rng.next_double();
        auto out = check_substate(x, xp, delta);
        if (out.precondition_ok && out.pass) ++good;
    }
    res.items.push_back(counted_item("tail bound", good, opt.trials));
    return res;
}

SuiteResult suite_pinsker(const SuiteOptions& opt) {
    SuiteResult res{"pinsker", {}};
    SplitMix64 rng(split_seed(opt.seed, 0x33));
    long long good = 0;
    for (long long i = 0; i < opt.trials; ++i) {
        int n = 2 + static_cast<int>(rng.next_below(7));
        auto p = random_dist(rng, n);
        auto q = random_dist(rng, n);
        if (check_pinsker(p, q)) ++good;
    }
    res.items.push_back(counted_item("l1 <= sqrt(divergence)", good, opt.trials));
    return res;
}

namespace {

struct PipelineInstance {
    TranscriptFactorization fac;
    SamplerConfig cfg;
    DerivedTables der;
};

PipelineInstance conditioned_pipeline(const std::string& family, int n,
                                      double eps) {
    ProductInstance inst = flawed_product_instance(family, n, 2);
    std::vector<int> C{1};
    PipelineInstance p;
    p.fac = conditioned_coordinate_factorization(inst, C, 0);
    p.der = derived_quantities(p.fac);
    SamplerConfig probe = make_config(1.0, eps, std::min(1.0, p.fac.q),
                                      p.fac.m_size);
    auto pre = check_main_lemma_preconditions(p.fac, p.der, probe);
    double c = std::max(1.0, pre.info_budget * 1.05 + 0.01);
    p.cfg = make_config(c, eps, std::min(1.0, p.fac.q), p.fac.m_size);
    return p;
}

} // namespace

SuiteResult suite_probofg(const SuiteOptions& opt) {
    SuiteResult res{"probofg", {}};
    PipelineInstance p = conditioned_pipeline(opt.family, opt.n, opt.eps);
    GoodSets gs = good_sets(p.fac, p.der, p.cfg);
    res.items.push_back(
        {"p(G1) > 1-6eps", gs.claim_g1, fmt(gs.p_g1)});
    res.items.push_back(
        {"p(G2) >= 1-3eps/2", gs.claim_g2, fmt(gs.p_g2)});
    res.items.push_back(
        {"p(G1^G2) >= 1-15eps/2", gs.claim_g12, fmt(gs.p_g12)});
    res.items.push_back({"G1^G2 inside G", gs.claim_inclusion, ""});
    return res;
}

SuiteResult suite_distclose(const SuiteOptions& opt) {
    SuiteResult res{"distclose", {}};
    SplitMix64 rng(split_seed(opt.seed, 0x44));
    long long cond = 0, good = 0;
    for (long long i = 0; i < opt.trials; ++i) {
        int na = 2 + static_cast<int>(rng.next_below(5));
        int nb = 2 + static_cast<int>(rng.next_below(5));
        auto h = random_dist(rng, na);
        std::vector<double> f(static_cast<size_t>(na) * nb);
        std::vector<double> g(f.size());
        double delta1 = 0.0, delta2 = 0.0;
        for (int a = 0; a < na; ++a) {
            auto row = random_dist(rng, nb);
            for (int b = 0; b < nb; ++b)
                f[static_cast<size_t>(a) * nb + b] = row[b];
            bool modify = rng.next_below(2) == 0;
            double removed = 0.0;
            for (int b = 0; b < nb; ++b) {
                double v = row[b];
                if (modify && rng.next_below(3) == 0 && removed + v <= 0.4) {
                    double scale = rng.next_double();
                    g[static_cast<size_t>(a) * nb + b] = v * scale;
                    removed += v;
                } else {
                    g[static_cast<size_t>(a) * nb + b] = v;
                }
            }
            if (removed > 0.0) {
                delta1 = std::max(delta1, removed);
                delta2 += h[a];
            }
        }
        delta1 = std::min(1.0, delta1 + 1e-12);
        auto rep = check_distclose(h, f, g, na, nb, delta1, delta2 + 1e-12);
        if (rep.conditions_ok) ++cond;
        if (rep.conditions_ok && rep.pass) ++good;
    }
    res.items.push_back(counted_item("conditions hold", cond, opt.trials));
    res.items.push_back(counted_item("l1 and C bounds", good, opt.trials));
    return res;
}

SuiteResult suite_singlemessagecloseness(const SuiteOptions& opt) {
    SuiteResult res{"singlemessagecloseness", {}};
    for (const std::string fam : {"AND", "EQ"}) {
        PipelineInstance p = conditioned_pipeline(fam, 1, opt.eps);
        IdealizedOutcome out = idealized_outcome(p.fac, p.der, p.cfg);
        res.items.push_back({fam + " l1(XYM, X1Y1M1) <= 10eps", out.bound_ok,
                             fmt(out.l1_xym)});
        res.items.push_back({fam + " output distance below joint distance",
                             out.l1_outputs <= out.l1_xym + 1e-12,
                             fmt(out.l1_outputs)});
    }
    return res;
}

SuiteResult suite_probnonabort_reduced(const SuiteOptions& opt) {
    SuiteResult res{"probnonabort-reduced", {}};
    FamilyInstance fam = make_family(opt.family, opt.n);
    ProtocolTree tree = relation_tree(fam.relation);
    TranscriptFactorization fac = factorize(tree, fam.distribution);
    // rare-event statistics: the histogram check needs well over 30
    // conditioned samples, and the event rate is about 2^-(k+Delta+2),
    // which at Delta=4 means a few hundred thousand runs
    long long trials = std::max<long long>(opt.trials, 300000);
    double eps = std::min(opt.eps, 0.05); // the bound is vacuous for large eps
    for (double delta : {2.0, 3.0, 4.0}) {
        ConfigOverrides ov;
        ov.Delta = delta;
        ov.reduced = true;
        SamplerConfig cfg = make_config(1.0, eps, 1.0, fac.m_size, ov);
        SamplerReport rep = run_monte_carlo(fac, cfg, trials, opt.seed);
        std::string tag = "Delta=" + fmt(delta) + " ";
        double bc = rep.pr_Bc_given_E.defined ? rep.pr_Bc_given_E.value : 0.0;
        double bc_se = rep.pr_Bc_given_E.defined ? rep.pr_Bc_given_E.std_error
                                                 : 0.0;
        res.items.push_back({tag + "Pr[Bc|E] <= eps",
                             bc <= cfg.eps + 3.0 * bc_se,
                             fmt(bc) + " +- " + fmt(bc_se)});
        double h_bound = (1.0 - 11.5 * cfg.eps) *
                         std::exp2(-static_cast<double>(cfg.k) - cfg.Delta - 2.0);
        res.items.push_back(
            {tag + "Pr[H] >= (1-23eps/2) 2^-(k+Delta+2)",
             rep.pr_H.value >= h_bound - 3.0 * rep.pr_H.std_error,
             fmt(rep.pr_H.value) + " vs " + fmt(h_bound)});
        res.items.push_back({tag + "conditioned histogram close",
                             rep.h_events > 30 && rep.hist_ok,
                             fmt(rep.hist_l1) + " <= " +
                                 fmt(rep.hist_l1_threshold)});
    }
    return res;
}

SuiteResult suite_zeroprotocolimpliesrec(const SuiteOptions& opt) {
    (void)opt;
    SuiteResult res{"zeroprotocolimpliesrec", {}};
    ZeroCommProtocol P = exact_eq_zerocomm();
    FamilyInstance fam = make_family("EQ", 1);
    const double eps = 0.01, delta = 0.1, beta = 0.5, eps_prime = 0.3, c = 2.0;
    auto ex = extract_rectangle(P, fam.distribution, fam.relation,
                                fam.relation, 1, eps, delta, beta, eps_prime,
                                c);
    res.items.push_back({"hypotheses hold", ex.hypotheses_ok, ex.diagnostics});
    res.items.push_back({"rectangle found", ex.found, ex.diagnostics});
    res.items.push_back({"min-entropy within budget",
                         ex.found && ex.relent_value <= c / eps + 1e-9,
                         fmt(ex.relent_value)});
    res.items.push_back(
        {"restriction divergence equals min-entropy",
         ex.found && std::fabs(ex.relent_value - ex.minent_value) <= 1e-9, ""});
    res.items.push_back({"conditional error within bound",
                         ex.found && ex.err <= ex.err_bound + 1e-12,
                         fmt(ex.err) + " <= " + fmt(ex.err_bound)});
    res.items.push_back(
        {"amplified error below target",
         ex.err_bound < (1.0 + eps_prime) * delta / beta, ""});
    auto vio = srec_violation_report(P, fam.distribution, fam.relation, 1, eps,
                                     delta, beta, eps_prime, c);
    res.items.push_back({"every nearby total function extracts",
                         vio.all_extractions_found,
                         std::to_string(vio.g_count) + " checked"});
    res.items.push_back({"smooth bound below budget", vio.consistent,
                         fmt(vio.srec_value) + " < " + fmt(vio.budget)});
    return res;
}

SuiteResult suite_goodcoordinate(const SuiteOptions& opt) {
    SuiteResult res{"goodcoordinate", {}};
    std::string fam = opt.family == "AND" || opt.family == "EQ" ? opt.family
                                                                : "AND";
    ProductInstance inst = flawed_product_instance(fam, 1, 2);
    int comm = 0;
    for (int leaf : inst.tree.leaves())
        comm = std::max(comm, static_cast<int>(inst.tree.path_bits(leaf).size()));
    const double delta1 = 0.25;
    double c = comm / (delta1 * inst.t);
    auto rep = check_goodcoordinate(inst, {1}, delta1, c);
    res.items.push_back({"precondition holds", rep.precondition_ok,
                         "Pr[success] = " + fmt(rep.pr_success)});
    for (const auto& chk : rep.checks)
        res.items.push_back({chk.name, chk.ok,
                             fmt(chk.lhs) + " vs " + fmt(chk.rhs)});
    res.items.push_back({"qualifying coordinate found", rep.j >= 0,
                         "j = " + std::to_string(rep.j)});
    return res;
}

SuiteResult suite_dgeqsrec(const SuiteOptions& opt) {
    (void)opt;
    SuiteResult res{"dgeqsrec", {}};
    struct Case {
        const char* family;
        int n;
        int z;
        double eps, eps_prime, delta;
    };
    const Case cases[] = {
        {"AND", 1, 1, 0.01, 0.2, 0.15},
        {"XOR", 1, 1, 0.01, 0.5, 0.1},
        {"EQ", 2, 1, 0.005, 0.2, 0.1},
    };
    for (const auto& cs : cases) {
        FamilyInstance fam = make_family(cs.family, cs.n);
        auto rep = check_dgeqsrec(fam.relation, fam.distribution, cs.z, cs.eps,
                                  cs.eps_prime, cs.delta);
        std::string tag = std::string(cs.family) + " n=" +
                          std::to_string(cs.n) + " ";
        res.items.push_back({tag + "precondition", rep.precondition_ok, ""});
        res.items.push_back(
            {tag + "D >= srec - log(4/eps)", rep.pass,
             std::to_string(rep.d_complexity) + " >= " + fmt(rep.rhs)});
    }
    return res;
}

SuiteResult suite_eqv(const SuiteOptions& opt) {
    (void)opt;
    SuiteResult res{"eqv", {}};
    for (const std::string fam : {"AND", "XOR", "EQ"}) {
        for (double eps : {0.1, 0.2}) {
            FamilyInstance f = make_family(fam, 2);
            auto lp = srec_lp(f.relation, 1, eps);
            auto ex = lemma_eqv_extract(f.relation, 1, eps, lp);
            std::string tag = fam + " eps=" + fmt(eps) + " ";
            res.items.push_back(
                {tag + "entropy bound certifies LP value", ex.verified,
                 fmt(ex.lrec_infinite
                         ? std::numeric_limits<double>::infinity()
                         : ex.lrec_value) +
                     " >= " + fmt(ex.claimed_lower_bound)});
        }
    }
    return res;
}

std::vector<std::string> suite_names() {
    return {"ratiovs1",
            "substate",
            "pinsker",
            "probofg",
            "distclose",
            "singlemessagecloseness",
            "probnonabort-reduced",
            "zeroprotocolimpliesrec",
            "goodcoordinate",
            "dgeqsrec",
            "eqv"};
}

std::vector<SuiteResult> run_suites(const std::string& name,
                                    const SuiteOptions& opt) {
    std::vector<SuiteResult> out;
    auto want = [&](const char* s) { return name == "all" || name == s; };
    if (want("ratiovs1")) out.push_back(suite_ratiovs1(opt));
    if (want("substate")) out.push_back(suite_substate(opt));
    if (want("pinsker")) out.push_back(suite_pinsker(opt));
    if (want("probofg")) out.push_back(suite_probofg(opt));
    if (want("distclose")) out.push_back(suite_distclose(opt));
    if (want("singlemessagecloseness"))
        out.push_back(suite_singlemessagecloseness(opt));
    if (want("probnonabort-reduced"))
        out.push_back(suite_probnonabort_reduced(opt));
    if (want("zeroprotocolimpliesrec"))
        out.push_back(suite_zeroprotocolimpliesrec(opt));
    if (want("goodcoordinate")) out.push_back(suite_goodcoordinate(opt));
    if (want("dgeqsrec")) out.push_back(suite_dgeqsrec(opt));
    if (want("eqv")) out.push_back(suite_eqv(opt));
    if (out.empty())
        throw std::invalid_argument("unknown verification suite: " + name);
    return out;
}

} // namespace rectbound
