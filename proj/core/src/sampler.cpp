#include "rectbound/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "rectbound/infotheory.hpp"
#include "rectbound/rng.hpp"

namespace rectbound {

SamplerConfig make_config(double c, double eps, double q, int message_count,
                          const ConfigOverrides& ov) {
    if (!(eps > 0.0) || !(eps < 1.0 / 3.0))
        throw std::invalid_argument("make_config: eps must be in (0, 1/3)");
    if (!(c > 0.0)) throw std::invalid_argument("make_config: c must be positive");
    if (!(q > 0.0) || q > 1.0)
        throw std::invalid_argument("make_config: q must be in (0, 1]");
    if (message_count < 1)
        throw std::invalid_argument("make_config: message_count must be >= 1");
    bool has_override = ov.Delta.has_value() || ov.T.has_value() || ov.k.has_value();
    if (has_override && !ov.reduced)
        throw std::invalid_argument(
            "make_config: parameter overrides require the reduced flag");

    SamplerConfig cfg;
    cfg.c = c;
    cfg.eps = eps;
    cfg.q = q;
    cfg.message_count = message_count;
    cfg.reduced = ov.reduced;
    cfg.Delta = ov.Delta ? *ov.Delta : (c / eps + 1.0) / eps + 2.0;
    if (ov.T) {
        cfg.T = *ov.T;
    } else {
        double t = std::ceil((2.0 / q) * message_count * std::exp2(cfg.Delta) *
                             std::log(1.0 / eps));
        if (t > 9e18) throw std::invalid_argument("make_config: T overflows");
        cfg.T = static_cast<long long>(t);
    }
    cfg.k = ov.k ? *ov.k
                 : static_cast<int>(std::ceil(
                       std::log2((3.0 / eps) * std::log(1.0 / eps))));
    if (cfg.T < 1 || cfg.k < 1 || !(cfg.Delta > 0.0))
        throw std::invalid_argument("make_config: derived parameters out of range");
    return cfg;
}

DerivedTables derived_quantities(const TranscriptFactorization& fac) {
    DerivedTables d;
    d.nx = fac.p.x_size;
    d.ny = fac.p.y_size;
    d.nm = fac.m_size;
    d.alpha_xy.assign(static_cast<size_t>(d.nx) * d.ny, 0.0);
    d.alpha_x.assign(d.nx, 0.0);
    d.alpha_y.assign(d.ny, 0.0);
    d.v_x.assign(static_cast<size_t>(d.nx) * d.nm, 0.0);
    d.v_y.assign(static_cast<size_t>(d.ny) * d.nm, 0.0);
    d.m_xy.assign(static_cast<size_t>(d.nx) * d.ny * d.nm, 0.0);
    d.m_x.assign(static_cast<size_t>(d.nx) * d.nm, 0.0);
    d.m_y.assign(static_cast<size_t>(d.ny) * d.nm, 0.0);
    d.zero_alpha_xy.assign(static_cast<size_t>(d.nx) * d.ny, 0);

    for (int x = 0; x < d.nx; ++x) {
        auto py_x = fac.p.conditional_y_given_x(x);
        for (int m = 0; m < d.nm; ++m) {
            double v = 0.0;
            for (int y = 0; y < d.ny; ++y) v += py_x[y] * fac.uy(y, m);
            d.v_x[static_cast<size_t>(x) * d.nm + m] = v;
        }
    }
    for (int y = 0; y < d.ny; ++y) {
        auto px_y = fac.p.conditional_x_given_y(y);
        for (int m = 0; m < d.nm; ++m) {
            double v = 0.0;
            for (int x = 0; x < d.nx; ++x) v += px_y[x] * fac.ux(x, m);
            d.v_y[static_cast<size_t>(y) * d.nm + m] = v;
        }
    }
    for (int x = 0; x < d.nx; ++x)
        for (int y = 0; y < d.ny; ++y) {
            double a = 0.0;
            for (int m = 0; m < d.nm; ++m) a += fac.ux(x, m) * fac.uy(y, m);
            d.alpha_xy[static_cast<size_t>(x) * d.ny + y] = a;
            if (a <= 0.0) {
                d.zero_alpha_xy[static_cast<size_t>(x) * d.ny + y] = 1;
            } else {
                for (int m = 0; m < d.nm; ++m)
                    d.m_xy[(static_cast<size_t>(x) * d.ny + y) * d.nm + m] =
                        fac.ux(x, m) * fac.uy(y, m) / a;
            }
        }
    for (int x = 0; x < d.nx; ++x) {
        double a = 0.0;
        for (int m = 0; m < d.nm; ++m) a += fac.ux(x, m) * d.vx(x, m);
        d.alpha_x[x] = a;
        if (a > 0.0)
            for (int m = 0; m < d.nm; ++m)
                d.m_x[static_cast<size_t>(x) * d.nm + m] =
                    fac.ux(x, m) * d.vx(x, m) / a;
    }
    for (int y = 0; y < d.ny; ++y) {
        double a = 0.0;
        for (int m = 0; m < d.nm; ++m) a += fac.uy(y, m) * d.vy(y, m);
        d.alpha_y[y] = a;
        if (a > 0.0)
            for (int m = 0; m < d.nm; ++m)
                d.m_y[static_cast<size_t>(y) * d.nm + m] =
                    fac.uy(y, m) * d.vy(y, m) / a;
    }
    return d;
}

static JointTable build_xym_table(const TranscriptFactorization& fac) {
    JointTable t({"x", "y", "m"}, {fac.p.x_size, fac.p.y_size, fac.m_size});
    size_t i = 0;
    for (int x = 0; x < fac.p.x_size; ++x)
        for (int y = 0; y < fac.p.y_size; ++y)
            for (int m = 0; m < fac.m_size; ++m) t.p[i++] = fac.joint(x, y, m);
    return t;
}

MainLemmaPreconditions check_main_lemma_preconditions(
    const TranscriptFactorization& fac, const DerivedTables& der,
    const SamplerConfig& cfg) {
    MainLemmaPreconditions pre;
    // S(XY || p) for the factorization's induced input marginal
    std::vector<double> xy(static_cast<size_t>(der.nx) * der.ny, 0.0);
    for (int x = 0; x < der.nx; ++x)
        for (int y = 0; y < der.ny; ++y)
            xy[static_cast<size_t>(x) * der.ny + y] =
                fac.p(x, y) * der.axy(x, y) / fac.q;
    auto dv = relent(xy, fac.p.mass);
    pre.relent_xy_p = dv.infinite ? std::numeric_limits<double>::infinity()
                                  : dv.value;
    JointTable t = build_xym_table(fac);
    pre.info_budget = cond_mutual_info(t, "x", "m", "y") +
                      cond_mutual_info(t, "y", "m", "x");
    double budget_eps = cfg.eps * cfg.eps / 4.0;
    if (pre.relent_xy_p > budget_eps + 1e-12) {
        pre.message = "input closeness precondition fails";
    } else if (pre.info_budget > cfg.c + 1e-12) {
        pre.message = "information budget precondition fails";
    } else {
        pre.ok = true;
    }
    return pre;
}

GoodSets good_sets(const TranscriptFactorization& fac, const DerivedTables& der,
                   const SamplerConfig& cfg) {
    auto pre = check_main_lemma_preconditions(fac, der, cfg);
    if (!pre.ok) throw std::invalid_argument("good_sets: " + pre.message);

    const int nx = der.nx, ny = der.ny, nm = der.nm;
    const double eps = cfg.eps, q = fac.q;
    const double pow_delta = std::exp2(cfg.Delta);
    GoodSets gs;
    gs.g1.assign(static_cast<size_t>(nx) * ny, 0);
    gs.g2.assign(static_cast<size_t>(nx) * ny, 0);
    gs.g.assign(static_cast<size_t>(nx) * ny, 0);
    gs.div_sum.assign(static_cast<size_t>(nx) * ny, 0.0);
    gs.tail.assign(static_cast<size_t>(nx) * ny, 0.0);

    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            size_t cell = static_cast<size_t>(x) * ny + y;
            bool in_g1 = std::fabs(1.0 - der.axy(x, y) / q) <= 0.5 &&
                         std::fabs(1.0 - der.alpha_x[x] / q) <= 0.5 &&
                         std::fabs(1.0 - der.alpha_y[y] / q) <= 0.5;
            gs.g1[cell] = in_g1 ? 1 : 0;

            std::span<const double> mxy(der.m_xy.data() + cell * nm,
                                        static_cast<size_t>(nm));
            std::span<const double> mx(der.m_x.data() +
                                           static_cast<size_t>(x) * nm,
                                       static_cast<size_t>(nm));
            std::span<const double> my(der.m_y.data() +
                                           static_cast<size_t>(y) * nm,
                                       static_cast<size_t>(nm));
            auto d1 = relent(mxy, mx);
            auto d2 = relent(mxy, my);
            bool in_g2 = false;
            if (der.zero_alpha_xy[cell] || d1.infinite || d2.infinite) {
                gs.div_sum[cell] = std::numeric_limits<double>::infinity();
            } else {
                gs.div_sum[cell] = d1.value + d2.value;
                in_g2 = gs.div_sum[cell] <= cfg.c / eps;
            }
            gs.g2[cell] = in_g2 ? 1 : 0;

            double tail = 0.0;
            if (!der.zero_alpha_xy[cell]) {
                for (int m = 0; m < nm; ++m) {
                    bool good = fac.uy(y, m) <= pow_delta * der.vx(x, m) &&
                                fac.ux(x, m) <= pow_delta * der.vy(y, m);
                    if (good) tail += der.mxy(x, y, m);
                }
            }
            gs.tail[cell] = tail;
            gs.g[cell] = tail >= 1.0 - 2.0 * eps - 1e-12 ? 1 : 0;
        }

    bool inclusion = true;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            size_t cell = static_cast<size_t>(x) * ny + y;
            double pxy = fac.p(x, y) * der.axy(x, y) / q;
            if (gs.g1[cell]) gs.p_g1 += pxy;
            if (gs.g2[cell]) gs.p_g2 += pxy;
            if (gs.g1[cell] && gs.g2[cell]) {
                gs.p_g12 += pxy;
                if (!gs.g[cell]) inclusion = false;
            }
        }
    gs.claim_g1 = gs.p_g1 > 1.0 - 6.0 * eps;
    gs.claim_g2 = gs.p_g2 >= 1.0 - 1.5 * eps - 1e-12;
    gs.claim_g12 = gs.p_g12 >= 1.0 - 7.5 * eps - 1e-12;
    gs.claim_inclusion = inclusion;
    return gs;
}

IdealizedOutcome idealized_outcome(const TranscriptFactorization& fac,
                                   const DerivedTables& der,
                                   const SamplerConfig& cfg) {
    const int nx = der.nx, ny = der.ny, nm = der.nm;
    const double pow_delta = std::exp2(cfg.Delta);
    IdealizedOutcome out;
    out.w.assign(static_cast<size_t>(nx) * ny * nm, 0.0);

    std::vector<double> joint(static_cast<size_t>(nx) * ny * nm, 0.0);
    double c_total = 0.0;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
            for (int m = 0; m < nm; ++m) {
                size_t i = (static_cast<size_t>(x) * ny + y) * nm + m;
                double w = std::min(fac.ux(x, m), pow_delta * der.vy(y, m)) *
                           std::min(fac.uy(y, m), pow_delta * der.vx(x, m));
                out.w[i] = w;
                joint[i] = fac.joint(x, y, m);
                c_total += fac.p(x, y) * w / fac.q;
            }
    out.C = c_total;
    if (c_total <= 0.0)
        throw std::invalid_argument("idealized_outcome: degenerate weights");

    out.joint1.assign(joint.size(), 0.0);
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
            for (int m = 0; m < nm; ++m) {
                size_t i = (static_cast<size_t>(x) * ny + y) * nm + m;
                out.joint1[i] = fac.p(x, y) * out.w[i] / (fac.q * c_total);
            }
    out.l1_xym = l1_distance(joint, out.joint1);

    // push both distributions through (x,y,m) -> (x,y,out(m),out(m));
    // outputs always agree on either side so one output slot suffices
    int nz = 1;
    for (int v : fac.output_of) nz = std::max(nz, v + 2);
    std::vector<double> pa(static_cast<size_t>(nx) * ny * nz, 0.0);
    std::vector<double> pb(static_cast<size_t>(nx) * ny * nz, 0.0);
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
            for (int m = 0; m < nm; ++m) {
                size_t i = (static_cast<size_t>(x) * ny + y) * nm + m;
                int z = fac.output_of.empty() ? 0 : fac.output_of[m] + 1;
                size_t j = (static_cast<size_t>(x) * ny + y) * nz + z;
                pa[j] += joint[i];
                pb[j] += out.joint1[i];
            }
    out.l1_outputs = l1_distance(pa, pb);
    out.bound_ok = out.l1_xym <= 10.0 * cfg.eps + 1e-9;
    return out;
}

DistcloseReport check_distclose(const std::vector<double>& h,
                                const std::vector<double>& f_tab,
                                const std::vector<double>& g_tab, int na, int nb,
                                double delta1, double delta2) {
    DistcloseReport rep;
    if (static_cast<int>(h.size()) != na ||
        static_cast<int>(f_tab.size()) != static_cast<size_t>(na) * nb ||
        f_tab.size() != g_tab.size())
        throw std::invalid_argument("check_distclose: shape mismatch");

    double total = 0.0;
    for (int a = 0; a < na; ++a) {
        if (h[a] < -1e-12) {
            rep.violation = "negative h";
            return rep;
        }
        for (int b = 0; b < nb; ++b) {
            double f = f_tab[static_cast<size_t>(a) * nb + b];
            double g = g_tab[static_cast<size_t>(a) * nb + b];
            if (f < -1e-12 || g < -1e-12) {
                rep.violation = "negative table entry";
                return rep;
            }
            if (g > f + 1e-12) {
                rep.violation = "g exceeds f";
                return rep;
            }
            total += h[a] * f;
        }
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        rep.violation = "h*f does not normalize";
        return rep;
    }
    // mass of a-values whose row agrees between f and g up to delta1
    double agree_mass = 0.0;
    double c_total = 0.0;
    for (int a = 0; a < na; ++a) {
        double row_f = 0.0, row_eq = 0.0;
        for (int b = 0; b < nb; ++b) {
            double f = f_tab[static_cast<size_t>(a) * nb + b];
            double g = g_tab[static_cast<size_t>(a) * nb + b];
            row_f += f;
            if (std::fabs(f - g) <= 1e-12) row_eq += f;
            c_total += h[a] * g;
        }
        if (row_f <= 0.0 || row_eq >= (1.0 - delta1) * row_f - 1e-12)
            agree_mass += h[a] * row_f;
    }
    if (agree_mass < 1.0 - delta2 - 1e-12) {
        rep.violation = "agreement condition fails";
        return rep;
    }
    rep.conditions_ok = true;
    rep.C = c_total;
    if (c_total <= 0.0) {
        rep.violation = "renormalization constant is zero";
        rep.conditions_ok = false;
        return rep;
    }
    double l1 = 0.0;
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < nb; ++b) {
            double f = f_tab[static_cast<size_t>(a) * nb + b];
            double g = g_tab[static_cast<size_t>(a) * nb + b];
            l1 += std::fabs(h[a] * f - h[a] * g / c_total);
        }
    rep.l1 = l1;
    rep.pass = l1 <= delta1 + delta2 + 1e-9 &&
               c_total >= 1.0 - delta1 - delta2 - 1e-9;
    return rep;
}

AcceptProbabilities analytic_accept_probabilities(
    const TranscriptFactorization& fac, const DerivedTables& der,
    const SamplerConfig& cfg, const GoodSets& gs, int x, int y) {
    AcceptProbabilities ap;
    const double pow_delta = std::exp2(cfg.Delta);
    const double denom = static_cast<double>(der.nm) * pow_delta;
    ap.alice = der.alpha_x[x] / denom;
    ap.bob = der.alpha_y[y] / denom;
    size_t cell = static_cast<size_t>(x) * der.ny + y;
    ap.in_g12 = gs.g1[cell] && gs.g2[cell];
    if (ap.in_g12) {
        double lo = fac.q / 2.0 / denom, hi = 1.5 * fac.q / denom;
        ap.sandwich_ok = ap.alice >= lo - 1e-15 && ap.alice <= hi + 1e-15 &&
                         ap.bob >= lo - 1e-15 && ap.bob <= hi + 1e-15;
    }
    ap.joint_accept.resize(der.nm);
    for (int m = 0; m < der.nm; ++m) {
        double w = std::min(fac.ux(x, m), pow_delta * der.vy(y, m)) *
                   std::min(fac.uy(y, m), pow_delta * der.vx(x, m));
        ap.joint_accept[m] = w / (der.nm * pow_delta * pow_delta);
    }
    return ap;
}

namespace {

struct TrialCounts {
    long long agree = 0, e = 0, bc = 0, h = 0, alice_nonempty = 0;
    std::vector<long long> hist; // (x*ny+y)*nm + m, conditioned on H
};

// affine pairwise-independent hash {0,1}^mb -> {0,1}^k
struct AffineHash {
    std::vector<uint32_t> rows; // k rows of mb bits
    uint32_t offset = 0;
    int k = 0;
    uint32_t operator()(uint32_t m) const {
        uint32_t out = offset;
        for (int i = 0; i < k; ++i)
            out ^= static_cast<uint32_t>(__builtin_popcount(rows[i] & m) & 1)
                   << i;
        return out;
    }
};

} // namespace

SamplerReport run_monte_carlo(const TranscriptFactorization& fac,
                              const SamplerConfig& cfg, long long trials,
                              uint64_t seed, bool random_function_hash) {
    if (trials < 1) throw std::invalid_argument("run_monte_carlo: trials < 1");
    const int nx = fac.p.x_size, ny = fac.p.y_size, nm = fac.m_size;
    const double pow_delta = std::exp2(cfg.Delta);
    const long long T = cfg.T;
    const int k = cfg.k;
    int mb = 0;
    while ((1 << mb) < nm) ++mb;
    if (k >= 31 || mb >= 31)
        throw std::invalid_argument("run_monte_carlo: hash range too large");
    const uint32_t kmask = (1u << k) - 1;

    DerivedTables der = derived_quantities(fac);

    // input CDF over (x,y)
    std::vector<double> cdf(static_cast<size_t>(nx) * ny, 0.0);
    {
        double acc = 0.0;
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y) {
                acc += fac.p(x, y) * der.axy(x, y) / fac.q;
                cdf[static_cast<size_t>(x) * ny + y] = acc;
            }
        // guard against rounding at the top
        cdf.back() = std::max(cdf.back(), 1.0);
    }

    int nthreads = 1;
    if (const char* env = std::getenv("RECTBOUND_THREADS")) {
        nthreads = std::max(1, std::atoi(env));
        nthreads = std::min<int>(nthreads, 64);
    }

    auto run_range = [&](long long lo, long long hi, TrialCounts& tc) {
        tc.hist.assign(static_cast<size_t>(nx) * ny * nm, 0);
        for (long long t = lo; t < hi; ++t) {
            SplitMix64 rng(split_seed(seed, static_cast<uint64_t>(t)));
            // sample inputs
            double u01 = rng.next_double();
            size_t cell =
                std::lower_bound(cdf.begin(), cdf.end(), u01) - cdf.begin();
            if (cell >= cdf.size()) cell = cdf.size() - 1;
            int x = static_cast<int>(cell) / ny;
            int y = static_cast<int>(cell) % ny;

            AffineHash hash;
            hash.k = k;
            std::vector<uint32_t> random_table;
            if (random_function_hash) {
                random_table.resize(static_cast<size_t>(nm));
                for (int m = 0; m < nm; ++m)
                    random_table[m] = static_cast<uint32_t>(rng.next_bits(k));
            } else {
                hash.rows.resize(k);
                for (int i = 0; i < k; ++i)
                    hash.rows[i] = static_cast<uint32_t>(rng.next_bits(mb));
                hash.offset = static_cast<uint32_t>(rng.next_bits(k));
            }
            uint32_t r = static_cast<uint32_t>(rng.next_bits(k)) & kmask;
            auto hash_of = [&](int m) {
                return random_function_hash ? random_table[m]
                                            : hash(static_cast<uint32_t>(m));
            };

            bool alice_found = false;
            int alice_m = -1;
            bool alice_bob_same = false; // Bob accepted Alice's chosen draw
            int bob_first_m = -1;        // first Bob accept with matching hash
            int bob_hr_m1 = -1, bob_hr_m2 = -1; // up to two distinct messages
            for (long long i = 0; i < T; ++i) {
                int m = static_cast<int>(rng.next_below(
                    static_cast<uint64_t>(nm)));
                double alpha = rng.next_double() * pow_delta;
                double beta = rng.next_double() * pow_delta;
                bool a_acc = alpha <= fac.ux(x, m) &&
                             beta <= pow_delta * der.vx(x, m);
                bool b_acc = alpha <= pow_delta * der.vy(y, m) &&
                             beta <= fac.uy(y, m);
                if (a_acc && !alice_found) {
                    alice_found = true;
                    alice_m = m;
                    alice_bob_same = b_acc;
                }
                if (b_acc && hash_of(m) == r) {
                    if (bob_first_m < 0) bob_first_m = m;
                    if (bob_hr_m1 < 0)
                        bob_hr_m1 = m;
                    else if (bob_hr_m1 != m && bob_hr_m2 < 0)
                        bob_hr_m2 = m;
                }
            }
            if (alice_found) ++tc.alice_nonempty;
            bool alice_outputs = alice_found && hash_of(alice_m) == r;
            int out_a = alice_outputs && !fac.output_of.empty()
                            ? fac.output_of[alice_m]
                            : -1;
            int out_b = bob_first_m >= 0 && !fac.output_of.empty()
                            ? fac.output_of[bob_first_m]
                            : -1;
            if (alice_outputs && bob_first_m >= 0 && out_a == out_b &&
                out_a >= 0)
                ++tc.agree;

            bool e_event = alice_outputs && alice_bob_same;
            if (e_event) {
                ++tc.e;
                bool bc_event =
                    (bob_hr_m1 >= 0 && bob_hr_m1 != alice_m) || bob_hr_m2 >= 0;
                if (bc_event) {
                    ++tc.bc;
                } else {
                    ++tc.h;
                    ++tc.hist[(static_cast<size_t>(x) * ny + y) * nm + alice_m];
                }
            }
        }
    };

    std::vector<TrialCounts> parts(nthreads);
    if (nthreads == 1) {
        run_range(0, trials, parts[0]);
    } else {
        std::vector<std::thread> pool;
        long long chunk = (trials + nthreads - 1) / nthreads;
        for (int i = 0; i < nthreads; ++i) {
            long long lo = i * chunk, hi = std::min<long long>(trials, lo + chunk);
            if (lo >= hi) { parts[i].hist.assign(static_cast<size_t>(nx) * ny * nm, 0); continue; }
            pool.emplace_back([&, lo, hi, i] { run_range(lo, hi, parts[i]); });
        }
        for (auto& th : pool) th.join();
    }
    TrialCounts total;
    total.hist.assign(static_cast<size_t>(nx) * ny * nm, 0);
    for (const auto& tc : parts) {
        total.agree += tc.agree;
        total.e += tc.e;
        total.bc += tc.bc;
        total.h += tc.h;
        total.alice_nonempty += tc.alice_nonempty;
        for (size_t i = 0; i < total.hist.size(); ++i)
            total.hist[i] += tc.hist[i];
    }

    auto estimate = [&](long long hits, long long n) {
        Estimate e;
        e.trials = n;
        if (n > 0) {
            e.defined = true;
            e.value = static_cast<double>(hits) / n;
            e.std_error = std::sqrt(std::max(0.0, e.value * (1.0 - e.value) /
                                                      static_cast<double>(n)));
        }
        return e;
    };

    SamplerReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.pr_agree = estimate(total.agree, trials);
    rep.pr_E = estimate(total.e, trials);
    rep.pr_H = estimate(total.h, trials);
    rep.pr_alice_nonempty = estimate(total.alice_nonempty, trials);
    rep.pr_Bc_given_E = estimate(total.bc, total.e);
    rep.h_events = total.h;

    if (total.h > 0) {
        IdealizedOutcome ideal = idealized_outcome(fac, der, cfg);
        double n = static_cast<double>(total.h);
        double l1 = 0.0, bias = 0.0;
        for (size_t i = 0; i < total.hist.size(); ++i) {
            double emp = total.hist[i] / n;
            l1 += std::fabs(emp - ideal.joint1[i]);
            double p = ideal.joint1[i];
            bias += std::sqrt(std::max(0.0, p * (1.0 - p) / n));
        }
        rep.hist_l1 = l1;
        rep.hist_l1_threshold = bias + 3.0 / std::sqrt(n);
        rep.hist_ok = l1 <= rep.hist_l1_threshold;
    }
    return rep;
}

} // namespace rectbound
