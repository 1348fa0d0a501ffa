#pragma once
#include <optional>
#include <string>
#include <vector>

#include "rectbound/protocol.hpp"

namespace rectbound {

struct ConfigOverrides {
    std::optional<double> Delta;
    std::optional<long long> T;
    std::optional<int> k;
    bool reduced = false; // must be set for any override to be legal
};

struct SamplerConfig {
    double c = 1.0;
    double eps = 0.1;
    double q = 1.0;
    int message_count = 1;
    double Delta = 0.0;
    long long T = 0;
    int k = 0;
    bool reduced = false;
};

// Delta = (c/eps+1)/eps + 2, T = ceil((2/q)|M| 2^Delta ln(1/eps)),
// k = ceil(log2((3/eps) ln(1/eps))). Overrides require the reduced flag.
SamplerConfig make_config(double c, double eps, double q, int message_count,
                          const ConfigOverrides& ov = {});

// All the derived tables of a factorization:
// alpha_xy = sum_m u_x u_y,   alpha_x = sum_y p(y|x) alpha_xy,
// v_x(m) = sum_y p(y|x) u_y(m), M_xy(m) = u_x u_y / alpha_xy, etc.
struct DerivedTables {
    int nx = 0, ny = 0, nm = 0;
    std::vector<double> alpha_xy; // x*ny + y
    std::vector<double> alpha_x;  // x
    std::vector<double> alpha_y;  // y
    std::vector<double> v_x;      // x*nm + m
    std::vector<double> v_y;      // y*nm + m
    std::vector<double> m_xy;     // (x*ny+y)*nm + m
    std::vector<double> m_x;      // x*nm + m
    std::vector<double> m_y;      // y*nm + m
    std::vector<char> zero_alpha_xy; // flagged zero-mass conditionals

    double axy(int x, int y) const { return alpha_xy[static_cast<size_t>(x) * ny + y]; }
    double mxy(int x, int y, int m) const {
        return m_xy[(static_cast<size_t>(x) * ny + y) * nm + m];
    }
    double vx(int x, int m) const { return v_x[static_cast<size_t>(x) * nm + m]; }
    double vy(int y, int m) const { return v_y[static_cast<size_t>(y) * nm + m]; }
};

DerivedTables derived_quantities(const TranscriptFactorization& fac);

struct MainLemmaPreconditions {
    bool ok = false;
    double relent_xy_p = 0.0; // S(XY || p), must be <= eps^2/4
    double info_budget = 0.0; // I(X:M|Y) + I(Y:M|X), must be <= c
    std::string message;
};
MainLemmaPreconditions check_main_lemma_preconditions(
    const TranscriptFactorization& fac, const DerivedTables& der,
    const SamplerConfig& cfg);

struct GoodSets {
    std::vector<char> g1, g2, g; // per cell x*ny+y
    std::vector<double> div_sum; // S(M_xy||M_x)+S(M_xy||M_y) (inf -> huge)
    std::vector<double> tail;    // Pr_{m<-M_xy}[m in G_xy]
    double p_g1 = 0.0, p_g2 = 0.0, p_g12 = 0.0;
    bool claim_g1 = false;       // p(G1) > 1-6 eps
    bool claim_g2 = false;       // p(G2) >= 1-3 eps/2
    bool claim_g12 = false;      // p(G1 cap G2) >= 1-15 eps/2
    bool claim_inclusion = false; // G1 cap G2 subset of G
};
// Throws if the preconditions fail.
GoodSets good_sets(const TranscriptFactorization& fac, const DerivedTables& der,
                   const SamplerConfig& cfg);

struct IdealizedOutcome {
    std::vector<double> w; // (x*ny+y)*nm + m
    double C = 0.0;
    std::vector<double> joint1; // conditioned X1Y1M1, (x*ny+y)*nm + m
    double l1_xym = 0.0;        // l1(XYM, X1Y1M1)
    double l1_outputs = 0.0;    // l1(X1Y1A1B1, XY ~M ~M)
    bool bound_ok = false;      // l1_xym <= 10 eps
};
IdealizedOutcome idealized_outcome(const TranscriptFactorization& fac,
                                   const DerivedTables& der,
                                   const SamplerConfig& cfg);

struct DistcloseReport {
    bool conditions_ok = false;
    std::string violation;
    double l1 = 0.0;
    double C = 0.0;
    bool pass = false; // l1 <= delta1+delta2 and C >= 1-delta1-delta2
};
// The generic two-table closeness statement: AB = h(a) f_a(b),
// A'B' = h(a) g_a(b) / C with g <= f pointwise.
DistcloseReport check_distclose(const std::vector<double>& h,
                                const std::vector<double>& f_tab,
                                const std::vector<double>& g_tab, int na, int nb,
                                double delta1, double delta2);

struct AcceptProbabilities {
    double alice = 0.0; // alpha_x / (|M| 2^Delta)
    double bob = 0.0;   // alpha_y / (|M| 2^Delta)
    bool in_g12 = false;
    bool sandwich_ok = false; // q/2 <= . <= 3q/2 over |M| 2^Delta, when in G1^G2
    std::vector<double> joint_accept; // per m: w_xy(m) / (|M| 2^{2 Delta})
};
AcceptProbabilities analytic_accept_probabilities(
    const TranscriptFactorization& fac, const DerivedTables& der,
    const SamplerConfig& cfg, const GoodSets& gs, int x, int y);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    long long trials = 0;
    bool defined = false;
};

struct SamplerReport {
    long long trials = 0;
    uint64_t seed = 0;
    Estimate pr_agree;      // Pr[A = B != bot]
    Estimate pr_E;
    Estimate pr_Bc_given_E;
    Estimate pr_H;
    Estimate pr_alice_nonempty; // Pr[A != empty set]
    long long h_events = 0;
    double hist_l1 = 0.0;        // empirical (x,y,m | H) vs idealized
    double hist_l1_threshold = 0.0; // expected-bias bound + 3 sigma
    bool hist_ok = false;
};

// Operational Figure-1 runs; hash family is a random affine map over
// GF(2) (pairwise independent), or a fully random function behind a flag.
SamplerReport run_monte_carlo(const TranscriptFactorization& fac,
                              const SamplerConfig& cfg, long long trials,
                              uint64_t seed, bool random_function_hash = false);

} // namespace rectbound
