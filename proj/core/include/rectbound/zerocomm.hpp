#pragma once
#include <string>
#include <vector>

#include "rectbound/distribution.hpp"
#include "rectbound/protocol.hpp"
#include "rectbound/rectangle.hpp"
#include "rectbound/relation.hpp"
#include "rectbound/sampler.hpp"

namespace rectbound {

// Zero-communication protocol with shared randomness and abort: both
// players map (input, coin) to an answer or abort (-1).
struct ZeroCommProtocol {
    int x_size = 0, y_size = 0, z_size = 0;
    int coin_count = 0;
    std::vector<double> coin_mass;      // distribution over coins
    std::vector<int> alice;             // x*coin_count + r -> z or -1
    std::vector<int> bob;               // y*coin_count + r -> z or -1

    int a(int x, int r) const { return alice[static_cast<size_t>(x) * coin_count + r]; }
    int b(int y, int r) const { return bob[static_cast<size_t>(y) * coin_count + r]; }
    void validate() const;
};

struct ConditionedJoint {
    double pr_agree = 0.0;            // Pr[A = B != abort]
    std::vector<double> joint;        // over (x,y,r,z) flattened as
                                      // ((x*ny+y)*coins+r)*nz+z, conditioned
    Distribution x1y1;                // input marginal after conditioning
    std::vector<double> rz_mass;      // unconditioned Pr[agree, R=r, A=z]
};
ConditionedJoint conditioned_joint(const ZeroCommProtocol& P,
                                   const Distribution& xy);

struct ExtractionResult {
    bool hypotheses_ok = false;
    std::string diagnostics;
    bool found = false;
    int r0 = -1;
    Rectangle rect;              // {x: a(x,r0)=z} x {y: b(y,r0)=z}
    double relent_value = 0.0;   // S(restriction || XY')
    double minent_value = 0.0;   // S_inf(restriction || XY'), equals relent
    double err = 0.0;            // Pr under restriction of g(x,y) != {z}
    double err_bound = 0.0;      // (delta + 2 eps) / (beta - 3 eps)
    double relent_budget = 0.0;  // c / eps
};
// Hypotheses checked exactly: Pr[A=B!=abort] >= 2^{-c},
// l1(X1Y1, XY') <= eps, Pr[(X1,Y1,A1) in f] >= 1 - eps, and
// (delta+2eps)/(beta-3eps) < (1+eps') delta / beta with beta > 3 eps.
// The search scans coins r with positive agreeing mass on answer z and
// returns the qualifying restriction of largest non-abort mass.
ExtractionResult extract_rectangle(const ZeroCommProtocol& P,
                                   const Distribution& xy, const Relation& f,
                                   const Relation& g, int z, double eps,
                                   double delta, double beta, double eps_prime,
                                   double c);

struct ViolationReport {
    bool all_extractions_found = false;
    int g_count = 0; // total boolean g within delta of f that were checked
    double srec_value = 0.0;
    bool srec_infinite = false;
    double budget = 0.0; // c / eps
    bool consistent = false; // srec value below budget, as the lemma forces
    std::string diagnostics;
};
// For small instances: every total boolean g near f admits an extraction,
// hence the smooth rectangle bound cannot exceed c/eps.
ViolationReport srec_violation_report(const ZeroCommProtocol& P,
                                      const Distribution& xy, const Relation& f,
                                      int z, double eps, double delta,
                                      double beta, double eps_prime, double c);

// Materializes the correlated-sampling run as an explicit zero-communication
// protocol. Requires reduced parameters, acceptance thresholds that are exact
// multiples of 2^Delta/levels, and a small enough coin space (<= 2^20).
ZeroCommProtocol sampler_to_zerocomm(const TranscriptFactorization& fac,
                                     const SamplerConfig& cfg, int levels);

} // namespace rectbound
