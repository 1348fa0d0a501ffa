#pragma once
#include <optional>

#include "rectbound/distribution.hpp"
#include "rectbound/lp.hpp"
#include "rectbound/rectangle.hpp"
#include "rectbound/relation.hpp"

namespace rectbound {

// min over qualifying rectangles of S_inf(lambda_R || lambda) = -log2 lambda(R)
struct RectangleBoundResult {
    double value = 0.0;
    bool infinite = false; // no rectangle qualifies
    Rectangle witness;
    double witness_error = 0.0;      // 1 - good/mass of the witness
    double witness_minentropy = 0.0; // equals value
};

// Exact enumeration over all nonempty rectangles; |X|,|Y| <= 12.
RectangleBoundResult lrec(const Relation& g, const Distribution& lambda, int z,
                          double eps);

struct SmoothRectangleResult {
    double value = 0.0;
    bool infinite = false;
    Relation witness_g;
    double g_distance = 0.0; // Pr_lambda[f != g]
};

// max of lrec over all total boolean g within delta of f; |X|*|Y| <= 16.
SmoothRectangleResult srec_entropy(const Relation& f, const Distribution& lambda,
                                   int z, double eps, double delta);

struct LPBoundResult {
    double primal_value = 0.0;
    double log_value = 0.0;
    std::vector<double> dual_lambda; // per cell
    std::vector<double> dual_phi;    // per cell (0 outside f^-1(z))
    double gap = 0.0;
    int rectangles_generated = 0;
};

// Covering-LP form, solved through its rectangle-indexed dual with row
// generation; total function f, min(|X|,|Y|) <= 16.
LPBoundResult srec_lp(const Relation& f, int z, double eps);

// Most violated rectangle constraint at the given dual point, or nullopt
// when every rectangle satisfies it within 1e-8. Cell weights are
// (lambda - phi) on f^-1(z) and -lambda elsewhere.
struct SeparatedRectangle {
    Rectangle rect;
    double lhs = 0.0;
};
std::optional<SeparatedRectangle> rectangle_separation(
    const Relation& f, int z, const std::vector<double>& lambda,
    const std::vector<double>& phi);

struct EqvExtraction {
    Distribution mu;
    Relation g;
    double beta = 0.0;
    double delta = 0.0;
    double claimed_lower_bound = 0.0; // log2(srec value) + 3 log2 eps
    double lrec_value = 0.0;          // lrec(g, mu, z, (1+eps^2) delta/beta)
    bool lrec_infinite = false;
    bool verified = false;
};
// Construction behind the equivalence of the two smooth-bound definitions.
// Throws on a degenerate (all-zero) dual.
EqvExtraction lemma_eqv_extract(const Relation& f, int z, double eps,
                                const LPBoundResult& dual);

// Exact minimum distributional error over all deterministic protocols of
// <= budget_bits total bits (output bits included unless free_output).
// |X|,|Y| <= 8, budget_bits <= 8.
double optimal_protocol_error(const Relation& f, const Distribution& lambda,
                              int budget_bits, bool free_output = false);

struct DgeqsrecReport {
    bool precondition_ok = false;
    int d_complexity = 0;     // least c with optimal error <= eps
    double srec_value = 0.0;  // srec_entropy at ((1+eps')delta/beta, delta)
    double rhs = 0.0;         // srec_value - log2(4/eps)
    double beta = 0.0;
    bool pass = false;
};
DgeqsrecReport check_dgeqsrec(const Relation& f, const Distribution& lambda,
                              int z, double eps, double eps_prime, double delta);

} // namespace rectbound
