#pragma once
#include <span>
#include <string>
#include <vector>

namespace rectbound {

// Relative entropy / min-entropy result. Support violations give the
// infinite flag rather than a crash; infinity compares greater than every
// finite value.
struct Divergence {
    double value = 0.0;
    bool infinite = false;

    bool operator<=(double rhs) const { return !infinite && value <= rhs; }
    bool operator>=(const Divergence& rhs) const {
        if (infinite) return true;
        if (rhs.infinite) return false;
        return value >= rhs.value;
    }
};

// Joint probability table over up to 4 named finite variables.
// Storage is row-major with the last variable fastest.
struct JointTable {
    std::vector<std::string> names;
    std::vector<int> sizes;
    std::vector<double> p;

    JointTable() = default;
    JointTable(std::vector<std::string> names_, std::vector<int> sizes_);

    size_t atoms() const { return p.size(); }
    int var_index(const std::string& name) const;

    double& at(std::span<const int> idx);
    double get(std::span<const int> idx) const;

    // marginal over the named variables, in the given order
    JointTable marginal(const std::vector<std::string>& vars) const;

    void validate() const; // sums to 1 within 1e-9
};

// All logs base 2.
double entropy(const JointTable& t, const std::vector<std::string>& vars);

Divergence relent(std::span<const double> p, std::span<const double> q);
Divergence relminent(std::span<const double> p, std::span<const double> q);

double mutual_info(const JointTable& t, const std::string& a, const std::string& b);
double cond_mutual_info(const JointTable& t, const std::string& a,
                        const std::string& b, const std::string& c);
// I(A : B | C) with composite variable groups
double cond_mutual_info(const JointTable& t, const std::vector<std::string>& a,
                        const std::vector<std::string>& b,
                        const std::vector<std::string>& c);
double mutual_info(const JointTable& t, const std::vector<std::string>& a,
                   const std::vector<std::string>& b);

double l1_distance(std::span<const double> p, std::span<const double> q);

struct RatioLemmaResult {
    double p1 = 0.0; // Pr under A of |1 - A'(a)/A(a)| <= eps/r
    double p2 = 0.0; // same under A'
    bool pass = false;
    bool precondition_ok = true;
};
// Requires l1(A,A') <= eps and r in (0,1); pass iff p1 >= 1-2r and
// p2 >= 1-2r-eps.
RatioLemmaResult check_ratio_lemma(std::span<const double> a,
                                   std::span<const double> a_prime, double eps,
                                   double r);

struct SubstateResult {
    double lhs = 0.0; // Pr_{x<-X'}[X'(x)/X(x) <= 2^{(S(X'||X)+1)/delta}]
    bool pass = false;
    bool precondition_ok = true;
};
RatioLemmaResult check_ratio_lemma_unchecked(std::span<const double> a,
                                             std::span<const double> a_prime,
                                             double eps, double r);
SubstateResult check_substate(std::span<const double> x,
                              std::span<const double> x_prime, double delta);

// l1(P,Q) <= sqrt(S(P||Q)) + 1e-9
bool check_pinsker(std::span<const double> p, std::span<const double> q);

} // namespace rectbound
