#include "rectbound/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rectbound {

JointTable::JointTable(std::vector<std::string> names_, std::vector<int> sizes_)
    : names(std::move(names_)), sizes(std::move(sizes_)) {
    if (names.size() != sizes.size() || names.empty() || names.size() > 4)
        throw std::invalid_argument("JointTable: need 1..4 named variables");
    size_t n = 1;
    for (int s : sizes) {
        if (s <= 0) throw std::invalid_argument("JointTable: sizes must be positive");
        n *= static_cast<size_t>(s);
    }
    if (n > (1u << 22)) throw std::invalid_argument("JointTable: support exceeds 2^22");
    p.assign(n, 0.0);
}

int JointTable::var_index(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("JointTable: unknown variable '" + name + "'");
}

static size_t flat_index(const std::vector<int>& sizes, std::span<const int> idx) {
    size_t f = 0;
    for (size_t i = 0; i < sizes.size(); ++i)
        f = f * static_cast<size_t>(sizes[i]) + static_cast<size_t>(idx[i]);
    return f;
}

double& JointTable::at(std::span<const int> idx) { return p[flat_index(sizes, idx)]; }
double JointTable::get(std::span<const int> idx) const { return p[flat_index(sizes, idx)]; }

JointTable JointTable::marginal(const std::vector<std::string>& vars) const {
    std::vector<int> keep;
    std::vector<int> out_sizes;
    for (const auto& v : vars) {
        keep.push_back(var_index(v));
        out_sizes.push_back(sizes[keep.back()]);
    }
    JointTable out(vars, out_sizes);
    std::vector<int> idx(sizes.size(), 0);
    for (size_t f = 0; f < p.size(); ++f) {
        // decode f into idx
        size_t rem = f;
        for (int i = static_cast<int>(sizes.size()) - 1; i >= 0; --i) {
            idx[i] = static_cast<int>(rem % static_cast<size_t>(sizes[i]));
            rem /= static_cast<size_t>(sizes[i]);
        }
        size_t of = 0;
        for (size_t i = 0; i < keep.size(); ++i)
            of = of * static_cast<size_t>(out_sizes[i]) + static_cast<size_t>(idx[keep[i]]);
        out.p[of] += p[f];
    }
    return out;
}

void JointTable::validate() const {
    double s = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::fabs(s - 1.0) > 1e-9)
        throw std::invalid_argument("JointTable: masses do not sum to 1");
    for (double v : p)
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument("JointTable: bad mass");
}

static double entropy_of(std::span<const double> p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

double entropy(const JointTable& t, const std::vector<std::string>& vars) {
    return entropy_of(t.marginal(vars).p);
}

Divergence relent(std::span<const double> p, std::span<const double> q) {
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue; // 0 log 0 = 0
        if (q[i] <= 0.0) return {0.0, true};
        s += p[i] * std::log2(p[i] / q[i]);
    }
    // clamp the -1e-15 arithmetic dust; S(P||Q) >= 0
    return {std::max(s, 0.0), false};
}

Divergence relminent(std::span<const double> p, std::span<const double> q) {
    double m = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return {0.0, true};
        m = std::max(m, std::log2(p[i] / q[i]));
        any = true;
    }
    return {any ? m : 0.0, false};
}

double mutual_info(const JointTable& t, const std::vector<std::string>& a,
                   const std::vector<std::string>& b) {
    std::vector<std::string> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    return entropy(t, a) + entropy(t, b) - entropy(t, ab);
}

double mutual_info(const JointTable& t, const std::string& a, const std::string& b) {
    return mutual_info(t, std::vector<std::string>{a}, std::vector<std::string>{b});
}

double cond_mutual_info(const JointTable& t, const std::vector<std::string>& a,
                        const std::vector<std::string>& b,
                        const std::vector<std::string>& c) {
    std::vector<std::string> ac = a, bc = b, abc = a;
    ac.insert(ac.end(), c.begin(), c.end());
    bc.insert(bc.end(), c.begin(), c.end());
    abc.insert(abc.end(), b.begin(), b.end());
    abc.insert(abc.end(), c.begin(), c.end());
    return entropy(t, ac) + entropy(t, bc) - entropy(t, abc) - entropy(t, c);
}

double cond_mutual_info(const JointTable& t, const std::string& a,
                        const std::string& b, const std::string& c) {
    return cond_mutual_info(t, std::vector<std::string>{a},
                            std::vector<std::string>{b},
                            std::vector<std::string>{c});
}

double l1_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        throw std::invalid_argument("l1_distance: dimension mismatch");
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
    return 0.5 * s;
}

RatioLemmaResult check_ratio_lemma_unchecked(std::span<const double> a,
                                             std::span<const double> a_prime,
                                             double eps, double r) {
    RatioLemmaResult res;
    double thr = eps / r;
    for (size_t i = 0; i < a.size(); ++i) {
        // outcomes with A(a)=0 are measure zero under A; under A' the
        // ratio is +infinity there and the outcome fails the bound
        bool ok = a[i] > 0.0 && std::fabs(1.0 - a_prime[i] / a[i]) <= thr;
        if (ok) {
            res.p1 += a[i];
            res.p2 += a_prime[i];
        }
    }
    res.pass = res.p1 >= 1.0 - 2.0 * r - 1e-12 &&
               res.p2 >= 1.0 - 2.0 * r - eps - 1e-12;
    return res;
}

RatioLemmaResult check_ratio_lemma(std::span<const double> a,
                                   std::span<const double> a_prime, double eps,
                                   double r) {
    if (r <= 0.0 || r >= 1.0 || l1_distance(a, a_prime) > eps + 1e-12) {
        RatioLemmaResult res;
        res.precondition_ok = false;
        return res;
    }
    return check_ratio_lemma_unchecked(a, a_prime, eps, r);
}

SubstateResult check_substate(std::span<const double> x,
                              std::span<const double> x_prime, double delta) {
    SubstateResult res;
    if (delta <= 0.0 || delta >= 1.0) {
        res.precondition_ok = false;
        return res;
    }
    Divergence s = relent(x_prime, x);
    if (s.infinite) {
        res.precondition_ok = false; // support violation
        return res;
    }
    double log_thr = (s.value + 1.0) / delta;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x_prime[i] <= 0.0) continue;
        if (std::log2(x_prime[i] / x[i]) <= log_thr) res.lhs += x_prime[i];
    }
    res.pass = res.lhs >= 1.0 - delta - 1e-12;
    return res;
}

bool check_pinsker(std::span<const double> p, std::span<const double> q) {
    Divergence s = relent(p, q);
    if (s.infinite) return true;
    return l1_distance(p, q) <= std::sqrt(s.value) + 1e-9;
}

} // namespace rectbound
