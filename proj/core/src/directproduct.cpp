#include "rectbound/directproduct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "rectbound/infotheory.hpp"
#include "rectbound/rng.hpp"

namespace rectbound {

namespace {

constexpr double kTol = 1e-9;

// generic conditional mutual information from weighted atoms
class CondMI {
public:
    void add(long long a, long long b, long long c, double w) {
        if (w <= 0.0) return;
        total_ += w;
        pabc_[{a, b, c}] += w;
        pac_[{a, c}] += w;
        pbc_[{b, c}] += w;
        pc_[c] += w;
    }
    double value() const {
        double s = 0.0;
        for (const auto& [key, w] : pabc_) {
            auto [a, b, c] = key;
            double num = (w / total_) * (pc_.at(c) / total_);
            double den = (pac_.at({a, c}) / total_) * (pbc_.at({b, c}) / total_);
            s += (w / total_) * std::log2(num / den);
        }
        return std::max(0.0, s);
    }

private:
    double total_ = 0.0;
    std::map<std::tuple<long long, long long, long long>, double> pabc_;
    std::map<std::pair<long long, long long>, double> pac_, pbc_;
    std::map<long long, double> pc_;
};

// expectation over keys of S(cond_key || ref_key); both maps hold
// unnormalized weights per (key, value) and ref is normalized per key
class KeyedRelent {
public:
    void add(long long key, long long value, double w, double ref) {
        if (w <= 0.0) return;
        total_ += w;
        keyw_[key] += w;
        atoms_[{key, value}] += w;
        ref_[{key, value}] = ref;
    }
    double value() const {
        double s = 0.0;
        for (const auto& [kv, w] : atoms_) {
            double cond = w / keyw_.at(kv.first);
            double r = ref_.at(kv);
            if (r <= 0.0) return std::numeric_limits<double>::infinity();
            s += (keyw_.at(kv.first) / total_) * cond * std::log2(cond / r);
        }
        return std::max(0.0, s);
    }

private:
    double total_ = 0.0;
    std::map<long long, double> keyw_;
    std::map<std::pair<long long, long long>, double> atoms_;
    std::map<std::pair<long long, long long>, double> ref_;
};

} // namespace

ProductInstance make_product_instance(const Relation& f, const Distribution& mu,
                                      int t, ProtocolTree tree) {
    if (t < 1 || t > 6)
        throw std::invalid_argument("make_product_instance: t out of range");
    ProductInstance inst;
    inst.base_f = f;
    inst.base_mu = mu;
    inst.t = t;
    inst.product_f = product_relation(f, t);
    inst.product_mu =
        Distribution(inst.product_f.x_size, inst.product_f.y_size);
    for (int xv = 0; xv < inst.product_f.x_size; ++xv) {
        auto xd = tuple_digits(xv, f.x_size, t);
        for (int yv = 0; yv < inst.product_f.y_size; ++yv) {
            auto yd = tuple_digits(yv, f.y_size, t);
            double w = 1.0;
            for (int i = 0; i < t; ++i) w *= mu(xd[i], yd[i]);
            inst.product_mu.at(xv, yv) = w;
        }
    }
    tree.validate();
    if (tree.x_size != inst.product_f.x_size ||
        tree.y_size != inst.product_f.y_size ||
        tree.z_size != inst.product_f.z_size)
        throw std::invalid_argument(
            "make_product_instance: tree does not match the product problem");
    inst.tree = std::move(tree);
    if (static_cast<long long>(inst.product_f.x_size) * inst.product_f.y_size *
            static_cast<long long>(inst.tree.leaves().size()) >
        (1ll << 22))
        throw std::invalid_argument("make_product_instance: instance too large");
    return inst;
}

SuccessVariables success_variables(const ProductInstance& inst) {
    SuccessVariables sv;
    sv.fac = factorize(inst.tree, inst.product_mu);
    sv.t = inst.t;
    const int nxv = sv.fac.p.x_size, nyv = sv.fac.p.y_size, nm = sv.fac.m_size;
    sv.t_mask.assign(static_cast<size_t>(nxv) * nyv * nm, 0);
    for (int m = 0; m < nm; ++m) {
        int z = sv.fac.output_of[m];
        if (z < 0) continue;
        auto zd = tuple_digits(z, inst.base_f.z_size, inst.t);
        for (int xv = 0; xv < nxv; ++xv) {
            auto xd = tuple_digits(xv, inst.base_f.x_size, inst.t);
            for (int yv = 0; yv < nyv; ++yv) {
                auto yd = tuple_digits(yv, inst.base_f.y_size, inst.t);
                uint32_t mask = 0;
                for (int i = 0; i < inst.t; ++i)
                    if (inst.base_f.accepts(xd[i], yd[i], zd[i]))
                        mask |= 1u << i;
                sv.t_mask[(static_cast<size_t>(xv) * nyv + yv) * nm + m] = mask;
            }
        }
    }
    return sv;
}

double SuccessVariables::pr_success(uint32_t subset) const {
    const int nxv = fac.p.x_size, nyv = fac.p.y_size, nm = fac.m_size;
    double s = 0.0;
    for (int xv = 0; xv < nxv; ++xv)
        for (int yv = 0; yv < nyv; ++yv)
            for (int m = 0; m < nm; ++m)
                if ((t_mask[(static_cast<size_t>(xv) * nyv + yv) * nm + m] &
                     subset) == subset)
                    s += fac.joint(xv, yv, m);
    return s;
}

CoordinateCoins coordinate_coins(const ProductInstance& inst,
                                 const std::vector<int>& C, int j) {
    const int nx = inst.base_f.x_size, ny = inst.base_f.y_size;
    CoordinateCoins cc;
    for (int i = 0; i < inst.t; ++i) {
        if (i == j) continue;
        cc.order.push_back(i);
        bool both = i < j || std::find(C.begin(), C.end(), i) != C.end();
        cc.both.push_back(both ? 1 : 0);
        cc.radix.push_back(both ? 2 * nx * ny : nx + ny);
        cc.count *= cc.radix.back();
    }
    return cc;
}

CoordinateCoins::Decoded CoordinateCoins::decode(int r, int nx, int ny) const {
    Decoded dec;
    dec.d.resize(order.size());
    dec.xv.assign(order.size(), -1);
    dec.yv.assign(order.size(), -1);
    for (size_t k = 0; k < order.size(); ++k) {
        int v = r % radix[k];
        r /= radix[k];
        if (both[k]) {
            dec.d[k] = v / (nx * ny);
            dec.xv[k] = (v % (nx * ny)) / ny;
            dec.yv[k] = v % ny;
        } else if (v < nx) {
            dec.d[k] = 0;
            dec.xv[k] = v;
        } else {
            dec.d[k] = 1;
            dec.yv[k] = v - nx;
        }
    }
    return dec;
}

namespace {

// coin index of a fully specified assignment (directions, inputs)
int encode_coin(const CoordinateCoins& cc, const std::vector<int>& d,
                const std::vector<int>& xd, const std::vector<int>& yd, int nx,
                int ny) {
    int r = 0;
    for (size_t k = cc.order.size(); k-- > 0;) {
        int i = cc.order[k];
        int v;
        if (cc.both[k])
            v = (d[i] * nx + xd[i]) * ny + yd[i];
        else
            v = d[i] == 0 ? xd[i] : nx + yd[i];
        r = r * cc.radix[k] + v;
    }
    return r;
}

} // namespace

TranscriptFactorization conditioned_coordinate_factorization(
    const ProductInstance& inst, const std::vector<int>& C, int j) {
    if (j < 0 || j >= inst.t)
        throw std::invalid_argument("coordinate out of range");
    for (int i : C)
        if (i == j || i < 0 || i >= inst.t)
            throw std::invalid_argument("bad conditioning set");
    const int nx = inst.base_f.x_size, ny = inst.base_f.y_size;
    const int nz = inst.base_f.z_size;
    SuccessVariables sv = success_variables(inst);
    const int nm = sv.fac.m_size;
    CoordinateCoins cc = coordinate_coins(inst, C, j);
    const int R = cc.count;

    auto mux = inst.base_mu.marginal_x();
    auto muy = inst.base_mu.marginal_y();

    TranscriptFactorization out;
    out.p = inst.base_mu;
    out.m_size = R * nm;
    out.u_x.assign(static_cast<size_t>(nx) * out.m_size, 0.0);
    out.u_y.assign(static_cast<size_t>(ny) * out.m_size, 0.0);
    out.output_of.assign(out.m_size, -1);

    std::vector<int> xd(inst.t, -1), yd(inst.t, -1);
    for (int r = 0; r < R; ++r) {
        auto dec = cc.decode(r, nx, ny);
        double pr_r = std::exp2(-static_cast<double>(inst.t - 1));
        for (size_t k = 0; k < cc.order.size(); ++k) {
            if (cc.both[k])
                pr_r *= inst.base_mu(dec.xv[k], dec.yv[k]);
            else
                pr_r *= dec.d[k] == 0 ? mux[dec.xv[k]] : muy[dec.yv[k]];
        }
        if (pr_r <= 0.0) continue;

        // free halves: coordinates whose x (resp. y) must be summed out
        std::vector<size_t> free_x, free_y;
        for (size_t k = 0; k < cc.order.size(); ++k) {
            if (cc.both[k]) continue;
            if (dec.d[k] == 1)
                free_x.push_back(k);
            else
                free_y.push_back(k);
        }

        for (int m = 0; m < nm; ++m) {
            int zm = sv.fac.output_of[m];
            int rho = r * nm + m;
            out.output_of[rho] =
                zm < 0 ? -1 : tuple_digits(zm, nz, inst.t)[j];

            for (int xj = 0; xj < nx; ++xj) {
                // sum over the x halves hidden behind revealed y halves
                double a = 0.0;
                std::fill(xd.begin(), xd.end(), -1);
                xd[j] = xj;
                for (size_t k = 0; k < cc.order.size(); ++k)
                    if (dec.xv[k] >= 0) xd[cc.order[k]] = dec.xv[k];
                size_t nfree = free_x.size();
                std::vector<int> idx(nfree, 0);
                while (true) {
                    double w = 1.0;
                    for (size_t q = 0; q < nfree; ++q) {
                        size_t k = free_x[q];
                        xd[cc.order[k]] = idx[q];
                        w *= inst.base_mu.conditional_x_given_y(
                            dec.yv[k])[idx[q]];
                    }
                    if (w > 0.0) {
                        int xv = tuple_index(xd, nx);
                        w *= sv.fac.ux(xv, m);
                        a += w;
                    }
                    size_t q = 0;
                    for (; q < nfree; ++q) {
                        if (++idx[q] < nx) break;
                        idx[q] = 0;
                    }
                    if (q == nfree) break;
                    if (nfree == 0) break;
                }
                out.u_x[static_cast<size_t>(xj) * out.m_size + rho] = pr_r * a;
            }
            for (int yj = 0; yj < ny; ++yj) {
                double b = 0.0;
                std::fill(yd.begin(), yd.end(), -1);
                yd[j] = yj;
                for (size_t k = 0; k < cc.order.size(); ++k)
                    if (dec.yv[k] >= 0) yd[cc.order[k]] = dec.yv[k];
                size_t nfree = free_y.size();
                std::vector<int> idx(nfree, 0);
                while (true) {
                    double w = 1.0;
                    for (size_t q = 0; q < nfree; ++q) {
                        size_t k = free_y[q];
                        yd[cc.order[k]] = idx[q];
                        w *= inst.base_mu.conditional_y_given_x(
                            dec.xv[k])[idx[q]];
                    }
                    if (w > 0.0) {
                        int yv = tuple_index(yd, ny);
                        w *= sv.fac.uy(yv, m);
                        b += w;
                    }
                    size_t q = 0;
                    for (; q < nfree; ++q) {
                        if (++idx[q] < ny) break;
                        idx[q] = 0;
                    }
                    if (q == nfree) break;
                    if (nfree == 0) break;
                }
                out.u_y[static_cast<size_t>(yj) * out.m_size + rho] = b;
            }
        }
    }
    out.q = out.mass();
    if (out.q <= 0.0)
        throw std::invalid_argument("conditioned_coordinate_factorization: "
                                    "empty transcript support");

    // condition on success over C
    std::vector<char> S(out.m_size, 0);
    for (int r = 0; r < R; ++r) {
        auto dec = cc.decode(r, nx, ny);
        for (int m = 0; m < nm; ++m) {
            int zm = sv.fac.output_of[m];
            bool ok = C.empty() || zm >= 0;
            if (ok && !C.empty()) {
                auto zd = tuple_digits(zm, nz, inst.t);
                for (int i : C) {
                    size_t k = std::find(cc.order.begin(), cc.order.end(), i) -
                               cc.order.begin();
                    if (!inst.base_f.accepts(dec.xv[k], dec.yv[k], zd[i])) {
                        ok = false;
                        break;
                    }
                }
            }
            S[static_cast<size_t>(r) * nm + m] = ok ? 1 : 0;
        }
    }
    TranscriptFactorization cond = condition_on_event(out, S);

    // cross-check against direct conditioning of the materialized joint
    uint32_t maskC = 0;
    for (int i : C) maskC |= 1u << i;
    double gamma = sv.pr_success(maskC);
    if (gamma <= 0.0)
        throw std::invalid_argument(
            "conditioned_coordinate_factorization: null conditioning event");
    const int nxv = sv.fac.p.x_size, nyv = sv.fac.p.y_size, dspace = 1 << inst.t;
    std::vector<double> direct(
        static_cast<size_t>(nx) * ny * cond.m_size, 0.0);
    std::vector<int> dbits(inst.t);
    for (int xv = 0; xv < nxv; ++xv) {
        auto xdd = tuple_digits(xv, nx, inst.t);
        for (int yv = 0; yv < nyv; ++yv) {
            auto ydd = tuple_digits(yv, ny, inst.t);
            for (int m = 0; m < nm; ++m) {
                uint32_t tm =
                    sv.t_mask[(static_cast<size_t>(xv) * nyv + yv) * nm + m];
                if ((tm & maskC) != maskC) continue;
                double w = sv.fac.joint(xv, yv, m);
                if (w <= 0.0) continue;
                for (int dv = 0; dv < dspace; ++dv) {
                    for (int i = 0; i < inst.t; ++i)
                        dbits[i] = (dv >> i) & 1;
                    int r = encode_coin(cc, dbits, xdd, ydd, nx, ny);
                    direct[(static_cast<size_t>(xdd[j]) * ny + ydd[j]) *
                               cond.m_size +
                           (static_cast<size_t>(r) * nm + m)] +=
                        w / (dspace * gamma);
                }
            }
        }
    }
    for (int xj = 0; xj < nx; ++xj)
        for (int yj = 0; yj < ny; ++yj)
            for (int rho = 0; rho < cond.m_size; ++rho) {
                double got = cond.joint(xj, yj, rho);
                double want =
                    direct[(static_cast<size_t>(xj) * ny + yj) * cond.m_size +
                           rho];
                if (std::fabs(got - want) > 1e-12)
                    throw std::logic_error(
                        "conditioned_coordinate_factorization: factorization "
                        "disagrees with direct conditioning");
            }
    return cond;
}

GoodCoordinateReport check_goodcoordinate(const ProductInstance& inst,
                                          const std::vector<int>& C,
                                          double delta1, double c) {
    GoodCoordinateReport rep;
    rep.delta1 = delta1;
    rep.c = c;
    rep.bound_relent = 8.0 * delta1;
    rep.bound_info = 16.0 * delta1 * (c + 1.0);
    const int nx = inst.base_f.x_size, ny = inst.base_f.y_size;
    const int t = inst.t;

    SuccessVariables sv = success_variables(inst);
    uint32_t maskC = 0;
    for (int i : C) maskC |= 1u << i;
    double gamma = sv.pr_success(maskC);
    rep.pr_success = gamma;
    double thresh = std::exp2(-delta1 * t);
    rep.checks.push_back({"success-probability-threshold", gamma, thresh,
                          gamma > thresh});
    if (!(gamma > thresh)) {
        rep.diagnostics = "conditioning event is too unlikely";
        return rep;
    }
    rep.precondition_ok = true;

    const int nxv = sv.fac.p.x_size, nyv = sv.fac.p.y_size, nm = sv.fac.m_size;
    const int dspace = 1 << t;

    // conditioned product-input distribution
    std::vector<double> cond_xy(static_cast<size_t>(nxv) * nyv, 0.0);
    for (int xv = 0; xv < nxv; ++xv)
        for (int yv = 0; yv < nyv; ++yv)
            for (int m = 0; m < nm; ++m)
                if ((sv.t_mask[(static_cast<size_t>(xv) * nyv + yv) * nm + m] &
                     maskC) == maskC)
                    cond_xy[static_cast<size_t>(xv) * nyv + yv] +=
                        sv.fac.joint(xv, yv, m) / gamma;

    auto s_avg = relent(cond_xy, inst.product_mu.mass);
    auto s_max = relminent(cond_xy, inst.product_mu.mass);
    double dt = delta1 * t;
    rep.checks.push_back({"maxdiv-inputs", s_max.value, dt,
                          !s_max.infinite && s_max.value < dt + kTol});
    rep.checks.push_back({"avg-below-max-inputs", s_avg.value, s_max.value,
                          !s_avg.infinite && s_avg.value <= s_max.value + kTol});

    // per-coordinate input divergences
    double sum_coord_s = 0.0;
    std::vector<int> not_c;
    for (int i = 0; i < t; ++i)
        if ((maskC >> i & 1) == 0) not_c.push_back(i);
    for (int i : not_c) {
        std::vector<double> ci(static_cast<size_t>(nx) * ny, 0.0);
        for (int xv = 0; xv < nxv; ++xv) {
            int xi = tuple_digits(xv, nx, t)[i];
            for (int yv = 0; yv < nyv; ++yv) {
                int yi = tuple_digits(yv, ny, t)[i];
                ci[static_cast<size_t>(xi) * ny + yi] +=
                    cond_xy[static_cast<size_t>(xv) * nyv + yv];
            }
        }
        sum_coord_s += relent(ci, inst.base_mu.mass).value;
    }
    rep.checks.push_back({"coordinate-splitting", sum_coord_s, s_avg.value,
                          sum_coord_s <= s_avg.value + kTol});

    // chain over (X, Y, D, U): direction bits stay uniform and independent
    {
        double worst = 0.0, avg = 0.0;
        for (size_t cell = 0; cell < cond_xy.size(); ++cell) {
            double p = cond_xy[cell], q = inst.product_mu.mass[cell];
            if (p <= 0.0) continue;
            worst = std::max(worst, std::log2(p / q));
            avg += p * std::log2(p / q);
        }
        avg = std::max(0.0, avg);
        rep.checks.push_back(
            {"maxdiv-with-direction", worst, dt, worst < dt + kTol});

        // eq2: expectation over (d, u, x_C, y_C)
        KeyedRelent eq2;
        for (int xv = 0; xv < nxv; ++xv) {
            auto xdd = tuple_digits(xv, nx, t);
            for (int yv = 0; yv < nyv; ++yv) {
                auto ydd = tuple_digits(yv, ny, t);
                double w = cond_xy[static_cast<size_t>(xv) * nyv + yv];
                if (w <= 0.0) continue;
                for (int dv = 0; dv < dspace; ++dv) {
                    long long key = dv;
                    double ref = 1.0;
                    long long val = 0;
                    for (int i = 0; i < t; ++i) {
                        int d = (dv >> i) & 1;
                        int u = d == 0 ? xdd[i] : ydd[i];
                        key = key * (nx + ny) + (d == 0 ? u : nx + u);
                        if (maskC >> i & 1) {
                            key = (key * nx + xdd[i]) * ny + ydd[i];
                        } else {
                            val = (val * nx + xdd[i]) * ny + ydd[i];
                            auto cnd = d == 0
                                           ? inst.base_mu.conditional_y_given_x(
                                                 xdd[i])
                                           : inst.base_mu.conditional_x_given_y(
                                                 ydd[i]);
                            ref *= cnd[d == 0 ? ydd[i] : xdd[i]];
                        }
                    }
                    eq2.add(key, val, w / dspace, ref);
                }
            }
        }
        double eq2v = eq2.value();
        rep.checks.push_back(
            {"conditional-splitting", eq2v, avg, eq2v <= avg + kTol});

        // eq4: per-coordinate expectation conditioned on (d_i, u_i, r_i)
        double q4 = 0.0;
        for (int i : not_c) {
            CoordinateCoins cci = coordinate_coins(inst, C, i);
            KeyedRelent kr;
            std::vector<int> dbits(t);
            for (int xv = 0; xv < nxv; ++xv) {
                auto xdd = tuple_digits(xv, nx, t);
                for (int yv = 0; yv < nyv; ++yv) {
                    auto ydd = tuple_digits(yv, ny, t);
                    double w = cond_xy[static_cast<size_t>(xv) * nyv + yv];
                    if (w <= 0.0) continue;
                    for (int dv = 0; dv < dspace; ++dv) {
                        for (int b = 0; b < t; ++b) dbits[b] = (dv >> b) & 1;
                        int ri = encode_coin(cci, dbits, xdd, ydd, nx, ny);
                        int di = dbits[i];
                        int ui = di == 0 ? xdd[i] : ydd[i];
                        long long key =
                            (static_cast<long long>(ri) * 2 + di) *
                                std::max(nx, ny) + ui;
                        auto cnd =
                            di == 0
                                ? inst.base_mu.conditional_y_given_x(xdd[i])
                                : inst.base_mu.conditional_x_given_y(ydd[i]);
                        double ref = cnd[di == 0 ? ydd[i] : xdd[i]];
                        kr.add(key,
                               static_cast<long long>(xdd[i]) * ny + ydd[i],
                               w / dspace, ref);
                    }
                }
            }
            q4 += kr.value();
        }
        rep.checks.push_back({"coordinate-rewrite", eq2v, q4,
                              std::fabs(eq2v - q4) <= kTol});

        // message-information chain
        int comm = 0;
        for (int leaf : inst.tree.leaves())
            comm = std::max(comm,
                            static_cast<int>(inst.tree.path_bits(leaf).size()));
        rep.checks.push_back({"communication-budget", static_cast<double>(comm),
                              delta1 * c * t,
                              static_cast<double>(comm) <= delta1 * c * t + kTol});

        CondMI full_mi;   // I(XY : M | D U X_C Y_C)
        double coord_mi = 0.0;
        std::vector<CondMI> coord_mis(not_c.size());
        std::vector<int> dbits(t);
        for (int xv = 0; xv < nxv; ++xv) {
            auto xdd = tuple_digits(xv, nx, t);
            for (int yv = 0; yv < nyv; ++yv) {
                auto ydd = tuple_digits(yv, ny, t);
                for (int m = 0; m < nm; ++m) {
                    if ((sv.t_mask[(static_cast<size_t>(xv) * nyv + yv) * nm +
                                   m] &
                         maskC) != maskC)
                        continue;
                    double w = sv.fac.joint(xv, yv, m) / gamma;
                    if (w <= 0.0) continue;
                    for (int dv = 0; dv < dspace; ++dv) {
                        for (int b = 0; b < t; ++b) dbits[b] = (dv >> b) & 1;
                        long long key = dv;
                        for (int i = 0; i < t; ++i) {
                            int d = dbits[i];
                            int u = d == 0 ? xdd[i] : ydd[i];
                            key = key * (nx + ny) + (d == 0 ? u : nx + u);
                            if (maskC >> i & 1)
                                key = (key * nx + xdd[i]) * ny + ydd[i];
                        }
                        full_mi.add(
                            static_cast<long long>(xv) * nyv + yv, m, key,
                            w / dspace);
                        for (size_t q = 0; q < not_c.size(); ++q) {
                            int i = not_c[q];
                            CoordinateCoins cci = coordinate_coins(inst, C, i);
                            int ri = encode_coin(cci, dbits, xdd, ydd, nx, ny);
                            int di = dbits[i];
                            int ui = di == 0 ? xdd[i] : ydd[i];
                            long long ckey =
                                (static_cast<long long>(ri) * 2 + di) *
                                    std::max(nx, ny) + ui;
                            coord_mis[q].add(
                                static_cast<long long>(xdd[i]) * ny + ydd[i],
                                m, ckey, w / dspace);
                        }
                    }
                }
            }
        }
        double full_mi_v = full_mi.value();
        for (auto& cm : coord_mis) coord_mi += cm.value();
        rep.checks.push_back({"message-info-below-comm", full_mi_v,
                              static_cast<double>(comm),
                              full_mi_v <= comm + kTol});
        rep.checks.push_back({"message-chain-rule", full_mi_v, coord_mi,
                              std::fabs(full_mi_v - coord_mi) <= kTol});

        // per-coordinate statistics from the compact factorizations
        double sum_info_r = 0.0, half_sum_info_m = 0.0;
        for (int i : not_c) {
            TranscriptFactorization cf =
                conditioned_coordinate_factorization(inst, C, i);
            CoordinateCoins cci = coordinate_coins(inst, C, i);
            JointTable jt({"x", "y", "r", "m"},
                          {nx, ny, cci.count, nm});
            size_t pos = 0;
            for (int xj = 0; xj < nx; ++xj)
                for (int yj = 0; yj < ny; ++yj)
                    for (int r = 0; r < cci.count; ++r)
                        for (int m = 0; m < nm; ++m)
                            jt.p[pos++] = cf.joint(xj, yj, r * nm + m);
            CoordinateBounds cb;
            cb.j = i;
            std::vector<double> ci(static_cast<size_t>(nx) * ny, 0.0);
            for (int xj = 0; xj < nx; ++xj)
                for (int yj = 0; yj < ny; ++yj)
                    for (int rho = 0; rho < cf.m_size; ++rho)
                        ci[static_cast<size_t>(xj) * ny + yj] +=
                            cf.joint(xj, yj, rho);
            cb.relent = relent(ci, inst.base_mu.mass).value;
            cb.info_r = cond_mutual_info(jt, "x", "r", "y") +
                        cond_mutual_info(jt, "y", "r", "x");
            const std::vector<std::string> vx{"x"}, vy{"y"}, vm{"m"};
            cb.info_m = cond_mutual_info(jt, vx, vm, {"r", "y"}) +
                        cond_mutual_info(jt, vy, vm, {"r", "x"});
            cb.qualifies = cb.relent <= rep.bound_relent + kTol &&
                           cb.info_r + cb.info_m <= rep.bound_info + kTol;
            sum_info_r += cb.info_r;
            half_sum_info_m += 0.5 * cb.info_m;
            rep.coords.push_back(cb);
            if (cb.qualifies && rep.j < 0) rep.j = i;
        }
        rep.checks.push_back({"correlated-coin-info", sum_info_r,
                              2.0 * delta1 * t,
                              sum_info_r <= 2.0 * delta1 * t + kTol});
        rep.checks.push_back({"message-half-half", coord_mi, half_sum_info_m,
                              std::fabs(coord_mi - half_sum_info_m) <= kTol});
    }

    bool all = rep.j >= 0;
    for (const auto& chk : rep.checks) all = all && chk.ok;
    rep.all_checks_ok = all;
    if (rep.j < 0) rep.diagnostics = "no coordinate met both bounds";
    return rep;
}

std::vector<DecayPoint> decay_experiment(const Relation& f,
                                         const Distribution& mu,
                                         const ProtocolTree& per_coordinate,
                                         int t_max, double budget_fraction,
                                         long long trials, uint64_t seed) {
    if (t_max < 1 || t_max > 32)
        throw std::invalid_argument("decay_experiment: t_max out of range");
    if (trials < 1) throw std::invalid_argument("decay_experiment: no trials");
    per_coordinate.validate();
    if (per_coordinate.x_size != f.x_size || per_coordinate.y_size != f.y_size)
        throw std::invalid_argument("decay_experiment: protocol/problem mismatch");

    // a-priori best fixed answer for budget-starved coordinates
    int guess = 0;
    double best = -1.0;
    for (int z = 0; z < f.z_size; ++z) {
        double s = 0.0;
        for (int x = 0; x < f.x_size; ++x)
            for (int y = 0; y < f.y_size; ++y)
                if (f.accepts(x, y, z)) s += mu(x, y);
        if (s > best) {
            best = s;
            guess = z;
        }
    }

    std::vector<double> cdf(mu.mass.size());
    double acc = 0.0;
    for (size_t i = 0; i < mu.mass.size(); ++i) {
        acc += mu.mass[i];
        cdf[i] = acc;
    }
    cdf.back() = std::max(cdf.back(), 1.0);

    std::vector<DecayPoint> curve;
    for (int t = 1; t <= t_max; ++t) {
        int budget = std::min(
            t, static_cast<int>(std::floor(budget_fraction * t + 1e-9)));
        long long wins = 0;
        for (long long trial = 0; trial < trials; ++trial) {
            SplitMix64 rng(split_seed(
                seed, (static_cast<uint64_t>(t) << 40) ^
                          static_cast<uint64_t>(trial)));
            bool all_ok = true;
            for (int i = 0; i < t; ++i) {
                double u = rng.next_double();
                size_t cell = std::lower_bound(cdf.begin(), cdf.end(), u) -
                              cdf.begin();
                if (cell >= cdf.size()) cell = cdf.size() - 1;
                int x = static_cast<int>(cell) / mu.y_size;
                int y = static_cast<int>(cell) % mu.y_size;
                int z = i < budget ? per_coordinate.run(x, y).output : guess;
                if (!f.accepts(x, y, z)) all_ok = false;
            }
            if (all_ok) ++wins;
        }
        DecayPoint pt;
        pt.t = t;
        pt.trials = trials;
        pt.budget_coords = budget;
        pt.success = static_cast<double>(wins) / trials;
        pt.std_error = std::sqrt(
            std::max(0.0, pt.success * (1.0 - pt.success) / trials));
        curve.push_back(pt);
    }
    return curve;
}

} // namespace rectbound
