#include "rectbound/zerocomm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rectbound/bounds.hpp"
#include "rectbound/infotheory.hpp"

namespace rectbound {

void ZeroCommProtocol::validate() const {
    if (x_size < 1 || y_size < 1 || z_size < 1 || coin_count < 1)
        throw std::invalid_argument("zerocomm: empty dimension");
    if (static_cast<int>(coin_mass.size()) != coin_count)
        throw std::invalid_argument("zerocomm: coin mass size mismatch");
    double total = 0.0;
    for (double w : coin_mass) {
        if (w < 0.0) throw std::invalid_argument("zerocomm: negative coin mass");
        total += w;
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw std::invalid_argument("zerocomm: coin mass does not normalize");
    if (alice.size() != static_cast<size_t>(x_size) * coin_count ||
        bob.size() != static_cast<size_t>(y_size) * coin_count)
        throw std::invalid_argument("zerocomm: answer table size mismatch");
    for (int v : alice)
        if (v < -1 || v >= z_size)
            throw std::invalid_argument("zerocomm: answer out of range");
    for (int v : bob)
        if (v < -1 || v >= z_size)
            throw std::invalid_argument("zerocomm: answer out of range");
}

ConditionedJoint conditioned_joint(const ZeroCommProtocol& P,
                                   const Distribution& xy) {
    P.validate();
    if (xy.x_size != P.x_size || xy.y_size != P.y_size)
        throw std::invalid_argument("conditioned_joint: dimension mismatch");
    const int nx = P.x_size, ny = P.y_size, nz = P.z_size, nr = P.coin_count;
    ConditionedJoint cj;
    cj.joint.assign(static_cast<size_t>(nx) * ny * nr * nz, 0.0);
    cj.rz_mass.assign(static_cast<size_t>(nr) * nz, 0.0);
    double total = 0.0;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            double pxy = xy(x, y);
            if (pxy <= 0.0) continue;
            for (int r = 0; r < nr; ++r) {
                int za = P.a(x, r);
                if (za < 0 || za != P.b(y, r)) continue;
                double w = pxy * P.coin_mass[r];
                cj.joint[((static_cast<size_t>(x) * ny + y) * nr + r) * nz + za] = w;
                cj.rz_mass[static_cast<size_t>(r) * nz + za] += w;
                total += w;
            }
        }
    cj.pr_agree = total;
    if (total <= 0.0)
        throw std::invalid_argument(
            "conditioned_joint: the agreement event has probability zero");
    cj.x1y1 = Distribution::uniform(nx, ny);
    if (total > 0.0) {
        for (double& v : cj.joint) v /= total;
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y) {
                double s = 0.0;
                for (int r = 0; r < nr; ++r)
                    for (int z = 0; z < nz; ++z)
                        s += cj.joint[((static_cast<size_t>(x) * ny + y) * nr + r) *
                                          nz + z];
                cj.x1y1.mass[static_cast<size_t>(x) * ny + y] = s;
            }
    }
    return cj;
}

ExtractionResult extract_rectangle(const ZeroCommProtocol& P,
                                   const Distribution& xy, const Relation& f,
                                   const Relation& g, int z, double eps,
                                   double delta, double beta, double eps_prime,
                                   double c) {
    if (P.x_size > 24 || P.y_size > 24)
        throw std::invalid_argument("extract_rectangle: input space too large");
    if (z < 0 || z >= P.z_size)
        throw std::invalid_argument("extract_rectangle: answer out of range");
    ExtractionResult res;
    res.relent_budget = c / eps;
    res.err_bound = (delta + 2.0 * eps) / (beta - 3.0 * eps);

    ConditionedJoint cj = conditioned_joint(P, xy);
    const int nx = P.x_size, ny = P.y_size, nz = P.z_size, nr = P.coin_count;

    if (cj.pr_agree < std::exp2(-c) - 1e-12) {
        res.diagnostics = "agreement probability below 2^-c";
        return res;
    }
    if (l1_distance(cj.x1y1.mass, xy.mass) > eps + 1e-12) {
        res.diagnostics = "conditioned inputs too far from reference";
        return res;
    }
    double in_f = 0.0;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
            for (int r = 0; r < nr; ++r)
                for (int zz = 0; zz < nz; ++zz) {
                    double w = cj.joint[((static_cast<size_t>(x) * ny + y) * nr + r) *
                                            nz + zz];
                    if (w > 0.0 && f.accepts(x, y, zz)) in_f += w;
                }
    if (in_f < 1.0 - eps - 1e-12) {
        res.diagnostics = "conditioned answers violate the relation too often";
        return res;
    }
    if (!(beta > 3.0 * eps) ||
        res.err_bound >= (1.0 + eps_prime) * delta / beta - 1e-15) {
        res.diagnostics = "error amplification precondition fails";
        return res;
    }
    res.hypotheses_ok = true;

    double best_mass = -1.0;
    for (int r = 0; r < nr; ++r) {
        if (cj.rz_mass[static_cast<size_t>(r) * nz + z] <= 0.0) continue;
        Rectangle rect;
        for (int x = 0; x < nx; ++x)
            if (P.a(x, r) == z) rect.rows |= uint64_t{1} << x;
        for (int y = 0; y < ny; ++y)
            if (P.b(y, r) == z) rect.cols |= uint64_t{1} << y;
        double mass = mass_of(rect, xy);
        if (mass <= 0.0) continue;
        double err = 0.0;
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y)
                if (rect.contains(x, y) && !g.accepts(x, y, z))
                    err += xy(x, y) / mass;
        double s = -std::log2(mass);
        if (s <= res.relent_budget + 1e-12 && err <= res.err_bound + 1e-12) {
            double nonabort = cj.rz_mass[static_cast<size_t>(r) * nz + z];
            if (nonabort > best_mass) {
                best_mass = nonabort;
                res.found = true;
                res.r0 = r;
                res.rect = rect;
                res.err = err;
                // the restriction scales the reference uniformly inside the
                // rectangle, so max-ratio and average divergence coincide
                std::vector<double> restr(xy.mass.size(), 0.0);
                for (int x = 0; x < nx; ++x)
                    for (int y = 0; y < ny; ++y)
                        if (rect.contains(x, y))
                            restr[static_cast<size_t>(x) * ny + y] =
                                xy(x, y) / mass;
                res.relent_value = relent(restr, xy.mass).value;
                res.minent_value = relminent(restr, xy.mass).value;
            }
        }
    }
    if (!res.found) res.diagnostics = "no coin value met both thresholds";
    return res;
}

ViolationReport srec_violation_report(const ZeroCommProtocol& P,
                                      const Distribution& xy, const Relation& f,
                                      int z, double eps, double delta,
                                      double beta, double eps_prime, double c) {
    if (P.x_size * P.y_size > 16)
        throw std::invalid_argument("srec_violation_report: instance too large");
    if (z < 0 || z > 1)
        throw std::invalid_argument("srec_violation_report: boolean answers only");
    ViolationReport rep;
    rep.budget = c / eps;
    const int nx = P.x_size, ny = P.y_size;
    const int cells = nx * ny;
    bool all_found = true;
    for (uint32_t code = 0; code < (1u << cells); ++code) {
        // total boolean g: cell bit set means answer 1
        double dist = 0.0;
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y) {
                int zg = (code >> (x * ny + y)) & 1;
                if (!f.accepts(x, y, zg)) dist += xy(x, y);
            }
        if (dist > delta + 1e-12) continue;
        Relation g;
        g.x_size = nx;
        g.y_size = ny;
        g.z_size = std::max(2, P.z_size);
        g.accept.resize(static_cast<size_t>(cells));
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y)
                g.accept[static_cast<size_t>(x) * ny + y] = {
                    static_cast<int>((code >> (x * ny + y)) & 1)};
        ++rep.g_count;
        auto ex = extract_rectangle(P, xy, f, g, z, eps, delta, beta,
                                    eps_prime, c);
        if (!ex.hypotheses_ok) {
            rep.diagnostics = "hypotheses fail: " + ex.diagnostics;
            return rep;
        }
        if (!ex.found) all_found = false;
    }
    rep.all_extractions_found = all_found;
    auto sr = srec_entropy(f, xy, z, (1.0 + eps_prime) * delta / beta, delta);
    rep.srec_value = sr.value;
    rep.srec_infinite = sr.infinite;
    rep.consistent = all_found && !sr.infinite && sr.value <= rep.budget + 1e-9;
    if (!all_found)
        rep.diagnostics = "some nearby total function admitted no extraction";
    return rep;
}

ZeroCommProtocol sampler_to_zerocomm(const TranscriptFactorization& fac,
                                     const SamplerConfig& cfg, int levels) {
    if (!cfg.reduced)
        throw std::invalid_argument("sampler_to_zerocomm: reduced config required");
    if (levels < 1 || levels > 64)
        throw std::invalid_argument("sampler_to_zerocomm: bad grid resolution");
    const int nx = fac.p.x_size, ny = fac.p.y_size, nm = fac.m_size;
    const int k = cfg.k;
    const long long T = cfg.T;
    const double pow_delta = std::exp2(cfg.Delta);
    const double step = pow_delta / levels;
    int mb = 0;
    while ((1 << mb) < nm) ++mb;

    DerivedTables der = derived_quantities(fac);
    auto grid_index = [&](double threshold) {
        double t = threshold / step;
        long long idx = std::llround(t);
        if (std::fabs(t - idx) > 1e-9 || idx < 0 || idx > levels)
            throw std::invalid_argument(
                "sampler_to_zerocomm: threshold not on the coin grid");
        return static_cast<int>(idx);
    };
    // pre-validate every acceptance threshold
    for (int x = 0; x < nx; ++x)
        for (int m = 0; m < nm; ++m) {
            grid_index(fac.ux(x, m));
            grid_index(std::min(pow_delta, pow_delta * der.vx(x, m)));
        }
    for (int y = 0; y < ny; ++y)
        for (int m = 0; m < nm; ++m) {
            grid_index(fac.uy(y, m));
            grid_index(std::min(pow_delta, pow_delta * der.vy(y, m)));
        }

    // coin tuple: per round (message, alpha bucket, beta bucket), then the
    // hash (k rows of mb bits + k offset bits) and the target r (k bits)
    long long per_round = static_cast<long long>(nm) * levels * levels;
    long long hash_space = 1ll << (k * mb + k);
    long long target_space = 1ll << k;
    long long total = hash_space * target_space;
    for (long long i = 0; i < T; ++i) {
        total *= per_round;
        if (total > (1ll << 20))
            throw std::invalid_argument("sampler_to_zerocomm: coin space too large");
    }

    ZeroCommProtocol P;
    P.x_size = nx;
    P.y_size = ny;
    P.z_size = 1;
    for (int v : fac.output_of) P.z_size = std::max(P.z_size, v + 1);
    P.coin_count = static_cast<int>(total);
    P.coin_mass.assign(P.coin_count, 1.0 / total);
    P.alice.assign(static_cast<size_t>(nx) * total, -1);
    P.bob.assign(static_cast<size_t>(ny) * total, -1);

    const uint32_t kmask = (1u << k) - 1;
    for (long long coin = 0; coin < total; ++coin) {
        long long rest = coin;
        std::vector<int> msg(T), ab(T), bb(T);
        for (long long i = 0; i < T; ++i) {
            long long v = rest % per_round;
            rest /= per_round;
            msg[i] = static_cast<int>(v % nm);
            v /= nm;
            ab[i] = static_cast<int>(v % levels);
            bb[i] = static_cast<int>(v / levels);
        }
        uint32_t hbits = static_cast<uint32_t>(rest % hash_space);
        uint32_t r = static_cast<uint32_t>(rest / hash_space) & kmask;
        auto hash_of = [&](int m) {
            uint32_t out = (hbits >> (k * mb)) & kmask; // offset bits
            for (int row = 0; row < k; ++row) {
                uint32_t rowbits = (hbits >> (row * mb)) & ((1u << mb) - 1);
                out ^= static_cast<uint32_t>(
                           __builtin_popcount(rowbits & static_cast<uint32_t>(m)) & 1)
                       << row;
            }
            return out;
        };
        for (int x = 0; x < nx; ++x) {
            int out = -1;
            for (long long i = 0; i < T; ++i) {
                int m = msg[i];
                bool acc =
                    ab[i] < grid_index(fac.ux(x, m)) &&
                    bb[i] < grid_index(std::min(pow_delta,
                                                pow_delta * der.vx(x, m)));
                if (acc) {
                    if (hash_of(m) == r && !fac.output_of.empty())
                        out = fac.output_of[m];
                    break;
                }
            }
            P.alice[static_cast<size_t>(x) * total + coin] = out;
        }
        for (int y = 0; y < ny; ++y) {
            int out = -1;
            for (long long i = 0; i < T; ++i) {
                int m = msg[i];
                bool acc =
                    ab[i] < grid_index(std::min(pow_delta,
                                                pow_delta * der.vy(y, m))) &&
                    bb[i] < grid_index(fac.uy(y, m));
                if (acc && hash_of(m) == r) {
                    if (!fac.output_of.empty()) out = fac.output_of[m];
                    break;
                }
            }
            P.bob[static_cast<size_t>(y) * total + coin] = out;
        }
    }
    return P;
}

} // namespace rectbound
