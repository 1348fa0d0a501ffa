#include "rectbound/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace rectbound {

RectangleBoundResult lrec(const Relation& g, const Distribution& lambda, int z,
                          double eps) {
    const int nx = lambda.x_size, ny = lambda.y_size;
    if (nx > 12 || ny > 12)
        throw std::invalid_argument("lrec: |X|,|Y| <= 12 required");
    if (g.x_size != nx || g.y_size != ny)
        throw std::invalid_argument("lrec: dimension mismatch");

    RectangleBoundResult best;
    best.infinite = true;
    double best_mass = 0.0;

    std::vector<double> col_mass(ny), col_good(ny);
    std::vector<double> subset_mass(size_t(1) << ny), subset_good(size_t(1) << ny);

    for (uint64_t rows = 1; rows < (1ULL << nx); ++rows) {
        for (int y = 0; y < ny; ++y) {
            double m = 0.0, good = 0.0;
            for (int x = 0; x < nx; ++x) {
                if (!((rows >> x) & 1ULL)) continue;
                double v = lambda(x, y);
                m += v;
                if (g.accepts(x, y, z)) good += v;
            }
            col_mass[y] = m;
            col_good[y] = good;
        }
        subset_mass[0] = subset_good[0] = 0.0;
        for (uint64_t cols = 1; cols < (1ULL << ny); ++cols) {
            int lb = __builtin_ctzll(cols);
            uint64_t rest = cols & (cols - 1);
            double m = subset_mass[rest] + col_mass[lb];
            double good = subset_good[rest] + col_good[lb];
            subset_mass[cols] = m;
            subset_good[cols] = good;
            if (m <= 0.0) continue;
            if (good + 1e-12 < (1.0 - eps) * m) continue;
            if (m > best_mass) { // strict: first max wins, i.e. smallest bitmask
                best_mass = m;
                best.witness = {rows, cols};
                best.witness_error = 1.0 - good / m;
                best.infinite = false;
            }
        }
    }
    if (!best.infinite) {
        best.value = -std::log2(best_mass);
        best.witness_minentropy = best.value;
    }
    return best;
}

SmoothRectangleResult srec_entropy(const Relation& f, const Distribution& lambda,
                                   int z, double eps, double delta) {
    const int nx = lambda.x_size, ny = lambda.y_size;
    const int cells = nx * ny;
    if (cells > 16)
        throw std::invalid_argument("srec_entropy: |X|*|Y| <= 16 required");
    if (!f.is_total_boolean())
        throw std::invalid_argument("srec_entropy: total boolean f required");

    SmoothRectangleResult best;
    bool have = false;

    Relation g(nx, ny, 2);
    for (uint32_t code = 0; code < (1u << cells); ++code) {
        double dist = 0.0;
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y) {
                int gz = (code >> (x * ny + y)) & 1;
                g.at(x, y) = {gz};
                if (!f.unique_answer(x, y, gz)) dist += lambda(x, y);
            }
        if (dist > delta + 1e-12) continue;
        RectangleBoundResult r = lrec(g, lambda, z, eps);
        bool better = !have || (r.infinite && !best.infinite) ||
                      (!r.infinite && !best.infinite && r.value > best.value);
        if (better) {
            best.value = r.infinite ? 0.0 : r.value;
            best.infinite = r.infinite;
            best.witness_g = g;
            best.g_distance = dist;
            have = true;
        }
    }
    if (!have)
        throw std::invalid_argument("srec_entropy: no admissible g (delta < 0?)");
    return best;
}

std::optional<SeparatedRectangle> rectangle_separation(
    const Relation& f, int z, const std::vector<double>& lambda,
    const std::vector<double>& phi) {
    const int nx = f.x_size, ny = f.y_size;
    const bool rows_small = nx <= ny;
    const int small = rows_small ? nx : ny;
    const int large = rows_small ? ny : nx;
    if (small > 16)
        throw std::invalid_argument("rectangle_separation: min side <= 16 required");

    auto weight = [&](int x, int y) {
        size_t c = static_cast<size_t>(x) * ny + y;
        return f.accepts(x, y, z) ? lambda[c] - phi[c] : -lambda[c];
    };

    SeparatedRectangle best;
    bool have = false;
    for (uint64_t sub = 1; sub < (1ULL << small); ++sub) {
        double lhs = 0.0;
        uint64_t opp = 0;
        for (int j = 0; j < large; ++j) {
            double line = 0.0;
            for (int i = 0; i < small; ++i) {
                if (!((sub >> i) & 1ULL)) continue;
                line += rows_small ? weight(i, j) : weight(j, i);
            }
            if (line > 0.0) {
                lhs += line;
                opp |= 1ULL << j;
            }
        }
        if (opp == 0) continue;
        if (!have || lhs > best.lhs) {
            best.lhs = lhs;
            best.rect = rows_small ? Rectangle{sub, opp} : Rectangle{opp, sub};
            have = true;
        }
    }
    if (!have || best.lhs <= 1.0 + 1e-8) return std::nullopt;
    return best;
}

LPBoundResult srec_lp(const Relation& f, int z, double eps) {
    const int nx = f.x_size, ny = f.y_size;
    if (std::min(nx, ny) > 16)
        throw std::invalid_argument("srec_lp: min(|X|,|Y|) <= 16 required");
    if (!f.is_total_function())
        throw std::invalid_argument("srec_lp: total function f required");
    const int cells = nx * ny;

    // Dual variables: lambda_{x,y} for every cell, then phi_{x,y} for every
    // cell (phi is only meaningful on f^-1(z); elsewhere its objective and
    // constraint coefficients are zero, so it stays at 0).
    LPInstance dual;
    dual.sense = ObjSense::Max;
    dual.objective.assign(2 * cells, 0.0);
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            int c = x * ny + y;
            if (f.accepts(x, y, z)) {
                dual.objective[c] = 1.0 - eps;
                dual.objective[cells + c] = -1.0;
            } else {
                dual.objective[c] = -eps;
            }
        }

    auto rect_row = [&](const Rectangle& W) {
        std::vector<double> coeffs(2 * cells, 0.0);
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y) {
                if (!W.contains(x, y)) continue;
                int c = x * ny + y;
                if (f.accepts(x, y, z)) {
                    coeffs[c] = 1.0;
                    coeffs[cells + c] = -1.0;
                } else {
                    coeffs[c] = -1.0;
                }
            }
        return coeffs;
    };

    // master: all 1x1 rectangles, keeping every variable bounded
    std::vector<Rectangle> generated;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
            Rectangle W{1ULL << x, 1ULL << y};
            dual.add_row(rect_row(W), RowSense::LE, 1.0);
            generated.push_back(W);
        }

    auto oracle = [&](const LPSolution& sol) -> std::optional<LPRow> {
        std::vector<double> lam(sol.primal.begin(), sol.primal.begin() + cells);
        std::vector<double> ph(sol.primal.begin() + cells, sol.primal.end());
        auto sep = rectangle_separation(f, z, lam, ph);
        if (!sep) return std::nullopt;
        generated.push_back(sep->rect);
        return LPRow{rect_row(sep->rect), RowSense::LE, 1.0, ""};
    };

    LPSolution sol = solve_with_row_generation(dual, oracle);
    if (sol.status != LPStatus::Optimal)
        throw std::runtime_error("srec_lp: dual LP not optimal");

    LPBoundResult res;
    res.primal_value = sol.objective;
    res.log_value = res.primal_value > 0 ? std::log2(res.primal_value)
                                         : -std::numeric_limits<double>::infinity();
    res.dual_lambda.assign(sol.primal.begin(), sol.primal.begin() + cells);
    res.dual_phi.assign(sol.primal.begin() + cells, sol.primal.end());
    res.gap = std::fabs(sol.gap);
    res.rectangles_generated = static_cast<int>(generated.size());
    return res;
}

EqvExtraction lemma_eqv_extract(const Relation& f, int z, double eps,
                                const LPBoundResult& dual) {
    const int nx = f.x_size, ny = f.y_size;
    const int cells = nx * ny;
    if (!f.is_total_boolean())
        throw std::invalid_argument("lemma_eqv_extract: total boolean f required");

    // canonicalize weights so a cell carries only one of lambda/phi
    std::vector<double> lam(cells, 0.0), phi(cells, 0.0);
    double total_weight = 0.0;
    for (int c = 0; c < cells; ++c) {
        int x = c / ny, y = c % ny;
        if (f.accepts(x, y, z)) {
            double d = dual.dual_lambda[c] - dual.dual_phi[c];
            if (d > 0) lam[c] = d;
            else phi[c] = -d;
        } else {
            lam[c] = dual.dual_lambda[c];
        }
        total_weight += lam[c] + phi[c];
    }
    if (total_weight <= 1e-12)
        throw std::invalid_argument("lemma_eqv_extract: degenerate all-zero dual");

    EqvExtraction out;
    out.mu = Distribution(nx, ny);
    out.g = Relation(nx, ny, 2);
    int z_other = z == 0 ? 1 : 0;
    double mu1 = 0.0, mu2 = 0.0;
    for (int c = 0; c < cells; ++c) {
        int x = c / ny, y = c % ny;
        bool in_z = f.accepts(x, y, z);
        if (in_z && lam[c] > 0) {           // U1
            out.mu.at(x, y) = lam[c];
            out.g.at(x, y) = {z};
            mu1 += lam[c];
        } else if (in_z && phi[c] > 0) {    // U2
            out.mu.at(x, y) = eps * phi[c];
            out.g.at(x, y) = {z_other};
            mu2 += eps * phi[c];
        } else if (!in_z && lam[c] > 0) {   // U0
            out.mu.at(x, y) = eps * lam[c];
            out.g.at(x, y) = f.at(x, y);
        } else {
            out.g.at(x, y) = f.at(x, y);    // zero-mass cell
        }
    }
    double r = out.mu.total();
    for (auto& m : out.mu.mass) m /= r;
    out.beta = (mu1 + mu2) / r;
    out.delta = mu2 / r;
    out.claimed_lower_bound = std::log2(dual.primal_value) + 3.0 * std::log2(eps);

    double eps_check = out.beta > 0 ? (1.0 + eps * eps) * out.delta / out.beta : 0.0;
    RectangleBoundResult rb = lrec(out.g, out.mu, z, eps_check);
    out.lrec_infinite = rb.infinite;
    out.lrec_value = rb.infinite ? 0.0 : rb.value;
    out.verified = rb.infinite || rb.value >= out.claimed_lower_bound - 1e-9;
    return out;
}

namespace {

// DP over sub-rectangles for the exact distributional protocol error
class ProtocolDP {
public:
    ProtocolDP(const Relation& f, const Distribution& lambda, bool free_output)
        : f_(f), lambda_(lambda), free_output_(free_output),
          nx_(lambda.x_size), ny_(lambda.y_size) {
        out_bits_ = 0;
        while ((1 << out_bits_) < f.z_size) ++out_bits_;
    }

    int commit_level() const { return free_output_ ? 0 : out_bits_; }

    // The last out_bits levels of the tree are the answer: those bits are
    // still player-sent decisions, and the path through them spells z.
    double err(uint64_t rows, uint64_t cols, int budget, int zprefix = 0) {
        if (rows == 0 || cols == 0) return 0.0;
        uint64_t key = (static_cast<uint64_t>(zprefix) << 40) | (rows << 24) |
                       (cols << 8) | static_cast<uint64_t>(budget);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;

        double best;
        if (budget == 0) {
            best = free_output_ ? commit_cost(rows, cols)
                                : answer_cost(rows, cols, zprefix);
        } else {
            const bool output_phase = !free_output_ && budget <= out_bits_;
            best = std::numeric_limits<double>::infinity();
            // split by the sender's input: every bipartition of the live
            // rows (or cols), with both bit assignments when the bit is
            // part of the answer
            uint64_t low = rows & (~rows + 1);
            for (uint64_t s = rows;; s = (s - 1) & rows) {
                if (s & low) {
                    double e = child(s, cols, budget, zprefix, 0, output_phase) +
                               child(rows ^ s, cols, budget, zprefix, 1,
                                     output_phase);
                    if (e < best) best = e;
                    if (output_phase) {
                        e = child(s, cols, budget, zprefix, 1, output_phase) +
                            child(rows ^ s, cols, budget, zprefix, 0,
                                  output_phase);
                        if (e < best) best = e;
                    }
                }
                if (s == 0) break;
            }
            uint64_t lowc = cols & (~cols + 1);
            for (uint64_t s = cols;; s = (s - 1) & cols) {
                if (s & lowc) {
                    double e = child(rows, s, budget, zprefix, 0, output_phase) +
                               child(rows, cols ^ s, budget, zprefix, 1,
                                     output_phase);
                    if (e < best) best = e;
                    if (output_phase) {
                        e = child(rows, s, budget, zprefix, 1, output_phase) +
                            child(rows, cols ^ s, budget, zprefix, 0,
                                  output_phase);
                        if (e < best) best = e;
                    }
                }
                if (s == 0) break;
            }
        }
        memo_[key] = best;
        return best;
    }

private:
    double child(uint64_t rows, uint64_t cols, int budget, int zprefix, int bit,
                 bool output_phase) {
        return err(rows, cols, budget - 1,
                   output_phase ? (zprefix << 1) | bit : zprefix);
    }

    // leaf cost when the answer is forced by the transcript
    double answer_cost(uint64_t rows, uint64_t cols, int z) {
        double bad = 0.0;
        for (int x = 0; x < nx_; ++x) {
            if (!((rows >> x) & 1ULL)) continue;
            for (int y = 0; y < ny_; ++y)
                if (((cols >> y) & 1ULL) &&
                    (z >= f_.z_size || !f_.accepts(x, y, z)))
                    bad += lambda_(x, y);
        }
        return bad;
    }

    double commit_cost(uint64_t rows, uint64_t cols) {
        double best = std::numeric_limits<double>::infinity();
        for (int z = 0; z < f_.z_size; ++z) {
            double bad = 0.0;
            for (int x = 0; x < nx_; ++x) {
                if (!((rows >> x) & 1ULL)) continue;
                for (int y = 0; y < ny_; ++y)
                    if (((cols >> y) & 1ULL) && !f_.accepts(x, y, z))
                        bad += lambda_(x, y);
            }
            if (bad < best) best = bad;
        }
        return best;
    }

    const Relation& f_;
    const Distribution& lambda_;
    bool free_output_;
    int nx_, ny_, out_bits_ = 0;
    std::unordered_map<uint64_t, double> memo_;
};

} // namespace

double optimal_protocol_error(const Relation& f, const Distribution& lambda,
                              int budget_bits, bool free_output) {
    if (lambda.x_size > 8 || lambda.y_size > 8)
        throw std::invalid_argument("optimal_protocol_error: |X|,|Y| <= 8 required");
    if (budget_bits > 8)
        throw std::invalid_argument("optimal_protocol_error: budget <= 8 required");
    ProtocolDP dp(f, lambda, free_output);
    if (budget_bits < dp.commit_level())
        throw std::invalid_argument(
            "optimal_protocol_error: budget below the output length");
    return dp.err((1ULL << lambda.x_size) - 1, (1ULL << lambda.y_size) - 1,
                  budget_bits);
}

DgeqsrecReport check_dgeqsrec(const Relation& f, const Distribution& lambda,
                              int z, double eps, double eps_prime, double delta) {
    DgeqsrecReport rep;
    for (int x = 0; x < lambda.x_size; ++x)
        for (int y = 0; y < lambda.y_size; ++y)
            if (f.unique_answer(x, y, z)) rep.beta += lambda(x, y);

    if (rep.beta <= 2 * eps ||
        (delta + eps) / (rep.beta - 2 * eps) >= (1 + eps_prime) * delta / rep.beta)
        return rep; // precondition_ok stays false
    rep.precondition_ok = true;

    int ob = 0;
    while ((1 << ob) < f.z_size) ++ob;
    rep.d_complexity = 9; // sentinel: above the DP cap
    for (int c = ob; c <= 8; ++c) {
        if (optimal_protocol_error(f, lambda, c) <= eps + 1e-12) {
            rep.d_complexity = c;
            break;
        }
    }
    SmoothRectangleResult sr =
        srec_entropy(f, lambda, z, (1 + eps_prime) * delta / rep.beta, delta);
    rep.srec_value = sr.infinite ? std::numeric_limits<double>::infinity() : sr.value;
    rep.rhs = rep.srec_value - std::log2(4.0 / eps);
    rep.pass = static_cast<double>(rep.d_complexity) >= rep.rhs - 1e-9;
    return rep;
}

} // namespace rectbound
