#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "rectbound/distribution.hpp"
#include "rectbound/protocol.hpp"
#include "rectbound/relation.hpp"

namespace rectbound {

// t-fold product of a base problem together with a protocol on the
// product inputs. Coordinate 0 is the most significant tuple digit.
struct ProductInstance {
    Relation base_f;
    Distribution base_mu;
    int t = 1;
    ProtocolTree tree;
    Relation product_f;
    Distribution product_mu;
};
ProductInstance make_product_instance(const Relation& f, const Distribution& mu,
                                      int t, ProtocolTree tree);

// Exact joint of inputs, transcript, and the per-coordinate success bits.
struct SuccessVariables {
    TranscriptFactorization fac; // over product inputs
    int t = 1;
    std::vector<uint32_t> t_mask; // (xv*nyv+yv)*nm + m -> success bitmask

    // Pr[T_i = 1 for every i in the subset]
    double pr_success(uint32_t subset) const;
};
SuccessVariables success_variables(const ProductInstance& inst);

// Coin description of the auxiliary variable R_j: direction bits and
// revealed halves on the other coordinates, both halves on C and on the
// coordinates before j.
struct CoordinateCoins {
    std::vector<int> order;  // coordinates != j, ascending
    std::vector<char> both;  // per entry: 1 if both halves are in the coin
    std::vector<int> radix;  // per entry
    int count = 1;           // total number of coin values

    // decoded per-entry values for a coin index
    struct Decoded {
        std::vector<int> d;  // per entry
        std::vector<int> xv; // -1 when the x half is free
        std::vector<int> yv;
    };
    Decoded decode(int r, int nx, int ny) const;
};
CoordinateCoins coordinate_coins(const ProductInstance& inst,
                                 const std::vector<int>& C, int j);

// Factorization of the coordinate-j view after conditioning on success on
// C: Pr[x_j, y_j, (r, m)] = mu(x_j, y_j) u_x(r,m) u_y(r,m) / q with the
// message space flattened as r * |M| + m. Cross-checked against the
// directly conditioned full joint to 1e-12.
TranscriptFactorization conditioned_coordinate_factorization(
    const ProductInstance& inst, const std::vector<int>& C, int j);

struct ChainCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

struct CoordinateBounds {
    int j = -1;
    double relent = 0.0; // S(X1_j Y1_j || mu)
    double info_r = 0.0; // I(X:R|Y) + I(Y:R|X)
    double info_m = 0.0; // I(X:M|RY) + I(Y:M|RX)
    bool qualifies = false;
};

struct GoodCoordinateReport {
    bool precondition_ok = false;
    std::string diagnostics;
    double pr_success = 0.0;
    double delta1 = 0.0, c = 0.0;
    double bound_relent = 0.0; // 8 delta1
    double bound_info = 0.0;   // 16 delta1 (c+1)
    std::vector<ChainCheck> checks;
    std::vector<CoordinateBounds> coords;
    int j = -1; // smallest qualifying coordinate, -1 if none
    bool all_checks_ok = false;
};
// Evaluates the whole conditioning chain exactly on the materialized
// joints and picks the smallest coordinate meeting both bounds.
GoodCoordinateReport check_goodcoordinate(const ProductInstance& inst,
                                          const std::vector<int>& C,
                                          double delta1, double c);

struct DecayPoint {
    int t = 0;
    double success = 0.0;
    double std_error = 0.0;
    long long trials = 0;
    int budget_coords = 0;
};
// Monte-Carlo curve of Pr[all coordinates correct] against t when only a
// budget_fraction of coordinates can afford to run the per-coordinate
// protocol; the rest answer with the a-priori best guess.
std::vector<DecayPoint> decay_experiment(const Relation& f,
                                         const Distribution& mu,
                                         const ProtocolTree& per_coordinate,
                                         int t_max, double budget_fraction,
                                         long long trials, uint64_t seed);

} // namespace rectbound
