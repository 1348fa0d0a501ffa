#pragma once
#include <string>
#include <vector>

#include "json.hpp"
#include "rectbound/distribution.hpp"
#include "rectbound/relation.hpp"

namespace rectbound {

// Deterministic protocol tree. Each internal node is owned by a player and
// sends one bit, a function of that player's input. The last
// ceil(log2 |Z|) bits of every transcript are the output.
struct ProtocolNode {
    bool leaf = false;
    int owner = 0;             // 0 Alice, 1 Bob
    std::vector<int> decision; // owner's input value -> bit
    int child[2] = {-1, -1};
};

struct ProtocolTree {
    int x_size = 0;
    int y_size = 0;
    int z_size = 0;
    std::vector<ProtocolNode> nodes; // node 0 is the root

    int output_bits() const;
    // leaf ids in discovery order; transcript index = position here
    std::vector<int> leaves() const;
    // root-to-leaf bit path
    std::vector<int> path_bits(int leaf_node) const;
    // output encoded in the last output_bits() of the path
    int leaf_output(int leaf_node) const;

    struct RunResult {
        int transcript; // index into leaves()
        int output;
    };
    RunResult run(int x, int y) const;

    void validate() const;

    static ProtocolTree from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// The product form Pr[XYM=xym] = (1/q) p(x,y) u_x(m) u_y(m). For
// deterministic trees u is 0/1 and q = 1; conditioning produces general q.
// The message space is abstract: directproduct uses (r, m) pairs flattened
// into one index.
struct TranscriptFactorization {
    Distribution p;
    int m_size = 0;
    std::vector<double> u_x;       // x * m_size + m
    std::vector<double> u_y;       // y * m_size + m
    double q = 1.0;
    std::vector<int> output_of;    // per message: the z it encodes (-1 if none)

    double ux(int x, int m) const { return u_x[static_cast<size_t>(x) * m_size + m]; }
    double uy(int y, int m) const { return u_y[static_cast<size_t>(y) * m_size + m]; }

    // (1/q) p(x,y) u_x(m) u_y(m)
    double joint(int x, int y, int m) const {
        return p(x, y) * ux(x, m) * uy(y, m) / q;
    }
    // recompute q = sum p u_x u_y
    double mass() const;

    // Pr[(x,y,out(m)) not in f]
    double err(const Relation& f) const;
};

ProtocolTree alice_sends_x_tree(int x_size, int y_size, int z_size,
                                const std::vector<std::vector<int>>& bob_output);

TranscriptFactorization factorize(const ProtocolTree& tree, const Distribution& p);

// Condition on a subset S of the message space (measurable in m only):
// u values are zeroed outside S and q recomputed.
TranscriptFactorization condition_on_event(const TranscriptFactorization& fac,
                                           const std::vector<char>& S);

} // namespace rectbound
