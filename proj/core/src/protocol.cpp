#include "rectbound/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rectbound {

int ProtocolTree::output_bits() const {
    int b = 0;
    while ((1 << b) < z_size) ++b;
    return b;
}

std::vector<int> ProtocolTree::leaves() const {
    std::vector<int> out;
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].leaf) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> ProtocolTree::path_bits(int leaf_node) const {
    // walk from the root; tree is small so a parent scan is fine
    std::vector<int> parent(nodes.size(), -1), via(nodes.size(), 0);
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].leaf) continue;
        for (int b = 0; b < 2; ++b) {
            parent[nodes[i].child[b]] = static_cast<int>(i);
            via[nodes[i].child[b]] = b;
        }
    }
    std::vector<int> bits;
    for (int v = leaf_node; parent[v] != -1; v = parent[v]) bits.push_back(via[v]);
    std::reverse(bits.begin(), bits.end());
    return bits;
}

int ProtocolTree::leaf_output(int leaf_node) const {
    auto bits = path_bits(leaf_node);
    int ob = output_bits();
    if (static_cast<int>(bits.size()) < ob)
        throw std::invalid_argument("ProtocolTree: transcript shorter than the output");
    int z = 0;
    for (int i = static_cast<int>(bits.size()) - ob; i < static_cast<int>(bits.size()); ++i)
        z = (z << 1) | bits[i];
    return z;
}

ProtocolTree::RunResult ProtocolTree::run(int x, int y) const {
    int v = 0;
    while (!nodes[v].leaf) {
        const auto& nd = nodes[v];
        int input = nd.owner == 0 ? x : y;
        if (input < 0 || input >= static_cast<int>(nd.decision.size()))
            throw std::invalid_argument("ProtocolTree: node decision table not total");
        v = nd.child[nd.decision[input]];
    }
    auto lv = leaves();
    int idx = static_cast<int>(std::lower_bound(lv.begin(), lv.end(), v) - lv.begin());
    return {idx, leaf_output(v)};
}

void ProtocolTree::validate() const {
    if (nodes.empty()) throw std::invalid_argument("ProtocolTree: empty");
    int ob = output_bits();
    for (size_t i = 0; i < nodes.size(); ++i) {
        const auto& nd = nodes[i];
        if (nd.leaf) {
            if (static_cast<int>(path_bits(static_cast<int>(i)).size()) < ob)
                throw std::invalid_argument("ProtocolTree: leaf path shorter than output");
            continue;
        }
        int need = nd.owner == 0 ? x_size : y_size;
        if (static_cast<int>(nd.decision.size()) != need)
            throw std::invalid_argument("ProtocolTree: decision table not total");
        for (int b : nd.decision)
            if (b != 0 && b != 1)
                throw std::invalid_argument("ProtocolTree: decision bits must be 0/1");
        for (int b = 0; b < 2; ++b)
            if (nd.child[b] < 0 || nd.child[b] >= static_cast<int>(nodes.size()))
                throw std::invalid_argument("ProtocolTree: child out of range");
    }
}

ProtocolTree ProtocolTree::from_json(const nlohmann::json& j) {
    ProtocolTree t;
    t.x_size = j.at("x_size").get<int>();
    t.y_size = j.at("y_size").get<int>();
    t.z_size = j.at("z_size").get<int>();
    for (const auto& nj : j.at("nodes")) {
        ProtocolNode nd;
        if (nj.contains("leaf") && nj.at("leaf").get<bool>()) {
            nd.leaf = true;
        } else {
            std::string owner = nj.at("owner").get<std::string>();
            nd.owner = owner == "A" || owner == "alice" ? 0 : 1;
            nd.decision = nj.at("decision").get<std::vector<int>>();
            auto ch = nj.at("children").get<std::vector<int>>();
            nd.child[0] = ch.at(0);
            nd.child[1] = ch.at(1);
        }
        t.nodes.push_back(std::move(nd));
    }
    t.validate();
    return t;
}

nlohmann::json ProtocolTree::to_json() const {
    nlohmann::json nodes_j = nlohmann::json::array();
    for (size_t i = 0; i < nodes.size(); ++i) {
        const auto& nd = nodes[i];
        if (nd.leaf) {
            nodes_j.push_back({{"leaf", true},
                               {"transcript_bits", path_bits(static_cast<int>(i))}});
        } else {
            nodes_j.push_back({{"owner", nd.owner == 0 ? "A" : "B"},
                               {"decision", nd.decision},
                               {"children", std::vector<int>{nd.child[0], nd.child[1]}}});
        }
    }
    return {{"x_size", x_size}, {"y_size", y_size}, {"z_size", z_size},
            {"nodes", std::move(nodes_j)}};
}

ProtocolTree alice_sends_x_tree(int x_size, int y_size, int z_size,
                                const std::vector<std::vector<int>>& bob_output) {
    // Alice sends x bit by bit, then Bob sends the output bits; bob_output
    // is indexed [x][y]
    int xb = 0;
    while ((1 << xb) < x_size) ++xb;
    if (xb == 0) xb = 1;
    int ob = 0;
    while ((1 << ob) < z_size) ++ob;
    if (ob == 0) ob = 1;

    ProtocolTree t;
    t.x_size = x_size;
    t.y_size = y_size;
    t.z_size = z_size;

    // build recursively: first xb Alice bits (msb first), then ob Bob bits
    struct Builder {
        ProtocolTree& t;
        int xb, ob, x_size, y_size;
        const std::vector<std::vector<int>>& out;
        int make(int depth, int xprefix) {
            int id = static_cast<int>(t.nodes.size());
            t.nodes.emplace_back();
            if (depth < xb) {
                ProtocolNode nd;
                nd.owner = 0;
                nd.decision.resize(x_size);
                for (int x = 0; x < x_size; ++x)
                    nd.decision[x] = (x >> (xb - 1 - depth)) & 1;
                t.nodes[id] = nd;
                int c0 = make(depth + 1, xprefix << 1);
                int c1 = make(depth + 1, (xprefix << 1) | 1);
                t.nodes[id].child[0] = c0;
                t.nodes[id].child[1] = c1;
            } else if (depth < xb + ob) {
                // x is fully determined by the first xb path bits
                int xv = xprefix >> (depth - xb);
                ProtocolNode nd;
                nd.owner = 1;
                nd.decision.resize(y_size);
                int bit_pos = ob - 1 - (depth - xb);
                for (int y = 0; y < y_size; ++y) {
                    int z = xv < static_cast<int>(out.size()) ? out[xv][y] : 0;
                    nd.decision[y] = (z >> bit_pos) & 1;
                }
                t.nodes[id] = nd;
                int c0 = make(depth + 1, xprefix << 1);
                int c1 = make(depth + 1, (xprefix << 1) | 1);
                t.nodes[id].child[0] = c0;
                t.nodes[id].child[1] = c1;
            } else {
                t.nodes[id].leaf = true;
            }
            return id;
        }
    };
    Builder b{t, xb, ob, x_size, y_size, bob_output};
    b.make(0, 0);
    t.validate();
    return t;
}

double TranscriptFactorization::mass() const {
    double s = 0.0;
    for (int x = 0; x < p.x_size; ++x)
        for (int y = 0; y < p.y_size; ++y)
            for (int m = 0; m < m_size; ++m) s += p(x, y) * ux(x, m) * uy(y, m);
    return s;
}

double TranscriptFactorization::err(const Relation& f) const {
    double e = 0.0;
    for (int x = 0; x < p.x_size; ++x)
        for (int y = 0; y < p.y_size; ++y)
            for (int m = 0; m < m_size; ++m) {
                int z = output_of.empty() ? -1 : output_of[m];
                if (z < 0 || !f.accepts(x, y, z)) e += joint(x, y, m);
            }
    return e;
}

TranscriptFactorization factorize(const ProtocolTree& tree, const Distribution& p) {
    tree.validate();
    auto lv = tree.leaves();
    TranscriptFactorization fac;
    fac.p = p;
    fac.m_size = static_cast<int>(lv.size());
    fac.u_x.assign(static_cast<size_t>(p.x_size) * fac.m_size, 0.0);
    fac.u_y.assign(static_cast<size_t>(p.y_size) * fac.m_size, 0.0);
    fac.q = 1.0;
    fac.output_of.resize(fac.m_size);

    for (int m = 0; m < fac.m_size; ++m) {
        int leaf = lv[m];
        fac.output_of[m] = tree.leaf_output(leaf);
        auto bits = tree.path_bits(leaf);
        // consistency indicators along the path
        for (int x = 0; x < p.x_size; ++x) {
            int v = 0;
            bool ok = true;
            for (int b : bits) {
                const auto& nd = tree.nodes[v];
                if (nd.owner == 0 && nd.decision[x] != b) { ok = false; break; }
                v = nd.child[b];
            }
            fac.u_x[static_cast<size_t>(x) * fac.m_size + m] = ok ? 1.0 : 0.0;
        }
        for (int y = 0; y < p.y_size; ++y) {
            int v = 0;
            bool ok = true;
            for (int b : bits) {
                const auto& nd = tree.nodes[v];
                if (nd.owner == 1 && nd.decision[y] != b) { ok = false; break; }
                v = nd.child[b];
            }
            fac.u_y[static_cast<size_t>(y) * fac.m_size + m] = ok ? 1.0 : 0.0;
        }
    }
    return fac;
}

TranscriptFactorization condition_on_event(const TranscriptFactorization& fac,
                                           const std::vector<char>& S) {
    if (static_cast<int>(S.size()) != fac.m_size)
        throw std::invalid_argument("condition_on_event: event size mismatch");
    TranscriptFactorization out = fac;
    for (int m = 0; m < fac.m_size; ++m) {
        if (S[m]) continue;
        for (int x = 0; x < fac.p.x_size; ++x)
            out.u_x[static_cast<size_t>(x) * fac.m_size + m] = 0.0;
        for (int y = 0; y < fac.p.y_size; ++y)
            out.u_y[static_cast<size_t>(y) * fac.m_size + m] = 0.0;
    }
    out.q = out.mass();
    if (out.q <= 0.0)
        throw std::invalid_argument("condition_on_event: conditioning on a null event");
    return out;
}

} // namespace rectbound
