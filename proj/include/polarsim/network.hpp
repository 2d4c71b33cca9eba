#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "polarsim/errors.hpp"
#include "polarsim/rng.hpp"

namespace polarsim {

using NodeId = std::uint32_t;

enum class Party : std::uint8_t { Blue = 0, Red = 1 };

/// Undirected network with a static two-party node attribute. Immutable
/// after construction.
///
/// Adjacency is stored as sorted CSR neighbor lists, except for complete
/// graphs where every node is adjacent to every other node and the lists are
/// implicit. The implicit form keeps large complete-graph simulations at
/// O(1) memory instead of O(N^2); both forms answer the same queries.
class Network {
public:
    static Network complete(std::uint32_t n_blue, std::uint32_t n_red) {
        if (n_blue + n_red < 2) throw std::invalid_argument("complete graph needs at least 2 nodes");
        Network net;
        net.n_blue_ = n_blue;
        net.n_red_ = n_red;
        net.complete_ = true;
        net.party_.resize(n_blue + n_red, Party::Blue);
        std::fill(net.party_.begin() + n_blue, net.party_.end(), Party::Red);
        return net;
    }

    /// Two-block stochastic block model: each same-party pair is an edge
    /// independently with probability rho, each cross-party pair with
    /// probability 1-rho. Dense by construction (probabilities are not
    /// rescaled by N). Blue nodes occupy ids [0, n_blue).
    static Network stochastic_block(std::uint32_t n_blue, std::uint32_t n_red, double rho, std::uint64_t seed) {
        if (n_blue + n_red < 2) throw std::invalid_argument("graph needs at least 2 nodes");
        if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must be in (0,1), got " + std::to_string(rho));
        Network net;
        net.n_blue_ = n_blue;
        net.n_red_ = n_red;
        net.party_.resize(n_blue + n_red, Party::Blue);
        std::fill(net.party_.begin() + n_blue, net.party_.end(), Party::Red);

        const std::uint32_t n = n_blue + n_red;
        std::vector<std::uint32_t> degree(n, 0);
        // Pass 1 counts degrees, pass 2 fills; both replay the same per-row
        // streams, so the sample is a deterministic function of the seed.
        for_each_sbm_edge(n_blue, n, rho, seed, [&](NodeId u, NodeId v) {
            ++degree[u];
            ++degree[v];
        });
        net.offsets_.resize(n + 1, 0);
        for (std::uint32_t i = 0; i < n; ++i) net.offsets_[i + 1] = net.offsets_[i] + degree[i];
        net.neighbors_.resize(net.offsets_[n]);
        std::vector<std::size_t> cursor(net.offsets_.begin(), net.offsets_.end() - 1);
        // Edges arrive in lexicographic (u,v) order with u < v, which leaves
        // every neighbor list sorted without an extra pass.
        for_each_sbm_edge(n_blue, n, rho, seed, [&](NodeId u, NodeId v) {
            net.neighbors_[cursor[u]++] = v;
            net.neighbors_[cursor[v]++] = u;
        });
        return net;
    }

    /// Build from an explicit undirected edge list. Validates ids, rejects
    /// self-loops and duplicate edges. `party` defines node count and labels.
    static Network from_edges(std::vector<Party> party, std::vector<std::pair<NodeId, NodeId>> edges) {
        const std::uint32_t n = static_cast<std::uint32_t>(party.size());
        if (n < 2) throw std::invalid_argument("graph needs at least 2 nodes");
        Network net;
        net.party_ = std::move(party);
        net.n_blue_ = static_cast<std::uint32_t>(std::count(net.party_.begin(), net.party_.end(), Party::Blue));
        net.n_red_ = n - net.n_blue_;
        for (auto& [u, v] : edges) {
            if (u >= n || v >= n)
                throw std::invalid_argument("edge endpoint " + std::to_string(std::max(u, v)) +
                                            " out of range for " + std::to_string(n) + " nodes");
            if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(u));
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
            throw std::invalid_argument("duplicate edge in edge list");
        std::vector<std::uint32_t> degree(n, 0);
        for (const auto& [u, v] : edges) {
            ++degree[u];
            ++degree[v];
        }
        net.offsets_.resize(n + 1, 0);
        for (std::uint32_t i = 0; i < n; ++i) net.offsets_[i + 1] = net.offsets_[i] + degree[i];
        net.neighbors_.resize(net.offsets_[n]);
        std::vector<std::size_t> cursor(net.offsets_.begin(), net.offsets_.end() - 1);
        for (const auto& [u, v] : edges) {
            net.neighbors_[cursor[u]++] = v;
            net.neighbors_[cursor[v]++] = u;
        }
        return net;
    }

    std::uint32_t size() const { return n_blue_ + n_red_; }
    std::uint32_t blue_count() const { return n_blue_; }
    std::uint32_t red_count() const { return n_red_; }
    bool is_complete() const { return complete_; }

    Party party(NodeId v) const { return party_[v]; }

    std::uint32_t degree(NodeId v) const {
        if (complete_) return size() - 1;
        return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
    }

    std::size_t edge_count() const {
        if (complete_) {
            const std::size_t n = size();
            return n * (n - 1) / 2;
        }
        return neighbors_.size() / 2;
    }

    template <class F>
    void for_each_neighbor(NodeId v, F&& f) const {
        if (complete_) {
            const std::uint32_t n = size();
            for (NodeId u = 0; u < n; ++u)
                if (u != v) f(u);
            return;
        }
        for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) f(neighbors_[i]);
    }

    /// Sorted neighbor list; explicit storage only.
    const std::vector<NodeId>& flat_neighbors() const { return neighbors_; }
    const std::vector<std::size_t>& offsets() const { return offsets_; }

private:
    Network() = default;

    template <class F>
    static void for_each_sbm_edge(std::uint32_t n_blue, std::uint32_t n, double rho, std::uint64_t seed, F&& f) {
        // Upper-triangle sampling with geometric gap skipping; per-row
        // counter-based streams keep the two passes aligned.
        auto scan_segment = [&](NodeId u, std::uint32_t lo, std::uint32_t hi, double p, SplitMix64& rng) {
            if (lo >= hi) return;
            const double log_q = std::log1p(-p);
            double pos = static_cast<double>(lo) - 1.0;
            for (;;) {
                const double gap = std::floor(std::log(sample_unit_open(rng)) / log_q);
                pos += 1.0 + gap;
                if (pos >= static_cast<double>(hi)) return;
                f(u, static_cast<NodeId>(pos));
            }
        };
        for (NodeId u = 0; u < n; ++u) {
            SplitMix64 rng(derive_seed(seed, "sbm-row", u));
            if (u < n_blue) {
                scan_segment(u, u + 1, n_blue, rho, rng);        // blue-blue
                scan_segment(u, n_blue, n, 1.0 - rho, rng);      // blue-red
            } else {
                scan_segment(u, u + 1, n, rho, rng);             // red-red
            }
        }
    }

    std::uint32_t n_blue_ = 0;
    std::uint32_t n_red_ = 0;
    bool complete_ = false;
    std::vector<Party> party_;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> neighbors_;
};

inline Network generate_complete(std::uint32_t n_blue, std::uint32_t n_red) {
    return Network::complete(n_blue, n_red);
}

inline Network generate_sbm(std::uint32_t n_blue, std::uint32_t n_red, double rho, std::uint64_t seed) {
    return Network::stochastic_block(n_blue, n_red, rho, seed);
}

/// Density-normalized homophily estimate: in-group edge density over the sum
/// of in-group and cross-group densities. Recovers rho of the block model as
/// N grows; 0.5 on a balanced complete graph.
inline double homophily_estimate(const Network& net) {
    const double nb = net.blue_count();
    const double nr = net.red_count();
    const double pairs_in = nb * (nb - 1.0) / 2.0 + nr * (nr - 1.0) / 2.0;
    const double pairs_out = nb * nr;
    std::size_t in_edges = 0;
    std::size_t out_edges = 0;
    const std::uint32_t n = net.size();
    for (NodeId u = 0; u < n; ++u) {
        net.for_each_neighbor(u, [&](NodeId v) {
            if (v <= u) return;
            if (net.party(u) == net.party(v))
                ++in_edges;
            else
                ++out_edges;
        });
    }
    if (in_edges + out_edges == 0) throw std::invalid_argument("homophily estimate undefined on edgeless graph");
    const double d_in = pairs_in > 0.0 ? in_edges / pairs_in : 0.0;
    const double d_out = pairs_out > 0.0 ? out_edges / pairs_out : 0.0;
    return d_in / (d_in + d_out);
}

namespace detail {

inline bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace detail

/// Load a network from an edge-list file (`u v` per line, `#` comments) and
/// a party file (`node_id label` per line, label 1 = red). The party file
/// defines the node count; ids must cover 0..N-1 exactly.
inline Network load_network(const std::string& edge_path, const std::string& party_path) {
    std::ifstream pf(party_path);
    if (!pf) throw io_error("cannot open party file: " + party_path);
    std::vector<std::pair<std::uint64_t, int>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(pf, line)) {
        ++lineno;
        if (detail::blank_or_comment(line)) continue;
        std::istringstream ss(line);
        std::uint64_t id;
        int label;
        if (!(ss >> id >> label)) throw io_error_at(party_path, lineno, "expected `node_id label`");
        std::string rest;
        if (ss >> rest) throw io_error_at(party_path, lineno, "trailing content: " + rest);
        if (label != 0 && label != 1)
            throw io_error_at(party_path, lineno, "label must be 0 or 1, got " + std::to_string(label));
        rows.emplace_back(id, label);
    }
    if (rows.size() < 2) throw io_error(party_path + ": need at least 2 nodes, got " + std::to_string(rows.size()));
    // Node count is max id + 1; every id below it must be present.
    std::uint64_t n = 0;
    for (const auto& [id, label] : rows) n = std::max(n, id + 1);
    if (n > (1ULL << 31)) throw io_error(party_path + ": node id " + std::to_string(n - 1) + " too large");
    std::vector<Party> party(n, Party::Blue);
    std::vector<bool> seen(n, false);
    for (const auto& [id, label] : rows) {
        if (seen[id]) throw io_error(party_path + ": duplicate node id " + std::to_string(id));
        seen[id] = true;
        party[id] = label ? Party::Red : Party::Blue;
    }
    for (std::uint64_t id = 0; id < n; ++id)
        if (!seen[id]) throw io_error(party_path + ": missing node id " + std::to_string(id));

    std::ifstream ef(edge_path);
    if (!ef) throw io_error("cannot open edge file: " + edge_path);
    std::vector<std::pair<NodeId, NodeId>> edges;
    lineno = 0;
    while (std::getline(ef, line)) {
        ++lineno;
        if (detail::blank_or_comment(line)) continue;
        std::istringstream ss(line);
        std::uint64_t u, v;
        if (!(ss >> u >> v)) throw io_error_at(edge_path, lineno, "expected `u v`");
        std::string rest;
        if (ss >> rest) throw io_error_at(edge_path, lineno, "trailing content: " + rest);
        if (u >= n || v >= n)
            throw io_error_at(edge_path, lineno,
                              "node id " + std::to_string(std::max(u, v)) + " not present in party file");
        if (u == v) throw io_error_at(edge_path, lineno, "self-loop at node " + std::to_string(u));
        edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    try {
        return Network::from_edges(std::move(party), std::move(edges));
    } catch (const std::invalid_argument& e) {
        throw io_error(edge_path + ": " + e.what());
    }
}

/// Write the edge-list / party-file pair read back by load_network.
/// Deterministic: edges ascending with u < v, nodes ascending.
inline void save_network(const Network& net, const std::string& edge_path, const std::string& party_path) {
    std::ofstream ef(edge_path);
    if (!ef) throw io_error("cannot open for writing: " + edge_path);
    ef << "# polarsim edge list: u v per line, undirected\n";
    const std::uint32_t n = net.size();
    for (NodeId u = 0; u < n; ++u) {
        net.for_each_neighbor(u, [&](NodeId v) {
            if (u < v) ef << u << ' ' << v << '\n';
        });
    }
    if (!ef.flush()) throw io_error("write failed: " + edge_path);

    std::ofstream pf(party_path);
    if (!pf) throw io_error("cannot open for writing: " + party_path);
    pf << "# polarsim party labels: node_id label (1 = red)\n";
    for (NodeId v = 0; v < n; ++v) pf << v << ' ' << (net.party(v) == Party::Red ? 1 : 0) << '\n';
    if (!pf.flush()) throw io_error("write failed: " + party_path);
}

}  // namespace polarsim
