#pragma once

#include "perturb/bitset.hpp"
#include "perturb/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace perturb {

class GraphBuilder;
class DiGraphBuilder;

// Dense simple graph over vertices 0..n-1 with one bitset row per vertex.
// Immutable after construction: mutation happens only through GraphBuilder,
// so a built Graph can be shared freely across concurrent readers.
class Graph {
public:
    Graph() = default;

    int vertex_count() const { return n_; }
    long long edge_count() const { return m_; }

    bool has_edge(int u, int v) const { return adj_[u].test(v); }
    const Bitset& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return adj_[v].count(); }

    // |N(v) ∩ S|
    int degree_into(int v, const Bitset& s) const;

    // ∩_{v in vs} N(v) ∩ s; empty vs returns s (documented convention)
    Bitset common_neighborhood(const std::vector<int>& vs, const Bitset& s) const;

    // exact e(A,B)/(|A||B|); A, B must be disjoint and nonempty
    Rational bipartite_density(const Bitset& a, const Bitset& b) const;

    long long edges_within(const Bitset& s) const;
    long long edges_between(const Bitset& a, const Bitset& b) const;

    static Graph empty(int n);
    static Graph complete(int n);

    bool operator==(const Graph& o) const { return n_ == o.n_ && adj_ == o.adj_; }

private:
    friend class GraphBuilder;
    int n_ = 0;
    long long m_ = 0;
    std::vector<Bitset> adj_;
};

// Exclusive-use, single-owner builder.
class GraphBuilder {
public:
    explicit GraphBuilder(int n);
    explicit GraphBuilder(const Graph& g);

    int vertex_count() const { return n_; }
    bool has_edge(int u, int v) const { return adj_[u].test(v); }
    void add_edge(int u, int v);
    void remove_edge(int u, int v);
    const Bitset& neighbors(int v) const { return adj_[v]; }

    Graph build() const;

private:
    void check_pair(int u, int v) const;
    int n_;
    std::vector<Bitset> adj_;
};

// Directed simple graph; (u,v) and (v,u) stored independently, no loops.
class DiGraph {
public:
    DiGraph() = default;

    int vertex_count() const { return n_; }
    long long arc_count() const { return m_; }
    bool has_arc(int u, int v) const { return out_[u].test(v); }
    const Bitset& out_neighbors(int v) const { return out_[v]; }
    const Bitset& in_neighbors(int v) const { return in_[v]; }
    int out_degree(int v) const { return out_[v].count(); }
    int in_degree(int v) const { return in_[v].count(); }

private:
    friend class DiGraphBuilder;
    int n_ = 0;
    long long m_ = 0;
    std::vector<Bitset> out_;
    std::vector<Bitset> in_;
};

class DiGraphBuilder {
public:
    explicit DiGraphBuilder(int n);
    bool has_arc(int u, int v) const { return out_[u].test(v); }
    void add_arc(int u, int v);
    DiGraph build() const;

private:
    int n_;
    std::vector<Bitset> out_;
    std::vector<Bitset> in_;
};

// union of two graphs on the same vertex set; error on size mismatch
Graph graph_union(const Graph& g1, const Graph& g2);

// Edge-list text format.  First line "n m", then m lines "u v" with
// 0-indexed endpoints and u < v.  Blank lines and '#' comments are ignored.
// The digraph variant has header "digraph n m" and ordered pairs.
void write_edge_list(std::ostream& os, const Graph& g);
void write_edge_list(std::ostream& os, const DiGraph& g);
Graph read_edge_list(std::istream& is);
DiGraph read_edge_list_digraph(std::istream& is);
Graph load_graph(const std::string& path);
void save_graph(const std::string& path, const Graph& g);

}  // namespace perturb
