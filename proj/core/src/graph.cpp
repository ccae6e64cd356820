#include "perturb/graph.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace perturb {

int Graph::degree_into(int v, const Bitset& s) const {
    if (v < 0 || v >= n_) throw std::out_of_range("degree_into: vertex out of range");
    return intersection_count(adj_[v], s);
}

Bitset Graph::common_neighborhood(const std::vector<int>& vs, const Bitset& s) const {
    Bitset acc = s;
    for (size_t i = 0; i < vs.size(); ++i) {
        int v = vs[i];
        if (v < 0 || v >= n_) throw std::out_of_range("common_neighborhood: vertex out of range");
        for (size_t j = i + 1; j < vs.size(); ++j)
            if (vs[j] == v) throw std::invalid_argument("common_neighborhood: duplicate vertex");
        acc &= adj_[v];
    }
    return acc;
}

Rational Graph::bipartite_density(const Bitset& a, const Bitset& b) const {
    if (a.none() || b.none()) throw std::invalid_argument("bipartite_density: empty side");
    if (a.intersects(b)) throw std::invalid_argument("bipartite_density: sides overlap");
    return Rational(BigInt(edges_between(a, b)), BigInt(a.count()) * b.count());
}

long long Graph::edges_within(const Bitset& s) const {
    long long twice = 0;
    s.for_each([&](int v) { twice += intersection_count(adj_[v], s); });
    return twice / 2;
}

long long Graph::edges_between(const Bitset& a, const Bitset& b) const {
    long long cnt = 0;
    a.for_each([&](int v) { cnt += intersection_count(adj_[v], b); });
    return cnt;
}

Graph Graph::empty(int n) { return GraphBuilder(n).build(); }

Graph Graph::complete(int n) {
    GraphBuilder b(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) b.add_edge(u, v);
    return b.build();
}

GraphBuilder::GraphBuilder(int n) : n_(n), adj_(n, Bitset(n)) {
    if (n < 0) throw std::invalid_argument("GraphBuilder: negative size");
}

GraphBuilder::GraphBuilder(const Graph& g) : n_(g.vertex_count()) {
    adj_.reserve(n_);
    for (int v = 0; v < n_; ++v) adj_.push_back(g.neighbors(v));
}

void GraphBuilder::check_pair(int u, int v) const {
    if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw std::out_of_range("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loops are not allowed");
}

void GraphBuilder::add_edge(int u, int v) {
    check_pair(u, v);
    adj_[u].set(v);
    adj_[v].set(u);
}

void GraphBuilder::remove_edge(int u, int v) {
    check_pair(u, v);
    adj_[u].reset(v);
    adj_[v].reset(u);
}

Graph GraphBuilder::build() const {
    Graph g;
    g.n_ = n_;
    g.adj_ = adj_;
    long long twice = 0;
    for (const auto& row : g.adj_) twice += row.count();
    g.m_ = twice / 2;
    return g;
}

DiGraphBuilder::DiGraphBuilder(int n) : n_(n), out_(n, Bitset(n)), in_(n, Bitset(n)) {
    if (n < 0) throw std::invalid_argument("DiGraphBuilder: negative size");
}

void DiGraphBuilder::add_arc(int u, int v) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_) throw std::out_of_range("arc endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loops are not allowed");
    out_[u].set(v);
    in_[v].set(u);
}

DiGraph DiGraphBuilder::build() const {
    DiGraph g;
    g.n_ = n_;
    g.out_ = out_;
    g.in_ = in_;
    long long arcs = 0;
    for (const auto& row : g.out_) arcs += row.count();
    g.m_ = arcs;
    return g;
}

Graph graph_union(const Graph& g1, const Graph& g2) {
    if (g1.vertex_count() != g2.vertex_count())
        throw std::invalid_argument("graph_union: size mismatch");
    GraphBuilder b(g1);
    for (int v = 0; v < g2.vertex_count(); ++v)
        g2.neighbors(v).for_each([&](int u) {
            if (u > v) b.add_edge(v, u);
        });
    return b.build();
}

void write_edge_list(std::ostream& os, const Graph& g) {
    os << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (int u = 0; u < g.vertex_count(); ++u)
        g.neighbors(u).for_each([&](int v) {
            if (u < v) os << u << ' ' << v << '\n';
        });
}

void write_edge_list(std::ostream& os, const DiGraph& g) {
    os << "digraph " << g.vertex_count() << ' ' << g.arc_count() << '\n';
    for (int u = 0; u < g.vertex_count(); ++u)
        g.out_neighbors(u).for_each([&](int v) { os << u << ' ' << v << '\n'; });
}

namespace {

// strips comments/blank lines, returns the next payload line
bool next_line(std::istream& is, std::string& line) {
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        bool blank = true;
        for (char c : line)
            if (!isspace(static_cast<unsigned char>(c))) blank = false;
        if (!blank) return true;
    }
    return false;
}

}  // namespace

Graph read_edge_list(std::istream& is) {
    std::string line;
    if (!next_line(is, line)) throw std::runtime_error("edge list: missing header");
    std::istringstream hdr(line);
    long long n, m;
    if (!(hdr >> n >> m) || n < 0 || m < 0) throw std::runtime_error("edge list: bad header");
    GraphBuilder b(static_cast<int>(n));
    for (long long i = 0; i < m; ++i) {
        if (!next_line(is, line)) throw std::runtime_error("edge list: truncated");
        std::istringstream row(line);
        int u, v;
        if (!(row >> u >> v)) throw std::runtime_error("edge list: bad edge line");
        if (u >= v) throw std::runtime_error("edge list: endpoints must satisfy u < v");
        b.add_edge(u, v);
    }
    return b.build();
}

DiGraph read_edge_list_digraph(std::istream& is) {
    std::string line;
    if (!next_line(is, line)) throw std::runtime_error("edge list: missing header");
    std::istringstream hdr(line);
    std::string tag;
    long long n, m;
    if (!(hdr >> tag >> n >> m) || tag != "digraph" || n < 0 || m < 0)
        throw std::runtime_error("edge list: bad digraph header");
    DiGraphBuilder b(static_cast<int>(n));
    for (long long i = 0; i < m; ++i) {
        if (!next_line(is, line)) throw std::runtime_error("edge list: truncated");
        std::istringstream row(line);
        int u, v;
        if (!(row >> u >> v)) throw std::runtime_error("edge list: bad arc line");
        b.add_arc(u, v);
    }
    return b.build();
}

Graph load_graph(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return read_edge_list(f);
}

void save_graph(const std::string& path, const Graph& g) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    write_edge_list(f, g);
}

namespace {

// digit-by-digit integer parse; BigInt's string constructor treats a leading
// zero as octal, which would corrupt decimals like "0.05"
BigInt parse_digits(const std::string& s) {
    if (s.empty()) return BigInt(0);
    BigInt v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw std::invalid_argument("rational: bad digit in '" + s + "'");
        v = v * 10 + (c - '0');
    }
    return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("rational: empty string");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Rational num = parse_rational(text.substr(0, slash));
        Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        return num / den;
    }
    std::string body = text;
    bool neg = false;
    if (body[0] == '+' || body[0] == '-') {
        neg = body[0] == '-';
        body.erase(0, 1);
    }
    auto dot = body.find('.');
    std::string ip = dot == std::string::npos ? body : body.substr(0, dot);
    std::string fp = dot == std::string::npos ? "" : body.substr(dot + 1);
    BigInt den = 1;
    for (size_t i = 0; i < fp.size(); ++i) den *= 10;
    BigInt num = parse_digits(ip) * den + parse_digits(fp);
    if (neg) num = -num;
    return Rational(num, den);
}

}  // namespace perturb
