#include "quickim/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "quickim/error.hpp"
#include "quickim/random.hpp"

namespace quickim {

namespace {

bool valid_probability(double p) { return p > 0.0 && p <= 1.0; }

std::string edge_text(Label u, Label v) {
    return "(" + std::to_string(u) + ", " + std::to_string(v) + ")";
}

}  // namespace

void ProbabilityModel::validate() const {
    if (kind == ModelKind::TR && !(p_t > 0.0 && p_t < 1.0)) {
        throw DomainError("p_t must lie in (0,1), got " + std::to_string(p_t));
    }
    if (kind == ModelKind::UN && !(p_u > 0.0 && p_u < 1.0)) {
        throw DomainError("p_u must lie in (0,1), got " + std::to_string(p_u));
    }
}

std::string ProbabilityModel::describe() const {
    std::ostringstream os;
    switch (kind) {
        case ModelKind::WC: os << "wc"; break;
        case ModelKind::TR: os << "tr(p_t=" << p_t << ",seed=" << rng_seed << ")"; break;
        case ModelKind::UN: os << "un(p_u=" << p_u << ")"; break;
    }
    return os.str();
}

ModelKind parse_model_kind(const std::string& name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "wc") return ModelKind::WC;
    if (lower == "tr") return ModelKind::TR;
    if (lower == "un") return ModelKind::UN;
    throw DomainError("unknown probability model '" + name + "' (expected wc, tr or un)");
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::WC: return "wc";
        case ModelKind::TR: return "tr";
        case ModelKind::UN: return "un";
    }
    return "?";
}

InfluenceGraph::InfluenceGraph() : out_offsets_{0}, in_offsets_{0}, model_("input") {}

InfluenceGraph InfluenceGraph::from_edges(std::size_t vertex_count, std::vector<Edge> edges,
                                          std::vector<Label> labels, std::string probability_model) {
    if (labels.empty()) {
        labels.resize(vertex_count);
        std::iota(labels.begin(), labels.end(), Label{0});
    } else if (labels.size() != vertex_count) {
        throw DomainError("label count does not match vertex count");
    }
    if (vertex_count > std::numeric_limits<VertexId>::max()) {
        throw CapacityError("too many vertices for 32-bit ids");
    }

    InfluenceGraph g;
    g.labels_ = std::move(labels);
    g.model_ = std::move(probability_model);
    g.index_.reserve(vertex_count);
    for (VertexId v = 0; v < vertex_count; ++v) {
        if (!g.index_.emplace(g.labels_[v], v).second) {
            throw DomainError("duplicate vertex label " + std::to_string(g.labels_[v]));
        }
    }

    for (const Edge& e : edges) {
        if (e.source >= vertex_count || e.target >= vertex_count) {
            throw DomainError("edge endpoint out of range");
        }
        if (e.source == e.target) {
            throw DomainError("self-loop on vertex " + std::to_string(g.labels_[e.source]));
        }
        if (!valid_probability(e.probability)) {
            throw DomainError("probability of edge " +
                              edge_text(g.labels_[e.source], g.labels_[e.target]) +
                              " must lie in (0,1], got " + std::to_string(e.probability));
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.source != b.source ? a.source < b.source : a.target < b.target;
    });
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (edges[i].source == edges[i - 1].source && edges[i].target == edges[i - 1].target) {
            throw DomainError("duplicate edge " +
                              edge_text(g.labels_[edges[i].source], g.labels_[edges[i].target]));
        }
    }

    const std::size_t n = vertex_count;
    g.out_offsets_.assign(n + 1, 0);
    g.in_offsets_.assign(n + 1, 0);
    for (const Edge& e : edges) {
        ++g.out_offsets_[e.source + 1];
        ++g.in_offsets_[e.target + 1];
    }
    std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
    std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());

    g.out_arcs_.resize(edges.size());
    g.in_arcs_.resize(edges.size());
    std::vector<std::uint64_t> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        g.out_arcs_[i] = Arc{e.target, e.probability};
        // Sources arrive in ascending order, so each in-list ends up sorted.
        g.in_arcs_[cursor[e.target]++] = Arc{e.source, e.probability};
    }
    return g;
}

std::optional<double> InfluenceGraph::probability(VertexId u, VertexId v) const {
    auto arcs = out_arcs(u);
    auto it = std::lower_bound(arcs.begin(), arcs.end(), v,
                               [](const Arc& a, VertexId x) { return a.vertex < x; });
    if (it == arcs.end() || it->vertex != v) return std::nullopt;
    return it->probability;
}

std::optional<VertexId> InfluenceGraph::find(Label label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

VertexId InfluenceGraph::vertex_of(Label label) const {
    if (auto v = find(label)) return *v;
    throw DomainError("unknown vertex label " + std::to_string(label));
}

std::vector<Edge> InfluenceGraph::edges() const {
    std::vector<Edge> result;
    result.reserve(edge_count());
    for (VertexId u = 0; u < vertex_count(); ++u) {
        for (const Arc& a : out_arcs(u)) result.push_back(Edge{u, a.vertex, a.probability});
    }
    return result;
}

double InfluenceGraph::max_probability() const noexcept {
    double pm = 0.0;
    for (const Arc& a : out_arcs_) pm = std::max(pm, a.probability);
    return pm;
}

std::size_t InfluenceGraph::csr_bytes() const noexcept {
    return (out_offsets_.size() + in_offsets_.size()) * sizeof(std::uint64_t) +
           (out_arcs_.size() + in_arcs_.size()) * sizeof(Arc);
}

void InfluenceGraph::check_consistency() const {
    const std::size_t n = vertex_count();
    if (out_offsets_.size() != n + 1 || in_offsets_.size() != n + 1 ||
        out_arcs_.size() != in_arcs_.size()) {
        throw DomainError("CSR arrays have inconsistent sizes");
    }
    std::vector<std::size_t> in_count(n, 0);
    for (VertexId u = 0; u < n; ++u) {
        VertexId prev = 0;
        bool first = true;
        for (const Arc& a : out_arcs(u)) {
            if (a.vertex >= n) throw DomainError("out-arc target out of range");
            if (a.vertex == u) throw DomainError("self-loop in out-adjacency");
            if (!first && a.vertex <= prev) throw DomainError("out-adjacency not strictly sorted");
            if (!valid_probability(a.probability)) throw DomainError("probability outside (0,1]");
            auto back = in_arcs(a.vertex);
            auto it = std::lower_bound(back.begin(), back.end(), u,
                                       [](const Arc& x, VertexId y) { return x.vertex < y; });
            if (it == back.end() || it->vertex != u || it->probability != a.probability) {
                throw DomainError("edge missing or different in in-adjacency");
            }
            ++in_count[a.vertex];
            prev = a.vertex;
            first = false;
        }
    }
    for (VertexId v = 0; v < n; ++v) {
        if (in_degree(v) != in_count[v]) throw DomainError("in-degree mismatch");
    }
}

InfluenceGraph InfluenceGraph::without_edges(const std::function<bool(const Edge&)>& drop) const {
    std::vector<Edge> kept;
    kept.reserve(edge_count());
    for (const Edge& e : edges()) {
        if (!drop(e)) kept.push_back(e);
    }
    return from_edges(vertex_count(), std::move(kept), labels_, model_);
}

InfluenceGraph assign_probabilities(const InfluenceGraph& graph, const ProbabilityModel& model) {
    model.validate();
    std::vector<Edge> edges = graph.edges();
    const double choices[3] = {model.p_t, model.p_t * model.p_t, model.p_t * model.p_t * model.p_t};
    for (std::size_t i = 0; i < edges.size(); ++i) {
        Edge& e = edges[i];
        switch (model.kind) {
            case ModelKind::WC:
                e.probability = 1.0 / static_cast<double>(graph.in_degree(e.target));
                break;
            case ModelKind::TR: {
                const double u = unit_interval(stream_seed(model.rng_seed, i));
                e.probability = choices[std::min<int>(2, static_cast<int>(u * 3.0))];
                break;
            }
            case ModelKind::UN:
                e.probability = model.p_u;
                break;
        }
    }
    std::vector<Label> labels(graph.labels().begin(), graph.labels().end());
    return InfluenceGraph::from_edges(graph.vertex_count(), std::move(edges), std::move(labels),
                                      model.describe());
}

GraphSummary summarize(const InfluenceGraph& graph) {
    GraphSummary s;
    s.n = graph.vertex_count();
    s.m = graph.edge_count();
    s.avg_out_degree = s.n == 0 ? 0.0 : static_cast<double>(s.m) / static_cast<double>(s.n);
    s.probability_model = graph.probability_model();
    return s;
}

}  // namespace quickim
