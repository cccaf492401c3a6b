#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "quickim/error.hpp"
#include "quickim/graph.hpp"

namespace quickim {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::size_t split_tokens(std::string_view line, std::string_view (&tokens)[4]) {
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        if (i == line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && !is_space(line[i])) ++i;
        if (count < 4) tokens[count] = line.substr(start, i - start);
        ++count;
    }
    return count;
}

Label parse_label(std::string_view token, std::size_t line_no) {
    Label value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("invalid vertex label '" + std::string(token) + "'", line_no);
    }
    return value;
}

double parse_probability(std::string_view token, std::size_t line_no) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("invalid probability '" + std::string(token) + "'", line_no);
    }
    return value;
}

std::string format_probability(double p) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p);
    return std::string(buf, ptr);
}

template <class T>
void write_pod(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
void write_array(std::ostream& out, const std::vector<T>& values) {
    if (!values.empty()) {
        out.write(reinterpret_cast<const char*>(values.data()),
                  static_cast<std::streamsize>(values.size() * sizeof(T)));
    }
}

template <class T>
T read_pod(std::istream& in) {
    T value{};
    if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
        throw ParseError("binary cache truncated");
    }
    return value;
}

template <class T>
std::vector<T> read_array(std::istream& in, std::uint64_t count) {
    std::vector<T> values(count);
    if (count != 0 &&
        !in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(count * sizeof(T)))) {
        throw ParseError("binary cache truncated");
    }
    return values;
}

}  // namespace

InfluenceGraph load_edge_list(std::istream& in, EdgeListFormat format) {
    using Columns = EdgeListFormat::Columns;
    std::unordered_map<Label, VertexId> ids;
    std::vector<Label> labels;
    std::vector<Edge> edges;
    std::size_t expected_columns = format.columns == Columns::Pairs      ? 2
                                   : format.columns == Columns::Weighted ? 3
                                                                         : 0;
    auto intern = [&](Label label) {
        auto [it, inserted] = ids.emplace(label, static_cast<VertexId>(labels.size()));
        if (inserted) labels.push_back(label);
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        const auto first = std::find_if_not(view.begin(), view.end(), is_space);
        if (first == view.end() || *first == '#' || *first == '%') continue;

        std::string_view tokens[4];
        const std::size_t count = split_tokens(view, tokens);
        if (count != 2 && count != 3) {
            throw ParseError("expected 'u v' or 'u v p', found " + std::to_string(count) + " fields",
                             line_no);
        }
        if (expected_columns == 0) expected_columns = count;
        if (count != expected_columns) {
            throw ParseError("expected " + std::to_string(expected_columns) + " fields, found " +
                                 std::to_string(count),
                             line_no);
        }
        const Label lu = parse_label(tokens[0], line_no);
        const Label lv = parse_label(tokens[1], line_no);
        const double p = count == 3 ? parse_probability(tokens[2], line_no) : 1.0;
        if (!(p > 0.0 && p <= 1.0)) {
            throw DomainError("line " + std::to_string(line_no) + ": probability " +
                              std::string(tokens[2]) + " outside (0,1]");
        }
        if (lu == lv) {
            throw DomainError("line " + std::to_string(line_no) + ": self-loop on vertex " +
                              std::to_string(lu));
        }
        const VertexId u = intern(lu);
        const VertexId v = intern(lv);
        edges.push_back(Edge{u, v, p});
    }
    if (in.bad()) throw IoError("read error while parsing edge list");
    const std::size_t n = labels.size();
    return InfluenceGraph::from_edges(n, std::move(edges), std::move(labels),
                                      expected_columns == 2 ? "unassigned" : "input");
}

void write_edge_list(std::ostream& out, const InfluenceGraph& graph) {
    const std::size_t n = graph.vertex_count();
    std::vector<char> emitted(graph.edge_count(), 0);
    std::vector<char> introduced(n, 0);

    auto emit = [&](VertexId u, const Arc& arc) {
        const std::uint64_t index =
            graph.out_offset(u) + static_cast<std::uint64_t>(&arc - graph.out_arcs(u).data());
        if (emitted[index]) return;
        emitted[index] = 1;
        introduced[u] = introduced[arc.vertex] = 1;
        out << graph.label(u) << ' ' << graph.label(arc.vertex) << ' '
            << format_probability(arc.probability) << '\n';
    };

    // First pass: one edge per vertex, chosen so that first appearances follow id order.
    for (VertexId y = 0; y < n; ++y) {
        if (introduced[y]) continue;
        auto ins = graph.in_arcs(y);
        auto outs = graph.out_arcs(y);
        if (!ins.empty() && ins.front().vertex < y) {
            const VertexId u = ins.front().vertex;
            auto arcs = graph.out_arcs(u);
            emit(u, *std::lower_bound(arcs.begin(), arcs.end(), y,
                                      [](const Arc& a, VertexId x) { return a.vertex < x; }));
        } else if (!outs.empty() && outs.front().vertex < y) {
            emit(y, outs.front());
        } else {
            auto it = std::lower_bound(outs.begin(), outs.end(), y + 1,
                                       [](const Arc& a, VertexId x) { return a.vertex < x; });
            if (it != outs.end() && it->vertex == y + 1) {
                emit(y, *it);
            } else if (!outs.empty()) {
                emit(y, outs.front());
            } else if (!ins.empty()) {
                const VertexId u = ins.front().vertex;
                auto arcs = graph.out_arcs(u);
                emit(u, *std::lower_bound(arcs.begin(), arcs.end(), y,
                                          [](const Arc& a, VertexId x) { return a.vertex < x; }));
            }
        }
    }
    for (VertexId u = 0; u < n; ++u) {
        for (const Arc& arc : graph.out_arcs(u)) emit(u, arc);
    }
}

void write_binary_cache(std::ostream& out, const InfluenceGraph& graph) {
    const std::uint64_t n = graph.vertex_count();
    const std::uint64_t m = graph.edge_count();
    out.write(kCacheMagic, sizeof kCacheMagic);
    write_pod(out, kCacheVersion);
    write_pod(out, std::uint32_t{0});
    write_pod(out, n);
    write_pod(out, m);
    const std::string& model = graph.probability_model();
    write_pod(out, static_cast<std::uint64_t>(model.size()));
    out.write(model.data(), static_cast<std::streamsize>(model.size()));

    std::vector<Label> labels(graph.labels().begin(), graph.labels().end());
    std::vector<std::uint64_t> offsets(n + 1);
    std::vector<VertexId> targets;
    std::vector<double> probabilities;
    targets.reserve(m);
    probabilities.reserve(m);
    for (VertexId u = 0; u < n; ++u) {
        offsets[u] = graph.out_offset(u);
        for (const Arc& a : graph.out_arcs(u)) {
            targets.push_back(a.vertex);
            probabilities.push_back(a.probability);
        }
    }
    offsets[n] = m;
    write_array(out, labels);
    write_array(out, offsets);
    write_array(out, targets);
    write_array(out, probabilities);
    if (!out) throw IoError("failed to write binary cache");
}

InfluenceGraph read_binary_cache(std::istream& in) {
    char magic[sizeof kCacheMagic];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kCacheMagic, sizeof magic) != 0) {
        throw ParseError("not a graph cache (bad magic bytes)");
    }
    const auto version = read_pod<std::uint32_t>(in);
    if (version != kCacheVersion) {
        throw ParseError("unsupported graph cache version " + std::to_string(version));
    }
    read_pod<std::uint32_t>(in);
    const auto n = read_pod<std::uint64_t>(in);
    const auto m = read_pod<std::uint64_t>(in);
    const auto model_size = read_pod<std::uint64_t>(in);
    if (model_size > 4096) throw ParseError("graph cache header corrupt");
    std::string model(model_size, '\0');
    if (model_size != 0 && !in.read(model.data(), static_cast<std::streamsize>(model_size))) {
        throw ParseError("binary cache truncated");
    }
    auto labels = read_array<Label>(in, n);
    auto offsets = read_array<std::uint64_t>(in, n + 1);
    auto targets = read_array<VertexId>(in, m);
    auto probabilities = read_array<double>(in, m);
    if (offsets.front() != 0 || offsets.back() != m) throw ParseError("graph cache offsets corrupt");

    std::vector<Edge> edges;
    edges.reserve(m);
    for (VertexId u = 0; u < n; ++u) {
        if (offsets[u] > offsets[u + 1]) throw ParseError("graph cache offsets corrupt");
        for (std::uint64_t i = offsets[u]; i < offsets[u + 1]; ++i) {
            edges.push_back(Edge{u, targets[i], probabilities[i]});
        }
    }
    return InfluenceGraph::from_edges(n, std::move(edges), std::move(labels), std::move(model));
}

InfluenceGraph load_graph(const std::filesystem::path& path, EdgeListFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    char magic[sizeof kCacheMagic] = {};
    in.read(magic, sizeof magic);
    const bool binary = in.gcount() == sizeof magic &&
                        std::memcmp(magic, kCacheMagic, sizeof magic) == 0;
    in.clear();
    in.seekg(0);
    if (binary) return read_binary_cache(in);
    return load_edge_list(in, format);
}

}  // namespace quickim
