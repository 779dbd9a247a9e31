#include "outerspine/io.hpp"

#include <sstream>

namespace outerspine {

json graph_to_json(const Graph& g) {
    json j;
    j["halfEdges"] = g.half_edges();
    json pairs = json::array();
    for (const Edge& e : g.edges()) pairs.push_back({e.a, e.b});
    j["pairs"] = pairs;
    json vof = json::object();
    for (int h : g.half_edges()) vof[std::to_string(h)] = g.vertex_of(h);
    j["vertexOf"] = vof;
    return j;
}

Graph graph_from_json(const json& j) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : j.at("pairs")) {
        pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    }
    std::map<int, int> vof;
    for (const auto& [k, v] : j.at("vertexOf").items()) {
        vof[std::stoi(k)] = v.get<int>();
    }
    return Graph(std::move(pairs), std::move(vof));
}

json rose_to_json(const Rose& r) {
    json j;
    j["n"] = r.n();
    json phi = json::array();
    for (const Word& w : r.phi()) phi.push_back(format_word(w));
    j["phi"] = phi;
    return j;
}

Rose rose_from_json(const json& j) {
    int n = j.at("n").get<int>();
    if (n < 2 || n > 26) throw InputError("rank must be between 2 and 26");
    WordTuple phi;
    for (const auto& s : j.at("phi")) {
        phi.push_back(parse_word(s.get<std::string>(), n));
    }
    if (static_cast<int>(phi.size()) != n) {
        throw InputError("expected exactly n petal words");
    }
    return Rose(std::move(phi));
}

json marked_to_json(const MarkedGraph& m) {
    json j = graph_to_json(m.graph());
    j["basepoint"] = m.basepoint();
    j["petals"] = m.petals();
    return j;
}

MarkedGraph marked_from_json(const json& j) {
    Graph g = graph_from_json(j);
    int base = j.at("basepoint").get<int>();
    std::vector<std::vector<int>> petals;
    for (const auto& p : j.at("petals")) {
        petals.push_back(p.get<std::vector<int>>());
    }
    return MarkedGraph(std::move(g), base, std::move(petals));
}

json ideal_edge_to_json(const IdealEdge& e) { return json(mask_elements(e.side())); }

IdealEdge ideal_edge_from_json(int n, const json& j) {
    return IdealEdge(n, mask_of(j.get<std::vector<int>>()));
}

json ideal_tree_to_json(const IdealTree& t) {
    json j = json::array();
    for (const IdealEdge& e : t) j.push_back(ideal_edge_to_json(e));
    return j;
}

json star_graph_to_json(const StarGraph& s) {
    json j;
    j["n"] = s.n;
    json edges = json::array();
    for (auto [a, b] : s.turns) edges.push_back({half_edge_name(a), half_edge_name(b)});
    j["edges"] = edges;
    json val = json::object();
    for (int h = 0; h < 2 * s.n; ++h) val[half_edge_name(h)] = s.valence[h];
    j["valence"] = val;
    return j;
}

json kn_path_to_json(const KnPath& p) {
    json j;
    json entries = json::array();
    for (const MarkedGraph& m : p.entries()) entries.push_back(marked_to_json(m));
    j["entries"] = entries;
    json steps = json::array();
    for (const KnStep& s : p.steps()) {
        json step;
        step["collapse"] = s.dir == CollapseDir::LeftToRight ? "leftToRight" : "rightToLeft";
        step["forest"] = s.forest;
        steps.push_back(step);
    }
    j["steps"] = steps;
    return j;
}

json descent_to_json(const Rose& start, const std::vector<DescentStep>& steps) {
    json j;
    j["start"] = rose_to_json(start);
    json trace = json::array();
    for (const DescentStep& s : steps) {
        json step;
        step["edge"] = ideal_edge_to_json(s.edge);
        step["side"] = mask_elements(s.side);
        step["half"] = s.half;
        step["rose"] = rose_to_json(s.result);
        trace.push_back(step);
    }
    j["steps"] = trace;
    return j;
}

json retraction_trace_to_json(const RetractionTrace& t) {
    json steps = json::array();
    for (const RetractionStep& s : t.steps) {
        json step;
        switch (s.tag) {
            case StepTag::DropNonReductive: step["tag"] = "dropNonReductive"; break;
            case StepTag::AddGamma: step["tag"] = "addGamma"; break;
            case StepTag::DropAlpha: step["tag"] = "dropAlpha"; break;
            case StepTag::ConeToMu: step["tag"] = "coneToMu"; break;
        }
        step["direction"] =
            s.direction == RetractDirection::Decreasing ? "decreasing" : "increasing";
        step["before"] = s.before;
        step["map"] = s.map;
        step["after"] = s.after;
        if (!s.alpha.empty()) step["alpha"] = s.alpha;
        if (!s.gamma.empty()) step["gamma"] = s.gamma;
        if (!s.mu.empty()) step["mu"] = s.mu;
        steps.push_back(step);
    }
    return json{{"steps", steps}};
}

json pipeline_result_to_json(const PipelineResult& r) {
    json j;
    j["verdict"] =
        r.verdict == PipelineVerdict::EmptyComplex ? "emptyComplex" : "contractible";
    json trees = json::array();
    for (const IdealTree& t : r.reductive_trees) trees.push_back(ideal_tree_to_json(t));
    j["reductiveTrees"] = trees;
    j["trace"] = retraction_trace_to_json(r.trace);
    return j;
}

std::string half_edge_name(int h) {
    char c = static_cast<char>((h % 2 == 0 ? 'a' : 'A') + h / 2);
    return std::string(1, c);
}

std::string graph_to_dot(const Graph& g, const std::string& name) {
    std::ostringstream os;
    os << "graph " << name << " {\n";
    for (int v : g.vertices()) os << "  v" << v << ";\n";
    for (const Edge& e : g.edges()) {
        os << "  v" << g.vertex_of(e.a) << " -- v" << g.vertex_of(e.b) << " [label=\"e"
           << e.id() << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

std::string star_graph_to_dot(const StarGraph& s) {
    std::ostringstream os;
    os << "graph star {\n";
    for (int h = 0; h < 2 * s.n; ++h) os << "  " << half_edge_name(h) << ";\n";
    for (auto [a, b] : s.turns) {
        os << "  " << half_edge_name(a) << " -- " << half_edge_name(b) << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string kn_path_to_dot(const KnPath& p) {
    std::ostringstream os;
    os << "digraph path {\n  rankdir=LR;\n";
    for (std::size_t i = 0; i < p.entries().size(); ++i) {
        const Graph& g = p.entries()[i].graph();
        os << "  subgraph cluster_" << i << " {\n    label=\"step " << i << "\";\n";
        for (int v : g.vertices()) os << "    s" << i << "v" << v << ";\n";
        for (const Edge& e : g.edges()) {
            os << "    s" << i << "v" << g.vertex_of(e.a) << " -> s" << i << "v"
               << g.vertex_of(e.b) << " [dir=none,label=\"e" << e.id() << "\"];\n";
        }
        os << "  }\n";
    }
    for (std::size_t i = 0; i < p.steps().size(); ++i) {
        const char* lbl =
            p.steps()[i].dir == CollapseDir::LeftToRight ? "collapse" : "blowup";
        os << "  s" << i << "v" << p.entries()[i].graph().vertices().front() << " -> s"
           << (i + 1) << "v" << p.entries()[i + 1].graph().vertices().front()
           << " [style=dashed,label=\"" << lbl << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace outerspine
