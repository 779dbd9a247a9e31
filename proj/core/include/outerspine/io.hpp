#pragma once

#include <string>

#include <json.hpp>

#include "outerspine/complexes.hpp"
#include "outerspine/folds.hpp"
#include "outerspine/whitehead.hpp"

namespace outerspine {

using json = nlohmann::ordered_json;

// graphs: {"halfEdges":[...], "pairs":[[h, hbar], ...], "vertexOf":{"h": v}}
json graph_to_json(const Graph& g);
Graph graph_from_json(const json& j);

// roses: {"n": 2, "phi": ["ab", "b"]}
json rose_to_json(const Rose& r);
Rose rose_from_json(const json& j);

// marked graphs embed the graph schema plus basepoint and petal paths
json marked_to_json(const MarkedGraph& m);
MarkedGraph marked_from_json(const json& j);

// ideal edges as the sorted half-edge ids of the canonical side
json ideal_edge_to_json(const IdealEdge& e);
IdealEdge ideal_edge_from_json(int n, const json& j);
json ideal_tree_to_json(const IdealTree& t);

json star_graph_to_json(const StarGraph& s);
json kn_path_to_json(const KnPath& p);
json descent_to_json(const Rose& start, const std::vector<DescentStep>& steps);
json retraction_trace_to_json(const RetractionTrace& t);
json pipeline_result_to_json(const PipelineResult& r);

std::string graph_to_dot(const Graph& g, const std::string& name = "G");
std::string star_graph_to_dot(const StarGraph& s);
std::string kn_path_to_dot(const KnPath& p);

/// Half-edge names used in DOT output: petal i's forward half is the letter
/// of x_i, its reverse the uppercase letter.
std::string half_edge_name(int h);

}  // namespace outerspine
