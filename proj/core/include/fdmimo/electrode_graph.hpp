#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fdmimo/recording.hpp"
#include "fdmimo/types.hpp"

namespace fdmimo {

/// Unweighted undirected electrode adjacency with its combinatorial
/// Laplacian D - A. Edges are stored 0-based with i < j, sorted, unique.
class ElectrodeGraph {
 public:
  using Edge = std::pair<Eigen::Index, Eigen::Index>;

  ElectrodeGraph() = default;

  Eigen::Index node_count() const noexcept { return node_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  const RealMatrix& adjacency() const noexcept { return adjacency_; }
  Eigen::VectorXd degrees() const { return adjacency_.rowwise().sum(); }
  RealMatrix degree_matrix() const { return degrees().asDiagonal(); }
  const RealMatrix& laplacian() const noexcept { return laplacian_; }

  /// Component id per node, ids assigned in order of first node.
  std::vector<Eigen::Index> components() const;

  /// Same graph with nodes relabeled: node i becomes perm[i].
  ElectrodeGraph permuted(const std::vector<Eigen::Index>& perm) const;

  friend ElectrodeGraph graph_from_edge_list(Eigen::Index,
                                             const std::vector<Edge>&);

 private:
  Eigen::Index node_count_ = 0;
  std::vector<Edge> edges_;
  RealMatrix adjacency_;
  RealMatrix laplacian_;
};

/// Edges use 1-based indices. Duplicates collapse; self-loops and
/// out-of-range indices throw InvalidEdge.
ElectrodeGraph graph_from_edge_list(Eigen::Index node_count,
                                    const std::vector<ElectrodeGraph::Edge>& edges);

/// Edge (i, j) iff the Euclidean distance is <= threshold.
ElectrodeGraph graph_from_positions(const std::vector<Position3>& positions,
                                    double threshold_distance);

/// 2 * ||L H||_F^2 = 2 Tr(H^H L^T L H). Rows of H index graph nodes.
double smoothness_penalty(const ComplexMatrix& H, const ElectrodeGraph& graph);

/// Text edge list: one "i j" pair per line, 1-based, '#' starts a comment.
std::vector<ElectrodeGraph::Edge> parse_edge_list(std::string_view text);
std::string format_edge_list(const ElectrodeGraph& graph);

struct ElectrodeMontage {
  std::vector<std::string> labels;
  std::vector<Position3> positions;  // unit-sphere head coordinates
  ElectrodeGraph graph;
};

/// 10-20 scalp sites without Cz and Pz (17 electrodes), adjacency by
/// distance threshold 1.3x the minimum inter-electrode distance.
ElectrodeMontage montage_1020_17();

/// Known names: "1020-17" (alias "10-20-17").
ElectrodeMontage montage_preset(std::string_view name);

}  // namespace fdmimo
