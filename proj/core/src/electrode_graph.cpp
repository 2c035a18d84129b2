#include "fdmimo/electrode_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fdmimo/error.hpp"

namespace fdmimo {

namespace {

ElectrodeGraph::Edge normalized(ElectrodeGraph::Edge e) {
  if (e.first > e.second) std::swap(e.first, e.second);
  return e;
}

}  // namespace

ElectrodeGraph graph_from_edge_list(
    Eigen::Index node_count, const std::vector<ElectrodeGraph::Edge>& edges) {
  if (node_count < 1) fail(ErrorKind::InvalidInput, "graph needs >= 1 node");
  ElectrodeGraph g;
  g.node_count_ = node_count;
  for (const auto& [i, j] : edges) {
    if (i < 1 || j < 1 || i > node_count || j > node_count) {
      fail(ErrorKind::InvalidEdge, "edge (" + std::to_string(i) + "," +
                                       std::to_string(j) + ") outside [1, " +
                                       std::to_string(node_count) + "]");
    }
    if (i == j) {
      fail(ErrorKind::InvalidEdge, "self-loop at node " + std::to_string(i));
    }
    g.edges_.push_back(normalized({i - 1, j - 1}));
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  g.adjacency_ = RealMatrix::Zero(node_count, node_count);
  for (const auto& [i, j] : g.edges_) {
    g.adjacency_(i, j) = 1.0;
    g.adjacency_(j, i) = 1.0;
  }
  g.laplacian_ = -g.adjacency_;
  g.laplacian_.diagonal() = g.adjacency_.rowwise().sum();
  return g;
}

std::vector<Eigen::Index> ElectrodeGraph::components() const {
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(node_count_));
  for (Eigen::Index i = 0; i < node_count_; ++i) parent[static_cast<std::size_t>(i)] = i;
  auto find = [&](Eigen::Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  };
  for (const auto& [i, j] : edges_) {
    const auto a = find(i), b = find(j);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::vector<Eigen::Index> id(static_cast<std::size_t>(node_count_), -1);
  std::vector<Eigen::Index> root_id(static_cast<std::size_t>(node_count_), -1);
  Eigen::Index next = 0;
  for (Eigen::Index i = 0; i < node_count_; ++i) {
    auto& rid = root_id[static_cast<std::size_t>(find(i))];
    if (rid < 0) rid = next++;
    id[static_cast<std::size_t>(i)] = rid;
  }
  return id;
}

ElectrodeGraph ElectrodeGraph::permuted(
    const std::vector<Eigen::Index>& perm) const {
  if (static_cast<Eigen::Index>(perm.size()) != node_count_) {
    fail(ErrorKind::Shape, "permutation size does not match node count");
  }
  std::vector<Edge> relabeled;
  relabeled.reserve(edges_.size());
  for (const auto& [i, j] : edges_) {
    relabeled.emplace_back(perm[static_cast<std::size_t>(i)] + 1,
                           perm[static_cast<std::size_t>(j)] + 1);
  }
  return graph_from_edge_list(node_count_, relabeled);
}

ElectrodeGraph graph_from_positions(const std::vector<Position3>& positions,
                                    double threshold_distance) {
  if (positions.empty()) fail(ErrorKind::InvalidInput, "no electrode positions");
  if (!(threshold_distance > 0.0)) {
    fail(ErrorKind::InvalidInput, "threshold distance must be positive");
  }
  for (const auto& p : positions) {
    for (double v : p) {
      if (!std::isfinite(v)) fail(ErrorKind::InvalidInput, "non-finite position");
    }
  }
  const auto n = static_cast<Eigen::Index>(positions.size());
  std::vector<ElectrodeGraph::Edge> edges;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto& a = positions[static_cast<std::size_t>(i)];
      const auto& b = positions[static_cast<std::size_t>(j)];
      const double d = std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
      if (d <= threshold_distance) edges.emplace_back(i + 1, j + 1);
    }
  }
  return graph_from_edge_list(n, edges);
}

double smoothness_penalty(const ComplexMatrix& H, const ElectrodeGraph& graph) {
  if (H.rows() != graph.node_count()) {
    fail(ErrorKind::Shape, "H has " + std::to_string(H.rows()) +
                               " rows but the graph has " +
                               std::to_string(graph.node_count()) + " nodes");
  }
  return 2.0 * (graph.laplacian().cast<cplx>() * H).squaredNorm();
}

std::vector<ElectrodeGraph::Edge> parse_edge_list(std::string_view text) {
  std::vector<ElectrodeGraph::Edge> edges;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long i = 0, j = 0;
    if (!(ls >> i)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      fail(ErrorKind::InvalidEdge, "edge list line " + std::to_string(line_no) +
                                       ": expected two indices");
    }
    std::string rest;
    if (!(ls >> j) || (ls >> rest)) {
      fail(ErrorKind::InvalidEdge, "edge list line " + std::to_string(line_no) +
                                       ": expected exactly two indices");
    }
    edges.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return edges;
}

std::string format_edge_list(const ElectrodeGraph& graph) {
  std::ostringstream out;
  out << "# nodes " << graph.node_count() << ", edges " << graph.edges().size()
      << "\n";
  for (const auto& [i, j] : graph.edges()) out << (i + 1) << ' ' << (j + 1) << '\n';
  return out.str();
}

namespace {

// Unit-sphere point from polar angle off the vertex and azimuth measured
// from the nose toward the left ear (degrees).
// Signed polar angle from the vertex (negative on the left) and azimuth from
// the right preauricular axis; x points right, y toward the nasion.
Position3 besa_point(double theta_deg, double phi_deg) {
  constexpr double deg = std::numbers::pi / 180.0;
  const double th = theta_deg * deg, ph = phi_deg * deg;
  return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
}

}  // namespace

ElectrodeMontage montage_1020_17() {
  // Standard spherical 10-20 angles on a unit head.
  const Position3 fp1 = besa_point(-92, -72), fp2 = besa_point(92, 72);
  const Position3 f7 = besa_point(-92, -36), f8 = besa_point(92, 36);
  const Position3 f3 = besa_point(-60, -51), f4 = besa_point(60, 51);
  const Position3 fz = besa_point(46, 90);
  const Position3 t3 = besa_point(-92, 0), t4 = besa_point(92, 0);
  const Position3 c3 = besa_point(-46, 0), c4 = besa_point(46, 0);
  const Position3 t5 = besa_point(-92, 36), t6 = besa_point(92, -36);
  const Position3 p3 = besa_point(-60, 51), p4 = besa_point(60, -51);
  const Position3 o1 = besa_point(-92, 72), o2 = besa_point(92, -72);

  ElectrodeMontage m;
  m.labels = {"Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8", "T3", "C3",
              "C4",  "T4",  "T5", "P3", "P4", "T6", "O1", "O2"};
  m.positions = {fp1, fp2, f7, f3, fz, f4, f8, t3, c3,
                 c4,  t4,  t5, p3, p4, t6, o1, o2};

  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.positions.size(); ++i) {
    for (std::size_t j = i + 1; j < m.positions.size(); ++j) {
      const auto& a = m.positions[i];
      const auto& b = m.positions[j];
      dmin = std::min(dmin, std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]));
    }
  }
  m.graph = graph_from_positions(m.positions, 1.3 * dmin);
  return m;
}

ElectrodeMontage montage_preset(std::string_view name) {
  if (name == "1020-17" || name == "10-20-17") return montage_1020_17();
  fail(ErrorKind::Config, "unknown graph preset '" + std::string(name) + "'");
}

}  // namespace fdmimo
