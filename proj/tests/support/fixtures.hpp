#pragma once

#include <fdmimo/fdmimo.hpp>

namespace fixture {

using namespace fdmimo;

inline FrequencyFrame random_frame(Rng& rng, Eigen::Index N, Eigen::Index P, Eigen::Index M,
                                   double noise = 0.0, ComplexMatrix* truth = nullptr) {
  FrequencyFrame f;
  f.X = rng.complex_normal(P, M);
  const ComplexMatrix H = rng.complex_normal(N, P);
  f.Y = H * f.X;
  if (noise > 0) f.Y += noise * rng.complex_normal(N, M);
  if (truth) *truth = H;
  return f;
}

// Connected random graph: a random spanning tree plus extra edges.
inline ElectrodeGraph random_graph(Rng& rng, Eigen::Index n, double extra_p = 0.2) {
  std::vector<ElectrodeGraph::Edge> e;
  for (Eigen::Index i = 1; i < n; ++i) {
    const auto parent = static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(i));
    e.emplace_back(parent + 1, i + 1);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (rng.uniform() < extra_p) e.emplace_back(i + 1, j + 1);
    }
  }
  return graph_from_edge_list(n, e);
}

inline SampleMatrix random_samples(Rng& rng, Eigen::Index ch, Eigen::Index T) {
  SampleMatrix s(ch, T);
  for (Eigen::Index i = 0; i < ch; ++i) {
    for (Eigen::Index t = 0; t < T; ++t) s(i, t) = rng.normal();
  }
  return s;
}

}  // namespace fixture
