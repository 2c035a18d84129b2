#include <algorithm>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace fdmimo;

TEST(ElectrodeGraph, PathLaplacian) {
  const auto g = graph_from_edge_list(3, {{1, 2}, {2, 3}});
  RealMatrix expect(3, 3);
  expect << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  EXPECT_EQ(g.laplacian(), expect);
  EXPECT_EQ(graph_from_edge_list(2, {}).laplacian(), RealMatrix::Zero(2, 2));
}

TEST(ElectrodeGraph, CycleSpectrum) {
  const auto g = graph_from_edge_list(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}});
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(g.laplacian());
  const Eigen::Vector4d ev = es.eigenvalues();
  const Eigen::Vector4d expect(0, 2, 2, 4);
  EXPECT_LT((ev - expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ElectrodeGraph, EdgeErrorsAndDedup) {
  for (std::vector<ElectrodeGraph::Edge> bad : {std::vector<ElectrodeGraph::Edge>{{1, 1}},
                                               std::vector<ElectrodeGraph::Edge>{{0, 2}},
                                               std::vector<ElectrodeGraph::Edge>{{1, 4}}}) {
    try {
      graph_from_edge_list(3, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidEdge);
    }
  }
  const auto g = graph_from_edge_list(3, {{1, 2}, {2, 1}, {1, 2}});
  EXPECT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(g.degrees()(0), 1.0);
}

TEST(ElectrodeGraph, MatchesBruteForce) {
  fdmimo::Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + trial % 12);
    std::vector<ElectrodeGraph::Edge> e;
    for (Eigen::Index i = 1; i <= n; ++i) {
      for (Eigen::Index j = 1; j <= n; ++j) {
        if (i != j && rng.uniform() < 0.15) e.emplace_back(i, j);
      }
    }
    const auto g = graph_from_edge_list(n, e);
    EXPECT_EQ(g.laplacian(), oracle::laplacian_bruteforce(n, e));
    EXPECT_EQ(g.laplacian(), g.degree_matrix() - g.adjacency());
  }
}

TEST(GraphFromPositions, Grids) {
  std::vector<Position3> sq{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  EXPECT_EQ(graph_from_positions(sq, 1.0).edges().size(), 4u);
  EXPECT_EQ(graph_from_positions(sq, 0.5).edges().size(), 0u);
  EXPECT_EQ(graph_from_positions(sq, 1e300).edges().size(), 6u);

  std::vector<Position3> grid;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) grid.push_back({5.0 * i, 5.0 * j, 0.0});
  }
  std::size_t brute = 0;
  for (std::size_t a = 0; a < grid.size(); ++a) {
    for (std::size_t b = a + 1; b < grid.size(); ++b) {
      const double d = std::hypot(grid[a][0] - grid[b][0], grid[a][1] - grid[b][1]);
      if (d <= 5.0) ++brute;
    }
  }
  EXPECT_EQ(brute, 24u);
  EXPECT_EQ(graph_from_positions(grid, 5.0).edges().size(), brute);
}

TEST(SmoothnessPenalty, Examples) {
  const auto path = graph_from_edge_list(3, {{1, 2}, {2, 3}});
  ComplexMatrix H(3, 1);
  H << 1, 0, 0;
  EXPECT_DOUBLE_EQ(smoothness_penalty(H, path), 4.0);
  ComplexMatrix C(3, 2);
  C.rowwise() = Eigen::RowVector2cd(cplx(1, 2), cplx(-3, 0.5));
  EXPECT_EQ(smoothness_penalty(C, path), 0.0);
  fdmimo::Rng rng(1);
  EXPECT_EQ(smoothness_penalty(rng.complex_normal(3, 4), graph_from_edge_list(3, {})), 0.0);
  try {
    smoothness_penalty(rng.complex_normal(4, 2), path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Shape);
  }
}

TEST(SmoothnessPenalty, PermutationEquivariant) {
  fdmimo::Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 3 + trial % 10;
    const auto g = fixture::random_graph(rng, n, 0.3);
    const ComplexMatrix H = rng.complex_normal(n, 3);
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size() - 1; i > 0; --i) {
      std::swap(perm[i], perm[static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1))]);
    }
    ComplexMatrix Hp(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) Hp.row(perm[static_cast<std::size_t>(i)]) = H.row(i);
    const double a = smoothness_penalty(H, g), b = smoothness_penalty(Hp, g.permuted(perm));
    EXPECT_NEAR(a, b, 1e-12 * a);
  }
}

TEST(ElectrodeGraph, Components) {
  const auto g = graph_from_edge_list(6, {{1, 2}, {4, 5}, {5, 6}});
  EXPECT_EQ(g.components(), (std::vector<Eigen::Index>{0, 0, 1, 2, 2, 2}));
}

TEST(EdgeListText, RoundTrip) {
  const auto edges = parse_edge_list("# header\n1 2\n\n2 3  # trailing\n3 1\n");
  ASSERT_EQ(edges.size(), 3u);
  const auto g = graph_from_edge_list(3, edges);
  const auto back = graph_from_edge_list(3, parse_edge_list(format_edge_list(g)));
  EXPECT_EQ(back.edges(), g.edges());
  try {
    parse_edge_list("1 x\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidEdge);
  }
}

TEST(Montage, SeventeenSitePreset) {
  const auto m = montage_1020_17();
  ASSERT_EQ(m.labels.size(), 17u);
  EXPECT_EQ(std::count(m.labels.begin(), m.labels.end(), "Cz"), 0);
  EXPECT_EQ(std::count(m.labels.begin(), m.labels.end(), "Pz"), 0);
  const auto comps = m.graph.components();
  EXPECT_EQ(*std::max_element(comps.begin(), comps.end()), 0);

  double dmin = 1e300;
  for (std::size_t i = 0; i < 17; ++i) {
    for (std::size_t j = i + 1; j < 17; ++j) {
      const auto& a = m.positions[i];
      const auto& b = m.positions[j];
      dmin = std::min(dmin, std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]));
    }
  }
  EXPECT_EQ(m.graph.edges(), graph_from_positions(m.positions, 1.3 * dmin).edges());
  EXPECT_EQ(montage_preset("1020-17").graph.edges(), m.graph.edges());
  try {
    montage_preset("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
}
