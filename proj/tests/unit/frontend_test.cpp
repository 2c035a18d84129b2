#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace fdmimo;

namespace {

Recording ramp_recording(Eigen::Index ch, Eigen::Index T, double fs = 1000.0) {
  SampleMatrix s(ch, T);
  for (Eigen::Index c = 0; c < ch; ++c) {
    for (Eigen::Index t = 0; t < T; ++t) s(c, t) = static_cast<double>(c * 100000 + t) * 0.25;
  }
  return Recording::unlabeled(std::move(s), fs);
}

std::vector<double> row(const SampleMatrix& m, Eigen::Index r) {
  return {m.row(r).data(), m.row(r).data() + m.cols()};
}

}  // namespace

TEST(Segment, FloorCount) {
  const SegmentationPlan plan(1000, 1, 1000.0);
  EXPECT_EQ(segment(ramp_recording(2, 10000), plan).size(), 10u);
  EXPECT_EQ(segment(ramp_recording(2, 10500), plan).size(), 10u);
}

TEST(Segment, TooShortIsInsufficientData) {
  const SegmentationPlan plan(1000, 1, 1000.0);
  try {
    segment(ramp_recording(1, 999), plan);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
}

TEST(Segment, PartitionIsBitExact) {
  fdmimo::Rng rng(3);
  const auto rec = Recording::unlabeled(fixture::random_samples(rng, 3, 7777), 500.0);
  const SegmentationPlan plan(640, 2, 500.0, 30.0);
  const auto blocks = segment(rec, plan);
  ASSERT_EQ(blocks.size(), 12u);
  for (Eigen::Index c = 0; c < 3; ++c) {
    Eigen::Index t = 0;
    for (const auto& b : blocks) {
      ASSERT_EQ(b.cols(), 640);
      for (Eigen::Index i = 0; i < b.cols(); ++i, ++t) {
        ASSERT_EQ(std::memcmp(&b(c, i), &rec.samples()(c, t), sizeof(double)), 0);
      }
    }
  }
}

TEST(Dft, DcBlock) {
  SampleMatrix b = SampleMatrix::Ones(1, 8);
  const ComplexMatrix D = dft_symbol(b);
  EXPECT_EQ(D(0, 0), cplx(8.0, 0.0));
  for (int k = 1; k < 8; ++k) EXPECT_LT(std::abs(D(0, k)), 1e-12);
}

TEST(Dft, IntegerBinCosine) {
  const int L = 64, b0 = 5;
  SampleMatrix b(1, L);
  for (int t = 0; t < L; ++t) b(0, t) = std::cos(2.0 * std::numbers::pi * b0 * t / L);
  const ComplexMatrix D = dft_symbol(b);
  for (int k = 0; k < L; ++k) {
    const double expect = (k == b0 || k == L - b0) ? L / 2.0 : 0.0;
    EXPECT_NEAR(std::abs(D(0, k)), expect, 1e-10) << k;
  }
}

TEST(Dft, MatchesNaiveSummation) {
  fdmimo::Rng rng(11);
  for (int L : {16, 15, 97, 1000}) {
    const SampleMatrix b = fixture::random_samples(rng, 2, L);
    const ComplexMatrix D = dft_symbol(b);
    for (Eigen::Index c = 0; c < 2; ++c) {
      const auto ref = oracle::naive_dft(row(b, c));
      double num = 0, den = 0;
      for (int k = 0; k < L; ++k) {
        num += std::norm(D(c, k) - ref[static_cast<std::size_t>(k)]);
        den += std::norm(ref[static_cast<std::size_t>(k)]);
      }
      EXPECT_LE(std::sqrt(num / den), 1e-10) << "L=" << L;
    }
  }
}

TEST(Dft, ParsevalAndLinearity) {
  fdmimo::Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int L = 32 + 37 * trial;
    const SampleMatrix A = fixture::random_samples(rng, 3, L);
    const SampleMatrix B = fixture::random_samples(rng, 3, L);
    const ComplexMatrix DA = dft_symbol(A), DB = dft_symbol(B);
    for (Eigen::Index c = 0; c < 3; ++c) {
      const double lhs = DA.row(c).squaredNorm();
      const double rhs = L * A.row(c).squaredNorm();
      EXPECT_LE(std::abs(lhs - rhs) / rhs, 1e-9);
    }
    const double a = 1.7, bcoef = -0.3;
    const SampleMatrix C = a * A + bcoef * B;
    const ComplexMatrix lin = a * DA + bcoef * DB;
    EXPECT_LE(oracle::rel_err(dft_symbol(C), lin), 1e-10);
  }
}

TEST(FrequencyStep, TimesSymbolLenIsExact) {
  for (Eigen::Index L = 1; L <= 100000; L += 7) {
    const SegmentationPlan plan(L, 1, 1000.0, 0.0);
    ASSERT_EQ(plan.step().times_symbol_len(), 1000.0);
  }
  const SegmentationPlan p(1000, 1, 1000.0);
  EXPECT_EQ(p.delta_f_hz(), 1.0);
  EXPECT_EQ(p.retained_bins().size(), 31u);
}

TEST(SegmentationPlan, BandCapIsInclusive) {
  const SegmentationPlan p(3000, 1, 1000.0, 30.0);
  ASSERT_EQ(p.retained_bins().back(), 90);
  const SegmentationPlan q(1500, 1, 1000.0, 30.0);
  EXPECT_EQ(q.retained_bins().back(), 45);
  EXPECT_DOUBLE_EQ(q.step().bin_hz(45), 30.0);
}

TEST(AssembleFrames, ShapesAndFloor) {
  fdmimo::Rng rng(5);
  const SegmentationPlan plan(100, 5, 1000.0, 30.0);
  std::vector<SampleMatrix> s7, r7;
  for (int i = 0; i < 7; ++i) {
    s7.push_back(fixture::random_samples(rng, 3, 100));
    r7.push_back(fixture::random_samples(rng, 2, 100));
  }
  const FrameSet fs = assemble_frames(s7, r7, plan);
  EXPECT_EQ(fs.num_frames, 1);
  EXPECT_EQ(fs.bins.size(), 4u);  // 0, 10, 20, 30 Hz
  for (const auto& f : fs.frames) {
    EXPECT_EQ(f.X.rows(), 3);
    EXPECT_EQ(f.X.cols(), 5);
    EXPECT_EQ(f.Y.rows(), 2);
  }
  // Column j of frame 1 is symbol j's spectrum at that bin.
  const ComplexMatrix D2 = dft_symbol(s7[2]);
  EXPECT_EQ(fs.at(0, 1).X(1, 2), D2(1, fs.bins[1]));

  std::vector<SampleMatrix> r6(r7.begin(), r7.end() - 1);
  try {
    assemble_frames(s7, r6, plan);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Alignment);
  }
}

TEST(RunFrontend, PipelineShape) {
  fdmimo::Rng rng(9);
  for (Eigen::Index T : {4000, 4999, 6100}) {
    const auto src = Recording::unlabeled(fixture::random_samples(rng, 4, T), 1000.0);
    const auto rcv = Recording::unlabeled(fixture::random_samples(rng, 3, T), 1000.0);
    const SegmentationPlan plan(500, 3, 1000.0, 30.0);
    const FrameSet fs = run_frontend(src, rcv, plan, BandpassSpec{}, 2);
    EXPECT_EQ(fs.num_frames, (T / 500) / 3);
    EXPECT_EQ(fs.frames.size(), static_cast<std::size_t>(fs.num_frames) * fs.bins.size());
  }
}

TEST(RunFrontend, JobsDoNotChangeResults) {
  fdmimo::Rng rng(10);
  const auto src = Recording::unlabeled(fixture::random_samples(rng, 5, 9000), 1000.0);
  const auto rcv = Recording::unlabeled(fixture::random_samples(rng, 4, 9000), 1000.0);
  const SegmentationPlan plan(1000, 2, 1000.0, 30.0);
  const FrameSet a = run_frontend(src, rcv, plan, BandpassSpec{}, 1);
  const FrameSet b = run_frontend(src, rcv, plan, BandpassSpec{}, 4);
  ASSERT_EQ(a.frames.size(), b.frames.size());
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    ASSERT_TRUE(a.frames[i].X == b.frames[i].X);
    ASSERT_TRUE(a.frames[i].Y == b.frames[i].Y);
  }
}
