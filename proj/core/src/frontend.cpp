#include "fdmimo/frontend.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

#include "fdmimo/error.hpp"
#include "fdmimo/parallel.hpp"

namespace fdmimo {

SegmentationPlan::SegmentationPlan(Eigen::Index symbol_len,
                                   Eigen::Index symbols_per_frame,
                                   double sample_rate_hz, double max_freq_hz)
    : symbol_len_(symbol_len),
      symbols_per_frame_(symbols_per_frame),
      sample_rate_hz_(sample_rate_hz),
      max_freq_hz_(max_freq_hz) {
  if (symbol_len_ < 1) fail(ErrorKind::InvalidSpec, "symbol length must be >= 1");
  if (symbols_per_frame_ < 1) {
    fail(ErrorKind::InvalidSpec, "symbols per frame must be >= 1");
  }
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    fail(ErrorKind::InvalidSpec, "sample rate must be positive");
  }
  if (!(max_freq_hz_ >= 0.0) || max_freq_hz_ > sample_rate_hz_ / 2.0) {
    fail(ErrorKind::InvalidSpec, "max frequency must lie in [0, fs/2]");
  }
  // b * fs / L <= max + slack, evaluated without forming delta_f.
  const double limit =
      (max_freq_hz_ + kBandEdgeSlackHz) * static_cast<double>(symbol_len_);
  for (Eigen::Index b = 0; b < symbol_len_; ++b) {
    if (static_cast<double>(b) * sample_rate_hz_ > limit) break;
    bins_.push_back(b);
  }
}

std::vector<SampleMatrix> segment(const Recording& rec,
                                  const SegmentationPlan& plan) {
  const Eigen::Index L = plan.symbol_len();
  if (rec.sample_count() < L) {
    fail(ErrorKind::InsufficientData,
         "recording has " + std::to_string(rec.sample_count()) +
             " samples, fewer than one symbol of " + std::to_string(L));
  }
  const Eigen::Index G = plan.num_symbols(rec.sample_count());
  std::vector<SampleMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(G));
  for (Eigen::Index g = 0; g < G; ++g) {
    blocks.emplace_back(rec.samples().middleCols(g * L, L));
  }
  return blocks;
}

ComplexMatrix dft_symbol(const SampleMatrix& block) {
  const Eigen::Index L = block.cols();
  if (L < 1) fail(ErrorKind::Shape, "DFT block has no samples");
  ComplexMatrix out(block.rows(), L);
  Eigen::FFT<double> fft;
  std::vector<double> in(static_cast<std::size_t>(L));
  std::vector<cplx> spec;
  for (Eigen::Index c = 0; c < block.rows(); ++c) {
    for (Eigen::Index t = 0; t < L; ++t) in[static_cast<std::size_t>(t)] = block(c, t);
    fft.fwd(spec, in);
    for (Eigen::Index b = 0; b < L; ++b) out(c, b) = spec[static_cast<std::size_t>(b)];
  }
  return out;
}

namespace {

/// Retained-bin spectra of one symbol: rows = channels, cols = bins.
ComplexMatrix retained_spectrum(const SampleMatrix& block,
                                const std::vector<Eigen::Index>& bins) {
  const ComplexMatrix full = dft_symbol(block);
  ComplexMatrix out(block.rows(), static_cast<Eigen::Index>(bins.size()));
  for (std::size_t i = 0; i < bins.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = full.col(bins[i]);
  }
  return out;
}

}  // namespace

FrameSet assemble_frames(const std::vector<SampleMatrix>& src_symbols,
                         const std::vector<SampleMatrix>& rcv_symbols,
                         const SegmentationPlan& plan, unsigned jobs) {
  if (src_symbols.size() != rcv_symbols.size()) {
    fail(ErrorKind::Alignment, "source and receiver symbol counts differ (" +
                                   std::to_string(src_symbols.size()) + " vs " +
                                   std::to_string(rcv_symbols.size()) + ")");
  }
  const auto M = plan.symbols_per_frame();
  const auto G = static_cast<Eigen::Index>(src_symbols.size());
  if (G < M) {
    fail(ErrorKind::InsufficientData,
         "fewer symbols than one frame (" + std::to_string(G) + " < " +
             std::to_string(M) + ")");
  }
  const Eigen::Index K = G / M;
  const Eigen::Index used = K * M;
  const Eigen::Index L = plan.symbol_len();
  const Eigen::Index P = src_symbols.front().rows();
  const Eigen::Index N = rcv_symbols.front().rows();
  for (Eigen::Index g = 0; g < used; ++g) {
    const auto& s = src_symbols[static_cast<std::size_t>(g)];
    const auto& r = rcv_symbols[static_cast<std::size_t>(g)];
    if (s.cols() != L || r.cols() != L || s.rows() != P || r.rows() != N) {
      fail(ErrorKind::Shape, "symbol " + std::to_string(g + 1) +
                                 " does not match the plan's shape");
    }
  }

  const auto& bins = plan.retained_bins();
  std::vector<ComplexMatrix> src_spec(static_cast<std::size_t>(used));
  std::vector<ComplexMatrix> rcv_spec(static_cast<std::size_t>(used));
  parallel_for(static_cast<std::size_t>(used), jobs, [&](std::size_t g) {
    src_spec[g] = retained_spectrum(src_symbols[g], bins);
    rcv_spec[g] = retained_spectrum(rcv_symbols[g], bins);
  });

  FrameSet out;
  out.step = plan.step();
  out.bins = bins;
  out.num_frames = K;
  out.sources = P;
  out.receivers = N;
  out.columns = M;
  out.frames.reserve(static_cast<std::size_t>(K) * bins.size());
  for (Eigen::Index k = 0; k < K; ++k) {
    for (std::size_t bi = 0; bi < bins.size(); ++bi) {
      FrequencyFrame f;
      f.frame_index = k + 1;
      f.bin = bins[bi];
      f.X.resize(P, M);
      f.Y.resize(N, M);
      for (Eigen::Index j = 0; j < M; ++j) {
        const auto g = static_cast<std::size_t>(k * M + j);
        f.X.col(j) = src_spec[g].col(static_cast<Eigen::Index>(bi));
        f.Y.col(j) = rcv_spec[g].col(static_cast<Eigen::Index>(bi));
      }
      out.frames.push_back(std::move(f));
    }
  }
  return out;
}

FrameSet run_frontend(const Recording& source, const Recording& receiver,
                      const SegmentationPlan& plan,
                      const std::optional<BandpassSpec>& band, unsigned jobs) {
  if (source.sample_rate_hz() != receiver.sample_rate_hz() ||
      source.sample_rate_hz() != plan.sample_rate_hz()) {
    fail(ErrorKind::Alignment, "source, receiver and plan sample rates differ");
  }
  if (source.sample_count() != receiver.sample_count()) {
    fail(ErrorKind::Alignment, "source and receiver lengths differ");
  }
  if (band) {
    return assemble_frames(segment(bandpass_filter(source, *band, jobs), plan),
                           segment(bandpass_filter(receiver, *band, jobs), plan),
                           plan, jobs);
  }
  return assemble_frames(segment(source, plan), segment(receiver, plan), plan,
                         jobs);
}

}  // namespace fdmimo
