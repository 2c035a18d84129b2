#pragma once

#include <optional>
#include <vector>

#include "fdmimo/butterworth.hpp"
#include "fdmimo/recording.hpp"
#include "fdmimo/types.hpp"

namespace fdmimo {

/// Frequency step held as the exact ratio fs / L.
struct FrequencyStep {
  double sample_rate_hz;
  Eigen::Index symbol_len;

  double hz() const noexcept {
    return sample_rate_hz / static_cast<double>(symbol_len);
  }
  /// Frequency of DFT bin b, rounded once.
  double bin_hz(Eigen::Index b) const noexcept {
    return static_cast<double>(b) * sample_rate_hz /
           static_cast<double>(symbol_len);
  }
  /// Exact in the ratio representation: returns sample_rate_hz.
  double times_symbol_len() const noexcept { return sample_rate_hz; }
};

/// Uniform symbol/frame layout plus the retained low-frequency bins.
class SegmentationPlan {
 public:
  /// Inclusive cap slack on the retained band edge.
  static constexpr double kBandEdgeSlackHz = 1e-12;

  SegmentationPlan(Eigen::Index symbol_len, Eigen::Index symbols_per_frame,
                   double sample_rate_hz, double max_freq_hz = 30.0);

  Eigen::Index symbol_len() const noexcept { return symbol_len_; }
  Eigen::Index symbols_per_frame() const noexcept { return symbols_per_frame_; }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  double max_freq_hz() const noexcept { return max_freq_hz_; }

  FrequencyStep step() const noexcept { return {sample_rate_hz_, symbol_len_}; }
  double delta_f_hz() const noexcept { return step().hz(); }

  /// Bins 0..floor(max_freq / delta_f), ascending.
  const std::vector<Eigen::Index>& retained_bins() const noexcept {
    return bins_;
  }

  Eigen::Index num_symbols(Eigen::Index total_samples) const noexcept {
    return total_samples / symbol_len_;
  }
  Eigen::Index num_frames(Eigen::Index total_samples) const noexcept {
    return num_symbols(total_samples) / symbols_per_frame_;
  }

 private:
  Eigen::Index symbol_len_;
  Eigen::Index symbols_per_frame_;
  double sample_rate_hz_;
  double max_freq_hz_;
  std::vector<Eigen::Index> bins_;
};

struct FrequencyFrame {
  Eigen::Index frame_index = 1;  // 1-based k
  Eigen::Index bin = 0;          // frequency = bin * delta_f
  ComplexMatrix X;               // P x M, source side
  ComplexMatrix Y;               // N x M, receiver side
};

/// All frames of one segmentation, ordered by (k, ascending bin).
struct FrameSet {
  FrequencyStep step{1.0, 1};
  std::vector<Eigen::Index> bins;
  Eigen::Index num_frames = 0;
  Eigen::Index sources = 0;    // P
  Eigen::Index receivers = 0;  // N
  Eigen::Index columns = 0;    // M
  std::vector<FrequencyFrame> frames;

  std::size_t index(Eigen::Index k0, std::size_t bin_pos) const noexcept {
    return static_cast<std::size_t>(k0) * bins.size() + bin_pos;
  }
  const FrequencyFrame& at(Eigen::Index k0, std::size_t bin_pos) const {
    return frames.at(index(k0, bin_pos));
  }
};

/// G = floor(T / L) contiguous blocks of L samples; the tail is dropped.
std::vector<SampleMatrix> segment(const Recording& rec,
                                  const SegmentationPlan& plan);

/// Unnormalized forward DFT of every row, rectangular window.
ComplexMatrix dft_symbol(const SampleMatrix& block);

/// Builds K = floor(G / M) frames over the plan's retained bins. Symbols past
/// K*M are discarded.
FrameSet assemble_frames(const std::vector<SampleMatrix>& src_symbols,
                         const std::vector<SampleMatrix>& rcv_symbols,
                         const SegmentationPlan& plan, unsigned jobs = 1);

/// Filter (optional), segment and transform a source/receiver pair.
FrameSet run_frontend(const Recording& source, const Recording& receiver,
                      const SegmentationPlan& plan,
                      const std::optional<BandpassSpec>& band,
                      unsigned jobs = 1);

}  // namespace fdmimo
