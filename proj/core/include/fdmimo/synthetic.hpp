#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "fdmimo/electrode_graph.hpp"
#include "fdmimo/estimators.hpp"
#include "fdmimo/frontend.hpp"
#include "fdmimo/recording.hpp"

namespace fdmimo {

struct SyntheticChannelSpec {
  Eigen::Index receivers = 8;  // N
  Eigen::Index sources = 16;   // P
  FrequencyStep step{1000.0, 1000};
  std::vector<Eigen::Index> bins;
  Eigen::Index frames = 1;              // K
  double spatial_corr_strength = 0.5;   // [0, 1]
  double temporal_drift_ar1 = 0.98;     // [0, 1)
  double freq_rolloff_hz = 30.0;        // > 0
  std::uint64_t seed = 1;

  void validate() const;
};

/// Ground-truth tensor: per bin an AR(1) chain over frames of graph-smoothed
/// complex Gaussian draws, scaled by exp(-f / rolloff).
ChannelTensor gen_channel(const SyntheticChannelSpec& spec,
                          const ElectrodeGraph& graph);

struct SyntheticDataset {
  ChannelTensor truth;
  FrameSet frames;
  std::vector<ComplexMatrix> noise;  // W per (k, bin), Y = H X + W
  double snr_db = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

/// X i.i.d. unit complex Gaussian (P x M); W white complex Gaussian scaled
/// so its per-entry power is exactly the per-entry power of HX divided by
/// 10^(snr_db/10). snr_db = +inf disables noise.
SyntheticDataset gen_frames(const ChannelTensor& channels, Eigen::Index columns,
                            double snr_db, std::uint64_t seed);

struct Tone {
  double freq_hz = 10.0;
  double amplitude = 1.0;
  /// N x P complex gain; empty means draw from the recipe seed.
  ComplexMatrix gain;
};

struct TimeDomainRecipe {
  double sample_rate_hz = 1000.0;
  Eigen::Index num_samples = 10000;
  Eigen::Index sources = 2;    // P
  Eigen::Index receivers = 2;  // N
  std::vector<Tone> tones;
  double source_noise_std = 0.0;
  double receiver_noise_std = 0.0;
  /// Sinusoidal gain drift: g(t) = G + amplitude * D * sin(2 pi t / period + phase).
  double drift_amplitude = 0.0;
  double drift_period_s = 60.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct TimeDomainDataset {
  Recording source;    // P channels
  Recording receiver;  // N channels
  std::vector<double> tone_freqs_hz;
  std::vector<ComplexMatrix> tone_gains;  // static part G per tone
  ComplexMatrix noise_gain;               // real-valued N x P for source noise

  /// One-frame tensor over the tone frequencies.
  ChannelTensor truth_tensor() const;
};

/// Sources are sums of tones plus white noise. Receivers mix each tone through
/// its own complex gain (applied to the analytic tone), route source noise
/// through `noise_gain`, and add receiver noise.
TimeDomainDataset gen_time_domain(const TimeDomainRecipe& recipe);

// Recipe documents in JSON syntax.
struct FrequencyDomainRecipe {
  SyntheticChannelSpec channel;
  Eigen::Index columns = 8;  // M
  double snr_db = 0.0;
  std::string graph_preset;  // empty: chain graph over receivers
};

struct Recipe {
  std::optional<TimeDomainRecipe> time_domain;
  std::optional<FrequencyDomainRecipe> frequency_domain;
};

Recipe parse_recipe(std::string_view json_text);

/// Path graph 1-2-...-n, used when a recipe names no graph.
ElectrodeGraph chain_graph(Eigen::Index n);

}  // namespace fdmimo
