#pragma once

#include <span>
#include <vector>

#include "fdmimo/recording.hpp"
#include "fdmimo/types.hpp"

namespace fdmimo {

struct BandpassSpec {
  double low_cut_hz = 0.3;
  double high_cut_hz = 400.0;
  int order = 4;
  bool zero_phase = true;

  /// Throws InvalidSpec unless 0 < low < high < fs/2 and order >= 1.
  void validate(double sample_rate_hz) const;
};

/// One second-order section, a0 normalized to 1.
struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0;
  double a1 = 0, a2 = 0;
};

/// Digital Butterworth bandpass as a cascade of biquads. An order-n design
/// has 2n poles (n sections).
class ButterworthBandpass {
 public:
  ButterworthBandpass(const BandpassSpec& spec, double sample_rate_hz);

  const std::vector<Biquad>& sections() const noexcept { return sections_; }
  double sample_rate_hz() const noexcept { return fs_; }

  /// Complex response of a single causal pass at `freq_hz`.
  cplx response(double freq_hz) const;

  /// Single causal pass, zero initial state. In-place safe.
  void filter(std::span<const double> in, std::span<double> out) const;

  /// Forward pass then time-reversed pass; zero phase, squared magnitude.
  void filtfilt(std::span<const double> in, std::span<double> out) const;

 private:
  std::vector<Biquad> sections_;
  double fs_;
};

/// Filters each channel; output has identical shape and metadata.
Recording bandpass_filter(const Recording& rec, const BandpassSpec& spec,
                          unsigned jobs = 1);

}  // namespace fdmimo
