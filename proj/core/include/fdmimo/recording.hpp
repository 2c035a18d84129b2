#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fdmimo/types.hpp"

namespace fdmimo {

using Position3 = std::array<double, 3>;

/// Real-valued multichannel time series (channels x samples).
class Recording {
 public:
  Recording() = default;
  Recording(SampleMatrix samples, double sample_rate_hz,
            std::vector<std::string> channel_labels,
            std::vector<std::optional<Position3>> channel_positions = {});

  /// Labels default to "ch1", "ch2", ...
  static Recording unlabeled(SampleMatrix samples, double sample_rate_hz);

  const SampleMatrix& samples() const noexcept { return samples_; }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  const std::vector<std::string>& channel_labels() const noexcept {
    return labels_;
  }
  const std::vector<std::optional<Position3>>& channel_positions()
      const noexcept {
    return positions_;
  }

  Eigen::Index channel_count() const noexcept { return samples_.rows(); }
  Eigen::Index sample_count() const noexcept { return samples_.cols(); }
  bool empty() const noexcept { return samples_.size() == 0; }

  /// Same metadata, new samples (shape must match).
  Recording with_samples(SampleMatrix samples) const;

 private:
  SampleMatrix samples_;
  double sample_rate_hz_ = 0.0;
  std::vector<std::string> labels_;
  std::vector<std::optional<Position3>> positions_;
};

// On-disk format: `<stem>.json` metadata plus `<stem>.bin` holding
// channels x samples float64 little-endian values, channel-major.
// `meta_path` names the JSON file; the binary sits next to it.
void write_recording(const Recording& rec,
                     const std::filesystem::path& meta_path);
Recording read_recording(const std::filesystem::path& meta_path);

/// File bodies, for callers that stage their own writes.
std::string recording_metadata(const Recording& rec);
std::string recording_payload(const Recording& rec);

/// Rows are time steps, columns channels, first row holds labels.
Recording read_recording_csv(const std::filesystem::path& path,
                             double sample_rate_hz);

std::filesystem::path binary_path_for(const std::filesystem::path& meta_path);

}  // namespace fdmimo
