#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fdmimo/estimators.hpp"

namespace fdmimo {

/// Estimator provenance recorded next to a tensor.
struct TensorProvenance {
  std::string method;  // "ls", "mmse", "stare", "truth"
  std::optional<StareConfig> stare;
  std::optional<AnchorMode> anchor;
  std::optional<double> noise_var;
};

// `<stem>.json` metadata plus `<stem>.bin` of interleaved (re, im) float64
// little-endian, frame-major, bins ascending, each matrix row-major.
void write_channel_tensor(const ChannelTensor& tensor,
                          const TensorProvenance& provenance,
                          const std::filesystem::path& meta_path);

struct LoadedTensor {
  ChannelTensor tensor;
  TensorProvenance provenance;
};
LoadedTensor read_channel_tensor(const std::filesystem::path& meta_path);

/// Metadata document only, for callers that stage their own writes.
std::string channel_tensor_metadata(const ChannelTensor& tensor,
                                    const TensorProvenance& provenance);
std::string channel_tensor_payload(const ChannelTensor& tensor);

/// One JSON object per line, one line per (k, bin).
std::string format_diagnostics_jsonl(const std::vector<FrameDiagnostics>& diag,
                                     Method method);

}  // namespace fdmimo
