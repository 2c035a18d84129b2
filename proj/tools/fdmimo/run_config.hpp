#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <fdmimo/fdmimo.hpp>

namespace fdmimo::cli {

/// Seed used when neither --seed nor the recipe supplies one.
inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct RunConfig {
  // Inputs: a recording pair or a recipe, never both.
  std::optional<std::filesystem::path> src, rcv, recipe;
  std::optional<double> csv_fs_hz;  // sample rate for CSV recordings

  // Segmentation and filtering.
  Eigen::Index symbol_len = 1000;
  Eigen::Index frame_symbols = 8;
  double max_freq = 30.0;
  std::string band = "0.3,400";  // "lo,hi" or "none"
  int filter_order = 4;
  bool zero_phase = true;

  // Receiver graph.
  std::string graph_preset;
  std::optional<std::filesystem::path> edges, positions;
  std::optional<double> threshold;
  GraphAxis graph_axis = GraphAxis::Receivers;
  std::optional<Eigen::Index> graph_nodes;  // node count for --edges

  // Estimation.
  std::string estimator = "stare";  // ls | mmse | stare | all
  StareConfig stare;
  AnchorMode anchor = AnchorMode::FirstFrameLs;
  std::optional<double> noise_var;
  std::optional<double> snr_db;
  EvalMode eval_mode = EvalMode::InSample;

  // Sweep.
  std::vector<Eigen::Index> grid;
  RegimeBounds regimes;
  bool record_timing = false;

  std::filesystem::path out = "fdmimo_out";
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string format = "csv";  // csv (+ JSON mirror) | json

  std::vector<Method> methods() const;
  std::optional<BandpassSpec> bandpass() const;
  bool write_csv() const { return format == "csv"; }

  /// Exactly one input source, referenced files exist, values in range.
  void validate(bool inputs_required = true) const;
};

/// Applies a JSON config document; keys mirror the long flag names with
/// dashes replaced by underscores.
void apply_config_json(RunConfig& cfg, const std::string& json_text);

std::vector<Eigen::Index> parse_index_list(const std::string& text);

/// Echo of the resolved configuration, stable across runs.
std::string config_json(const RunConfig& cfg);

}  // namespace fdmimo::cli
