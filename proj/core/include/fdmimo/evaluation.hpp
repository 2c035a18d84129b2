#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdmimo/butterworth.hpp"
#include "fdmimo/estimators.hpp"
#include "fdmimo/frontend.hpp"
#include "fdmimo/recording.hpp"
#include "fdmimo/synthetic.hpp"

namespace fdmimo {

/// ||Y_true - H_hat X||_F^2, unnormalized.
double mse_frequency(const ComplexMatrix& Y_true, const ComplexMatrix& H_hat,
                     const ComplexMatrix& X);

/// Arithmetic mean; throws InvalidInput when empty.
double aggregate_mse_avg(std::span<const double> values);

enum class EvalMode {
  InSample,  // reconstruct the frames used for fitting
  HeldOut,   // H from frame k reconstructs frame k+1
};

struct MseEntry {
  Eigen::Index frame_index = 1;
  Eigen::Index bin = 0;
  double freq_hz = 0.0;
  double raw_mse = 0.0;
  double nmse = 0.0;
  std::optional<double> channel_nmse;  // ||H - H_true||^2 / ||H_true||^2
};

struct MseReport {
  EvalMode mode = EvalMode::InSample;
  std::vector<MseEntry> entries;
  double mse_avg = 0.0;
  double nmse_avg = 0.0;
  std::optional<double> channel_nmse_avg;
};

MseReport evaluate(const FrameSet& frames, const ChannelTensor& estimate,
                   EvalMode mode = EvalMode::InSample,
                   const ChannelTensor* truth = nullptr);

struct RegimeBounds {
  Eigen::Index short_below = 13000;  // L < short_below
  Eigen::Index long_above = 49000;   // L > long_above
};

struct SweepConfig {
  std::vector<Eigen::Index> symbol_lens;
  Eigen::Index symbols_per_frame = 4;
  double max_freq_hz = 30.0;
  std::optional<BandpassSpec> band = BandpassSpec{};
  std::vector<Method> methods{Method::LS, Method::MMSE, Method::STARE};
  SequenceOptions estimator;  // method field ignored
  EvalMode mode = EvalMode::InSample;
  RegimeBounds regimes;
  unsigned jobs = 1;
  bool record_timing = false;  // off keeps outputs byte-reproducible
};

struct SweepRow {
  Method method = Method::LS;
  Eigen::Index symbol_len = 0;
  double delta_f_hz = 0.0;
  double mse_avg = 0.0;
  double nmse_avg = 0.0;
  std::optional<double> channel_nmse;
  double runtime_ms = 0.0;
  std::string warning;  // non-empty marks a skipped row
  bool skipped() const noexcept { return !warning.empty(); }
};

struct RegimeMeans {
  Method method = Method::LS;
  std::optional<double> short_mean, mid_mean, long_mean;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (L, method)
  std::vector<RegimeMeans> regimes;
  RegimeBounds bounds;
};

/// Default grid: 13 log-spaced lengths from 1e3 to 1e5, rounded to integers.
std::vector<Eigen::Index> default_symbol_grid();

/// Re-plans, re-runs frontend and estimation per L. Lengths above the
/// recording length produce a warning row instead of an error.
SweepResult sweep_symbol_length(const Recording& source, const Recording& receiver,
                                const SweepConfig& cfg, const ElectrodeGraph* graph);

SweepResult sweep_symbol_length(const TimeDomainRecipe& recipe,
                                const SweepConfig& cfg, const ElectrodeGraph* graph);

struct CompareRow {
  Method method = Method::LS;
  double grand_mean_mse = 0.0;
  std::optional<double> pct_reduction_vs_ls;
  std::optional<double> pct_reduction_vs_mmse;
};

struct CompareTable {
  std::vector<CompareRow> rows;
};

/// (baseline - value) / baseline * 100.
double percent_reduction(double baseline, double value);

CompareTable compare_from_means(const std::vector<std::pair<Method, double>>& means);

/// Grand mean over L of every estimator's non-skipped rows.
CompareTable compare_estimators(const SweepResult& sweep);

// Plot-ready tables.
std::string sweep_csv(const SweepResult& s);
std::string sweep_json(const SweepResult& s);
std::string compare_csv(const CompareTable& t);
std::string compare_json(const CompareTable& t);
std::string mse_report_csv(const MseReport& r);
std::string mse_report_json(const MseReport& r);

}  // namespace fdmimo
