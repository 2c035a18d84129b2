#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdmimo/electrode_graph.hpp"
#include "fdmimo/frontend.hpp"
#include "fdmimo/types.hpp"

namespace fdmimo {

enum class Method { LS, MMSE, STARE };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view name);

/// Per-estimate metadata.
struct EstimateInfo {
  double gram_condition = 1.0;  // 1-norm condition estimate of the solved Gram
  bool ls_fallback = false;     // MMSE with a singular system fell back to LS
  bool degenerate = false;      // all-zero excitation, H set to zero
};

struct ChannelMatrix {
  ComplexMatrix H;  // N x P
  Eigen::Index frame_index = 1;
  Eigen::Index bin = 0;
  EstimateInfo info;
};

/// Per-frame stack of N x P matrices over the retained bins, stored in
/// (k, ascending bin) order.
struct ChannelTensor {
  Eigen::Index receivers = 0;  // N
  Eigen::Index sources = 0;    // P
  FrequencyStep step{1.0, 1};
  std::vector<Eigen::Index> bins;
  Eigen::Index num_frames = 0;
  std::vector<ComplexMatrix> H;
  /// Overrides bin * delta_f when the frequencies are not DFT bins (for
  /// example per-tone ground truth).
  std::vector<double> explicit_freqs_hz;

  std::vector<double> frequencies_hz() const;

  std::size_t index(Eigen::Index k0, std::size_t bin_pos) const noexcept {
    return static_cast<std::size_t>(k0) * bins.size() + bin_pos;
  }
  const ComplexMatrix& at(Eigen::Index k0, std::size_t bin_pos) const {
    return H.at(index(k0, bin_pos));
  }
  ComplexMatrix& at(Eigen::Index k0, std::size_t bin_pos) {
    return H.at(index(k0, bin_pos));
  }
};

/// Which side of H the electrode graph smooths over.
enum class GraphAxis { Receivers, Sources };

struct StareConfig {
  double mu = 0.1;    // spatial weight
  double nu = 0.1;    // temporal weight
  double rho = 1.0;   // ADMM penalty
  int max_iters = 50;
  double residual_tol = 1e-6;  // 0 disables early stopping
  GraphAxis axis = GraphAxis::Receivers;

  void validate() const;
};

/// Anchor used as H_prev for the first frame of every bin chain.
enum class AnchorMode { FirstFrameLs, Zero };

struct AdmmState {
  ComplexMatrix H;
  ComplexMatrix G;  // auxiliary copy carrying the spatial term
  ComplexMatrix U;  // scaled dual
  int iterations = 0;
  double primal_residual = 0.0;        // ||G - H||_F
  double dual_residual = 0.0;          // rho ||G_t+1 - G_t||_F
  double first_primal_residual = 0.0;  // after iteration 1
  bool converged = false;
};

/// Cholesky factor of (4 mu L^T L + rho I), frequency independent, so one
/// instance serves every bin and frame of a run. Read-only after build.
class SpatialOperator {
 public:
  SpatialOperator(const ElectrodeGraph& graph, double mu, double rho);

  Eigen::Index size() const noexcept { return size_; }
  double mu() const noexcept { return mu_; }
  double rho() const noexcept { return rho_; }
  const RealMatrix& laplacian() const noexcept { return laplacian_; }

  /// Solves (4 mu L^T L + rho I) Z = rhs column-wise.
  ComplexMatrix solve(const ComplexMatrix& rhs) const;

 private:
  Eigen::Index size_;
  double mu_, rho_;
  RealMatrix laplacian_;
  Eigen::LLT<RealMatrix> llt_;
};

/// H = Y X^H (X X^H + eps tr(X X^H)/P I)^{-1} with eps = 1e-10.
ChannelMatrix estimate_ls(const FrequencyFrame& frame);

/// H = Y X^H (X X^H + noise_var I)^{-1}. A singular system at noise_var = 0
/// falls back to the LS ridge path and sets info.ls_fallback.
ChannelMatrix estimate_mmse(const FrequencyFrame& frame, double noise_var);

/// Median over frames of the per-entry residual power of an LS fit.
double estimate_noise_var(const FrameSet& frames);

/// 0.5||Y - HX||^2 + 2 mu ||L H||^2 + nu ||H - H_prev||^2, with L applied on
/// the configured axis.
double stare_objective(const FrequencyFrame& frame, const ComplexMatrix& H,
                       const ComplexMatrix& H_prev, const RealMatrix& laplacian,
                       double mu, double nu, GraphAxis axis);

/// One ADMM solve started from H = G = H_prev, U = 0.
AdmmState stare_frame(const FrequencyFrame& frame, const ComplexMatrix& H_prev,
                      const SpatialOperator& spatial, const StareConfig& cfg);

AdmmState stare_frame(const FrequencyFrame& frame, const ComplexMatrix& H_prev,
                      const ElectrodeGraph& graph, const StareConfig& cfg);

/// One record per (k, bin).
struct FrameDiagnostics {
  Eigen::Index frame_index = 1;
  Eigen::Index bin = 0;
  double freq_hz = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = 0.0;
  bool converged = true;
  EstimateInfo info;
};

struct SequenceOptions {
  Method method = Method::LS;
  StareConfig stare;
  AnchorMode anchor = AnchorMode::FirstFrameLs;
  std::optional<double> noise_var;  // MMSE; estimated from the data if unset
  unsigned jobs = 1;
};

struct SequenceResult {
  ChannelTensor tensor;
  std::vector<FrameDiagnostics> diagnostics;  // (k, bin) order
  double noise_var = 0.0;                     // MMSE only
};

/// Estimates every (k, bin). STARE chains frames within each bin; bins are
/// independent and run in parallel without affecting results. `graph` is
/// required for STARE only.
SequenceResult estimate_sequence(const FrameSet& frames,
                                 const ElectrodeGraph* graph,
                                 const SequenceOptions& opts);

}  // namespace fdmimo
