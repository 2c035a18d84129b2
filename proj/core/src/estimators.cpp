#include "fdmimo/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "fdmimo/error.hpp"
#include "fdmimo/parallel.hpp"

namespace fdmimo {

namespace {

constexpr double kLsRidge = 1e-10;

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) fail(ErrorKind::Numeric, std::string(what) + " has non-finite entries");
}

void check_frame(const FrequencyFrame& f) {
  if (f.X.cols() != f.Y.cols()) {
    fail(ErrorKind::Shape, "X and Y column counts differ");
  }
  if (f.X.rows() == 0 || f.Y.rows() == 0 || f.X.cols() == 0) {
    fail(ErrorKind::Shape, "empty frame");
  }
  require_finite(f.X, "X");
  require_finite(f.Y, "Y");
}

/// B A^{-1} for Hermitian positive definite A, via (A^{-1} B^H)^H.
ComplexMatrix right_solve(const Eigen::LLT<ComplexMatrix>& llt,
                          const ComplexMatrix& B) {
  return llt.solve(B.adjoint()).adjoint();
}

ChannelMatrix ls_impl(const FrequencyFrame& frame) {
  const ComplexMatrix gram = frame.X * frame.X.adjoint();
  const double trace = gram.diagonal().real().sum();
  if (!(trace > 0.0)) {
    fail(ErrorKind::DegenerateInput, "LS excitation X is all zero");
  }
  const auto P = frame.X.rows();
  ComplexMatrix A = gram;
  A.diagonal().array() += kLsRidge * trace / static_cast<double>(P);
  Eigen::LLT<ComplexMatrix> llt(A);
  if (llt.info() != Eigen::Success) {
    fail(ErrorKind::Numeric, "LS Gram factorization failed");
  }
  ChannelMatrix out;
  out.H = right_solve(llt, frame.Y * frame.X.adjoint());
  out.frame_index = frame.frame_index;
  out.bin = frame.bin;
  const double rc = llt.rcond();
  out.info.gram_condition = rc > 0 ? 1.0 / rc : INFINITY;
  return out;
}

}  // namespace

std::vector<double> ChannelTensor::frequencies_hz() const {
  if (!explicit_freqs_hz.empty()) return explicit_freqs_hz;
  std::vector<double> f;
  f.reserve(bins.size());
  for (auto b : bins) f.push_back(step.bin_hz(b));
  return f;
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::LS: return "ls";
    case Method::MMSE: return "mmse";
    case Method::STARE: return "stare";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "ls") return Method::LS;
  if (name == "mmse") return Method::MMSE;
  if (name == "stare") return Method::STARE;
  fail(ErrorKind::Config, "unknown estimator '" + std::string(name) + "'");
}

void StareConfig::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) fail(ErrorKind::Config, "rho must be > 0");
  if (!(mu >= 0.0) || !std::isfinite(mu)) fail(ErrorKind::Config, "mu must be >= 0");
  if (!(nu >= 0.0) || !std::isfinite(nu)) fail(ErrorKind::Config, "nu must be >= 0");
  if (max_iters < 1) fail(ErrorKind::Config, "max_iters must be >= 1");
  if (!(residual_tol >= 0.0)) fail(ErrorKind::Config, "residual_tol must be >= 0");
}

SpatialOperator::SpatialOperator(const ElectrodeGraph& graph, double mu,
                                 double rho)
    : size_(graph.node_count()), mu_(mu), rho_(rho), laplacian_(graph.laplacian()) {
  if (!(rho > 0.0)) fail(ErrorKind::Config, "rho must be > 0");
  if (!(mu >= 0.0)) fail(ErrorKind::Config, "mu must be >= 0");
  RealMatrix S = 4.0 * mu * (laplacian_.transpose() * laplacian_);
  S.diagonal().array() += rho;
  llt_.compute(S);
  if (llt_.info() != Eigen::Success) {
    fail(ErrorKind::Numeric, "spatial operator factorization failed");
  }
}

ComplexMatrix SpatialOperator::solve(const ComplexMatrix& rhs) const {
  if (rhs.rows() != size_) fail(ErrorKind::Shape, "spatial solve row mismatch");
  const RealMatrix re = llt_.solve(RealMatrix(rhs.real()));
  const RealMatrix im = llt_.solve(RealMatrix(rhs.imag()));
  ComplexMatrix out(rhs.rows(), rhs.cols());
  out.real() = re;
  out.imag() = im;
  return out;
}

ChannelMatrix estimate_ls(const FrequencyFrame& frame) {
  check_frame(frame);
  return ls_impl(frame);
}

ChannelMatrix estimate_mmse(const FrequencyFrame& frame, double noise_var) {
  check_frame(frame);
  if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) {
    fail(ErrorKind::Config, "noise variance must be finite and >= 0");
  }
  ComplexMatrix A = frame.X * frame.X.adjoint();
  A.diagonal().array() += noise_var;
  Eigen::LLT<ComplexMatrix> llt(A);
  const double rc = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
  if (rc <= Eigen::NumTraits<double>::epsilon()) {
    ChannelMatrix ls = ls_impl(frame);
    ls.info.ls_fallback = true;
    return ls;
  }
  ChannelMatrix out;
  out.H = right_solve(llt, frame.Y * frame.X.adjoint());
  out.frame_index = frame.frame_index;
  out.bin = frame.bin;
  out.info.gram_condition = 1.0 / rc;
  return out;
}

double estimate_noise_var(const FrameSet& frames) {
  std::vector<double> powers;
  powers.reserve(frames.frames.size());
  for (const auto& f : frames.frames) {
    if (f.X.squaredNorm() == 0.0) continue;
    const ChannelMatrix ls = estimate_ls(f);
    powers.push_back((f.Y - ls.H * f.X).squaredNorm() /
                     static_cast<double>(f.Y.size()));
  }
  if (powers.empty()) return 0.0;
  const auto mid = powers.begin() + static_cast<std::ptrdiff_t>(powers.size() / 2);
  std::nth_element(powers.begin(), mid, powers.end());
  if (powers.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(powers.begin(), mid);
  return 0.5 * (lo + hi);
}

double stare_objective(const FrequencyFrame& frame, const ComplexMatrix& H,
                       const ComplexMatrix& H_prev, const RealMatrix& laplacian,
                       double mu, double nu, GraphAxis axis) {
  const double fit = 0.5 * (frame.Y - H * frame.X).squaredNorm();
  const ComplexMatrix LH = axis == GraphAxis::Receivers
                               ? ComplexMatrix(laplacian.cast<cplx>() * H)
                               : ComplexMatrix(H * laplacian.cast<cplx>());
  return fit + 2.0 * mu * LH.squaredNorm() + nu * (H - H_prev).squaredNorm();
}

AdmmState stare_frame(const FrequencyFrame& frame, const ComplexMatrix& H_prev,
                      const SpatialOperator& spatial, const StareConfig& cfg) {
  cfg.validate();
  check_frame(frame);
  require_finite(H_prev, "H_prev");
  const auto N = frame.Y.rows();
  const auto P = frame.X.rows();
  if (H_prev.rows() != N || H_prev.cols() != P) {
    fail(ErrorKind::Shape, "H_prev must be N x P");
  }
  const auto graph_nodes = cfg.axis == GraphAxis::Receivers ? N : P;
  if (spatial.size() != graph_nodes) {
    fail(ErrorKind::Shape, "graph node count does not match the smoothed axis");
  }
  if (spatial.rho() != cfg.rho || spatial.mu() != cfg.mu) {
    fail(ErrorKind::Config, "spatial operator built for different mu/rho");
  }

  const double rho = cfg.rho;
  ComplexMatrix A = frame.X * frame.X.adjoint();
  A.diagonal().array() += 2.0 * cfg.nu + rho;
  Eigen::LLT<ComplexMatrix> h_solver(A);
  if (h_solver.info() != Eigen::Success) {
    fail(ErrorKind::Numeric, "H-update factorization failed");
  }
  const ComplexMatrix rhs_fixed = frame.Y * frame.X.adjoint() + 2.0 * cfg.nu * H_prev;

  auto spatial_solve = [&](const ComplexMatrix& rhs) -> ComplexMatrix {
    if (cfg.axis == GraphAxis::Receivers) return spatial.solve(rhs);
    return spatial.solve(rhs.transpose()).transpose();
  };

  AdmmState s;
  s.H = H_prev;
  s.G = H_prev;
  s.U = ComplexMatrix::Zero(N, P);
  const double stop = cfg.residual_tol * std::sqrt(static_cast<double>(N * P));

  for (int t = 1; t <= cfg.max_iters; ++t) {
    s.H = right_solve(h_solver, rhs_fixed + rho * (s.G + s.U));
    ComplexMatrix G_next = spatial_solve(rho * (s.H - s.U));
    s.dual_residual = rho * (G_next - s.G).norm();
    s.G = std::move(G_next);
    s.U += s.G - s.H;
    s.primal_residual = (s.G - s.H).norm();
    s.iterations = t;
    if (t == 1) s.first_primal_residual = s.primal_residual;
    if (!std::isfinite(s.primal_residual) || !std::isfinite(s.dual_residual)) {
      fail(ErrorKind::Numeric, "ADMM diverged to non-finite iterates");
    }
    if (cfg.residual_tol > 0.0 &&
        std::max(s.primal_residual, s.dual_residual) <= stop) {
      s.converged = true;
      break;
    }
  }
  return s;
}

AdmmState stare_frame(const FrequencyFrame& frame, const ComplexMatrix& H_prev,
                      const ElectrodeGraph& graph, const StareConfig& cfg) {
  cfg.validate();
  return stare_frame(frame, H_prev, SpatialOperator(graph, cfg.mu, cfg.rho), cfg);
}

namespace {

ChannelMatrix safe_baseline(const FrequencyFrame& f, Method m, double noise_var) {
  if (f.X.squaredNorm() == 0.0) {
    ChannelMatrix z;
    z.H = ComplexMatrix::Zero(f.Y.rows(), f.X.rows());
    z.frame_index = f.frame_index;
    z.bin = f.bin;
    z.info.degenerate = true;
    return z;
  }
  return m == Method::MMSE ? estimate_mmse(f, noise_var) : estimate_ls(f);
}

}  // namespace

SequenceResult estimate_sequence(const FrameSet& frames,
                                 const ElectrodeGraph* graph,
                                 const SequenceOptions& opts) {
  if (frames.frames.empty() || frames.bins.empty() || frames.num_frames < 1) {
    fail(ErrorKind::InvalidInput, "no frames to estimate");
  }
  if (frames.frames.size() !=
      static_cast<std::size_t>(frames.num_frames) * frames.bins.size()) {
    fail(ErrorKind::Shape, "frame set is not a full (k, bin) grid");
  }
  const auto N = frames.receivers;
  const auto P = frames.sources;

  SequenceResult out;
  out.tensor.receivers = N;
  out.tensor.sources = P;
  out.tensor.step = frames.step;
  out.tensor.bins = frames.bins;
  out.tensor.num_frames = frames.num_frames;
  out.tensor.H.resize(frames.frames.size());
  out.diagnostics.resize(frames.frames.size());

  std::optional<SpatialOperator> spatial;
  if (opts.method == Method::STARE) {
    opts.stare.validate();
    if (graph == nullptr) fail(ErrorKind::Config, "STARE requires an electrode graph");
    spatial.emplace(*graph, opts.stare.mu, opts.stare.rho);
  }
  if (opts.method == Method::MMSE) {
    out.noise_var = opts.noise_var ? *opts.noise_var : estimate_noise_var(frames);
  }

  const std::size_t nbins = frames.bins.size();
  parallel_for(nbins, opts.jobs, [&](std::size_t bi) {
    ComplexMatrix H_prev;
    for (Eigen::Index k0 = 0; k0 < frames.num_frames; ++k0) {
      const std::size_t idx = frames.index(k0, bi);
      const FrequencyFrame& f = frames.frames[idx];
      if (f.frame_index != k0 + 1 || f.bin != frames.bins[bi]) {
        fail(ErrorKind::Alignment, "frame set is not in (k, bin) order");
      }
      FrameDiagnostics d;
      d.frame_index = f.frame_index;
      d.bin = f.bin;
      d.freq_hz = frames.step.bin_hz(f.bin);

      if (opts.method != Method::STARE) {
        ChannelMatrix cm = safe_baseline(f, opts.method, out.noise_var);
        d.info = cm.info;
        d.objective = 0.5 * (f.Y - cm.H * f.X).squaredNorm();
        out.tensor.H[idx] = std::move(cm.H);
      } else {
        if (k0 == 0) {
          if (opts.anchor == AnchorMode::Zero) {
            H_prev = ComplexMatrix::Zero(N, P);
          } else {
            ChannelMatrix anchor = safe_baseline(f, Method::LS, 0.0);
            d.info = anchor.info;
            H_prev = std::move(anchor.H);
          }
        }
        AdmmState s = stare_frame(f, H_prev, *spatial, opts.stare);
        d.iterations = s.iterations;
        d.primal_residual = s.primal_residual;
        d.dual_residual = s.dual_residual;
        d.converged = s.converged;
        d.objective = stare_objective(f, s.H, H_prev, spatial->laplacian(),
                                      opts.stare.mu, opts.stare.nu, opts.stare.axis);
        H_prev = s.H;
        out.tensor.H[idx] = std::move(s.H);
      }
      out.diagnostics[idx] = d;
    }
  });
  return out;
}

}  // namespace fdmimo
