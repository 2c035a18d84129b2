#include "fdmimo/channel_io.hpp"

#include <json.hpp>

#include "fdmimo/error.hpp"
#include "fdmimo/io_util.hpp"

namespace fdmimo {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kLayout = "frame-major,bin-ascending,row-major,interleaved-complex";

std::string anchor_name(AnchorMode a) {
  return a == AnchorMode::Zero ? "zero" : "first-frame-ls";
}

}  // namespace

std::string channel_tensor_metadata(const ChannelTensor& t,
                                    const TensorProvenance& prov) {
  ordered_json meta;
  meta["version"] = 1;
  meta["N"] = t.receivers;
  meta["P"] = t.sources;
  meta["bins"] = t.frequencies_hz();
  if (t.explicit_freqs_hz.empty()) {
    meta["bin_indices"] = t.bins;
    meta["fs_hz"] = t.step.sample_rate_hz;
    meta["symbol_len"] = t.step.symbol_len;
  }
  meta["frames"] = t.num_frames;
  meta["method"] = prov.method;
  ordered_json config = ordered_json::object();
  if (prov.stare) {
    config["mu"] = prov.stare->mu;
    config["nu"] = prov.stare->nu;
    config["rho"] = prov.stare->rho;
    config["t_max"] = prov.stare->max_iters;
    config["tol"] = prov.stare->residual_tol;
    config["graph_axis"] =
        prov.stare->axis == GraphAxis::Receivers ? "receivers" : "sources";
    config["dual_form"] = "scaled";
  }
  if (prov.anchor) config["anchor"] = anchor_name(*prov.anchor);
  if (prov.noise_var) config["noise_var"] = *prov.noise_var;
  meta["config"] = std::move(config);
  meta["layout"] = kLayout;
  return meta.dump(2) + "\n";
}

std::string channel_tensor_payload(const ChannelTensor& t) {
  std::vector<double> flat;
  flat.reserve(t.H.size() * static_cast<std::size_t>(2 * t.receivers * t.sources));
  for (const auto& H : t.H) {
    if (H.rows() != t.receivers || H.cols() != t.sources) {
      fail(ErrorKind::Shape, "tensor entry is not N x P");
    }
    for (Eigen::Index r = 0; r < H.rows(); ++r) {
      for (Eigen::Index c = 0; c < H.cols(); ++c) {
        flat.push_back(H(r, c).real());
        flat.push_back(H(r, c).imag());
      }
    }
  }
  return io::pack_f64le(flat);
}

void write_channel_tensor(const ChannelTensor& t, const TensorProvenance& prov,
                          const fs::path& meta_path) {
  io::write_file_atomic(binary_path_for(meta_path), channel_tensor_payload(t));
  io::write_file_atomic(meta_path, channel_tensor_metadata(t, prov));
}

LoadedTensor read_channel_tensor(const fs::path& meta_path) {
  LoadedTensor out;
  auto& t = out.tensor;
  try {
    const json meta = json::parse(io::read_file(meta_path));
    if (meta.at("version").get<int>() != 1 || meta.at("layout") != kLayout) {
      fail(ErrorKind::Io, "unsupported channel tensor version or layout");
    }
    t.receivers = meta.at("N").get<Eigen::Index>();
    t.sources = meta.at("P").get<Eigen::Index>();
    t.num_frames = meta.at("frames").get<Eigen::Index>();
    const auto freqs = meta.at("bins").get<std::vector<double>>();
    if (meta.contains("bin_indices")) {
      t.bins = meta["bin_indices"].get<std::vector<Eigen::Index>>();
      t.step = {meta.at("fs_hz").get<double>(), meta.at("symbol_len").get<Eigen::Index>()};
    } else {
      t.explicit_freqs_hz = freqs;
      t.bins.resize(freqs.size());
      for (std::size_t i = 0; i < freqs.size(); ++i) t.bins[i] = static_cast<Eigen::Index>(i);
    }
    out.provenance.method = meta.at("method").get<std::string>();
    const auto& cfg = meta.at("config");
    if (cfg.contains("rho")) {
      StareConfig s;
      s.mu = cfg.at("mu").get<double>();
      s.nu = cfg.at("nu").get<double>();
      s.rho = cfg.at("rho").get<double>();
      s.max_iters = cfg.at("t_max").get<int>();
      s.residual_tol = cfg.at("tol").get<double>();
      s.axis = cfg.value("graph_axis", "receivers") == "sources" ? GraphAxis::Sources
                                                                 : GraphAxis::Receivers;
      out.provenance.stare = s;
    }
    if (cfg.contains("anchor")) {
      out.provenance.anchor =
          cfg["anchor"] == "zero" ? AnchorMode::Zero : AnchorMode::FirstFrameLs;
    }
    if (cfg.contains("noise_var")) out.provenance.noise_var = cfg["noise_var"].get<double>();
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, "malformed channel tensor metadata " + meta_path.string() +
                            ": " + e.what());
  }

  const auto values = io::unpack_f64le(io::read_file(binary_path_for(meta_path)));
  const auto per = static_cast<std::size_t>(2 * t.receivers * t.sources);
  const std::size_t count = static_cast<std::size_t>(t.num_frames) * t.bins.size();
  if (values.size() != per * count) {
    fail(ErrorKind::Io, "channel tensor payload size mismatch");
  }
  t.H.resize(count);
  std::size_t pos = 0;
  for (auto& H : t.H) {
    H.resize(t.receivers, t.sources);
    for (Eigen::Index r = 0; r < H.rows(); ++r) {
      for (Eigen::Index c = 0; c < H.cols(); ++c) {
        H(r, c) = cplx(values[pos], values[pos + 1]);
        pos += 2;
      }
    }
  }
  return out;
}

std::string format_diagnostics_jsonl(const std::vector<FrameDiagnostics>& diag,
                                     Method method) {
  std::string out;
  for (const auto& d : diag) {
    ordered_json j;
    j["k"] = d.frame_index;
    j["bin"] = d.bin;
    j["freq_hz"] = d.freq_hz;
    j["method"] = std::string(to_string(method));
    j["iterations"] = d.iterations;
    j["primal_residual"] = d.primal_residual;
    j["dual_residual"] = d.dual_residual;
    j["objective"] = d.objective;
    j["converged"] = d.converged;
    j["gram_condition"] = d.info.gram_condition;
    j["ls_fallback"] = d.info.ls_fallback;
    j["degenerate"] = d.info.degenerate;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace fdmimo
