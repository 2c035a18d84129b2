#include "fdmimo/run_config.hpp"

#include <sstream>

#include <json.hpp>

namespace fdmimo::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::vector<Method> RunConfig::methods() const {
  if (estimator == "all") return {Method::LS, Method::MMSE, Method::STARE};
  return {parse_method(estimator)};
}

std::optional<BandpassSpec> RunConfig::bandpass() const {
  if (band == "none") return std::nullopt;
  const auto comma = band.find(',');
  BandpassSpec spec;
  try {
    if (comma == std::string::npos) throw std::invalid_argument(band);
    spec.low_cut_hz = std::stod(band.substr(0, comma));
    spec.high_cut_hz = std::stod(band.substr(comma + 1));
  } catch (const std::exception&) {
    fail(ErrorKind::Config, "--band expects 'lo,hi' or 'none', got '" + band + "'");
  }
  spec.order = filter_order;
  spec.zero_phase = zero_phase;
  return spec;
}

std::vector<Eigen::Index> parse_index_list(const std::string& text) {
  std::vector<Eigen::Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(static_cast<Eigen::Index>(v));
    } catch (const std::exception&) {
      fail(ErrorKind::Config, "expected a comma-separated list of positive integers, got '" +
                                  text + "'");
    }
  }
  return out;
}

void RunConfig::validate(bool inputs_required) const {
  const bool pair = src.has_value() || rcv.has_value();
  if (pair && recipe) fail(ErrorKind::Config, "give either --src/--rcv or --recipe, not both");
  if (pair && !(src && rcv)) fail(ErrorKind::Config, "--src and --rcv must be given together");
  if (inputs_required && !pair && !recipe) {
    fail(ErrorKind::Config, "no input: give --src and --rcv, or --recipe");
  }
  for (const auto* p : {&src, &rcv, &recipe, &edges, &positions}) {
    if (*p && !fs::exists(**p)) fail(ErrorKind::Io, "input file not found: " + (*p)->string());
  }
  if (symbol_len < 1) fail(ErrorKind::Config, "--symbol-len must be >= 1");
  if (frame_symbols < 1) fail(ErrorKind::Config, "--frame-symbols must be >= 1");
  if (!(max_freq >= 0)) fail(ErrorKind::Config, "--max-freq must be >= 0");
  if (filter_order < 1) fail(ErrorKind::Config, "--filter-order must be >= 1");
  if (format != "csv" && format != "json") fail(ErrorKind::Config, "--format must be csv or json");
  if (jobs < 1) fail(ErrorKind::Config, "--jobs must be >= 1");
  if (positions && !threshold) fail(ErrorKind::Config, "--positions requires --threshold");
  const int graph_sources = (graph_preset.empty() ? 0 : 1) + (edges ? 1 : 0) + (positions ? 1 : 0);
  if (graph_sources > 1) {
    fail(ErrorKind::Config, "choose one of --graph-preset, --edges, --positions");
  }
  if (noise_var && !(*noise_var >= 0)) fail(ErrorKind::Config, "--noise-var must be >= 0");
  if (regimes.short_below > regimes.long_above) {
    fail(ErrorKind::Config, "--regimes must be ascending");
  }
  (void)methods();
  (void)bandpass();
  stare.validate();
}

namespace {

template <typename T>
void take(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

template <typename T>
void take_opt(const json& j, const char* key, std::optional<T>& dst) {
  if (j.contains(key) && !j.at(key).is_null()) dst = j.at(key).get<T>();
}

std::vector<Eigen::Index> index_list(const json& v) {
  if (v.is_string()) return parse_index_list(v.get<std::string>());
  return v.get<std::vector<Eigen::Index>>();
}

}  // namespace

void apply_config_json(RunConfig& cfg, const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) fail(ErrorKind::Config, "config file must hold a JSON object");
    std::optional<std::string> s;
    take_opt(j, "src", s); if (s) cfg.src = *s; s.reset();
    take_opt(j, "rcv", s); if (s) cfg.rcv = *s; s.reset();
    take_opt(j, "recipe", s); if (s) cfg.recipe = *s; s.reset();
    take_opt(j, "edges", s); if (s) cfg.edges = *s; s.reset();
    take_opt(j, "positions", s); if (s) cfg.positions = *s; s.reset();
    take_opt(j, "out", s); if (s) cfg.out = *s; s.reset();
    take_opt(j, "fs", cfg.csv_fs_hz);
    take(j, "symbol_len", cfg.symbol_len);
    take(j, "frame_symbols", cfg.frame_symbols);
    take(j, "max_freq", cfg.max_freq);
    if (j.contains("band")) {
      const auto& b = j["band"];
      cfg.band = b.is_array() ? std::to_string(b.at(0).get<double>()) + "," +
                                    std::to_string(b.at(1).get<double>())
                              : b.get<std::string>();
    }
    take(j, "filter_order", cfg.filter_order);
    if (j.contains("causal")) cfg.zero_phase = !j["causal"].get<bool>();
    take(j, "graph_preset", cfg.graph_preset);
    take_opt(j, "threshold", cfg.threshold);
    take_opt(j, "nodes", cfg.graph_nodes);
    if (j.contains("graph_axis")) {
      cfg.graph_axis = j["graph_axis"] == "sources" ? GraphAxis::Sources : GraphAxis::Receivers;
    }
    take(j, "estimator", cfg.estimator);
    take(j, "mu", cfg.stare.mu);
    take(j, "nu", cfg.stare.nu);
    take(j, "rho", cfg.stare.rho);
    take(j, "iters", cfg.stare.max_iters);
    take(j, "tol", cfg.stare.residual_tol);
    if (j.contains("anchor")) {
      cfg.anchor = j["anchor"] == "zero" ? AnchorMode::Zero : AnchorMode::FirstFrameLs;
    }
    take_opt(j, "noise_var", cfg.noise_var);
    take_opt(j, "snr_db", cfg.snr_db);
    if (j.contains("eval_mode")) {
      cfg.eval_mode = j["eval_mode"] == "held-out" ? EvalMode::HeldOut : EvalMode::InSample;
    }
    if (j.contains("grid")) cfg.grid = index_list(j["grid"]);
    if (j.contains("regimes")) {
      const auto r = index_list(j["regimes"]);
      if (r.size() != 2) fail(ErrorKind::Config, "regimes needs two boundaries");
      cfg.regimes = {r[0], r[1]};
    }
    take(j, "record_timing", cfg.record_timing);
    take_opt(j, "seed", cfg.seed);
    take(j, "jobs", cfg.jobs);
    take(j, "format", cfg.format);
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("bad config file: ") + e.what());
  }
}

std::string config_json(const RunConfig& cfg) {
  ordered_json j;
  auto path = [](const std::optional<fs::path>& p) -> ordered_json {
    return p ? ordered_json(p->generic_string()) : ordered_json(nullptr);
  };
  j["src"] = path(cfg.src);
  j["rcv"] = path(cfg.rcv);
  j["recipe"] = path(cfg.recipe);
  j["symbol_len"] = cfg.symbol_len;
  j["frame_symbols"] = cfg.frame_symbols;
  j["max_freq"] = cfg.max_freq;
  j["band"] = cfg.band;
  j["filter_order"] = cfg.filter_order;
  j["causal"] = !cfg.zero_phase;
  j["graph_preset"] = cfg.graph_preset;
  j["edges"] = path(cfg.edges);
  j["positions"] = path(cfg.positions);
  j["threshold"] = cfg.threshold ? ordered_json(*cfg.threshold) : ordered_json(nullptr);
  j["graph_axis"] = cfg.graph_axis == GraphAxis::Sources ? "sources" : "receivers";
  j["estimator"] = cfg.estimator;
  j["mu"] = cfg.stare.mu;
  j["nu"] = cfg.stare.nu;
  j["rho"] = cfg.stare.rho;
  j["iters"] = cfg.stare.max_iters;
  j["tol"] = cfg.stare.residual_tol;
  j["anchor"] = cfg.anchor == AnchorMode::Zero ? "zero" : "ls";
  j["noise_var"] = cfg.noise_var ? ordered_json(*cfg.noise_var) : ordered_json(nullptr);
  j["snr_db"] = cfg.snr_db ? ordered_json(*cfg.snr_db) : ordered_json(nullptr);
  j["eval_mode"] = cfg.eval_mode == EvalMode::HeldOut ? "held-out" : "in-sample";
  j["grid"] = cfg.grid;
  j["regimes"] = {cfg.regimes.short_below, cfg.regimes.long_above};
  j["seed"] = cfg.seed ? ordered_json(*cfg.seed) : ordered_json(nullptr);
  j["format"] = cfg.format;
  return j.dump(2) + "\n";
}

}  // namespace fdmimo::cli
