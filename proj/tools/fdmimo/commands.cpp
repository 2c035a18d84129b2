#include "fdmimo/commands.hpp"

#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include <fdmimo/io_util.hpp>

namespace fdmimo::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Io: return kIoFailure;
    case ErrorKind::Numeric:
    case ErrorKind::DegenerateInput: return kNumericFailure;
    default: return kInvalidConfig;
  }
}

std::string error_line(ErrorKind kind, const std::string& message) {
  std::string flat = message;
  for (char& c : flat) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return "fdmimo: error code=" + std::to_string(exit_code_for(kind)) +
         " kind=" + std::string(to_string(kind)) + " message=" +
         nlohmann::json(flat).dump();
}

void OutputBundle::add(std::string name, std::string contents) {
  files_.emplace_back(std::move(name), std::move(contents));
}

void OutputBundle::commit(const fs::path& dir) const {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory " + dir.string());
  std::vector<fs::path> written;
  try {
    for (const auto& [name, body] : files_) {
      io::write_file_atomic(dir / name, body);
      written.push_back(dir / name);
    }
  } catch (...) {
    for (const auto& p : written) fs::remove(p, ec);
    throw;
  }
}

const char* const kDefaultRecipeJson = R"({
  "kind": "time_domain",
  "fs_hz": 1000,
  "num_samples": 64000,
  "sources": 4,
  "receivers": 3,
  "tones": [
    {"freq_hz": 6.0},
    {"freq_hz": 8.5},
    {"freq_hz": 10.0},
    {"freq_hz": 12.5},
    {"freq_hz": 20.0}
  ],
  "source_noise_std": 0.2,
  "receiver_noise_std": 0.1,
  "drift": {"amplitude": 0.2, "period_s": 40}
}
)";

namespace {

struct RecordingInput {
  Recording source, receiver;
};

struct LoadedInput {
  std::variant<RecordingInput, TimeDomainDataset, SyntheticDataset> data;
  std::optional<ElectrodeGraph> recipe_graph;  // graph the channel was drawn on
  std::uint64_t seed = kDefaultSeed;
};

Recording load_recording(const fs::path& p, const RunConfig& cfg) {
  if (p.extension() == ".csv") {
    if (!cfg.csv_fs_hz) fail(ErrorKind::Config, "CSV input needs --fs");
    return read_recording_csv(p, *cfg.csv_fs_hz);
  }
  return read_recording(p);
}

std::uint64_t resolve_seed(const RunConfig& cfg, const std::string& recipe_text) {
  if (cfg.seed) return *cfg.seed;
  try {
    const auto j = nlohmann::json::parse(recipe_text);
    if (j.contains("seed")) return j["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception&) {
  }
  return kDefaultSeed;
}

LoadedInput load_recipe_text(const RunConfig& cfg, const std::string& text) {
  LoadedInput in;
  in.seed = resolve_seed(cfg, text);
  Recipe recipe = parse_recipe(text);
  if (recipe.time_domain) {
    if (cfg.snr_db) {
      fail(ErrorKind::Config, "--snr-db applies to frequency-domain recipes only");
    }
    recipe.time_domain->seed = in.seed;
    in.data = gen_time_domain(*recipe.time_domain);
  } else {
    auto& r = *recipe.frequency_domain;
    r.channel.seed = in.seed;
    ElectrodeGraph g = r.graph_preset.empty() ? chain_graph(r.channel.receivers)
                                              : montage_preset(r.graph_preset).graph;
    const ChannelTensor truth = gen_channel(r.channel, g);
    const double snr = cfg.snr_db ? *cfg.snr_db : r.snr_db;
    in.data = gen_frames(truth, r.columns, snr, derive_seed(in.seed, 0x78646174ull));
    in.recipe_graph = std::move(g);
  }
  return in;
}

LoadedInput load_inputs(const RunConfig& cfg) {
  if (cfg.recipe) return load_recipe_text(cfg, io::read_file(*cfg.recipe));
  LoadedInput in;
  in.seed = cfg.seed.value_or(kDefaultSeed);
  in.data = RecordingInput{load_recording(*cfg.src, cfg), load_recording(*cfg.rcv, cfg)};
  return in;
}

std::vector<Position3> read_positions(const fs::path& p) {
  std::istringstream in(io::read_file(p));
  std::vector<Position3> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() == 4) tok.erase(tok.begin());  // leading label
    if (tok.size() != 3) {
      fail(ErrorKind::Config, "positions line " + std::to_string(line_no) +
                                  ": expected 'x y z' or 'label x y z'");
    }
    Position3 pos{};
    for (int i = 0; i < 3; ++i) {
      try {
        pos[static_cast<std::size_t>(i)] = std::stod(tok[static_cast<std::size_t>(i)]);
      } catch (const std::exception&) {
        fail(ErrorKind::Config, "positions line " + std::to_string(line_no) + ": bad number");
      }
    }
    out.push_back(pos);
  }
  return out;
}

/// Receiver-side positions if every channel carries one.
std::optional<std::vector<Position3>> recording_positions(const Recording& r) {
  std::vector<Position3> out;
  for (const auto& p : r.channel_positions()) {
    if (!p) return std::nullopt;
    out.push_back(*p);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

double min_pair_distance(const std::vector<Position3>& pos) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      d = std::min(d, std::hypot(pos[i][0] - pos[j][0], pos[i][1] - pos[j][1],
                                 pos[i][2] - pos[j][2]));
    }
  }
  return d;
}

/// Explicit graph options first; otherwise recording positions, the 17-site
/// preset when the count matches, or a chain.
ElectrodeGraph resolve_graph(const RunConfig& cfg, Eigen::Index nodes,
                             const Recording* side, const ElectrodeGraph* recipe_graph) {
  ElectrodeGraph g;
  if (!cfg.graph_preset.empty()) {
    g = montage_preset(cfg.graph_preset).graph;
  } else if (cfg.edges) {
    g = graph_from_edge_list(cfg.graph_nodes.value_or(nodes),
                             parse_edge_list(io::read_file(*cfg.edges)));
  } else if (cfg.positions) {
    g = graph_from_positions(read_positions(*cfg.positions), *cfg.threshold);
  } else if (recipe_graph && recipe_graph->node_count() == nodes) {
    g = *recipe_graph;
  } else if (auto pos = side ? recording_positions(*side) : std::nullopt;
             pos && pos->size() > 1) {
    g = graph_from_positions(*pos, cfg.threshold.value_or(1.3 * min_pair_distance(*pos)));
  } else if (nodes == 17) {
    g = montage_1020_17().graph;
  } else {
    g = chain_graph(nodes);
  }
  if (g.node_count() != nodes) {
    fail(ErrorKind::Config, "graph has " + std::to_string(g.node_count()) +
                                " nodes but the smoothed axis has " +
                                std::to_string(nodes));
  }
  return g;
}

SequenceOptions sequence_options(const RunConfig& cfg, Method m) {
  SequenceOptions o;
  o.method = m;
  o.stare = cfg.stare;
  o.stare.axis = cfg.graph_axis;
  o.anchor = cfg.anchor;
  o.noise_var = cfg.noise_var;
  o.jobs = cfg.jobs;
  return o;
}

void add_table(OutputBundle& out, const RunConfig& cfg, const std::string& stem,
               const std::string& csv, const std::string& json) {
  if (cfg.write_csv()) out.add(stem + ".csv", csv);
  out.add(stem + ".json", json);
}

bool needs_graph(const RunConfig& cfg) {
  for (Method m : cfg.methods()) {
    if (m == Method::STARE) return true;
  }
  return false;
}

}  // namespace

OutputBundle build_estimate(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const LoadedInput in = load_inputs(cfg);

  FrameSet frames;
  const ChannelTensor* truth = nullptr;
  const Recording* receiver = nullptr;
  const Recording* source = nullptr;
  if (const auto* sd = std::get_if<SyntheticDataset>(&in.data)) {
    frames = sd->frames;
    truth = &sd->truth;
  } else {
    const Recording& s = std::holds_alternative<RecordingInput>(in.data)
                             ? std::get<RecordingInput>(in.data).source
                             : std::get<TimeDomainDataset>(in.data).source;
    const Recording& r = std::holds_alternative<RecordingInput>(in.data)
                             ? std::get<RecordingInput>(in.data).receiver
                             : std::get<TimeDomainDataset>(in.data).receiver;
    source = &s;
    receiver = &r;
    const SegmentationPlan plan(cfg.symbol_len, cfg.frame_symbols, s.sample_rate_hz(),
                                cfg.max_freq);
    frames = run_frontend(s, r, plan, cfg.bandpass(), cfg.jobs);
  }
  log << "frames: K=" << frames.num_frames << " bins=" << frames.bins.size()
      << " N=" << frames.receivers << " P=" << frames.sources << " M=" << frames.columns
      << "\n";

  std::optional<ElectrodeGraph> graph;
  if (needs_graph(cfg)) {
    const bool rows = cfg.graph_axis == GraphAxis::Receivers;
    graph = resolve_graph(cfg, rows ? frames.receivers : frames.sources,
                          rows ? receiver : source,
                          in.recipe_graph ? &*in.recipe_graph : nullptr);
  }

  OutputBundle out;
  std::vector<std::pair<Method, double>> means;
  for (Method m : cfg.methods()) {
    const std::string name(to_string(m));
    const SequenceOptions opts = sequence_options(cfg, m);
    const SequenceResult seq = estimate_sequence(frames, graph ? &*graph : nullptr, opts);
    const MseReport rep = evaluate(frames, seq.tensor, cfg.eval_mode, truth);
    means.emplace_back(m, rep.mse_avg);
    log << name << ": mse_avg=" << io::format_double(rep.mse_avg)
        << " nmse_avg=" << io::format_double(rep.nmse_avg);
    if (rep.channel_nmse_avg) log << " channel_nmse=" << io::format_double(*rep.channel_nmse_avg);
    log << "\n";

    TensorProvenance prov;
    prov.method = name;
    if (m == Method::STARE) {
      prov.stare = opts.stare;
      prov.anchor = opts.anchor;
    }
    if (m == Method::MMSE) prov.noise_var = seq.noise_var;
    out.add("tensor_" + name + ".json", channel_tensor_metadata(seq.tensor, prov));
    out.add("tensor_" + name + ".bin", channel_tensor_payload(seq.tensor));
    out.add("diagnostics_" + name + ".jsonl", format_diagnostics_jsonl(seq.diagnostics, m));
    add_table(out, cfg, "metrics_" + name, mse_report_csv(rep), mse_report_json(rep));
  }
  if (means.size() > 1) {
    const CompareTable t = compare_from_means(means);
    add_table(out, cfg, "compare", compare_csv(t), compare_json(t));
  }
  if (truth) {
    TensorProvenance prov{"truth", std::nullopt, std::nullopt, std::nullopt};
    out.add("truth.json", channel_tensor_metadata(*truth, prov));
    out.add("truth.bin", channel_tensor_payload(*truth));
  }
  out.add("run_config.json", config_json(cfg));
  return out;
}

OutputBundle build_sweep(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const LoadedInput in = load_inputs(cfg);
  const Recording* s = nullptr;
  const Recording* r = nullptr;
  if (const auto* ri = std::get_if<RecordingInput>(&in.data)) {
    s = &ri->source;
    r = &ri->receiver;
  } else if (const auto* td = std::get_if<TimeDomainDataset>(&in.data)) {
    s = &td->source;
    r = &td->receiver;
  } else {
    fail(ErrorKind::Config, "sweep needs recordings or a time-domain recipe");
  }

  SweepConfig sc;
  sc.symbol_lens = cfg.grid.empty() ? default_symbol_grid() : cfg.grid;
  sc.symbols_per_frame = cfg.frame_symbols;
  sc.max_freq_hz = cfg.max_freq;
  sc.band = cfg.bandpass();
  sc.methods = cfg.methods();
  sc.estimator = sequence_options(cfg, Method::LS);
  sc.mode = cfg.eval_mode;
  sc.regimes = cfg.regimes;
  sc.jobs = cfg.jobs;
  sc.record_timing = cfg.record_timing;

  std::optional<ElectrodeGraph> graph;
  if (needs_graph(cfg)) {
    const bool rows = cfg.graph_axis == GraphAxis::Receivers;
    graph = resolve_graph(cfg, rows ? r->channel_count() : s->channel_count(), rows ? r : s,
                          nullptr);
  }
  const SweepResult res = sweep_symbol_length(*s, *r, sc, graph ? &*graph : nullptr);
  for (const auto& row : res.rows) {
    if (row.skipped()) {
      log << "warning: " << to_string(row.method) << " L=" << row.symbol_len << " "
          << row.warning << "\n";
    }
  }
  log << "sweep: " << res.rows.size() << " rows\n";

  OutputBundle out;
  add_table(out, cfg, "sweep", sweep_csv(res), sweep_json(res));
  if (sc.methods.size() > 1) {
    const CompareTable t = compare_estimators(res);
    add_table(out, cfg, "compare", compare_csv(t), compare_json(t));
  }
  out.add("run_config.json", config_json(cfg));
  return out;
}

OutputBundle build_simulate(const RunConfig& cfg, std::ostream& log) {
  cfg.validate(false);
  if (cfg.src || cfg.rcv) fail(ErrorKind::Config, "simulate takes --recipe, not recordings");
  const std::string text = cfg.recipe ? io::read_file(*cfg.recipe) : kDefaultRecipeJson;
  const LoadedInput in = load_recipe_text(cfg, text);

  OutputBundle out;
  TensorProvenance prov{"truth", std::nullopt, std::nullopt, std::nullopt};
  if (const auto* td = std::get_if<TimeDomainDataset>(&in.data)) {
    out.add("source.json", recording_metadata(td->source));
    out.add("source.bin", recording_payload(td->source));
    out.add("receiver.json", recording_metadata(td->receiver));
    out.add("receiver.bin", recording_payload(td->receiver));
    const ChannelTensor truth = td->truth_tensor();
    out.add("truth.json", channel_tensor_metadata(truth, prov));
    out.add("truth.bin", channel_tensor_payload(truth));
    log << "simulate: P=" << td->source.channel_count() << " N="
        << td->receiver.channel_count() << " T=" << td->source.sample_count()
        << " fs=" << io::format_double(td->source.sample_rate_hz()) << " seed=" << in.seed
        << "\n";
  } else {
    const auto& sd = std::get<SyntheticDataset>(in.data);
    out.add("truth.json", channel_tensor_metadata(sd.truth, prov));
    out.add("truth.bin", channel_tensor_payload(sd.truth));
    log << "simulate: frequency-domain truth N=" << sd.truth.receivers
        << " P=" << sd.truth.sources << " K=" << sd.truth.num_frames << " seed=" << in.seed
        << "\n";
  }
  nlohmann::ordered_json manifest;
  manifest["seed"] = in.seed;
  manifest["recipe"] = nlohmann::json::parse(text);
  out.add("simulate.json", manifest.dump(2) + "\n");
  return out;
}

OutputBundle build_graph(const RunConfig& cfg, std::ostream& log) {
  cfg.validate(false);
  ElectrodeGraph g;
  std::vector<std::string> labels;
  if (!cfg.graph_preset.empty()) {
    auto m = montage_preset(cfg.graph_preset);
    g = std::move(m.graph);
    labels = std::move(m.labels);
  } else if (cfg.edges) {
    const auto edges = parse_edge_list(io::read_file(*cfg.edges));
    Eigen::Index n = cfg.graph_nodes.value_or(0);
    if (!cfg.graph_nodes) {
      for (const auto& [i, j] : edges) n = std::max({n, i, j});
    }
    g = graph_from_edge_list(n, edges);
  } else if (cfg.positions) {
    g = graph_from_positions(read_positions(*cfg.positions), *cfg.threshold);
  } else {
    fail(ErrorKind::Config, "graph-build needs --graph-preset, --edges or --positions");
  }
  const auto comps = g.components();
  const auto ncomp = comps.empty() ? 0 : *std::max_element(comps.begin(), comps.end()) + 1;
  log << "graph: nodes=" << g.node_count() << " edges=" << g.edges().size()
      << " components=" << ncomp << "\n";

  OutputBundle out;
  out.add("graph.edges", format_edge_list(g));
  nlohmann::ordered_json j;
  j["nodes"] = g.node_count();
  j["labels"] = labels;
  j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : g.edges()) j["edges"].push_back({a + 1, b + 1});
  const Eigen::VectorXd deg = g.degrees();
  j["degrees"] = std::vector<double>(deg.data(), deg.data() + deg.size());
  j["components"] = ncomp;
  out.add("graph.json", j.dump(2) + "\n");
  return out;
}

namespace {

template <typename Build>
int guarded(Build&& build, const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    const OutputBundle out = build(cfg, log);
    out.commit(cfg.out);
    return kOk;
  } catch (const Error& e) {
    err << error_line(e.kind(), e.what()) << "\n";
    return exit_code_for(e.kind());
  } catch (const std::bad_alloc&) {
    err << error_line(ErrorKind::Numeric, "out of memory") << "\n";
    return kNumericFailure;
  }
}

}  // namespace

int cmd_estimate(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  return guarded(build_estimate, cfg, log, err);
}
int cmd_sweep(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  return guarded(build_sweep, cfg, log, err);
}
int cmd_simulate(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  return guarded(build_simulate, cfg, log, err);
}
int cmd_graph_build(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  return guarded(build_graph, cfg, log, err);
}

namespace {

struct FlagText {
  std::string src, rcv, recipe, edges, positions, out, band, grid, regimes;
  std::string graph_axis, anchor, eval_mode;
  bool causal = false;
};

void add_common_flags(CLI::App& app, RunConfig& cfg, FlagText& ft) {
  app.add_option("--config", "JSON config file; flags override its values");
  app.add_option("--src", ft.src, "source recording (.json metadata or .csv)");
  app.add_option("--rcv", ft.rcv, "receiver recording (.json metadata or .csv)");
  app.add_option("--recipe", ft.recipe, "synthetic recipe (JSON)");
  app.add_option("--fs", cfg.csv_fs_hz, "sample rate for CSV recordings (Hz)");
  app.add_option("--symbol-len", cfg.symbol_len, "samples per symbol (L)");
  app.add_option("--frame-symbols", cfg.frame_symbols, "symbols per frame (M)");
  app.add_option("--max-freq", cfg.max_freq, "highest retained frequency (Hz)");
  app.add_option("--band", ft.band, "bandpass edges 'lo,hi' in Hz, or 'none'");
  app.add_option("--filter-order", cfg.filter_order, "Butterworth order");
  app.add_flag("--causal", ft.causal, "single forward filter pass instead of zero-phase");
  app.add_option("--graph-preset", cfg.graph_preset, "named electrode graph (1020-17)");
  app.add_option("--edges", ft.edges, "edge-list file, 1-based 'i j' per line");
  app.add_option("--nodes", cfg.graph_nodes, "node count for --edges");
  app.add_option("--positions", ft.positions, "electrode positions, 'x y z' per line");
  app.add_option("--threshold", cfg.threshold, "adjacency distance for --positions");
  app.add_option("--graph-axis", ft.graph_axis, "receivers | sources");
  app.add_option("--estimator", cfg.estimator, "ls | mmse | stare | all");
  app.add_option("--mu", cfg.stare.mu, "spatial smoothness weight");
  app.add_option("--nu", cfg.stare.nu, "temporal continuity weight");
  app.add_option("--rho", cfg.stare.rho, "ADMM penalty");
  app.add_option("--iters", cfg.stare.max_iters, "ADMM iteration cap");
  app.add_option("--tol", cfg.stare.residual_tol, "ADMM residual tolerance (0: run all iterations)");
  app.add_option("--anchor", ft.anchor, "first-frame anchor: ls | zero");
  app.add_option("--noise-var", cfg.noise_var, "MMSE noise variance (default: estimated)");
  app.add_option("--snr-db", cfg.snr_db, "SNR override for frequency-domain recipes");
  app.add_option("--eval-mode", ft.eval_mode, "in-sample | held-out");
  app.add_option("--grid", ft.grid, "sweep symbol lengths, comma separated");
  app.add_option("--regimes", ft.regimes, "regime boundaries 'short,long'");
  app.add_flag("--record-timing", cfg.record_timing, "fill runtime_ms (breaks byte-reproducibility)");
  app.add_option("--out", ft.out, "output directory");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--jobs", cfg.jobs, "worker threads");
  app.add_option("--format", cfg.format, "csv (with JSON mirror) | json");
}

void apply_flag_text(const CLI::App& app, RunConfig& cfg, const FlagText& ft) {
  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--src")) cfg.src = ft.src;
  if (given("--rcv")) cfg.rcv = ft.rcv;
  if (given("--recipe")) cfg.recipe = ft.recipe;
  if (given("--edges")) cfg.edges = ft.edges;
  if (given("--positions")) cfg.positions = ft.positions;
  if (given("--out")) cfg.out = ft.out;
  if (given("--band")) cfg.band = ft.band;
  if (given("--causal")) cfg.zero_phase = !ft.causal;
  if (given("--graph-axis")) {
    if (ft.graph_axis != "receivers" && ft.graph_axis != "sources") {
      fail(ErrorKind::Config, "--graph-axis must be receivers or sources");
    }
    cfg.graph_axis = ft.graph_axis == "sources" ? GraphAxis::Sources : GraphAxis::Receivers;
  }
  if (given("--anchor")) {
    if (ft.anchor != "ls" && ft.anchor != "zero") fail(ErrorKind::Config, "--anchor must be ls or zero");
    cfg.anchor = ft.anchor == "zero" ? AnchorMode::Zero : AnchorMode::FirstFrameLs;
  }
  if (given("--eval-mode")) {
    if (ft.eval_mode != "in-sample" && ft.eval_mode != "held-out") {
      fail(ErrorKind::Config, "--eval-mode must be in-sample or held-out");
    }
    cfg.eval_mode = ft.eval_mode == "held-out" ? EvalMode::HeldOut : EvalMode::InSample;
  }
  if (given("--grid")) cfg.grid = parse_index_list(ft.grid);
  if (given("--regimes")) {
    const auto r = parse_index_list(ft.regimes);
    if (r.size() != 2) fail(ErrorKind::Config, "--regimes needs two boundaries");
    cfg.regimes = {r[0], r[1]};
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
  RunConfig cfg;
  try {
    for (int i = 1; i + 1 < argc; ++i) {
      if (std::string_view(argv[i]) == "--config") {
        apply_config_json(cfg, io::read_file(argv[i + 1]));
      }
    }
  } catch (const Error& e) {
    err << error_line(e.kind(), e.what()) << "\n";
    return exit_code_for(e.kind());
  }

  CLI::App app{"Frequency-division MIMO channel estimation (LS / MMSE / STARE)", "fdmimo"};
  app.require_subcommand(1);
  FlagText ft;
  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&, std::ostream&, std::ostream&);
  };
  const Sub subs[] = {
      {"estimate", "estimate channel tensors and reconstruction metrics", cmd_estimate},
      {"sweep", "sweep the symbol length and tabulate MSE_avg", cmd_sweep},
      {"simulate", "write synthetic recordings and ground truth", cmd_simulate},
      {"graph-build", "materialize an electrode graph as an edge list", cmd_graph_build},
  };
  std::vector<CLI::App*> apps;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common_flags(*sub, cfg, ft);
    apps.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    log << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, log, err);
      return kOk;
    }
    err << error_line(ErrorKind::Config, e.what()) << "\n";
    return kInvalidConfig;
  }

  for (std::size_t i = 0; i < apps.size(); ++i) {
    if (!apps[i]->parsed()) continue;
    try {
      apply_flag_text(*apps[i], cfg, ft);
    } catch (const Error& e) {
      err << error_line(e.kind(), e.what()) << "\n";
      return exit_code_for(e.kind());
    }
    return subs[i].fn(cfg, log, err);
  }
  return kInvalidConfig;
}

}  // namespace fdmimo::cli
