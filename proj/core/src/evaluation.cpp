#include "fdmimo/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fdmimo/error.hpp"
#include "fdmimo/io_util.hpp"
#include "fdmimo/parallel.hpp"

namespace fdmimo {

using nlohmann::ordered_json;

double mse_frequency(const ComplexMatrix& Y_true, const ComplexMatrix& H_hat,
                     const ComplexMatrix& X) {
  if (H_hat.cols() != X.rows() || H_hat.rows() != Y_true.rows() ||
      X.cols() != Y_true.cols()) {
    fail(ErrorKind::Shape, "mse_frequency: Y, H and X shapes do not conform");
  }
  return (Y_true - H_hat * X).squaredNorm();
}

double aggregate_mse_avg(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::InvalidInput, "no MSE values to average");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

MseReport evaluate(const FrameSet& frames, const ChannelTensor& estimate,
                   EvalMode mode, const ChannelTensor* truth) {
  if (estimate.H.size() != frames.frames.size() || estimate.bins != frames.bins) {
    fail(ErrorKind::Shape, "estimate does not cover the frame set");
  }
  if (truth && (truth->H.size() != estimate.H.size() || truth->bins != estimate.bins)) {
    fail(ErrorKind::Shape, "truth tensor does not cover the frame set");
  }
  const Eigen::Index first = mode == EvalMode::HeldOut ? 1 : 0;
  if (frames.num_frames <= first) {
    fail(ErrorKind::InvalidInput, "held-out evaluation needs at least two frames");
  }

  MseReport r;
  r.mode = mode;
  std::vector<double> raw, norm, chan;
  for (Eigen::Index k0 = first; k0 < frames.num_frames; ++k0) {
    for (std::size_t bi = 0; bi < frames.bins.size(); ++bi) {
      const auto& f = frames.at(k0, bi);
      const auto& H = estimate.at(k0 - first, bi);
      MseEntry e;
      e.frame_index = f.frame_index;
      e.bin = f.bin;
      e.freq_hz = frames.step.bin_hz(f.bin);
      e.raw_mse = mse_frequency(f.Y, H, f.X);
      const double ref = f.Y.squaredNorm();
      e.nmse = ref > 0 ? e.raw_mse / ref : (e.raw_mse == 0 ? 0.0 : INFINITY);
      if (truth) {
        const auto& Ht = truth->at(k0, bi);
        const double tn = Ht.squaredNorm();
        const double err = (estimate.at(k0, bi) - Ht).squaredNorm();
        e.channel_nmse = tn > 0 ? err / tn : (err == 0 ? 0.0 : INFINITY);
        chan.push_back(*e.channel_nmse);
      }
      raw.push_back(e.raw_mse);
      norm.push_back(e.nmse);
      r.entries.push_back(e);
    }
  }
  r.mse_avg = aggregate_mse_avg(raw);
  r.nmse_avg = aggregate_mse_avg(norm);
  if (truth) r.channel_nmse_avg = aggregate_mse_avg(chan);
  return r;
}

std::vector<Eigen::Index> default_symbol_grid() {
  std::vector<Eigen::Index> grid;
  for (int i = 0; i <= 12; ++i) {
    grid.push_back(static_cast<Eigen::Index>(std::llround(std::pow(10.0, 3.0 + i / 6.0))));
  }
  return grid;
}

namespace {

std::vector<RegimeMeans> regime_means(const std::vector<SweepRow>& rows,
                                      const std::vector<Method>& methods,
                                      const RegimeBounds& b) {
  std::vector<RegimeMeans> out;
  for (Method m : methods) {
    std::vector<double> s, mid, l;
    for (const auto& r : rows) {
      if (r.method != m || r.skipped()) continue;
      if (r.symbol_len < b.short_below) {
        s.push_back(r.mse_avg);
      } else if (r.symbol_len > b.long_above) {
        l.push_back(r.mse_avg);
      } else {
        mid.push_back(r.mse_avg);
      }
    }
    RegimeMeans rm;
    rm.method = m;
    if (!s.empty()) rm.short_mean = aggregate_mse_avg(s);
    if (!mid.empty()) rm.mid_mean = aggregate_mse_avg(mid);
    if (!l.empty()) rm.long_mean = aggregate_mse_avg(l);
    out.push_back(rm);
  }
  return out;
}

}  // namespace

SweepResult sweep_symbol_length(const Recording& source, const Recording& receiver,
                                const SweepConfig& cfg, const ElectrodeGraph* graph) {
  if (cfg.symbol_lens.empty()) fail(ErrorKind::InvalidInput, "empty symbol-length grid");
  if (cfg.methods.empty()) fail(ErrorKind::InvalidInput, "no estimators selected");
  if (source.sample_count() != receiver.sample_count() ||
      source.sample_rate_hz() != receiver.sample_rate_hz()) {
    fail(ErrorKind::Alignment, "source and receiver recordings are not aligned");
  }

  std::vector<Eigen::Index> grid = cfg.symbol_lens;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  // Filtering does not depend on L; do it once.
  const Recording src = cfg.band ? bandpass_filter(source, *cfg.band, cfg.jobs) : source;
  const Recording rcv = cfg.band ? bandpass_filter(receiver, *cfg.band, cfg.jobs) : receiver;
  const auto T = src.sample_count();
  const auto M = cfg.symbols_per_frame;
  const std::size_t nm = cfg.methods.size();

  std::vector<SweepRow> rows(grid.size() * nm);
  parallel_for(grid.size(), cfg.jobs, [&](std::size_t gi) {
    const Eigen::Index L = grid[gi];
    const SegmentationPlan plan(L, M, src.sample_rate_hz(), cfg.max_freq_hz);
    const bool too_long = plan.num_frames(T) < 1;
    std::optional<FrameSet> frames;
    if (!too_long) frames = assemble_frames(segment(src, plan), segment(rcv, plan), plan);
    for (std::size_t mi = 0; mi < nm; ++mi) {
      SweepRow& row = rows[gi * nm + mi];
      row.method = cfg.methods[mi];
      row.symbol_len = L;
      row.delta_f_hz = plan.delta_f_hz();
      if (too_long) {
        row.mse_avg = row.nmse_avg = std::numeric_limits<double>::quiet_NaN();
        row.warning = "skipped: L*M=" + std::to_string(L * M) +
                      " exceeds recording length " + std::to_string(T);
        continue;
      }
      const auto t0 = std::chrono::steady_clock::now();
      SequenceOptions opts = cfg.estimator;
      opts.method = row.method;
      opts.jobs = 1;
      const SequenceResult seq = estimate_sequence(*frames, graph, opts);
      const MseReport rep = evaluate(*frames, seq.tensor, cfg.mode);
      row.mse_avg = rep.mse_avg;
      row.nmse_avg = rep.nmse_avg;
      if (cfg.record_timing) {
        row.runtime_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
      }
    }
  });

  SweepResult out;
  out.rows = std::move(rows);
  out.bounds = cfg.regimes;
  out.regimes = regime_means(out.rows, cfg.methods, cfg.regimes);
  return out;
}

SweepResult sweep_symbol_length(const TimeDomainRecipe& recipe,
                                const SweepConfig& cfg, const ElectrodeGraph* graph) {
  const TimeDomainDataset ds = gen_time_domain(recipe);
  return sweep_symbol_length(ds.source, ds.receiver, cfg, graph);
}

double percent_reduction(double baseline, double value) {
  if (baseline == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (baseline - value) / baseline * 100.0;
}

CompareTable compare_from_means(const std::vector<std::pair<Method, double>>& means) {
  std::optional<double> ls, mmse;
  for (const auto& [m, v] : means) {
    if (m == Method::LS) ls = v;
    if (m == Method::MMSE) mmse = v;
  }
  CompareTable t;
  for (const auto& [m, v] : means) {
    CompareRow r;
    r.method = m;
    r.grand_mean_mse = v;
    if (ls) r.pct_reduction_vs_ls = percent_reduction(*ls, v);
    if (mmse) r.pct_reduction_vs_mmse = percent_reduction(*mmse, v);
    t.rows.push_back(r);
  }
  return t;
}

CompareTable compare_estimators(const SweepResult& sweep) {
  std::vector<Method> order;
  for (const auto& r : sweep.rows) {
    if (std::find(order.begin(), order.end(), r.method) == order.end()) {
      order.push_back(r.method);
    }
  }
  std::sort(order.begin(), order.end());
  std::vector<std::pair<Method, double>> means;
  for (Method m : order) {
    std::vector<double> v;
    for (const auto& r : sweep.rows) {
      if (r.method == m && !r.skipped()) v.push_back(r.mse_avg);
    }
    if (!v.empty()) means.emplace_back(m, aggregate_mse_avg(v));
  }
  return compare_from_means(means);
}

namespace {

std::string opt_num(const std::optional<double>& v) {
  return v ? io::format_double(*v) : std::string();
}

ordered_json opt_json(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

ordered_json num_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string sweep_csv(const SweepResult& s) {
  std::ostringstream out;
  out << "estimator,L,delta_f_hz,mse_avg,nmse_avg,channel_nmse,runtime_ms,status\n";
  for (const auto& r : s.rows) {
    out << to_string(r.method) << ',' << r.symbol_len << ','
        << io::format_double(r.delta_f_hz) << ',' << io::format_double(r.mse_avg) << ','
        << io::format_double(r.nmse_avg) << ',' << opt_num(r.channel_nmse) << ','
        << io::format_double(r.runtime_ms) << ',' << (r.skipped() ? r.warning : "ok")
        << '\n';
  }
  return out.str();
}

std::string sweep_json(const SweepResult& s) {
  ordered_json j;
  ordered_json rows = ordered_json::array();
  for (const auto& r : s.rows) {
    ordered_json o;
    o["estimator"] = std::string(to_string(r.method));
    o["L"] = r.symbol_len;
    o["delta_f_hz"] = r.delta_f_hz;
    o["mse_avg"] = num_json(r.mse_avg);
    o["nmse_avg"] = num_json(r.nmse_avg);
    o["channel_nmse"] = opt_json(r.channel_nmse);
    o["runtime_ms"] = r.runtime_ms;
    o["status"] = r.skipped() ? r.warning : "ok";
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  j["regime_bounds"] = {{"short_below", s.bounds.short_below},
                        {"long_above", s.bounds.long_above}};
  ordered_json reg = ordered_json::array();
  for (const auto& r : s.regimes) {
    reg.push_back({{"estimator", std::string(to_string(r.method))},
                   {"short", opt_json(r.short_mean)},
                   {"mid", opt_json(r.mid_mean)},
                   {"long", opt_json(r.long_mean)}});
  }
  j["regimes"] = std::move(reg);
  return j.dump(2) + "\n";
}

std::string compare_csv(const CompareTable& t) {
  std::ostringstream out;
  out << "estimator,grand_mean_mse,pct_reduction_vs_ls,pct_reduction_vs_mmse\n";
  for (const auto& r : t.rows) {
    out << to_string(r.method) << ',' << io::format_double(r.grand_mean_mse) << ','
        << opt_num(r.pct_reduction_vs_ls) << ',' << opt_num(r.pct_reduction_vs_mmse)
        << '\n';
  }
  return out.str();
}

std::string compare_json(const CompareTable& t) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"estimator", std::string(to_string(r.method))},
                    {"grand_mean_mse", num_json(r.grand_mean_mse)},
                    {"pct_reduction_vs_ls", opt_json(r.pct_reduction_vs_ls)},
                    {"pct_reduction_vs_mmse", opt_json(r.pct_reduction_vs_mmse)}});
  }
  return ordered_json{{"rows", rows}}.dump(2) + "\n";
}

std::string mse_report_csv(const MseReport& r) {
  std::ostringstream out;
  out << "k,bin,freq_hz,raw_mse,nmse,channel_nmse\n";
  for (const auto& e : r.entries) {
    out << e.frame_index << ',' << e.bin << ',' << io::format_double(e.freq_hz) << ','
        << io::format_double(e.raw_mse) << ',' << io::format_double(e.nmse) << ','
        << opt_num(e.channel_nmse) << '\n';
  }
  return out.str();
}

std::string mse_report_json(const MseReport& r) {
  ordered_json entries = ordered_json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"k", e.frame_index},
                       {"bin", e.bin},
                       {"freq_hz", e.freq_hz},
                       {"raw_mse", num_json(e.raw_mse)},
                       {"nmse", num_json(e.nmse)},
                       {"channel_nmse", opt_json(e.channel_nmse)}});
  }
  ordered_json j;
  j["mode"] = r.mode == EvalMode::InSample ? "in-sample" : "held-out";
  j["mse_avg"] = num_json(r.mse_avg);
  j["nmse_avg"] = num_json(r.nmse_avg);
  j["channel_nmse_avg"] = opt_json(r.channel_nmse_avg);
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

}  // namespace fdmimo
