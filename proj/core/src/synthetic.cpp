#include "fdmimo/synthetic.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "fdmimo/error.hpp"
#include "fdmimo/random.hpp"

namespace fdmimo {

using std::numbers::pi;

void SyntheticChannelSpec::validate() const {
  if (receivers < 1 || sources < 1) fail(ErrorKind::InvalidSpec, "N and P must be >= 1");
  if (frames < 1) fail(ErrorKind::InvalidSpec, "frame count must be >= 1");
  if (bins.empty()) fail(ErrorKind::InvalidSpec, "no frequency bins");
  if (!(spatial_corr_strength >= 0.0 && spatial_corr_strength <= 1.0)) {
    fail(ErrorKind::InvalidSpec, "spatial_corr_strength must lie in [0, 1]");
  }
  if (!(temporal_drift_ar1 >= 0.0 && temporal_drift_ar1 < 1.0)) {
    fail(ErrorKind::InvalidSpec, "temporal_drift_ar1 must lie in [0, 1)");
  }
  if (!(freq_rolloff_hz > 0.0)) fail(ErrorKind::InvalidSpec, "freq_rolloff_hz must be > 0");
}

ElectrodeGraph chain_graph(Eigen::Index n) {
  std::vector<ElectrodeGraph::Edge> edges;
  for (Eigen::Index i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
  return graph_from_edge_list(n, edges);
}

ChannelTensor gen_channel(const SyntheticChannelSpec& spec,
                          const ElectrodeGraph& graph) {
  spec.validate();
  const auto N = spec.receivers;
  const auto P = spec.sources;
  if (graph.node_count() != N) {
    fail(ErrorKind::Shape, "graph node count must equal the receiver count");
  }

  // Row mixing (I + c L)^{-1}; c grows without bound as strength -> 1.
  const double s = std::min(spec.spatial_corr_strength, 1.0 - 1e-6);
  const double c = s / (1.0 - s);
  RealMatrix A = c * graph.laplacian();
  A.diagonal().array() += 1.0;
  const Eigen::LLT<RealMatrix> smoother(A);

  auto smoothed_draw = [&](Eigen::Index k, Eigen::Index bin) {
    Rng rng(derive_seed(spec.seed, 0x6368616eull, static_cast<std::uint64_t>(k),
                        static_cast<std::uint64_t>(bin)));
    const ComplexMatrix z = rng.complex_normal(N, P);
    ComplexMatrix d(N, P);
    d.real() = smoother.solve(RealMatrix(z.real()));
    d.imag() = smoother.solve(RealMatrix(z.imag()));
    const double norm = d.norm();
    if (norm > 0.0) d *= std::sqrt(static_cast<double>(N * P)) / norm;
    return d;
  };

  ChannelTensor t;
  t.receivers = N;
  t.sources = P;
  t.step = spec.step;
  t.bins = spec.bins;
  t.num_frames = spec.frames;
  t.H.resize(static_cast<std::size_t>(spec.frames) * spec.bins.size());

  const double a = spec.temporal_drift_ar1;
  const double innov = std::sqrt(1.0 - a * a);
  for (std::size_t bi = 0; bi < spec.bins.size(); ++bi) {
    const auto bin = spec.bins[bi];
    const double scale = std::exp(-spec.step.bin_hz(bin) / spec.freq_rolloff_hz);
    ComplexMatrix h = smoothed_draw(0, bin);
    t.at(0, bi) = scale * h;
    for (Eigen::Index k = 1; k < spec.frames; ++k) {
      h = a * h + innov * smoothed_draw(k, bin);
      t.at(k, bi) = scale * h;
    }
  }
  return t;
}

SyntheticDataset gen_frames(const ChannelTensor& channels, Eigen::Index columns,
                            double snr_db, std::uint64_t seed) {
  if (columns < 1) fail(ErrorKind::InvalidSpec, "M must be >= 1");
  if (std::isnan(snr_db) || snr_db == -kNoiseless) {
    fail(ErrorKind::InvalidSpec, "SNR must be a number or +inf");
  }
  const auto N = channels.receivers;
  const auto P = channels.sources;

  SyntheticDataset ds;
  ds.truth = channels;
  ds.snr_db = snr_db;
  ds.seed = seed;
  auto& fs = ds.frames;
  fs.step = channels.step;
  fs.bins = channels.bins;
  fs.num_frames = channels.num_frames;
  fs.sources = P;
  fs.receivers = N;
  fs.columns = columns;
  fs.frames.resize(channels.H.size());
  ds.noise.resize(channels.H.size());

  const bool noisy = std::isfinite(snr_db);
  for (Eigen::Index k0 = 0; k0 < channels.num_frames; ++k0) {
    for (std::size_t bi = 0; bi < channels.bins.size(); ++bi) {
      const std::size_t idx = channels.index(k0, bi);
      const auto bin = channels.bins[bi];
      Rng rng(derive_seed(seed, 0x6672616dull, static_cast<std::uint64_t>(k0),
                          static_cast<std::uint64_t>(bin)));
      FrequencyFrame& f = fs.frames[idx];
      f.frame_index = k0 + 1;
      f.bin = bin;
      f.X = rng.complex_normal(P, columns);
      const ComplexMatrix signal = channels.H[idx] * f.X;
      ComplexMatrix w = ComplexMatrix::Zero(N, columns);
      if (noisy) {
        const double entries = static_cast<double>(N * columns);
        const double target = signal.squaredNorm() / entries * std::pow(10.0, -snr_db / 10.0);
        w = rng.complex_normal(N, columns);
        const double realized = w.squaredNorm() / entries;
        if (realized > 0.0) w *= std::sqrt(target / realized);
      }
      f.Y = signal + w;
      ds.noise[idx] = std::move(w);
    }
  }
  return ds;
}

void TimeDomainRecipe::validate() const {
  if (!(sample_rate_hz > 0.0)) fail(ErrorKind::InvalidSpec, "invalid recipe: fs must be > 0");
  if (num_samples < 0) fail(ErrorKind::InvalidSpec, "invalid recipe: negative length");
  if (sources < 0 || receivers < 0) {
    fail(ErrorKind::InvalidSpec, "invalid recipe: negative channel count");
  }
  for (const auto& t : tones) {
    if (!(t.freq_hz >= 0.0) || t.freq_hz >= sample_rate_hz / 2.0) {
      fail(ErrorKind::InvalidSpec, "invalid recipe: tone at " + std::to_string(t.freq_hz) +
                                       " Hz is not below Nyquist");
    }
    if (t.gain.size() != 0 && (t.gain.rows() != receivers || t.gain.cols() != sources)) {
      fail(ErrorKind::InvalidSpec, "invalid recipe: tone gain must be N x P");
    }
  }
  if (source_noise_std < 0 || receiver_noise_std < 0 || drift_amplitude < 0) {
    fail(ErrorKind::InvalidSpec, "invalid recipe: negative noise or drift level");
  }
  if (drift_amplitude > 0 && !(drift_period_s > 0)) {
    fail(ErrorKind::InvalidSpec, "invalid recipe: drift period must be > 0");
  }
}

ChannelTensor TimeDomainDataset::truth_tensor() const {
  ChannelTensor t;
  t.receivers = receiver.channel_count();
  t.sources = source.channel_count();
  t.step = {source.sample_rate_hz(), std::max<Eigen::Index>(1, source.sample_count())};
  t.num_frames = 1;
  t.explicit_freqs_hz = tone_freqs_hz;
  for (std::size_t i = 0; i < tone_gains.size(); ++i) {
    t.bins.push_back(static_cast<Eigen::Index>(i));
    t.H.push_back(tone_gains[i]);
  }
  return t;
}

TimeDomainDataset gen_time_domain(const TimeDomainRecipe& r) {
  r.validate();
  const auto P = r.sources;
  const auto N = r.receivers;
  const auto T = r.num_samples;
  const auto J = r.tones.size();

  TimeDomainDataset out;
  std::vector<ComplexMatrix> drift(J);
  std::vector<RealMatrix> drift_phase(J);
  RealMatrix phase(P, static_cast<Eigen::Index>(J));
  {
    Rng rng(derive_seed(r.seed, 0x70686173ull));
    for (Eigen::Index j = 0; j < phase.cols(); ++j) {
      for (Eigen::Index p = 0; p < P; ++p) phase(p, j) = 2.0 * pi * rng.uniform();
    }
  }
  for (std::size_t j = 0; j < J; ++j) {
    const auto& tone = r.tones[j];
    if (tone.gain.size() != 0) {
      out.tone_gains.push_back(tone.gain);
    } else {
      Rng rng(derive_seed(r.seed, 0x6761696eull, j));
      out.tone_gains.push_back(rng.complex_normal(N, P));
    }
    out.tone_freqs_hz.push_back(tone.freq_hz);
    Rng drng(derive_seed(r.seed, 0x64726674ull, j));
    drift[j] = drng.complex_normal(N, P);
    drift_phase[j].resize(N, P);
    for (Eigen::Index p = 0; p < P; ++p) {
      for (Eigen::Index n = 0; n < N; ++n) drift_phase[j](n, p) = 2.0 * pi * drng.uniform();
    }
  }
  {
    Rng rng(derive_seed(r.seed, 0x6e676169ull));
    out.noise_gain = ComplexMatrix::Zero(N, P);
    for (Eigen::Index p = 0; p < P; ++p) {
      for (Eigen::Index n = 0; n < N; ++n) out.noise_gain(n, p) = rng.normal();
    }
  }

  SampleMatrix src = SampleMatrix::Zero(P, T);
  SampleMatrix rcv = SampleMatrix::Zero(N, T);
  SampleMatrix src_noise = SampleMatrix::Zero(P, T);
  if (r.source_noise_std > 0) {
    for (Eigen::Index p = 0; p < P; ++p) {
      Rng rng(derive_seed(r.seed, 0x736e6f69ull, static_cast<std::uint64_t>(p)));
      for (Eigen::Index t = 0; t < T; ++t) src_noise(p, t) = r.source_noise_std * rng.normal();
    }
  }

  const double w_drift = r.drift_amplitude > 0 ? 2.0 * pi / r.drift_period_s : 0.0;
  std::vector<cplx> analytic(static_cast<std::size_t>(P));
  for (std::size_t j = 0; j < J; ++j) {
    const double w = 2.0 * pi * r.tones[j].freq_hz / r.sample_rate_hz;
    const double amp = r.tones[j].amplitude;
    const auto& G = out.tone_gains[j];
    for (Eigen::Index t = 0; t < T; ++t) {
      const double tt = static_cast<double>(t);
      for (Eigen::Index p = 0; p < P; ++p) {
        const double arg = w * tt + phase(p, static_cast<Eigen::Index>(j));
        analytic[static_cast<std::size_t>(p)] = amp * cplx(std::cos(arg), std::sin(arg));
        src(p, t) += analytic[static_cast<std::size_t>(p)].real();
      }
      const double secs = tt / r.sample_rate_hz;
      for (Eigen::Index n = 0; n < N; ++n) {
        cplx acc = 0.0;
        for (Eigen::Index p = 0; p < P; ++p) {
          cplx g = G(n, p);
          if (w_drift > 0) {
            g += r.drift_amplitude * drift[j](n, p) *
                 std::sin(w_drift * secs + drift_phase[j](n, p));
          }
          acc += g * analytic[static_cast<std::size_t>(p)];
        }
        rcv(n, t) += acc.real();
      }
    }
  }
  if (r.source_noise_std > 0) {
    src += src_noise;
    rcv += out.noise_gain.real() * src_noise;
  }
  if (r.receiver_noise_std > 0) {
    for (Eigen::Index n = 0; n < N; ++n) {
      Rng rng(derive_seed(r.seed, 0x726e6f69ull, static_cast<std::uint64_t>(n)));
      for (Eigen::Index t = 0; t < T; ++t) rcv(n, t) += r.receiver_noise_std * rng.normal();
    }
  }

  std::vector<std::string> src_labels, rcv_labels;
  for (Eigen::Index p = 0; p < P; ++p) src_labels.push_back("src" + std::to_string(p + 1));
  for (Eigen::Index n = 0; n < N; ++n) rcv_labels.push_back("rcv" + std::to_string(n + 1));
  out.source = Recording(std::move(src), r.sample_rate_hz, std::move(src_labels));
  out.receiver = Recording(std::move(rcv), r.sample_rate_hz, std::move(rcv_labels));
  return out;
}

namespace {

using nlohmann::json;

ComplexMatrix parse_gain(const json& g, Eigen::Index N, Eigen::Index P) {
  if (g.is_string()) {
    const auto s = g.get<std::string>();
    if (s == "random") return {};
    if (s == "identity") {
      if (N != P) fail(ErrorKind::InvalidSpec, "invalid recipe: identity gain needs N == P");
      return ComplexMatrix::Identity(N, P);
    }
    fail(ErrorKind::InvalidSpec, "invalid recipe: unknown gain '" + s + "'");
  }
  ComplexMatrix m(N, P);
  if (!g.is_array() || static_cast<Eigen::Index>(g.size()) != N) {
    fail(ErrorKind::InvalidSpec, "invalid recipe: gain must have N rows");
  }
  for (Eigen::Index n = 0; n < N; ++n) {
    const auto& row = g[static_cast<std::size_t>(n)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != P) {
      fail(ErrorKind::InvalidSpec, "invalid recipe: gain rows must have P entries");
    }
    for (Eigen::Index p = 0; p < P; ++p) {
      const auto& e = row[static_cast<std::size_t>(p)];
      m(n, p) = e.is_array() ? cplx(e.at(0).get<double>(), e.at(1).get<double>())
                             : cplx(e.get<double>(), 0.0);
    }
  }
  return m;
}

}  // namespace

Recipe parse_recipe(std::string_view json_text) {
  Recipe out;
  try {
    const json j = json::parse(json_text);
    const auto kind = j.value("kind", std::string("time_domain"));
    if (kind == "time_domain") {
      TimeDomainRecipe r;
      r.sample_rate_hz = j.value("fs_hz", r.sample_rate_hz);
      r.num_samples = j.value("num_samples", r.num_samples);
      r.sources = j.value("sources", r.sources);
      r.receivers = j.value("receivers", r.receivers);
      r.source_noise_std = j.value("source_noise_std", r.source_noise_std);
      r.receiver_noise_std = j.value("receiver_noise_std", r.receiver_noise_std);
      r.seed = j.value("seed", r.seed);
      if (j.contains("drift")) {
        r.drift_amplitude = j["drift"].value("amplitude", 0.0);
        r.drift_period_s = j["drift"].value("period_s", r.drift_period_s);
      }
      for (const auto& t : j.value("tones", json::array())) {
        Tone tone;
        tone.freq_hz = t.at("freq_hz").get<double>();
        tone.amplitude = t.value("amplitude", 1.0);
        if (t.contains("gain")) tone.gain = parse_gain(t["gain"], r.receivers, r.sources);
        r.tones.push_back(std::move(tone));
      }
      r.validate();
      out.time_domain = std::move(r);
    } else if (kind == "frequency_domain") {
      FrequencyDomainRecipe r;
      auto& c = r.channel;
      c.receivers = j.value("receivers", c.receivers);
      c.sources = j.value("sources", c.sources);
      const double fs = j.value("fs_hz", 1000.0);
      const Eigen::Index L = j.value("symbol_len", Eigen::Index{1000});
      c.step = {fs, L};
      if (j.contains("bins")) {
        c.bins = j["bins"].get<std::vector<Eigen::Index>>();
      } else {
        c.bins = SegmentationPlan(L, 1, fs, j.value("max_freq_hz", 30.0)).retained_bins();
      }
      c.frames = j.value("frames", c.frames);
      c.spatial_corr_strength = j.value("spatial_corr_strength", c.spatial_corr_strength);
      c.temporal_drift_ar1 = j.value("temporal_drift_ar1", c.temporal_drift_ar1);
      c.freq_rolloff_hz = j.value("freq_rolloff_hz", c.freq_rolloff_hz);
      c.seed = j.value("seed", c.seed);
      r.columns = j.value("columns", r.columns);
      r.snr_db = j.contains("snr_db") && j["snr_db"].is_null()
                     ? kNoiseless
                     : j.value("snr_db", r.snr_db);
      r.graph_preset = j.value("graph_preset", std::string());
      c.validate();
      if (r.columns < 1) fail(ErrorKind::InvalidSpec, "invalid recipe: columns must be >= 1");
      out.frequency_domain = std::move(r);
    } else {
      fail(ErrorKind::InvalidSpec, "invalid recipe: unknown kind '" + kind + "'");
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidSpec, std::string("invalid recipe: ") + e.what());
  }
  return out;
}

}  // namespace fdmimo
