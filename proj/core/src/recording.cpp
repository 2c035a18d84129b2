#include "fdmimo/recording.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fdmimo/error.hpp"
#include "fdmimo/io_util.hpp"

namespace fdmimo {

namespace fs = std::filesystem;
using nlohmann::json;

Recording::Recording(SampleMatrix samples, double sample_rate_hz,
                     std::vector<std::string> channel_labels,
                     std::vector<std::optional<Position3>> channel_positions)
    : samples_(std::move(samples)),
      sample_rate_hz_(sample_rate_hz),
      labels_(std::move(channel_labels)),
      positions_(std::move(channel_positions)) {
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    fail(ErrorKind::InvalidInput, "sample rate must be positive");
  }
  if (static_cast<Eigen::Index>(labels_.size()) != samples_.rows()) {
    fail(ErrorKind::InvalidInput,
         "channel label count does not match channel count");
  }
  if (positions_.empty()) {
    positions_.resize(labels_.size());
  } else if (positions_.size() != labels_.size()) {
    fail(ErrorKind::InvalidInput,
         "channel position count does not match channel count");
  }
}

Recording Recording::unlabeled(SampleMatrix samples, double sample_rate_hz) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(samples.rows()));
  for (Eigen::Index c = 0; c < samples.rows(); ++c) {
    labels.push_back("ch" + std::to_string(c + 1));
  }
  return Recording(std::move(samples), sample_rate_hz, std::move(labels));
}

Recording Recording::with_samples(SampleMatrix samples) const {
  if (samples.rows() != samples_.rows() || samples.cols() != samples_.cols()) {
    fail(ErrorKind::Shape, "replacement samples change the recording shape");
  }
  return Recording(std::move(samples), sample_rate_hz_, labels_, positions_);
}

fs::path binary_path_for(const fs::path& meta_path) {
  fs::path bin = meta_path;
  bin.replace_extension(".bin");
  return bin;
}

std::string recording_metadata(const Recording& rec) {
  json meta;
  meta["version"] = 1;
  meta["fs_hz"] = rec.sample_rate_hz();
  meta["dtype"] = "f64le";
  meta["layout"] = "channel-major";
  json channels = json::array();
  for (std::size_t c = 0; c < rec.channel_labels().size(); ++c) {
    json ch;
    ch["label"] = rec.channel_labels()[c];
    const auto& pos = rec.channel_positions()[c];
    if (pos) {
      ch["pos"] = {(*pos)[0], (*pos)[1], (*pos)[2]};
    } else {
      ch["pos"] = nullptr;
    }
    channels.push_back(std::move(ch));
  }
  meta["channels"] = std::move(channels);
  meta["num_samples"] = rec.sample_count();
  return meta.dump(2) + "\n";
}

std::string recording_payload(const Recording& rec) {
  // Row-major storage is already channel-major.
  const auto& s = rec.samples();
  return io::pack_f64le(
      std::span<const double>(s.data(), static_cast<std::size_t>(s.size())));
}

void write_recording(const Recording& rec, const fs::path& meta_path) {
  io::write_file_atomic(binary_path_for(meta_path), recording_payload(rec));
  io::write_file_atomic(meta_path, recording_metadata(rec));
}

Recording read_recording(const fs::path& meta_path) {
  json meta;
  try {
    meta = json::parse(io::read_file(meta_path));
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, "malformed recording metadata " + meta_path.string() +
                            ": " + e.what());
  }
  try {
    if (meta.at("version").get<int>() != 1) {
      fail(ErrorKind::Io, "unsupported recording version");
    }
    if (meta.value("dtype", "f64le") != "f64le" ||
        meta.value("layout", "channel-major") != "channel-major") {
      fail(ErrorKind::Io, "only f64le channel-major recordings are supported");
    }
    const double fs_hz = meta.at("fs_hz").get<double>();
    const auto num_samples = meta.at("num_samples").get<Eigen::Index>();
    std::vector<std::string> labels;
    std::vector<std::optional<Position3>> positions;
    for (const auto& ch : meta.at("channels")) {
      labels.push_back(ch.at("label").get<std::string>());
      if (ch.contains("pos") && !ch["pos"].is_null()) {
        const auto& p = ch["pos"];
        positions.push_back(Position3{p.at(0).get<double>(),
                                      p.at(1).get<double>(),
                                      p.at(2).get<double>()});
      } else {
        positions.emplace_back(std::nullopt);
      }
    }
    const auto channels = static_cast<Eigen::Index>(labels.size());
    const auto values = io::unpack_f64le(io::read_file(binary_path_for(meta_path)));
    if (static_cast<Eigen::Index>(values.size()) != channels * num_samples) {
      fail(ErrorKind::Io, "binary size does not match channels x num_samples");
    }
    SampleMatrix samples = Eigen::Map<const SampleMatrix>(values.data(),
                                                          channels, num_samples);
    return Recording(std::move(samples), fs_hz, std::move(labels),
                     std::move(positions));
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, "malformed recording metadata " + meta_path.string() +
                            ": " + e.what());
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
      cell.pop_back();
    }
    std::size_t start = cell.find_first_not_of(' ');
    out.push_back(start == std::string::npos ? std::string() : cell.substr(start));
  }
  return out;
}

}  // namespace

Recording read_recording_csv(const fs::path& path, double sample_rate_hz) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Io, "empty CSV: " + path.string());
  auto labels = split_csv_line(line);
  const auto channels = labels.size();
  if (channels == 0) fail(ErrorKind::Io, "CSV header has no columns");

  std::vector<std::vector<double>> columns(channels);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (cells.size() != channels) {
      fail(ErrorKind::Io, "CSV row " + std::to_string(row) + " has " +
                              std::to_string(cells.size()) + " columns, expected " +
                              std::to_string(channels));
    }
    for (std::size_t c = 0; c < channels; ++c) {
      try {
        std::size_t used = 0;
        columns[c].push_back(std::stod(cells[c], &used));
        if (used != cells[c].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        fail(ErrorKind::Io, "CSV row " + std::to_string(row) +
                                ": not a number: '" + cells[c] + "'");
      }
    }
  }
  const auto T = static_cast<Eigen::Index>(columns[0].size());
  SampleMatrix samples(static_cast<Eigen::Index>(channels), T);
  for (std::size_t c = 0; c < channels; ++c) {
    for (Eigen::Index t = 0; t < T; ++t) {
      samples(static_cast<Eigen::Index>(c), t) = columns[c][static_cast<std::size_t>(t)];
    }
  }
  return Recording(std::move(samples), sample_rate_hz, std::move(labels));
}

}  // namespace fdmimo
