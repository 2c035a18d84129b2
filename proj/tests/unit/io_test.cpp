#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include <fdmimo/io_util.hpp>

#include "support/fixtures.hpp"

using namespace fdmimo;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fdmimo_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(PackF64, LittleEndianLayout) {
  const std::vector<double> v{1.0, -2.5};
  const std::string b = io::pack_f64le(v);
  ASSERT_EQ(b.size(), 16u);
  EXPECT_EQ(static_cast<unsigned char>(b[7]), 0x3f);
  EXPECT_EQ(static_cast<unsigned char>(b[6]), 0xf0);
  EXPECT_EQ(io::unpack_f64le(b), v);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(2.0), "2");
  EXPECT_EQ(std::stod(io::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(RecordingFile, RoundTrip) {
  const auto dir = scratch("rec");
  fdmimo::Rng rng(1);
  const Recording rec(fixture::random_samples(rng, 3, 257), 512.0, {"a", "b", "c"},
                      {Position3{0, 1, 2}, std::nullopt, Position3{-1, 0.5, 0}});
  write_recording(rec, dir / "r.json");
  EXPECT_TRUE(fs::exists(dir / "r.bin"));
  EXPECT_EQ(fs::file_size(dir / "r.bin"), 3u * 257u * 8u);
  const auto back = read_recording(dir / "r.json");
  EXPECT_TRUE(back.samples() == rec.samples());
  EXPECT_EQ(back.channel_labels(), rec.channel_labels());
  EXPECT_EQ(back.channel_positions(), rec.channel_positions());
  EXPECT_EQ(back.sample_rate_hz(), 512.0);
  const auto meta = nlohmann::json::parse(io::read_file(dir / "r.json"));
  EXPECT_EQ(meta["dtype"], "f64le");
  EXPECT_EQ(meta["layout"], "channel-major");
}

TEST(RecordingFile, Errors) {
  const auto dir = scratch("rec_err");
  try {
    read_recording(dir / "missing.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
  std::ofstream(dir / "bad.json") << R"({"version":1,"fs_hz":1000,"dtype":"f64le",
    "layout":"channel-major","channels":[{"label":"a","pos":null}],"num_samples":10})";
  std::ofstream(dir / "bad.bin") << "short";
  EXPECT_THROW(read_recording(dir / "bad.json"), Error);
}

TEST(RecordingCsv, Reads) {
  const auto dir = scratch("csv");
  std::ofstream(dir / "x.csv") << "Fz,Cz\n1,2\n3,4.5\n-1,0\n";
  const auto r = read_recording_csv(dir / "x.csv", 250.0);
  EXPECT_EQ(r.channel_count(), 2);
  EXPECT_EQ(r.sample_count(), 3);
  EXPECT_EQ(r.samples()(1, 1), 4.5);
  EXPECT_EQ(r.channel_labels()[0], "Fz");
}

TEST(ChannelTensorFile, RoundTrip) {
  const auto dir = scratch("tensor");
  SyntheticChannelSpec s;
  s.receivers = 3;
  s.sources = 2;
  s.bins = {0, 4, 9};
  s.frames = 2;
  s.step = {1000.0, 3000};
  const auto t = gen_channel(s, chain_graph(3));
  TensorProvenance prov{"stare", StareConfig{}, AnchorMode::FirstFrameLs, std::nullopt};
  write_channel_tensor(t, prov, dir / "t.json");
  const auto back = read_channel_tensor(dir / "t.json");
  ASSERT_EQ(back.tensor.H.size(), t.H.size());
  for (std::size_t i = 0; i < t.H.size(); ++i) EXPECT_TRUE(back.tensor.H[i] == t.H[i]);
  EXPECT_EQ(back.tensor.bins, t.bins);
  EXPECT_EQ(back.tensor.step.symbol_len, 3000);
  EXPECT_EQ(back.provenance.method, "stare");
  const auto meta = nlohmann::json::parse(io::read_file(dir / "t.json"));
  EXPECT_EQ(meta["config"]["dual_form"], "scaled");
  EXPECT_DOUBLE_EQ(meta["bins"][1].get<double>(), 4.0 / 3.0);
  // Row-major interleaved payload: entry (0, 1) of the first matrix is second.
  const auto raw = io::unpack_f64le(io::read_file(dir / "t.bin"));
  EXPECT_EQ(raw[2], t.H[0](0, 1).real());
  EXPECT_EQ(raw[3], t.H[0](0, 1).imag());
}

TEST(AtomicWrite, ReplacesWholeFile) {
  const auto dir = scratch("atomic");
  io::write_file_atomic(dir / "f.txt", "first version");
  io::write_file_atomic(dir / "f.txt", "v2");
  EXPECT_EQ(io::read_file(dir / "f.txt"), "v2");
  EXPECT_FALSE(fs::exists(dir / "f.txt.tmp"));
  EXPECT_THROW(io::write_file_atomic(dir / "no" / "such" / "f", "x"), Error);
}
