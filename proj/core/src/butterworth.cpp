#include "fdmimo/butterworth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fdmimo/error.hpp"
#include "fdmimo/parallel.hpp"

namespace fdmimo {

using std::numbers::pi;

void BandpassSpec::validate(double sample_rate_hz) const {
  if (order < 1) fail(ErrorKind::InvalidSpec, "filter order must be >= 1");
  if (!(low_cut_hz > 0.0 && low_cut_hz < high_cut_hz &&
        high_cut_hz < sample_rate_hz / 2.0)) {
    fail(ErrorKind::InvalidSpec,
         "band edges must satisfy 0 < low < high < fs/2");
  }
}

namespace {

cplx biquad_response(const Biquad& s, cplx z1) {
  const cplx z2 = z1 * z1;
  return (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
}

}  // namespace

ButterworthBandpass::ButterworthBandpass(const BandpassSpec& spec,
                                         double sample_rate_hz)
    : fs_(sample_rate_hz) {
  spec.validate(sample_rate_hz);
  const int n = spec.order;
  const double fs2 = 2.0 * fs_;

  // Prewarped analog band edges.
  const double wl = fs2 * std::tan(pi * spec.low_cut_hz / fs_);
  const double wh = fs2 * std::tan(pi * spec.high_cut_hz / fs_);
  const double bw = wh - wl;
  const double w0sq = wl * wh;

  // Lowpass prototype poles -> bandpass poles -> bilinear z-plane poles.
  std::vector<cplx> zpoles;
  zpoles.reserve(static_cast<std::size_t>(2 * n));
  for (int k = 0; k < n; ++k) {
    const cplx p = std::polar(1.0, pi * (2.0 * k + n + 1) / (2.0 * n));
    const cplx a = p * (bw / 2.0);
    const cplx d = std::sqrt(a * a - w0sq);
    for (const cplx s : {a + d, a - d}) {
      zpoles.push_back((fs2 + s) / (fs2 - s));
    }
  }

  // Pair conjugates; leftover real poles pair with each other.
  const double tol = 1e-10;
  std::vector<cplx> upper;
  std::vector<double> reals;
  for (const cplx& z : zpoles) {
    if (std::abs(z.imag()) <= tol * std::max(1.0, std::abs(z))) {
      reals.push_back(z.real());
    } else if (z.imag() > 0) {
      upper.push_back(z);
    }
  }
  std::sort(upper.begin(), upper.end(),
            [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
  std::sort(reals.begin(), reals.end());

  // Each section carries one zero at z=1 (from s=0) and one at z=-1 (from
  // s=inf): numerator 1 - z^-2.
  for (const cplx& z : upper) {
    sections_.push_back({1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
  }
  for (std::size_t i = 0; i + 1 < reals.size(); i += 2) {
    sections_.push_back({1.0, 0.0, -1.0, -(reals[i] + reals[i + 1]),
                         reals[i] * reals[i + 1]});
  }
  if (reals.size() % 2 == 1) {
    // Odd leftover: first-order section folded into a biquad.
    sections_.push_back({1.0, 0.0, -1.0, -reals.back(), 0.0});
  }
  if (static_cast<int>(sections_.size()) != n) {
    fail(ErrorKind::Numeric, "Butterworth pole pairing failed");
  }

  // Unit gain at the digital image of the analog center frequency.
  const double f_center = fs_ / pi * std::atan(std::sqrt(w0sq) / fs2);
  const cplx z1 = std::polar(1.0, -2.0 * pi * f_center / fs_);
  for (auto& s : sections_) {
    const double g = std::abs(biquad_response(s, z1));
    s.b0 /= g;
    s.b1 /= g;
    s.b2 /= g;
  }
}

cplx ButterworthBandpass::response(double freq_hz) const {
  const cplx z1 = std::polar(1.0, -2.0 * pi * freq_hz / fs_);
  cplx h = 1.0;
  for (const auto& s : sections_) h *= biquad_response(s, z1);
  return h;
}

void ButterworthBandpass::filter(std::span<const double> in,
                                 std::span<double> out) const {
  if (out.size() != in.size()) fail(ErrorKind::Shape, "filter size mismatch");
  if (out.data() != in.data()) std::copy(in.begin(), in.end(), out.begin());
  for (const auto& s : sections_) {
    // Transposed direct form II.
    double w1 = 0.0, w2 = 0.0;
    for (double& x : out) {
      const double y = s.b0 * x + w1;
      w1 = s.b1 * x - s.a1 * y + w2;
      w2 = s.b2 * x - s.a2 * y;
      x = y;
    }
  }
}

void ButterworthBandpass::filtfilt(std::span<const double> in,
                                   std::span<double> out) const {
  filter(in, out);
  std::reverse(out.begin(), out.end());
  filter(out, out);
  std::reverse(out.begin(), out.end());
}

Recording bandpass_filter(const Recording& rec, const BandpassSpec& spec,
                          unsigned jobs) {
  if (rec.empty()) fail(ErrorKind::InvalidInput, "empty recording");
  const ButterworthBandpass bp(spec, rec.sample_rate_hz());
  SampleMatrix out(rec.channel_count(), rec.sample_count());
  const auto T = static_cast<std::size_t>(rec.sample_count());
  parallel_for(static_cast<std::size_t>(rec.channel_count()), jobs,
               [&](std::size_t c) {
                 const auto row = static_cast<Eigen::Index>(c);
                 std::span<const double> in(rec.samples().row(row).data(), T);
                 std::span<double> dst(out.row(row).data(), T);
                 if (spec.zero_phase) {
                   bp.filtfilt(in, dst);
                 } else {
                   bp.filter(in, dst);
                 }
               });
  return rec.with_samples(std::move(out));
}

}  // namespace fdmimo
