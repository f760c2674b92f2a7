// SPDX-License-Identifier: Apache-2.0

#include "tdsc/channel.hpp"
#include "tdsc/rng.hpp"

#include <doctest.h>

using namespace tdsc;

namespace {

Baseband stream_of(const ComplexVector& x, double fs = 8.4e6) {
  Baseband bb;
  bb.samples = x;
  bb.sample_rate = fs;
  return bb;
}

ComplexVector tone(Eigen::Index n, double cycles_per_sample) {
  ComplexVector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = std::polar(1.0, 2.0 * kPi * cycles_per_sample * static_cast<double>(i));
  return x;
}

ComplexVector white(Eigen::Index n, double power, std::uint64_t seed) {
  ComplexVector x = ComplexVector::Zero(n);
  Engine e(seed);
  add_complex_gaussian(x, 0, n, power, e);
  return x;
}

}  // namespace

TEST_CASE("ITU-R profiles") {
  const ChannelProfile ped = itu_profile(ItuProfile::PedestrianA);
  const ChannelProfile veh = itu_profile(ItuProfile::VehicularA);
  CHECK(ped.taps.back().delay == doctest::Approx(410e-9).epsilon(1e-12));
  CHECK(veh.taps.back().delay == doctest::Approx(2510e-9).epsilon(1e-12));
  CHECK(ped.max_doppler == 7.28);
  CHECK(veh.max_doppler == 145.69);
  CHECK(ped.taps.size() == 4);
  CHECK(veh.taps.size() == 6);
  for (const auto& name : profile_names()) {
    CAPTURE(name);
    const ChannelProfile p = profile_by_name(name);
    CHECK_NOTHROW(p.validate());
    CHECK(std::abs(p.normalized_powers().sum() - 1.0) < 1e-12);
  }
  CHECK(profile_by_name("rician_ped_a").fading == FadingKind::Rician);
  CHECK(profile_by_name("rician_ped_a").k_factor_db == 6.0);
  CHECK_THROWS_AS(profile_by_name("itu_b"), std::invalid_argument);
}

TEST_CASE("static single tap is the identity") {
  const Baseband in = stream_of(white(1000, 1.0, 1));
  CHECK(apply_multipath(in, profile_by_name("flat_static"), 9).samples == in.samples);
  CHECK(apply_multipath(in, profile_by_name("awgn"), 9).samples == in.samples);
}

TEST_CASE("tap delays round to whole samples") {
  ChannelProfile p;
  p.name = "two_tap";
  p.taps = {{0.0, 0.0}, {410e-9, 0.0}};  // 3.444 samples at 8.4 MHz -> 3
  ComplexVector impulse = ComplexVector::Zero(16);
  impulse(0) = 1.0;
  const ComplexVector h = apply_multipath(stream_of(impulse), p, 1).samples;
  CHECK(std::abs(h(0) - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(h(3) - std::sqrt(0.5)) < 1e-15);
  CHECK(h.cwiseAbs().sum() == doctest::Approx(2.0 * std::sqrt(0.5)).epsilon(1e-14));

  ComplexVector tiny = ComplexVector::Ones(2);
  CHECK_THROWS_AS(apply_multipath(stream_of(tiny), p, 1), std::invalid_argument);
}

TEST_CASE("frozen Rayleigh tap has unit mean power") {
  ChannelProfile p = profile_by_name("flat_rayleigh");
  p.max_doppler = 0.0;
  const Baseband ones = stream_of(ComplexVector::Ones(300));
  double sum = 0.0;
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) {
    const ComplexVector y = apply_multipath(ones, p, static_cast<std::uint64_t>(s)).samples;
    CHECK(std::abs(y(299) - y(0)) < 1e-12);  // constant gain within a run
    sum += std::norm(y(0));
  }
  CHECK(sum / seeds == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("every profile preserves mean received power [slow]") {
  const ComplexVector x = white(2048, 1.0, 77);
  const double in_power = x.tail(2000).squaredNorm() / 2000.0;
  for (const auto& name : profile_names()) {
    CAPTURE(name);
    const ChannelProfile p = profile_by_name(name);
    const Baseband in = stream_of(x);
    double sum = 0.0;
    const int seeds = 10000;
    for (int s = 0; s < seeds; ++s)
      sum += apply_multipath(in, p, static_cast<std::uint64_t>(s)).samples.tail(2000).squaredNorm() / 2000.0;
    CHECK(sum / seeds == doctest::Approx(in_power).epsilon(0.03));
  }
}

TEST_CASE("CFO and phase rotation") {
  const ComplexVector x = white(5000, 1.0, 3);
  const Baseband in = stream_of(x);
  CHECK(apply_cfo_phase(in, {0.0, 0.0, 0.0}, 1024).samples == x);
  CHECK((apply_cfo_phase(in, {0.0, kPi, 0.0}, 1024).samples + x).cwiseAbs().maxCoeff() < 1e-15);

  const ImpairmentConfig imp{0.5, 1.1, 0.0};
  const ComplexVector y = apply_cfo_phase(in, imp, 1024).samples;
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    CHECK(std::abs(y(n)) == doctest::Approx(std::abs(x(n))).epsilon(1e-12));
    const Complex direct = x(n) * std::polar(1.0, 2.0 * kPi * 0.5 * static_cast<double>(n) / 1024.0 + 1.1);
    CHECK(std::abs(y(n) - direct) < 1e-12);
  }
  const ComplexVector back = apply_cfo_phase(stream_of(y), {-0.5, 0.0, 0.0}, 1024).samples;
  const ComplexVector undone = apply_cfo_phase(stream_of(back), {0.0, -1.1, 0.0}, 1024).samples;
  CHECK((undone - x).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(apply_cfo_phase(in, {0.0, 4.0, 0.0}, 1024), std::invalid_argument);
}

TEST_CASE("receive filter: passband, stopband and noise bandwidth") {
  const double fs = 8.4e6;
  const double nyquist = fs / 2.0;
  const Eigen::Index n = 1 << 16;

  // Passband 0.5 * Nyquist: cutoff at +-0.125 fs, flat below 0.115 fs.
  const Baseband in_band = stream_of(tone(n, 0.05));
  const ComplexVector y = receive_filter(in_band, 0.5 * nyquist).samples;
  const ComplexVector core = y.segment(1000, n - 2000);
  CHECK((core - in_band.samples.segment(1000, n - 2000)).cwiseAbs().maxCoeff() < 1e-6);

  const Baseband out_band = stream_of(tone(n, 0.45));  // 0.9 Nyquist
  const ComplexVector z = receive_filter(out_band, 0.5 * nyquist).samples;
  const double atten_db = 10.0 * std::log10(z.segment(1000, n - 2000).squaredNorm() / static_cast<double>(n - 2000));
  CHECK(atten_db <= -60.0);

  const Baseband noise = stream_of(white(n, 1.0, 11));
  const ComplexVector w = receive_filter(noise, 0.5 * fs).samples;
  CHECK(w.squaredNorm() / static_cast<double>(n) == doctest::Approx(0.5).epsilon(0.02));

  const ReceiveFilter wide(1.0);
  CHECK(wide.identity());
  CHECK_THROWS_AS(receive_filter(noise, 1.5 * fs), std::invalid_argument);

  // Odd, symmetric taps summing to one.
  const ReceiveFilter f(0.5);
  const RealVector& h = f.taps();
  CHECK(h.size() % 2 == 1);
  CHECK(h.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((h - h.reverse()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("AWGN calibration") {
  Baseband unit = stream_of(ComplexVector::Ones(1000000));
  const NoisyBaseband clean = add_awgn(unit, std::numeric_limits<double>::infinity(), 1);
  CHECK(clean.noise_power == 0.0);
  CHECK(clean.signal.samples == unit.samples);

  AwgnOptions opts;
  opts.signal_power = 1.0;
  const NoisyBaseband noisy = add_awgn(unit, 0.0, 5, opts);
  CHECK(noisy.noise_power == 1.0);
  const double measured = (noisy.signal.samples - unit.samples).squaredNorm() / 1e6;
  CHECK(measured == doctest::Approx(1.0).epsilon(0.005));

  CHECK(noise_power_for_snr(2.0, 10.0, 0.5) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK_THROWS_AS(add_awgn(stream_of(ComplexVector::Zero(10)), 0.0, 1), std::invalid_argument);

  const Baseband n = noise_stream(unit, 0.25, 3);
  CHECK(n.samples.squaredNorm() / 1e6 == doctest::Approx(0.25).epsilon(0.005));
}
