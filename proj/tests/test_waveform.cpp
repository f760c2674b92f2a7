// SPDX-License-Identifier: Apache-2.0

#include "tdsc/fft.hpp"
#include "tdsc/iq_file.hpp"
#include "tdsc/waveform.hpp"

#include <doctest.h>

#include <array>
#include <filesystem>
#include <fstream>

using namespace tdsc;

namespace {

ComplexVector naive_idft(const ComplexVector& X) {
  const auto n = X.size();
  ComplexVector x = ComplexVector::Zero(n);
  for (Eigen::Index t = 0; t < n; ++t)
    for (Eigen::Index k = 0; k < n; ++k)
      x(t) += X(k) * std::polar(1.0, 2.0 * kPi * static_cast<double>(k * t) / static_cast<double>(n));
  return x / static_cast<double>(n);
}

OfdmConfig small_config(std::size_t n, std::size_t cp, double rolloff, std::size_t used) {
  return make_ofdm_config(n, static_cast<double>(cp) / static_cast<double>(n), 8.4e6, rolloff, used);
}

double max_abs_diff(const ComplexVector& a, const ComplexVector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("16-QAM golden table") {
  // nibble -> (I, Q) before the 1/sqrt(10) scale; I from the two leading bits.
  const std::array<std::pair<int, int>, 16> table = {{{1, 1},
                                                      {1, 3},
                                                      {1, -1},
                                                      {1, -3},
                                                      {3, 1},
                                                      {3, 3},
                                                      {3, -1},
                                                      {3, -3},
                                                      {-1, 1},
                                                      {-1, 3},
                                                      {-1, -1},
                                                      {-1, -3},
                                                      {-3, 1},
                                                      {-3, 3},
                                                      {-3, -1},
                                                      {-3, -3}}};
  const double s = 1.0 / std::sqrt(10.0);
  double power = 0.0;
  for (unsigned nib = 0; nib < 16; ++nib) {
    const Complex z = qam16_point(nib);
    CHECK(z.real() == doctest::Approx(table[nib].first * s).epsilon(1e-15));
    CHECK(z.imag() == doctest::Approx(table[nib].second * s).epsilon(1e-15));
    power += std::norm(z);
  }
  CHECK(power / 16.0 == doctest::Approx(1.0).epsilon(1e-15));

  const std::vector<std::uint8_t> zero = {0, 0, 0, 0};
  const ComplexVector z = map_qam16(zero);
  CHECK(std::abs(z(0) - Complex(s, s)) < 1e-15);
  const std::vector<std::uint8_t> five = {0, 1, 0, 1, 1};
  CHECK_THROWS_AS(map_qam16(five), std::invalid_argument);
  const std::vector<std::uint8_t> bad = {0, 2, 0, 1};
  CHECK_THROWS_AS(map_qam16(bad), std::invalid_argument);
}

TEST_CASE("ofdm_modulate is the 1/N inverse DFT") {
  const OfdmConfig cfg = small_config(64, 16, 0.0, 48);
  ComplexVector dc = ComplexVector::Zero(64);
  dc(0) = 64.0;
  CHECK(max_abs_diff(ofdm_modulate(cfg, dc), ComplexVector::Ones(64)) < 1e-12);
  CHECK(ofdm_modulate(cfg, ComplexVector::Zero(64)).isZero(0.0));

  ComplexVector X = ComplexVector::Random(64);
  const ComplexVector x = ofdm_modulate(cfg, X);
  CHECK(max_abs_diff(x, naive_idft(X)) < 1e-12);
  CHECK(max_abs_diff(dsp::fft(x), X) / X.norm() < 1e-9);
  CHECK_THROWS_AS(ofdm_modulate(cfg, ComplexVector::Zero(32)), std::invalid_argument);

  const ComplexVector big = ComplexVector::Random(1536);
  CHECK(max_abs_diff(dsp::fft(dsp::ifft(big)), big) / big.norm() < 1e-9);
}

TEST_CASE("cyclic prefix and edge taper") {
  const OfdmConfig plain = small_config(8, 2, 0.0, 6);
  ComplexVector in(8);
  for (int i = 0; i < 8; ++i) in(i) = Complex(i, -i);
  const ComplexVector out = add_cp_and_window(plain, in);
  REQUIRE(out.size() == 10);
  CHECK(out.head(2) == in.tail(2));
  CHECK(out.segment(2, 8) == in);

  // Taper: W = floor(0.1 * 64) = 6 inside a 16-sample CP.
  const OfdmConfig tapered = small_config(64, 16, 0.1, 48);
  const Complex c(0.3, -0.7);
  const ComplexVector ext = add_cp_and_window(tapered, ComplexVector::Constant(64, c));
  REQUIRE(ext.size() == 16 + 64 + 6);
  for (Eigen::Index i = 6; i < 80; ++i) CHECK(ext(i) == c);
  for (Eigen::Index i = 0; i < 6; ++i) CHECK(std::abs(ext(i) + ext(80 + i) - c) < 1e-15);

  const RealVector ramp = raised_cosine_ramp(102);
  for (Eigen::Index i = 0; i < 102; ++i) CHECK(ramp(i) + ramp(101 - i) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(small_config(64, 4, 0.1, 48), std::invalid_argument);  // rolloff > L/N
}

TEST_CASE("frame timing") {
  CHECK(gap_samples(107.225e-6, 8.4e6) == 901);
  CHECK(gap_samples(60e-6, 8.4e6) == 504);

  const OfdmConfig cfg = make_ofdm_config(1024, 0.25, 8.4e6, 0.1, 840);
  const PilotPattern p = wimax_pattern(1024);
  const Baseband a = build_frame(cfg, FrameConfig{}, p, 7);
  const Baseband b = build_frame(cfg, FrameConfig{}, p, 7);
  const Baseband c = build_frame(cfg, FrameConfig{}, p, 8);
  CHECK(a.samples == b.samples);
  CHECK(a.samples != c.samples);
  REQUIRE(a.symbol_starts.size() == 47);
  CHECK(a.size() == 47 * 1280 + 901 + 504);
  for (std::size_t i = 1; i < 12; ++i) CHECK(a.symbol_starts[i] - a.symbol_starts[i - 1] == 1280);
  CHECK(a.symbol_starts[12] - a.symbol_starts[11] == 1280 + 901);
  for (std::size_t i = 13; i < 47; ++i) CHECK(a.symbol_starts[i] - a.symbol_starts[i - 1] == 1280);
  CHECK(a.downlink_starts().size() == 12);
  CHECK_NOTHROW(a.validate());
}

TEST_CASE("pilots survive modulation exactly") {
  const OfdmConfig cfg = make_ofdm_config(1024, 0.25, 8.4e6, 0.0, 840);
  const PilotPattern p = wimax_pattern(1024);
  const Baseband bb = build_burst(cfg, p, 6, 3);
  std::vector<ComplexVector> X;
  for (std::size_t l = 0; l < 6; ++l)
    X.push_back(dsp::fft(bb.samples.segment(static_cast<Eigen::Index>(l * 1280 + 256), 1024)));
  for (std::size_t l = 0; l < 6; ++l) {
    for (std::size_t k : pilots_for_symbol(p, l)) {
      const Complex expected = p.pilot_amplitude() * p.value(k);
      CHECK(std::abs(X[l](static_cast<Eigen::Index>(k)) - expected) < 1e-9 * std::abs(expected));
    }
    if (l >= 2)
      for (std::size_t k : pilots_for_symbol(p, l))
        CHECK(std::abs(X[l](static_cast<Eigen::Index>(k)) - X[l - 2](static_cast<Eigen::Index>(k))) < 1e-9);
  }
  // Guards and DC carry nothing.
  const auto occupied = centered_occupancy(1024, 840);
  for (std::size_t k = 0; k < 1024; ++k)
    if (!occupied[k]) CHECK(std::abs(X[0](static_cast<Eigen::Index>(k))) < 1e-9);
}

TEST_CASE("build_freq_symbol") {
  const OfdmConfig cfg = make_ofdm_config(24, 0.25, 8.4e6, 0.0, 22);
  const PilotPattern p = restrict_to(lte_pattern(24, 7), centered_occupancy(24, 22));
  const std::size_t n1 = data_subcarriers(cfg, p, 1).size();
  CHECK(n1 == 22);  // no RS in slot symbol 1
  const ComplexVector data = ComplexVector::Constant(static_cast<Eigen::Index>(n1), Complex(1, 1));
  const ComplexVector X1 = build_freq_symbol(cfg, p, 1, data);
  CHECK(X1(0) == Complex(0, 0));
  CHECK((X1.array() != Complex(0, 0)).count() == 22);

  const std::size_t n0 = data_subcarriers(cfg, p, 0).size();
  const ComplexVector X0 = build_freq_symbol(cfg, p.with_amplitude(0.0), 0, ComplexVector::Ones(static_cast<Eigen::Index>(n0)));
  for (std::size_t k : pilots_for_symbol(p, 0)) CHECK(X0(static_cast<Eigen::Index>(k)) == Complex(0, 0));
  CHECK_THROWS_AS(build_freq_symbol(cfg, p, 0, ComplexVector::Ones(3)), std::invalid_argument);
}

TEST_CASE("symbol power bookkeeping") {
  const OfdmConfig cfg = make_ofdm_config(1024, 0.25, 8.4e6, 0.1, 840);
  const PilotPattern p = wimax_pattern(1024);
  const double nominal = nominal_symbol_power(cfg, p);
  // 780 data + 60 pilots at rho^2 per symbol, over N^2.
  CHECK(nominal == doctest::Approx((780.0 + 60.0 * std::pow(10.0, 0.25)) / (1024.0 * 1024.0)).epsilon(1e-14));
  const double measured = mean_symbol_power(build_burst(cfg, p, 200, 1));
  CHECK(measured == doctest::Approx(nominal).epsilon(0.02));
  CHECK(mean_symbol_power(build_burst(cfg, p, 200, 1)) == measured);
}

TEST_CASE("IQ file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "tdsc_iq_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "x.iq";
  ComplexVector x(3);
  x << Complex(1.0, -2.0), Complex(0.5, 0.25), Complex(-3.0, 1e-3);
  io::write_iq(path, x);
  CHECK(std::filesystem::file_size(path) == 24);
  std::ifstream raw(path, std::ios::binary);
  unsigned char head[4];
  raw.read(reinterpret_cast<char*>(head), 4);
  CHECK(head[0] == 0x00);
  CHECK(head[1] == 0x00);
  CHECK(head[2] == 0x80);
  CHECK(head[3] == 0x3f);  // 1.0f little-endian
  const ComplexVector y = io::read_iq(path);
  REQUIRE(y.size() == 3);
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK(y(i).real() == static_cast<double>(static_cast<float>(x(i).real())));
    CHECK(y(i).imag() == static_cast<double>(static_cast<float>(x(i).imag())));
  }

  io::write_metadata(io::metadata_path(path), {{"fft_size", "1024"}, {"standard", "wimax"}});
  const auto meta = io::read_metadata(io::metadata_path(path));
  CHECK(meta.at("fft_size") == "1024");
  CHECK(meta.at("standard") == "wimax");
  io::write_symbol_starts(io::starts_path(path), {0, 1280, 2560});
  CHECK(io::read_symbol_starts(io::starts_path(path)) == IndexList{0, 1280, 2560});
  CHECK_THROWS_AS(io::read_iq(dir / "missing.iq"), std::runtime_error);
  std::filesystem::remove_all(dir);
}
