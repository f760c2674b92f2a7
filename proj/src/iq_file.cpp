// SPDX-License-Identifier: Apache-2.0

#include "tdsc/iq_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tdsc::io {
namespace {

std::runtime_error io_error(const std::string& what, const std::filesystem::path& path) {
  return std::runtime_error(what + ": " + path.string());
}

std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap32(v);
  return v;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

void write_iq(const std::filesystem::path& path, const ComplexVector& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open IQ file for writing", path);
  std::vector<char> buffer(static_cast<std::size_t>(samples.size()) * 8);
  for (Eigen::Index n = 0; n < samples.size(); ++n) {
    const std::uint32_t re = to_little_endian(std::bit_cast<std::uint32_t>(static_cast<float>(samples(n).real())));
    const std::uint32_t im = to_little_endian(std::bit_cast<std::uint32_t>(static_cast<float>(samples(n).imag())));
    std::memcpy(buffer.data() + 8 * n, &re, 4);
    std::memcpy(buffer.data() + 8 * n + 4, &im, 4);
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw io_error("failed writing IQ file", path);
}

ComplexVector read_iq(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open IQ file", path);
  std::vector<char> buffer((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buffer.size() % 8 != 0) throw io_error("IQ file size is not a multiple of 8 bytes", path);
  ComplexVector out(static_cast<Eigen::Index>(buffer.size() / 8));
  for (Eigen::Index n = 0; n < out.size(); ++n) {
    std::uint32_t re, im;
    std::memcpy(&re, buffer.data() + 8 * n, 4);
    std::memcpy(&im, buffer.data() + 8 * n + 4, 4);
    out(n) = Complex(std::bit_cast<float>(to_little_endian(re)), std::bit_cast<float>(to_little_endian(im)));
  }
  return out;
}

void write_metadata(const std::filesystem::path& path, const Metadata& meta) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open metadata file for writing", path);
  for (const auto& [key, value] : meta) out << key << '=' << value << '\n';
  if (!out) throw io_error("failed writing metadata file", path);
}

Metadata read_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open metadata file", path);
  Metadata meta;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw io_error("metadata line " + std::to_string(line_no) + " is not key=value", path);
    meta[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return meta;
}

void write_symbol_starts(const std::filesystem::path& path, const IndexList& starts) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open symbol-starts file for writing", path);
  for (std::size_t s : starts) out << s << '\n';
  if (!out) throw io_error("failed writing symbol-starts file", path);
}

IndexList read_symbol_starts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open symbol-starts file", path);
  IndexList starts;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(line, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != line.size() || line[0] == '-') throw io_error("bad symbol offset '" + line + "'", path);
    starts.push_back(static_cast<std::size_t>(v));
  }
  return starts;
}

std::filesystem::path metadata_path(const std::filesystem::path& iq_path) {
  return std::filesystem::path(iq_path.string() + ".meta");
}

std::filesystem::path starts_path(const std::filesystem::path& iq_path) {
  return std::filesystem::path(iq_path.string() + ".starts");
}

}  // namespace tdsc::io
