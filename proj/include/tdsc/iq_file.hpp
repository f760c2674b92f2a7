// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tdsc/types.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace tdsc::io {

// IQ capture: interleaved little-endian float32 pairs (I then Q), no header.
void write_iq(const std::filesystem::path& path, const ComplexVector& samples);
ComplexVector read_iq(const std::filesystem::path& path);

// Sidecar metadata: UTF-8 `key=value` lines, written in key order.
using Metadata = std::map<std::string, std::string>;
void write_metadata(const std::filesystem::path& path, const Metadata& meta);
Metadata read_metadata(const std::filesystem::path& path);

// Symbol timing sidecar: one decimal sample offset per line.
void write_symbol_starts(const std::filesystem::path& path, const IndexList& starts);
IndexList read_symbol_starts(const std::filesystem::path& path);

/// Sidecar naming used by the CLI: capture.iq -> capture.iq.meta, capture.iq.starts
std::filesystem::path metadata_path(const std::filesystem::path& iq_path);
std::filesystem::path starts_path(const std::filesystem::path& iq_path);

}  // namespace tdsc::io
