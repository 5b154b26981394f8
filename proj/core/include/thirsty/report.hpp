#pragma once

#include <cstddef>
#include <string>
#include <vector>

/// Run manifest support for emitted reports: the engine identity plus the
/// exact command and SHA-256 digests of every input file, so a report can be
/// tied back to the bytes that produced it.

namespace thirsty {

inline constexpr const char* engine_name = "thirsty";
inline constexpr const char* engine_version = "0.1.0";

struct FileDigest {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string command;
  std::vector<std::string> args;
  std::vector<FileDigest> inputs;

  /// Digests the file and records it under the path as given, so repeated
  /// identical invocations produce identical manifests.
  void add_input(const std::string& path);
};

std::string sha256_hex(const unsigned char* data, std::size_t len);
std::string sha256_hex(const std::string& bytes);

/// Streaming digest of a file's bytes. Throws IoError when unreadable.
std::string sha256_file(const std::string& path);

} // namespace thirsty
