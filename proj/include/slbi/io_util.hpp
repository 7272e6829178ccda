#pragma once

#include <string>

namespace slbi {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

/// FNV-1a 64-bit hex digest of a file's bytes (for output manifests).
std::string file_digest(const std::string& path);

}  // namespace slbi
