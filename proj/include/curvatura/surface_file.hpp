#pragma once

#include <optional>
#include <string>

#include "curvatura/jet.hpp"

namespace curvatura {

/// Analysis defaults carried by the surface file; CLI flags override them.
struct AnalysisDefaults {
  std::optional<double> s_min, s_max, t_min, t_max;
  std::optional<int> resolution;
  std::optional<double> tol;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> at_s, at_t;
};

struct SurfaceFile {
  SurfaceSpec spec;
  AnalysisDefaults analysis;
};

/// Reads the TOML subset used by surface files: [section] headers, key =
/// value lines with strings, numbers, and single-line arrays. Throws
/// ParseError with a line-based offset.
SurfaceFile load_surface_file(const std::string& path);
SurfaceFile parse_surface_file(const std::string& text,
                               const std::string& origin = "<memory>");

}  // namespace curvatura
