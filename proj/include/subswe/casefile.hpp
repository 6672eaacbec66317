#pragma once

#include <map>
#include <string>
#include <vector>

#include "subswe/geom.hpp"
#include "subswe/harness.hpp"

namespace subswe {

/// Parsed flat key/value case file; -1 (or empty) marks "not set".
struct CaseFileConfig {
  std::string case_name;
  int order = -1;  // scheme order 1 or 2 (polynomial degree + 1)
  int n_sg = -1;
  double cfl = -1.0;
  double dt = -1.0;
  double t_end = -1.0;
  double edge = -1.0;
  std::string mesh_file;
  std::string out_dir;
  bool vtk = false;
  bool csv = false;
  std::vector<Vec2> probes;
  ThackerParams thacker;
};

/// Grammar: `[section]` headers, `key = value` lines, `#` comments; SI units.
/// Sections: [case], [mesh], [output], [probes], [thacker].
CaseFileConfig parse_case_file(const std::string& path);

/// Builds the named benchmark, applying file/CLI overrides where they apply.
Case make_named_case(const std::string& name, const CaseFileConfig& cfg);

}  // namespace subswe
