#include "subswe/casefile.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace subswe {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v) { return v == "true" || v == "1" || v == "yes" || v == "on"; }

}  // namespace

CaseFileConfig parse_case_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("case file: cannot open " + path);
  }
  CaseFileConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("case file: expected key = value at line " + std::to_string(lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (section == "case" || section.empty()) {
      if (key == "name") cfg.case_name = value;
      else if (key == "order") cfg.order = std::stoi(value);
      else if (key == "nsg") cfg.n_sg = std::stoi(value);
      else if (key == "cfl") cfg.cfl = std::stod(value);
      else if (key == "dt") cfg.dt = std::stod(value);
      else if (key == "tend") cfg.t_end = std::stod(value);
      else throw std::runtime_error("case file: unknown key '" + key + "' in [case]");
    } else if (section == "mesh") {
      if (key == "file") cfg.mesh_file = value;
      else if (key == "edge") cfg.edge = std::stod(value);
      else throw std::runtime_error("case file: unknown key '" + key + "' in [mesh]");
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = value;
      else if (key == "vtk") cfg.vtk = parse_bool(value);
      else if (key == "csv") cfg.csv = parse_bool(value);
      else throw std::runtime_error("case file: unknown key '" + key + "' in [output]");
    } else if (section == "probes") {
      if (key == "point") {
        std::istringstream ps(value);
        double x, y;
        char comma;
        if (!(ps >> x >> comma >> y) || comma != ',') {
          throw std::runtime_error("case file: bad probe point at line " + std::to_string(lineno));
        }
        cfg.probes.push_back({x, y});
      } else {
        throw std::runtime_error("case file: unknown key '" + key + "' in [probes]");
      }
    } else if (section == "thacker") {
      if (key == "a") cfg.thacker.a = std::stod(value);
      else if (key == "b0") cfg.thacker.b0 = std::stod(value);
      else if (key == "r0") cfg.thacker.r0 = std::stod(value);
      else throw std::runtime_error("case file: unknown key '" + key + "' in [thacker]");
    } else {
      throw std::runtime_error("case file: unknown section [" + section + "]");
    }
  }
  if (cfg.case_name.empty()) {
    throw std::runtime_error("case file: missing 'name' in [case]");
  }
  return cfg;
}

Case make_named_case(const std::string& name, const CaseFileConfig& cfg) {
  Case c;
  if (name == "lake_at_rest") {
    c = case_lake_at_rest(cfg.edge > 0 ? cfg.edge : 1.0 / 32);
  } else if (name == "small_perturbation") {
    c = case_small_perturbation(cfg.edge > 0 ? cfg.edge : 1.0 / 32);
  } else if (name == "macdonald") {
    c = case_macdonald(cfg.edge > 0 ? cfg.edge : 50.0, 4);
  } else if (name == "thacker") {
    c = case_thacker(cfg.thacker, cfg.edge > 0 ? cfg.edge : 0.1);
  } else if (name == "floodplain") {
    c = case_floodplain(cfg.mesh_file, cfg.edge > 0 ? cfg.edge : 50.0);
  } else {
    throw std::runtime_error("unknown case '" + name + "'");
  }
  if (!cfg.mesh_file.empty()) c.mesh_file = cfg.mesh_file;
  if (cfg.t_end >= 0) c.t_end = cfg.t_end;
  if (cfg.dt > 0) c.fixed_dt = cfg.dt;
  if (!cfg.probes.empty()) c.probes = cfg.probes;
  return c;
}

}  // namespace subswe
