#include "ltvstab/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ltvstab {

SystemSpec JobConfig::system() const {
  try {
    return SystemSpec{parse_expr(a), parse_expr(b), parse_expr(c),
                      parse_expr(d), t0};
  } catch (const ParseError& e) {
    throw ConfigError(std::string("coefficient expression error: ") + e.what());
  }
}

namespace {

std::string trim(std::string s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  std::size_t e = s.find_last_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' needs a number, got '" + s +
                      "'");
  }
}

int to_int(const std::string& key, const std::string& s) {
  double v = to_double(key, s);
  int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("config: key '" + key + "' needs an integer, got '" + s +
                      "'");
  return i;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "on") return true;
  if (s == "false" || s == "0" || s == "off") return false;
  throw ConfigError("config: key '" + key + "' needs true/false, got '" + s +
                    "'");
}

}  // namespace

void apply_tol_override(CriterionConfig& tol, const std::string& spec) {
  std::size_t eq = spec.find('=');
  if (eq == std::string::npos)
    throw ConfigError("tolerance override must look like KEY=VALUE: '" + spec +
                      "'");
  std::string key = trim(spec.substr(0, eq));
  std::string val = trim(spec.substr(eq + 1));

  if (key == "doublings") {
    tol.doublings = to_int(key, val);
    return;
  }
  double* slot = nullptr;
  if (key == "tol_im") slot = &tol.tol_im;
  else if (key == "tol_nonzero") slot = &tol.tol_nonzero;
  else if (key == "tol_trend") slot = &tol.tol_trend;
  else if (key == "lambda") slot = &tol.lambda;
  else if (key == "eps_floor") slot = &tol.eps_floor;
  else if (key == "tol_rh") slot = &tol.tol_rh;
  else if (key == "tol_mono") slot = &tol.tol_mono;
  else if (key == "quad_tol") slot = &tol.quad_tol;
  else if (key == "integral_stab_rel") slot = &tol.integral_stab_rel;
  else if (key == "alpha_min") slot = &tol.alpha_min;
  else if (key == "ode_rtol") slot = &tol.ode_rtol;
  else if (key == "ode_atol") slot = &tol.ode_atol;
  else if (key == "escape_radius") slot = &tol.escape_radius;
  else if (key == "vanish_tol") slot = &tol.vanish_tol;
  else if (key == "bound_cap") slot = &tol.bound_cap;
  else if (key == "slope_tol") slot = &tol.slope_tol;
  if (!slot) throw ConfigError("unknown tolerance key '" + key + "'");
  double v = to_double(key, val);
  if (!(v > 0.0))
    throw ConfigError("tolerance '" + key + "' must be positive");
  *slot = v;
}

JobConfig parse_job_config(const std::string& text) {
  JobConfig jc;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  bool saw_T = false;

  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": malformed section header");
      section = s.substr(1, s.size() - 2);
      if (section != "system" && section != "grid" &&
          section != "tolerances" && section != "output")
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": unknown section [" + section + "]");
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val = unquote(trim(s.substr(eq + 1)));
    if (section.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": key outside of any section");

    if (section == "system") {
      if (key == "a") jc.a = val;
      else if (key == "b") jc.b = val;
      else if (key == "c") jc.c = val;
      else if (key == "d") jc.d = val;
      else if (key == "t0") jc.t0 = to_double(key, val);
      else
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": unknown system key '" + key + "'");
    } else if (section == "grid") {
      if (key == "T") {
        jc.grid.T = to_double(key, val);
        saw_T = true;
      } else if (key == "n") {
        jc.grid.n = to_int(key, val);
      } else if (key == "doublings") {
        jc.tol.doublings = to_int(key, val);
      } else {
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": unknown grid key '" + key + "'");
      }
    } else if (section == "tolerances") {
      apply_tol_override(jc.tol, key + "=" + val);
    } else {  // output
      if (key == "format") {
        if (val != "json" && val != "csv")
          throw ConfigError("output format must be json or csv");
        jc.output.format = val;
      } else if (key == "path") {
        jc.output.path = val;
      } else if (key == "dump_traces") {
        jc.output.dump_traces = to_bool(key, val);
      } else {
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": unknown output key '" + key + "'");
      }
    }
  }

  jc.grid.t0 = jc.t0;
  if (!saw_T) jc.grid.T = jc.t0 + 60.0;
  try {
    jc.grid.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (jc.tol.doublings < 0 || jc.tol.doublings > 6)
    throw ConfigError("config: doublings must be between 0 and 6");
  return jc;
}

JobConfig load_job_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_job_config(ss.str());
}

}  // namespace ltvstab
