#include "cavent/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

namespace cavent::config {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double out;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() ||
      !std::isfinite(out))
    throw UsageError("value for '" + key + "' is not a finite number: '" +
                     value + "'");
  return out;
}

long parse_long(const std::string& key, const std::string& value) {
  long out;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw UsageError("value for '" + key + "' is not an integer: '" + value +
                     "'");
  return out;
}

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

void Config::apply(const std::string& key, const std::string& value) {
  auto num = [&] { return parse_double(key, value); };
  auto count = [&] { return parse_long(key, value); };
  if (key == "g2_over_g1")
    params.g2 = num();
  else if (key == "omega")
    params.omega = num();
  else if (key == "eps") {
    params.eps1 = num();
    params.eps2 = params.eps1;
  } else if (key == "eps1")
    params.eps1 = num();
  else if (key == "eps2")
    params.eps2 = num();
  else if (key == "kappa")
    params.kappa = num();
  else if (key == "gamma")
    params.gamma = num();
  else if (key == "d")
    params.d = num();
  else if (key == "Omega_drive") {
    params.Omega_drive = num();
    omega_drive_set = true;
  } else if (key == "n_max") {
    params.n_max = static_cast<int>(count());
    n_max_set = true;
  } else if (key == "rtol")
    rtol = num();
  else if (key == "atol")
    atol = num();
  else if (key == "t_max")
    t_max = num();
  else if (key == "sample_count")
    sample_count = static_cast<int>(count());
  else if (key == "seed")
    seed = static_cast<unsigned long>(count());
  else if (key == "threads")
    threads = static_cast<int>(count());
  else if (key == "out_dir")
    out_dir = value;
  else if (key == "r_min")
    r_min = num();
  else if (key == "r_max")
    r_max = num();
  else if (key == "r_step")
    r_step = num();
  else if (key == "d_min")
    d_min = num();
  else if (key == "d_max")
    d_max = num();
  else if (key == "d_step")
    d_step = num();
  else
    throw UsageError("unknown setting '" + key + "'");
  overrides.emplace_back(key, value);
}

void Config::apply_pair(const std::string& pair) {
  size_t eq = pair.find('=');
  if (eq == std::string::npos)
    throw UsageError("expected key=value, got '" + pair + "'");
  apply(trim(pair.substr(0, eq)), trim(pair.substr(eq + 1)));
  set_pairs.push_back(pair);
}

void Config::load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file '" + path + "'");
  std::string line;
  while (std::getline(f, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config file line is not key=value: '" + line + "'");
    apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

model::ModelParams Config::resolved_params() const {
  model::ModelParams p = params;
  if (!omega_drive_set) p.Omega_drive = p.omega;
  return p;
}

std::vector<std::pair<std::string, std::string>> Config::resolved_entries()
    const {
  model::ModelParams p = resolved_params();
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("g2_over_g1", fmt(p.ratio()));
  out.emplace_back("omega", fmt(p.omega));
  out.emplace_back("eps1", fmt(p.eps1));
  out.emplace_back("eps2", fmt(p.eps2));
  out.emplace_back("kappa", fmt(p.kappa));
  out.emplace_back("gamma", fmt(p.gamma));
  out.emplace_back("d", fmt(p.d));
  out.emplace_back("Omega_drive", fmt(p.Omega_drive));
  out.emplace_back("n_max", std::to_string(p.n_max));
  out.emplace_back("rtol", fmt(rtol));
  out.emplace_back("atol", fmt(atol));
  out.emplace_back("t_max", fmt(t_max));
  out.emplace_back("sample_count", std::to_string(sample_count));
  out.emplace_back("seed", std::to_string(seed));
  out.emplace_back("threads", std::to_string(threads));
  out.emplace_back("r_min", fmt(r_min));
  out.emplace_back("r_max", fmt(r_max));
  out.emplace_back("r_step", fmt(r_step));
  out.emplace_back("d_min", fmt(d_min));
  out.emplace_back("d_max", fmt(d_max));
  out.emplace_back("d_step", fmt(d_step));
  return out;
}

}  // namespace cavent::config
