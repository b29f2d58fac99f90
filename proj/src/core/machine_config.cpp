#include <fstream>
#include <sstream>

#include "kpm/perfmodel.hpp"

namespace kpm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_number(const std::string& value, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size())
    fail(Errc::invalid_argument, "line " + std::to_string(line) + ": '" + value + "' is not a number");
  return v;
}

}  // namespace

ModelConfig parse_model_config(const std::string& text) {
  ModelConfig cfg;
  enum class Section { none, profile, arith } section = Section::none;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(Errc::invalid_argument, "line " + std::to_string(line) + ": unterminated section");
      std::istringstream head(s.substr(1, s.size() - 2));
      std::string kind, name;
      head >> kind >> name;
      if (kind == "arith") {
        section = Section::arith;
      } else if (kind == "profile" && !name.empty()) {
        section = Section::profile;
        cfg.profiles.push_back({name, 0.0, 0.0, 0.0, std::nullopt});
      } else {
        fail(Errc::invalid_argument, "line " + std::to_string(line) + ": unknown section '" + s + "'");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(Errc::invalid_argument, "line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const double v = to_number(trim(s.substr(eq + 1)), line);
    if (section == Section::profile) {
      auto& p = cfg.profiles.back();
      if (key == "bandwidth_gbs") p.bandwidth_gbs = v;
      else if (key == "peak_gflops") p.peak_gflops = v;
      else if (key == "llc_mib") p.llc_mib = v;
      else if (key == "llc_gflops") p.llc_gflops = v;
      else fail(Errc::invalid_argument, "line " + std::to_string(line) + ": unknown profile key '" + key + "'");
    } else if (section == Section::arith) {
      if (key == "value_bytes") cfg.arith.value_bytes = v;
      else if (key == "index_bytes") cfg.arith.index_bytes = v;
      else if (key == "flops_add") cfg.arith.flops_add = v;
      else if (key == "flops_mul") cfg.arith.flops_mul = v;
      else fail(Errc::invalid_argument, "line " + std::to_string(line) + ": unknown arith key '" + key + "'");
    } else {
      fail(Errc::invalid_argument, "line " + std::to_string(line) + ": key outside of a section");
    }
  }
  for (const auto& p : cfg.profiles) p.validate();
  cfg.arith.validate();
  return cfg;
}

ModelConfig load_model_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model_config(buf.str());
}

}  // namespace kpm
