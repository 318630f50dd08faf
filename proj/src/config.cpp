#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "rtsbs/fusion.hpp"

namespace rtsbs {

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) throw ConfigError("invalid value '" + value + "' for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = lower(value);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("invalid boolean '" + value + "' for " + key);
}

}  // namespace

void apply_setting(PipelineConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = lower(trim(raw_key));
  const std::string value = trim(raw_value);
  if (key == "mode") {
    c.mode = parse_fusion_mode(lower(value));
  } else if (key == "tau_bg") {
    c.semantic.tau_bg = parse_number<double>(key, value);
  } else if (key == "tau_fg") {
    c.semantic.tau_fg = parse_number<double>(key, value);
  } else if (key == "tau_star_bg") {
    c.change.tau_star_bg = parse_number<int>(key, value);
  } else if (key == "tau_star_fg") {
    c.change.tau_star_fg = parse_number<int>(key, value);
  } else if (key == "x") {
    c.x = parse_number<int>(key, value);
    if (c.x < 1) throw ConfigError("X must be >= 1");
  } else if (key == "schedule") {
    const std::string v = lower(value);
    if (v == "subsample") {
      c.schedule = ScheduleKind::Subsample;
    } else if (v == "never") {
      c.schedule = ScheduleKind::Never;
    } else if (v == "mask") {
      c.schedule = ScheduleKind::Mask;
    } else {
      throw ConfigError("schedule must be subsample, never or mask");
    }
  } else if (key == "avail_dir") {
    c.availability_dir = value;
  } else if (key == "feedback") {
    c.feedback = parse_bool(key, value);
  } else if (key == "semantic_feedback") {
    c.semantic_feedback = parse_bool(key, value);
  } else if (key == "phi_s") {
    c.phi_s = parse_number<int>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "n") {
    c.vibe.num_samples = parse_number<int>(key, value);
  } else if (key == "r") {
    c.vibe.match_radius = parse_number<int>(key, value);
  } else if (key == "min_matches") {
    c.vibe.min_matches = parse_number<int>(key, value);
  } else if (key == "phi") {
    c.vibe.subsample = parse_number<int>(key, value);
  } else if (key == "metric") {
    const std::string v = lower(value);
    if (v == "l1") {
      c.vibe.metric = ColorMetric::L1;
    } else if (v == "l2") {
      c.vibe.metric = ColorMetric::L2;
    } else {
      throw ConfigError("metric must be l1 or l2");
    }
  } else if (key == "post_filter") {
    c.post_filter = parse_bool(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + raw_key + "'");
  }
}

void read_config(std::istream& in, PipelineConfig& config) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  read_config(in, base);
  return base;
}

void write_config(std::ostream& out, const PipelineConfig& c) {
  // Shortest text that reads back to the same double.
  auto fmt = [](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  out << "mode = " << to_string(c.mode) << '\n';
  out << "tau_bg = " << fmt(c.semantic.tau_bg) << '\n';
  out << "tau_fg = " << fmt(c.semantic.tau_fg) << '\n';
  out << "tau_star_bg = " << c.change.tau_star_bg << '\n';
  out << "tau_star_fg = " << c.change.tau_star_fg << '\n';
  switch (c.schedule) {
    case ScheduleKind::Subsample: out << "schedule = subsample\n"; break;
    case ScheduleKind::Never: out << "schedule = never\n"; break;
    case ScheduleKind::Mask: out << "schedule = mask\navail_dir = " << c.availability_dir.string() << '\n'; break;
  }
  out << "X = " << c.x << '\n';
  out << "feedback = " << (c.feedback ? "true" : "false") << '\n';
  out << "semantic_feedback = " << (c.semantic_feedback ? "true" : "false") << '\n';
  if (c.phi_s) out << "phi_s = " << *c.phi_s << '\n';
  out << "seed = " << c.seed << '\n';
  out << "N = " << c.vibe.num_samples << '\n';
  out << "R = " << c.vibe.match_radius << '\n';
  out << "min_matches = " << c.vibe.min_matches << '\n';
  out << "phi = " << c.vibe.subsample << '\n';
  out << "metric = " << (c.vibe.metric == ColorMetric::L1 ? "l1" : "l2") << '\n';
  out << "post_filter = " << (c.post_filter ? "true" : "false") << '\n';
}

void save_config(const std::filesystem::path& path, const PipelineConfig& config) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path.string());
  write_config(out, config);
}

}  // namespace rtsbs
