#include "kernelcat/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace krn::cli {

namespace {

namespace pt = boost::property_tree;

const std::vector<std::pair<Experiment, std::string>> kExperiments = {
    {Experiment::LevyUp, "levy-up"},
    {Experiment::LevyDown, "levy-down"},
    {Experiment::LeviKernel, "levi-kernel"},
    {Experiment::LeviHilbert, "levi-hilbert"},
    {Experiment::NoncauchyL1, "noncauchy-l1"},
    {Experiment::BanachCounterexample, "banach-counterexample"},
    {Experiment::GaloisAudit, "galois-audit"},
    {Experiment::HomeoAudit, "homeo-audit"},
};

const std::vector<std::string> kTopKeys = {"experiment", "mode", "seed", "tolerance", "horizon", "norm", "direction"};
const std::vector<std::string> kSizeKeys = {"K", "N", "d", "size", "trials"};
const std::vector<std::string> kOutputKeys = {"dir", "file"};
const std::vector<std::string> kSections = {"sizes", "output"};

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string hint(const std::string& word, const std::vector<std::string>& candidates) {
  const auto close = suggestions(word, candidates);
  std::string out;
  for (const auto& c : close) out += (out.empty() ? "" : ", ") + c;
  return close.size() == candidates.size() ? " (expected one of: " + out + ")" : " (did you mean " + out + "?)";
}

// Line of every "section.key" in the text; property_tree drops positions.
std::map<std::string, std::size_t> key_lines(const std::string& text) {
  std::map<std::string, std::size_t> lines;
  std::istringstream in(text);
  std::string line, section;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == ';') continue;
    if (line[first] == '[') {
      const auto close = line.find(']', first);
      section = line.substr(first + 1, close == std::string::npos ? std::string::npos : close - first - 1);
      lines.emplace(section, number);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(first, eq - first);
    key.erase(key.find_last_not_of(" \t") + 1);
    lines.emplace(section.empty() ? key : section + "." + key, number);
  }
  return lines;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::map<std::string, std::size_t> lines) : tree_(tree), lines_(std::move(lines)) {}

  std::vector<Diagnostic> diagnostics;

  void error(const std::string& field, const std::string& message) {
    const auto it = lines_.find(field);
    diagnostics.push_back({field, it == lines_.end() ? 0 : it->second, message});
  }

  std::optional<std::string> get(const std::string& path) const {
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
    return std::nullopt;
  }

  void count(const std::string& path, std::size_t& out, std::size_t lo, std::size_t hi) {
    const auto text = get(path);
    if (!text) return;
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(*text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text->size()) return error(path, "expected an integer, got '" + *text + "'");
    if (v < static_cast<long long>(lo) || v > static_cast<long long>(hi)) {
      return error(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + *text);
    }
    out = static_cast<std::size_t>(v);
  }

 private:
  const pt::ptree& tree_;
  std::map<std::string, std::size_t> lines_;
};

bool hilbert_experiment(Experiment e) {
  return e == Experiment::LeviHilbert || e == Experiment::BanachCounterexample;
}

std::vector<Diagnostic> read_config(std::istream& in, ExperimentConfig& cfg) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  pt::ptree tree;
  try {
    std::istringstream stream(text);
    pt::read_ini(stream, tree);
  } catch (const pt::ini_parser_error& e) {
    return {{"", e.line(), e.message()}};
  }
  Reader r(tree, key_lines(text));

  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      if (std::find(kTopKeys.begin(), kTopKeys.end(), key) == kTopKeys.end()) {
        r.error(key, "unknown key" + hint(key, kTopKeys));
      }
      continue;
    }
    const std::vector<std::string>* keys = key == "sizes" ? &kSizeKeys : key == "output" ? &kOutputKeys : nullptr;
    if (!keys) {
      r.error(key, "unknown section" + hint(key, kSections));
      continue;
    }
    for (const auto& [sub, leaf] : node) {
      if (std::find(keys->begin(), keys->end(), sub) == keys->end()) {
        r.error(key + "." + sub, "unknown key" + hint(sub, *keys));
      }
    }
  }

  const auto name = r.get("experiment");
  if (!name) {
    r.error("experiment", "missing required key");
    return r.diagnostics;
  }
  try {
    cfg = demo_config(parse_experiment(*name));
  } catch (const Error&) {
    r.error("experiment", "unknown experiment '" + *name + "'" + hint(*name, experiment_names()));
    return r.diagnostics;
  }

  if (auto m = r.get("mode")) {
    if (*m == "float") {
      cfg.mode = Mode::Float;
    } else if (*m == "rational") {
      cfg.mode = Mode::Rational;
    } else {
      r.error("mode", "unknown mode '" + *m + "'" + hint(*m, {"float", "rational"}));
    }
  }
  if (cfg.mode == Mode::Rational && hilbert_experiment(cfg.experiment)) {
    r.error("mode", to_string(cfg.experiment) + " needs square roots and runs in float mode only");
  }
  if (auto s = r.get("seed")) {
    std::size_t used = 0;
    try {
      const bool hex = s->size() > 2 && (*s)[0] == '0' && ((*s)[1] == 'x' || (*s)[1] == 'X');
      if (!s->empty() && s->front() != '-' && s->front() != '+') cfg.seed = std::stoull(*s, &used, hex ? 16 : 10);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s->size()) r.error("seed", "expected an unsigned 64-bit integer, got '" + *s + "'");
  }
  if (auto t = r.get("tolerance")) {
    std::size_t used = 0;
    double v = -1;
    try {
      v = std::stod(*t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t->size()) {
      r.error("tolerance", "expected a number, got '" + *t + "'");
    } else if (!(v >= 0)) {
      r.error("tolerance", "must be nonnegative, got " + *t);
    } else {
      cfg.tolerance = v;
    }
  }
  if (auto n = r.get("norm")) {
    try {
      cfg.exponent = parse_exponent(*n);
    } catch (const Error&) {
      r.error("norm", "expected a positive integer or 'inf', got '" + *n + "'");
    }
  }
  if (auto dir = r.get("direction")) {
    if (*dir != "increasing" && *dir != "decreasing") {
      r.error("direction", "unknown direction '" + *dir + "'" + hint(*dir, {"increasing", "decreasing"}));
    } else if (cfg.experiment != Experiment::LeviKernel && cfg.experiment != Experiment::LeviHilbert) {
      r.error("direction", "only levi-kernel and levi-hilbert take a direction");
    } else {
      cfg.direction = *dir;
    }
  }
  r.count("horizon", cfg.horizon, 1, 100000);

  switch (cfg.experiment) {
    case Experiment::LevyUp: r.count("sizes.K", cfg.K, 1, 20); break;
    case Experiment::NoncauchyL1: r.count("sizes.K", cfg.K, 2, 24); break;
    case Experiment::BanachCounterexample: r.count("sizes.N", cfg.N, 2, 4096); break;
    case Experiment::GaloisAudit: r.count("sizes.size", cfg.size, 1, 8); break;
    case Experiment::HomeoAudit: r.count("sizes.size", cfg.size, 2, 8); break;
    case Experiment::LeviHilbert: r.count("sizes.d", cfg.d, 1, 256); break;
    default: r.count("sizes.size", cfg.size, 1, 512); break;
  }
  r.count("sizes.trials", cfg.trials, 1, 100000);
  if (auto dir = r.get("output.dir")) cfg.dir = *dir;
  if (auto file = r.get("output.file")) {
    if (file->empty() || file->find('/') != std::string::npos) {
      r.error("output.file", "expected a plain file name, got '" + *file + "'");
    } else {
      cfg.file = *file;
    }
  }
  if (cfg.mode == Mode::Rational) cfg.tolerance = 0.0;
  return r.diagnostics;
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [k, name] : kExperiments)
    if (k == e) return name;
  return "unknown";
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& entry : kExperiments) out.push_back(entry.second);
    return out;
  }();
  return names;
}

Experiment parse_experiment(const std::string& name) {
  for (const auto& [k, n] : kExperiments)
    if (n == name) return k;
  throw Error(ErrorCode::ConfigError, "unknown experiment '" + name + "'" + hint(name, experiment_names()));
}

std::string to_string(Mode m) { return m == Mode::Float ? "float" : "rational"; }

std::filesystem::path ExperimentConfig::output_path() const {
  const char* env = std::getenv("KERNELCAT_OUTPUT_DIR");
  const std::filesystem::path base = env && *env ? std::filesystem::path(env) : dir;
  return base / (file.empty() ? to_string(experiment) + ".csv" : file);
}

std::string format(const Diagnostic& d) {
  std::string out;
  if (d.line) out += "line " + std::to_string(d.line) + ": ";
  if (!d.field.empty()) out += d.field + ": ";
  return out + d.message;
}

std::vector<std::string> suggestions(const std::string& word, const std::vector<std::string>& candidates) {
  std::vector<std::pair<std::size_t, std::string>> scored;
  const std::size_t limit = std::max<std::size_t>(1, (word.size() + 1) / 3);
  for (const auto& c : candidates) {
    const std::size_t dist = edit_distance(word, c);
    const bool prefix = !word.empty() && c.rfind(word, 0) == 0;
    if (dist <= limit || prefix) scored.emplace_back(prefix ? 0 : dist, c);
  }
  if (scored.empty()) return candidates;
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (const auto& s : scored) out.push_back(s.second);
  return out;
}

std::vector<Diagnostic> validate_config(std::istream& in) {
  ExperimentConfig cfg;
  return read_config(in, cfg);
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  const auto diags = read_config(in, cfg);
  if (diags.empty()) return cfg;
  std::string message;
  for (const auto& d : diags) message += (message.empty() ? "" : "\n") + format(d);
  const bool syntax = diags.size() == 1 && diags.front().field.empty();
  throw Error(syntax ? ErrorCode::ParseError : ErrorCode::ConfigError, message);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOError, "cannot read " + path.string());
  return parse_config(in);
}

ExperimentConfig demo_config(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  switch (e) {
    case Experiment::LevyUp:
      cfg.K = 10;
      break;
    case Experiment::LevyDown:
      cfg.size = 64;
      cfg.horizon = 10;
      break;
    case Experiment::LeviKernel:
      cfg.size = 32;
      cfg.horizon = 12;
      break;
    case Experiment::LeviHilbert:
      cfg.mode = Mode::Float;
      cfg.d = 8;
      cfg.trials = 64;
      break;
    case Experiment::NoncauchyL1:
      cfg.K = 12;
      break;
    case Experiment::BanachCounterexample:
      cfg.mode = Mode::Float;
      cfg.N = 16;
      break;
    case Experiment::GaloisAudit:
      cfg.size = 5;
      cfg.trials = 1;
      break;
    case Experiment::HomeoAudit:
      cfg.mode = Mode::Float;
      cfg.size = 6;
      cfg.trials = 20;
      cfg.horizon = 2000;
      cfg.tolerance = 1e-3;
      break;
  }
  if (cfg.mode == Mode::Rational) cfg.tolerance = 0.0;
  return cfg;
}

}  // namespace krn::cli
