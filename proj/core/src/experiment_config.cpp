#include "qdyn/experiment_config.hpp"

#include "qdyn/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace qdyn {

namespace {

struct NameEntry {
  Experiment kind;
  std::string_view name;
  std::string_view summary;
};

constexpr std::array<NameEntry, 6> kNames = {{
    {Experiment::TwoSpin, "two_spin", "closed two-spin Ising magnetization dynamics"},
    {Experiment::IsingDqpt, "ising_dqpt", "long-range transverse Ising quench: magnetization and rate function"},
    {Experiment::CavitySweep, "cavity_sweep", "Jaynes-Cummings-Hubbard / Rabi-Hubbard order parameter and rate function"},
    {Experiment::OpenIsing, "open_ising", "dissipative two-spin Ising via Liouvillian eigen-decomposition"},
    {Experiment::TlsPhoton, "tls_photon", "driven two-level atom in a photon reservoir with steady state"},
    {Experiment::Dephasing, "dephasing", "non-Markovian pure dephasing: rate, coherence and NM measure"},
}};

// Typed access to one JSON object that remembers its path for messages and
// rejects keys nobody asked for.
class Reader {
 public:
  Reader(const nlohmann::json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    seen_.insert(key);
    if (!obj_.contains(key)) {
      if (fallback) return *fallback;
      throw ConfigError(where(key) + " is required");
    }
    const auto& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(where(key) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where(key) + " must be finite");
    return d;
  }

  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
    seen_.insert(key);
    if (!obj_.contains(key)) {
      if (fallback) return *fallback;
      throw ConfigError(where(key) + " is required");
    }
    const auto& v = obj_.at(key);
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 1e9) return static_cast<int>(d);
    }
    throw ConfigError(where(key) + " must be an integer");
  }

  bool boolean(const std::string& key, bool fallback) {
    seen_.insert(key);
    if (!obj_.contains(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + " must be true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, std::optional<std::string> fallback,
                   std::initializer_list<std::string_view> allowed = {}) {
    seen_.insert(key);
    std::string s;
    if (!obj_.contains(key)) {
      if (!fallback) throw ConfigError(where(key) + " is required");
      s = *fallback;
    } else {
      const auto& v = obj_.at(key);
      if (!v.is_string()) throw ConfigError(where(key) + " must be a string");
      s = v.get<std::string>();
    }
    if (allowed.size() > 0 && std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
      std::string list;
      for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
      throw ConfigError(where(key) + " must be one of: " + list);
    }
    return s;
  }

  const nlohmann::json* child(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key) ? &obj_.at(key) : nullptr;
  }

  void ignore(const std::string& key) { seen_.insert(key); }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError(where(key) + " is not a recognised key");
    }
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

 private:
  const nlohmann::json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<double> number_list(const nlohmann::json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + " must be a list of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(where + " must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

TwoSpinParams parse_two_spin(Reader& r) {
  TwoSpinParams p;
  p.coupling = r.number("J", 1.0);
  p.field = r.number("B", 0.1);
  p.initial = r.text("initial", "down_down", {"down_down", "up_up"});
  return p;
}

IsingDqptParams parse_ising(Reader& r) {
  IsingDqptParams p;
  p.model.spins = r.integer("spins", 5);
  p.model.alpha = r.number("alpha", 1.5);
  p.model.field = r.number("B");
  p.model.normalize = r.boolean("normalize", true);
  p.initial = r.text("initial", "right", {"right", "left"});
  if (p.model.spins < 2) throw ConfigError(r.where("spins") + " must be at least 2");
  if (p.model.alpha < 0.0) throw ConfigError(r.where("alpha") + " must be non-negative");
  return p;
}

CavityParams parse_cavity(Reader& r) {
  CavityParams p;
  auto& m = p.model;
  m.cavities = r.integer("cavities", 2);
  m.omega_c = r.number("omega_c", 1.0);
  m.coupling = r.number("g");
  m.hopping = r.number("J");
  m.cutoff = r.integer("cutoff", 2);
  p.log10_detuning_over_g = r.number("log10_detuning_over_g");
  if (const auto* adj = r.child("adjacency")) {
    if (!adj->is_array()) throw ConfigError(r.where("adjacency") + " must be a list of rows");
    for (const auto& row : *adj) {
      std::vector<int> values;
      for (double d : number_list(row, r.where("adjacency"))) values.push_back(static_cast<int>(d));
      m.adjacency.push_back(std::move(values));
    }
  }
  const std::string models = r.text("models", "both", {"both", "jch", "rh"});
  p.run_jch = models != "rh";
  p.run_rh = models != "jch";
  if (m.cavities < 1) throw ConfigError(r.where("cavities") + " must be at least 1");
  if (m.cutoff < 1) throw ConfigError(r.where("cutoff") + " must be at least 1");
  if (!(m.coupling > 0.0)) throw ConfigError(r.where("g") + " must be positive");
  if (!(m.hopping > 0.0)) throw ConfigError(r.where("J") + " must be positive");
  m.omega_a = m.omega_c + m.coupling * std::pow(10.0, p.log10_detuning_over_g);
  try {
    (void)symmetrize_adjacency(m);
  } catch (const Error& e) {
    throw ConfigError(r.where("adjacency") + ": " + e.what());
  }
  return p;
}

OpenIsingParams parse_open_ising(Reader& r) {
  OpenIsingParams p;
  p.coupling = r.number("J", 1.0);
  p.field = r.number("B", 0.1);
  if (const auto* g = r.child("gammas")) p.gammas = number_list(*g, r.where("gammas"));
  p.tol = r.number("tol", kDefaultSpectralTol);
  p.initial = r.text("initial", "down_down", {"down_down", "up_up"});
  if (p.gammas.size() != 2) throw ConfigError(r.where("gammas") + " must hold one rate per spin (2)");
  for (double g : p.gammas) {
    if (!(g >= 0.0)) throw ConfigError(r.where("gammas") + " must be non-negative");
  }
  if (!(p.tol > 0.0)) throw ConfigError(r.where("tol") + " must be positive");
  return p;
}

TlsParams parse_tls(Reader& r) {
  TlsParams p;
  p.rabi = r.number("Omega", 1.0);
  p.gamma0 = r.number("gamma0", 0.2);
  p.photons = r.number("N_ph", 0.0);
  p.tol = r.number("tol", kDefaultSpectralTol);
  p.initial = r.text("initial", "ground", {"ground", "excited"});
  if (!(p.gamma0 >= 0.0)) throw ConfigError(r.where("gamma0") + " must be non-negative");
  if (!(p.photons >= 0.0)) throw ConfigError(r.where("N_ph") + " must be non-negative");
  if (!(p.tol > 0.0)) throw ConfigError(r.where("tol") + " must be positive");
  return p;
}

DephasingParams parse_dephasing(Reader& r) {
  DephasingParams p;
  const auto* sdf = r.child("sdf");
  if (sdf == nullptr) throw ConfigError(r.where("sdf") + " is required");
  Reader s(*sdf, r.where("sdf"));
  const std::string kind = s.text("kind", std::nullopt, {"super_ohmic", "lorentzian"});
  if (kind == "super_ohmic") {
    SuperOhmicExp j;
    j.alpha = s.number("alpha");
    j.s = s.number("s");
    j.omega_c = s.number("omega_c");
    p.bath.sdf = j;
  } else {
    LorentzianLocalized j;
    j.j0 = s.number("J0");
    j.s = s.number("s");
    j.omega0 = s.number("omega0");
    j.width = s.number("Gamma");
    p.bath.sdf = j;
  }
  s.finish();
  p.bath.temperature = r.number("temperature");
  p.bath.omega_max = r.number("omega_max", 0.0);
  p.bath.points_per_period = r.integer("points_per_period", 8);
  p.bath.rel_tol = r.number("rel_tol", 1e-6);
  try {
    (void)DephasingRate(p.bath);
  } catch (const ParameterError& e) {
    throw ConfigError(r.where("sdf") + ": " + e.what());
  }
  return p;
}

ExperimentParams parse_params(Experiment kind, const nlohmann::json& block) {
  Reader r(block, "params");
  ExperimentParams out;
  switch (kind) {
    case Experiment::TwoSpin: out = parse_two_spin(r); break;
    case Experiment::IsingDqpt: out = parse_ising(r); break;
    case Experiment::CavitySweep: out = parse_cavity(r); break;
    case Experiment::OpenIsing: out = parse_open_ising(r); break;
    case Experiment::TlsPhoton: out = parse_tls(r); break;
    case Experiment::Dephasing: out = parse_dephasing(r); break;
  }
  r.finish();
  return out;
}

// Replaces the scalar at a dotted path such as "sdf.alpha".
void substitute(nlohmann::json& block, const std::string& path, double value) {
  nlohmann::json* node = &block;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object() || !node->contains(key)) {
      throw ConfigError("sweep.param: '" + path + "' does not name a parameter in params");
    }
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (!node->is_number()) {
    throw ConfigError("sweep.param: '" + path + "' is not a numeric parameter");
  }
  *node = value;
}

}  // namespace

std::string_view experiment_name(Experiment e) noexcept {
  for (const auto& n : kNames) {
    if (n.kind == e) return n.name;
  }
  return "unknown";
}

std::string_view experiment_summary(Experiment e) noexcept {
  for (const auto& n : kNames) {
    if (n.kind == e) return n.summary;
  }
  return "";
}

Experiment experiment_from_name(std::string_view name) {
  for (const auto& n : kNames) {
    if (n.name == name) return n.kind;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
  Reader top(doc, "config");
  ExperimentConfig cfg;
  cfg.source = doc;
  cfg.experiment = experiment_from_name(top.text("experiment", std::nullopt));
  cfg.description = top.text("description", "");
  cfg.threads = top.integer("threads", 1);
  if (cfg.threads < 1) throw ConfigError("config.threads must be a positive integer");
  cfg.output_dir = top.text("output_dir", "runs/" + std::string(experiment_name(cfg.experiment)));
  const int every = top.integer("record_every", 1);
  if (every < 1) throw ConfigError("config.record_every must be a positive integer");
  cfg.record_every = static_cast<std::size_t>(every);
  cfg.kinks.threshold = top.number("kink_threshold", 10.0);
  if (!(cfg.kinks.threshold > 0.0)) throw ConfigError("config.kink_threshold must be positive");

  const auto* grid = top.child("grid");
  if (grid == nullptr) throw ConfigError("config.grid is required");
  Reader g(*grid, "grid");
  cfg.grid.t_start = g.number("t_start", 0.0);
  cfg.grid.t_end = g.number("t_end");
  cfg.grid.steps = g.integer("steps");
  cfg.grid.units = g.text("units", "natural", {"natural", "hopping"});
  g.finish();
  if (!(cfg.grid.t_end > cfg.grid.t_start)) throw ConfigError("grid.t_end must exceed grid.t_start");
  if (cfg.grid.steps < 4) throw ConfigError("grid.steps must be at least 4");
  if (cfg.grid.units == "hopping" && cfg.experiment != Experiment::CavitySweep) {
    throw ConfigError("grid.units = \"hopping\" applies only to cavity_sweep");
  }
  if (cfg.experiment == Experiment::Dephasing && cfg.grid.t_start < 0.0) {
    throw ConfigError("grid.t_start must be non-negative for dephasing");
  }

  const auto* params = top.child("params");
  const nlohmann::json block = params != nullptr ? *params : nlohmann::json::object();
  std::vector<double> values;
  if (const auto* sweep = top.child("sweep")) {
    Reader s(*sweep, "sweep");
    cfg.sweep_param = s.text("param", std::nullopt);
    const auto* list = s.child("values");
    if (list == nullptr) throw ConfigError("sweep.values is required");
    values = number_list(*list, "sweep.values");
    s.finish();
    if (values.empty()) throw ConfigError("sweep.values must not be empty");
    std::sort(values.begin(), values.end());
    if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
      throw ConfigError("sweep.values contains duplicates");
    }
  }
  top.finish();

  if (cfg.sweep_param) {
    for (double v : values) {
      nlohmann::json point = block;
      substitute(point, *cfg.sweep_param, v);
      try {
        cfg.points.push_back({v, point, parse_params(cfg.experiment, point)});
      } catch (const ConfigError& e) {
        throw ConfigError(std::string(e.what()) + " (sweep " + *cfg.sweep_param + " = " +
                          format_double(v) + ")");
      }
    }
  } else {
    cfg.points.push_back({std::nullopt, block, parse_params(cfg.experiment, block)});
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in, nullptr, true, false);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace qdyn
