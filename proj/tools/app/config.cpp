#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "ghsc/code.hpp"
#include "ghsc/parallel.hpp"

namespace ghsc::app {

using nlohmann::json;

namespace {

const char* type_name(const json& j) {
  if (j.is_null()) return "null";
  if (j.is_boolean()) return "boolean";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "list";
  return "mapping";
}

template <class T>
bool parse_whole(const std::string& s, T& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

json scalar_to_json(const YAML::Node& n) {
  const std::string& s = n.Scalar();
  if (n.Tag() != "?") return s;  // quoted
  if (s.empty() || s == "~" || s == "null" || s == "Null" || s == "NULL") return nullptr;
  if (s == "true" || s == "True" || s == "TRUE") return true;
  if (s == "false" || s == "False" || s == "FALSE") return false;
  std::int64_t i = 0;
  if (parse_whole(s, i)) return i;
  std::uint64_t u = 0;
  if (parse_whole(s, u)) return u;
  double d = 0.0;
  if (s.find_first_of(".eE") != std::string::npos && parse_whole(s, d)) return d;
  return s;
}

json yaml_to_json(const YAML::Node& n, const std::string& path) {
  switch (n.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return scalar_to_json(n);
    case YAML::NodeType::Sequence: {
      json a = json::array();
      for (const auto& e : n) a.push_back(yaml_to_json(e, path + "[" + std::to_string(a.size()) + "]"));
      return a;
    }
    case YAML::NodeType::Map: {
      json o = json::object();
      for (const auto& kv : n) {
        const std::string key = kv.first.as<std::string>();
        if (o.contains(key)) throw ConfigError(path + "." + key, "duplicate key");
        o[key] = yaml_to_json(kv.second, path + "." + key);
      }
      return o;
    }
  }
  return nullptr;
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

json sum_to_json(const PauliSum& s) {
  json terms = json::array();
  for (const auto& t : s.terms()) {
    json e{{"coeff", t.coeff.real()}, {"pauli", t.op.str()}};
    if (t.coeff.imag() != 0.0) e["coeff_im"] = t.coeff.imag();
    terms.push_back(std::move(e));
  }
  return terms;
}

LatticeGeometry read_geometry(const Node& root) {
  const Node g = root.at("geometry");
  g.allow_only({"lx", "ly"});
  const std::size_t lx = g.at("lx").count(2, 16);
  const std::size_t ly = g.at("ly").count(1, 16);
  return build_geometry(lx, ly);
}

std::string read_model(const Node& root) {
  if (!root.has("model")) return "TC";
  const Node m = root.at("model");
  const std::string v = upper(m.string());
  if (v != "TC" && v != "LGHM") m.fail("expected TC or LGHM (the LGHM runs in its gauge-fixed toric-code image)");
  return v;
}

Sector read_sector(const Node& root) {
  Sector s;
  if (!root.has("sector")) return s;
  const Node n = root.at("sector");
  n.allow_only({"p", "sz", "lz"});
  auto sign = [&](std::string_view key, int& out) {
    if (!n.has(key)) return;
    const Node v = n.at(key);
    const auto i = v.integer();
    if (i != 1 && i != -1) v.fail("expected +1 or -1");
    out = static_cast<int>(i);
  };
  sign("p", s.p);
  sign("sz", s.sz);
  sign("lz", s.lz);
  return s;
}

LanczosOptions read_lanczos(const Node& root) {
  LanczosOptions o;
  if (!root.has("lanczos")) return o;
  const Node n = root.at("lanczos");
  n.allow_only({"residual_tol", "degeneracy_tol", "max_krylov", "max_degeneracy", "seed"});
  auto positive = [&](std::string_view key, double& out) {
    if (!n.has(key)) return;
    const Node v = n.at(key);
    out = v.number();
    if (!(out > 0.0)) v.fail("must be positive");
  };
  positive("residual_tol", o.residual_tol);
  positive("degeneracy_tol", o.degeneracy_tol);
  if (n.has("max_krylov")) o.max_krylov = n.at("max_krylov").count(2);
  if (n.has("max_degeneracy")) o.max_degeneracy = n.at("max_degeneracy").count(1);
  if (n.has("seed")) o.seed = static_cast<std::uint64_t>(n.at("seed").integer());
  return o;
}

ChannelOptions read_channel(const Node& root) {
  ChannelOptions o;
  if (!root.has("channel")) return o;
  const Node n = root.at("channel");
  n.allow_only({"kraus_cap", "max_gram_links"});
  if (n.has("kraus_cap")) o.kraus_cap = n.at("kraus_cap").count(0, 30);
  if (n.has("max_gram_links")) o.max_gram_links = n.at("max_gram_links").count(0, 20);
  return o;
}

std::pair<std::size_t, std::size_t> read_plaquettes(const Node& n, const LatticeGeometry& g) {
  const auto items = n.items();
  if (items.size() != 2) n.fail("expected two plaquette ids");
  const std::size_t a = items[0].count(0, g.num_plaquettes() - 1);
  const std::size_t b = items[1].count(0, g.num_plaquettes() - 1);
  if (a == b) n.fail("plaquettes must differ");
  return {a, b};
}

PauliSum read_terms(const Node& n, std::size_t num_qubits) {
  PauliSum sum(num_qubits);
  const auto items = n.items();
  if (items.empty()) n.fail("expected at least one term");
  for (const auto& t : items) {
    t.allow_only({"coeff", "pauli"});
    const double c = t.has("coeff") ? t.at("coeff").number() : 1.0;
    sum.add(c, parse_pauli(t.at("pauli"), num_qubits));
  }
  return sum;
}

// Either plaquettes: [p1, p2] for (B~_p1 + B~_p2)/2 or an explicit term list.
PauliSum read_gauge_operator(const Node& n, const LatticeGeometry& g) {
  if (n.has("plaquettes") && n.has("terms")) n.fail("give either plaquettes or terms, not both");
  if (n.has("terms")) {
    PauliSum s = read_terms(n.at("terms"), g.num_links());
    if (!s.is_hermitian()) n.at("terms").fail("operator is not Hermitian");
    return s;
  }
  const auto [p1, p2] = n.has("plaquettes") ? read_plaquettes(n.at("plaquettes"), g) : default_gauge_plaquettes(g);
  return gauge_observable(g, p1, p2);
}

// Element i of a list grid, or the whole {start, stop, step} mapping.
Node grid_point(const Node& grid, std::size_t i) { return grid.raw().is_array() ? grid.items()[i] : grid; }

struct Common {
  std::string model;
  LatticeGeometry geometry{2, 1};
  std::vector<double> j_grid, p_grid;
  Sector sector;
  LanczosOptions lanczos;
  ChannelOptions channel;
  std::size_t workers = 1;
  std::string output;
  json normalized;
};

Common read_common(const Node& root, const std::string& default_output) {
  Common c;
  c.model = read_model(root);
  c.geometry = read_geometry(root);
  c.j_grid = read_grid(root.at("j_grid"));
  for (std::size_t i = 0; i < c.j_grid.size(); ++i)
    if (c.j_grid[i] < 0) grid_point(root.at("j_grid"), i).fail("J must be nonnegative");
  c.p_grid = read_grid(root.at("p_grid"));
  for (std::size_t i = 0; i < c.p_grid.size(); ++i)
    if (c.p_grid[i] < 0 || c.p_grid[i] > 0.5) grid_point(root.at("p_grid"), i).fail("p_x must lie in [0, 1/2]");
  c.sector = read_sector(root);
  c.lanczos = read_lanczos(root);
  c.channel = read_channel(root);
  c.workers = resolve_workers(root);
  c.output = root.has("output") ? root.at("output").string() : default_output;
  c.normalized = {
      {"model", c.model},
      {"geometry", {{"lx", c.geometry.lx()}, {"ly", c.geometry.ly()}}},
      {"j_grid", c.j_grid},
      {"p_grid", c.p_grid},
      {"sector", {{"p", c.sector.p}, {"sz", c.sector.sz}, {"lz", c.sector.lz}}},
      {"lanczos",
       {{"residual_tol", c.lanczos.residual_tol},
        {"degeneracy_tol", c.lanczos.degeneracy_tol},
        {"max_krylov", c.lanczos.max_krylov},
        {"max_degeneracy", c.lanczos.max_degeneracy},
        {"seed", c.lanczos.seed}}},
      {"channel", {{"kraus_cap", c.channel.kraus_cap}, {"max_gram_links", c.channel.max_gram_links}}},
  };
  return c;
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  });
}

}  // namespace

bool Node::has(std::string_view key) const { return value_->is_object() && value_->contains(key); }

Node Node::at(std::string_view key) const {
  if (!value_->is_object()) fail("expected a mapping, got " + std::string(type_name(*value_)));
  auto it = value_->find(key);
  if (it == value_->end()) throw ConfigError(path_ + "." + std::string(key), "required key missing");
  return Node(&*it, path_ + "." + std::string(key));
}

std::vector<Node> Node::items() const {
  if (!value_->is_array()) fail("expected a list, got " + std::string(type_name(*value_)));
  std::vector<Node> out;
  for (std::size_t i = 0; i < value_->size(); ++i) out.emplace_back(&(*value_)[i], path_ + "[" + std::to_string(i) + "]");
  return out;
}

double Node::number() const {
  if (!value_->is_number()) fail("expected a number, got " + std::string(type_name(*value_)));
  const double v = value_->get<double>();
  if (!std::isfinite(v)) fail("must be finite");
  return v;
}

std::int64_t Node::integer() const {
  if (value_->is_number_unsigned()) {
    const auto u = value_->get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) fail("integer out of range");
    return static_cast<std::int64_t>(u);
  }
  if (!value_->is_number_integer()) fail("expected an integer, got " + std::string(type_name(*value_)));
  return value_->get<std::int64_t>();
}

std::size_t Node::count(std::size_t min, std::size_t max) const {
  const auto v = integer();
  if (v < 0 || static_cast<std::uint64_t>(v) < min || static_cast<std::uint64_t>(v) > max) {
    std::string range = "[" + std::to_string(min) + ", " + (max == SIZE_MAX ? std::string("inf") : std::to_string(max)) + "]";
    fail("expected an integer in " + range + ", got " + std::to_string(v));
  }
  return static_cast<std::size_t>(v);
}

bool Node::boolean() const {
  if (!value_->is_boolean()) fail("expected true or false, got " + std::string(type_name(*value_)));
  return value_->get<bool>();
}

std::string Node::string() const {
  if (!value_->is_string()) fail("expected a string, got " + std::string(type_name(*value_)));
  return value_->get<std::string>();
}

void Node::allow_only(std::initializer_list<std::string_view> allowed) const {
  if (!value_->is_object()) fail("expected a mapping, got " + std::string(type_name(*value_)));
  for (const auto& [k, v] : value_->items())
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ConfigError(path_ + "." + k, "unknown key");
}

void Node::fail(const std::string& message) const { throw ConfigError(path_, message); }

json parse_yaml(const std::string& text) {
  YAML::Node doc;
  try {
    doc = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("$", "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  return yaml_to_json(doc, "$");
}

json load_config_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("$", "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (!is_json) return parse_yaml(text);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
}

std::vector<double> read_grid(const Node& n) {
  std::vector<double> out;
  if (n.raw().is_array()) {
    for (const auto& e : n.items()) out.push_back(e.number());
    if (out.empty()) n.fail("grid is empty");
    return out;
  }
  n.allow_only({"start", "stop", "step"});
  const double start = n.at("start").number();
  const double stop = n.at("stop").number();
  const double step = n.at("step").number();
  if (!(step > 0)) n.at("step").fail("must be positive");
  if (stop < start) n.at("stop").fail("must not be below start");
  const double count = std::floor((stop - start) / step + 1e-9);
  if (count > 1e6) n.fail("grid has more than a million points");
  // Rounded to 12 decimals so 0.025 * 3 prints as 0.075.
  for (std::size_t i = 0; i <= static_cast<std::size_t>(count); ++i)
    out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
  return out;
}

std::size_t resolve_workers(const Node& root) {
  if (root.has("workers")) {
    const Node w = root.at("workers");
    if (!w.is_null()) return w.count(1, 1024);
  }
  return default_workers();
}

PauliOperator parse_pauli(const Node& n, std::size_t num_qubits) {
  const std::string text = n.string();
  const bool sparse = text.empty() || std::any_of(text.begin(), text.end(), [](char c) {
                        return std::isdigit(static_cast<unsigned char>(c));
                      });
  if (!sparse) {
    PauliOperator op;
    try {
      op = PauliOperator::from_string(text);
    } catch (const std::exception& e) {
      n.fail(std::string("bad Pauli string: ") + e.what());
    }
    if (op.num_qubits() != num_qubits)
      n.fail("Pauli string has " + std::to_string(op.num_qubits()) + " qubits, expected " + std::to_string(num_qubits));
    return op;
  }
  PauliOperator op = PauliOperator::identity(num_qubits);
  std::istringstream ss(text);
  std::string tok;
  std::set<std::size_t> seen;
  while (ss >> tok) {
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(tok[0])));
    std::size_t q = 0;
    if ((letter != 'X' && letter != 'Y' && letter != 'Z') || tok.size() < 2 ||
        !parse_whole(tok.substr(1), q))
      n.fail("bad token '" + tok + "', expected X<q>, Y<q> or Z<q>");
    if (q >= num_qubits) n.fail("qubit " + std::to_string(q) + " out of range (" + std::to_string(num_qubits) + " qubits)");
    if (!seen.insert(q).second) n.fail("qubit " + std::to_string(q) + " appears twice");
    op = op * PauliOperator::single(num_qubits, q, letter);
  }
  return op;
}

ScanSpec parse_scan(const json& root_json) {
  const Node root(&root_json, "$");
  root.allow_only({"geometry", "model", "j_grid", "p_grid", "observables", "top_k", "log_base", "sector", "lanczos",
                   "channel", "workers", "output", "coupling"});
  Common c = read_common(root, "scan.csv");
  ScanSpec s;
  s.model = c.model;
  s.output = c.output;
  auto& cfg = s.config;
  cfg.geometry = c.geometry;
  cfg.j_grid = c.j_grid;
  cfg.p_grid = c.p_grid;
  cfg.sector = c.sector;
  cfg.lanczos = c.lanczos;
  cfg.channel = c.channel;
  cfg.workers = c.workers;

  if (root.has("observables")) {
    std::set<std::string> names;
    for (const auto& o : root.at("observables").items()) {
      o.allow_only({"name", "plaquettes", "terms"});
      const Node name = o.at("name");
      Observable obs{name.string(), read_gauge_operator(o, cfg.geometry)};
      if (!valid_name(obs.name)) name.fail("names use letters, digits and '_'");
      if (!names.insert(obs.name).second) name.fail("duplicate observable name");
      cfg.observables.push_back(std::move(obs));
    }
  } else {
    const auto [p1, p2] = default_gauge_plaquettes(cfg.geometry);
    cfg.observables.push_back({"og", gauge_observable(cfg.geometry, p1, p2)});
  }
  if (root.has("top_k") && !root.at("top_k").is_null()) cfg.top_k = root.at("top_k").count(1);
  if (root.has("log_base")) {
    const Node b = root.at("log_base");
    std::string v = b.raw().is_number() ? std::to_string(b.integer()) : b.string();
    if (v == "e" || v == "natural") cfg.log_base = LogBase::kNatural;
    else if (v == "2") cfg.log_base = LogBase::kTwo;
    else b.fail("expected e or 2");
  }

  s.normalized = c.normalized;
  s.normalized["subcommand"] = "scan";
  json obs = json::array();
  for (const auto& o : cfg.observables) obs.push_back({{"name", o.name}, {"terms", sum_to_json(o.op)}});
  s.normalized["observables"] = obs;
  s.normalized["top_k"] = cfg.top_k ? json(*cfg.top_k) : json(nullptr);
  s.normalized["log_base"] = to_string(cfg.log_base);
  return s;
}

StabilitySpec parse_stability(const json& root_json) {
  const Node root(&root_json, "$");
  root.allow_only({"geometry", "model", "j_grid", "p_grid", "observables", "top_k", "log_base", "sector", "lanczos",
                   "channel", "workers", "output", "coupling"});
  Common c = read_common(root, "stability.csv");
  StabilitySpec s;
  s.model = c.model;
  s.output = c.output;
  auto& cfg = s.config;
  cfg.geometry = c.geometry;
  cfg.j_grid = c.j_grid;
  cfg.p_grid = c.p_grid;
  cfg.sector = c.sector;
  cfg.lanczos = c.lanczos;
  cfg.channel = c.channel;
  cfg.workers = c.workers;
  cfg.coupling = default_coupling(cfg.geometry);
  cfg.dts = {cfg.coupling.dt};

  if (root.has("coupling")) {
    const Node n = root.at("coupling");
    n.allow_only({"logical", "plaquettes", "terms", "dt"});
    if (n.has("logical")) {
      const Node l = n.at("logical");
      const std::string v = l.string();
      if (upper(v) == "LX") cfg.coupling.logical_op = logical_x_op(cfg.geometry);
      else if (upper(v) == "LZ") cfg.coupling.logical_op = logical_z_op(cfg.geometry);
      else cfg.coupling.logical_op = parse_pauli(l, cfg.geometry.num_links());
    }
    if (n.has("plaquettes") || n.has("terms")) cfg.coupling.gauge_op = read_gauge_operator(n, cfg.geometry);
    if (n.has("dt")) {
      const Node d = n.at("dt");
      cfg.dts = d.raw().is_number() ? std::vector<double>{d.number()} : read_grid(d);
    }
    try {
      validate_coupling(cfg.coupling, cfg.geometry);
    } catch (const Error& e) {
      n.fail(e.what());
    }
  }

  s.normalized = c.normalized;
  s.normalized["subcommand"] = "stability";
  s.normalized["coupling"] = {{"logical", cfg.coupling.logical_op.str()},
                              {"gauge", sum_to_json(cfg.coupling.gauge_op)},
                              {"dt", cfg.dts}};
  return s;
}

std::vector<McPoint> McSpec::points() const {
  std::vector<McPoint> out;
  for (std::size_t l : sizes)
    for (double p : p_grid) {
      if (line == McLine::kNishimori) {
        out.push_back({l, p, nishimori_beta(p)});
      } else {
        for (double b : beta_grid) out.push_back({l, p, b});
      }
    }
  return out;
}

McSpec parse_mc(const json& root_json) {
  const Node root(&root_json, "$");
  root.allow_only({"sizes", "p_grid", "line", "beta_grid", "thermalization", "sweeps", "realizations", "bins", "seed",
                   "workers", "output"});
  McSpec s;
  for (const auto& e : root.at("sizes").items()) s.sizes.push_back(e.count(2, 64));
  if (s.sizes.empty()) root.at("sizes").fail("expected at least one lattice size");
  s.p_grid = read_grid(root.at("p_grid"));
  const std::string line = root.has("line") ? root.at("line").string() : "nishimori";
  if (line == "nishimori") {
    s.line = McLine::kNishimori;
    if (root.has("beta_grid")) root.at("beta_grid").fail("the Nishimori line fixes beta; remove beta_grid");
    for (double p : s.p_grid)
      if (!(p > 0 && p <= 0.5)) root.at("p_grid").fail("Nishimori line needs 0 < p <= 1/2");
  } else if (line == "fixed-beta") {
    s.line = McLine::kFixedBeta;
    s.beta_grid = read_grid(root.at("beta_grid"));
    for (double b : s.beta_grid)
      if (b < 0) root.at("beta_grid").fail("beta must be nonnegative");
    for (double p : s.p_grid)
      if (p < 0 || p > 1) root.at("p_grid").fail("p must lie in [0, 1]");
  } else {
    root.at("line").fail("expected nishimori or fixed-beta");
  }
  auto& o = s.options;
  if (root.has("thermalization")) o.thermalization = root.at("thermalization").count(0);
  if (root.has("sweeps")) o.sweeps = root.at("sweeps").count(1);
  if (o.sweeps < o.thermalization)
    throw ConfigError("$.sweeps", "must be at least the thermalization count (" + std::to_string(o.thermalization) + ")");
  if (root.has("realizations")) o.realizations = root.at("realizations").count(1);
  if (root.has("bins")) o.bins = root.at("bins").count(2);
  if (o.bins > o.sweeps) throw ConfigError("$.bins", "more bins than sweeps");
  if (root.has("seed")) {
    const Node sd = root.at("seed");
    if (!sd.raw().is_number_unsigned() && !sd.raw().is_number_integer()) sd.fail("expected an integer");
    if (sd.raw().is_number_integer() && !sd.raw().is_number_unsigned() && sd.raw().get<std::int64_t>() < 0)
      sd.fail("seed must be nonnegative");
    o.seed = sd.raw().get<std::uint64_t>();
  }
  o.workers = resolve_workers(root);
  s.output = root.has("output") ? root.at("output").string() : s.output;

  s.normalized = {{"subcommand", "rbim-mc"},
                  {"line", line},
                  {"sizes", s.sizes},
                  {"p_grid", s.p_grid},
                  {"beta_grid", s.beta_grid},
                  {"thermalization", o.thermalization},
                  {"sweeps", o.sweeps},
                  {"realizations", o.realizations},
                  {"bins", o.bins},
                  {"seed", o.seed}};
  return s;
}

}  // namespace ghsc::app
