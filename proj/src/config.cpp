#include "thinfilm/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace thinfilm {

namespace {

struct Entry {
  std::string value;
  int line = 0;  // 0 when the source has no line information
};

using Table = std::map<std::string, Entry>;  // "section.key" -> entry

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string where(const std::string& origin, int line) {
  return line > 0 ? origin + ":" + std::to_string(line) + ": " : origin + ": ";
}

Table parse_ini(const std::string& text, const std::string& origin) {
  Table table;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto cut = raw.find_first_of("#;");
    const std::string s = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(where(origin, line) + "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(where(origin, line) + "expected 'key = value', got '" + s + "'");
    if (section.empty()) throw ConfigError(where(origin, line) + "key outside of any [section]");
    const std::string key = section + "." + trim(s.substr(0, eq));
    if (table.count(key)) throw ConfigError(where(origin, line) + "duplicate key " + key);
    table[key] = {trim(s.substr(eq + 1)), line};
  }
  return table;
}

std::string scalar_text(const nlohmann::json& v, const std::string& key, const std::string& origin) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw ConfigError(origin + ": " + key + " must be a scalar");
}

Table parse_json(const std::string& text, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(origin + ": top level must be an object");
  Table table;
  for (const auto& [section, body] : doc.items()) {
    if (!body.is_object()) throw ConfigError(origin + ": section " + section + " must be an object");
    for (const auto& [name, v] : body.items()) {
      const std::string key = section + "." + name;
      if (key == "ic.modes" && v.is_array()) {
        std::string joined;
        for (const auto& m : v) {
          if (!m.is_object() || !m.contains("field") || !m.contains("index") || !m.contains("amplitude")) {
            throw ConfigError(origin + ": ic.modes entries need field, index and amplitude");
          }
          if (!joined.empty()) joined += ", ";
          joined += scalar_text(m["field"], key, origin) + ":" + scalar_text(m["index"], key, origin) + ":" +
                    scalar_text(m["amplitude"], key, origin);
        }
        table[key] = {joined, 0};
      } else {
        table[key] = {scalar_text(v, key, origin), 0};
      }
    }
  }
  return table;
}

class Reader {
 public:
  Reader(Table table, std::string origin) : table_(std::move(table)), origin_(std::move(origin)) {}

  bool has(const std::string& key) const { return table_.count(key) != 0; }

  const Entry& entry(const std::string& key) {
    const auto it = table_.find(key);
    if (it == table_.end()) throw ConfigError(origin_ + ": missing required key " + key);
    used_.insert(key);
    return it->second;
  }

  double number(const std::string& key) {
    const Entry& e = entry(key);
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw ConfigError(where(origin_, e.line) + key + ": expected a finite number, got '" + e.value + "'");
    }
    return v;
  }

  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::size_t count(const std::string& key) {
    const Entry& e = entry(key);
    std::size_t v = 0;
    const char* last = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), last, v);
    if (ec != std::errc() || ptr != last) {
      throw ConfigError(where(origin_, e.line) + key + ": expected a non-negative integer, got '" + e.value + "'");
    }
    return v;
  }

  std::size_t count(const std::string& key, std::size_t fallback) { return has(key) ? count(key) : fallback; }

  std::string text(const std::string& key) { return entry(key).value; }
  std::string text(const std::string& key, const std::string& fallback) { return has(key) ? text(key) : fallback; }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Entry& e = entry(key);
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    throw ConfigError(where(origin_, e.line) + key + ": expected true or false, got '" + e.value + "'");
  }

  int line(const std::string& key) const { return has(key) ? table_.at(key).line : 0; }
  const std::string& origin() const { return origin_; }

  void reject_unknown() const {
    for (const auto& [key, e] : table_) {
      if (!used_.count(key)) throw ConfigError(where(origin_, e.line) + "unknown key " + key);
    }
  }

 private:
  Table table_;
  std::string origin_;
  std::set<std::string> used_;
};

Field field_from_name(const std::string& name, const std::string& context) {
  if (name == "f") return Field::F;
  if (name == "g") return Field::G;
  if (name == "gamma") return Field::Gamma;
  throw ConfigError(context + "unknown field '" + name + "' (expected f, g or gamma)");
}

std::vector<Mode> parse_modes(const std::string& text, const std::string& context) {
  std::vector<Mode> modes;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto a = item.find(':');
    const auto b = item.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos) {
      throw ConfigError(context + "ic.modes: expected field:index:amplitude, got '" + item + "'");
    }
    Mode m;
    m.field = field_from_name(trim(item.substr(0, a)), context);
    const std::string idx = trim(item.substr(a + 1, b - a - 1));
    const std::string amp = trim(item.substr(b + 1));
    const auto r1 = std::from_chars(idx.data(), idx.data() + idx.size(), m.index);
    const auto r2 = std::from_chars(amp.data(), amp.data() + amp.size(), m.amplitude);
    if (r1.ec != std::errc() || r1.ptr != idx.data() + idx.size() || m.index < 0 || r2.ec != std::errc() ||
        r2.ptr != amp.data() + amp.size() || !std::isfinite(m.amplitude)) {
      throw ConfigError(context + "ic.modes: bad entry '" + item + "'");
    }
    modes.push_back(m);
  }
  return modes;
}

}  // namespace

std::string_view field_name(Field field) {
  switch (field) {
    case Field::F: return "f";
    case Field::G: return "g";
    case Field::Gamma: return "gamma";
  }
  return "?";
}

Model RunConfig::model() const { return Model(params, SurfactantLaw::linear(beta), kind); }

Grid RunConfig::grid() const { return Grid(n_cells, params.length); }

Equilibrium RunConfig::target() const {
  return equilibrium.value_or(Equilibrium{ic.f_mean, ic.g_mean, ic.gamma_mean});
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  const auto first = text.find_first_not_of(" \t\r\n");
  const bool json = first != std::string::npos && text[first] == '{';
  Reader rd(json ? parse_json(text, origin) : parse_ini(text, origin), origin);

  RunConfig cfg;
  try {
    cfg.kind = model_kind_from_string(rd.text("model.kind"));
  } catch (const DomainError& e) {
    throw ConfigError(where(origin, rd.line("model.kind")) + e.what());
  }
  const bool gravity = cfg.kind == ModelKind::Gravity;

  PhysParams& p = cfg.params;
  p.mu = rd.number("params.mu");
  p.d_surf = rd.number("params.d_surf");
  p.length = rd.number("params.length");
  p.g1 = gravity ? rd.number("params.g1") : rd.number("params.g1", 0.0);
  p.g2 = gravity ? rd.number("params.g2") : rd.number("params.g2", 0.0);
  p.sigma1c = gravity ? rd.number("params.sigma1c", 0.0) : rd.number("params.sigma1c");
  p.sigma2c = gravity ? rd.number("params.sigma2c", 0.0) : rd.number("params.sigma2c");

  cfg.beta = rd.number("law.beta");
  cfg.n_cells = rd.count("grid.n_cells");

  cfg.t_end = rd.number("time.t_end");
  StepConfig& s = cfg.step;
  s.dt_init = rd.number("time.dt_init", s.dt_init);
  s.dt_min = rd.number("time.dt_min", s.dt_min);
  s.dt_max = rd.number("time.dt_max", s.dt_max);
  s.theta = rd.number("time.theta", s.theta);
  s.safety = rd.number("time.safety", s.safety);
  s.pos_floor = rd.number("time.pos_floor", s.pos_floor);
  if (!(cfg.t_end >= 0.0)) throw ConfigError(where(origin, rd.line("time.t_end")) + "time.t_end must be >= 0");

  cfg.ic.f_mean = rd.number("ic.f_mean");
  cfg.ic.g_mean = rd.number("ic.g_mean");
  cfg.ic.gamma_mean = rd.number("ic.gamma_mean");
  if (rd.has("ic.modes")) {
    cfg.ic.modes = parse_modes(rd.text("ic.modes"), where(origin, rd.line("ic.modes")));
  }

  cfg.io.out_dir = rd.text("io.out_dir", cfg.io.out_dir);
  cfg.io.snapshot_every = rd.count("io.snapshot_every", cfg.io.snapshot_every);
  cfg.io.series_every = rd.count("io.series_every", cfg.io.series_every);
  if (cfg.io.series_every == 0) throw ConfigError(where(origin, rd.line("io.series_every")) + "io.series_every must be >= 1");

  if (rd.has("equilibrium.f_star") || rd.has("equilibrium.g_star") || rd.has("equilibrium.gamma_star")) {
    cfg.equilibrium = Equilibrium{rd.number("equilibrium.f_star"), rd.number("equilibrium.g_star"),
                                  rd.number("equilibrium.gamma_star")};
  }
  cfg.sample_lambda = rd.flag("ls.sample_lambda", false);
  cfg.discard_fraction = rd.number("decay.discard_fraction", cfg.discard_fraction);

  rd.reject_unknown();

  try {
    validate(cfg.params);
    validate(cfg.step);
    if (cfg.beta < 0.0) throw DomainError("law.beta must be >= 0");
    if (cfg.equilibrium) validate(*cfg.equilibrium);
    (void)cfg.grid();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["model"]["kind"] = std::string(to_string(cfg.kind));
  const PhysParams& p = cfg.params;
  j["params"] = {{"mu", p.mu},           {"g1", p.g1},         {"g2", p.g2},        {"sigma1c", p.sigma1c},
                 {"sigma2c", p.sigma2c}, {"d_surf", p.d_surf}, {"length", p.length}};
  j["law"]["beta"] = cfg.beta;
  j["grid"]["n_cells"] = cfg.n_cells;
  const StepConfig& s = cfg.step;
  j["time"] = {{"t_end", cfg.t_end}, {"dt_init", s.dt_init}, {"dt_min", s.dt_min},      {"dt_max", s.dt_max},
               {"theta", s.theta},   {"safety", s.safety},   {"pos_floor", s.pos_floor}};
  nlohmann::ordered_json modes = nlohmann::ordered_json::array();
  for (const Mode& m : cfg.ic.modes) {
    modes.push_back({{"field", std::string(field_name(m.field))}, {"index", m.index}, {"amplitude", m.amplitude}});
  }
  j["ic"] = {{"f_mean", cfg.ic.f_mean}, {"g_mean", cfg.ic.g_mean}, {"gamma_mean", cfg.ic.gamma_mean}, {"modes", modes}};
  j["io"] = {{"out_dir", cfg.io.out_dir},
             {"snapshot_every", cfg.io.snapshot_every},
             {"series_every", cfg.io.series_every}};
  if (cfg.equilibrium) {
    j["equilibrium"] = {{"f_star", cfg.equilibrium->f_star},
                        {"g_star", cfg.equilibrium->g_star},
                        {"gamma_star", cfg.equilibrium->gamma_star}};
  }
  j["ls"]["sample_lambda"] = cfg.sample_lambda;
  j["decay"]["discard_fraction"] = cfg.discard_fraction;
  return j;
}

FilmState initial_state(const RunConfig& cfg, const Grid& grid) {
  const std::size_t n = grid.size();
  FilmState u = FilmState::flat(n, cfg.ic.f_mean, cfg.ic.g_mean, cfg.ic.gamma_mean);
  const double k0 = std::acos(-1.0) / grid.length();
  for (const Mode& m : cfg.ic.modes) {
    auto& w = u.field(m.field);
    for (std::size_t i = 0; i < n; ++i) w[i] += m.amplitude * std::cos(m.index * k0 * grid.center(i));
  }
  for (Field fld : {Field::F, Field::G, Field::Gamma}) {
    const auto& w = u.field(fld);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(w[i] > 0.0)) {
        throw DomainError("initial condition: " + std::string(field_name(fld)) + " = " + std::to_string(w[i]) +
                          " at x = " + std::to_string(grid.center(i)) + " is not strictly positive");
      }
    }
  }
  return u;
}

}  // namespace thinfilm
