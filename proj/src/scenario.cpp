#include "covert/scenario.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace covert {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void Scenario::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("scenario: " + what);
  };
  require(num_elements >= 1, "num_elements must be >= 1");
  require(num_antennas >= 1, "num_antennas must be >= 1");
  for (auto [name, v] : {std::pair{"noise_ios", noise_ios}, {"noise_bob", noise_bob},
                         {"noise_willie", noise_willie}, {"budget_alice", budget_alice},
                         {"budget_grace", budget_grace}, {"budget_ios", budget_ios},
                         {"per_element_budget", per_element_budget}, {"amp_max", amp_max},
                         {"covertness_eps", covertness_eps}}) {
    require(std::isfinite(v) && v > 0.0, fmt::format("{} must be finite and > 0", name));
  }
  // The half-duplex benchmark is defined by a zero jamming budget.
  require(std::isfinite(budget_jam) && budget_jam >= 0.0, "budget_jam must be >= 0");
  require(si_level >= 0.0 && si_level <= 1.0, "si_level must lie in [0, 1]");
  require(std::isfinite(target_rate) && target_rate >= 0.0, "target_rate must be >= 0");
  for (double z : zeta) require(z > 0.0, "zeta thresholds must be > 0");
  for (double r : rho0) require(r > 0.0, "initial penalty factors must be > 0");
  for (double c : rho_decay) require(c > 0.0 && c < 1.0, "penalty decay factors must lie in (0, 1)");
  require(fading.exponent_ios > 0.0 && fading.exponent_bw > 0.0, "path-loss exponents must be > 0");

  // The surface is the horizontal line y = ios.y; refraction crosses it,
  // reflection stays on the incident side.
  const double alice_side = alice.y - ios.y;
  const double grace_side = grace.y - ios.y;
  require(alice_side * grace_side < 0.0,
          "Alice and Grace must lie on opposite sides of the surface plane");
  for (auto [name, p] : {std::pair{"alice", alice}, {"grace", grace}, {"willie", willie}, {"bob", bob}}) {
    require(distance(p, ios) > 0.0, fmt::format("{} coincides with the surface", name));
  }
  require(distance(bob, willie) > 0.0, "bob coincides with willie");
}

// ---------------------------------------------------------------------------
// Config text

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (t == "-inf") return -kInf;
  if (t == "inf" || t == "+inf") return kInf;
  std::size_t used = 0;
  const double v = std::stod(t, &used);
  if (used != t.size()) throw std::invalid_argument("trailing characters");
  return v;
}

using Setter = std::function<void(Scenario&, double)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"num_elements", [](Scenario& s, double v) { s.num_elements = static_cast<int>(v); }},
      {"num_antennas", [](Scenario& s, double v) { s.num_antennas = static_cast<int>(v); }},
      {"noise_ios_dbm", [](Scenario& s, double v) { s.noise_ios = dbm_to_watt(v); }},
      {"noise_bob_dbm", [](Scenario& s, double v) { s.noise_bob = dbm_to_watt(v); }},
      {"noise_willie_dbm", [](Scenario& s, double v) { s.noise_willie = dbm_to_watt(v); }},
      {"budget_alice_dbm", [](Scenario& s, double v) { s.budget_alice = dbm_to_watt(v); }},
      {"budget_grace_dbm", [](Scenario& s, double v) { s.budget_grace = dbm_to_watt(v); }},
      {"budget_jam_dbm", [](Scenario& s, double v) { s.budget_jam = dbm_to_watt(v); }},
      {"budget_ios_dbm", [](Scenario& s, double v) { s.budget_ios = dbm_to_watt(v); }},
      {"per_element_budget_dbm", [](Scenario& s, double v) { s.per_element_budget = dbm_to_watt(v); }},
      {"amp_max_db", [](Scenario& s, double v) { s.amp_max = std::pow(10.0, v / 20.0); }},
      {"si_level_db", [](Scenario& s, double v) { s.si_level = db_to_linear(v); }},
      {"covertness_eps", [](Scenario& s, double v) { s.covertness_eps = v; }},
      {"target_rate", [](Scenario& s, double v) { s.target_rate = v; }},
      {"alice_x", [](Scenario& s, double v) { s.alice.x = v; }},
      {"alice_y", [](Scenario& s, double v) { s.alice.y = v; }},
      {"grace_x", [](Scenario& s, double v) { s.grace.x = v; }},
      {"grace_y", [](Scenario& s, double v) { s.grace.y = v; }},
      {"willie_x", [](Scenario& s, double v) { s.willie.x = v; }},
      {"willie_y", [](Scenario& s, double v) { s.willie.y = v; }},
      {"bob_x", [](Scenario& s, double v) { s.bob.x = v; }},
      {"bob_y", [](Scenario& s, double v) { s.bob.y = v; }},
      {"ios_x", [](Scenario& s, double v) { s.ios.x = v; }},
      {"ios_y", [](Scenario& s, double v) { s.ios.y = v; }},
      {"rician_k_db", [](Scenario& s, double v) { s.fading.rician_k_db = v; }},
      {"ref_loss_db", [](Scenario& s, double v) { s.fading.ref_loss_db = v; }},
      {"exponent_ios", [](Scenario& s, double v) { s.fading.exponent_ios = v; }},
      {"exponent_bw", [](Scenario& s, double v) { s.fading.exponent_bw = v; }},
      {"zeta1", [](Scenario& s, double v) { s.zeta[0] = v; }},
      {"zeta2", [](Scenario& s, double v) { s.zeta[1] = v; }},
      {"zeta3", [](Scenario& s, double v) { s.zeta[2] = v; }},
      {"zeta4", [](Scenario& s, double v) { s.zeta[3] = v; }},
      {"rho1", [](Scenario& s, double v) { s.rho0[0] = v; }},
      {"rho2", [](Scenario& s, double v) { s.rho0[1] = v; }},
      {"rho3", [](Scenario& s, double v) { s.rho0[2] = v; }},
      {"c1", [](Scenario& s, double v) { s.rho_decay[0] = v; }},
      {"c2", [](Scenario& s, double v) { s.rho_decay[1] = v; }},
      {"c3", [](Scenario& s, double v) { s.rho_decay[2] = v; }},
      {"rng_seed", [](Scenario& s, double v) { s.rng_seed = static_cast<std::uint64_t>(v); }},
      {"passive_surface",
       [](Scenario& s, double v) { s.surface = v != 0.0 ? SurfaceMode::passive : SurfaceMode::active; }},
  };
  return table;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  Scenario s;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("{}:{}: expected `key = value`", origin, line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError(fmt::format("{}:{}: unknown key `{}`", origin, line_no, key));
    }
    double v = 0.0;
    try {
      v = parse_number(value);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("{}:{}: `{}` is not a number", origin, line_no, value));
    }
    it->second(s, v);
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("{}: {}", origin, e.what()));
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open file", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string to_config_text(const Scenario& s) {
  std::string out;
  auto put = [&out](const char* key, double v) { out += fmt::format("{} = {:.17g}\n", key, v); };
  put("num_elements", s.num_elements);
  put("num_antennas", s.num_antennas);
  put("noise_ios_dbm", watt_to_dbm(s.noise_ios));
  put("noise_bob_dbm", watt_to_dbm(s.noise_bob));
  put("noise_willie_dbm", watt_to_dbm(s.noise_willie));
  put("budget_alice_dbm", watt_to_dbm(s.budget_alice));
  put("budget_grace_dbm", watt_to_dbm(s.budget_grace));
  put("budget_jam_dbm", watt_to_dbm(s.budget_jam));
  put("budget_ios_dbm", watt_to_dbm(s.budget_ios));
  put("per_element_budget_dbm", watt_to_dbm(s.per_element_budget));
  put("amp_max_db", 20.0 * std::log10(s.amp_max));
  put("si_level_db", s.si_level > 0.0 ? linear_to_db(s.si_level) : -kInf);
  put("covertness_eps", s.covertness_eps);
  put("target_rate", s.target_rate);
  put("alice_x", s.alice.x);
  put("alice_y", s.alice.y);
  put("grace_x", s.grace.x);
  put("grace_y", s.grace.y);
  put("willie_x", s.willie.x);
  put("willie_y", s.willie.y);
  put("bob_x", s.bob.x);
  put("bob_y", s.bob.y);
  put("ios_x", s.ios.x);
  put("ios_y", s.ios.y);
  put("rician_k_db", s.fading.rician_k_db);
  put("ref_loss_db", s.fading.ref_loss_db);
  put("exponent_ios", s.fading.exponent_ios);
  put("exponent_bw", s.fading.exponent_bw);
  put("zeta1", s.zeta[0]);
  put("zeta2", s.zeta[1]);
  put("zeta3", s.zeta[2]);
  put("zeta4", s.zeta[3]);
  put("rho1", s.rho0[0]);
  put("rho2", s.rho0[1]);
  put("rho3", s.rho0[2]);
  put("c1", s.rho_decay[0]);
  put("c2", s.rho_decay[1]);
  put("c3", s.rho_decay[2]);
  put("rng_seed", static_cast<double>(s.rng_seed));
  put("passive_surface", s.passive() ? 1.0 : 0.0);
  return out;
}

// ---------------------------------------------------------------------------
// Channels

void ChannelSet::validate() const {
  const auto k = h_ao.size();
  const auto m = H_bb.rows();
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("channels: ") + what);
  };
  require(k > 0 && m > 0, "empty dimensions");
  require(H_bb.cols() == m, "H_bb must be M x M");
  require(H_ob.rows() == m && H_ob.cols() == k, "H_ob must be M x K");
  require(H_bo.rows() == k && H_bo.cols() == m, "H_bo must be K x M");
  require(h_go.size() == k && h_ow.size() == k, "h_go/h_ow must have K entries");
  require(h_bw.size() == m, "h_bw must have M entries");
  require(H_ob.allFinite() && H_bo.allFinite() && h_ao.allFinite() && h_go.allFinite() &&
              h_ow.allFinite() && h_bw.allFinite() && H_bb.allFinite(),
          "non-finite entry");
}

double path_loss(double distance_m, double ref_loss, double exponent) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("path_loss: distance must be > 0");
  return ref_loss * std::pow(distance_m, -exponent);
}

ChannelRng make_trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    0x636f7674u};
  return ChannelRng(seq);
}

namespace {

// Half-wavelength ULA along the x axis; angle measured from the array normal.
CVec steering(int n, const Point& from, const Point& to) {
  const double d = distance(from, to);
  const double sin_theta = (to.x - from.x) / d;
  CVec a(n);
  for (int i = 0; i < n; ++i) a(i) = std::polar(1.0, kPi * i * sin_theta);
  return a;
}

struct Gaussian {
  ChannelRng& rng;
  std::normal_distribution<double> normal{0.0, 1.0};
  // CN(0, 1)
  cdouble operator()() {
    const double re = normal(rng);
    const double im = normal(rng);
    return {re * std::sqrt(0.5), im * std::sqrt(0.5)};
  }
  CMat matrix(int rows, int cols) {
    CMat out(rows, cols);
    for (int c = 0; c < cols; ++c)
      for (int r = 0; r < rows; ++r) out(r, c) = (*this)();
    return out;
  }
};

}  // namespace

ChannelSet generate_channels(const Scenario& s, ChannelRng& rng) {
  s.validate();
  const int k = s.num_elements;
  const int m = s.num_antennas;
  const double ref = db_to_linear(s.fading.ref_loss_db);
  const double kr = db_to_linear(s.fading.rician_k_db);
  const double los = std::sqrt(kr / (1.0 + kr));
  const double nlos = std::sqrt(1.0 / (1.0 + kr));
  auto gain = [&](const Point& a, double exponent) {
    return std::sqrt(path_loss(distance(a, s.ios), ref, exponent));
  };
  Gaussian g{rng};

  ChannelSet ch;
  // Fixed draw order keeps realizations comparable across parameter sweeps.
  const CMat w_ao = g.matrix(k, 1);
  const CMat w_go = g.matrix(k, 1);
  const CMat w_ow = g.matrix(1, k);
  const CMat w_ob = g.matrix(m, k);
  const CMat w_bo = g.matrix(k, m);
  const CMat w_bw = g.matrix(1, m);
  const CMat w_bb = g.matrix(m, m);

  ch.h_ao = gain(s.alice, s.fading.exponent_ios) * (los * steering(k, s.ios, s.alice) + nlos * w_ao.col(0));
  ch.h_go = gain(s.grace, s.fading.exponent_ios) * (los * steering(k, s.ios, s.grace) + nlos * w_go.col(0));
  ch.h_ow = gain(s.willie, s.fading.exponent_ios) *
            (los * steering(k, s.ios, s.willie).transpose() + nlos * w_ow.row(0));
  const double g_bob = gain(s.bob, s.fading.exponent_ios);
  const CMat los_ob = steering(m, s.bob, s.ios) * steering(k, s.ios, s.bob).transpose();
  ch.H_ob = g_bob * (los * los_ob + nlos * w_ob);
  ch.H_bo = g_bob * (los * los_ob.transpose() + nlos * w_bo);
  const double g_bw = std::sqrt(path_loss(distance(s.bob, s.willie), ref, s.fading.exponent_bw));
  ch.h_bw = g_bw * w_bw.row(0);
  ch.H_bb = w_bb;
  return ch;
}

ChannelSet generate_channels(const Scenario& scenario, std::uint64_t trial) {
  auto rng = make_trial_rng(scenario.rng_seed, trial);
  return generate_channels(scenario, rng);
}

}  // namespace covert
