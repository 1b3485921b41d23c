#include "jobmarket/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "csv_util.hpp"
#include "jobmarket/error.hpp"

namespace jobmarket {

void MarketConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(m >= 1, "m must be >= 1");
  require(n >= 1, "n must be >= 1");
  require(p_d >= 1, "p_d must be >= 1");
  require(p_v >= 1, "p_v must be >= 1");
  int prev = 0;
  for (int b : tier_boundaries) {
    require(b > prev, "tier_boundaries must be strictly increasing and positive");
    prev = b;
  }
  require(tier_boundaries.empty() || tier_boundaries.back() < m,
          "fewer departments than tiers: last tier boundary must be below m");
  require(years >= 0, "years must be >= 0");
  require(burn_in_years >= 0, "burn_in_years must be >= 0");
  require(replications >= 1, "replications must be >= 1");
  require(rho >= 0.0 && rho <= 1.0, "rho must lie in [0, 1]");
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  require(B >= 2, "B must be >= 2");
  require(activation_prob >= 0.0 && activation_prob <= 1.0, "activation_prob must lie in [0, 1]");
  require(capacity_default >= 1, "capacity_default must be >= 1");
  require(beta >= 0.0 && beta <= 1.0, "beta must lie in [0, 1]");
  require(lambda >= 0.0, "lambda must be >= 0");
  require(utility.gamma > 0.0, "gamma must be > 0");
  require(item_factors >= 0, "item_factors must be >= 0");
  require(item_noise >= 0.0, "item_noise must be >= 0");
  require(quality_correlation >= 0.0 && quality_correlation <= 1.0,
          "quality_correlation must lie in [0, 1]");
  require(weight_concentration > 0.0, "weight_concentration must be > 0");
  require(prestige_noise >= 0.0, "prestige_noise must be >= 0");
}

MechanismSpec RunOptions::mechanism_spec() const {
  MechanismSpec spec;
  spec.kind = parse_mechanism(mechanism);
  spec.rho = spec.kind == MechanismSpec::Kind::questionnaire ? market.rho : 0.0;
  spec.signal_count = signal_count;
  return spec;
}

std::string learner_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::logistic: return "logistic";
    case LearnerKind::mlp: return "mlp";
    case LearnerKind::intercept_only: return "intercept_only";
  }
  return "logistic";
}

std::string ranking_name(RankingMode mode) {
  return mode == RankingMode::calibrated ? "calibrated" : "plugin";
}

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys{
      "m", "n", "p_d", "p_v", "tier_boundaries", "years", "burn_in_years", "replications", "rho",
      "alpha", "B", "activation_prob", "capacity_default", "seed", "beta", "lambda", "learner",
      "ranking", "utility", "gamma", "item_factors", "item_noise", "quality_correlation",
      "weight_concentration", "prestige_noise", "mechanism", "signal_count", "departments", "out",
      "diagnostics"};
  return keys;
}

namespace {

std::string unquote(std::string_view v) {
  v = detail::trim(v);
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\''))) {
    v = v.substr(1, v.size() - 2);
  }
  return std::string(v);
}

int to_int(const std::string& key, const std::string& v) {
  const auto x = detail::parse_int<int>(v);
  if (!x) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return *x;
}

double to_real(const std::string& key, const std::string& v) {
  const auto x = detail::parse_double(v);
  if (!x) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return *x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<int> to_int_list(const std::string& key, std::string v) {
  std::string_view s = detail::trim(v);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw ConfigError(key + ": unterminated list");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<int> out;
  if (detail::trim(s).empty()) return out;
  for (const auto& item : detail::split_csv_line(s)) out.push_back(to_int(key, item));
  return out;
}

std::string join(const std::vector<int>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + std::to_string(xs[i]);
  return out + "]";
}

}  // namespace

void apply_setting(RunOptions& o, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = raw_key == "reps" ? "replications" : raw_key == "bootstrap" ? "B" : raw_key;
  const std::string v = unquote(raw_value);
  MarketConfig& c = o.market;
  if (key == "m") c.m = to_int(key, v);
  else if (key == "n") c.n = to_int(key, v);
  else if (key == "p_d") c.p_d = to_int(key, v);
  else if (key == "p_v") c.p_v = to_int(key, v);
  else if (key == "tier_boundaries") c.tier_boundaries = to_int_list(key, v);
  else if (key == "years") c.years = to_int(key, v);
  else if (key == "burn_in_years") c.burn_in_years = to_int(key, v);
  else if (key == "replications") c.replications = to_int(key, v);
  else if (key == "rho") c.rho = to_real(key, v);
  else if (key == "alpha") c.alpha = to_real(key, v);
  else if (key == "B") c.B = to_int(key, v);
  else if (key == "activation_prob") c.activation_prob = to_real(key, v);
  else if (key == "capacity_default") c.capacity_default = to_int(key, v);
  else if (key == "seed") {
    const auto x = detail::parse_int<std::uint64_t>(v);
    if (!x) throw ConfigError("seed: expected an unsigned 64-bit integer, got '" + v + "'");
    c.seed = *x;
  } else if (key == "beta") c.beta = to_real(key, v);
  else if (key == "lambda") c.lambda = to_real(key, v);
  else if (key == "learner") {
    if (v == "logistic") c.learner = LearnerKind::logistic;
    else if (v == "mlp") c.learner = LearnerKind::mlp;
    else if (v == "intercept_only") c.learner = LearnerKind::intercept_only;
    else throw ConfigError("learner: expected logistic|mlp|intercept_only, got '" + v + "'");
  } else if (key == "ranking") {
    if (v == "calibrated") c.ranking = RankingMode::calibrated;
    else if (v == "plugin") c.ranking = RankingMode::plugin;
    else throw ConfigError("ranking: expected calibrated|plugin, got '" + v + "'");
  } else if (key == "utility") {
    if (v == "multiplicative") c.utility.kind = UtilityForm::Kind::multiplicative;
    else if (v == "power_weighted") c.utility.kind = UtilityForm::Kind::power_weighted;
    else throw ConfigError("utility: expected multiplicative|power_weighted, got '" + v + "'");
  } else if (key == "gamma") c.utility.gamma = to_real(key, v);
  else if (key == "item_factors") c.item_factors = to_int(key, v);
  else if (key == "item_noise") c.item_noise = to_real(key, v);
  else if (key == "quality_correlation") c.quality_correlation = to_real(key, v);
  else if (key == "weight_concentration") c.weight_concentration = to_real(key, v);
  else if (key == "prestige_noise") c.prestige_noise = to_real(key, v);
  else if (key == "mechanism") {
    parse_mechanism(v);
    o.mechanism = v;
  } else if (key == "signal_count") {
    o.signal_count = to_int(key, v);
    if (o.signal_count < 1) throw ConfigError("signal_count must be >= 1");
  } else if (key == "departments") o.departments = v;
  else if (key == "out") o.out = v;
  else if (key == "diagnostics") o.diagnostics = to_bool(key, v);
  else throw ConfigError("unknown setting '" + raw_key + "'");
}

void load_config_file(const std::string& path, RunOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "", "cannot open config file");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    // Comments start at '#' outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"') quoted = !quoted;
      if (s[i] == '#' && !quoted) {
        s = s.substr(0, i);
        break;
      }
    }
    s = detail::trim(s);
    if (s.empty()) continue;
    if (s.front() == '[' && s.back() == ']' && s.find('=') == std::string_view::npos) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError(path, lineno, "", "expected key = value");
    const std::string key(detail::trim(s.substr(0, eq)));
    const std::string value(detail::trim(s.substr(eq + 1)));
    try {
      apply_setting(options, key, value);
    } catch (const ConfigError& e) {
      throw ParseError(path, lineno, key, e.what());
    }
  }
}

std::vector<std::pair<std::string, std::string>> describe(const RunOptions& o) {
  const MarketConfig& c = o.market;
  auto real = [](double x) { return detail::format_double(x); };
  return {{"m", std::to_string(c.m)},
          {"n", std::to_string(c.n)},
          {"p_d", std::to_string(c.p_d)},
          {"p_v", std::to_string(c.p_v)},
          {"tier_boundaries", join(c.tier_boundaries)},
          {"years", std::to_string(c.years)},
          {"burn_in_years", std::to_string(c.burn_in_years)},
          {"replications", std::to_string(c.replications)},
          {"rho", real(c.rho)},
          {"alpha", real(c.alpha)},
          {"B", std::to_string(c.B)},
          {"activation_prob", real(c.activation_prob)},
          {"capacity_default", std::to_string(c.capacity_default)},
          {"seed", std::to_string(c.seed)},
          {"beta", real(c.beta)},
          {"lambda", real(c.lambda)},
          {"learner", learner_name(c.learner)},
          {"ranking", ranking_name(c.ranking)},
          {"utility", c.utility.kind == UtilityForm::Kind::multiplicative ? "multiplicative" : "power_weighted"},
          {"gamma", real(c.utility.gamma)},
          {"item_factors", std::to_string(c.item_factors)},
          {"item_noise", real(c.item_noise)},
          {"quality_correlation", real(c.quality_correlation)},
          {"weight_concentration", real(c.weight_concentration)},
          {"prestige_noise", real(c.prestige_noise)},
          {"mechanism", o.mechanism},
          {"signal_count", std::to_string(o.signal_count)},
          {"departments", o.departments},
          {"out", o.out},
          {"diagnostics", o.diagnostics ? "true" : "false"}};
}

}  // namespace jobmarket
