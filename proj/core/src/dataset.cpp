#include "jobmarket/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "csv_util.hpp"
#include "jobmarket/error.hpp"
#include "jobmarket/rng.hpp"

namespace jobmarket {

std::vector<DepartmentProfile> generate_departments(const MarketConfig& cfg, std::uint64_t seed) {
  if (cfg.m < 1) throw ConfigError("generate_departments: m must be >= 1");
  Rng rng(derive_seed(seed, Stream::departments));
  const auto m = static_cast<std::size_t>(cfg.m);
  const auto pd = static_cast<std::size_t>(cfg.p_d);
  const auto nf = static_cast<std::size_t>(std::max(0, cfg.item_factors));
  const double item_scale = 1.0 / std::sqrt(1.0 + cfg.item_noise * cfg.item_noise);

  std::vector<double> prestige(m, 1.0);
  if (m > 1) {
    for (std::size_t r = 0; r < m; ++r) {
      const double base = 1.0 - static_cast<double>(r) / static_cast<double>(m - 1);
      prestige[r] = base + cfg.prestige_noise * rng.normal();
    }
    std::sort(prestige.begin(), prestige.end(), std::greater<>());
    const double hi = prestige.front(), lo = prestige.back();
    for (auto& s : prestige) s = hi > lo ? (s - lo) / (hi - lo) : 1.0;
  }

  std::vector<DepartmentProfile> out(m);
  std::vector<double> factors(nf);
  for (std::size_t j = 0; j < m; ++j) {
    auto& d = out[j];
    d.id = static_cast<int>(j);
    d.name = "Department " + std::to_string(j + 1);
    d.prestige = prestige[j];
    d.capacity = cfg.capacity_default;
    d.region = static_cast<int>(rng.below(4));
    for (auto& f : factors) f = rng.normal();
    d.attributes.resize(pd);
    for (std::size_t k = 0; k < pd; ++k) {
      const double e = rng.normal();
      d.attributes[k] = normal_cdf(nf == 0 ? e : (factors[k % nf] + cfg.item_noise * e) * item_scale);
    }
    d.utility_weights = rng.dirichlet(static_cast<std::size_t>(cfg.p_v), cfg.weight_concentration);
  }
  return out;
}

std::vector<DepartmentProfile> generate_departments(int m, int p_d, std::uint64_t seed) {
  MarketConfig cfg;
  cfg.m = m;
  cfg.p_d = p_d;
  return generate_departments(cfg, seed);
}

void write_departments_csv(std::ostream& out, const std::vector<DepartmentProfile>& departments) {
  const std::size_t pd = departments.empty() ? 0 : departments.front().attributes.size();
  const std::size_t pv = departments.empty() ? 0 : departments.front().utility_weights.size();
  out << "id,name,peer_score,region";
  for (std::size_t k = 1; k <= pd; ++k) out << ",attr_" << k;
  for (std::size_t k = 1; k <= pv; ++k) out << ",w_" << k;
  out << ",capacity\n";
  for (const auto& d : departments) {
    out << d.id << ',' << detail::csv_escape(d.name) << ',' << detail::format_double(d.prestige) << ','
        << d.region;
    for (double a : d.attributes) out << ',' << detail::format_double(a);
    for (double w : d.utility_weights) out << ',' << detail::format_double(w);
    out << ',' << d.capacity << '\n';
  }
}

namespace {

std::vector<std::size_t> numbered_columns(const detail::CsvTable& t, const std::string& prefix) {
  std::vector<std::size_t> cols;
  for (std::size_t k = 1;; ++k) {
    const auto c = t.column(prefix + std::to_string(k));
    if (!c) break;
    cols.push_back(*c);
  }
  return cols;
}

}  // namespace

std::vector<DepartmentProfile> load_departments(const std::string& path, int p_v,
                                                int default_capacity) {
  const detail::CsvTable table = detail::read_csv(path);
  const auto id_col = table.column("id");
  const auto peer_col = table.column("peer_score");
  if (!id_col) throw ParseError(path, 0, "id", "missing column");
  if (!peer_col) throw ParseError(path, 0, "peer_score", "missing column");
  const auto name_col = table.column("name");
  const auto region_col = table.column("region");
  const auto cap_col = table.column("capacity");
  const auto attr_cols = numbered_columns(table, "attr_");
  const auto w_cols = numbered_columns(table, "w_");
  if (attr_cols.empty()) throw ParseError(path, 0, "attr_1", "missing column");
  if (table.rows.empty()) throw ParseError(path, 0, "", "no data rows");

  auto number = [&](std::size_t row, std::size_t col) {
    const auto v = detail::parse_double(table.rows[row][col]);
    if (!v) {
      throw ParseError(path, row + 1, table.header[col],
                       "not a finite number: '" + table.rows[row][col] + "'");
    }
    return *v;
  };
  auto integer = [&](std::size_t row, std::size_t col) {
    const auto v = detail::parse_int<long long>(table.rows[row][col]);
    if (!v) {
      throw ParseError(path, row + 1, table.header[col], "not an integer: '" + table.rows[row][col] + "'");
    }
    return *v;
  };

  struct Row {
    long long id;
    std::size_t line;
  };
  std::vector<Row> order;
  std::map<long long, std::size_t> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const long long id = integer(r, *id_col);
    if (!seen.emplace(id, r).second) throw ParseError(path, r + 1, "id", "duplicate id " + std::to_string(id));
    order.push_back({id, r});
  }
  std::sort(order.begin(), order.end(), [](const Row& a, const Row& b) { return a.id < b.id; });

  const std::size_t m = order.size();
  std::vector<double> peer(m);
  std::vector<std::vector<double>> attrs(attr_cols.size(), std::vector<double>(m));
  std::vector<DepartmentProfile> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t r = order[j].line;
    auto& d = out[j];
    d.id = static_cast<int>(j);
    d.name = name_col ? table.rows[r][*name_col] : std::to_string(order[j].id);
    d.region = region_col ? static_cast<int>(integer(r, *region_col)) : 0;
    peer[j] = number(r, *peer_col);
    for (std::size_t k = 0; k < attr_cols.size(); ++k) attrs[k][j] = number(r, attr_cols[k]);
    if (!w_cols.empty()) {
      double total = 0.0;
      for (std::size_t k : w_cols) {
        const double w = number(r, k);
        if (w < 0.0) throw ParseError(path, r + 1, table.header[k], "negative utility weight");
        d.utility_weights.push_back(w);
        total += w;
      }
      if (!(total > 0.0)) throw ParseError(path, r + 1, table.header[w_cols.front()], "utility weights sum to zero");
      // Near-unit sums are kept as written so a written file loads back exactly.
      if (std::abs(total - 1.0) > 1e-9) {
        for (auto& w : d.utility_weights) w /= total;
      }
    } else {
      d.utility_weights.assign(static_cast<std::size_t>(p_v), 1.0 / p_v);
    }
    d.capacity = cap_col ? static_cast<int>(integer(r, *cap_col)) : default_capacity;
    if (d.capacity < 1) throw ParseError(path, r + 1, "capacity", "capacity must be >= 1");
  }

  const auto [pmin, pmax] = std::minmax_element(peer.begin(), peer.end());
  const double lo = *pmin, hi = *pmax;
  for (std::size_t j = 0; j < m; ++j) out[j].prestige = hi > lo ? (peer[j] - lo) / (hi - lo) : 1.0;

  for (auto& col : attrs) {
    const auto [amin, amax] = std::minmax_element(col.begin(), col.end());
    const double a = *amin, b = *amax;
    if (a >= 0.0 && b <= 1.0) continue;
    for (auto& x : col) x = b > a ? (x - a) / (b - a) : 0.5;
  }
  for (std::size_t j = 0; j < m; ++j) {
    out[j].attributes.resize(attrs.size());
    for (std::size_t k = 0; k < attrs.size(); ++k) out[j].attributes[k] = attrs[k][j];
  }
  return out;
}

}  // namespace jobmarket
