#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "jobmarket/types.hpp"

namespace jobmarket {

/// Synthetic departments in prestige-rank order (id 0 is rank 1). Prestige is
/// linear in rank, perturbed by `prestige_noise`, re-sorted and rescaled to
/// span [0, 1]. Attributes follow the same factor copula as questionnaire
/// items (uniform marginals); utility weights are Dirichlet draws.
std::vector<DepartmentProfile> generate_departments(const MarketConfig& cfg, std::uint64_t seed);

/// Defaults for everything except m and p_d.
std::vector<DepartmentProfile> generate_departments(int m, int p_d, std::uint64_t seed);

/// Columns: id,name,peer_score,region,attr_1..attr_pd,w_1..w_pv,capacity.
/// peer_score is written as the prestige value.
void write_departments_csv(std::ostream& out, const std::vector<DepartmentProfile>& departments);

/// Required: id, peer_score, attr_1..attr_p (consecutive). Optional: name,
/// region, w_1..w_q, capacity. Rows are ordered by id and re-indexed from 0.
/// peer_score is min-max mapped to prestige (all 1 when constant). Attribute
/// columns with values outside [0, 1] are min-max normalized. Missing weights
/// are uniform over `p_v`; missing capacity is `default_capacity`.
/// Throws ParseError naming the row and column on malformed input.
std::vector<DepartmentProfile> load_departments(const std::string& path, int p_v = 3,
                                                int default_capacity = 5);

}  // namespace jobmarket
