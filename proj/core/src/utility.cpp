#include "jobmarket/utility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace jobmarket {

double alignment_score(std::span<const double> q, std::span<const double> d,
                       const AlignmentParams& params) {
  if (q.size() != d.size() || q.size() != params.item_weights.size()) {
    throw std::invalid_argument("alignment_score: dimension mismatch (q=" +
                                std::to_string(q.size()) + ", d=" + std::to_string(d.size()) +
                                ", weights=" + std::to_string(params.item_weights.size()) + ")");
  }
  double distance = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    distance += params.item_weights[k] * std::abs(q[k] - d[k]);
  }
  return params.floor + (1.0 - params.floor) * (1.0 - distance);
}

double nondisclosure_floor(std::span<const double> disclosed_alignments, double fallback) {
  if (disclosed_alignments.empty()) return fallback;
  return *std::min_element(disclosed_alignments.begin(), disclosed_alignments.end());
}

std::vector<double> nondisclosure_floors(std::span<const DepartmentProfile> departments,
                                         std::span<const CandidateProfile> cohort,
                                         const AlignmentParams& params) {
  std::vector<double> floors(departments.size(), params.floor);
  std::vector<bool> seen(departments.size(), false);
  for (const auto& cand : cohort) {
    for (int j : cand.disclosure_set) {
      const auto jj = static_cast<std::size_t>(j);
      const double f = alignment_score(cand.reported_prefs, departments[jj].attributes, params);
      if (!seen[jj] || f < floors[jj]) floors[jj] = f;
      seen[jj] = true;
    }
  }
  return floors;
}

double effective_alignment(const CandidateProfile& cand, const DepartmentProfile& dept,
                           double dept_floor, const AlignmentParams& params) {
  if (cand.discloses_to(dept.id)) {
    return alignment_score(cand.reported_prefs, dept.attributes, params);
  }
  return dept_floor;
}

double department_utility(std::span<const double> v, double f, std::span<const double> weights,
                          const UtilityForm& form) {
  if (v.size() != weights.size()) {
    throw std::invalid_argument("department_utility: quality and weight dimensions differ");
  }
  double quality = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) quality += weights[k] * v[k];
  if (form.kind == UtilityForm::Kind::power_weighted) return quality * std::pow(f, form.gamma);
  return quality * f;
}

double candidate_utility(double prestige, double true_alignment, double beta) {
  return beta * prestige + (1.0 - beta) * (2.0 * true_alignment - 1.0);
}

double candidate_utility(const CandidateProfile& cand, const DepartmentProfile& dept, double beta,
                         const AlignmentParams& params) {
  return candidate_utility(dept.prestige,
                           alignment_score(cand.true_prefs, dept.attributes, params), beta);
}

}  // namespace jobmarket
