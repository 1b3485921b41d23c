#include "jobmarket/offers.hpp"

#include <stdexcept>

namespace jobmarket {

std::vector<int> MatchingOutcome::unfilled_departments() const {
  std::vector<int> out;
  for (std::size_t j = 0; j < active.size(); ++j) {
    if (active[j] && hire_of_department[j] < 0) out.push_back(static_cast<int>(j));
  }
  return out;
}

std::vector<int> MatchingOutcome::unmatched_candidates() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < dept_of_candidate.size(); ++i) {
    if (dept_of_candidate[i] < 0) out.push_back(static_cast<int>(i));
  }
  return out;
}

int MatchingOutcome::hires() const {
  int h = 0;
  for (int d : dept_of_candidate) h += d >= 0 ? 1 : 0;
  return h;
}

MatchingOutcome run_offer_rounds(const std::vector<std::vector<int>>& interview_lists,
                                 const std::vector<bool>& active, std::span<const double> v,
                                 int candidates) {
  const std::size_t m = interview_lists.size();
  const auto n = static_cast<std::size_t>(candidates);
  if (active.size() != m) throw std::invalid_argument("run_offer_rounds: activity flags per department required");
  if (v.size() != m * n) throw std::invalid_argument("run_offer_rounds: V must be departments x candidates");

  MatchingOutcome out;
  out.dept_of_candidate.assign(n, -1);
  out.hire_of_department.assign(m, -1);
  out.fill_round.assign(m, -1);
  out.active = active;

  std::vector<std::size_t> next(m, 0);
  std::vector<int> best(n, -1);
  std::vector<int> touched;
  std::vector<std::pair<int, int>> round_offers;  // (dept, cand)
  for (int round = 0;; ++round) {
    round_offers.clear();
    for (std::size_t j = 0; j < m; ++j) {
      if (!active[j] || out.hire_of_department[j] >= 0) continue;
      const auto& list = interview_lists[j];
      while (next[j] < list.size() && out.dept_of_candidate[static_cast<std::size_t>(list[next[j]])] >= 0) {
        ++next[j];
      }
      if (next[j] >= list.size()) continue;
      round_offers.emplace_back(static_cast<int>(j), list[next[j]]);
      ++next[j];
    }
    if (round_offers.empty()) break;

    touched.clear();
    for (const auto& [j, i] : round_offers) {
      const auto ii = static_cast<std::size_t>(i);
      int& b = best[ii];
      if (b < 0) {
        touched.push_back(i);
        b = j;
      } else {
        const double vj = v[static_cast<std::size_t>(j) * n + ii];
        const double vb = v[static_cast<std::size_t>(b) * n + ii];
        if (vj > vb || (vj == vb && j < b)) b = j;
      }
    }
    for (const auto& [j, i] : round_offers) {
      const bool accepted = best[static_cast<std::size_t>(i)] == j;
      out.offers.push_back({round, j, i, accepted});
      if (accepted) {
        out.dept_of_candidate[static_cast<std::size_t>(i)] = j;
        out.hire_of_department[static_cast<std::size_t>(j)] = i;
        out.fill_round[static_cast<std::size_t>(j)] = round;
      }
    }
    for (int i : touched) best[static_cast<std::size_t>(i)] = -1;
  }
  return out;
}

}  // namespace jobmarket
