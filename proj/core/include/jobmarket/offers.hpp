#pragma once

#include <span>
#include <vector>

namespace jobmarket {

struct OfferEvent {
  int round = 0;  // 0 is the first round, later rounds are the scramble
  int dept = 0;
  int cand = 0;
  bool accepted = false;
};

/// Result of one hiring cycle. Department-indexed vectors cover every
/// department; inactive ones are never filled.
struct MatchingOutcome {
  std::vector<int> dept_of_candidate;   // -1 when unmatched
  std::vector<int> hire_of_department;  // -1 when unfilled or inactive
  std::vector<int> fill_round;          // round of the accepted offer, -1 if none
  std::vector<bool> active;
  std::vector<OfferEvent> offers;

  bool filled_first_round(int j) const { return fill_round[static_cast<std::size_t>(j)] == 0; }
  bool filled_in_scramble(int j) const { return fill_round[static_cast<std::size_t>(j)] > 0; }
  std::vector<int> unfilled_departments() const;
  std::vector<int> unmatched_candidates() const;
  int hires() const;
};

/// Simultaneous offer rounds. In every round each open active department
/// offers to the next interviewee on its list who is still unmatched; each
/// candidate holding offers accepts the one with the largest V (ties to the
/// lower department id) and leaves the market. Runs until no offer is made.
/// `v` is department-major: v[j * candidates + i].
MatchingOutcome run_offer_rounds(const std::vector<std::vector<int>>& interview_lists,
                                 const std::vector<bool>& active, std::span<const double> v,
                                 int candidates);

}  // namespace jobmarket
