#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "jobmarket/types.hpp"

namespace jobmarket {

struct MechanismSpec {
  enum class Kind { questionnaire, baseline, aea, deferred_acceptance };

  Kind kind = Kind::questionnaire;
  double rho = 1.0;       // questionnaire only
  int signal_count = 2;   // aea only
  bool truthful = true;
  // Applied to the reports of `misreporters` when truthful is false.
  std::function<void(CandidateProfile&)> misreport_strategy;
  std::vector<int> misreporters;

  static MechanismSpec questionnaire(double rho) { return make(Kind::questionnaire, rho); }
  static MechanismSpec baseline() { return make(Kind::baseline, 0.0); }
  static MechanismSpec aea(int count = 2) {
    MechanismSpec s = make(Kind::aea, 0.0);
    s.signal_count = count;
    return s;
  }
  static MechanismSpec deferred_acceptance() { return make(Kind::deferred_acceptance, 0.0); }

  /// Participation rate actually used: 0 for every kind but questionnaire.
  double effective_rho() const { return kind == Kind::questionnaire ? rho : 0.0; }
  std::string name() const;

 private:
  static MechanismSpec make(Kind kind, double rho) {
    MechanismSpec s;
    s.kind = kind;
    s.rho = rho;
    return s;
  }
};

/// Parses questionnaire|baseline|aea|da. Throws ConfigError otherwise.
MechanismSpec::Kind parse_mechanism(const std::string& name);
std::string mechanism_name(MechanismSpec::Kind kind);

/// Number of participants at rate rho: floor(rho * n).
int participant_count(double rho, int n);

/// Resets reports and disclosure, then marks the first participant_count
/// candidates of `participation_order` as participants disclosing to all
/// `departments`. Reports equal true preferences unless the spec is
/// untruthful, in which case the strategy rewrites the misreporters' reports.
void apply_signaling(std::vector<CandidateProfile>& cohort, const MechanismSpec& spec,
                     std::span<const int> participation_order, int departments);

/// Each candidate's top `count` departments among `eligible` by V (ties to
/// the lower id). `v` is department-major: v[j * n + i]. Returns sorted sets.
std::vector<std::vector<int>> aea_signal_assignment(std::span<const double> v, int departments,
                                                    int candidates, std::span<const int> eligible,
                                                    int count);

/// Candidate-proposing deferred acceptance with unit capacities. Preference
/// lists are in descending order; a pair is acceptable only if each side
/// lists the other. Returns the department of each candidate (-1 unmatched).
std::vector<int> deferred_acceptance(const std::vector<std::vector<int>>& candidate_prefs,
                                     const std::vector<std::vector<int>>& department_prefs);

struct BlockingCount {
  long long count = 0;
  long long eligible = 0;
  double rate() const { return eligible == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(eligible); }
};

/// Pairs (i, j) with i in eligible[j] where j strictly prefers i to its hire
/// by `u_dept` and i strictly prefers j to its match by `v_cand`. Unmatched and
/// unfilled are least preferred. Utilities are department-major.
BlockingCount count_blocking_pairs(std::span<const int> dept_of_candidate,
                                   std::span<const int> hire_of_department,
                                   const std::vector<std::vector<int>>& eligible,
                                   std::span<const double> u_dept, std::span<const double> v_cand,
                                   int candidates);

/// One department with K interview slots and n_c quality clones (so only
/// alignment separates them). Acceptance probability is constant, so the
/// department ranks by alignment on reports; it offers down its interview
/// list and the focal candidate's payoff is the V of offers it receives.
struct CloneInstance {
  int clones = 25;   // n_c, including the focal candidate
  int slots = 5;     // K
  int items = 15;
  double beta = 0.6;
  double prestige = 1.0;
  int simulations = 4000;
  std::uint64_t seed = 7;
  std::vector<double> true_prefs;  // focal q*; drawn from the seed when empty
};

struct MisreportProbeResult {
  std::vector<std::string> labels;
  std::vector<double> gain;     // mean of W(q') - W(q*) per grid point
  std::vector<double> gain_se;  // paired Monte Carlo standard error
  std::size_t best = 0;         // index of the largest gain
  double bound = 0.0;           // K / n_c (no quality dispersion)
  double truthful_payoff = 0.0;

  double max_gain() const { return gain.empty() ? 0.0 : gain[best]; }
  double max_gain_se() const { return gain_se.empty() ? 0.0 : gain_se[best]; }
};

struct Misreport {
  std::string label;
  std::vector<double> report;
};

/// Truth, the item-space center, blends toward the center, the reflection
/// 1 - q*, and `random_draws` uniform reports.
std::vector<Misreport> default_misreport_grid(std::span<const double> true_prefs,
                                              int random_draws, std::uint64_t seed);

/// Common random numbers across the grid: department attributes and the other
/// clones' reports are redrawn per simulation and shared by every report.
MisreportProbeResult misreport_gain_probe(const CloneInstance& instance,
                                          std::span<const Misreport> grid);

}  // namespace jobmarket
