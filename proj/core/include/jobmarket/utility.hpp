#pragma once

#include <span>
#include <vector>

#include "jobmarket/types.hpp"

namespace jobmarket {

/// Weighted-L1 similarity mapped affinely onto [floor, 1]. Throws
/// std::invalid_argument when q, d and the weights differ in length.
double alignment_score(std::span<const double> q, std::span<const double> d,
                       const AlignmentParams& params);

/// Minimum alignment among disclosers; `fallback` when nobody disclosed.
double nondisclosure_floor(std::span<const double> disclosed_alignments, double fallback = 0.5);

/// Per-department floor over the candidates that disclosed to it, computed on
/// reported preferences.
std::vector<double> nondisclosure_floors(std::span<const DepartmentProfile> departments,
                                         std::span<const CandidateProfile> cohort,
                                         const AlignmentParams& params);

/// Alignment a department uses for a candidate: the score on reported
/// preferences for disclosers, the department's floor otherwise.
double effective_alignment(const CandidateProfile& cand, const DepartmentProfile& dept,
                           double dept_floor, const AlignmentParams& params);

/// U = (sum_k w_k v_k) * f, or * f^gamma for the power-weighted form.
double department_utility(std::span<const double> v, double f, std::span<const double> weights,
                          const UtilityForm& form = {});

/// V = beta * s + (1 - beta) * (2 f* - 1) with f* on true preferences.
double candidate_utility(double prestige, double true_alignment, double beta);

double candidate_utility(const CandidateProfile& cand, const DepartmentProfile& dept, double beta,
                         const AlignmentParams& params);

}  // namespace jobmarket
