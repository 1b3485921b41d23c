#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jobmarket/types.hpp"

namespace jobmarket {

/// What a department observes about an (offer, candidate) pair at offer time.
struct AcceptanceFeatures {
  double prestige = 0.0;
  double vbar = 0.0;
  double alignment = 0.5;
  bool signal = false;
};

inline AcceptanceFeatures features_of(const OfferRecord& r) {
  return {r.prestige, r.vbar, r.alignment, r.signal};
}

/// Offer records of one market. Only rows with `offered` set enter a fit.
struct HistoryDataset {
  std::vector<OfferRecord> records;

  void append(std::span<const OfferRecord> rows) { records.insert(records.end(), rows.begin(), rows.end()); }
  std::size_t size() const { return records.size(); }
  std::vector<OfferRecord> offers() const;
};

struct LearnerSpec {
  LearnerKind kind = LearnerKind::logistic;
  // Ridge penalty is lambda_per_sample * (number of fitted rows).
  double lambda_per_sample = 1e-3;
  bool use_signal = false;  // appends the signal indicator as a feature
  double tolerance = 1e-8;
  int max_iterations = 100;
  // Perceptron learner only.
  int hidden_units = 16;
  int max_epochs = 3000;
  double learning_rate = 0.02;
};

/// Fixed feature layout: (1, s, vbar, f, s*f, vbar*f[, signal]).
std::size_t feature_count(const LearnerSpec& spec);
void fill_features(const AcceptanceFeatures& x, bool use_signal, double* out);

class AcceptanceModel {
 public:
  enum class Kind { constant, logistic, mlp };

  AcceptanceModel() = default;
  static AcceptanceModel constant(double p, bool single_class = false);

  /// Probability strictly inside (0, 1).
  double predict(const AcceptanceFeatures& x) const;

  Kind kind() const { return kind_; }
  /// Set when the training data held a single outcome class.
  bool single_class() const { return single_class_; }
  bool converged() const { return converged_; }
  int iterations() const { return iterations_; }
  const std::vector<double>& coefficients() const { return coef_; }

 private:
  friend AcceptanceModel fit_acceptance_model_weighted(std::span<const OfferRecord>,
                                                       std::span<const double>, const LearnerSpec&,
                                                       std::uint64_t, const AcceptanceModel*);
  Kind kind_ = Kind::constant;
  double constant_ = 0.5;
  bool single_class_ = false;
  bool converged_ = true;
  bool use_signal_ = false;
  int iterations_ = 0;
  int hidden_ = 0;
  std::vector<double> coef_;  // logistic: beta; mlp: packed W1, b1, w2, b2
};

/// Cold start: the constant 0.5 model.
AcceptanceModel cold_start_model();

/// Penalized-BCE fit on the offered rows of `history`. Empty input gives the
/// cold-start model; a single outcome class gives the empirical rate clipped
/// to [0.01, 0.99] with the single_class flag set.
AcceptanceModel fit_acceptance_model(std::span<const OfferRecord> history, const LearnerSpec& spec,
                                     std::uint64_t seed);

/// Same with a nonnegative frequency weight per row. `warm_start`, when it is
/// a model of the requested kind, seeds the iteration.
AcceptanceModel fit_acceptance_model_weighted(std::span<const OfferRecord> history,
                                              std::span<const double> weights,
                                              const LearnerSpec& spec, std::uint64_t seed,
                                              const AcceptanceModel* warm_start = nullptr);

class AcceptanceEnsemble {
 public:
  AcceptanceEnsemble() = default;
  explicit AcceptanceEnsemble(std::vector<AcceptanceModel> models, int failed = 0)
      : models_(std::move(models)), failed_(failed) {}

  std::size_t size() const { return models_.size(); }
  const AcceptanceModel& model(std::size_t b) const { return models_[b]; }
  int failed_replicates() const { return failed_; }

  /// pi^(b) for b = 0..B-1 written to `out` (size B).
  void draws(const AcceptanceFeatures& x, std::span<double> out) const;
  /// Mean of the draws.
  double estimate(const AcceptanceFeatures& x) const;

 private:
  std::vector<AcceptanceModel> models_;
  int failed_ = 0;
};

/// B refits on with-replacement resamples of the offered rows (resample size
/// equals the number of offers). Replicate b uses a seed derived from
/// (seed, b). Throws std::runtime_error only if every replicate fails.
AcceptanceEnsemble bootstrap_ensemble(const HistoryDataset& history, int B,
                                      const LearnerSpec& spec, std::uint64_t seed);

/// Û^(b) = U * pi^(b) and Û = U * mean_b pi^(b) over one pool.
struct ExpectedUtilities {
  std::size_t candidates = 0;
  std::size_t B = 0;
  std::vector<double> draws;     // candidate-major: draws[i * B + b]
  std::vector<double> estimate;  // per candidate

  double draw(std::size_t i, std::size_t b) const { return draws[i * B + b]; }
};

ExpectedUtilities predict_expected_utilities(const AcceptanceEnsemble& ensemble,
                                             std::span<const AcceptanceFeatures> features,
                                             std::span<const double> utilities);

/// Header: year,dept_id,cand_id,s,vbar,f,offered,accepted
void write_history_csv(std::ostream& out, const HistoryDataset& history);
HistoryDataset read_history_csv(const std::string& path);

}  // namespace jobmarket
