#include "jobmarket/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "csv_util.hpp"
#include "jobmarket/rng.hpp"

namespace jobmarket {
namespace {

constexpr double kClipLow = 0.01;
constexpr double kClipHigh = 0.99;
constexpr double kProbEps = 1e-12;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double clamp_open(double p) { return std::clamp(p, kProbEps, 1.0 - kProbEps); }

// Solves A x = b in place for symmetric positive definite A (n x n, row-major).
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    a[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / d;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
    b[i] = s / a[i * n + i];
  }
  return true;
}

struct Design {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> x;  // row-major
  std::vector<double> y;
  std::vector<double> w;
  double total_weight = 0.0;
  double positive_weight = 0.0;
};

Design build_design(std::span<const OfferRecord> history, std::span<const double> weights,
                    const LearnerSpec& spec) {
  Design d;
  d.cols = feature_count(spec);
  for (std::size_t r = 0; r < history.size(); ++r) {
    const double w = weights.empty() ? 1.0 : weights[r];
    if (!history[r].offered || !(w > 0.0)) continue;
    d.x.resize(d.x.size() + d.cols);
    fill_features(features_of(history[r]), spec.use_signal, d.x.data() + d.rows * d.cols);
    const double y = history[r].accepted ? 1.0 : 0.0;
    d.y.push_back(y);
    d.w.push_back(w);
    d.total_weight += w;
    d.positive_weight += w * y;
    ++d.rows;
  }
  return d;
}

double logistic_objective(const Design& d, const std::vector<double>& beta, double lambda) {
  double j = 0.0;
  for (std::size_t r = 0; r < d.rows; ++r) {
    const double* xr = d.x.data() + r * d.cols;
    double z = 0.0;
    for (std::size_t c = 0; c < d.cols; ++c) z += xr[c] * beta[c];
    j += d.w[r] * (softplus(z) - d.y[r] * z);
  }
  for (std::size_t c = 1; c < d.cols; ++c) j += 0.5 * lambda * beta[c] * beta[c];
  return j;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::vector<OfferRecord> HistoryDataset::offers() const {
  std::vector<OfferRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const OfferRecord& r) { return r.offered; });
  return out;
}

std::size_t feature_count(const LearnerSpec& spec) { return spec.use_signal ? 7 : 6; }

void fill_features(const AcceptanceFeatures& x, bool use_signal, double* out) {
  out[0] = 1.0;
  out[1] = x.prestige;
  out[2] = x.vbar;
  out[3] = x.alignment;
  out[4] = x.prestige * x.alignment;
  out[5] = x.vbar * x.alignment;
  if (use_signal) out[6] = x.signal ? 1.0 : 0.0;
}

AcceptanceModel AcceptanceModel::constant(double p, bool single_class) {
  AcceptanceModel m;
  m.kind_ = Kind::constant;
  m.constant_ = p;
  m.single_class_ = single_class;
  return m;
}

AcceptanceModel cold_start_model() { return AcceptanceModel::constant(0.5); }

double AcceptanceModel::predict(const AcceptanceFeatures& x) const {
  if (kind_ == Kind::constant) return constant_;
  double f[7];
  fill_features(x, use_signal_, f);
  const std::size_t cols = use_signal_ ? 7 : 6;
  if (kind_ == Kind::logistic) {
    double z = 0.0;
    for (std::size_t c = 0; c < cols; ++c) z += coef_[c] * f[c];
    return clamp_open(sigmoid(z));
  }
  // Perceptron layout: W1 (hidden x inputs), b1, w2, b2; inputs skip the intercept.
  const std::size_t in = cols - 1;
  const auto h = static_cast<std::size_t>(hidden_);
  const double* w1 = coef_.data();
  const double* b1 = w1 + h * in;
  const double* w2 = b1 + h;
  double z = w2[h];
  for (std::size_t u = 0; u < h; ++u) {
    double a = b1[u];
    for (std::size_t c = 0; c < in; ++c) a += w1[u * in + c] * f[c + 1];
    z += w2[u] * std::tanh(a);
  }
  return clamp_open(sigmoid(z));
}

AcceptanceModel fit_acceptance_model(std::span<const OfferRecord> history, const LearnerSpec& spec,
                                     std::uint64_t seed) {
  return fit_acceptance_model_weighted(history, {}, spec, seed, nullptr);
}

AcceptanceModel fit_acceptance_model_weighted(std::span<const OfferRecord> history,
                                              std::span<const double> weights,
                                              const LearnerSpec& spec, std::uint64_t seed,
                                              const AcceptanceModel* warm_start) {
  if (!weights.empty() && weights.size() != history.size()) {
    throw std::invalid_argument("fit_acceptance_model: one weight per history row required");
  }
  if (spec.lambda_per_sample < 0.0) throw std::invalid_argument("ridge penalty must be >= 0");

  const Design d = build_design(history, weights, spec);
  if (d.rows == 0) return cold_start_model();
  const double rate = d.positive_weight / d.total_weight;
  if (d.positive_weight <= 0.0 || d.positive_weight >= d.total_weight) {
    return AcceptanceModel::constant(std::clamp(rate, kClipLow, kClipHigh), true);
  }
  if (spec.kind == LearnerKind::intercept_only) return AcceptanceModel::constant(rate);

  AcceptanceModel model;
  model.use_signal_ = spec.use_signal;
  const std::size_t p = d.cols;

  if (spec.kind == LearnerKind::logistic) {
    const double lambda = spec.lambda_per_sample * d.total_weight;
    std::vector<double> beta(p, 0.0);
    if (warm_start != nullptr && warm_start->kind() == AcceptanceModel::Kind::logistic &&
        warm_start->coefficients().size() == p) {
      beta = warm_start->coefficients();
    } else {
      beta[0] = std::log(rate / (1.0 - rate));
    }
    double obj = logistic_objective(d, beta, lambda);
    std::vector<double> hess(p * p), grad(p), trial(p);
    model.converged_ = false;
    int it = 0;
    for (; it < spec.max_iterations; ++it) {
      std::fill(hess.begin(), hess.end(), 0.0);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t r = 0; r < d.rows; ++r) {
        const double* xr = d.x.data() + r * p;
        double z = 0.0;
        for (std::size_t c = 0; c < p; ++c) z += xr[c] * beta[c];
        const double pr = sigmoid(z);
        const double g = d.w[r] * (pr - d.y[r]);
        const double h = d.w[r] * pr * (1.0 - pr);
        for (std::size_t a = 0; a < p; ++a) {
          grad[a] += g * xr[a];
          for (std::size_t b = 0; b <= a; ++b) hess[a * p + b] += h * xr[a] * xr[b];
        }
      }
      for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < a; ++b) hess[b * p + a] = hess[a * p + b];
      }
      for (std::size_t c = 1; c < p; ++c) {
        grad[c] += lambda * beta[c];
        hess[c * p + c] += lambda;
      }
      std::vector<double> step = grad;
      std::vector<double> h = hess;
      if (!cholesky_solve(h, step, p)) {
        // Flat directions (lambda = 0 with collinear features).
        h = hess;
        step = grad;
        for (std::size_t c = 0; c < p; ++c) h[c * p + c] += 1e-8;
        if (!cholesky_solve(h, step, p)) break;
      }
      double t = 1.0;
      double next = obj;
      for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
        for (std::size_t c = 0; c < p; ++c) trial[c] = beta[c] - t * step[c];
        next = logistic_objective(d, trial, lambda);
        if (next <= obj) break;
      }
      double max_step = 0.0;
      for (std::size_t c = 0; c < p; ++c) max_step = std::max(max_step, std::abs(trial[c] - beta[c]));
      if (!(next <= obj)) {
        model.converged_ = max_step < spec.tolerance;
        break;
      }
      beta = trial;
      obj = next;
      if (max_step < spec.tolerance) {
        model.converged_ = true;
        ++it;
        break;
      }
    }
    model.kind_ = AcceptanceModel::Kind::logistic;
    model.iterations_ = it;
    model.coef_ = std::move(beta);
    return model;
  }

  // One-hidden-layer perceptron, full-batch Adam on mean penalized BCE.
  const std::size_t in = p - 1;
  const auto h = static_cast<std::size_t>(std::max(1, spec.hidden_units));
  const std::size_t n_params = h * in + h + h + 1;
  std::vector<double> theta(n_params, 0.0);
  if (warm_start != nullptr && warm_start->kind() == AcceptanceModel::Kind::mlp &&
      warm_start->coefficients().size() == n_params) {
    theta = warm_start->coefficients();
  } else {
    Rng rng(derive_seed(seed, Stream::learner_init));
    const double a1 = std::sqrt(6.0 / static_cast<double>(in + h));
    const double a2 = std::sqrt(6.0 / static_cast<double>(h + 1));
    for (std::size_t k = 0; k < h * in; ++k) theta[k] = a1 * (2.0 * rng.uniform() - 1.0);
    for (std::size_t u = 0; u < h; ++u) theta[h * in + h + u] = a2 * (2.0 * rng.uniform() - 1.0);
    theta[n_params - 1] = std::log(rate / (1.0 - rate));
  }
  const double lambda = spec.lambda_per_sample;
  const double inv_w = 1.0 / d.total_weight;
  std::vector<double> grad(n_params), m1(n_params, 0.0), m2(n_params, 0.0), act(h);
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double prev = std::numeric_limits<double>::infinity();
  model.converged_ = false;
  int epoch = 0;
  for (; epoch < spec.max_epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double loss = 0.0;
    double* gw1 = grad.data();
    double* gb1 = gw1 + h * in;
    double* gw2 = gb1 + h;
    const double* w1 = theta.data();
    const double* b1 = w1 + h * in;
    const double* w2 = b1 + h;
    for (std::size_t r = 0; r < d.rows; ++r) {
      const double* xr = d.x.data() + r * p + 1;
      double z = w2[h];
      for (std::size_t u = 0; u < h; ++u) {
        double a = b1[u];
        for (std::size_t c = 0; c < in; ++c) a += w1[u * in + c] * xr[c];
        act[u] = std::tanh(a);
        z += w2[u] * act[u];
      }
      const double wr = d.w[r] * inv_w;
      loss += wr * (softplus(z) - d.y[r] * z);
      const double dz = wr * (sigmoid(z) - d.y[r]);
      gw2[h] += dz;
      for (std::size_t u = 0; u < h; ++u) {
        gw2[u] += dz * act[u];
        const double da = dz * w2[u] * (1.0 - act[u] * act[u]);
        gb1[u] += da;
        for (std::size_t c = 0; c < in; ++c) gw1[u * in + c] += da * xr[c];
      }
    }
    for (std::size_t k = 0; k < h * in; ++k) {
      loss += 0.5 * lambda * theta[k] * theta[k];
      grad[k] += lambda * theta[k];
    }
    for (std::size_t u = 0; u < h; ++u) {
      const std::size_t k = h * in + h + u;
      loss += 0.5 * lambda * theta[k] * theta[k];
      grad[k] += lambda * theta[k];
    }
    if (std::abs(prev - loss) < spec.tolerance) {
      model.converged_ = true;
      break;
    }
    prev = loss;
    const double c1 = 1.0 - std::pow(beta1, epoch + 1);
    const double c2 = 1.0 - std::pow(beta2, epoch + 1);
    for (std::size_t k = 0; k < n_params; ++k) {
      m1[k] = beta1 * m1[k] + (1.0 - beta1) * grad[k];
      m2[k] = beta2 * m2[k] + (1.0 - beta2) * grad[k] * grad[k];
      theta[k] -= spec.learning_rate * (m1[k] / c1) / (std::sqrt(m2[k] / c2) + eps);
    }
  }
  model.kind_ = AcceptanceModel::Kind::mlp;
  model.hidden_ = static_cast<int>(h);
  model.iterations_ = epoch;
  model.coef_ = std::move(theta);
  return model;
}

void AcceptanceEnsemble::draws(const AcceptanceFeatures& x, std::span<double> out) const {
  for (std::size_t b = 0; b < models_.size(); ++b) out[b] = models_[b].predict(x);
}

double AcceptanceEnsemble::estimate(const AcceptanceFeatures& x) const {
  double s = 0.0;
  for (const auto& m : models_) s += m.predict(x);
  return s / static_cast<double>(models_.size());
}

AcceptanceEnsemble bootstrap_ensemble(const HistoryDataset& history, int B, const LearnerSpec& spec,
                                      std::uint64_t seed) {
  if (B < 2) throw std::invalid_argument("bootstrap_ensemble: B must be at least 2");
  const std::vector<OfferRecord> rows = history.offers();
  const AcceptanceModel full = fit_acceptance_model(rows, spec, seed);
  std::vector<AcceptanceModel> models;
  models.reserve(static_cast<std::size_t>(B));
  int failed = 0;
  std::vector<double> counts(rows.size());
  for (int b = 0; b < B; ++b) {
    Rng rng(derive_seed(seed, Stream::bootstrap, static_cast<std::uint64_t>(b)));
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) counts[rng.below(rows.size())] += 1.0;
    AcceptanceModel m = fit_acceptance_model_weighted(
        rows, counts, spec, derive_seed(seed, Stream::learner_init, static_cast<std::uint64_t>(b)),
        &full);
    if (!all_finite(m.coefficients())) {
      ++failed;
      continue;
    }
    models.push_back(std::move(m));
  }
  if (models.empty()) throw std::runtime_error("bootstrap_ensemble: every replicate fit failed");
  return AcceptanceEnsemble(std::move(models), failed);
}

ExpectedUtilities predict_expected_utilities(const AcceptanceEnsemble& ensemble,
                                             std::span<const AcceptanceFeatures> features,
                                             std::span<const double> utilities) {
  if (features.size() != utilities.size()) {
    throw std::invalid_argument("predict_expected_utilities: feature and utility counts differ");
  }
  ExpectedUtilities out;
  out.candidates = features.size();
  out.B = ensemble.size();
  out.draws.resize(out.candidates * out.B);
  out.estimate.resize(out.candidates);
  for (std::size_t i = 0; i < out.candidates; ++i) {
    std::span<double> row(out.draws.data() + i * out.B, out.B);
    ensemble.draws(features[i], row);
    double pi_hat = 0.0;
    for (double p : row) pi_hat += p;
    pi_hat /= static_cast<double>(out.B);
    for (double& p : row) p *= utilities[i];
    out.estimate[i] = utilities[i] * pi_hat;
  }
  return out;
}

void write_history_csv(std::ostream& out, const HistoryDataset& history) {
  out << "year,dept_id,cand_id,s,vbar,f,offered,accepted\n";
  for (const auto& r : history.records) {
    out << r.year << ',' << r.dept_id << ',' << r.cand_id << ',' << detail::format_double(r.prestige)
        << ',' << detail::format_double(r.vbar) << ',' << detail::format_double(r.alignment) << ','
        << (r.offered ? 1 : 0) << ',' << (r.accepted ? 1 : 0) << '\n';
  }
}

HistoryDataset read_history_csv(const std::string& path) {
  const detail::CsvTable table = detail::read_csv(path);
  static const char* const kColumns[] = {"year", "dept_id", "cand_id", "s",
                                         "vbar", "f",       "offered", "accepted"};
  std::size_t idx[8];
  for (std::size_t c = 0; c < 8; ++c) {
    const auto col = table.column(kColumns[c]);
    if (!col) throw ParseError(path, 0, kColumns[c], "missing column");
    idx[c] = *col;
  }
  HistoryDataset out;
  out.records.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    auto int_at = [&](std::size_t c) {
      const auto v = detail::parse_int<int>(row[idx[c]]);
      if (!v) throw ParseError(path, r + 1, kColumns[c], "not an integer: '" + row[idx[c]] + "'");
      return *v;
    };
    auto real_at = [&](std::size_t c) {
      const auto v = detail::parse_double(row[idx[c]]);
      if (!v) throw ParseError(path, r + 1, kColumns[c], "not a number: '" + row[idx[c]] + "'");
      return *v;
    };
    auto flag_at = [&](std::size_t c) {
      const int v = int_at(c);
      if (v != 0 && v != 1) throw ParseError(path, r + 1, kColumns[c], "expected 0 or 1");
      return v == 1;
    };
    OfferRecord rec;
    rec.year = int_at(0);
    rec.dept_id = int_at(1);
    rec.cand_id = int_at(2);
    rec.prestige = real_at(3);
    rec.vbar = real_at(4);
    rec.alignment = real_at(5);
    rec.offered = flag_at(6);
    rec.accepted = flag_at(7);
    if (rec.accepted && !rec.offered) {
      throw ParseError(path, r + 1, "accepted", "accepted without an offer");
    }
    out.records.push_back(rec);
  }
  return out;
}

}  // namespace jobmarket
