#include "fmros/models/linear.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fmros {

namespace {

std::string column_name(std::size_t k) {
  if (k == 0) return "intercept";
  if (k <= kPredictorNames.size()) return kPredictorNames[k - 1];
  return "x" + std::to_string(k);
}

}  // namespace

LinearModel fit_linear(const ModelDataset& data, std::span<const double> w) {
  const std::size_t n = data.rows();
  const std::size_t p = kNumPredictors;
  const std::size_t cols = p + 1;
  if (w.size() != n) throw std::invalid_argument("fit_linear: weight length mismatch");
  if (n <= cols) throw std::invalid_argument("fit_linear: need more rows than parameters");

  std::size_t n_pos = 0;
  for (double wi : w) {
    if (wi < 0.0) throw std::invalid_argument("fit_linear: negative weight");
    if (wi > 0.0) ++n_pos;
  }
  if (n_pos < cols)
    throw std::invalid_argument("fit_linear: fewer positive weights than parameters");

  // Column-major scaled design [sqrt(w) | sqrt(w)*X] and target sqrt(w)*y.
  std::vector<double> a(n * cols);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::sqrt(w[i]);
    a[i] = s;
    const auto row = data.row(i);
    for (std::size_t j = 0; j < p; ++j) a[(j + 1) * n + i] = s * row[j];
    b[i] = s * data.y[i];
  }

  // Rank detection is relative to the original column scale.
  std::vector<double> col_scale(cols);
  for (std::size_t k = 0; k < cols; ++k) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += a[k * n + i] * a[k * n + i];
    col_scale[k] = std::sqrt(norm);
  }

  // Householder QR, R kept in the upper triangle.
  std::vector<double> beta(cols, 0.0);
  for (std::size_t k = 0; k < cols; ++k) {
    double* col = a.data() + k * n;
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm += col[i] * col[i];
    norm = std::sqrt(norm);
    if (col[k] > 0) norm = -norm;

    const double rkk = norm;
    if (std::abs(rkk) <= 1e-10 * col_scale[k]) {
      throw std::invalid_argument("fit_linear: singular design, column \"" + column_name(k) +
                                  "\" is collinear with earlier columns");
    }

    // Householder vector v stored in place of the eliminated column tail.
    col[k] -= norm;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) vnorm2 += col[i] * col[i];
    if (vnorm2 > 0.0) {
      for (std::size_t j = k + 1; j < cols; ++j) {
        double* cj = a.data() + j * n;
        double dot = 0.0;
        for (std::size_t i = k; i < n; ++i) dot += col[i] * cj[i];
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < n; ++i) cj[i] -= f * col[i];
      }
      double dotb = 0.0;
      for (std::size_t i = k; i < n; ++i) dotb += col[i] * b[i];
      const double f = 2.0 * dotb / vnorm2;
      for (std::size_t i = k; i < n; ++i) b[i] -= f * col[i];
    }
    col[k] = rkk;  // zero the rest implicitly; lower part holds v but is not reread
  }

  for (std::size_t kk = cols; kk-- > 0;) {
    double sum = b[kk];
    for (std::size_t j = kk + 1; j < cols; ++j) sum -= a[j * n + kk] * beta[j];
    beta[kk] = sum / a[kk * n + kk];
  }

  LinearModel model;
  model.intercept = beta[0];
  model.coef.assign(beta.begin() + 1, beta.end());

  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = data.row(i);
    double pred = model.intercept;
    for (std::size_t j = 0; j < p; ++j) pred += model.coef[j] * row[j];
    const double r = data.y[i] - pred;
    rss += w[i] * r * r;
  }
  const std::size_t dof = n_pos > cols ? n_pos - cols : 1;
  model.noise_variance = rss / static_cast<double>(dof);
  return model;
}

std::vector<double> predict(const LinearModel& model, std::span<const double> features,
                            std::size_t n_cols) {
  if (n_cols != model.n_features())
    throw std::invalid_argument("predict: feature count mismatch");
  if (n_cols == 0 || features.size() % n_cols != 0)
    throw std::invalid_argument("predict: ragged feature matrix");
  const std::size_t n = features.size() / n_cols;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = model.intercept;
    const double* row = features.data() + i * n_cols;
    for (std::size_t j = 0; j < n_cols; ++j) v += model.coef[j] * row[j];
    out[i] = v;
  }
  return out;
}

std::vector<double> predict(const LinearModel& model, const ModelDataset& data) {
  return predict(model, data.features, kNumPredictors);
}

}  // namespace fmros
