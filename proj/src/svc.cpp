// Copyright 2026 The plumescreen Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "plumescreen/error.hpp"
#include "plumescreen/learners.hpp"

namespace plumescreen {
namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxCachedEntries = 36'000'000;

/// Rows of Q_ij = y_i y_j K(x_i, x_j), precomputed when small enough.
class KernelRows {
 public:
  KernelRows(const SvmModel& svm, const Matrix& Z, const std::vector<double>& y) : svm_(svm), Z_(Z), y_(y) {
    const std::size_t n = Z.rows();
    diag_.resize(n);
    for (std::size_t i = 0; i < n; ++i) diag_[i] = svm.kernel_value(Z.row(i), Z.row(i));
    if (n * n <= kMaxCachedEntries) {
      full_.resize(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          const double q = y[i] * y[j] * svm.kernel_value(Z.row(i), Z.row(j));
          full_[i * n + j] = q;
          full_[j * n + i] = q;
        }
      }
    }
    scratch_[0].resize(full_.empty() ? n : 0);
    scratch_[1].resize(full_.empty() ? n : 0);
  }

  double diag(std::size_t i) const { return diag_[i]; }

  /// Row i; `slot` picks one of two scratch buffers in uncached mode.
  const double* row(std::size_t i, int slot) {
    const std::size_t n = Z_.rows();
    if (!full_.empty()) return full_.data() + i * n;
    auto& buf = scratch_[slot];
    for (std::size_t j = 0; j < n; ++j) buf[j] = y_[i] * y_[j] * svm_.kernel_value(Z_.row(i), Z_.row(j));
    return buf.data();
  }

 private:
  const SvmModel& svm_;
  const Matrix& Z_;
  const std::vector<double>& y_;
  std::vector<double> diag_;
  std::vector<double> full_;
  std::vector<double> scratch_[2];
};

}  // namespace

void SvcParams::validate() const {
  if (!(C > 0.0) || !std::isfinite(C)) throw ConfigError("svc: C must be positive");
  if (kernel != Kernel::kLinear && !(gamma > 0.0)) throw ConfigError("svc: gamma must be positive");
  if (kernel == Kernel::kPoly && degree < 2) throw ConfigError("svc: degree must be an integer >= 2");
  if (!(tol > 0.0)) throw ConfigError("svc: tol must be positive");
}

double SvmModel::kernel_value(std::span<const double> a, std::span<const double> b) const {
  switch (kernel) {
    case Kernel::kLinear: {
      double dot = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
      return dot;
    }
    case Kernel::kRbf: {
      double dist = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) dist += (a[k] - b[k]) * (a[k] - b[k]);
      return std::exp(-gamma * dist);
    }
    case Kernel::kPoly: {
      double dot = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
      return std::pow(gamma * dot + 1.0, degree);
    }
  }
  return 0.0;
}

double SvmModel::decision(std::span<const double> x) const {
  std::vector<double> z(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) z[k] = (x[k] - scaler_mean[k]) / scaler_scale[k];
  double f = bias;
  for (std::size_t i = 0; i < support_vectors.rows(); ++i) f += dual_coefs[i] * kernel_value(support_vectors.row(i), z);
  return f;
}

TrainedModel train_svc(const Matrix& X, std::span<const int> y01, const SvcParams& hp, std::uint64_t seed,
                       std::vector<std::string> feature_names) {
  hp.validate();
  check_training_data(X, y01);
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();

  SvmModel svm;
  svm.kernel = hp.kernel;
  svm.gamma = hp.gamma;
  svm.degree = hp.degree;
  svm.scaler_mean.assign(d, 0.0);
  svm.scaler_scale.assign(d, 1.0);
  for (std::size_t k = 0; k < d; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += X(i, k);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (X(i, k) - mean) * (X(i, k) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    svm.scaler_mean[k] = mean;
    svm.scaler_scale[k] = sd > 0.0 ? sd : 1.0;
  }
  Matrix Z(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) Z(i, k) = (X(i, k) - svm.scaler_mean[k]) / svm.scaler_scale[k];
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = y01[i] == 1 ? 1.0 : -1.0;

  const double C = hp.C;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> G(n, -1.0);  // gradient of the dual objective
  KernelRows Q(svm, Z, y);
  const std::int64_t max_iter =
      hp.max_iter > 0 ? hp.max_iter : std::max<std::int64_t>(10'000'000, 100 * static_cast<std::int64_t>(n));
  const auto upper = [&](std::size_t t) { return alpha[t] >= C; };
  const auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  std::int64_t iter = 0;
  double gap = kInf;
  for (;; ++iter) {
    // Working-set selection using second-order information.
    double gmax = -kInf;
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0 ? !upper(t) : !lower(t)) {
        const double v = -y[t] * G[t];
        if (v >= gmax) {
          gmax = v;
          i = t;
        }
      }
    }
    double gmax2 = -kInf;
    std::size_t j = n;
    double best_obj = kInf;
    const double* Qi = i < n ? Q.row(i, 0) : nullptr;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0 ? !lower(t) : !upper(t)) {
        const double v = y[t] * G[t];
        gmax2 = std::max(gmax2, v);
        const double grad_diff = gmax + v;
        if (Qi != nullptr && grad_diff > 0.0) {
          double quad = Q.diag(i) + Q.diag(t) - 2.0 * Qi[t] * y[i] * y[t];  // K_ii + K_tt - 2 K_it
          if (quad <= 0.0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= best_obj) {
            best_obj = obj;
            j = t;
          }
        }
      }
    }
    gap = gmax + gmax2;
    if (gap < hp.tol || j == n) break;
    if (iter >= max_iter) {
      std::ostringstream os;
      os << "svc: SMO did not converge after " << iter << " iterations (KKT gap " << gap << ", tol " << hp.tol
         << ", n " << n << ")";
      throw TrainingError(os.str());
    }

    const double* Qj = Q.row(j, 1);
    Qi = Q.row(i, 0);
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = Q.diag(i) + Q.diag(j) + 2.0 * Qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = Q.diag(i) + Q.diag(j) - 2.0 * Qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) G[t] += Qi[t] * di + Qj[t] * dj;
  }

  // Bias from free support vectors, or the midpoint of the feasible range.
  double ub = kInf;
  double lb = -kInf;
  double sum_free = 0.0;
  int n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * G[t];
    if (upper(t)) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / n_free : 0.5 * (ub + lb);
  svm.bias = -rho;
  svm.iterations = iter;

  std::size_t n_sv = 0;
  for (double a : alpha) n_sv += a > 0.0 ? 1 : 0;
  svm.support_vectors = Matrix(n_sv, d);
  std::size_t s = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] <= 0.0) continue;
    std::copy(Z.row(t).begin(), Z.row(t).end(), svm.support_vectors.row(s).begin());
    svm.dual_coefs.push_back(alpha[t] * y[t]);
    ++s;
  }

  TrainedModel model;
  model.kind = ModelKind::kSvc;
  model.hyperparams = hp;
  model.seed = seed;
  model.feature_names = resolve_feature_names(std::move(feature_names), d);
  model.svm = std::move(svm);
  return model;
}

}  // namespace plumescreen
