#include "extrofit/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "extrofit/error.hpp"

namespace extrofit {

namespace {

constexpr Eigen::Index kBlock = 1024;

// Streams F-vectors into an F x kBlock buffer and folds each full block into
// the lower triangle of `target` with a symmetric rank-k update.
class RankUpdateAccumulator {
 public:
  explicit RankUpdateAccumulator(Matrix& target)
      : target_(target), buffer_(target.rows(), kBlock) {}

  template <typename Vec>
  void push(const Vec& v) {
    buffer_.col(filled_++) = v;
    if (filled_ == kBlock) flush();
  }

  void flush() {
    if (filled_ == 0) return;
    target_.selfadjointView<Eigen::Lower>().rankUpdate(buffer_.leftCols(filled_));
    filled_ = 0;
  }

 private:
  Matrix& target_;
  Matrix buffer_;
  Eigen::Index filled_ = 0;
};

Matrix symmetric_from_lower(const Matrix& lower) {
  Matrix full = lower.selfadjointView<Eigen::Lower>();
  return full;
}

// Cholesky that also rejects numerically semidefinite input.
std::optional<Eigen::LLT<Matrix>> try_cholesky(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const double max_diag = m.diagonal().cwiseAbs().maxCoeff();
  const double floor =
      static_cast<double>(m.rows()) * std::numeric_limits<double>::epsilon() * max_diag;
  const Vector pivots = llt.matrixL().toDenseMatrix().diagonal();
  if (!(pivots.array().square() > floor).all()) return std::nullopt;
  return llt;
}

void apply_sign_convention(Matrix& u) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    Eigen::Index arg = 0;
    u.col(j).cwiseAbs().maxCoeff(&arg);
    if (u(arg, j) < 0.0) u.col(j) *= -1.0;
  }
}

}  // namespace

ScatterPair accumulate_scatter(const Eigen::Ref<const RowMatrix>& data,
                               std::span<const std::uint32_t> labels, std::size_t n_classes,
                               Weighting weighting) {
  const auto n = static_cast<std::size_t>(data.rows());
  const Eigen::Index dim = data.cols();
  if (labels.size() != n)
    throw Error(ErrorCode::ShapeMismatch, std::to_string(labels.size()) + " labels for " +
                                              std::to_string(n) + " rows");
  if (dim < 1) throw Error(ErrorCode::BadDimension, "data has no columns");
  if (n < 2) throw Error(ErrorCode::DegenerateInput, "need at least 2 samples");
  if (n_classes < 2) throw Error(ErrorCode::DegenerateInput, "need at least 2 classes");

  std::vector<std::size_t> counts(n_classes, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] >= n_classes)
      throw Error(ErrorCode::LabelOutOfRange, "row " + std::to_string(i) + " has label " +
                                                  std::to_string(labels[i]));
    ++counts[labels[i]];
  }

  ScatterPair out;
  out.n_samples = n;
  out.n_classes = n_classes;
  out.weighting = weighting;

  out.grand_mean = Vector::Zero(dim);
  for (std::size_t i = 0; i < n; ++i) out.grand_mean += data.row(static_cast<Eigen::Index>(i)).transpose();
  out.grand_mean /= static_cast<double>(n);

  // Means are kept only for multi-member classes; a singleton's mean is its row.
  constexpr auto kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> slot(n_classes, kNone);
  std::vector<std::size_t> first_row(n_classes, kNone);
  std::size_t n_multi = 0;
  for (std::size_t c = 0; c < n_classes; ++c)
    if (counts[c] > 1) slot[c] = n_multi++;
  for (std::size_t i = 0; i < n; ++i)
    if (first_row[labels[i]] == kNone) first_row[labels[i]] = i;

  Matrix class_means = Matrix::Zero(dim, static_cast<Eigen::Index>(n_multi));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = slot[labels[i]];
    if (s != kNone) class_means.col(static_cast<Eigen::Index>(s)) += data.row(static_cast<Eigen::Index>(i)).transpose();
  }
  for (std::size_t c = 0; c < n_classes; ++c)
    if (slot[c] != kNone) class_means.col(static_cast<Eigen::Index>(slot[c])) /= static_cast<double>(counts[c]);

  Matrix within = Matrix::Zero(dim, dim);
  {
    RankUpdateAccumulator acc(within);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t s = slot[labels[i]];
      if (s == kNone) continue;
      acc.push(data.row(static_cast<Eigen::Index>(i)).transpose() - class_means.col(static_cast<Eigen::Index>(s)));
    }
    acc.flush();
  }

  Matrix between = Matrix::Zero(dim, dim);
  {
    RankUpdateAccumulator acc(between);
    Vector diff(dim);
    for (std::size_t c = 0; c < n_classes; ++c) {
      if (counts[c] == 0) continue;
      if (slot[c] != kNone)
        diff = class_means.col(static_cast<Eigen::Index>(slot[c])) - out.grand_mean;
      else
        diff = data.row(static_cast<Eigen::Index>(first_row[c])).transpose() - out.grand_mean;
      if (weighting == Weighting::ClassSize) diff *= std::sqrt(static_cast<double>(counts[c]));
      acc.push(diff);
    }
    acc.flush();
  }

  out.within = symmetric_from_lower(within);
  out.between = symmetric_from_lower(between);
  return out;
}

Matrix shrunk_within(const ScatterPair& scatter, double shrinkage) {
  const auto dim = scatter.within.rows();
  const double scale = scatter.within.trace() / static_cast<double>(dim);
  Matrix m = (1.0 - shrinkage) * scatter.within;
  m.diagonal().array() += shrinkage * scale;
  return m;
}

Matrix effective_within(const ScatterPair& scatter, const LdaModel& model) {
  Matrix m = shrunk_within(scatter, model.shrinkage);
  m.diagonal().array() += model.ridge;
  return m;
}

LdaModel lda_fit(const ScatterPair& scatter, std::size_t out_dim, double shrinkage) {
  const std::size_t dim = scatter.dim();
  if (dim == 0 || static_cast<std::size_t>(scatter.between.rows()) != dim)
    throw Error(ErrorCode::BadDimension, "scatter matrices are empty or mismatched");
  const std::size_t max_out = std::min(dim, scatter.n_classes > 0 ? scatter.n_classes - 1 : 0);
  if (out_dim < 1 || out_dim > max_out)
    throw Error(ErrorCode::BadDimension, "out_dim " + std::to_string(out_dim) +
                                             " outside [1, " + std::to_string(max_out) + "]");
  if (!(shrinkage >= 0.0 && shrinkage <= 1.0))
    throw Error(ErrorCode::BadDimension, "shrinkage must lie in [0, 1]");

  const Matrix metric = shrunk_within(scatter, shrinkage);
  const double scale = scatter.within.trace() / static_cast<double>(dim);

  double ridge = 0.0;
  auto llt = try_cholesky(metric);
  if (!llt) {
    const double max_ridge = 1e-2 * scale;
    for (ridge = 1e-8 * scale; scale > 0.0 && ridge <= max_ridge * (1.0 + 1e-9); ridge *= 10.0) {
      Matrix loaded = metric;
      loaded.diagonal().array() += ridge;
      llt = try_cholesky(loaded);
      if (llt) break;
    }
    if (!llt)
      throw Error(ErrorCode::RankDeficient,
                  "within-class scatter not positive definite with ridge <= 1e-2 * trace/F");
  }

  const auto lower = llt->matrixL();
  // C = L^-1 S_B L^-T
  Matrix half = lower.solve(scatter.between);
  Matrix whitened = lower.solve(half.transpose());
  whitened = 0.5 * (whitened + whitened.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(whitened);
  if (eig.info() != Eigen::Success)
    throw Error(ErrorCode::RankDeficient, "symmetric eigensolve did not converge");

  const auto q = static_cast<Eigen::Index>(out_dim);
  const auto f = static_cast<Eigen::Index>(dim);
  Matrix top(f, q);
  LdaModel model;
  model.eigenvalues.resize(q);
  for (Eigen::Index k = 0; k < q; ++k) {
    top.col(k) = eig.eigenvectors().col(f - 1 - k);
    model.eigenvalues(k) = std::max(0.0, eig.eigenvalues()(f - 1 - k));
  }
  model.transform = llt->matrixU().solve(top);
  apply_sign_convention(model.transform);
  model.shrinkage = shrinkage;
  model.ridge = ridge;
  model.in_dim = dim;
  model.out_dim = out_dim;
  return model;
}

RowMatrix lda_transform(const LdaModel& model, const Eigen::Ref<const RowMatrix>& data) {
  if (static_cast<std::size_t>(data.cols()) != model.in_dim)
    throw Error(ErrorCode::BadDimension, "data has " + std::to_string(data.cols()) +
                                             " columns, model expects " +
                                             std::to_string(model.in_dim));
  RowMatrix out = data * model.transform;
  return out;
}

double fisher_objective(const ScatterPair& scatter, const Eigen::Ref<const Matrix>& directions,
                        double shrinkage) {
  if (static_cast<std::size_t>(directions.rows()) != scatter.dim() || directions.cols() < 1)
    throw Error(ErrorCode::BadDimension, "directions must be F x q with q >= 1");
  const Matrix metric = shrunk_within(scatter, shrinkage);
  const Matrix num = directions.transpose() * scatter.between * directions;
  const Matrix den = directions.transpose() * metric * directions;
  const double den_det = Eigen::FullPivLU<Matrix>(den).determinant();
  const double den_scale = std::pow(den.diagonal().cwiseAbs().maxCoeff(), static_cast<double>(den.rows()));
  if (!(den_det > 1e-14 * den_scale) || !std::isfinite(den_det))
    throw Error(ErrorCode::SingularDenominator, "U^T S_W U is singular");
  return Eigen::FullPivLU<Matrix>(num).determinant() / den_det;
}

}  // namespace extrofit
