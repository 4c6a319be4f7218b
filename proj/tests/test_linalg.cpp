#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <random>

#include "extrofit/error.hpp"
#include "extrofit/linalg.hpp"
#include "oracles.hpp"

using namespace extrofit;

namespace {

struct Labelled {
  RowMatrix data;
  std::vector<std::uint32_t> labels;
  std::size_t n_classes;
};

// n rows, F columns, K classes with random sizes; every class non-empty.
Labelled random_labelled(std::size_t n, std::size_t f, std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(k - 1));
  Labelled out{RowMatrix(n, f), std::vector<std::uint32_t>(n), k};
  Matrix centers(k, f);
  for (Eigen::Index i = 0; i < centers.size(); ++i) centers.data()[i] = 3.0 * normal(rng);
  for (std::size_t i = 0; i < n; ++i) {
    out.labels[i] = i < k ? static_cast<std::uint32_t>(i) : pick(rng);
    for (std::size_t c = 0; c < f; ++c)
      out.data(i, c) = centers(out.labels[i], c) + normal(rng);
  }
  return out;
}

oracle::Mat to_mat(const RowMatrix& m) {
  oracle::Mat out(m.rows(), std::vector<double>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

Matrix from_mat(const oracle::Mat& m) {
  Matrix out(m.size(), m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[0].size(); ++j) out(i, j) = m[i][j];
  return out;
}

double rel_diff(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(1e-300, b.norm());
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an extrofit::Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("1-D hand-computed scatter, both weightings") {
  RowMatrix x(4, 1);
  x << 0, 2, 4, 6;
  const std::vector<std::uint32_t> labels{0, 0, 1, 1};
  const auto w = accumulate_scatter(x, labels, 2, Weighting::ClassSize);
  CHECK(w.within(0, 0) == doctest::Approx(4.0));
  CHECK(w.between(0, 0) == doctest::Approx(16.0));
  CHECK(w.grand_mean(0) == doctest::Approx(3.0));
  const auto u = accumulate_scatter(x, labels, 2, Weighting::Unweighted);
  CHECK(u.between(0, 0) == doctest::Approx(8.0));
  CHECK(u.within(0, 0) == doctest::Approx(4.0));
}

TEST_CASE("identical rows give zero scatter") {
  RowMatrix x = RowMatrix::Constant(6, 3, 1.25);
  const std::vector<std::uint32_t> labels{0, 0, 1, 1, 2, 2};
  const auto s = accumulate_scatter(x, labels, 3);
  CHECK(s.within.cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.between.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scatter errors") {
  RowMatrix x = RowMatrix::Random(4, 2);
  CHECK(code_of([&] { accumulate_scatter(x, std::vector<std::uint32_t>{0, 1, 2, 0}, 2); }) ==
        ErrorCode::LabelOutOfRange);
  CHECK(code_of([&] { accumulate_scatter(x, std::vector<std::uint32_t>{0, 0, 0, 0}, 1); }) ==
        ErrorCode::DegenerateInput);
  CHECK(code_of([&] { accumulate_scatter(x.topRows(1), std::vector<std::uint32_t>{0}, 2); }) ==
        ErrorCode::DegenerateInput);
  CHECK(code_of([&] { accumulate_scatter(x, std::vector<std::uint32_t>{0, 1}, 2); }) ==
        ErrorCode::ShapeMismatch);
}

TEST_CASE("scatter matches the brute-force definitions") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto d = random_labelled(60 + seed * 7, 1 + seed, 2 + seed, seed);
    const std::vector<std::size_t> labels(d.labels.begin(), d.labels.end());
    for (bool weighted : {true, false}) {
      const auto ref = oracle::scatter(to_mat(d.data), labels, d.n_classes, weighted);
      const auto s = accumulate_scatter(d.data, d.labels, d.n_classes,
                                        weighted ? Weighting::ClassSize : Weighting::Unweighted);
      CHECK(rel_diff(s.within, from_mat(ref.within)) < 1e-12);
      CHECK(rel_diff(s.between, from_mat(ref.between)) < 1e-12);
    }
  }
}

TEST_CASE("scatter invariants: symmetry, PSD, S_B + S_W = total, permutation invariance") {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const std::size_t f = 1 + seed % 20;
    const auto d = random_labelled(200, f, 2 + seed % 30, 1000 + seed);
    const auto s = accumulate_scatter(d.data, d.labels, d.n_classes);

    CHECK(rel_diff(s.within, s.within.transpose()) < 1e-10);
    CHECK(rel_diff(s.between, s.between.transpose()) < 1e-10);
    for (const Matrix* m : {&s.within, &s.between}) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(*m);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-8 * m->trace() / static_cast<double>(f));
    }

    const RowMatrix centered = d.data.rowwise() - s.grand_mean.transpose();
    const Matrix total = centered.transpose() * centered;
    CHECK(rel_diff(s.between + s.within, total) < 1e-8);

    std::vector<std::size_t> perm(d.data.rows());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    RowMatrix shuffled(d.data.rows(), d.data.cols());
    std::vector<std::uint32_t> shuffled_labels(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      shuffled.row(i) = d.data.row(perm[i]);
      shuffled_labels[i] = d.labels[perm[i]];
    }
    const auto p = accumulate_scatter(shuffled, shuffled_labels, d.n_classes);
    CHECK(rel_diff(p.within, s.within) < 1e-10);
    CHECK(rel_diff(p.between, s.between) < 1e-10);
  }
}

TEST_CASE("separable 2-class 2-D fixture recovers the grid-optimal direction") {
  RowMatrix x(4, 2);
  x << 0, 0, 0, 1, 4, 0, 4, 1;
  const std::vector<std::uint32_t> labels{0, 0, 1, 1};
  const auto s = accumulate_scatter(x, labels, 2);
  const auto model = lda_fit(s, 1, 0.0);

  const RowMatrix rm_b = s.between, rm_w = s.within;
  const double grid = oracle::best_direction_degrees(to_mat(rm_b), to_mat(rm_w));
  CHECK(grid == 0.0);
  const Vector u = model.transform.col(0).normalized();
  const double angle = std::atan2(u(1), u(0)) * 180.0 / std::acos(-1.0);
  CHECK(std::abs(angle - grid) <= 1.0);
  CHECK(u(0) > 0.0);  // sign convention
  CHECK(model.ridge > 0.0);  // S_W is singular here
}

TEST_CASE("two separated Gaussians: dominant eigenvalue and J optimality") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  const std::size_t per = 150, f = 5;
  RowMatrix x(3 * per, f);
  std::vector<std::uint32_t> labels(3 * per);
  const double offsets[3] = {-10.0, 0.0, 10.0};
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < per; ++i) {
      const std::size_t row = c * per + i;
      labels[row] = static_cast<std::uint32_t>(c);
      for (std::size_t k = 0; k < f; ++k) x(row, k) = normal(rng);
      x(row, 0) += offsets[c];
    }
  const auto s = accumulate_scatter(x, labels, 3);
  const auto model = lda_fit(s, 2, 0.0);
  CHECK(model.eigenvalues(0) > 100.0 * model.eigenvalues(1));
  CHECK(std::abs(model.transform.col(0).normalized()(0)) > 0.99);

  const Matrix top = model.transform.leftCols(1);
  const double j_top = fisher_objective(s, top, 0.0);
  std::normal_distribution<double> dir;
  for (int t = 0; t < 1000; ++t) {
    Vector v(f);
    for (auto& c : v) c = dir(rng);
    CHECK(j_top >= fisher_objective(s, v, 0.0) * (1 - 1e-12));
  }
}

TEST_CASE("fit invariants on random problems") {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t f = 2 + seed % 9;
    const std::size_t k = 3 + seed % 15;
    const auto d = random_labelled(150, f, k, 500 + seed);
    const auto s = accumulate_scatter(d.data, d.labels, d.n_classes);
    const std::size_t q = std::min(f, k - 1);
    const double shrink = (seed % 3 == 0) ? 0.0 : 1e-4 * static_cast<double>(seed);
    const auto model = lda_fit(s, q, shrink);

    REQUIRE(model.transform.cols() == static_cast<Eigen::Index>(q));
    const Matrix metric = effective_within(s, model);
    for (Eigen::Index c = 0; c < model.transform.cols(); ++c) {
      const Vector u = model.transform.col(c);
      const Vector bu = s.between * u;
      CHECK((bu - model.eigenvalues(c) * metric * u).norm() <= 1e-6 * bu.norm());
      Eigen::Index arg;
      u.cwiseAbs().maxCoeff(&arg);
      CHECK(u(arg) > 0.0);
      if (c > 0) CHECK(model.eigenvalues(c - 1) >= model.eigenvalues(c));
      CHECK(model.eigenvalues(c) >= 0.0);
    }
    // S_W'-orthonormal columns
    const Matrix gram = model.transform.transpose() * metric * model.transform;
    CHECK((gram - Matrix::Identity(q, q)).cwiseAbs().maxCoeff() < 1e-8);

    // with q = F every invertible U gives the same ratio
    const std::size_t qq = std::min(q, f - 1);
    const double j_fit = fisher_objective(s, model.transform.leftCols(qq), shrink);
    std::normal_distribution<double> dir;
    for (int t = 0; t < 1000; ++t) {
      Matrix v(f, qq);
      for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = dir(rng);
      CHECK(j_fit >= fisher_objective(s, v, shrink) * (1 - 1e-9));
    }
  }
}

TEST_CASE("product of eigenvalues equals det(S_W^-1 S_B) for full q") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t f = 1 + seed;
    const auto d = random_labelled(300, f, f + 5, 77 + seed);
    const auto s = accumulate_scatter(d.data, d.labels, d.n_classes);
    const auto model = lda_fit(s, f, 0.0);
    REQUIRE(model.ridge == 0.0);
    const RowMatrix b = s.between, w = s.within;
    const double expected = oracle::determinant(to_mat(b)) / oracle::determinant(to_mat(w));
    const double product = model.eigenvalues.prod();
    CHECK(std::abs(product - expected) <= 1e-6 * std::abs(expected));
  }
}

TEST_CASE("fit is bitwise deterministic") {
  const auto d = random_labelled(400, 12, 40, 5);
  const auto s1 = accumulate_scatter(d.data, d.labels, d.n_classes);
  const auto s2 = accumulate_scatter(d.data, d.labels, d.n_classes);
  const auto a = lda_fit(s1, 10, 1e-4);
  const auto b = lda_fit(s2, 10, 1e-4);
  CHECK(a.transform == b.transform);
  CHECK(a.eigenvalues == b.eigenvalues);
}

TEST_CASE("equal class means: zero eigenvalues, S_W'-orthonormal transform") {
  RowMatrix x(6, 2);
  x << 1, 0, -1, 0, 0, 2, 0, -2, 3, 1, -3, -1;
  const std::vector<std::uint32_t> labels{0, 0, 1, 1, 2, 2};
  const auto s = accumulate_scatter(x, labels, 3);
  CHECK(s.between.cwiseAbs().maxCoeff() < 1e-15);
  const auto model = lda_fit(s, 2, 0.0);
  CHECK(model.eigenvalues.cwiseAbs().maxCoeff() < 1e-12);
  const Matrix gram = model.transform.transpose() * effective_within(s, model) * model.transform;
  CHECK((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("projected scatter is diagonal with the fitted eigenvalues") {
  const auto d = random_labelled(500, 6, 12, 21);
  const auto s = accumulate_scatter(d.data, d.labels, d.n_classes);
  const auto model = lda_fit(s, 6, 0.0);
  const RowMatrix y = lda_transform(model, d.data);
  const auto ps = accumulate_scatter(y, d.labels, d.n_classes);
  for (Eigen::Index i = 0; i < 6; ++i) {
    CHECK(ps.between(i, i) == doctest::Approx(model.eigenvalues(i)).epsilon(1e-8));
    if (i > 0) CHECK(ps.between(i - 1, i - 1) >= ps.between(i, i));
  }
  CHECK((ps.within - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("ridge escalation and rank deficiency") {
  // one pair of identical vectors, everything else singleton: S_W = 0
  RowMatrix x(5, 2);
  x << 1, 1, 1, 1, 2, 0, 0, 3, 5, 5;
  const std::vector<std::uint32_t> labels{0, 0, 1, 2, 3};
  const auto s = accumulate_scatter(x, labels, 4);
  CHECK(s.within.cwiseAbs().maxCoeff() == 0.0);
  CHECK(code_of([&] { lda_fit(s, 2, 0.0); }) == ErrorCode::RankDeficient);
  CHECK(code_of([&] { lda_fit(s, 2, 0.5); }) == ErrorCode::RankDeficient);
}

TEST_CASE("lda_fit argument validation") {
  const auto d = random_labelled(50, 4, 3, 1);
  const auto s = accumulate_scatter(d.data, d.labels, d.n_classes);
  CHECK(code_of([&] { lda_fit(s, 0, 0.0); }) == ErrorCode::BadDimension);
  CHECK(code_of([&] { lda_fit(s, 3, 0.0); }) == ErrorCode::BadDimension);  // > n_classes - 1
  CHECK(code_of([&] { lda_fit(s, 1, -0.1); }) == ErrorCode::BadDimension);
  CHECK(code_of([&] { lda_fit(s, 1, 1.5); }) == ErrorCode::BadDimension);
  CHECK_NOTHROW(lda_fit(s, 2, 1.0));
}

TEST_CASE("lda_transform") {
  LdaModel model;
  model.in_dim = 3;
  model.out_dim = 2;
  model.transform = Matrix::Identity(3, 2);
  RowMatrix x(2, 3);
  x << 1, 2, 3, 4, 5, 6;
  const RowMatrix y = lda_transform(model, x);
  CHECK(y(0, 0) == 1);
  CHECK(y(0, 1) == 2);
  CHECK(y(1, 1) == 5);

  model.transform << 1, 2, 3, 4, 5, 6;
  const RowMatrix one = lda_transform(model, x.topRows(1));
  CHECK(one(0, 0) == 1 * 1 + 2 * 3 + 3 * 5);
  CHECK(one(0, 1) == 1 * 2 + 2 * 4 + 3 * 6);
  CHECK(code_of([&] { lda_transform(model, RowMatrix::Zero(1, 2)); }) == ErrorCode::BadDimension);
}

TEST_CASE("fisher objective") {
  RowMatrix x(4, 1);
  x << 0, 2, 4, 6;
  const auto s = accumulate_scatter(x, std::vector<std::uint32_t>{0, 0, 1, 1}, 2);
  CHECK(fisher_objective(s, Matrix::Ones(1, 1), 0.0) == doctest::Approx(4.0));
  CHECK(fisher_objective(s, Matrix::Constant(1, 1, -7.5), 0.0) == doctest::Approx(4.0));
  CHECK(code_of([&] { fisher_objective(s, Matrix::Zero(1, 1), 0.0); }) ==
        ErrorCode::SingularDenominator);

  const auto d = random_labelled(100, 5, 6, 8);
  const auto s5 = accumulate_scatter(d.data, d.labels, d.n_classes);
  Matrix u = Matrix::Random(5, 3);
  const double j = fisher_objective(s5, u, 1e-3);
  for (double c : {0.01, -3.0, 250.0})
    CHECK(fisher_objective(s5, c * u, 1e-3) == doctest::Approx(j).epsilon(1e-9));
}
