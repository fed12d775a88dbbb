#include <doctest.h>

#include <cmath>

#include "eigadm/error.h"
#include "eigadm/linalg.h"
#include "eigadm/rng.h"
#include "eigadm/sampling.h"

using namespace eigadm;

namespace {

SymmetricMatrix sym(const Matrix& m) { return SymmetricMatrix::from_matrix(m); }

double residual(const SymmetricMatrix& m, const SymmetricEigen& e) {
  const Matrix d = e.vectors.transposed() * m.matrix() * e.vectors;
  Matrix diag(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i) diag(i, i) = e.values[i];
  return max_abs_diff(d, diag);
}

}  // namespace

TEST_CASE("eig_sym_desc on small known matrices") {
  const auto id = eig_sym_desc(sym(Matrix::identity(3)));
  CHECK(std::vector<double>(id.values().begin(), id.values().end()) ==
        std::vector<double>{1.0, 1.0, 1.0});

  const auto d = eig_sym_desc(sym(Matrix{{2, 0, 0}, {0, 5, 0}, {0, 0, 1}}));
  CHECK(d[0] == 5.0);
  CHECK(d[1] == 2.0);
  CHECK(d[2] == 1.0);

  // det([[2-x,1],[1,2-x]]) = (x-3)(x-1)
  const auto t = eig_sym_desc(sym(Matrix{{2, 1}, {1, 2}}));
  CHECK(t[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(t[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Jacobi reconstruction residual on random symmetric matrices") {
  RngStream s(11, 0);
  for (std::size_t p = 1; p <= 8; ++p) {
    for (int trial = 0; trial < 25; ++trial) {
      SymmetricMatrix m(p);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j <= i; ++j) m.set(i, j, s.normal() * std::pow(10.0, trial % 5));
      const auto e = symmetric_eigen(m);
      CHECK(residual(m, e) <= 1e-10 * m.matrix().frobenius_norm());
      CHECK(OrthogonalMatrix(e.vectors).orthogonality_error() <= 1e-10);
      for (std::size_t k = 1; k < p; ++k) CHECK(e.values[k] <= e.values[k - 1]);
      CHECK(e.sweeps < 100);
    }
  }
}

TEST_CASE("Jacobi handles zero and already-diagonal input") {
  const auto zero = symmetric_eigen(SymmetricMatrix(3));
  CHECK(zero.sweeps == 0);
  CHECK(zero.values == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("eigen errors") {
  SymmetricMatrix bad(2);
  bad.set(0, 1, std::nan(""));
  CHECK_THROWS_AS(eig_sym_desc(bad), Error);
  try {
    eig_sym_desc(bad);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
  }
  // indefinite: eigenvalues 3 and -1
  CHECK_THROWS_AS(eig_sym_desc(sym(Matrix{{1, 2}, {2, 1}})), Error);
}

TEST_CASE("from_matrix rejects asymmetric input") {
  CHECK_THROWS_AS(SymmetricMatrix::from_matrix(Matrix{{1, 2}, {2.5, 1}}), Error);
  CHECK_THROWS_AS(SymmetricMatrix::from_matrix(Matrix{{1, 2, 3}, {2, 1, 3}}), Error);
  const auto ok = SymmetricMatrix::from_matrix(Matrix{{1, 2}, {2 + 1e-15, 1}}, 1e-12);
  CHECK(ok(1, 0) == ok(0, 1));
}

TEST_CASE("Householder QR factors a random matrix") {
  RngStream s(3, 0);
  for (std::size_t n = 1; n <= 6; ++n) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = s.normal();
    const auto [q, r] = householder_qr(a);
    CHECK(max_abs_diff(q * r, a) <= 1e-12);
    CHECK(OrthogonalMatrix(q).orthogonality_error() <= 1e-12);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) CHECK(r(i, j) == 0.0);
  }
}
