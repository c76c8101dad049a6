#include <doctest.h>

#include <abspack/strategies.hpp>

#include "oracles.hpp"

using namespace abspack;

namespace {

Matrix swap2() {
  Matrix A(2, 2);
  A << 0, 1, 1, 0;
  return A;
}

}  // namespace

TEST_CASE("implicit LX pivots where implicit LU breaks down") {
  const Matrix A = swap2();
  const Vector b{{2.0, 3.0}};
  const auto ilx = abs_solve(A, b, *make_strategy(Family::implicit_lx));
  REQUIRE(ilx.ok());
  CHECK((*ilx.x - Vector{{3.0, 2.0}}).norm() < 1e-15);
  // First search vector follows e_2, the largest entry of H a_1.
  CHECK(ilx.abaffian_final.search[0](0) == 0.0);
  CHECK(ilx.abaffian_final.search[0](1) != 0.0);

  const auto ilu = abs_solve(A, b, *make_strategy(Family::implicit_lu));
  CHECK(ilu.outcome == Outcome::breakdown);
  CHECK(ilu.failed_step == 1);
}

TEST_CASE("modified Huang direction and dependent row") {
  const Matrix H = Matrix::Identity(2, 2);
  const Vector a{{3.0, 4.0}};
  const Vector p = modified_huang_direction(H, a);
  CHECK((p - a).norm() < 1e-15);
  const Matrix H2 = modified_huang_update(H, p);
  CHECK((H2 * a).norm() < 1e-15);
  try {
    modified_huang_direction(H2, Vector{{6.0, 8.0}});
    FAIL("expected DependentRow");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dependent_row);
  }
  // With reprojection enabled the direction is unchanged on exact data.
  CHECK((modified_huang_direction(H, a, 1e-12, true) - a).norm() < 1e-15);
}

TEST_CASE("Huang search vectors are orthogonal and iterates are least-norm") {
  oracle::TestRng rng(4);
  for (int t = 0; t < 10; ++t) {
    const Index n = 8;
    const Index m = 3 + t % 4;
    const Matrix A = oracle::random_matrix(rng, m, n);
    const Vector b = oracle::random_matrix(rng, m, 1);
    for (Family f : {Family::huang, Family::modified_huang, Family::optimally_stable}) {
      const auto rep = abs_solve(A, b, *make_strategy(f));
      REQUIRE(rep.ok());
      const Matrix P = rep.abaffian_final.search_matrix();
      const Matrix G = P.transpose() * P;
      CHECK((G - Matrix(G.diagonal().asDiagonal())).norm() <= 1e-10 * G.norm());
      CHECK((*rep.x - oracle::least_norm(A, b)).norm() <= 1e-10 * rep.x->norm());
    }
  }
}

TEST_CASE("compact implicit LU matches the dense path and keeps P unit upper triangular") {
  oracle::TestRng rng(8);
  for (int t = 0; t < 10; ++t) {
    const Index n = 5 + t;
    const Matrix A = oracle::random_matrix(rng, n, n) + 4.0 * Matrix::Identity(n, n);
    const Vector b = oracle::random_matrix(rng, n, 1);
    const auto compact = implicit_lu_solve(A, b);
    const auto dense = abs_solve(A, b, *make_strategy(Family::implicit_lu));
    REQUIRE(compact.ok());
    REQUIRE(dense.ok());
    CHECK((*compact.x - *dense.x).norm() <= 1e-10 * dense.x->norm());
    const Matrix P = dense.abaffian_final.search_matrix();
    CHECK((P.diagonal() - Vector::Ones(n)).norm() < 1e-12);
    CHECK(P.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm() == 0.0);
    CHECK(compact.peak_aux_storage <= static_cast<std::size_t>(n * n / 4 + n));
  }
}

TEST_CASE("compact implicit LU with column pivoting solves the swap matrix") {
  const auto rep = implicit_lu_solve(swap2(), Vector{{2.0, 3.0}}, true);
  REQUIRE(rep.ok());
  CHECK((*rep.x - Vector{{3.0, 2.0}}).norm() < 1e-15);
  CHECK(implicit_lu_solve(swap2(), Vector{{2.0, 3.0}}).outcome == Outcome::breakdown);
}

TEST_CASE("compact state layout") {
  CompactLUState s(4);
  CHECK(s.rank() == 0);
  CHECK(s.live_entries() == 0);
  CHECK(s.n() == 4);
}

TEST_CASE("GILU vector form agrees with the core engine started at Z^T H1") {
  oracle::TestRng rng(13);
  for (int t = 0; t < 20; ++t) {
    const Index n = 6;
    const Matrix A = oracle::random_matrix(rng, n, n);
    const Vector b = oracle::random_matrix(rng, n, 1);
    const Matrix H1 = oracle::random_matrix(rng, n, n) + 3.0 * Matrix::Identity(n, n);
    const Matrix Z = oracle::random_matrix(rng, n, n) + 3.0 * Matrix::Identity(n, n);
    const auto vec = gilu_vector_solve(A, b, H1, Z);
    const auto core = abs_solve(A, b, *make_strategy(StrategyKind::gilu(Z.transpose() * H1)));
    REQUIRE(vec.outcome == core.outcome);
    if (!vec.ok()) continue;
    CHECK((*vec.x - *core.x).norm() <= 1e-10 * core.x->norm());
    CHECK((A * *vec.x - b).norm() <= 1e-9 * b.norm());
  }
}

TEST_CASE("GILU rejects a singular H1") {
  Matrix H1 = Matrix::Identity(3, 3);
  H1(2, 2) = 0.0;
  try {
    make_strategy(StrategyKind::gilu(H1));
    FAIL("expected Singular");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::singular);
  }
}

TEST_CASE("conjugate direction needs a symmetric positive definite matrix") {
  oracle::TestRng rng(2);
  const Matrix S = oracle::random_spd(rng, 6, 50.0);
  const Vector b = oracle::random_matrix(rng, 6, 1);
  const auto rep = abs_solve(S, b, *make_strategy(Family::conjugate_direction));
  REQUIRE(rep.ok());
  CHECK((S * *rep.x - b).norm() <= 1e-10 * b.norm());
  // Search vectors are S-conjugate.
  const Matrix P = rep.abaffian_final.search_matrix();
  const Matrix G = P.transpose() * S * P;
  CHECK((G - Matrix(G.diagonal().asDiagonal())).norm() <= 1e-9 * G.norm());

  Matrix nonsym = S;
  nonsym(0, 1) += 1.0;
  CHECK_THROWS_AS(abs_solve(nonsym, b, *make_strategy(Family::conjugate_direction)), Error);
  CHECK_THROWS_AS(abs_solve(Matrix::Ones(2, 3), Vector::Ones(2),
                            *make_strategy(Family::conjugate_direction)),
                  Error);
  Matrix indef(2, 2);
  indef << 1, 0, 0, -1;
  const auto bad = abs_solve(indef, Vector::Ones(2), *make_strategy(Family::conjugate_direction));
  CHECK(bad.outcome == Outcome::breakdown);
  CHECK(bad.failed_step == 2);
}

TEST_CASE("implicit QR gives the least-squares solution with nonincreasing residuals") {
  oracle::TestRng rng(17);
  for (int t = 0; t < 10; ++t) {
    const Index n = 4 + t % 5;
    const Index m = n + 3;
    const Matrix A = oracle::random_matrix(rng, m, n);
    const Vector b = oracle::random_matrix(rng, m, 1);
    SolveOptions opt;
    opt.record_iterates = true;
    const auto rep = abs_solve(A, b, *make_strategy(Family::implicit_qr), opt);
    REQUIRE(rep.ok());
    CHECK((*rep.x - oracle::least_squares(A, b)).norm() <= 1e-9 * rep.x->norm());
    for (std::size_t k = 1; k < rep.iterates.size(); ++k)
      CHECK((A * rep.iterates[k] - b).norm() <= (A * rep.iterates[k - 1] - b).norm() * (1 + 1e-12));
  }
}

TEST_CASE("fixed parameters reproduce Huang") {
  oracle::TestRng rng(23);
  const Matrix A = oracle::random_matrix(rng, 4, 4);
  const Vector b = oracle::random_matrix(rng, 4, 1);
  const Matrix I = Matrix::Identity(4, 4);
  const auto fixed = abs_solve(A, b, FixedParameters(Matrix(), I, A.transpose(), A.transpose()));
  const auto huang = abs_solve(A, b, *make_strategy(Family::huang));
  REQUIRE(fixed.ok());
  CHECK((*fixed.x - *huang.x).norm() <= 1e-12 * huang.x->norm());
}

TEST_CASE("family names round trip") {
  for (Family f : {Family::huang, Family::modified_huang, Family::implicit_lu, Family::implicit_lx,
                   Family::implicit_qr, Family::conjugate_direction, Family::optimally_stable,
                   Family::gilu}) {
    const auto back = parse_family(to_string(f));
    REQUIRE(back.has_value());
    CHECK(*back == f);
  }
  CHECK_FALSE(parse_family("nope").has_value());
}
