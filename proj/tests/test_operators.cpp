#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "tclprep/propagator.hpp"

using namespace tclprep;
using ops::cplx;
using ops::Mat;
using ops::Vec;

namespace {
constexpr double pi = 3.14159265358979323846;

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("conjugate_propagate trivial cases") {
  auto gen = oracles::rng(11);
  const Mat h = oracles::random_hermitian(gen, 3);
  const Mat x = oracles::random_matrix(gen, 3);
  CHECK(max_abs(ops::conjugate_propagate(h, 0.0, x) - x) == doctest::Approx(0.0));
  const Mat zero = Mat::Zero(3, 3);
  CHECK(max_abs(ops::conjugate_propagate(zero, 1.7, x) - x) <= 1e-14);
}

TEST_CASE("conjugate_propagate pi pulse flips sigma_x") {
  const double omega = 1.3;
  const Mat h = 0.5 * omega * ops::sigma_z();
  const Mat got = ops::conjugate_propagate(h, pi / omega, ops::sigma_x());
  CHECK(max_abs(got + ops::sigma_x()) <= 1e-12);

  // dense exponential oracle
  const Mat u = oracles::expm(cplx(0, -pi / omega) * h);
  const Mat want = u * ops::sigma_x() * u.adjoint();
  CHECK(max_abs(got - want) <= 1e-12);
}

TEST_CASE("conjugate_propagate rejects non-Hermitian Hamiltonians") {
  Mat h = Mat::Zero(2, 2);
  h(0, 1) = 1.0;
  CHECK_THROWS_AS(ops::conjugate_propagate(h, 0.1, ops::sigma_x()),
                  std::invalid_argument);
}

TEST_CASE("propagation preserves trace, hermiticity and spectrum") {
  auto gen = oracles::rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    const int d = 2 + static_cast<int>(gen() % 3);
    const Mat h = oracles::random_hermitian(gen, d, 2.0);
    const Mat x = oracles::random_hermitian(gen, d);
    const double dt = 0.1 + 3.0 * static_cast<double>(gen() % 1000) / 1000.0;
    const Mat y = ops::conjugate_propagate(h, dt, x);
    CHECK(std::abs((y.trace() - x.trace())) <= 1e-10);
    CHECK(ops::hermiticity_residual(y) <= 1e-10);
    Eigen::SelfAdjointEigenSolver<Mat> ex(x), ey(y);
    CHECK((ex.eigenvalues() - ey.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("unitary propagator caches a unitary eigenbasis") {
  auto gen = oracles::rng(13);
  const Mat h = oracles::random_hermitian(gen, 4, 3.0);
  const ops::UnitaryPropagator prop(h);
  const Mat v = prop.eigenvectors();
  CHECK(max_abs(v * v.adjoint() - Mat::Identity(4, 4)) <= 1e-12);
  const Mat x = oracles::random_matrix(gen, 4);
  CHECK(max_abs(prop.conjugate(0.0, x) - x) <= 1e-12);
}

TEST_CASE("schedule with one segment matches conjugate_propagate") {
  auto gen = oracles::rng(14);
  const Mat h = oracles::random_hermitian(gen, 2, 1.5);
  const Mat x = oracles::random_matrix(gen, 2);
  const auto s = ops::HamiltonianSchedule::constant(Mat::Zero(2, 2), h);
  CHECK(max_abs(s.propagate(2.3, 0.4, x) - ops::conjugate_propagate(h, 1.9, x)) <= 1e-12);
  CHECK(max_abs(s.propagate(1.1, 1.1, x) - x) == doctest::Approx(0.0));
  CHECK_THROWS_AS(s.propagate(0.3, 0.7, x), std::domain_error);
}

TEST_CASE("schedule group property across three segments") {
  auto gen = oracles::rng(15);
  for (int rep = 0; rep < 10; ++rep) {
    const double t1 = 0.3 + 0.5 * static_cast<double>(gen() % 100) / 100.0;
    const double t2 = t1 + 0.2 + 0.6 * static_cast<double>(gen() % 100) / 100.0;
    std::vector<ops::HamiltonianSchedule::Segment> segs{
        {0.0, t1, oracles::random_hermitian(gen, 2, 2.0)},
        {t1, t2, oracles::random_hermitian(gen, 2, 2.0)},
        {t2, ops::schedule_open_end, oracles::random_hermitian(gen, 2, 2.0)}};
    const ops::HamiltonianSchedule s(oracles::random_hermitian(gen, 2), std::move(segs));
    const Mat x = oracles::random_matrix(gen, 2);
    const double t = t2 + 0.8, mid = 0.5 * (t1 + t2), tau = 0.1;
    const Mat direct = s.propagate(t, tau, x);
    const Mat composed = s.propagate(t, mid, s.propagate(mid, tau, x));
    CHECK(max_abs(direct - composed) <= 1e-10);

    // through the past branch as well
    const Mat a = s.propagate(0.9, -0.7, x);
    const Mat b = s.propagate(0.9, 0.0, s.propagate(0.0, -0.7, x));
    CHECK(max_abs(a - b) <= 1e-10);
  }
}

TEST_CASE("schedule validation") {
  const Mat h = ops::sigma_z();
  CHECK_THROWS_AS(ops::HamiltonianSchedule(h, {}), std::invalid_argument);
  // gap between segments
  CHECK_THROWS_AS(ops::HamiltonianSchedule(
                      h, {{0.0, 1.0, h}, {1.5, ops::schedule_open_end, h}}),
                  std::invalid_argument);
  // non-Hermitian segment
  Mat bad = Mat::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(ops::HamiltonianSchedule(h, {{0.0, ops::schedule_open_end, bad}}),
                  std::invalid_argument);
}

TEST_CASE("mixing operator") {
  auto gen = oracles::rng(16);
  const Mat x = oracles::random_matrix(gen, 2);

  SUBCASE("identity at t = 0") {
    const auto s = ops::HamiltonianSchedule::constant(oracles::random_hermitian(gen, 2),
                                                      oracles::random_hermitian(gen, 2));
    CHECK(max_abs(ops::mixing_operator(s, 0.0, x) - x) <= 1e-12);
    CHECK_THROWS_AS(ops::mixing_operator(s, -0.1, x), std::domain_error);
  }

  SUBCASE("equal branches cancel on an operator basis") {
    const Mat h = oracles::random_hermitian(gen, 2, 2.0);
    const auto s = ops::HamiltonianSchedule::constant(h, h);
    const Mat basis[] = {ops::identity(2), ops::sigma_x(), ops::sigma_y(), ops::sigma_z()};
    for (const Mat& e : basis)
      CHECK(max_abs(ops::mixing_operator(s, 3.7, e) - e) <= 1e-10);
  }

  SUBCASE("two-level oracle") {
    const double omega = 1.0;
    const auto s = ops::HamiltonianSchedule::constant(Mat::Zero(2, 2),
                                                      0.5 * omega * ops::sigma_z());
    const Mat got = ops::mixing_operator(s, pi / omega, ops::sigma_x());
    CHECK(max_abs(got + ops::sigma_x()) <= 1e-12);
  }
}

TEST_CASE("commutator, dagger, trace") {
  CHECK(max_abs(ops::commutator(ops::sigma_z(), ops::sigma_z())) == doctest::Approx(0.0));
  const Mat want = 2.0 * cplx(0, 1) * ops::sigma_z();
  CHECK(max_abs(ops::commutator(ops::sigma_x(), ops::sigma_y()) - want) <= 1e-14);

  auto gen = oracles::rng(17);
  const Mat rho = oracles::random_density(gen, 3);
  CHECK(std::abs(ops::trace_of(rho) - cplx(1, 0)) <= 1e-12);

  const Mat a = oracles::random_matrix(gen, 3), b = oracles::random_matrix(gen, 3);
  CHECK(std::abs(ops::trace_of(ops::commutator(a, b))) <= 1e-14 * a.norm() * b.norm());
  CHECK(max_abs(ops::dagger(a) - a.adjoint()) == doctest::Approx(0.0));
  CHECK_THROWS_AS(ops::commutator(a, oracles::random_matrix(gen, 2)),
                  std::invalid_argument);
}

TEST_CASE("density-matrix validation") {
  auto gen = oracles::rng(18);
  CHECK(ops::is_density_matrix(oracles::random_density(gen, 4)));
  Mat rho = oracles::random_density(gen, 2);
  rho *= 1.5;  // wrong trace
  CHECK(!ops::is_density_matrix(rho));
  Mat neg = ops::projector(Vec::Unit(2, 0)) - 0.001 * ops::projector(Vec::Unit(2, 1));
  neg /= neg.trace().real();
  CHECK(!ops::is_density_matrix(neg));
}

TEST_CASE("kron and partial trace") {
  auto gen = oracles::rng(19);
  const Mat a = oracles::random_density(gen, 2);
  const Mat b = oracles::random_density(gen, 3);
  const Mat ab = ops::kron(a, b);
  CHECK(max_abs(ops::partial_trace_second(ab, 2, 3) - a) <= 1e-13);
}
