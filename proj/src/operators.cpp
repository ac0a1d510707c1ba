#include "tclprep/operators.hpp"

#include <string>

namespace tclprep::ops {

Mat identity(Eigen::Index dim) { return Mat::Identity(dim, dim); }

Mat sigma_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat sigma_y() {
  Mat m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

Mat sigma_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat sigma_plus() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}

Mat sigma_minus() {
  Mat m = Mat::Zero(2, 2);
  m(1, 0) = 1;
  return m;
}

Mat projector(const Vec& psi) { return psi * psi.adjoint(); }

Mat dagger(const Mat& a) { return a.adjoint(); }

Mat commutator(const Mat& a, const Mat& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

cplx trace_of(const Mat& a) { return a.trace(); }

Mat kron(const Mat& a, const Mat& b) {
  const Eigen::Index ra = a.rows(), ca = a.cols();
  const Eigen::Index rb = b.rows(), cb = b.cols();
  Mat out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i)
    for (Eigen::Index j = 0; j < ca; ++j)
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

Mat partial_trace_second(const Mat& rho, Eigen::Index dim_a, Eigen::Index dim_b) {
  if (rho.rows() != dim_a * dim_b || rho.cols() != dim_a * dim_b)
    throw std::invalid_argument("partial_trace_second: dimension mismatch");
  Mat out = Mat::Zero(dim_a, dim_a);
  for (Eigen::Index i = 0; i < dim_a; ++i)
    for (Eigen::Index j = 0; j < dim_a; ++j)
      for (Eigen::Index k = 0; k < dim_b; ++k)
        out(i, j) += rho(i * dim_b + k, j * dim_b + k);
  return out;
}

double hermiticity_residual(const Mat& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& a, double tol) {
  return a.rows() == a.cols() && hermiticity_residual(a) <= tol;
}

void require_hermitian(const Mat& a, const char* what) {
  if (a.rows() != a.cols())
    throw std::invalid_argument(std::string(what) + ": operator is not square");
  const double r = hermiticity_residual(a);
  if (r > hermitian_tol)
    throw std::invalid_argument(std::string(what) +
                                ": operator is not Hermitian (residual " +
                                std::to_string(r) + ")");
}

double min_eigenvalue(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_density_matrix(const Mat& rho, double trace_tol, double eig_tol) {
  if (rho.rows() != rho.cols()) return false;
  if (hermiticity_residual(rho) > hermitian_tol) return false;
  if (std::abs(rho.trace() - cplx(1, 0)) > trace_tol) return false;
  return min_eigenvalue(rho) >= -eig_tol;
}

void require_density_matrix(const Mat& rho, const char* what) {
  if (!is_density_matrix(rho))
    throw std::invalid_argument(std::string(what) + ": not a density matrix");
}

void require_same_dim(const Mat& a, const Mat& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace tclprep::ops
