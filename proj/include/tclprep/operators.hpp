// operators.hpp — Complex operator algebra on small Hilbert spaces

#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace tclprep::ops {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double hermitian_tol = 1e-12;
inline constexpr double unit_trace_tol = 1e-12;
inline constexpr double positivity_tol = 1e-10;

Mat identity(Eigen::Index dim);
Mat sigma_x();
Mat sigma_y();
Mat sigma_z();
Mat sigma_plus();   // |0><1| raising in the sigma_z basis (|0> excited)
Mat sigma_minus();

// |psi><psi|; psi need not be normalized
Mat projector(const Vec& psi);

Mat dagger(const Mat& a);
Mat commutator(const Mat& a, const Mat& b);
cplx trace_of(const Mat& a);
Mat kron(const Mat& a, const Mat& b);

// trace over the second factor of a (dim_a*dim_b) x (dim_a*dim_b) operator
Mat partial_trace_second(const Mat& rho, Eigen::Index dim_a, Eigen::Index dim_b);

double hermiticity_residual(const Mat& a);  // max-abs of a - a^dagger
bool is_hermitian(const Mat& a, double tol = hermitian_tol);
void require_hermitian(const Mat& a, const char* what);

// smallest eigenvalue of a Hermitian operator
double min_eigenvalue(const Mat& hermitian);

bool is_density_matrix(const Mat& rho,
                       double trace_tol = unit_trace_tol,
                       double eig_tol = positivity_tol);
void require_density_matrix(const Mat& rho, const char* what);

void require_same_dim(const Mat& a, const Mat& b, const char* what);

}  // namespace tclprep::ops
