#include "dlab/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <stdexcept>

namespace dlab {

ComplexPoly::ComplexPoly(std::vector<cnum> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    coeffs_ = {cnum(0.0)};
    return;
  }
  double maxmod = 0.0;
  for (const auto& c : coeffs_) maxmod = std::max(maxmod, std::abs(c));
  if (maxmod == 0.0) {
    coeffs_ = {cnum(0.0)};
    return;
  }
  const double cut = 1e-14 * maxmod;
  while (coeffs_.size() > 1 && std::abs(coeffs_.back()) < cut) coeffs_.pop_back();
}

ComplexPoly ComplexPoly::parse(std::string_view text) {
  return ComplexPoly(parse_complex_list(text));
}

ComplexPoly ComplexPoly::derivative() const {
  if (degree() == 0) return ComplexPoly();
  std::vector<cnum> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k)
    d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return ComplexPoly(std::move(d));
}

std::vector<cnum> ComplexPoly::roots() const {
  const int n = degree();
  if (n < 1) throw std::invalid_argument("roots: constant polynomial");

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  const cnum lead = coeffs_[static_cast<std::size_t>(n)];
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i)
    companion(i, n - 1) = -coeffs_[static_cast<std::size_t>(i)] / lead;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("roots: eigensolver failed to converge");

  std::vector<cnum> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    cnum r = solver.eigenvalues()(i);
    const cnum dp = divided_difference(r, r);  // p'(r)
    if (dp != cnum(0.0)) {
      const cnum polished = r - eval(r) / dp;
      if (std::abs(eval(polished)) <= std::abs(eval(r))) r = polished;
    }
    out[static_cast<std::size_t>(i)] = r;
  }
  return out;
}

bool ComplexPoly::simple_zeros(double tol) const {
  if (degree() < 1) return false;
  const auto rs = roots();
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (std::abs(divided_difference(rs[i], rs[i])) <= tol) return false;
    for (std::size_t j = i + 1; j < rs.size(); ++j)
      if (std::abs(rs[i] - rs[j]) <= tol) return false;
  }
  return true;
}

std::string ComplexPoly::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (k) out += ',';
    out += format_complex(coeffs_[k]);
  }
  return out;
}

SquareCompletion complete_square(const std::vector<cnum>& phis, int d) {
  if (d < 2) throw std::invalid_argument("complete_square: requires d >= 2");
  if (phis.size() != static_cast<std::size_t>(d - 1))
    throw std::invalid_argument("complete_square: need exactly d-1 coefficients");

  // phi_j = phis[j-1]. Matching the f^{t+d-1} coefficient of B^2 against
  // A determines u_t once u_{t+1}..u_{d-1} are known:
  //   2 u_t + sum_{i+j = t+d-1, t < i,j <= d-1} u_i u_j = phi_{t+1}.
  // For d <= 3 the interior sum collapses to the single square term.
  std::vector<cnum> u(static_cast<std::size_t>(d));
  u[static_cast<std::size_t>(d - 1)] = 1.0;
  for (int t = d - 2; t >= 0; --t) {
    const int m = t + d - 1;
    cnum interior = 0.0;
    for (int i = t + 1; i <= d - 1; ++i) {
      const int j = m - i;
      if (j > t && j <= d - 1)
        interior += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)];
    }
    u[static_cast<std::size_t>(t)] =
        0.5 * (phis[static_cast<std::size_t>(t)] - interior);
  }

  std::vector<cnum> q(static_cast<std::size_t>(d - 1));
  for (int i = 0; i <= d - 2; ++i) {
    cnum s = 0.0;
    for (int j = 0; j <= i; ++j)
      s += u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(i - j)];
    q[static_cast<std::size_t>(i)] = s;
  }
  return {std::move(u), std::move(q)};
}

}  // namespace dlab
