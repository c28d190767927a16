#include "isocalc/numeric_oracle.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace isocalc {

namespace {

std::complex<double> to_complex(const Coefficient& c) {
  return {to_double(c.re), to_double(c.im)};
}

}  // namespace

Truncation truncate(const Operator& a, Nat n) {
  if (n == 0) throw std::invalid_argument("truncate: need n >= 1");
  Truncation t;
  t.n = n;
  t.matrix = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                    static_cast<Eigen::Index>(n));
  for (Nat i = 0; i < n; ++i) {
    bool safe = true;
    for (const Entry& e : a.apply(i)) {
      if (e.row >= n) {
        safe = false;
        continue;
      }
      t.matrix(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(i)) =
          to_complex(e.coeff);
    }
    if (safe) t.safe_columns.push_back(i);
  }
  return t;
}

double norm2_estimate(const Truncation& t, double tol) {
  const Eigen::MatrixXcd& m = t.matrix;
  Eigen::Index n = m.cols();
  if (n == 0 || m.norm() == 0.0) return 0.0;
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n);
  // deterministic aperiodic start vector; avoids landing in a null space
  for (Eigen::Index k = 0; k < n; ++k)
    v(k) = std::complex<double>(1.0 + 0.25 * std::cos(1.7 * double(k)),
                                0.25 * std::sin(0.9 * double(k) + 0.3));
  v.normalize();
  double lambda = 0.0;
  Nat max_iter = 10 * static_cast<Nat>(n) + 100;
  for (Nat it = 0; it < max_iter; ++it) {
    Eigen::VectorXcd w = m.adjoint() * (m * v);
    double next = w.norm();
    if (next == 0.0) return 0.0;
    v = w / next;
    if (std::abs(next - lambda) <= tol * std::max(1.0, next)) return next;
    lambda = next;
  }
  return lambda;
}

double norm_estimate(const Truncation& t, double tol) {
  return std::sqrt(norm2_estimate(t, tol));
}

CrossValidation cross_validate(const Operator& a, const Operator& b, Nat n) {
  Truncation ta = truncate(a, n);
  Truncation tb = truncate(b, n);
  Truncation tab = truncate(a * b, n);
  Eigen::MatrixXcd prod = ta.matrix * tb.matrix;
  CrossValidation cv;
  cv.n = n;
  std::vector<char> a_safe(n, 0);
  for (Nat c : ta.safe_columns) a_safe[c] = 1;
  for (Nat col : tb.safe_columns) {
    bool images_safe = true;
    for (const Entry& e : b.apply(col))
      if (e.row >= n || !a_safe[e.row]) images_safe = false;
    if (!images_safe) continue;
    ++cv.columns_compared;
    for (Nat row = 0; row < n; ++row) {
      double d = std::abs(prod(static_cast<Eigen::Index>(row),
                               static_cast<Eigen::Index>(col)) -
                          tab.matrix(static_cast<Eigen::Index>(row),
                                     static_cast<Eigen::Index>(col)));
      cv.max_abs_diff = std::max(cv.max_abs_diff, d);
    }
  }
  cv.agreed = cv.max_abs_diff == 0.0;
  return cv;
}

std::string to_csv(const Truncation& t) {
  // sparse dump, one nonzero per line: i,j,re,im
  std::ostringstream os;
  for (Eigen::Index r = 0; r < t.matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < t.matrix.cols(); ++c) {
      std::complex<double> z = t.matrix(r, c);
      if (z == 0.0) continue;
      os << r << ',' << c << ',' << z.real() << ',' << z.imag() << '\n';
    }
  return os.str();
}

}  // namespace isocalc
