#pragma once

#include <Eigen/Dense>
#include <string>

#include "isocalc/operator.hpp"

namespace isocalc {

/// The compression P_N A P_N as a dense complex matrix, with the list of
/// columns that the cutoff leaves intact (no entry at row >= N). Products
/// of truncations agree with truncations of products exactly on columns
/// whose full orbit stays below the cutoff; `safe_columns` tracks the
/// first-order version of that.
struct Truncation {
  Nat n = 0;
  Eigen::MatrixXcd matrix;
  std::vector<Nat> safe_columns;
};

Truncation truncate(const Operator& a, Nat n);

/// Floating-point operator norm of the truncation: power iteration on
/// M* M, converged to `tol` on the squared norm.
double norm_estimate(const Truncation& t, double tol = 1e-12);
double norm2_estimate(const Truncation& t, double tol = 1e-12);

struct CrossValidation {
  Nat n = 0;
  Nat columns_compared = 0;
  double max_abs_diff = 0.0;  // over compared entries
  bool agreed = false;        // max_abs_diff == 0 after exact evaluation
};

/// Compares truncate(a) * truncate(b) against truncate(a * b) on the
/// columns where truncating b loses nothing. The symbolic product is the
/// reference; any nonzero difference on a safe column is a defect.
CrossValidation cross_validate(const Operator& a, const Operator& b, Nat n);

/// Sparse CSV dump for external inspection: one nonzero per line,
/// "i,j,re,im".
std::string to_csv(const Truncation& t);

}  // namespace isocalc
