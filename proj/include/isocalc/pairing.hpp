#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "isocalc/index_set.hpp"

namespace isocalc {

/// Bijections X x N -> N used to reindex orthonormal bases when grafting
/// a shift onto a prescribed wandering space.
///
/// Row-major, X = {0..m-1}:  pi(r,k) = k*m + r.
/// Cantor, X = N:            pi(r,k) = (r+k)(r+k+1)/2 + k.
class PairingScheme {
 public:
  static PairingScheme row_major(Nat m) {
    if (m == 0) throw std::invalid_argument("row-major pairing needs m >= 1");
    return PairingScheme(m);
  }
  static PairingScheme cantor() { return PairingScheme(0); }

  bool is_cantor() const { return m_ == 0; }
  Nat rows() const { return m_; }

  Nat pair(Nat r, Nat k) const {
    if (m_ != 0) {
      if (r >= m_) throw std::invalid_argument("row index out of range");
      return k * m_ + r;
    }
    Nat s = r + k;
    return s * (s + 1) / 2 + k;
  }

  std::pair<Nat, Nat> unpair(Nat n) const {
    if (m_ != 0) return {n % m_, n / m_};
    // largest s with s(s+1)/2 <= n
    Nat s = 0;
    while ((s + 1) * (s + 2) / 2 <= n) ++s;
    Nat k = n - s * (s + 1) / 2;
    return {s - k, k};
  }

 private:
  explicit PairingScheme(Nat m) : m_(m) {}
  Nat m_;  // 0 means cantor
};

}  // namespace isocalc
