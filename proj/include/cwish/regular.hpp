#pragma once

#include "cwish/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cwish {

/// Unit vector with s nonzero coordinates, each ±1/√s.
struct RegularVector {
  int p = 1;
  int s = 1;
  std::vector<int> support;  // sorted, length s
  std::vector<int> signs;    // ±1, length s

  Vector realize() const;
};

inline constexpr int kSingleLevelCap = 16;
inline constexpr int kPairCap = 14;

/// C(p, s) · 2^s.
double regular_count(int p, int s);

/// Streams Reg_p(s) without materializing it: supports in lexicographic
/// order, sign patterns in binary order within each support.
class RegularEnumerator {
 public:
  /// Throws EnumerationCapError for p > kSingleLevelCap, InvalidInputError
  /// unless 1 <= s <= p.
  RegularEnumerator(int p, int s);

  /// Writes the next vector into out; false when exhausted.
  bool next(RegularVector& out);

 private:
  int p_;
  int s_;
  std::vector<int> support_;
  unsigned sign_mask_ = 0;
  bool done_ = false;
};

std::vector<RegularVector> enumerate_regular(int p, int s);

struct RegularResponse {
  double value = 0.0;
  RegularVector argmax;
};

/// max over y in Reg_p of (v, y): best s of (sum of s largest |v_i|) / √s.
/// Ties in |v_i| go to the lower index, ties in s to the smaller s.
RegularResponse max_regular_response(const Vector& v);

struct BilinearMax {
  double value = 0.0;
  RegularVector x;
  RegularVector y;
};

/// max over (x, y) in Reg_p × Reg_p of (Ax, y), exhaustive over the 3^p - 1
/// outer vectors. Throws EnumerationCapError for p > kPairCap.
BilinearMax max_bilinear_over_regular(const DenseMatrix& a);

struct NetCertificate {
  int p = 0;
  std::string matrix_id;
  double exact_norm = 0.0;
  double reg_max = 0.0;
  long factor = 0;  // 12 ⌈ln 2p⌉²
  bool holds = false;
};

inline constexpr double kCertificateSlack = 1e-9;

NetCertificate certify_norm_bound(const DenseMatrix& a, std::string matrix_id = "");

struct DeltaNetResult {
  bool holds = false;
  double exact_norm = 0.0;
  double net_max = 0.0;
  double scale = 0.0;  // (1 - δ)^{-2}
  /// True only when coverage of the circle was verified (p = 2). Otherwise the
  /// result is conditional on the caller's covering claim.
  bool coverage_verified = false;
};

/// ‖A‖ <= (1 - δ)^{-2} max over net pairs of (Ax, y) + 1e-9.
/// Throws InvalidNetError for a non-unit member, InvalidInputError for δ
/// outside (0, 1) or an empty net, DimensionError on size mismatch.
DeltaNetResult delta_net_check(const DenseMatrix& a, double delta,
                               const std::vector<Vector>& net);

/// count equally spaced unit vectors on the circle, starting at angle 0.
std::vector<Vector> angular_grid(int count);

/// Covering radius of a set of unit vectors in R² (largest chordal distance
/// from a circle point to its nearest member).
double circle_covering_radius(const std::vector<Vector>& net);

}  // namespace cwish
