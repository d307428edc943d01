#include "cwish/regular.hpp"

#include "cwish/bound.hpp"
#include "cwish/errors.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace cwish {

Vector RegularVector::realize() const {
  Vector v = Vector::Zero(p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(s));
  for (int k = 0; k < s; ++k) v(support[k]) = signs[k] * scale;
  return v;
}

double regular_count(int p, int s) {
  if (s < 0 || s > p) return 0.0;
  double binom = 1.0;
  for (int k = 1; k <= s; ++k) binom = binom * (p - s + k) / k;
  return std::round(binom) * std::ldexp(1.0, s);
}

RegularEnumerator::RegularEnumerator(int p, int s) : p_(p), s_(s) {
  if (p < 1) throw InvalidInputError("enumerate_regular: p must be positive");
  if (p > kSingleLevelCap) {
    std::ostringstream msg;
    msg << "enumeration cap exceeded: p = " << p << " > " << kSingleLevelCap
        << " would produce " << regular_count(p, s) << " vectors";
    throw EnumerationCapError(msg.str(), regular_count(p, s));
  }
  if (s < 1 || s > p) throw InvalidInputError("enumerate_regular: need 1 <= s <= p");
  support_.resize(static_cast<std::size_t>(s));
  std::iota(support_.begin(), support_.end(), 0);
}

bool RegularEnumerator::next(RegularVector& out) {
  if (done_) return false;
  out.p = p_;
  out.s = s_;
  out.support = support_;
  out.signs.resize(static_cast<std::size_t>(s_));
  for (int k = 0; k < s_; ++k) out.signs[k] = (sign_mask_ >> k) & 1u ? -1 : 1;

  if (++sign_mask_ == (1u << s_)) {
    sign_mask_ = 0;
    // Next combination in lexicographic order.
    int i = s_ - 1;
    while (i >= 0 && support_[i] == p_ - s_ + i) --i;
    if (i < 0) {
      done_ = true;
    } else {
      ++support_[i];
      for (int j = i + 1; j < s_; ++j) support_[j] = support_[j - 1] + 1;
    }
  }
  return true;
}

std::vector<RegularVector> enumerate_regular(int p, int s) {
  RegularEnumerator it(p, s);
  std::vector<RegularVector> all;
  all.reserve(static_cast<std::size_t>(regular_count(p, s)));
  RegularVector v;
  while (it.next(v)) all.push_back(v);
  return all;
}

namespace {

struct Response {
  double value;
  int s;
};

/// Sorts order[0..p) by |w| descending, index ascending, and returns the best
/// prefix value and its length.
Response best_response(const double* w, int p, int* order) {
  std::iota(order, order + p, 0);
  std::sort(order, order + p, [w](int a, int b) {
    const double fa = std::abs(w[a]);
    const double fb = std::abs(w[b]);
    return fa != fb ? fa > fb : a < b;
  });
  Response best{-1.0, 1};
  double prefix = 0.0;
  for (int s = 1; s <= p; ++s) {
    prefix += std::abs(w[order[s - 1]]);
    const double value = prefix / std::sqrt(static_cast<double>(s));
    if (value > best.value) best = {value, s};
  }
  return best;
}

RegularVector response_vector(const double* w, int p, const int* order, int s) {
  RegularVector y;
  y.p = p;
  y.s = s;
  y.support.assign(order, order + s);
  std::sort(y.support.begin(), y.support.end());
  y.signs.resize(static_cast<std::size_t>(s));
  for (int k = 0; k < s; ++k) y.signs[k] = w[y.support[k]] < 0.0 ? -1 : 1;
  return y;
}

}  // namespace

RegularResponse max_regular_response(const Vector& v) {
  const int p = static_cast<int>(v.size());
  if (p < 1) throw InvalidInputError("max_regular_response: empty vector");
  if (!v.allFinite()) throw InvalidInputError("max_regular_response: non-finite entries");
  std::vector<int> order(static_cast<std::size_t>(p));
  const Response r = best_response(v.data(), p, order.data());
  return {r.value, response_vector(v.data(), p, order.data(), r.s)};
}

BilinearMax max_bilinear_over_regular(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("max_bilinear_over_regular: A must be square");
  require_finite(a, "max_bilinear_over_regular");
  const int p = static_cast<int>(a.rows());
  if (p < 1) throw InvalidInputError("max_bilinear_over_regular: empty matrix");
  if (p > kPairCap) {
    const double count = std::pow(3.0, p) - 1.0;
    std::ostringstream msg;
    msg << "enumeration cap exceeded: p = " << p << " > " << kPairCap << " would enumerate "
        << count << " outer regular vectors";
    throw EnumerationCapError(msg.str(), count);
  }

  std::array<int, kPairCap> digits{};  // 0 -> 0, 1 -> +1, 2 -> -1
  std::array<double, kPairCap> w{};
  std::array<int, kPairCap> order{};
  BilinearMax best;
  best.value = -1.0;
  std::array<int, kPairCap> best_digits{};
  std::array<int, kPairCap> best_order{};
  int best_s_y = 1;
  std::array<double, kPairCap> best_w{};

  for (;;) {
    // Ternary increment; stop after wrapping to all zeros.
    int i = 0;
    while (i < p && digits[i] == 2) digits[i++] = 0;
    if (i == p) break;
    ++digits[i];

    int s_x = 0;
    std::fill(w.begin(), w.begin() + p, 0.0);
    for (int j = 0; j < p; ++j) {
      if (digits[j] == 0) continue;
      ++s_x;
      const double sign = digits[j] == 1 ? 1.0 : -1.0;
      for (int r = 0; r < p; ++r) w[r] += sign * a(r, j);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(s_x));
    for (int r = 0; r < p; ++r) w[r] *= scale;

    const Response resp = best_response(w.data(), p, order.data());
    if (resp.value > best.value) {
      best.value = resp.value;
      best_digits = digits;
      best_order = order;
      best_s_y = resp.s;
      best_w = w;
    }
  }

  best.x.p = p;
  best.x.s = 0;
  for (int j = 0; j < p; ++j) {
    if (best_digits[j] == 0) continue;
    ++best.x.s;
    best.x.support.push_back(j);
    best.x.signs.push_back(best_digits[j] == 1 ? 1 : -1);
  }
  best.y = response_vector(best_w.data(), p, best_order.data(), best_s_y);
  return best;
}

NetCertificate certify_norm_bound(const DenseMatrix& a, std::string matrix_id) {
  NetCertificate cert;
  cert.p = static_cast<int>(a.rows());
  cert.matrix_id = std::move(matrix_id);
  cert.reg_max = max_bilinear_over_regular(a).value;
  cert.exact_norm = spectral_norm(a);
  cert.factor = 12 * log_factor(a.rows());
  cert.holds = cert.exact_norm <= static_cast<double>(cert.factor) * cert.reg_max + kCertificateSlack;
  return cert;
}

DeltaNetResult delta_net_check(const DenseMatrix& a, double delta, const std::vector<Vector>& net) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidInputError("delta_net_check: delta must lie in (0, 1)");
  }
  if (a.rows() != a.cols()) throw DimensionError("delta_net_check: A must be square");
  require_finite(a, "delta_net_check");
  if (net.empty()) throw InvalidInputError("delta_net_check: net is empty");
  for (std::size_t k = 0; k < net.size(); ++k) {
    if (net[k].size() != a.rows()) throw DimensionError("delta_net_check: net member has wrong length");
    if (std::abs(net[k].norm() - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << "invalid net: member " << k << " has norm " << net[k].norm();
      throw InvalidNetError(msg.str());
    }
  }

  DeltaNetResult result;
  result.exact_norm = spectral_norm(a);
  result.scale = 1.0 / ((1.0 - delta) * (1.0 - delta));
  double best = -std::numeric_limits<double>::infinity();
  for (const Vector& x : net) {
    const Vector ax = a * x;
    for (const Vector& y : net) best = std::max(best, ax.dot(y));
  }
  result.net_max = best;
  result.holds = result.exact_norm <= result.scale * result.net_max + 1e-9;
  if (a.rows() == 2) result.coverage_verified = circle_covering_radius(net) <= delta;
  return result;
}

std::vector<Vector> angular_grid(int count) {
  if (count < 1) throw InvalidInputError("angular_grid: count must be positive");
  std::vector<Vector> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / count;
    Vector v(2);
    v << std::cos(angle), std::sin(angle);
    grid.push_back(v);
  }
  return grid;
}

double circle_covering_radius(const std::vector<Vector>& net) {
  if (net.empty()) throw InvalidInputError("circle_covering_radius: net is empty");
  std::vector<double> angles;
  angles.reserve(net.size());
  for (const Vector& v : net) {
    if (v.size() != 2) throw DimensionError("circle_covering_radius: vectors must lie in R^2");
    angles.push_back(std::atan2(v(1), v(0)));
  }
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
  for (std::size_t k = 1; k < angles.size(); ++k) gap = std::max(gap, angles[k] - angles[k - 1]);
  // Worst point sits mid-gap, at angular distance gap / 2 from both neighbours.
  return 2.0 * std::sin(std::min(gap, 2.0 * std::numbers::pi) / 4.0);
}

}  // namespace cwish
