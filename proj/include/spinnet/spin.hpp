// SPDX-License-Identifier: Apache-2.0
//
// Spin angular-momentum matrices for arbitrary spin l and the embedding of
// single/multi-site operators into a network Hilbert space.
#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spinnet/cmatrix.hpp"

namespace spinnet {

/// Exact half-integer spin, stored as twice its value.
class HalfInt {
 public:
  explicit HalfInt(int twice) : twice_(twice) {
    if (twice < 0) throw std::invalid_argument("HalfInt: negative spin");
  }

  /// Parses "1/2", "1", "3/2", ... without going through floating point.
  static HalfInt parse(std::string_view s) {
    const auto fail = [&]() -> HalfInt {
      throw std::invalid_argument("HalfInt: cannot parse spin value '" + std::string(s) +
                                  "' (expected an integer or odd/2)");
    };
    // strict integer parse: the whole field must be consumed
    const auto to_int = [&](std::string_view field) {
      int value = 0;
      const auto [ptr, ec] =
          std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size()) fail();
      return value;
    };
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return HalfInt(2 * to_int(s));
    if (to_int(s.substr(slash + 1)) != 2) fail();
    return HalfInt(to_int(s.substr(0, slash)));
  }

  int twice() const { return twice_; }
  double value() const { return twice_ / 2.0; }
  /// Hilbert-space dimension N = 2l + 1.
  int dimension() const { return twice_ + 1; }
  /// True for half-integer spin (even N).
  bool half_integer() const { return twice_ % 2 == 1; }

  std::string str() const {
    if (twice_ % 2 == 0) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

  friend bool operator==(HalfInt a, HalfInt b) { return a.twice_ == b.twice_; }
  friend bool operator!=(HalfInt a, HalfInt b) { return a.twice_ != b.twice_; }
  friend bool operator<(HalfInt a, HalfInt b) { return a.twice_ < b.twice_; }

 private:
  int twice_;
};

struct SpinTriple {
  CMatrix x, y, z;
};

namespace detail {

inline SpinTriple make_spin_matrices(HalfInt l) {
  const int n = l.dimension();
  const double lv = l.value();
  // basis ordered by magnetic quantum number m = l, l-1, ..., -l
  CMatrix jp = CMatrix::Zero(n, n);
  CMatrix sz = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double m = lv - i;
    sz(i, i) = m;
    if (i > 0) jp(i - 1, i) = std::sqrt(lv * (lv + 1.0) - m * (m + 1.0));
  }
  const CMatrix jm = jp.adjoint();
  SpinTriple t;
  t.x = (jp + jm) / 2.0;
  // sign convention fixed by [i sx, i sy] = i sz (and cyclic) for every l;
  // this is the complex conjugate of the textbook y-matrix
  t.y = Complex(0, 1) * (jp - jm) / 2.0;
  t.z = sz;
  return t;
}

}  // namespace detail

/// Hermitian NxN matrices (N = 2l+1) with sz = diag(l, ..., -l) and
/// [i sx, i sy] = i sz cyclically. Cached per l; the returned reference
/// stays valid for the program lifetime.
inline const SpinTriple& spin_matrices(HalfInt l) {
  if (l.twice() < 1) throw std::invalid_argument("spin_matrices: spin must be >= 1/2");
  static std::map<int, SpinTriple> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(l.twice());
  if (it == cache.end()) it = cache.emplace(l.twice(), detail::make_spin_matrices(l)).first;
  return it->second;
}

enum class Axis { X = 0, Y = 1, Z = 2 };

inline const CMatrix& spin_axis(HalfInt l, Axis v) {
  const SpinTriple& t = spin_matrices(l);
  switch (v) {
    case Axis::X: return t.x;
    case Axis::Y: return t.y;
    default: return t.z;
  }
}

inline char axis_name(Axis v) { return v == Axis::X ? 'x' : (v == Axis::Y ? 'y' : 'z'); }

/// A multi-site operator: the spin component v_s at each listed site
/// (1-based indices, strictly increasing), identity elsewhere.
struct SiteOperatorSpec {
  std::vector<std::pair<int, Axis>> sites;
  std::vector<int> network_dims;  // N_j per site
};

inline int product_dim(const std::vector<int>& dims) {
  long long n = 1;
  for (int d : dims) {
    n *= d;
    if (n > (1 << 24)) throw std::invalid_argument("product_dim: dimension overflow");
  }
  return static_cast<int>(n);
}

/// Kronecker-embeds the requested spin components, site 1 leftmost.
inline CMatrix embed(const SiteOperatorSpec& spec) {
  const int n = static_cast<int>(spec.network_dims.size());
  int prev = 0;
  for (const auto& [site, axis] : spec.sites) {
    (void)axis;
    if (site < 1 || site > n) throw std::invalid_argument("embed: site index out of range");
    if (site <= prev) throw std::invalid_argument("embed: duplicate or unordered site index");
    prev = site;
  }
  CMatrix out = CMatrix::Identity(1, 1);
  auto next = spec.sites.begin();
  for (int j = 1; j <= n; ++j) {
    const int nj = spec.network_dims[j - 1];
    if (nj < 2) throw std::invalid_argument("embed: site dimension must be >= 2");
    if (next != spec.sites.end() && next->first == j) {
      out = kron(out, spin_axis(HalfInt(nj - 1), next->second));
      ++next;
    } else {
      out = kron(out, CMatrix::Identity(nj, nj));
    }
  }
  return out;
}

inline CMatrix embed_single(const std::vector<int>& dims, int site, Axis v) {
  return embed(SiteOperatorSpec{{{site, v}}, dims});
}

}  // namespace spinnet
