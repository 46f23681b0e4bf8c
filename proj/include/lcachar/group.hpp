#pragma once

// Compactly generated LCA groups in structure-theorem form R^m x Z^n x K,
// with K a finite product of cyclic groups Z_d.
//
// Haar measure is fixed to Lebesgue on the real factors and counting measure
// on Z and K, so the point mass at 0 is the convolution unit on discrete
// groups.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "lcachar/error.hpp"

namespace lcachar {

class GroupSpec {
 public:
  GroupSpec() = default;

  GroupSpec(int real_rank, int int_rank, std::vector<std::int64_t> cyclic_orders)
      : real_rank_(real_rank), int_rank_(int_rank), cyclic_orders_(std::move(cyclic_orders)) {
    if (real_rank_ < 0 || int_rank_ < 0) {
      throw Error(Errc::NegativeRank, "ranks must be non-negative");
    }
    for (auto d : cyclic_orders_) {
      if (d < 2) throw Error(Errc::InvalidOrder, "cyclic order " + std::to_string(d) + " < 2");
    }
  }

  int real_rank() const noexcept { return real_rank_; }
  int int_rank() const noexcept { return int_rank_; }
  const std::vector<std::int64_t>& cyclic_orders() const noexcept { return cyclic_orders_; }
  std::size_t torsion_rank() const noexcept { return cyclic_orders_.size(); }

  std::int64_t torsion_size() const noexcept {
    std::int64_t n = 1;
    for (auto d : cyclic_orders_) n *= d;
    return n;
  }

  bool is_discrete() const noexcept { return real_rank_ == 0; }
  bool is_compact() const noexcept { return real_rank_ == 0 && int_rank_ == 0; }

  std::string describe() const {
    std::string out;
    auto append = [&out](const std::string& piece) {
      if (!out.empty()) out += " x ";
      out += piece;
    };
    if (real_rank_ == 1) append("R");
    if (real_rank_ > 1) append("R^" + std::to_string(real_rank_));
    if (int_rank_ == 1) append("Z");
    if (int_rank_ > 1) append("Z^" + std::to_string(int_rank_));
    for (auto d : cyclic_orders_) append("Z_" + std::to_string(d));
    return out.empty() ? "0" : out;
  }

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  int real_rank_ = 0;
  int int_rank_ = 0;
  std::vector<std::int64_t> cyclic_orders_;
};

inline GroupSpec make_group(int real_rank, int int_rank, std::vector<std::int64_t> orders = {}) {
  return GroupSpec(real_rank, int_rank, std::move(orders));
}

inline std::int64_t reduce_mod(std::int64_t value, std::int64_t modulus) noexcept {
  auto r = value % modulus;
  return r < 0 ? r + modulus : r;
}

struct GroupElement {
  std::vector<double> real;
  std::vector<std::int64_t> ints;
  std::vector<std::int64_t> residues;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

inline bool conforms(const GroupSpec& g, const GroupElement& t) noexcept {
  if (t.real.size() != static_cast<std::size_t>(g.real_rank())) return false;
  if (t.ints.size() != static_cast<std::size_t>(g.int_rank())) return false;
  if (t.residues.size() != g.torsion_rank()) return false;
  for (std::size_t i = 0; i < t.residues.size(); ++i) {
    if (t.residues[i] < 0 || t.residues[i] >= g.cyclic_orders()[i]) return false;
  }
  return true;
}

inline void require_conforms(const GroupSpec& g, const GroupElement& t) {
  if (!conforms(g, t)) {
    throw Error(Errc::SpecMismatch, "element does not belong to " + g.describe());
  }
}

/// Builds an element of g, reducing residues into [0, d_i).
inline GroupElement make_element(const GroupSpec& g, std::vector<double> real,
                                 std::vector<std::int64_t> ints = {},
                                 std::vector<std::int64_t> residues = {}) {
  if (real.size() != static_cast<std::size_t>(g.real_rank()) ||
      ints.size() != static_cast<std::size_t>(g.int_rank()) ||
      residues.size() != g.torsion_rank()) {
    throw Error(Errc::SpecMismatch, "coordinate counts do not match " + g.describe());
  }
  for (std::size_t i = 0; i < residues.size(); ++i) {
    residues[i] = reduce_mod(residues[i], g.cyclic_orders()[i]);
  }
  return GroupElement{std::move(real), std::move(ints), std::move(residues)};
}

inline GroupElement identity(const GroupSpec& g) {
  return GroupElement{std::vector<double>(g.real_rank(), 0.0),
                      std::vector<std::int64_t>(g.int_rank(), 0),
                      std::vector<std::int64_t>(g.torsion_rank(), 0)};
}

inline GroupElement add(const GroupSpec& g, const GroupElement& a, const GroupElement& b) {
  require_conforms(g, a);
  require_conforms(g, b);
  GroupElement out = a;
  for (std::size_t j = 0; j < out.real.size(); ++j) out.real[j] += b.real[j];
  for (std::size_t j = 0; j < out.ints.size(); ++j) out.ints[j] += b.ints[j];
  for (std::size_t i = 0; i < out.residues.size(); ++i) {
    out.residues[i] = reduce_mod(out.residues[i] + b.residues[i], g.cyclic_orders()[i]);
  }
  return out;
}

inline GroupElement neg(const GroupSpec& g, const GroupElement& a) {
  require_conforms(g, a);
  GroupElement out = a;
  for (auto& x : out.real) x = -x;
  for (auto& k : out.ints) k = -k;
  for (std::size_t i = 0; i < out.residues.size(); ++i) {
    out.residues[i] = reduce_mod(-out.residues[i], g.cyclic_orders()[i]);
  }
  return out;
}

/// Order of t in G, or 0 when t has infinite order.
inline std::int64_t element_order(const GroupSpec& g, const GroupElement& t) {
  require_conforms(g, t);
  for (double x : t.real) if (x != 0.0) return 0;
  for (auto k : t.ints) if (k != 0) return 0;
  std::int64_t order = 1;
  for (std::size_t i = 0; i < t.residues.size(); ++i) {
    const auto d = g.cyclic_orders()[i];
    const auto q = d / std::gcd(t.residues[i], d);
    order = std::lcm(order, q);
  }
  return order;
}

/// All elements of the finite group K = prod Z_{d_i}, last factor fastest.
inline std::vector<GroupElement> torsion_elements(const GroupSpec& g) {
  std::vector<GroupElement> out;
  const auto& orders = g.cyclic_orders();
  std::vector<std::int64_t> r(orders.size(), 0);
  const auto total = g.torsion_size();
  out.reserve(static_cast<std::size_t>(total));
  for (std::int64_t idx = 0; idx < total; ++idx) {
    out.push_back(GroupElement{std::vector<double>(g.real_rank(), 0.0),
                               std::vector<std::int64_t>(g.int_rank(), 0), r});
    for (std::size_t i = orders.size(); i-- > 0;) {
      if (++r[i] < orders[i]) break;
      r[i] = 0;
    }
  }
  return out;
}

/// Axis-aligned neighbourhood [-u_j, u_j] x {-int_reach..int_reach}^n x K.
/// With int_reach = 1 the box is compact and generates G.
struct GeneratingBox {
  std::vector<double> real_halfwidths;
  int int_reach = 1;

  friend bool operator==(const GeneratingBox&, const GeneratingBox&) = default;
};

inline GeneratingBox make_box(const GroupSpec& g, std::vector<double> halfwidths, int int_reach = 1) {
  if (halfwidths.size() != static_cast<std::size_t>(g.real_rank())) {
    throw Error(Errc::SpecMismatch, "box needs one half-width per real factor");
  }
  for (double u : halfwidths) {
    if (!(u > 0.0) || !std::isfinite(u)) throw Error(Errc::InvalidArgument, "box half-widths must be positive");
  }
  if (int_reach < 0 || int_reach > 1) throw Error(Errc::InvalidArgument, "int_reach must be 0 or 1");
  return GeneratingBox{std::move(halfwidths), int_reach};
}

inline GeneratingBox unit_box(const GroupSpec& g) {
  return GeneratingBox{std::vector<double>(g.real_rank(), 1.0), 1};
}

inline bool in_box(const GroupSpec& g, const GeneratingBox& box, const GroupElement& t) {
  require_conforms(g, t);
  for (std::size_t j = 0; j < t.real.size(); ++j) {
    if (std::abs(t.real[j]) > box.real_halfwidths[j]) return false;
  }
  for (auto k : t.ints) {
    if (std::abs(k) > box.int_reach) return false;
  }
  return true;
}

/// Least p such that t is a sum of p elements of the box; 0 iff t = 0.
inline std::int64_t word_length(const GroupSpec& g, const GroupElement& t, const GeneratingBox& box) {
  require_conforms(g, t);
  if (box.real_halfwidths.size() != t.real.size()) {
    throw Error(Errc::SpecMismatch, "box does not match group");
  }
  std::int64_t p = 0;
  for (std::size_t j = 0; j < t.real.size(); ++j) {
    p = std::max(p, static_cast<std::int64_t>(std::ceil(std::abs(t.real[j]) / box.real_halfwidths[j])));
  }
  for (auto k : t.ints) {
    if (k != 0 && box.int_reach == 0) {
      throw Error(Errc::InvalidArgument, "box with int_reach 0 does not generate Z factors");
    }
    p = std::max<std::int64_t>(p, std::abs(k));
  }
  for (auto r : t.residues) {
    if (r != 0) p = std::max<std::int64_t>(p, 1);
  }
  return p;
}

}  // namespace lcachar
