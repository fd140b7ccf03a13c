#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "factorum/error.hpp"

namespace factorum {

/// A set of feasible degrees D ⊆ {0..arity}, stored as a bit mask.
/// Arity is capped at 63 so that every value fits in one 64-bit word.
class DegreeConstraint {
 public:
  static constexpr unsigned kMaxArity = 63;

  DegreeConstraint() = default;  // {0} of arity 0

  DegreeConstraint(unsigned arity, std::uint64_t mask) : arity_(arity), mask_(mask) {
    if (arity > kMaxArity) throw UsageError("arity above " + std::to_string(kMaxArity));
    if (mask == 0) throw UsageError("empty degree constraint");
    if (std::bit_width(mask) > arity + 1) throw UsageError("feasible degree above arity");
  }

  static DegreeConstraint of(unsigned arity, std::initializer_list<unsigned> values) {
    return of(arity, std::vector<unsigned>(values));
  }
  static DegreeConstraint of(unsigned arity, const std::vector<unsigned>& values) {
    std::uint64_t mask = 0;
    for (unsigned v : values) {
      if (v > arity) throw UsageError("feasible degree above arity");
      mask |= bit(v);
    }
    return DegreeConstraint(arity, mask);
  }
  /// {g, g+step, ..., f}
  static DegreeConstraint range(unsigned arity, unsigned g, unsigned f, unsigned step = 1) {
    if (g > f || f > arity) throw UsageError("need g <= f <= arity");
    if ((f - g) % step != 0) throw UsageError("f - g not a multiple of the step");
    std::uint64_t mask = 0;
    for (unsigned k = g; k <= f; k += step) mask |= bit(k);
    return DegreeConstraint(arity, mask);
  }

  unsigned arity() const { return arity_; }
  std::uint64_t mask() const { return mask_; }
  bool contains(unsigned k) const { return k <= arity_ && (mask_ & bit(k)); }
  unsigned min() const { return static_cast<unsigned>(std::countr_zero(mask_)); }
  unsigned max() const { return static_cast<unsigned>(std::bit_width(mask_)) - 1; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }
  bool is_subset_of(const DegreeConstraint& o) const { return (mask_ & ~o.mask_) == 0; }

  std::vector<unsigned> values() const {
    std::vector<unsigned> out;
    for (std::uint64_t m = mask_; m; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  /// Same feasible set, different arity (must still cover max()).
  DegreeConstraint with_arity(unsigned arity) const { return DegreeConstraint(arity, mask_); }

  friend bool operator==(const DegreeConstraint&, const DegreeConstraint&) = default;

  static constexpr std::uint64_t bit(unsigned k) { return std::uint64_t{1} << k; }

 private:
  unsigned arity_ = 0;
  std::uint64_t mask_ = 1;
};

/// "{0,1,3}"
inline std::string to_string(const DegreeConstraint& d) {
  std::string s = "{";
  bool first = true;
  for (unsigned v : d.values()) {
    if (!first) s += ',';
    s += std::to_string(v);
    first = false;
  }
  return s + "}";
}

struct ConstraintClass {
  bool is_interval = false;         // {g..f}
  bool is_parity_interval = false;  // {g, g+2, .., f}
  bool is_type1 = false;            // {p, p+1, p+3}
  bool is_type2 = false;            // {p, p+2, p+3}
  unsigned max_gap = 0;             // longest run of missing values strictly inside

  bool in_g() const { return is_interval || is_parity_interval; }
  bool in_t() const { return is_type1 || is_type2; }
  /// Accepted by the polynomial solver.
  bool admissible() const { return in_g() || in_t(); }
};

inline ConstraintClass classify(const DegreeConstraint& d) {
  ConstraintClass c;
  const unsigned lo = d.min();
  const unsigned hi = d.max();
  unsigned run = 0;
  for (unsigned k = lo; k <= hi; ++k) {
    if (d.contains(k)) {
      run = 0;
    } else {
      ++run;
      c.max_gap = std::max(c.max_gap, run);
    }
  }
  const std::uint64_t full = ((hi == 63 ? ~std::uint64_t{0} : (DegreeConstraint::bit(hi + 1) - 1)) >>
                              lo) << lo;
  c.is_interval = d.mask() == full;
  std::uint64_t parity = 0;
  for (unsigned k = lo; k <= hi; k += 2) parity |= DegreeConstraint::bit(k);
  c.is_parity_interval = d.mask() == parity;
  const std::uint64_t shifted = d.mask() >> lo;
  c.is_type1 = shifted == 0b1011;
  c.is_type2 = shifted == 0b1101;
  return c;
}

/// The base p of a type-1 or type-2 constraint.
inline unsigned type_base(const DegreeConstraint& d) {
  if (!classify(d).in_t()) throw UsageError("not a type-1/type-2 constraint: " + to_string(d));
  return d.min();
}

struct Split {
  DegreeConstraint d0;
  DegreeConstraint d1;
};

/// type-1 {p,p+1,p+3} -> ({p+1,p+3}, {p}); type-2 {p,p+2,p+3} -> ({p,p+2}, {p+3}).
inline Split split(const DegreeConstraint& d) {
  const auto c = classify(d);
  if (!c.in_t()) throw UsageError("split needs a type-1/type-2 constraint: " + to_string(d));
  const unsigned p = d.min();
  const unsigned n = d.arity();
  if (c.is_type1) return {DegreeConstraint::of(n, {p + 1, p + 3}), DegreeConstraint::of(n, {p})};
  return {DegreeConstraint::of(n, {p, p + 2}), DegreeConstraint::of(n, {p + 3})};
}

/// D^F: the half of split(d) containing `deg`.
inline DegreeConstraint max_parity_subset(const DegreeConstraint& d, unsigned deg) {
  if (!d.contains(deg)) throw UsageError("degree " + std::to_string(deg) + " not in " + to_string(d));
  auto [d0, d1] = split(d);
  return d0.contains(deg) ? d0 : d1;
}

inline DegreeConstraint complement_within(const DegreeConstraint& d, const DegreeConstraint& df) {
  if (!df.is_subset_of(d) || df.arity() != d.arity())
    throw UsageError(to_string(df) + " is not a subset of " + to_string(d));
  auto [d0, d1] = split(d);
  if (df != d0 && df != d1) throw UsageError(to_string(df) + " is not a half of " + to_string(d));
  return DegreeConstraint(d.arity(), d.mask() & ~df.mask());
}

}  // namespace factorum
