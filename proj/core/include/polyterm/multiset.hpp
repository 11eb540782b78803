#ifndef POLYTERM_MULTISET_HPP
#define POLYTERM_MULTISET_HPP

#include <cstdint>
#include <map>
#include <string>

namespace polyterm {

using Nat = std::uint64_t;

enum class OrderResult { Less, Equal, Greater };

/// Finite multiset of naturals: the commutative monoid of heats, ordered by
/// the multiset extension of < on naturals ("any number of copies of n sits
/// below n+1"). The order is total, well-founded and strictly compatible
/// with the sum.
class Multiset {
 public:
  Multiset() = default;

  static Multiset singleton(Nat element) {
    Multiset m;
    m.add(element);
    return m;
  }

  void add(Nat element, Nat multiplicity = 1);

  bool empty() const { return counts_.empty(); }
  Nat size() const;        // number of elements, with multiplicity
  Nat value_sum() const;   // sum of elements, with multiplicity
  Nat multiplicity(Nat element) const;

  const std::map<Nat, Nat>& counts() const { return counts_; }

  bool operator==(const Multiset&) const = default;

  /// Renders as "{3,1,1}" (descending, multiplicities expanded), "{}" when empty.
  std::string str() const;

 private:
  // element -> multiplicity; entries always strictly positive
  std::map<Nat, Nat> counts_;
};

/// Pointwise multiplicity addition (the monoid sum).
Multiset msum(const Multiset& a, const Multiset& b);

/// Multiset order, computed as lexicographic comparison of the
/// descending-sorted element sequences. Coincides with the Dershowitz-Manna
/// extension of < because < is total on naturals.
OrderResult mcompare(const Multiset& a, const Multiset& b);

OrderResult reverse(OrderResult r);

}  // namespace polyterm

#endif
