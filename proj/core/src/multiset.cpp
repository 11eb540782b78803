#include "polyterm/multiset.hpp"

namespace polyterm {

void Multiset::add(Nat element, Nat multiplicity) {
  if (multiplicity == 0) return;
  counts_[element] += multiplicity;
}

Nat Multiset::size() const {
  Nat total = 0;
  for (const auto& [_, mult] : counts_) total += mult;
  return total;
}

Nat Multiset::value_sum() const {
  Nat total = 0;
  for (const auto& [element, mult] : counts_) total += element * mult;
  return total;
}

Nat Multiset::multiplicity(Nat element) const {
  auto it = counts_.find(element);
  return it == counts_.end() ? 0 : it->second;
}

std::string Multiset::str() const {
  std::string out = "{";
  bool first = true;
  for (auto it = counts_.rbegin(); it != counts_.rend(); ++it) {
    for (Nat k = 0; k < it->second; ++k) {
      if (!first) out += ',';
      out += std::to_string(it->first);
      first = false;
    }
  }
  out += '}';
  return out;
}

Multiset msum(const Multiset& a, const Multiset& b) {
  Multiset out = a;
  for (const auto& [element, mult] : b.counts()) out.add(element, mult);
  return out;
}

OrderResult mcompare(const Multiset& a, const Multiset& b) {
  // Walk both element maps from the largest element down; the first element
  // whose multiplicities differ decides, in favour of whoever has more.
  auto ia = a.counts().rbegin();
  auto ib = b.counts().rbegin();
  while (ia != a.counts().rend() && ib != b.counts().rend()) {
    if (ia->first != ib->first) {
      return ia->first > ib->first ? OrderResult::Greater : OrderResult::Less;
    }
    if (ia->second != ib->second) {
      return ia->second > ib->second ? OrderResult::Greater : OrderResult::Less;
    }
    ++ia;
    ++ib;
  }
  if (ia != a.counts().rend()) return OrderResult::Greater;
  if (ib != b.counts().rend()) return OrderResult::Less;
  return OrderResult::Equal;
}

OrderResult reverse(OrderResult r) {
  switch (r) {
    case OrderResult::Less: return OrderResult::Greater;
    case OrderResult::Greater: return OrderResult::Less;
    default: return OrderResult::Equal;
  }
}

}  // namespace polyterm
