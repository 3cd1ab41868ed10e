#include "ccvar/indexing.hpp"

#include <algorithm>
#include <bit>

namespace ccvar {

int popcount(OrbitalMask m) { return std::popcount(m); }

std::vector<int> mask_members(OrbitalMask m) {
  std::vector<int> out;
  out.reserve(popcount(m));
  while (m != 0) {
    int bit = std::countr_zero(m);
    out.push_back(bit + 1);
    m &= m - 1;
  }
  return out;
}

OrbitalMask mask_from_members(const std::vector<int>& members) {
  OrbitalMask m = 0;
  for (int v : members) {
    if (v < 1 || v > kMaxOrbitals) throw InvalidInput("orbital index out of range: " + std::to_string(v));
    OrbitalMask bit = OrbitalMask{1} << (v - 1);
    if (m & bit) throw InvalidInput("repeated orbital index: " + std::to_string(v));
    m |= bit;
  }
  return m;
}

std::string mask_to_string(OrbitalMask m) {
  std::string s = "{";
  bool first = true;
  for (int v : mask_members(m)) {
    if (!first) s += ",";
    s += std::to_string(v);
    first = false;
  }
  return s + "}";
}

OrbitalMask reference_mask(int d) { return (OrbitalMask{1} << d) - 1; }

int level(OrbitalMask set, int d) { return popcount(set & ~reference_mask(d)); }

int concat_sign(OrbitalMask first, OrbitalMask second) {
  // Inversions are pairs (u, v) with u in first, v in second, u > v.
  int inversions = 0;
  OrbitalMask s = second;
  while (s != 0) {
    int bit = std::countr_zero(s);
    // members of `first` strictly above this element of `second`
    inversions += popcount(first & ~((OrbitalMask{2} << bit) - 1));
    s &= s - 1;
  }
  return (inversions & 1) ? -1 : 1;
}

int t_entry_sign(OrbitalMask row, OrbitalMask col) {
  OrbitalMask common = row & col;
  return concat_sign(common, col & ~row) * concat_sign(common, row & ~col);
}

OrbitalMask dual_relabel(OrbitalMask set, int n) {
  OrbitalMask full = (OrbitalMask{1} << n) - 1;
  OrbitalMask comp = full & ~set;
  OrbitalMask out = 0;
  while (comp != 0) {
    int bit = std::countr_zero(comp);  // orbital bit+1 -> n - bit
    out |= OrbitalMask{1} << (n - 1 - bit);
    comp &= comp - 1;
  }
  return out;
}

BlockLabel block_label(OrbitalMask set, int d) {
  OrbitalMask ref = reference_mask(d);
  return BlockLabel{ref & ~set, set & ~ref};
}

OrbitalMask orbital_set(const BlockLabel& label, int d) {
  return (reference_mask(d) & ~label.alpha) | label.beta;
}

std::vector<OrbitalMask> enumerate_orbital_sets(int d, int n) {
  if (d < 1 || n < d) throw InvalidInput("invalid dimensions: need 1 <= d <= n");
  if (n > kMaxOrbitals) throw ResourceLimit("n exceeds the mask encoding cap of " + std::to_string(kMaxOrbitals));

  // Generate in lexicographic member order, then stable-partition by level.
  // Lex order within one level is preserved, so the result is level-major with
  // lexicographic ties and the reference state [d] first.
  std::vector<OrbitalMask> lex;
  lex.reserve(static_cast<std::size_t>(binomial(n, d)));
  std::vector<int> c(d);
  for (int i = 0; i < d; ++i) c[i] = i + 1;
  while (true) {
    lex.push_back(mask_from_members(c));
    int i = d - 1;
    while (i >= 0 && c[i] == n - (d - 1 - i)) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < d; ++j) c[j] = c[j - 1] + 1;
  }

  std::vector<OrbitalMask> out;
  out.reserve(lex.size());
  int max_level = std::min(d, n - d);
  for (int lvl = 0; lvl <= max_level; ++lvl)
    for (OrbitalMask m : lex)
      if (level(m, d) == lvl) out.push_back(m);
  return out;
}

IndexTable::IndexTable(int d, int n) : d_(d), n_(n), sets_(enumerate_orbital_sets(d, n)) {
  int max_level = std::min(d, n - d);
  level_of_.resize(sets_.size());
  level_offset_.assign(max_level + 2, 0);
  position_.reserve(sets_.size() * 2);
  for (int i = 0; i < size(); ++i) {
    level_of_[i] = level(sets_[i], d_);
    position_.emplace(sets_[i], i);
  }
  for (int lvl = 0, i = 0; lvl <= max_level; ++lvl) {
    level_offset_[lvl] = i;
    while (i < size() && level_of_[i] == lvl) ++i;
    level_offset_[lvl + 1] = i;
  }
}

int IndexTable::index_of(OrbitalMask set) const {
  auto it = position_.find(set);
  if (it == position_.end())
    throw InvalidInput("not a " + std::to_string(d_) + "-subset of [" + std::to_string(n_) + "]: " + mask_to_string(set));
  return it->second;
}

TruncationSet::TruncationSet(int d_in, int n_in, std::vector<int> sigma_in)
    : d(d_in), n(n_in), sigma(std::move(sigma_in)) {
  if (d < 1 || n < d) throw InvalidInput("invalid dimensions: need 1 <= d <= n");
  std::sort(sigma.begin(), sigma.end());
  sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());
  if (sigma.empty()) throw InvalidInput("truncation set must be nonempty");
  if (static_cast<int>(sigma.size()) >= d) throw InvalidInput("truncation set must be a proper subset of [d]");
  int max_level = std::min(d, n - d);
  for (int k : sigma) {
    if (k < 1 || k > d) throw InvalidInput("truncation level out of [d]: " + std::to_string(k));
    if (k > max_level)
      throw InvalidInput("truncation level " + std::to_string(k) + " has no index sets at (d,n)=(" +
                         std::to_string(d) + "," + std::to_string(n) + ")");
  }
}

bool TruncationSet::contains(int lvl) const {
  return std::binary_search(sigma.begin(), sigma.end(), lvl);
}

std::vector<int> TruncationSet::defining_levels() const {
  std::vector<int> out;
  int max_level = std::min(d, n - d);
  for (int k = 1; k <= max_level; ++k)
    if (!contains(k)) out.push_back(k);
  return out;
}

std::string TruncationSet::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(sigma[i]);
  }
  return s + "}";
}

std::vector<int> sigma_tilde(const IndexTable& table, const TruncationSet& trunc) {
  if (table.d() != trunc.d || table.n() != trunc.n) throw InvalidInput("truncation set and index table disagree on (d,n)");
  std::vector<int> out;
  for (int lvl : trunc.sigma)
    for (int i = table.level_begin(lvl); i < table.level_end(lvl); ++i) out.push_back(i);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    // exact at every step: result * num is divisible by i
    if (result > UINT64_MAX / num) throw ResourceLimit("binomial overflow");
    result = result * num / i;
  }
  return result;
}

}  // namespace ccvar
