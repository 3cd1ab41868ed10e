#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccvar/errors.hpp"

namespace ccvar {

/// A set of orbital indices, encoded as a bit mask: bit i-1 set <=> orbital i
/// is a member. Orbitals are 1-based in all user-facing I/O.
using OrbitalMask = std::uint32_t;

/// Hard cap on n imposed by the mask encoding (desk scale needs n <= 12).
inline constexpr int kMaxOrbitals = 28;

int popcount(OrbitalMask m);

/// Members of a mask as a strictly increasing 1-based sequence.
std::vector<int> mask_members(OrbitalMask m);

OrbitalMask mask_from_members(const std::vector<int>& members);

/// "{1,2,4}" style rendering, for diagnostics.
std::string mask_to_string(OrbitalMask m);

/// Mask of the reference set [d] = {1,...,d}.
OrbitalMask reference_mask(int d);

/// Excitation level |I \ [d]|.
int level(OrbitalMask set, int d);

/// Sign of the permutation sorting the concatenation (first, second) of two
/// disjoint increasing sequences into one increasing sequence: parity of
/// #{(u,v) in first x second : u > v}.
int concat_sign(OrbitalMask first, OrbitalMask second);

/// Sign of the cluster-operator matrix entry in row J, column I, defined as
/// sgn(I -> (I cap J, I \ J)) * sgn(J -> (I cap J, J \ I)). Caller must ensure
/// the entry is structurally nonzero: I \ J subset of [d], (J \ I) cap [d]
/// empty, J != I.
int t_entry_sign(OrbitalMask row, OrbitalMask col);

/// Particle-hole relabeling I -> I' = { n+1-i : i not in I }, an (n-d)-subset.
/// Applying the (n-d,n) relabeling again yields I back; levels are preserved.
OrbitalMask dual_relabel(OrbitalMask set, int n);

/// The (alpha, beta) aliasing of an orbital set: I = ([d] \ alpha) cup beta
/// with alpha subset of [d] and beta subset of [n] \ [d], |alpha| = |beta|.
struct BlockLabel {
  OrbitalMask alpha = 0;
  OrbitalMask beta = 0;

  bool operator==(const BlockLabel&) const = default;
};

BlockLabel block_label(OrbitalMask set, int d);
OrbitalMask orbital_set(const BlockLabel& label, int d);

/// All d-subsets of [n] in the global coordinate order: level-major,
/// lexicographic within each level, reference state [d] first.
std::vector<OrbitalMask> enumerate_orbital_sets(int d, int n);

/// Fixes the global row/column order for one (d, n) grid and resolves masks
/// to positions. Immutable after construction.
class IndexTable {
 public:
  IndexTable(int d, int n);

  int d() const { return d_; }
  int n() const { return n_; }
  int size() const { return static_cast<int>(sets_.size()); }
  int max_level() const { return static_cast<int>(level_offset_.size()) - 2; }

  const std::vector<OrbitalMask>& sets() const { return sets_; }
  OrbitalMask set_at(int index) const { return sets_[index]; }
  OrbitalMask reference() const { return sets_[0]; }

  int level_of(int index) const { return level_of_[index]; }
  /// First global index at the given level.
  int level_begin(int lvl) const { return level_offset_[lvl]; }
  int level_end(int lvl) const { return level_offset_[lvl + 1]; }
  int level_count(int lvl) const { return level_end(lvl) - level_begin(lvl); }

  /// Position of a mask in the global order; throws InvalidInput if absent.
  int index_of(OrbitalMask set) const;

 private:
  int d_;
  int n_;
  std::vector<OrbitalMask> sets_;
  std::vector<int> level_of_;
  std::vector<int> level_offset_;
  std::unordered_map<OrbitalMask, int> position_;
};

/// A truncation set: nonempty sigma strictly contained in [d], every level in
/// sigma representable at (d, n).
struct TruncationSet {
  int d = 0;
  int n = 0;
  std::vector<int> sigma;  // sorted, distinct

  TruncationSet() = default;
  TruncationSet(int d, int n, std::vector<int> sigma);

  bool contains(int lvl) const;
  /// Levels in [d] \ sigma that have at least one index set at (d, n).
  std::vector<int> defining_levels() const;
  std::string to_string() const;  // "{1,2}"
};

/// Global indices of all sets with level in sigma, in global order.
std::vector<int> sigma_tilde(const IndexTable& table, const TruncationSet& trunc);

/// Exact binomial coefficient; throws ResourceLimit on overflow.
std::uint64_t binomial(int n, int k);

}  // namespace ccvar
