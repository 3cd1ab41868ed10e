#include "ccvar/ubp.hpp"

#include <algorithm>

namespace ccvar {

namespace {

std::int64_t factorial(int k) {
  std::int64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Enumerate subsets of `pool` with exactly `count` bits, ascending by mask value.
void subsets_of_size(OrbitalMask pool, int count, std::vector<OrbitalMask>& out) {
  out.clear();
  std::vector<int> bits = mask_members(pool);  // 1-based
  int m = static_cast<int>(bits.size());
  if (count > m) return;
  std::vector<int> idx(count);
  for (int i = 0; i < count; ++i) idx[i] = i;
  while (true) {
    OrbitalMask s = 0;
    for (int i : idx) s |= OrbitalMask{1} << (bits[i] - 1);
    out.push_back(s);
    int i = count - 1;
    while (i >= 0 && idx[i] == m - (count - i)) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < count; ++j) idx[j] = idx[j - 1] + 1;
  }
}

struct UbpBuilder {
  int d;
  std::vector<UniformBlockPermutation>& out;
  std::vector<OrbitalMask> alphas;  // in canonical order (increasing min element)

  void assign_betas(std::size_t block, OrbitalMask unused_betas, std::vector<OrbitalMask>& betas) {
    if (block == alphas.size()) {
      emit(betas);
      return;
    }
    std::vector<OrbitalMask> choices;
    subsets_of_size(unused_betas, popcount(alphas[block]), choices);
    for (OrbitalMask beta : choices) {
      betas.push_back(beta);
      assign_betas(block + 1, unused_betas & ~beta, betas);
      betas.pop_back();
    }
  }

  void emit(const std::vector<OrbitalMask>& betas) {
    UniformBlockPermutation ubp;
    int k = static_cast<int>(alphas.size());
    ubp.blocks.reserve(k);
    int sign_alpha = 1, sign_beta = 1, nu = d * (d - 1) / 2;
    for (int i = 0; i < k; ++i) {
      ubp.blocks.push_back(BlockLabel{alphas[i], betas[i]});
      int a = popcount(alphas[i]);
      nu -= a * (a - 1) / 2;
      for (int j = i + 1; j < k; ++j) {
        sign_alpha *= concat_sign(alphas[i], alphas[j]);
        sign_beta *= concat_sign(betas[i], betas[j]);
      }
    }
    ubp.sign = sign_alpha * sign_beta;
    ubp.nu = nu;
    out.push_back(std::move(ubp));
  }

  // Grow set partitions of [d] element by element; blocks stay ordered by
  // their minimum, which is the canonical order.
  void grow(int element) {
    if (element > d) {
      OrbitalMask all_beta = (reference_mask(2 * d)) & ~reference_mask(d);
      std::vector<OrbitalMask> betas;
      assign_betas(0, all_beta, betas);
      return;
    }
    OrbitalMask bit = OrbitalMask{1} << (element - 1);
    std::size_t blocks_here = alphas.size();  // deeper calls push and pop
    for (std::size_t i = 0; i < blocks_here; ++i) {
      alphas[i] |= bit;
      grow(element + 1);
      alphas[i] &= ~bit;
    }
    alphas.push_back(bit);
    grow(element + 1);
    alphas.pop_back();
  }
};

}  // namespace

std::int64_t UniformBlockPermutation::mobius() const {
  int k = block_count();
  return (k % 2 == 1 ? 1 : -1) * factorial(k - 1);
}

std::vector<UniformBlockPermutation> enumerate_ubp(int d) {
  if (d < 1 || d > 6) throw ResourceLimit("uniform block permutations capped at d <= 6");
  std::vector<UniformBlockPermutation> out;
  UbpBuilder builder{d, out, {}};
  builder.grow(1);
  return out;
}

void SparsePolynomial::add(const ExponentVector& exponents, std::int64_t c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(exponents, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

std::int64_t SparsePolynomial::coefficient(const ExponentVector& exponents) const {
  auto it = terms_.find(exponents);
  return it == terms_.end() ? 0 : it->second;
}

Complex SparsePolynomial::eval(const Eigen::VectorXcd& point) const {
  Complex total = 0;
  for (const auto& [exps, coeff] : terms_) {
    Complex mono = static_cast<double>(coeff);
    for (int v = 0; v < nvars_; ++v)
      for (int e = 0; e < exps[v]; ++e) mono *= point[v];
    total += mono;
  }
  return total;
}

SparsePolynomial SparsePolynomial::operator+(const SparsePolynomial& other) const {
  SparsePolynomial out = *this;
  for (const auto& [exps, coeff] : other.terms_) out.add(exps, coeff);
  return out;
}

SparsePolynomial SparsePolynomial::operator*(const SparsePolynomial& other) const {
  SparsePolynomial out(nvars_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : other.terms_) {
      ExponentVector e = ea;
      for (int v = 0; v < nvars_; ++v) e[v] = static_cast<std::uint8_t>(e[v] + eb[v]);
      out.add(e, ca * cb);
    }
  return out;
}

SparsePolynomial SparsePolynomial::substituted(const std::vector<const SparsePolynomial*>& replacement) const {
  SparsePolynomial out(nvars_);
  for (const auto& [exps, coeff] : terms_) {
    SparsePolynomial mono(nvars_);
    mono.add(ExponentVector(nvars_, 0), coeff);
    for (int v = 0; v < nvars_; ++v)
      for (int e = 0; e < exps[v]; ++e) mono = mono * (*replacement[v]);
    out = out + mono;
  }
  return out;
}

namespace {

SparsePolynomial master(int d, bool backward) {
  IndexTable table(d, 2 * d);
  SparsePolynomial poly(table.size());
  for (const auto& ubp : enumerate_ubp(d)) {
    SparsePolynomial::ExponentVector exps(table.size(), 0);
    for (const auto& block : ubp.blocks) ++exps[table.index_of(orbital_set(block, d))];
    std::int64_t coeff = ubp.sign;
    if (backward) {
      int k = ubp.block_count();
      coeff *= ((ubp.nu + k - 1) % 2 == 0 ? 1 : -1) * factorial(k - 1);
    }
    poly.add(exps, coeff);
  }
  return poly;
}

}  // namespace

SparsePolynomial master_forward(int d) { return master(d, false); }

SparsePolynomial master_backward(int d) { return master(d, true); }

SparsePolynomial replicate(const SparsePolynomial& master, const IndexTable& master_table,
                           const IndexTable& table, OrbitalMask target) {
  int r = master_table.d();
  if (level(target, table.d()) != r)
    throw InvalidInput("replication level mismatch: master has degree " + std::to_string(r) +
                       " but target " + mask_to_string(target) + " has level " +
                       std::to_string(level(target, table.d())));

  BlockLabel tb = block_label(target, table.d());
  std::vector<int> alpha_image = mask_members(tb.alpha);  // order-preserving [r] -> alpha
  std::vector<int> beta_image = mask_members(tb.beta);    // order-preserving [2r]\[r] -> beta

  auto map_mask = [&](OrbitalMask m) {
    OrbitalMask out = 0;
    for (int v : mask_members(m))
      out |= OrbitalMask{1} << ((v <= r ? alpha_image[v - 1] : beta_image[v - r - 1]) - 1);
    return out;
  };

  int eps = t_entry_sign(target, table.reference());  // linear sign of the target coordinate
  SparsePolynomial poly(table.size());
  for (const auto& [exps, coeff] : master.terms()) {
    SparsePolynomial::ExponentVector mapped(table.size(), 0);
    for (int v = 0; v < master_table.size(); ++v) {
      if (exps[v] == 0) continue;
      BlockLabel b = block_label(master_table.set_at(v), r);
      BlockLabel image{map_mask(b.alpha), map_mask(b.beta)};
      mapped[table.index_of(orbital_set(image, table.d()))] += exps[v];
    }
    poly.add(mapped, coeff * eps);
  }
  return poly;
}

}  // namespace ccvar
