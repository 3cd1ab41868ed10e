#include "ccvar/ccsystem.hpp"

#include <cstring>
#include <fstream>

#include "ccvar/linalg.hpp"
#include "ccvar/random.hpp"
#include "nlohmann/json.hpp"

namespace ccvar {

namespace {

constexpr char kMagic[8] = {'C', 'C', 'H', 'A', 'M', '0', '0', '1'};

// exp(T(x))^T v, used to extract rows of the exponential.
Eigen::VectorXcd apply_exp_transposed(const ExcitationStructure& s, const Eigen::VectorXcd& x,
                                      const Eigen::VectorXcd& v) {
  Eigen::VectorXcd acc = v, power = v, next(s.dim());
  for (int k = 1; k <= s.table().d(); ++k) {
    next.setZero();
    s.apply_transposed(x, power, next);
    power = next / static_cast<double>(k);
    acc += power;
  }
  return acc;
}

}  // namespace

bool Hamiltonian::is_real(double tol) const {
  return matrix.imag().cwiseAbs().maxCoeff() <= tol;
}

void save_hamiltonian(const std::string& path, const Hamiltonian& h, int d, int n) {
  const int size = h.size();
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json j;
    j["d"] = d;
    j["n"] = n;
    j["size"] = size;
    j["provenance"] = h.provenance;
    bool real = h.is_real();
    j["real"] = real;
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < size; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int k = 0; k < size; ++k) {
        if (real) row.push_back(h.matrix(i, k).real());
        else row.push_back({h.matrix(i, k).real(), h.matrix(i, k).imag()});
      }
      rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path);
    out << j.dump(1) << "\n";
    return;
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  std::int32_t header[3] = {static_cast<std::int32_t>(d), static_cast<std::int32_t>(n),
                            static_cast<std::int32_t>(size)};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  std::uint8_t complex_flag = h.is_real() ? 0 : 1;
  out.write(reinterpret_cast<const char*>(&complex_flag), 1);
  for (int i = 0; i < size; ++i)
    for (int k = 0; k < size; ++k) {
      double re = h.matrix(i, k).real();
      out.write(reinterpret_cast<const char*>(&re), sizeof(double));
      if (complex_flag) {
        double im = h.matrix(i, k).imag();
        out.write(reinterpret_cast<const char*>(&im), sizeof(double));
      }
    }
}

Hamiltonian load_hamiltonian(const std::string& path, int d, int n) {
  const int expected = static_cast<int>(binomial(n, d));
  Hamiltonian h;
  h.provenance = "integral-file(" + path + ")";
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.value("d", d) != d || j.value("n", n) != n)
      throw InvalidInput("hamiltonian file " + path + " has mismatched (d,n)");
    int size = j.at("size").get<int>();
    if (size != expected) throw InvalidInput("hamiltonian size does not match C(n,d)");
    h.matrix.resize(size, size);
    const auto& rows = j.at("matrix");
    for (int i = 0; i < size; ++i)
      for (int k = 0; k < size; ++k) {
        const auto& cell = rows.at(i).at(k);
        if (cell.is_array()) h.matrix(i, k) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
        else h.matrix(i, k) = Complex(cell.get<double>(), 0);
      }
    if (j.contains("provenance")) h.provenance = j["provenance"].get<std::string>();
    return h;
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw InvalidInput(path + " is not a hamiltonian file");
  std::int32_t header[3];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  std::uint8_t complex_flag = 0;
  in.read(reinterpret_cast<char*>(&complex_flag), 1);
  if (header[0] != d || header[1] != n)
    throw InvalidInput("hamiltonian file " + path + " has (d,n)=(" + std::to_string(header[0]) + "," +
                       std::to_string(header[1]) + "), expected (" + std::to_string(d) + "," +
                       std::to_string(n) + ")");
  if (header[2] != expected) throw InvalidInput("hamiltonian size does not match C(n,d)");
  h.matrix.resize(expected, expected);
  for (int i = 0; i < expected; ++i)
    for (int k = 0; k < expected; ++k) {
      double re = 0, im = 0;
      in.read(reinterpret_cast<char*>(&re), sizeof(double));
      if (complex_flag) in.read(reinterpret_cast<char*>(&im), sizeof(double));
      h.matrix(i, k) = Complex(re, im);
    }
  if (!in) throw InvalidInput("truncated hamiltonian file " + path);
  return h;
}

Eigen::VectorXcd embed(const IndexTable& table, const std::vector<int>& sigma_tilde_indices,
                       const Eigen::VectorXcd& z) {
  if (z.size() != static_cast<Eigen::Index>(sigma_tilde_indices.size()))
    throw InvalidInput("embed: expected " + std::to_string(sigma_tilde_indices.size()) +
                       " amplitudes, got " + std::to_string(z.size()));
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(table.size());
  x[0] = 1;
  for (std::size_t i = 0; i < sigma_tilde_indices.size(); ++i) x[sigma_tilde_indices[i]] = z[i];
  return x;
}

CcSystem::CcSystem(std::shared_ptr<const ExcitationStructure> structure, TruncationSet trunc,
                   Eigen::MatrixXcd hamiltonian, Formulation formulation)
    : structure_(std::move(structure)),
      trunc_(std::move(trunc)),
      h_(std::move(hamiltonian)),
      form_(formulation) {
  const IndexTable& table = structure_->table();
  if (h_.rows() != table.size() || h_.cols() != table.size())
    throw InvalidInput("hamiltonian size does not match C(n,d)");
  vars_ = sigma_tilde(table, trunc_);
  rows_ = vars_;
  if (form_ == Formulation::RankNew) rows_.push_back(0);  // reference row is the extra equation
}

int CcSystem::dim() const {
  return amplitude_count() + (form_ == Formulation::RankNew ? 1 : 0);
}

Eigen::VectorXcd CcSystem::embed_amplitudes(const Eigen::VectorXcd& z) const {
  return embed(structure_->table(), vars_, z);
}

Eigen::VectorXcd CcSystem::state(const Eigen::VectorXcd& z) const {
  return forward(*structure_, embed_amplitudes(z));
}

Complex CcSystem::energy(const Eigen::VectorXcd& z) const {
  return (h_.row(0) * state(z)).value();
}

void CcSystem::eval(const Eigen::VectorXcd& y, Eigen::VectorXcd& f) const {
  const int m = amplitude_count();
  f.resize(dim());
  if (form_ == Formulation::RankNew) {
    Complex lambda = y[m];
    Eigen::VectorXcd psi = state(y.head(m));
    Eigen::VectorXcd w = h_ * psi;
    for (int i = 0; i < dim(); ++i) f[i] = w[rows_[i]] - lambda * psi[rows_[i]];
  } else {
    Eigen::VectorXcd x = embed_amplitudes(y);
    Eigen::VectorXcd w = h_ * forward(*structure_, x);
    Eigen::VectorXcd c = apply_exp(*structure_, -x, w);
    for (int i = 0; i < dim(); ++i) f[i] = c[rows_[i]];
  }
}

void CcSystem::jacobian(const Eigen::VectorXcd& y, Eigen::MatrixXcd& jac) const {
  const int m = amplitude_count();
  const int nrows = dim();
  jac.resize(nrows, nrows);
  if (form_ == Formulation::RankNew) {
    Complex lambda = y[m];
    Eigen::VectorXcd x = embed_amplitudes(y.head(m));
    Eigen::VectorXcd psi = forward(*structure_, x);
    Eigen::MatrixXcd dpsi = forward_jacobian(*structure_, x, vars_);
    Eigen::MatrixXcd block = h_ * dpsi - lambda * dpsi;
    for (int i = 0; i < nrows; ++i) {
      jac.row(i).head(m) = block.row(rows_[i]);
      jac(i, m) = -psi[rows_[i]];
    }
  } else {
    Eigen::VectorXcd x = embed_amplitudes(y);
    Eigen::VectorXcd psi = forward(*structure_, x);
    Eigen::VectorXcd w = h_ * psi;
    Eigen::MatrixXcd dpsi = forward_jacobian(*structure_, x, vars_);
    Eigen::MatrixXcd hdpsi = h_ * dpsi;
    const int d = structure_->table().d();
    const int size = structure_->table().size();
    Eigen::VectorXcd mx = -x;
    Eigen::VectorXcd u(size), du(size), tu(size), tdu(size), xcu(size);
    for (int c = 0; c < m; ++c) {
      // d/dz_c [ exp(T(-x)) w ]: the series sees both the -X_c perturbation
      // of T(-x) and the derivative of w = H psi.
      Eigen::VectorXcd col = apply_exp(*structure_, mx, hdpsi.col(c).eval());
      u = w;
      du.setZero();
      for (int k = 1; k <= d; ++k) {
        tdu.setZero();
        structure_->apply(mx, du, tdu);
        xcu.setZero();
        structure_->apply_single(vars_[c], u, xcu);
        du = (tdu - xcu) / static_cast<double>(k);
        tu.setZero();
        structure_->apply(mx, u, tu);
        u = tu / static_cast<double>(k);
        col += du;
      }
      for (int i = 0; i < nrows; ++i) jac(i, c) = col[rows_[i]];
    }
  }
}

bool formulations_equivalent(const TruncationSet& trunc) {
  int m = trunc.sigma.front();
  for (std::size_t i = 0; i < trunc.sigma.size(); ++i)
    if (trunc.sigma[i] != m * static_cast<int>(i + 1)) return false;
  return true;
}

Eigen::VectorXcd StartSystem::unknowns(Formulation form) const {
  if (form == Formulation::SimilarityTraditional) return z;
  Eigen::VectorXcd y(z.size() + 1);
  y.head(z.size()) = z;
  y[z.size()] = lambda;
  return y;
}

StartSystem start_system(std::shared_ptr<const ExcitationStructure> structure,
                         const TruncationSet& trunc, Formulation form, std::uint64_t seed) {
  const IndexTable& table = structure->table();
  const int size = table.size();
  std::vector<int> vars = sigma_tilde(table, trunc);
  const int m = static_cast<int>(vars.size());

  for (int attempt = 0; attempt < 5; ++attempt) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(attempt));
    StartSystem start;
    start.z = complex_gaussian_vector(m, rng);
    start.lambda = complex_gaussian(rng);
    Eigen::VectorXcd x = embed(table, vars, start.z);
    Eigen::VectorXcd psi = forward(*structure, x);

    // Rows of the linear map H -> residual at the sampled point.
    std::vector<int> rows = vars;
    if (form == Formulation::RankNew) rows.push_back(0);
    const int nrows = static_cast<int>(rows.size());
    Eigen::MatrixXcd g(nrows, size);
    if (form == Formulation::RankNew) {
      g.setZero();
      for (int i = 0; i < nrows; ++i) g(i, rows[i]) = 1;
    } else {
      Eigen::VectorXcd mx = -x;
      Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(size);
      for (int i = 0; i < nrows; ++i) {
        unit[rows[i]] = 1;
        g.row(i) = apply_exp_transposed(*structure, mx, unit).transpose();
        unit[rows[i]] = 0;
      }
    }

    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(nrows);
    if (form == Formulation::RankNew)
      for (int i = 0; i < nrows; ++i) w[i] = start.lambda * psi[rows[i]];

    Eigen::MatrixXcd h_rand = random_symmetric_complex(size, rng);
    Eigen::VectorXcd rhs = w - g * (h_rand * psi);

    // Columns of the map are indexed by symmetric basis elements (p <= q).
    const int sym_dim = size * (size + 1) / 2;
    Eigen::MatrixXcd map(nrows, sym_dim);
    for (int p = 0, col = 0; p < size; ++p)
      for (int q = p; q < size; ++q, ++col) {
        if (p == q) map.col(col) = g.col(p) * psi[p];
        else map.col(col) = g.col(p) * psi[q] + g.col(q) * psi[p];
      }

    Eigen::VectorXcd delta;
    try {
      delta = least_norm_solve(map, rhs);
    } catch (const NumericalFailure&) {
      continue;  // degenerate sample; retry with a fresh seed offset
    }

    Eigen::MatrixXcd h = h_rand;
    for (int p = 0, col = 0; p < size; ++p)
      for (int q = p; q < size; ++q, ++col) {
        h(p, q) += delta[col];
        if (p != q) h(q, p) += delta[col];
      }

    start.hamiltonian = Hamiltonian{std::move(h), "generic-complex"};
    CcSystem check(structure, trunc, start.hamiltonian.matrix, form);
    Eigen::VectorXcd f;
    check.eval(start.unknowns(form), f);
    double scale = 1 + start.hamiltonian.matrix.cwiseAbs().maxCoeff();
    if (f.cwiseAbs().maxCoeff() < 1e-10 * scale) return start;
  }
  throw NumericalFailure("start_system: could not construct a start pair after 5 attempts");
}

CcFamily::CcFamily(std::shared_ptr<const ExcitationStructure> structure, TruncationSet trunc,
                   Formulation form, Eigen::MatrixXcd base_hamiltonian)
    : structure_(std::move(structure)), trunc_(std::move(trunc)), form_(form) {
  base_ = make_system(std::move(base_hamiltonian));
}

std::shared_ptr<const CcSystem> CcFamily::make_system(Eigen::MatrixXcd hamiltonian) const {
  return std::make_shared<CcSystem>(structure_, trunc_, std::move(hamiltonian), form_);
}

std::shared_ptr<const SquareSystem> CcFamily::random_system(std::mt19937_64& rng) const {
  return make_system(random_symmetric_complex(structure_->table().size(), rng));
}

std::unique_ptr<HomotopySegment> CcFamily::segment(std::shared_ptr<const SquareSystem> from,
                                                   std::shared_ptr<const SquareSystem> to) const {
  return std::make_unique<AffineBlendSegment>(std::move(from), std::move(to));
}

}  // namespace ccvar
