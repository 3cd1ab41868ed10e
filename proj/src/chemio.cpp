#include "ccvar/chemio.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ccvar/linalg.hpp"
#include "ccvar/random.hpp"

namespace ccvar {

IntegralTable::IntegralTable(int n, int d) : n_(n), d_(d) {
  if (n < 1 || n > kMaxOrbitals || d < 1 || d > n) throw InvalidInput("integral table: invalid (n, d)");
  h_.assign(static_cast<std::size_t>(n) * n, 0.0);
  h_seen_.assign(h_.size(), false);
  v_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  v_seen_.assign(v_.size(), false);
}

int IntegralTable::slot(int p, int q, int r, int s) const {
  return ((p - 1) * n_ + (q - 1)) * n_ * n_ + (r - 1) * n_ + (s - 1);
}

double IntegralTable::h(int p, int q) const { return h_[(p - 1) * n_ + (q - 1)]; }

double IntegralTable::v(int p, int q, int r, int s) const { return v_[slot(p, q, r, s)]; }

void IntegralTable::assign(std::vector<double>& store, std::vector<bool>& seen, int idx,
                           double value, const std::string& what) {
  if (seen[idx] && std::abs(store[idx] - value) > 1e-12 * std::max({1.0, std::abs(value), std::abs(store[idx])}))
    throw InvalidInput("inconsistent integral value for " + what);
  store[idx] = value;
  seen[idx] = true;
}

void IntegralTable::set_h(int p, int q, double value) {
  if (p < 1 || p > n_ || q < 1 || q > n_) throw InvalidInput("one-electron index out of range");
  assign(h_, h_seen_, (p - 1) * n_ + (q - 1), value, "h(" + std::to_string(p) + "," + std::to_string(q) + ")");
  assign(h_, h_seen_, (q - 1) * n_ + (p - 1), value, "h(" + std::to_string(q) + "," + std::to_string(p) + ")");
}

void IntegralTable::set_v(int p, int q, int r, int s, double value) {
  if (p < 1 || p > n_ || q < 1 || q > n_ || r < 1 || r > n_ || s < 1 || s > n_)
    throw InvalidInput("two-electron index out of range");
  const std::string what = "v(" + std::to_string(p) + "," + std::to_string(q) + "," +
                           std::to_string(r) + "," + std::to_string(s) + ")";
  int images[8][4] = {{p, q, r, s}, {q, p, r, s}, {p, q, s, r}, {q, p, s, r},
                      {r, s, p, q}, {s, r, p, q}, {r, s, q, p}, {s, r, q, p}};
  for (auto& im : images) assign(v_, v_seen_, slot(im[0], im[1], im[2], im[3]), value, what);
}

IntegralTable parse_integrals(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw InvalidInput("integral file line " + std::to_string(line_no) + ": " + what);
  };

  // header
  int n = 0, d = 0;
  double core = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag != "CCVAR-INTEGRALS") fail("expected header CCVAR-INTEGRALS n=<n> d=<d> core=<float>");
    std::string field;
    while (ls >> field) {
      auto eq = field.find('=');
      if (eq == std::string::npos) fail("malformed header field '" + field + "'");
      std::string key = field.substr(0, eq), value = field.substr(eq + 1);
      try {
        if (key == "n") n = std::stoi(value);
        else if (key == "d") d = std::stoi(value);
        else if (key == "core") core = std::stod(value);
        else fail("unknown header field '" + key + "'");
      } catch (const std::logic_error&) {
        fail("cannot parse header value '" + value + "'");
      }
    }
    have_header = true;
    break;
  }
  if (!have_header) fail("missing header line");
  if (n < 1 || d < 1 || d > n) fail("header requires 1 <= d <= n");

  IntegralTable table(n, d);
  table.set_core(core);
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double value;
    int p, q, r, s;
    if (!(ls >> value)) {
      std::string leftover;
      if (ls.clear(), ls >> leftover) fail("cannot parse value");
      continue;  // blank line
    }
    if (!(ls >> p >> q >> r >> s)) fail("expected `value p q r s`");
    std::string extra;
    if (ls >> extra) fail("trailing tokens after `value p q r s`");
    if (p == 0 && q == 0 && r == 0 && s == 0) {
      table.set_core(value);
    } else if (r == 0 && s == 0) {
      if (p < 1 || p > n || q < 1 || q > n) fail("one-electron index out of range");
      table.set_h(p, q, value);
    } else {
      if (std::min({p, q, r, s}) < 1 || std::max({p, q, r, s}) > n) fail("two-electron index out of range");
      table.set_v(p, q, r, s, value);
    }
  }
  return table;
}

IntegralTable parse_integrals_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path);
  try {
    return parse_integrals(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void write_integrals(std::ostream& out, const IntegralTable& t) {
  out.precision(17);
  out << "CCVAR-INTEGRALS n=" << t.n() << " d=" << t.d() << " core=" << t.core() << "\n";
  for (int p = 1; p <= t.n(); ++p)
    for (int q = p; q <= t.n(); ++q)
      if (t.h(p, q) != 0) out << t.h(p, q) << " " << p << " " << q << " 0 0\n";
  // one representative per 8-fold orbit
  for (int p = 1; p <= t.n(); ++p)
    for (int q = p; q <= t.n(); ++q)
      for (int r = p; r <= t.n(); ++r)
        for (int s = (r == p ? q : r); s <= t.n(); ++s)
          if (t.v(p, q, r, s) != 0) out << t.v(p, q, r, s) << " " << p << " " << q << " " << r << " " << s << "\n";
}

void write_integrals_file(const std::string& path, const IntegralTable& table) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  write_integrals(out, table);
}

IntegralTable spin_expand(int d, const Eigen::MatrixXd& h_spatial,
                          const std::vector<double>& v_spatial, double core) {
  const int k = static_cast<int>(h_spatial.rows());
  if (h_spatial.cols() != k) throw InvalidInput("spin_expand: spatial h must be square");
  if (v_spatial.size() != static_cast<std::size_t>(k) * k * k * k)
    throw InvalidInput("spin_expand: spatial v must have k^4 entries");
  auto vs = [&](int p, int q, int r, int s) {
    return v_spatial[((p - 1) * k + (q - 1)) * k * k + (r - 1) * k + (s - 1)];
  };
  IntegralTable table(2 * k, d);
  table.set_core(core);
  auto spatial = [](int p) { return (p + 1) / 2; };
  auto spin = [](int p) { return p % 2; };
  for (int p = 1; p <= 2 * k; ++p)
    for (int q = p; q <= 2 * k; ++q)
      if (spin(p) == spin(q) && h_spatial(spatial(p) - 1, spatial(q) - 1) != 0)
        table.set_h(p, q, h_spatial(spatial(p) - 1, spatial(q) - 1));
  for (int p = 1; p <= 2 * k; ++p)
    for (int q = 1; q <= 2 * k; ++q)
      for (int r = 1; r <= 2 * k; ++r)
        for (int s = 1; s <= 2 * k; ++s) {
          if (spin(p) != spin(q) || spin(r) != spin(s)) continue;
          double value = vs(spatial(p), spatial(q), spatial(r), spatial(s));
          if (value != 0) table.set_v(p, q, r, s, value);
        }
  return table;
}

namespace {

// Parity sign of aligning two determinants that differ in the listed
// positions (0-based positions within the sorted index sets).
int excitation_sign(int positions_sum) { return positions_sum % 2 == 0 ? 1 : -1; }

}  // namespace

Hamiltonian assemble_hamiltonian(const IndexTable& table, const IntegralTable& integrals) {
  if (integrals.n() != table.n())
    throw InvalidInput("integral table is over n=" + std::to_string(integrals.n()) +
                       " spin orbitals, index table over n=" + std::to_string(table.n()));
  const int size = table.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);

  for (int a = 0; a < size; ++a) {
    std::vector<int> members_a = mask_members(table.set_at(a));
    // diagonal
    double diag = integrals.core();
    for (int p : members_a) diag += integrals.h(p, p);
    for (std::size_t i = 0; i < members_a.size(); ++i)
      for (std::size_t j = i + 1; j < members_a.size(); ++j) {
        int p = members_a[i], q = members_a[j];
        diag += integrals.v(p, p, q, q) - integrals.v(p, q, q, p);
      }
    h(a, a) = diag;

    for (int b = a + 1; b < size; ++b) {
      OrbitalMask ma = table.set_at(a), mb = table.set_at(b);
      int ndiff = popcount(ma & ~mb);
      if (ndiff > 2) continue;
      std::vector<int> only_a = mask_members(ma & ~mb);
      std::vector<int> only_b = mask_members(mb & ~ma);
      std::vector<int> members_b = mask_members(mb);
      std::vector<int> common = mask_members(ma & mb);
      auto pos = [](const std::vector<int>& sorted, int value) {
        return static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), value) - sorted.begin());
      };
      double value = 0;
      if (ndiff == 1) {
        int p = only_a[0], q = only_b[0];
        double sum = integrals.h(p, q);
        for (int r : common) sum += integrals.v(p, q, r, r) - integrals.v(p, r, r, q);
        value = excitation_sign(pos(members_a, p) + pos(members_b, q)) * sum;
      } else {
        int p1 = only_a[0], p2 = only_a[1], q1 = only_b[0], q2 = only_b[1];
        int sign = excitation_sign(pos(members_a, p1) + pos(members_a, p2) + pos(members_b, q1) +
                                   pos(members_b, q2));
        value = sign * (integrals.v(p1, q1, p2, q2) - integrals.v(p1, q2, p2, q1));
      }
      h(a, b) = value;
      h(b, a) = value;
    }
  }

  Hamiltonian out;
  out.matrix = h;
  out.provenance = "integral-table";
  return out;
}

Eigen::MatrixXd assemble_hamiltonian_reference(const IndexTable& table,
                                               const IntegralTable& integrals) {
  const int d = table.d();
  if (d > 4) throw ResourceLimit("permutation-formula assembly is exponential in d; capped at d <= 4");
  const int size = table.size();

  // all permutations of 0..d-1 with signs
  std::vector<std::pair<std::vector<int>, int>> perms;
  std::vector<int> base(d);
  for (int i = 0; i < d; ++i) base[i] = i;
  std::vector<int> p = base;
  do {
    int inversions = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) inversions += p[i] > p[j];
    perms.emplace_back(p, inversions % 2 == 0 ? 1 : -1);
  } while (std::next_permutation(p.begin(), p.end()));

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
  for (int a = 0; a < size; ++a) {
    std::vector<int> mi = mask_members(table.set_at(a));
    for (int b = 0; b < size; ++b) {
      std::vector<int> mj = mask_members(table.set_at(b));
      double total = 0;
      for (const auto& [rho, sr] : perms)
        for (const auto& [pi, sp] : perms) {
          double term = 0;
          for (int l = 0; l < d; ++l) {
            bool aligned = true;
            for (int k = 0; k < d && aligned; ++k)
              if (k != l) aligned = mi[rho[k]] == mj[pi[k]];
            if (aligned) term += integrals.h(mi[rho[l]], mj[pi[l]]);
            for (int j = l + 1; j < d; ++j) {
              bool ok = true;
              for (int k = 0; k < d && ok; ++k)
                if (k != l && k != j) ok = mi[rho[k]] == mj[pi[k]];
              if (ok) term += integrals.v(mi[rho[l]], mj[pi[l]], mi[rho[j]], mj[pi[j]]);
            }
          }
          total += sr * sp * term;
        }
      h(a, b) = total;
    }
  }
  return h;
}

Hamiltonian random_hamiltonian(const IndexTable& table, HamiltonianKind kind, int rank,
                               std::uint64_t seed) {
  const int size = table.size();
  std::mt19937_64 rng(seed);
  Hamiltonian out;
  switch (kind) {
    case HamiltonianKind::GenericComplexSymmetric:
      out.matrix = random_symmetric_complex(size, rng);
      out.provenance = "generic-complex";
      break;
    case HamiltonianKind::RealSymmetric:
      out.matrix = random_symmetric_real(size, rng);
      out.provenance = "random-real";
      break;
    case HamiltonianKind::LowRank: {
      if (rank < 1 || rank > size) throw InvalidInput("low-rank hamiltonian needs 1 <= rank <= C(n,d)");
      std::normal_distribution<double> normal(0.0, 1.0);
      Eigen::MatrixXd b(size, rank);
      for (int j = 0; j < rank; ++j)
        for (int i = 0; i < size; ++i) b(i, j) = normal(rng);
      Eigen::MatrixXd g(size, size);
      for (int j = 0; j < size; ++j)
        for (int i = 0; i < size; ++i) g(i, j) = normal(rng);
      Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
      Eigen::MatrixXd qb = q * b;
      out.matrix = qb * qb.transpose();
      out.provenance = "low-rank(" + std::to_string(rank) + ")";
      break;
    }
  }
  return out;
}

SpectrumReport spectrum_report(const Hamiltonian& hamiltonian, const SolutionSet& solutions,
                               const std::vector<Complex>& lambdas) {
  if (!hamiltonian.is_real(1e-14)) throw InvalidInput("spectrum_report requires a real Hamiltonian");
  if (lambdas.size() != solutions.solutions.size())
    throw InvalidInput("spectrum_report: one lambda per solution required");
  SpectrumReport report;
  report.fci = symmetric_eigenvalues(hamiltonian.matrix.real());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const Solution& sol = solutions.solutions[i];
    SpectrumEntry entry;
    entry.lambda = lambdas[i];
    bool singular = sol.cls == SolutionClass::Singular;
    entry.kind = std::string(singular ? "singular" : "nonsingular") + (sol.is_real ? "-real" : "-complex");
    if (singular) (sol.is_real ? report.singular_real : report.singular_complex)++;
    else (sol.is_real ? report.nonsingular_real : report.nonsingular_complex)++;
    double best = std::numeric_limits<double>::infinity();
    double nearest = 0;
    for (int e = 0; e < report.fci.size(); ++e) {
      double dist = std::abs(entry.lambda - Complex(report.fci[e], 0));
      if (dist < best) {
        best = dist;
        nearest = report.fci[e];
      }
    }
    entry.nearest_fci = nearest;
    entry.distance = best;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

std::string spectrum_csv(const SpectrumReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "kind,lambda_re,lambda_im,nearest_fci,distance\n";
  for (const auto& e : report.entries)
    out << e.kind << "," << e.lambda.real() << "," << e.lambda.imag() << "," << e.nearest_fci << ","
        << e.distance << "\n";
  return out.str();
}

}  // namespace ccvar
