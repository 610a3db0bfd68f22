#include "noether/symmetry/algebra.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "noether/symbolic/evaluate.hpp"

namespace noether::symmetry {

Generator lie_bracket(const Generator& x, const Generator& y) {
  const auto xc = x.components();
  const auto yc = y.components();
  std::array<Expr, 5> c;
  for (std::size_t a = 0; a < 5; ++a) c[a] = sym::simplify(x.apply(yc[a]) - y.apply(xc[a]));
  return make_generator("[" + x.name + "," + y.name + "]", c[0], {c[1], c[2], c[3], c[4]}, Expr(0L));
}

Expr bracket_gauge(const Generator& x, const Generator& y) {
  return sym::simplify(x.apply(y.gauge) - y.apply(x.gauge));
}

std::vector<std::string> CommutatorTable::relations() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      std::string rhs;
      for (std::size_t k = 0; k < names.size(); ++k) {
        const sym::Rational& c = constants[i][j][k];
        if (c == 0) continue;
        if (!rhs.empty()) rhs += c > 0 ? " + " : " - ";
        else if (c < 0) rhs += "-";
        const sym::Rational mag = abs(c);
        if (mag != 1) rhs += mag.get_str() + " ";
        rhs += names[k];
      }
      if (!rhs.empty()) out.push_back("[" + names[i] + ", " + names[j] + "] = " + rhs);
    }
  }
  return out;
}

namespace {

using Fields = std::vector<std::array<Expr, 5>>;

// Rows 5p..5p+4 hold the components at point p.
Eigen::MatrixXd field_matrix(const Fields& fields, const std::vector<sym::Point>& points) {
  Eigen::MatrixXd m(5 * points.size(), fields.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
      for (std::size_t a = 0; a < 5; ++a) {
        m(static_cast<Eigen::Index>(5 * p + a), static_cast<Eigen::Index>(k)) =
            sym::eval_numeric(fields[k][a], points[p]);
      }
    }
  }
  return m;
}

std::vector<sym::Point> regular_points(const Fields& fields, const sym::SampleDomain& domain, sym::Rng& rng,
                                       std::size_t count) {
  std::vector<sym::Point> out;
  for (int draw = 0; draw < 200 && out.size() < count; ++draw) {
    const sym::Point p = domain.draw(rng);
    try {
      for (const auto& f : fields)
        for (const auto& c : f) (void)sym::eval_numeric(c, p);
      out.push_back(p);
    } catch (const sym::EvalError&) {
    }
  }
  if (out.size() < count) throw std::runtime_error("commutator_table: could not find regular sample points");
  return out;
}

}  // namespace

CommutatorTable commutator_table(const std::vector<Generator>& basis, const sym::SampleDomain& domain,
                                 std::uint64_t seed) {
  const std::size_t n = basis.size();
  CommutatorTable table;
  Fields fields;
  for (const auto& g : basis) {
    table.names.push_back(g.name);
    auto c = g.components();
    for (auto& e : c) e = sym::simplify(e);
    fields.push_back(c);
  }
  sym::Rng rng(seed);
  const std::size_t count = std::max<std::size_t>(5, n / 5 + 3);
  const auto points = regular_points(fields, domain, rng, count);
  const Eigen::MatrixXd m = field_matrix(fields, points);

  // Independence at 5 generic points.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rank_qr(m.topRows(25));
  rank_qr.setThreshold(1e-9);
  if (n > 25 || rank_qr.rank() != static_cast<Eigen::Index>(n)) {
    throw DependentBasisError("commutator_table: basis is linearly dependent (rank " +
                              std::to_string(rank_qr.rank()) + " < " + std::to_string(n) + ")");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);

  table.constants.assign(n, std::vector<std::vector<sym::Rational>>(n, std::vector<sym::Rational>(n, 0)));
  table.symbolic.assign(n, std::vector<bool>(n, true));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Generator b = lie_bracket(basis[i], basis[j]);
      const auto bc = b.components();
      Eigen::VectorXd rhs(5 * points.size());
      for (std::size_t p = 0; p < points.size(); ++p)
        for (std::size_t a = 0; a < 5; ++a) rhs(static_cast<Eigen::Index>(5 * p + a)) = sym::eval_numeric(bc[a], points[p]);
      const Eigen::VectorXd c = qr.solve(rhs);
      const double misfit = (m * c - rhs).norm() / std::max(1.0, rhs.norm());
      const std::string pair = "[" + basis[i].name + ", " + basis[j].name + "]";
      if (misfit > 1e-6) {
        throw ClosureError("commutator_table: bracket " + pair + " leaves the span of the basis", basis[i].name,
                           basis[j].name);
      }
      std::vector<sym::Rational> q(n, 0);
      for (std::size_t k = 0; k < n; ++k) {
        if (std::fabs(c(static_cast<Eigen::Index>(k))) > 1e-9) q[k] = sym::rationalize(c(static_cast<Eigen::Index>(k)), 1000);
      }
      bool symbolic = true;
      for (std::size_t a = 0; a < 5; ++a) {
        Expr diff = bc[a];
        for (std::size_t k = 0; k < n; ++k) {
          if (q[k] != 0) diff = diff - Expr(q[k]) * fields[k][a];
        }
        const auto decision = sym::is_zero(diff, domain, seed);
        if (!decision.accepted_zero()) {
          throw ClosureError("commutator_table: bracket " + pair + " is not a constant combination of the basis (" +
                                 decision.describe() + ")",
                             basis[i].name, basis[j].name);
        }
        symbolic = symbolic && decision.status == sym::ZeroStatus::zero;
      }
      table.constants[i][j] = q;
      for (std::size_t k = 0; k < n; ++k) table.constants[j][i][k] = -q[k];
      table.symbolic[i][j] = table.symbolic[j][i] = symbolic;
    }
  }
  // Jacobi: c^l_ij c^m_lk + c^l_jk c^m_li + c^l_ki c^m_lj = 0
  const auto& C = table.constants;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        for (std::size_t mm = 0; mm < n; ++mm) {
          sym::Rational sum = 0;
          for (std::size_t l = 0; l < n; ++l) {
            sum += C[i][j][l] * C[l][k][mm] + C[j][k][l] * C[l][i][mm] + C[k][i][l] * C[l][j][mm];
          }
          table.jacobi_residual = std::max(table.jacobi_residual, std::fabs(sum.get_d()));
        }
      }
    }
  }
  return table;
}

}  // namespace noether::symmetry
