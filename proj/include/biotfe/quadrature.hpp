// Quadrature on the reference simplex in barycentric coordinates.

#ifndef BIOTFE_QUADRATURE_HPP
#define BIOTFE_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace biotfe {

/// Points are barycentric coordinates; weights are normalized so that they sum
/// to one, i.e. the integral over a cell T is |T| * sum_q w_q f(x_q).
template <int Dim>
struct QuadratureRule {
  using Bary = Eigen::Matrix<double, Dim + 1, 1>;
  std::vector<Bary> points;
  std::vector<double> weights;
  /// Highest total degree integrated exactly.
  int degree = 0;

  std::size_t size() const { return points.size(); }
};

inline constexpr int kMaxQuadratureDegree = 6;

namespace detail {

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// Calls fn(beta) for every composition of `total` into `parts` non-negative integers.
template <std::size_t Parts>
void for_each_composition(int total, const std::function<void(const std::array<int, Parts>&)>& fn) {
  std::array<int, Parts> beta{};
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos + 1 == Parts) {
      beta[pos] = left;
      fn(beta);
      return;
    }
    for (int v = left; v >= 0; --v) {
      beta[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, total);
}

inline QuadratureRule<1> gauss_legendre(int npoints) {
  // Golub-Welsch on [-1, 1], mapped to barycentric (1-t, t).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(npoints, npoints);
  for (int k = 1; k < npoints; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  QuadratureRule<1> rule;
  rule.degree = 2 * npoints - 1;
  for (int k = 0; k < npoints; ++k) {
    const double t = 0.5 * (es.eigenvalues()[k] + 1.0);
    const double v0 = es.eigenvectors()(0, k);
    rule.points.push_back(QuadratureRule<1>::Bary(1.0 - t, t));
    rule.weights.push_back(v0 * v0);  // sums to 1 (= 2 / 2)
  }
  return rule;
}

/// Grundmann-Moeller rule of degree 2s+1 (has negative weights for s >= 1).
template <int Dim>
QuadratureRule<Dim> grundmann_moeller(int s) {
  QuadratureRule<Dim> rule;
  rule.degree = 2 * s + 1;
  const int n = Dim;
  for (int i = 0; i <= s; ++i) {
    const int d = 2 * s + 1;
    const double denom = d + n - 2 * i;
    const double w = ((i % 2) ? -1.0 : 1.0) * std::pow(2.0, -2 * s) * std::pow(denom, d) /
                     (factorial(i) * factorial(d + n - i)) * factorial(n);
    for_each_composition<Dim + 1>(s - i, [&](const std::array<int, Dim + 1>& beta) {
      typename QuadratureRule<Dim>::Bary p;
      for (int k = 0; k < Dim + 1; ++k) p[k] = (2.0 * beta[k] + 1.0) / denom;
      rule.points.push_back(p);
      rule.weights.push_back(w);
    });
  }
  return rule;
}

}  // namespace detail

/// Rule exact for total degree >= `degree`; the returned rule records its
/// actual exactness in `degree`.
template <int Dim>
QuadratureRule<Dim> quadrature(int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree)
    throw std::invalid_argument("unsupported quadrature degree " + std::to_string(degree) + " (max " +
                                std::to_string(kMaxQuadratureDegree) + ")");
  if constexpr (Dim == 1) {
    return detail::gauss_legendre(std::max(1, (degree + 2) / 2));
  } else {
    using Bary = typename QuadratureRule<Dim>::Bary;
    if (degree <= 1) {
      QuadratureRule<Dim> rule;
      rule.degree = 1;
      rule.points.push_back(Bary::Constant(1.0 / (Dim + 1)));
      rule.weights.push_back(1.0);
      return rule;
    }
    if (degree == 2) {
      // Symmetric (d+1)-point rule with positive weights.
      const double a = Dim == 2 ? 2.0 / 3.0 : 0.5854101966249685;
      const double b = (1.0 - a) / Dim;
      QuadratureRule<Dim> rule;
      rule.degree = 2;
      for (int k = 0; k < Dim + 1; ++k) {
        Bary p = Bary::Constant(b);
        p[k] = a;
        rule.points.push_back(p);
        rule.weights.push_back(1.0 / (Dim + 1));
      }
      return rule;
    }
    return detail::grundmann_moeller<Dim>(degree / 2);
  }
}

/// Closed form of the mean of lambda^beta over a simplex:
/// beta_1! ... beta_{d+1}! d! / (|beta| + d)!.
template <int Dim>
double barycentric_monomial_mean(const std::array<int, Dim + 1>& beta) {
  double num = detail::factorial(Dim);
  int total = 0;
  for (int b : beta) {
    num *= detail::factorial(b);
    total += b;
  }
  return num / detail::factorial(total + Dim);
}

template <int Dim>
double apply_rule(const QuadratureRule<Dim>& rule, const std::array<int, Dim + 1>& beta) {
  double s = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    double v = rule.weights[q];
    for (int k = 0; k < Dim + 1; ++k) v *= std::pow(rule.points[q][k], beta[k]);
    s += v;
  }
  return s;
}

/// True if the rule integrates every barycentric monomial of total degree
/// <= max_degree to the closed form within the relative tolerance.
template <int Dim>
bool verify_exactness(const QuadratureRule<Dim>& rule, int max_degree, double rel_tol = 1e-13) {
  bool ok = true;
  for (int deg = 0; deg <= max_degree && ok; ++deg) {
    detail::for_each_composition<Dim + 1>(deg, [&](const std::array<int, Dim + 1>& beta) {
      const double exact = barycentric_monomial_mean<Dim>(beta);
      if (std::abs(apply_rule<Dim>(rule, beta) - exact) > rel_tol * exact) ok = false;
    });
  }
  return ok;
}

}  // namespace biotfe

#endif  // BIOTFE_QUADRATURE_HPP
