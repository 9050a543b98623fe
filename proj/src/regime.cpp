#include "robudom/regime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace robudom {
namespace {

double abs_log1m(double y) { return -std::log1p(-y); }

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double u_n_xy(double n, double x, double y) {
  if (!(y > 0.0 && y < 1.0)) throw std::invalid_argument("u_n: y must lie in (0, 1)");
  if (!(n * x > 0.0)) throw std::invalid_argument("u_n: n x must be positive");
  return std::log(n * x) / abs_log1m(y);
}

double lambda_b(double n, double p) {
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return n * abs_log1m(p);
}

double t_n(double n, double p, double theta) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("t_n: p must lie in (0, 1)");
  const double lb = lambda_b(n, p);
  if (!(lb > std::exp(1.0))) {
    throw std::invalid_argument("t_n: log log lambda_b undefined (lambda_b <= e)");
  }
  return (std::log(lambda_a(n, p)) - theta * std::log(std::log(lb))) / abs_log1m(p);
}

TailBound lower_tail_bound(double n, double p, double theta) {
  if (!(theta > 2.0)) throw std::invalid_argument("lower_tail_bound: theta must exceed 2");
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("lower_tail_bound: p must lie in (0, 1)");
  }
  const double la = lambda_a(n, p);
  const double lb = lambda_b(n, p);
  if (!(lb > 1.0)) throw std::invalid_argument("lower_tail_bound: lambda_b must exceed 1");
  if (!(la > 1.0)) throw std::invalid_argument("lower_tail_bound: lambda_a must exceed 1");
  TailBound bound;
  bound.threshold = u_n(n, p) * (1.0 - theta * std::log(std::log(lb)) / std::log(la));
  const double exponent = (3.0 * n / 8.0) * std::pow(std::log(lb), theta) / la;
  bound.log_prob_bound = std::min(0.0, -exponent);
  bound.prob_bound = clamp01(std::exp(-exponent));
  return bound;
}

double a_lambda(double lambda, double lambda0) {
  if (!(lambda > 0.0)) throw std::invalid_argument("a_lambda: lambda must be positive");
  if (!(lambda0 > std::exp(1.0))) throw std::invalid_argument("a_lambda: lambda0 must exceed e");
  if (lambda <= lambda0) return lambda * std::exp(-2.0 * lambda);
  return (std::log(lambda) - 3.0 * std::log(std::log(lambda))) / lambda;
}

double b_lambda(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("b_lambda: lambda must be positive");
  if (lambda <= 1.0) return lambda / 4.0;
  return (std::log(lambda) + 1.0) / lambda;
}

double chernoff_bound(double mu, double eta) {
  if (!(eta > 0.0 && eta < 0.5)) throw std::invalid_argument("chernoff_bound: eta must lie in (0, 1/2)");
  if (!(mu >= 0.0)) throw std::invalid_argument("chernoff_bound: mu must be nonnegative");
  return std::min(1.0, 2.0 * std::exp(-(eta * eta / 4.0) * mu));
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

double un_slope_numerator(double n, double x) { return binary_entropy(x) - x * std::log(n); }

bool un_decreasing_certificate(double n, double x_low, double x_high, std::size_t grid_size) {
  if (!(x_low > 1.0 / (n + 1.0) && x_low < x_high && x_high < 1.0)) {
    throw std::invalid_argument("un_decreasing_certificate: need 1/(n+1) < x_low < x_high < 1");
  }
  if (grid_size == 0) throw std::invalid_argument("un_decreasing_certificate: empty grid");
  const double step = (x_high - x_low) / static_cast<double>(grid_size + 1);
  for (std::size_t i = 1; i <= grid_size; ++i) {
    const double x = x_low + step * static_cast<double>(i);
    if (!(un_slope_numerator(n, x) < 0.0)) return false;
  }
  return true;
}

std::string to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::kSparseZero: return "sparse_zero";
    case RegimeKind::kSparseLambda: return "sparse_lambda";
    case RegimeKind::kDenseP0Zero: return "dense_p0_zero";
    case RegimeKind::kDenseP0Mid: return "dense_p0_mid";
    case RegimeKind::kDenseP0One: return "dense_p0_one";
  }
  return "unknown";
}

RegimeParams classify_regime(double n, double p) {
  if (!(n >= 1.0)) throw std::invalid_argument("classify_regime: n must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("classify_regime: p must lie in [0, 1]");
  RegimeParams r;
  r.n = n;
  r.p = p;
  r.lambda_a = lambda_a(n, p);
  r.lambda_b = lambda_b(n, p);
  r.u_n = (p > 0.0 && p < 1.0) ? u_n(n, p) : std::numeric_limits<double>::quiet_NaN();
  const double np = r.lambda_a;
  if (np < 0.1) {
    r.regime = RegimeKind::kSparseZero;
  } else if (np <= std::log(n)) {
    r.regime = RegimeKind::kSparseLambda;
    r.parameter = np;
  } else if (p < 0.01) {
    r.regime = RegimeKind::kDenseP0Zero;
  } else if (p > 0.99) {
    r.regime = RegimeKind::kDenseP0One;
    r.parameter = 1.0;
  } else {
    r.regime = RegimeKind::kDenseP0Mid;
    r.parameter = p;
  }
  return r;
}

}  // namespace robudom
