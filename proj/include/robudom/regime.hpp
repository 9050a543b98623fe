#pragma once

// Closed-form quantities for domination in G(n, p). Natural logarithms
// throughout. Functions that return probabilities clamp them to [0, 1].

#include <cstddef>
#include <string>

namespace robudom {

// log(n x) / |log(1 - y)|. Requires n x > 0 and 0 < y < 1.
double u_n_xy(double n, double x, double y);

// u_n(p, p), the benchmark domination size.
inline double u_n(double n, double p) { return u_n_xy(n, p, p); }

inline double lambda_a(double n, double p) { return n * p; }
double lambda_b(double n, double p);

// (log lambda_a - theta log log lambda_b) / |log(1 - p)|. May be negative,
// in which case the lower-tail threshold is vacuous. Requires lambda_b > e.
double t_n(double n, double p, double theta);

// P(Gamma_n < threshold) <= prob_bound.
struct TailBound {
  double threshold = 0.0;
  double prob_bound = 1.0;
  double log_prob_bound = 0.0;  // prob_bound underflows for large n
};

// threshold = u_n (1 - theta log log lambda_b / log lambda_a),
// prob_bound = exp(-(3n/8) (log lambda_b)^theta / lambda_a). theta > 2.
TailBound lower_tail_bound(double n, double p, double theta);

inline constexpr double kDefaultLambda0 = 100.0;

// lambda e^{-2 lambda} for lambda <= lambda0, otherwise
// (log lambda - 3 log log lambda) / lambda.
double a_lambda(double lambda, double lambda0 = kDefaultLambda0);
// lambda / 4 for lambda <= 1, otherwise (log lambda + 1) / lambda.
double b_lambda(double lambda);

// min(1, 2 exp(-eta^2 mu / 4)); bounds P(|W - mu| >= eta mu) for a sum of
// independent Bernoulli variables with mean mu. Requires 0 < eta < 1/2.
double chernoff_bound(double mu, double eta);

// -x log x - (1 - x) log(1 - x), with value 0 at both endpoints.
double binary_entropy(double x);

// True iff H(x) - x log n < 0 at every interior point of a uniform
// grid_size-point grid on (x_low, x_high). Negativity of that numerator is
// equivalent to u_n(x, x) decreasing at x.
bool un_decreasing_certificate(double n, double x_low, double x_high, std::size_t grid_size);

// Numerator of d/dx u_n(x, x): H(x) - x log n.
double un_slope_numerator(double n, double x);

enum class RegimeKind {
  kSparseZero,   // np -> 0
  kSparseLambda, // np -> lambda in (0, inf)
  kDenseP0Zero,  // np -> inf, p -> 0
  kDenseP0Mid,   // p -> p0 in (0, 1)
  kDenseP0One,   // p -> 1
};

std::string to_string(RegimeKind kind);

struct RegimeParams {
  double n = 0.0;
  double p = 0.0;
  double lambda_a = 0.0;
  double lambda_b = 0.0;
  double u_n = 0.0;  // NaN outside 0 < p < 1 or when np <= 0
  RegimeKind regime = RegimeKind::kSparseZero;
  double parameter = 0.0;  // lambda for kSparseLambda, p0 for kDenseP0Mid
};

// Finite-n cutoffs: np < 0.1 is sparse_zero, 0.1 <= np <= log n is
// sparse_lambda, anything denser is dense with p0 bucketed by p < 0.01,
// p > 0.99, or in between.
RegimeParams classify_regime(double n, double p);

}  // namespace robudom
