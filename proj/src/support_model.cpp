#include "pnucleus/support_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pnucleus {

const char* to_string(ApproxMethod m) {
  switch (m) {
    case ApproxMethod::DP: return "dp";
    case ApproxMethod::Poisson: return "poisson";
    case ApproxMethod::TranslatedPoisson: return "translated-poisson";
    case ApproxMethod::CLT: return "clt";
    case ApproxMethod::Binomial: return "binomial";
  }
  return "?";
}

void Hyperparams::validate() const {
  if (!(clt_min_extensions > poisson_max_extensions &&
        poisson_max_extensions > 0))
    throw DomainError("hyperparameters require A > B > 0");
  if (!(poisson_prob_cap > 0.0 && poisson_prob_cap < 1.0))
    throw DomainError("hyperparameter C must lie in (0,1)");
  if (!(binomial_variance_floor > 0.0 && binomial_variance_floor <= 1.0))
    throw DomainError("hyperparameter D must lie in (0,1]");
}

SupportDistribution::SupportDistribution(double tri_prob,
                                         std::vector<double> zeta_pmf)
    : tri_prob_(tri_prob), probs_(std::move(zeta_pmf)) {
  for (double& p : probs_) p *= tri_prob_;
  tails_.resize(probs_.size());
  double acc = 0.0;
  for (std::size_t k = probs_.size(); k-- > 0;) {
    acc += probs_[k];
    tails_[k] = acc;
  }
}

double SupportDistribution::tail(long k) const {
  if (k <= 0) return tails_.empty() ? 0.0 : tails_[0];
  if (static_cast<std::size_t>(k) >= tails_.size()) return 0.0;
  return tails_[static_cast<std::size_t>(k)];
}

std::vector<double> dp_zeta_pmf(std::span<const double> ext_probs) {
  std::vector<double> pmf(ext_probs.size() + 1, 0.0);
  pmf[0] = 1.0;
  std::size_t filled = 0;
  for (double p : ext_probs) {
    ++filled;
    for (std::size_t k = filled; k >= 1; --k)
      pmf[k] = p * pmf[k - 1] + (1.0 - p) * pmf[k];
    pmf[0] *= (1.0 - p);
  }
  return pmf;
}

SupportDistribution dp_distribution(double tri_prob,
                                    std::span<const double> ext_probs) {
  return SupportDistribution(tri_prob, dp_zeta_pmf(ext_probs));
}

SupportDistribution dp_distribution(const ExtensionProfile& p) {
  return dp_distribution(p.tri_prob, p.ext_probs);
}

std::optional<int> dp_max_k(double tri_prob, std::span<const double> ext_probs,
                            double theta, int k_cap) {
  if (!meets_threshold(tri_prob, theta)) return std::nullopt;
  const std::size_t c = ext_probs.size();
  if (k_cap < 0 || static_cast<std::size_t>(k_cap) >= c) {
    // Full pmf, answer from suffix accumulation (largest k first).
    std::vector<double> pmf = dp_zeta_pmf(ext_probs);
    double tail = 0.0;
    for (std::size_t k = pmf.size(); k-- > 0;) {
      tail += pmf[k];
      if (meets_threshold(tri_prob * tail, theta)) return static_cast<int>(k);
    }
    return 0;  // unreachable: k = 0 has tail 1
  }
  // Truncated rows: only Pr(zeta = k) for k <= k_cap is needed, since
  // Pr(zeta >= k) = 1 - sum_{j<k} Pr(zeta = j).
  const std::size_t cap = static_cast<std::size_t>(k_cap);
  std::vector<double> pmf(cap + 1, 0.0);
  pmf[0] = 1.0;
  std::size_t filled = 0;
  for (double p : ext_probs) {
    ++filled;
    for (std::size_t k = std::min(filled, cap); k >= 1; --k)
      pmf[k] = p * pmf[k - 1] + (1.0 - p) * pmf[k];
    pmf[0] *= (1.0 - p);
  }
  int best = 0;
  double below = 0.0;  // Pr(zeta < k)
  for (std::size_t k = 1; k <= cap; ++k) {
    below += pmf[k - 1];
    if (meets_threshold(tri_prob * (1.0 - below), theta))
      best = static_cast<int>(k);
    else
      break;
  }
  return best;
}

namespace {

double sum_of(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0);
}

// Largest k in [0,c] accepted by a monotone non-increasing tail; assumes the
// caller already verified tri_prob against theta (k = 0 always accepts).
template <typename TailFn>
int scan_up(double tri_prob, std::size_t c, double theta, TailFn&& tail_at) {
  int best = 0;
  for (std::size_t k = 1; k <= c; ++k) {
    if (meets_threshold(tri_prob * tail_at(k), theta))
      best = static_cast<int>(k);
    else
      break;
  }
  return best;
}

// Upper Poisson tail Pr(P_lambda >= k - shift) evaluated incrementally in
// log space so large rates cannot underflow the running mass.
class ShiftedPoissonTail {
 public:
  ShiftedPoissonTail(double lambda, long shift)
      : lambda_(lambda), shift_(shift) {}

  double operator()(long k) {
    long m = k - shift_;  // tail index into the Poisson
    if (m <= 0) return 1.0;
    if (lambda_ <= 0.0) return 0.0;
    while (next_ < m) {
      cdf_ += std::exp(log_pmf_);
      log_pmf_ += log_lambda_ - std::log(static_cast<double>(next_ + 1));
      ++next_;
    }
    return 1.0 - cdf_;
  }

 private:
  double lambda_;
  long shift_;
  double log_lambda_ = lambda_ > 0 ? std::log(lambda_) : 0.0;
  double log_pmf_ = -lambda_;  // log Pr(P = 0)
  double cdf_ = 0.0;           // Pr(P < next_)
  long next_ = 0;
};

}  // namespace

std::optional<int> poisson_max_k(double tri_prob,
                                 std::span<const double> ext_probs,
                                 double theta) {
  if (!meets_threshold(tri_prob, theta)) return std::nullopt;
  ShiftedPoissonTail tail(sum_of(ext_probs), 0);
  return scan_up(tri_prob, ext_probs.size(), theta,
                 [&](std::size_t k) { return tail(static_cast<long>(k)); });
}

std::optional<int> translated_poisson_max_k(double tri_prob,
                                            std::span<const double> ext_probs,
                                            double theta) {
  if (!meets_threshold(tri_prob, theta)) return std::nullopt;
  double mu = sum_of(ext_probs);
  double sum_sq = 0.0;
  for (double p : ext_probs) sum_sq += p * p;
  // lambda2 = mu - sigma^2 = sum of squared extension probabilities.
  long shift = static_cast<long>(std::floor(sum_sq));
  ShiftedPoissonTail tail(mu - static_cast<double>(shift), shift);
  return scan_up(tri_prob, ext_probs.size(), theta,
                 [&](std::size_t k) { return tail(static_cast<long>(k)); });
}

std::optional<int> clt_max_k(double tri_prob,
                             std::span<const double> ext_probs, double theta) {
  if (!meets_threshold(tri_prob, theta)) return std::nullopt;
  double mu = sum_of(ext_probs);
  double var = 0.0;
  for (double p : ext_probs) var += p * (1.0 - p);
  if (var <= 0.0) {
    // Deterministic extensions: point mass at mu.
    long at = std::lround(mu);
    return scan_up(tri_prob, ext_probs.size(), theta, [&](std::size_t k) {
      return static_cast<long>(k) <= at ? 1.0 : 0.0;
    });
  }
  double sigma = std::sqrt(var);
  return scan_up(tri_prob, ext_probs.size(), theta, [&](std::size_t k) {
    double z = (static_cast<double>(k) - mu) / sigma;
    return 0.5 * std::erfc(z / std::sqrt(2.0));
  });
}

std::optional<int> binomial_max_k(double tri_prob,
                                  std::span<const double> ext_probs,
                                  double theta) {
  if (!meets_threshold(tri_prob, theta)) return std::nullopt;
  const std::size_t n = ext_probs.size();
  if (n == 0) return 0;
  double p = sum_of(ext_probs) / static_cast<double>(n);
  if (p >= 1.0) {
    return scan_up(tri_prob, n, theta, [](std::size_t) { return 1.0; });
  }
  // Pr(zeta = k) ratio recursion from (1-p)^n, in log space.
  double log_p = std::log(p), log_q = std::log1p(-p);
  double log_pmf = static_cast<double>(n) * log_q;
  double cdf = 0.0;  // Pr(zeta < k)
  std::size_t next = 0;
  return scan_up(tri_prob, n, theta, [&](std::size_t k) {
    while (next < k) {
      cdf += std::exp(log_pmf);
      log_pmf += log_p - log_q +
                 std::log(static_cast<double>(n - next)) -
                 std::log(static_cast<double>(next + 1));
      ++next;
    }
    return 1.0 - cdf;
  });
}

ApproxMethod select_method(std::span<const double> ext_probs,
                           const Hyperparams& hp) {
  hp.validate();
  const std::size_t c = ext_probs.size();
  if (c >= static_cast<std::size_t>(hp.clt_min_extensions))
    return ApproxMethod::CLT;
  double max_p = 0.0, mu = 0.0, sum_sq = 0.0;
  for (double p : ext_probs) {
    max_p = std::max(max_p, p);
    mu += p;
    sum_sq += p * p;
  }
  if (c < static_cast<std::size_t>(hp.poisson_max_extensions) &&
      max_p < hp.poisson_prob_cap)
    return ApproxMethod::Poisson;
  if (sum_sq > 1.0) return ApproxMethod::TranslatedPoisson;
  double var_exact = mu - sum_sq;
  double var_binom = c == 0 ? 0.0 : mu - mu * mu / static_cast<double>(c);
  double lo = std::min(var_exact, var_binom), hi = std::max(var_exact, var_binom);
  double ratio = hi <= 0.0 ? 1.0 : lo / hi;
  if (ratio >= hp.binomial_variance_floor) return ApproxMethod::Binomial;
  return ApproxMethod::DP;
}

std::optional<int> max_k(double tri_prob, std::span<const double> ext_probs,
                         double theta, ApproxMethod method) {
  switch (method) {
    case ApproxMethod::DP: return dp_max_k(tri_prob, ext_probs, theta);
    case ApproxMethod::Poisson: return poisson_max_k(tri_prob, ext_probs, theta);
    case ApproxMethod::TranslatedPoisson:
      return translated_poisson_max_k(tri_prob, ext_probs, theta);
    case ApproxMethod::CLT: return clt_max_k(tri_prob, ext_probs, theta);
    case ApproxMethod::Binomial:
      return binomial_max_k(tri_prob, ext_probs, theta);
  }
  return std::nullopt;
}

std::optional<int> max_k(const ExtensionProfile& p, double theta,
                         ApproxMethod method) {
  return max_k(p.tri_prob, p.ext_probs, theta, method);
}

ApproxMethod select_method(const ExtensionProfile& p, const Hyperparams& hp) {
  return select_method(p.ext_probs, hp);
}

}  // namespace pnucleus
