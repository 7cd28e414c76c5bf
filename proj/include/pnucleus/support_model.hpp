#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pnucleus/errors.hpp"
#include "pnucleus/triangle_index.hpp"

namespace pnucleus {

// Absolute slack used by every threshold comparison "tail >= theta". Keeps
// max-k answers reproducible when the tail equals theta up to rounding; all
// decisive margins in practice are orders of magnitude larger.
inline constexpr double kThetaSlack = 1e-12;

inline bool meets_threshold(double prob, double theta) {
  return prob >= theta - kThetaSlack;
}

enum class ApproxMethod { DP, Poisson, TranslatedPoisson, CLT, Binomial };

const char* to_string(ApproxMethod m);

// Selection thresholds for the hybrid backend. Defaults follow the rule set
// CLT for >= 200 extensions, Poisson below 100 extensions with all extension
// probabilities under 0.25, then Translated Poisson / Binomial / DP.
struct Hyperparams {
  int clt_min_extensions = 200;       // A
  int poisson_max_extensions = 100;   // B
  double poisson_prob_cap = 0.25;     // C
  double binomial_variance_floor = 0.9;  // D

  void validate() const;  // throws DomainError
};

// Distribution of X = (triangle exists) * (number of realized 4-clique
// extensions). Sub-normalized: the masses sum to the triangle's own
// existence probability.
class SupportDistribution {
 public:
  SupportDistribution(double tri_prob, std::vector<double> zeta_pmf);

  std::size_t extension_count() const { return probs_.size() - 1; }
  double tri_prob() const { return tri_prob_; }

  // Pr(X = k)
  double prob(std::size_t k) const { return k < probs_.size() ? probs_[k] : 0.0; }
  // Pr(X >= k); tail(0) equals tri_prob, tail beyond the support is 0.
  double tail(long k) const;

 private:
  double tri_prob_;
  std::vector<double> probs_;  // Pr(X = k), k = 0..c
  std::vector<double> tails_;  // suffix sums, size c+1
};

// Exact probability mass of the extension count (triangle existence not
// folded in), via the two-event recursion over extensions. O(c^2).
std::vector<double> dp_zeta_pmf(std::span<const double> ext_probs);

SupportDistribution dp_distribution(double tri_prob,
                                    std::span<const double> ext_probs);
SupportDistribution dp_distribution(const ExtensionProfile& p);

// Largest k with Pr(X >= k) >= theta, or nullopt when even k = 0 fails
// (the triangle itself is below theta). k_cap >= 0 restricts the search to
// k <= k_cap and lets the DP run two rolling rows of length k_cap+1.
std::optional<int> dp_max_k(double tri_prob, std::span<const double> ext_probs,
                            double theta, int k_cap = -1);

// Poisson tail with lambda = sum of extension probabilities; linear in c.
std::optional<int> poisson_max_k(double tri_prob,
                                 std::span<const double> ext_probs,
                                 double theta);

// Poisson shifted by floor(lambda - sigma^2) so mean and (nearly) variance
// both match.
std::optional<int> translated_poisson_max_k(double tri_prob,
                                            std::span<const double> ext_probs,
                                            double theta);

// Normal approximation Pr(zeta >= k) ~ 1 - Phi((k - mu)/sigma); a zero
// variance profile degenerates to a point mass at mu.
std::optional<int> clt_max_k(double tri_prob, std::span<const double> ext_probs,
                             double theta);

// Binomial with n = c and p = mu/n; p = 1 degenerates to a point mass at n.
std::optional<int> binomial_max_k(double tri_prob,
                                  std::span<const double> ext_probs,
                                  double theta);

// Deterministic rule chain: (1) c >= A -> CLT; (2) c < B and all extension
// probabilities < C -> Poisson; (3) sum of squared probabilities > 1 ->
// TranslatedPoisson; (4) variance ratio >= D -> Binomial; (5) DP.
ApproxMethod select_method(std::span<const double> ext_probs,
                           const Hyperparams& hp);

std::optional<int> max_k(double tri_prob, std::span<const double> ext_probs,
                         double theta, ApproxMethod method);

// ExtensionProfile conveniences.
std::optional<int> max_k(const ExtensionProfile& p, double theta,
                         ApproxMethod method);
ApproxMethod select_method(const ExtensionProfile& p, const Hyperparams& hp);

}  // namespace pnucleus
