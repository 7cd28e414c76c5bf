#include <doctest.h>

#include <cmath>
#include <random>

#include "pnucleus/support_model.hpp"
#include "test_util.hpp"

using namespace pnucleus;
namespace tu = pnucleus::testutil;

namespace {

// Independent oracle: enumerate all 2^c extension outcomes.
std::vector<double> enumerated_zeta_pmf(const std::vector<double>& probs) {
  std::vector<double> pmf(probs.size() + 1, 0.0);
  const std::uint64_t worlds = std::uint64_t{1} << probs.size();
  for (std::uint64_t subset = 0; subset < worlds; ++subset) {
    double p = 1.0;
    int count = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if ((subset >> i) & 1) {
        p *= probs[i];
        ++count;
      } else {
        p *= 1.0 - probs[i];
      }
    }
    pmf[static_cast<std::size_t>(count)] += p;
  }
  return pmf;
}

double poisson_pmf(double lambda, int k) {
  double lp = -lambda + k * std::log(lambda) - std::lgamma(k + 1.0);
  return std::exp(lp);
}

}  // namespace

TEST_CASE("dp_distribution matches the stated examples") {
  SUBCASE("single extension of 0.5") {
    SupportDistribution d = dp_distribution(1.0, std::vector<double>{0.5});
    CHECK(d.tail(1) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("two extensions of 0.216 under a 0.216 triangle") {
    SupportDistribution d =
        dp_distribution(0.216, std::vector<double>{0.216, 0.216});
    CHECK(d.tail(2) == doctest::Approx(0.010077696).epsilon(1e-9));
  }
  SUBCASE("no extensions") {
    SupportDistribution d = dp_distribution(0.7, std::vector<double>{});
    CHECK(d.tail(0) == doctest::Approx(0.7));
    CHECK(d.tail(1) == 0.0);
  }
}

TEST_CASE("dp_distribution equals exhaustive enumeration") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t c = 1 + static_cast<std::size_t>(rng() % 10);
    std::vector<double> probs = tu::random_profile(rng, c, 0.01, 1.0);
    std::vector<double> expect = enumerated_zeta_pmf(probs);
    SupportDistribution d = dp_distribution(0.9, probs);
    for (std::size_t k = 0; k <= c; ++k)
      CHECK(d.prob(k) == doctest::Approx(0.9 * expect[k]).epsilon(1e-9));
  }
}

TEST_CASE("distribution invariants") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t c = rng() % 12;
    double tri = 0.05 + 0.95 * (static_cast<double>(rng() % 1000) / 1000.0);
    std::vector<double> probs = tu::random_profile(rng, c, 0.01, 1.0);
    SupportDistribution d = dp_distribution(tri, probs);
    double total = 0.0;
    for (std::size_t k = 0; k <= c; ++k) {
      CHECK(d.prob(k) >= 0.0);
      total += d.prob(k);
    }
    CHECK(total == doctest::Approx(tri).epsilon(1e-9));
    CHECK(d.tail(0) == doctest::Approx(tri).epsilon(1e-12));
    CHECK(d.tail(static_cast<long>(c) + 1) == 0.0);
    for (std::size_t k = 1; k <= c; ++k)
      CHECK(d.tail(static_cast<long>(k)) <=
            d.tail(static_cast<long>(k) - 1) + 1e-15);
  }
}

TEST_CASE("dp pmf is invariant under permutation of the profile") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> probs = tu::random_profile(rng, 8, 0.01, 1.0);
    std::vector<double> shuffled = probs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<double> a = dp_zeta_pmf(probs);
    std::vector<double> b = dp_zeta_pmf(shuffled);
    for (std::size_t k = 0; k < a.size(); ++k)
      CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));
  }
}

TEST_CASE("dp_max_k") {
  SUBCASE("stated examples") {
    CHECK(dp_max_k(1.0, std::vector<double>{0.5}, 0.42) == 1);
    CHECK(dp_max_k(0.216, std::vector<double>{0.216, 0.216}, 0.01) == 2);
    CHECK(!dp_max_k(0.3, std::vector<double>{0.9}, 0.42).has_value());
  }
  SUBCASE("capped search agrees with the full one") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<double> probs = tu::random_profile(rng, 9, 0.01, 1.0);
      double theta = 0.05 + 0.9 * (static_cast<double>(rng() % 1000) / 1000.0);
      auto full = dp_max_k(1.0, probs, theta);
      REQUIRE(full.has_value());
      for (int cap = 0; cap <= 9; ++cap) {
        auto capped = dp_max_k(1.0, probs, theta, cap);
        CHECK(*capped == std::min(*full, cap));
      }
    }
  }
  SUBCASE("monotone non-increasing in theta") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> probs = tu::random_profile(rng, 10, 0.01, 1.0);
      int prev = 11;
      for (double theta : {0.05, 0.2, 0.4, 0.6, 0.8, 0.99}) {
        auto k = dp_max_k(0.995, probs, theta);
        REQUIRE(k.has_value());
        CHECK(*k <= prev);
        prev = *k;
      }
    }
  }
}

TEST_CASE("poisson_max_k") {
  SUBCASE("lambda 1 from twenty extensions of 0.05") {
    std::vector<double> probs(20, 0.05);
    // Pr[zeta >= 2] = 1 - 2/e ~ 0.2642
    CHECK(poisson_max_k(1.0, probs, 0.26) == 2);
    CHECK(poisson_max_k(1.0, probs, 0.27) == 1);
    // base case Pr[zeta >= 1] = 1 - 1/e ~ 0.6321
    CHECK(poisson_max_k(1.0, probs, 0.63) == 1);
    CHECK(poisson_max_k(1.0, probs, 0.64) == 0);
  }
  SUBCASE("below-theta triangle is absent") {
    CHECK(!poisson_max_k(0.3, std::vector<double>{0.9}, 0.42).has_value());
  }
}

TEST_CASE("Le Cam: total variation below twice the sum of squares") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t c = 1 + static_cast<std::size_t>(rng() % 60);
    double hi = trial % 3 == 0 ? 0.1 : 1.0;
    std::vector<double> probs = tu::random_profile(rng, c, 0.001, hi);
    std::vector<double> pmf = dp_zeta_pmf(probs);
    double lambda = 0.0, sum_sq = 0.0;
    for (double p : probs) {
      lambda += p;
      sum_sq += p * p;
    }
    double tv = 0.0;
    for (std::size_t k = 0; k <= c; ++k)
      tv += std::abs(pmf[k] - poisson_pmf(lambda, static_cast<int>(k)));
    CHECK(tv < 2.0 * sum_sq);
  }
}

TEST_CASE("translated_poisson_max_k") {
  SUBCASE("vanishing squares reduce to plain Poisson") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> probs = tu::random_profile(rng, 40, 0.001, 0.02);
      for (double theta : {0.1, 0.3, 0.7}) {
        CHECK(translated_poisson_max_k(1.0, probs, theta) ==
              poisson_max_k(1.0, probs, theta));
      }
    }
  }
  SUBCASE("eight extensions of 0.5: within one of the exact answer") {
    std::vector<double> probs(8, 0.5);
    auto tp = translated_poisson_max_k(1.0, probs, 0.5);
    auto dp = dp_max_k(1.0, probs, 0.5);
    REQUIRE(tp.has_value());
    REQUIRE(dp.has_value());
    CHECK(std::abs(*tp - *dp) <= 1);
  }
  SUBCASE("levels at or below the shift are certain") {
    std::vector<double> probs(10, 0.9);  // lambda2 = 8.1, shift 8
    auto tp = translated_poisson_max_k(1.0, probs, 1.0);
    REQUIRE(tp.has_value());
    CHECK(*tp >= 8);
  }
}

TEST_CASE("clt_max_k") {
  SUBCASE("level at the mean is accepted at theta 0.5") {
    std::vector<double> probs(400, 0.5);
    CHECK(clt_max_k(1.0, probs, 0.5) == 200);
  }
  SUBCASE("upper quantile against the exact answer") {
    std::vector<double> probs(400, 0.5);
    auto dp = dp_max_k(1.0, probs, 0.975);
    auto clt = clt_max_k(1.0, probs, 0.975);
    REQUIRE(dp.has_value());
    REQUIRE(clt.has_value());
    CHECK(*dp == 180);  // normal quantile: 200 - 1.96 * 10, rounded outward
    CHECK(std::abs(*clt - *dp) <= 1);
  }
  SUBCASE("degenerate variance is a point mass at the mean") {
    std::vector<double> probs(6, 1.0);
    CHECK(clt_max_k(1.0, probs, 0.9) == 6);
    CHECK(clt_max_k(1.0, probs, 1.0) == 6);
  }
}

TEST_CASE("binomial_max_k") {
  SUBCASE("two extensions of 0.6 at theta 0.36") {
    CHECK(binomial_max_k(1.0, std::vector<double>{0.6, 0.6}, 0.36) == 2);
  }
  SUBCASE("equal probabilities reproduce the exact answer for every theta") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 20; ++trial) {
      std::size_t c = 1 + rng() % 30;
      double p = 0.05 + 0.9 * (static_cast<double>(rng() % 1000) / 1000.0);
      std::vector<double> probs(c, p);
      for (double theta : {0.01, 0.1, 0.33, 0.5, 0.77, 0.95}) {
        CHECK(binomial_max_k(1.0, probs, theta) == dp_max_k(1.0, probs, theta));
      }
    }
  }
  SUBCASE("certain extensions collapse to a point mass") {
    std::vector<double> probs(5, 1.0);
    CHECK(binomial_max_k(0.8, probs, 0.5) == 5);
  }
}

TEST_CASE("select_method follows the rule chain") {
  Hyperparams hp;
  SUBCASE("large extension counts go to CLT") {
    std::vector<double> probs(250, 0.4);
    CHECK(select_method(probs, hp) == ApproxMethod::CLT);
  }
  SUBCASE("small counts with small probabilities go to Poisson") {
    std::vector<double> probs(50, 0.1);
    CHECK(select_method(probs, hp) == ApproxMethod::Poisson);
  }
  SUBCASE("large sum of squares goes to TranslatedPoisson") {
    std::vector<double> probs(150, 0.2);  // sum of squares 6
    CHECK(select_method(probs, hp) == ApproxMethod::TranslatedPoisson);
  }
  SUBCASE("matched variances go to Binomial") {
    std::vector<double> probs(120, 0.08);  // sum of squares 0.768, ratio 1
    CHECK(select_method(probs, hp) == ApproxMethod::Binomial);
  }
  SUBCASE("spread probabilities with mismatched variance fall back to DP") {
    std::vector<double> probs{0.1, 0.9};  // variance ratio 0.36
    CHECK(select_method(probs, hp) == ApproxMethod::DP);
  }
  SUBCASE("selection is a pure function") {
    std::vector<double> probs{0.3, 0.5, 0.9};
    ApproxMethod first = select_method(probs, hp);
    for (int i = 0; i < 5; ++i) CHECK(select_method(probs, hp) == first);
  }
}

TEST_CASE("every method is monotone in theta and bounded by the profile") {
  std::mt19937_64 rng(73);
  for (ApproxMethod m :
       {ApproxMethod::DP, ApproxMethod::Poisson, ApproxMethod::TranslatedPoisson,
        ApproxMethod::CLT, ApproxMethod::Binomial}) {
    for (int trial = 0; trial < 10; ++trial) {
      std::size_t c = 1 + rng() % 20;
      std::vector<double> probs = tu::random_profile(rng, c, 0.01, 0.99);
      int prev = static_cast<int>(c) + 1;
      for (double theta : {0.02, 0.1, 0.3, 0.6, 0.9}) {
        auto k = max_k(1.0, probs, theta, m);
        REQUIRE(k.has_value());
        CHECK(*k >= 0);
        CHECK(*k <= static_cast<int>(c));
        CHECK(*k <= prev);
        prev = *k;
      }
    }
  }
}

TEST_CASE("hyperparameter validation") {
  Hyperparams hp;
  hp.poisson_max_extensions = 300;
  CHECK_THROWS_AS(hp.validate(), DomainError);
  hp = Hyperparams{};
  hp.poisson_prob_cap = 1.5;
  CHECK_THROWS_AS(hp.validate(), DomainError);
  hp = Hyperparams{};
  hp.binomial_variance_floor = 0.0;
  CHECK_THROWS_AS(hp.validate(), DomainError);
}
