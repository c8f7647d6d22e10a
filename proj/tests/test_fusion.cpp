#include <doctest.h>

#include <cmath>

#include "ocilgwm/errors.hpp"
#include "ocilgwm/fusion.hpp"

using namespace ocilgwm;

namespace {

ParameterSet scalar_set(std::vector<double> values) {
  const std::size_t n = values.size();
  ParameterSet p;
  p.entries.emplace_back("w", Matrix(1, n, std::move(values)));
  return p;
}

ParameterSet random_set(Rng& rng, std::size_t n = 24) {
  ParameterSet p;
  Matrix a(2, n / 2);
  for (double& v : a.values()) v = rng.uniform(-3.0, 3.0);
  Matrix b(1, n / 2);
  for (double& v : b.values()) v = rng.uniform(-3.0, 3.0);
  p.entries.emplace_back("w", std::move(a));
  p.entries.emplace_back("b", std::move(b));
  return p;
}

bool bit_equal(const ParameterSet& a, const ParameterSet& b) {
  const auto fa = a.flatten(), fb = b.flatten();
  for (std::size_t i = 0; i < fa.size(); ++i)
    if (fa[i] != fb[i]) return false;
  return true;
}

FusionConfig two_student_cfg() {
  FusionConfig cfg;
  return cfg;
}

}  // namespace

TEST_CASE("fixed weights are returned verbatim") {
  FusionConfig cfg = two_student_cfg();
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const auto r = sample_weights(cfg, rng);
    CHECK(r == std::vector<double>{0.5, 0.5});
  }
}

TEST_CASE("dirichlet(1,1) mean matches Beta(1,1)") {
  FusionConfig cfg = two_student_cfg();
  cfg.weight_mode = WeightMode::dirichlet;
  cfg.dirichlet_concentration = {1.0, 1.0};
  Rng rng(2);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_weights(cfg, rng)[0];
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("dirichlet(10,10) variance matches Beta(10,10)") {
  FusionConfig cfg = two_student_cfg();
  cfg.weight_mode = WeightMode::dirichlet;
  cfg.dirichlet_concentration = {10.0, 10.0};
  Rng rng(3);
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r0 = sample_weights(cfg, rng)[0];
    sum += r0;
    sum_sq += r0 * r0;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  const double beta_var = 1.0 / 84.0;  // ab/((a+b)^2(a+b+1)) at a=b=10
  CHECK(std::abs(var - beta_var) < 0.1 * beta_var);
}

TEST_CASE("sampled weights always lie on the simplex") {
  FusionConfig cfg = two_student_cfg();
  cfg.num_students = 3;
  cfg.fixed_weights = {0.2, 0.3, 0.5};
  cfg.dirichlet_concentration = {0.4, 2.0, 7.0};
  Rng rng(4);
  for (auto mode : {WeightMode::fixed, WeightMode::dirichlet}) {
    cfg.weight_mode = mode;
    for (int i = 0; i < 200; ++i) {
      const auto r = sample_weights(cfg, rng);
      double sum = 0.0;
      for (double w : r) {
        CHECK(w >= 0.0);
        sum += w;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("combine midpoint, vertex and idempotence cases") {
  const ParameterSet s1 = scalar_set({1.0, 3.0});
  const ParameterSet s2 = scalar_set({3.0, 5.0});
  const auto mid = combine({&s1, &s2}, {0.5, 0.5});
  CHECK(mid.tensor(0)(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(mid.tensor(0)(0, 1) == doctest::Approx(4.0).epsilon(1e-15));

  const auto vertex = combine({&s1, &s2}, {1.0, 0.0});
  CHECK(bit_equal(vertex, s1));

  Rng rng(5);
  for (double r0 : {0.0, 0.2, 0.9, 1.0}) {
    const ParameterSet same = random_set(rng);
    const auto c = combine({&same, &same}, {r0, 1.0 - r0});
    const auto fa = c.flatten(), fb = same.flatten();
    for (std::size_t i = 0; i < fa.size(); ++i)
      CHECK(fa[i] == doctest::Approx(fb[i]).epsilon(1e-15));
  }
}

TEST_CASE("combine is affine: coordinates stay within the two students' hull") {
  Rng rng(6);
  const ParameterSet s1 = random_set(rng);
  const ParameterSet s2 = random_set(rng);
  for (double r0 : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto c = combine({&s1, &s2}, {r0, 1.0 - r0});
    const auto fc = c.flatten(), f1 = s1.flatten(), f2 = s2.flatten();
    for (std::size_t i = 0; i < fc.size(); ++i) {
      const double lo = std::min(f1[i], f2[i]) - 1e-12;
      const double hi = std::max(f1[i], f2[i]) + 1e-12;
      CHECK(fc[i] >= lo);
      CHECK(fc[i] <= hi);
    }
  }
}

TEST_CASE("ema update arithmetic and cold start") {
  GlobalWorkspace gwm;
  CHECK_FALSE(gwm.initialized());
  const ParameterSet first = scalar_set({1.0});
  ema_update(gwm, first, 0.01);  // cold start copies verbatim
  CHECK(gwm.initialized());
  CHECK(gwm.params().tensor(0)(0, 0) == 1.0);

  ema_update(gwm, scalar_set({0.0}), 0.01);
  CHECK(gwm.params().tensor(0)(0, 0) == doctest::Approx(0.99).epsilon(1e-15));

  GlobalWorkspace g2;
  ema_update(g2, scalar_set({5.0}), 1.0);
  ema_update(g2, scalar_set({-2.0}), 1.0);  // alpha=1 has no memory
  CHECK(g2.params().tensor(0)(0, 0) == -2.0);
}

TEST_CASE("ema geometric closed form over k steps") {
  const double alpha = 0.07, prev = 2.0, c = -1.0;
  GlobalWorkspace gwm;
  gwm.set(scalar_set({prev}));
  const int k = 10;
  for (int i = 0; i < k; ++i) ema_update(gwm, scalar_set({c}), alpha);
  const double expected = prev * std::pow(1 - alpha, k) + c * (1 - std::pow(1 - alpha, k));
  CHECK(gwm.params().tensor(0)(0, 0) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("fuse_back arithmetic and bit-exact endpoints") {
  const ParameterSet student = scalar_set({2.0});
  const ParameterSet gwm = scalar_set({0.0});
  CHECK(fuse_back(student, gwm, 0.5).tensor(0)(0, 0) == doctest::Approx(1.0).epsilon(1e-15));

  Rng rng(7);
  const ParameterSet s = random_set(rng);
  const ParameterSet g = random_set(rng);
  CHECK(bit_equal(fuse_back(s, g, 0.0), s));
  CHECK(bit_equal(fuse_back(s, g, 1.0), g));
  const ParameterSet f1 = fuse_back(s, g, 1.0);
  const ParameterSet f2 = fuse_back(random_set(rng), g, 1.0);
  CHECK(parameter_cosine(f1, f2) == 1.0);
}

TEST_CASE("should_fuse interval semantics") {
  FusionConfig cfg = two_student_cfg();
  cfg.fuse_every_task = false;
  cfg.fuse_batch_interval = 250;
  CHECK(should_fuse(249, false, cfg));
  CHECK_FALSE(should_fuse(250, false, cfg));

  cfg.fuse_batch_interval = 1;
  for (std::size_t i = 0; i < 5; ++i) CHECK(should_fuse(i, false, cfg));

  cfg.fuse_every_task = true;
  std::size_t fires = 0;
  const std::size_t tasks = 4, batches = 7;
  for (std::size_t t = 0; t < tasks; ++t)
    for (std::size_t i = 0; i < batches; ++i)
      if (should_fuse(i, i + 1 == batches, cfg)) ++fires;
  CHECK(fires == tasks);
}

TEST_CASE("parameter cosine endpoints") {
  const ParameterSet a = scalar_set({1.0, 2.0});
  CHECK(parameter_cosine(a, a) == 1.0);

  const ParameterSet x = scalar_set({1.0, 0.0});
  const ParameterSet y = scalar_set({0.0, 1.0});
  CHECK(parameter_cosine(x, y) == 0.0);

  ParameterSet neg = a;
  neg.tensor(0) *= -1.0;
  CHECK(parameter_cosine(a, neg) == -1.0);

  const ParameterSet zero = scalar_set({0.0, 0.0});
  CHECK_THROWS_AS(parameter_cosine(zero, zero), DataError);
}

TEST_CASE("ema then full fuse collapses the ensemble for any simplex weights") {
  Rng rng(8);
  ParameterSet s1 = random_set(rng);
  ParameterSet s2 = random_set(rng);
  GlobalWorkspace gwm;
  ema_update(gwm, combine({&s1, &s2}, {0.5, 0.5}), 1.0);
  s1 = fuse_back(s1, gwm.params(), 1.0);
  s2 = fuse_back(s2, gwm.params(), 1.0);
  CHECK(bit_equal(s1, s2));
  const auto c1 = combine({&s1, &s2}, {0.3, 0.7});
  const auto c2 = combine({&s1, &s2}, {0.9, 0.1});
  const auto f1 = c1.flatten(), f2 = c2.flatten(), fs = s1.flatten();
  for (std::size_t i = 0; i < f1.size(); ++i) {
    CHECK(f1[i] == doctest::Approx(fs[i]).epsilon(1e-15));
    CHECK(f2[i] == doctest::Approx(fs[i]).epsilon(1e-15));
  }
}

TEST_CASE("fusion config validation names the offending field") {
  FusionConfig cfg = two_student_cfg();
  cfg.fuse_ratio = 1.5;
  CHECK_THROWS_WITH_AS(cfg.validate(), "fusion.fuse_ratio must be in [0, 1]", ParameterError);
  cfg.fuse_ratio = 0.5;
  cfg.ema_alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.ema_alpha = 0.01;
  cfg.fixed_weights = {0.6, 0.6};
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
}
