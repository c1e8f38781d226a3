#include <cmath>

#include "doctest.h"
#include "ringsteer/noise.hpp"

using namespace ringsteer;

TEST_SUITE("noise") {

TEST_CASE("werner family") {
  CHECK_THROWS_AS(werner_state(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(werner_state(1.1), std::invalid_argument);
  DensityOperator w = werner_state(0.8);
  CHECK(w.shape().dims() == std::vector<int>{2, 2});
  // partial transpose eigenvalue (1 - 3v) / 4 marks the separability edge
  EigResult eig = eig_hermitian(partial_transpose(w, 1).matrix());
  CHECK(eig.values(0) == doctest::Approx((1.0 - 3.0 * 0.8) / 4.0).epsilon(1e-12));
  CHECK(werner_state(1.0).purity() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(werner_state(0.0).purity() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("noisy bell measurement") {
  CHECK_THROWS_AS(noisy_bell_measurement(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(noisy_bell_measurement(1.1), std::invalid_argument);
  Measurement clean = noisy_bell_measurement(1.0);
  for (int a = 0; a < 4; ++a)
    CHECK((clean.op(a) - bell_basis().op(a)).norm() < 1e-14);
  Measurement fuzzy = noisy_bell_measurement(0.5);
  CHECK_FALSE(fuzzy.projective());
  Matrix sum = Matrix::Zero(4, 4);
  for (int a = 0; a < 4; ++a) sum += fuzzy.op(a);
  CHECK((sum - Matrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("witness value follows the product of visibilities") {
  const double levels[3] = {0.0, 0.5, 1.0};
  for (int i0 = 0; i0 < 3; ++i0)
    for (int i1 = 0; i1 < 3; ++i1)
      for (int i2 = 0; i2 < 3; ++i2)
        for (int j0 = 0; j0 < 3; ++j0)
          for (int j1 = 0; j1 < 3; ++j1) {
            VisibilityConfig cfg;
            cfg.source_v = {levels[i0], levels[i1], levels[i2]};
            cfg.node_w = {levels[j0], levels[j1]};
            const double product = cfg.source_v[0] * cfg.source_v[1] *
                                   cfg.source_v[2] * cfg.node_w[0] * cfg.node_w[1];
            const double expected = 0.25 * (1.0 + 3.0 * product);
            REQUIRE(noisy_witness_value(3, cfg) ==
                    doctest::Approx(expected).epsilon(1e-10));
          }
}

TEST_CASE("config size validation") {
  VisibilityConfig cfg;
  cfg.source_v = {1.0, 1.0};
  cfg.node_w = {1.0, 1.0};
  CHECK_THROWS_AS(noisy_ring(3, cfg), std::invalid_argument);
  cfg.source_v = {1.0, 1.0, 1.0};
  cfg.node_w = {1.0};
  CHECK_THROWS_AS(noisy_ring(3, cfg), std::invalid_argument);
  cfg.node_w = {1.0, 2.0};
  CHECK_THROWS_AS(noisy_ring(3, cfg), std::invalid_argument);
}

TEST_CASE("fully visible ring reproduces the ideal table") {
  VisibilityConfig cfg;
  cfg.source_v = {1.0, 1.0, 1.0};
  cfg.node_w = {1.0, 1.0};
  CHECK(noisy_witness_value(3, cfg) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("single knob threshold sits at one third") {
  ThresholdResult r = visibility_threshold(3, 1e-7);
  CHECK(r.n == 3);
  CHECK(r.threshold == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(r.iterations > 0);

  // crossing the threshold flips the comparison against one half
  VisibilityConfig lo, hi;
  lo.source_v = {r.threshold - 1e-3, 1.0, 1.0};
  lo.node_w = {1.0, 1.0};
  hi.source_v = {r.threshold + 1e-3, 1.0, 1.0};
  hi.node_w = {1.0, 1.0};
  CHECK(noisy_witness_value(3, lo) < 0.5);
  CHECK(noisy_witness_value(3, hi) > 0.5);
}

}  // TEST_SUITE
