#include "doctest.h"
#include "ringsteer/bounds.hpp"

using namespace ringsteer;

TEST_SUITE("bounds") {

TEST_CASE("largest product cell is one half") {
  SohsResult r = trusted_cell_max(8);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.value <= 0.5 + 1e-10);
  CHECK(r.iterations > 0);
  CHECK(r.restarts == 8);
  // the argmax Bloch vectors are unit length (pure qubits)
  CHECK(r.argmax.bloch1.norm() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.argmax.bloch2.norm() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(trusted_cell_max(0), std::invalid_argument);
}

TEST_CASE("restricted witness bound is one half for small rings") {
  for (int n = 2; n <= 5; ++n) {
    SohsResult r = tsohs_value(WitnessSpec::for_nodes(n), 8);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.value <= 0.5 + 1e-10);
    REQUIRE(static_cast<int>(r.best_response.size()) == n - 1);
    for (int a : r.best_response) {
      CHECK(a >= 0);
      CHECK(a <= 3);
    }
  }
}

TEST_CASE("search is deterministic") {
  SohsResult a = tsohs_value(WitnessSpec::for_nodes(3), 4);
  SohsResult b = tsohs_value(WitnessSpec::for_nodes(3), 4);
  CHECK(a.value == b.value);
  CHECK(a.iterations == b.iterations);
  CHECK(a.best_response == b.best_response);
}

TEST_CASE("grid oracle brackets the search result") {
  double coarse = sohs_grid_oracle(8);
  CHECK(coarse >= 0.45);
  CHECK(coarse <= 0.5 + 1e-10);
  double mid = sohs_grid_oracle(16);
  double fine = sohs_grid_oracle(32);
  CHECK(mid >= coarse - 1e-12);
  CHECK(fine >= mid - 1e-12);
  CHECK(fine <= 0.5 + 1e-10);
  CHECK_THROWS_AS(sohs_grid_oracle(4), std::invalid_argument);
}

TEST_CASE("gap report lines up quantum value and bound") {
  GapReport g = quantum_gap_report(3);
  CHECK(g.n == 3);
  CHECK(g.quantum == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(g.restricted_bound == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(g.gap == doctest::Approx(g.quantum - g.restricted_bound).epsilon(1e-12));
}

}  // TEST_SUITE
