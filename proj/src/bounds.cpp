#include "ringsteer/bounds.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace ringsteer {

namespace {

constexpr std::uint64_t kRestartSeed = 0x9b6f3a1d2c4e5f60ULL;

struct Angles {
  double theta1, phi1, theta2, phi2;
};

// |<bell_a | psi(theta1,phi1) x psi(theta2,phi2)>|^2 for all four cells.
// psi(theta,phi) = (cos(theta/2), e^{i phi} sin(theta/2)).
std::array<double, 4> cell_values(const Angles& x) {
  const complexd a1 = std::cos(x.theta1 / 2);
  const complexd b1 = std::polar(std::sin(x.theta1 / 2), x.phi1);
  const complexd a2 = std::cos(x.theta2 / 2);
  const complexd b2 = std::polar(std::sin(x.theta2 / 2), x.phi2);
  const complexd p00 = a1 * a2, p01 = a1 * b2, p10 = b1 * a2, p11 = b1 * b2;
  const double inv2 = 0.5;
  return {
      std::norm(p00 + p11) * inv2,  // phi+
      std::norm(p01 + p10) * inv2,  // psi+
      std::norm(p00 - p11) * inv2,  // phi-
      std::norm(p01 - p10) * inv2,  // psi-
  };
}

Eigen::Vector3d bloch_of(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

// Compass search on the four angles. Deterministic given the start point.
template <typename Objective>
double compass_search(Angles& x, const Objective& f, long long& evals) {
  double best = f(x);
  ++evals;
  double step = 0.4;
  double* coords[4] = {&x.theta1, &x.phi1, &x.theta2, &x.phi2};
  while (step > 1e-9) {
    bool improved = false;
    for (double* c : coords) {
      for (double sign : {+1.0, -1.0}) {
        const double saved = *c;
        *c = saved + sign * step;
        const double v = f(x);
        ++evals;
        if (v > best + 1e-15) {
          best = v;
          improved = true;
          break;  // keep the move
        }
        *c = saved;
      }
    }
    if (!improved) step /= 2;
  }
  return best;
}

template <typename Objective>
SohsResult multistart(const Objective& f, int restarts) {
  if (restarts < 1) throw std::invalid_argument("need at least one restart");
  SohsResult out;
  out.restarts = restarts;
  Angles best_x{0, 0, 0, 0};
  double best = -1.0;
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(kRestartSeed + static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Angles x{std::acos(1 - 2 * u(rng)), 2 * std::numbers::pi * u(rng),
             std::acos(1 - 2 * u(rng)), 2 * std::numbers::pi * u(rng)};
    const double v = compass_search(x, f, out.iterations);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  out.value = best;
  out.argmax.bloch1 = bloch_of(best_x.theta1, best_x.phi1);
  out.argmax.bloch2 = bloch_of(best_x.theta2, best_x.phi2);
  return out;
}

}  // namespace

SohsResult trusted_cell_max(int restarts) {
  SohsResult out = multistart(
      [](const Angles& x) {
        const auto cells = cell_values(x);
        return *std::max_element(cells.begin(), cells.end());
      },
      restarts);
  // which cell wins at the argmax
  const auto cells = cell_values({std::acos(out.argmax.bloch1.z()),
                                  std::atan2(out.argmax.bloch1.y(), out.argmax.bloch1.x()),
                                  std::acos(out.argmax.bloch2.z()),
                                  std::atan2(out.argmax.bloch2.y(), out.argmax.bloch2.x())});
  const int best_cell = static_cast<int>(
      std::max_element(cells.begin(), cells.end()) - cells.begin());
  out.best_response = {best_cell};
  return out;
}

SohsResult tsohs_value(const WitnessSpec& w, int restarts) {
  const int n = w.nodes();
  const long long tails = 1LL << (2 * (n - 1));
  // For every untrusted response string, the trusted outcome it pays out on.
  // Exactly one per string, by construction of the accept table; anything
  // else is a corrupted witness and worth an exception.
  std::vector<int> payout(tails, -1);
  for (long long tail = 0; tail < tails; ++tail) {
    for (int head = 0; head < 4; ++head) {
      if (!w.accepts((static_cast<long long>(head) << (2 * (n - 1))) | tail))
        continue;
      if (payout[tail] != -1)
        throw NumericError("tsohs_value: response string with two payouts");
      payout[tail] = head;
    }
    if (payout[tail] == -1)
      throw NumericError("tsohs_value: response string with no payout");
  }

  SohsResult out = multistart(
      [&](const Angles& x) {
        const auto cells = cell_values(x);
        double best = 0.0;
        for (long long tail = 0; tail < tails; ++tail)
          best = std::max(best, cells[payout[tail]]);
        return best;
      },
      restarts);

  // lexicographically smallest response string attaining the value
  const auto cells = cell_values({std::acos(out.argmax.bloch1.z()),
                                  std::atan2(out.argmax.bloch1.y(), out.argmax.bloch1.x()),
                                  std::acos(out.argmax.bloch2.z()),
                                  std::atan2(out.argmax.bloch2.y(), out.argmax.bloch2.x())});
  long long best_tail = 0;
  double best_val = -1.0;
  for (long long tail = 0; tail < tails; ++tail) {
    if (cells[payout[tail]] > best_val + 1e-15) {
      best_val = cells[payout[tail]];
      best_tail = tail;
    }
  }
  out.best_response.resize(n - 1);
  for (int i = n - 2; i >= 0; --i) {
    out.best_response[i] = static_cast<int>(best_tail & 3);
    best_tail >>= 2;
  }
  return out;
}

double sohs_grid_oracle(int resolution) {
  if (resolution < 8)
    throw std::invalid_argument("sohs_grid_oracle: resolution must be >= 8");
  const double pi = std::numbers::pi;
  const long long res = resolution;
  const long long count = res * res * res * res;
  const long long chunks = std::min<long long>(thread_count(), count);
  const long long span = (count + chunks - 1) / chunks;
  std::vector<double> partial(chunks, 0.0);
  parallel_for(chunks, [&](long long clo, long long chi) {
    for (long long c = clo; c < chi; ++c) {
      double local = 0.0;
      for (long long k = c * span; k < std::min(count, (c + 1) * span); ++k) {
        long long rem = k;
        const long long i1 = rem % res; rem /= res;
        const long long j1 = rem % res; rem /= res;
        const long long i2 = rem % res; rem /= res;
        const long long j2 = rem;
        const Angles x{pi * i1 / (res - 1), 2 * pi * j1 / res,
                       pi * i2 / (res - 1), 2 * pi * j2 / res};
        const auto cells = cell_values(x);
        local = std::max(local, *std::max_element(cells.begin(), cells.end()));
      }
      partial[c] = local;
    }
  });
  double best = 0.0;
  for (double v : partial) best = std::max(best, v);
  return best;
}

GapReport quantum_gap_report(int n) {
  const WitnessSpec w = WitnessSpec::for_nodes(n);
  GapReport out;
  out.n = n;
  out.quantum = evaluate(w, joint_distribution(ideal_ring(n)));
  out.restricted_bound = tsohs_value(w).value;
  out.gap = out.quantum - out.restricted_bound;
  return out;
}

}  // namespace ringsteer
