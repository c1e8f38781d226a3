#include "ringsteer/witness.hpp"

namespace ringsteer {

namespace {

// continuation pairs (b, c) with b + (-1)^b c = r (mod 4)
constexpr int kRefinePairs[4][4][2] = {
    {{0, 0}, {1, 1}, {2, 2}, {3, 3}},
    {{0, 1}, {1, 0}, {2, 3}, {3, 2}},
    {{0, 2}, {2, 0}, {1, 3}, {3, 1}},
    {{0, 3}, {3, 0}, {1, 2}, {2, 1}},
};

}  // namespace

WitnessSpec::WitnessSpec(int n, std::vector<std::uint8_t> accept)
    : n_(n), accept_(std::move(accept)) {}

WitnessSpec WitnessSpec::base2() {
  std::vector<std::uint8_t> accept(16, 0);
  for (int a = 0; a < 4; ++a) accept[a * 4 + a] = 1;
  return WitnessSpec(2, std::move(accept));
}

WitnessSpec WitnessSpec::for_nodes(int n) {
  if (n < 2 || n > kMaxNodes)
    throw std::invalid_argument("WitnessSpec: node count must be 2..8");
  WitnessSpec w = base2();
  while (w.nodes() < n) w = refine(w);
  return w;
}

bool WitnessSpec::accepts(const std::vector<int>& outcomes) const {
  if (static_cast<int>(outcomes.size()) != n_)
    throw std::invalid_argument("WitnessSpec: outcome count mismatch");
  long long idx = 0;
  for (int a : outcomes) {
    if (a < 0 || a > 3)
      throw std::invalid_argument("WitnessSpec: outcomes must be 0..3");
    idx = idx * 4 + a;
  }
  return accepts(idx);
}

long long WitnessSpec::support_size() const {
  long long count = 0;
  for (std::uint8_t b : accept_) count += b;
  return count;
}

std::vector<std::vector<int>> WitnessSpec::support() const {
  std::vector<std::vector<int>> out;
  for (long long idx = 0; idx < strings(); ++idx) {
    if (!accept_[idx]) continue;
    std::vector<int> s(n_);
    long long rem = idx;
    for (int i = n_ - 1; i >= 0; --i) {
      s[i] = static_cast<int>(rem & 3);
      rem >>= 2;
    }
    out.push_back(std::move(s));
  }
  return out;
}

int witness_coeff(const std::vector<int>& outcomes) {
  const int n = static_cast<int>(outcomes.size());
  if (n < 2) throw std::invalid_argument("witness_coeff: need at least 2 outcomes");
  for (int a : outcomes)
    if (a < 0 || a > 3)
      throw std::invalid_argument("witness_coeff: outcomes must be 0..3");
  int acc = outcomes[0] - outcomes[1];
  int parity = outcomes[1];  // running sum a_2 + ... + a_{i-1}
  for (int i = 2; i < n; ++i) {
    acc -= (parity % 2 == 0 ? 1 : -1) * outcomes[i];
    parity += outcomes[i];
  }
  return ((acc % 4) + 4) % 4 == 0 ? 1 : 0;
}

WitnessSpec refine(const WitnessSpec& w) {
  if (w.nodes() >= WitnessSpec::kMaxNodes)
    throw std::invalid_argument("refine: witness already at the 8-node cap");
  std::vector<std::uint8_t> accept(w.strings() * 4, 0);
  for (long long idx = 0; idx < w.strings(); ++idx) {
    if (!w.accept_[idx]) continue;
    const long long head = idx >> 2;  // everything before the last outcome
    const int last = static_cast<int>(idx & 3);
    for (const auto& pair : kRefinePairs[last]) {
      const long long grown = ((head * 4 + pair[0]) << 2) | pair[1];
      accept[grown] = 1;
    }
  }
  return WitnessSpec(w.nodes() + 1, std::move(accept));
}

double evaluate(const WitnessSpec& w, const CorrelationTable& table) {
  if (table.nodes() != w.nodes())
    throw std::invalid_argument("evaluate: table and witness node counts differ");
  for (int a : table.alphabet())
    if (a != 4)
      throw std::invalid_argument("evaluate: witness needs 4 outcomes per node");
  double sum = 0.0;
  for (long long idx = 0; idx < w.strings(); ++idx)
    if (w.accepts(idx)) sum += table.prob(idx);
  return sum;
}

}  // namespace ringsteer
