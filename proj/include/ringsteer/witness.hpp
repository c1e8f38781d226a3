#pragma once

#include <cstdint>

#include "ringsteer/network.hpp"

namespace ringsteer {

// Which outcome strings count towards the steering score W_n. Stored as a
// dense accept table over radix-4 strings, node 0 slowest; 4^(n-1) strings
// are accepted and for every tail (a_2..a_n) exactly one head outcome is.
class WitnessSpec {
 public:
  static constexpr int kMaxNodes = 8;

  // The two-node base case: accept exactly the diagonal strings (a, a).
  static WitnessSpec base2();
  // base2() grown by repeated refinement.
  static WitnessSpec for_nodes(int n);

  int nodes() const { return n_; }
  long long strings() const { return static_cast<long long>(accept_.size()); }
  bool accepts(long long index) const { return accept_[index] != 0; }
  bool accepts(const std::vector<int>& outcomes) const;
  long long support_size() const;

  // Accepted strings in lexicographic order.
  std::vector<std::vector<int>> support() const;

  friend WitnessSpec refine(const WitnessSpec& w);

 private:
  WitnessSpec(int n, std::vector<std::uint8_t> accept);
  int n_;
  std::vector<std::uint8_t> accept_;
};

// Closed-form membership predicate: a string is accepted when
//   a_1 - a_2 - sum_{i>=3} (-1)^(a_2+...+a_{i-1}) a_i = 0 (mod 4).
// Independent of the refinement construction; the two must agree.
int witness_coeff(const std::vector<int>& outcomes);

// Grow an n-node witness to n+1 nodes by replacing the last outcome with the
// four two-outcome continuations that reproduce it under coarse-graining:
//   0 -> (0,0) (1,1) (2,2) (3,3)      1 -> (0,1) (1,0) (2,3) (3,2)
//   2 -> (0,2) (2,0) (1,3) (3,1)      3 -> (0,3) (3,0) (1,2) (2,1)
WitnessSpec refine(const WitnessSpec& w);

// sum of table probabilities over accepted strings.
double evaluate(const WitnessSpec& w, const CorrelationTable& table);

}  // namespace ringsteer
