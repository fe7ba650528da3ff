#pragma once

// Unrolled trellis of a terminated convolutional code, per-node minimum
// path weights d*_j(l), and the virtual code tree of a block code.

#include <bit>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "seqdec/codes.hpp"

namespace seqdec {

struct Transition {
  std::uint32_t next_state;
  std::uint32_t output;  // bit i = encoder output i
  int weight;
};

class Trellis {
 public:
  static constexpr int kAbsent = -1;

  Trellis(ConvCode code, int L) : code_(std::move(code)), L_(L) {
    if (L < 1) throw SizeError("Trellis: L must be positive");
    const std::uint32_t S = code_.num_states();
    table_.resize(static_cast<std::size_t>(S) * 2);
    for (std::uint32_t s = 0; s < S; ++s) {
      for (int u = 0; u < 2; ++u) {
        const std::uint32_t out = code_.output(s, u);
        table_[s * 2 + u] = {code_.next_state(s, u), out, std::popcount(out)};
      }
    }
    dstar_.assign(static_cast<std::size_t>(num_levels()) * S, kAbsent);
  }

  const ConvCode& code() const { return code_; }
  int L() const { return L_; }
  int m() const { return code_.m(); }
  int n_out() const { return code_.n_out(); }
  std::uint32_t num_states() const { return code_.num_states(); }
  /// Levels 0..L+m inclusive.
  int num_levels() const { return L_ + code_.m() + 1; }
  /// Code length N = n(L+m).
  int code_length() const { return n_out() * (L_ + code_.m()); }

  /// Inputs allowed when leaving `level`: {0,1} below L, {0} after.
  int num_inputs(int level) const { return level < L_ ? 2 : 1; }

  const Transition& transition(std::uint32_t state, int input) const { return table_[state * 2 + input]; }

  int dstar(int level, std::uint32_t state) const { return dstar_[index(level, state)]; }
  bool reachable(int level, std::uint32_t state) const { return dstar(level, state) != kAbsent; }

  std::vector<std::uint32_t> states_at(int level) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t s = 0; s < num_states(); ++s) {
      if (reachable(level, s)) out.push_back(s);
    }
    return out;
  }

  /// Overwrites one table entry. Only meant for negative controls.
  void set_dstar(int level, std::uint32_t state, int value) { dstar_[index(level, state)] = value; }

  std::size_t index(int level, std::uint32_t state) const {
    return static_cast<std::size_t>(level) * num_states() + state;
  }

 private:
  ConvCode code_;
  int L_;
  std::vector<Transition> table_;
  std::vector<int> dstar_;
};

/// Forward DP: d*_0(0) = 0 and d*_j'(l+1) = min over (j -> j') of d*_j(l) + w.
/// Unreachable nodes keep the sentinel.
inline void compute_dstar(Trellis& t) {
  for (int level = 0; level < t.num_levels(); ++level) {
    for (std::uint32_t s = 0; s < t.num_states(); ++s) t.set_dstar(level, s, Trellis::kAbsent);
  }
  t.set_dstar(0, 0, 0);
  for (int level = 0; level + 1 < t.num_levels(); ++level) {
    for (std::uint32_t s = 0; s < t.num_states(); ++s) {
      const int here = t.dstar(level, s);
      if (here == Trellis::kAbsent) continue;
      for (int u = 0; u < t.num_inputs(level); ++u) {
        const auto& tr = t.transition(s, u);
        const int cand = here + tr.weight;
        const int cur = t.dstar(level + 1, tr.next_state);
        if (cur == Trellis::kAbsent || cand < cur) t.set_dstar(level + 1, tr.next_state, cand);
      }
    }
  }
}

/// Trellis with reachability and d* populated.
inline Trellis build_trellis(const ConvCode& code, int L) {
  Trellis t(code, L);
  compute_dstar(t);
  return t;
}

struct TreeSuccessor {
  std::vector<std::uint8_t> prefix;
  std::uint8_t bit;
};

/// Children of a code-tree node: two below level k, one (the parity bit
/// fixed by the first k bits) from level k on.
inline std::vector<TreeSuccessor> code_tree_successors(const BlockCode& code, std::span<const std::uint8_t> path) {
  const int level = static_cast<int>(path.size());
  if (level >= code.n()) throw DomainError("code_tree_successors: path already at a leaf");
  std::vector<TreeSuccessor> out;
  auto extend = [&](std::uint8_t b) {
    TreeSuccessor s{std::vector<std::uint8_t>(path.begin(), path.end()), b};
    s.prefix.push_back(b);
    out.push_back(std::move(s));
  };
  if (level < code.k()) {
    extend(0);
    extend(1);
  } else {
    std::uint64_t info = 0;
    for (int i = 0; i < code.k(); ++i) info |= static_cast<std::uint64_t>(path[i] & 1) << i;
    extend(static_cast<std::uint8_t>(code.code_bit(info, level)));
  }
  return out;
}

}  // namespace seqdec
