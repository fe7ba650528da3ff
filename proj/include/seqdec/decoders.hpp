#pragma once

// Sequential ML decoders with branch-metric instrumentation (GDA over the
// code tree of a block code, MLSDA over a terminated trellis) and the
// exhaustive / Viterbi oracles used to check them.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <unordered_map>
#include <vector>

#include "seqdec/channel.hpp"
#include "seqdec/codes.hpp"
#include "seqdec/trellis.hpp"

namespace seqdec {

struct DecodeOutcome {
  Codeword decoded;
  std::uint64_t branch_computations = 0;        // information levels only, tail excluded
  std::uint64_t branch_computations_total = 0;  // every branch metric evaluated
  std::uint64_t extensions = 0;
  double metric = 0.0;              // GDA: differential f of the result; MLSDA: zeta
  double max_extended_metric = 0.0;  // largest metric of any extended path
  bool overflow = false;            // extension cap hit, `decoded` is empty
  std::uint64_t closed_discards = 0;  // MLSDA successors dropped at closed nodes
};

// ---------------------------------------------------------------------------
// GDA
// ---------------------------------------------------------------------------

class GdaDecoder {
 public:
  explicit GdaDecoder(const BlockCode& code, std::uint64_t max_extensions = 0)
      : code_(code), max_extensions_(max_extensions) {
    if (code.k() > 63) throw SizeError("GdaDecoder: k must be below 64");
  }

  DecodeOutcome decode(const LlrVector& l) {
    const int n = code_.n();
    const int k = code_.k();
    if (static_cast<int>(l.phi.size()) != n) throw LengthMismatch("gda_decode: phi length != n");

    // differential metric of bit b at position j: (phi - (-1)^b)^2 - (|phi| - 1)^2
    bm_.resize(2 * static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double p = l.phi[j];
      const double base = (std::abs(p) - 1.0) * (std::abs(p) - 1.0);
      bm_[2 * j] = (p - 1.0) * (p - 1.0) - base;
      bm_[2 * j + 1] = (p + 1.0) * (p + 1.0) - base;
    }

    heap_.clear();
    std::uint64_t seq = 0;
    push({0.0, seq++, 0, 0});

    DecodeOutcome out;
    while (true) {
      std::pop_heap(heap_.begin(), heap_.end(), Later{});
      const Node top = heap_.back();
      heap_.pop_back();

      if (top.level == n) {
        out.decoded = code_.unpack(code_.encode_packed(top.info));
        out.metric = top.f;
        return out;
      }
      if (max_extensions_ != 0 && out.extensions >= max_extensions_) {
        out.overflow = true;
        return out;
      }

      ++out.extensions;
      out.max_extended_metric = std::max(out.max_extended_metric, top.f);
      const int j = top.level;
      if (j < k) {
        out.branch_computations += 2;
        out.branch_computations_total += 2;
        Node c0{top.f + bm_[2 * j], 0, top.info, j + 1};
        Node c1{top.f + bm_[2 * j + 1], 0, top.info | (1ULL << j), j + 1};
        // insert in ascending f so equal keys stay FIFO
        if (c1.f < c0.f) std::swap(c0, c1);
        c0.seq = seq++;
        c1.seq = seq++;
        push(c0);
        push(c1);
      } else {
        out.branch_computations_total += 1;
        const int b = code_.code_bit(top.info, j);
        push({top.f + bm_[2 * j + b], seq++, top.info, j + 1});
      }
    }
  }

 private:
  struct Node {
    double f;
    std::uint64_t seq;
    std::uint64_t info;  // bit i = information bit i (only the first min(level, k) are set)
    int level;
  };

  // max-heap comparator yielding the smallest (f, seq) on top
  struct Later {
    bool operator()(const Node& a, const Node& b) const {
      if (a.f != b.f) return a.f > b.f;
      return a.seq > b.seq;
    }
  };

  void push(const Node& nd) {
    heap_.push_back(nd);
    std::push_heap(heap_.begin(), heap_.end(), Later{});
  }

  const BlockCode& code_;
  std::uint64_t max_extensions_;
  std::vector<double> bm_;
  std::vector<Node> heap_;
};

inline DecodeOutcome gda_decode(const BlockCode& code, const LlrVector& l, std::uint64_t max_extensions = 0) {
  GdaDecoder dec(code, max_extensions);
  return dec.decode(l);
}

/// sum_j (phi_j - (-1)^{x_j})^2
inline double squared_distance(const LlrVector& l, const Codeword& x) {
  if (l.phi.size() != x.size()) throw LengthMismatch("squared_distance: length mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double t = l.phi[j] - (x[j] ? -1.0 : 1.0);
    s += t * t;
  }
  return s;
}

/// Exhaustive minimum-distance decoding; ties go to the lexicographically
/// smallest codeword (position 0 most significant).
inline Codeword brute_force_ml_block(const BlockCode& code, const LlrVector& l) {
  if (code.k() > 24) throw SizeError("brute_force_ml_block: k > 24");
  if (static_cast<int>(l.phi.size()) != code.n()) throw LengthMismatch("brute_force_ml_block: phi length != n");
  Codeword best;
  double best_metric = std::numeric_limits<double>::infinity();
  const std::uint64_t count = 1ULL << code.k();
  for (std::uint64_t info = 0; info < count; ++info) {
    Codeword cw = code.unpack(code.encode_packed(info));
    const double m = squared_distance(l, cw);
    if (m < best_metric || (m == best_metric && cw.bits < best.bits)) {
      best_metric = m;
      best = std::move(cw);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// MLSDA
// ---------------------------------------------------------------------------

namespace detail {

// Per-trial bookkeeping for every (level, state) node. Dense with
// generation stamps for small trellises, hashed otherwise.
struct NodeRecord {
  double zeta = 0.0;
  std::uint64_t seq = 0;      // sequence number of the resident open path
  std::uint32_t parent = 0;   // predecessor state of the resident path
  std::uint8_t input = 0;
  bool closed = false;
};

class NodeTable {
 public:
  static constexpr std::size_t kDenseLimit = std::size_t{1} << 22;

  explicit NodeTable(std::size_t size) : dense_(size <= kDenseLimit) {
    if (dense_) {
      records_.resize(size);
      stamps_.assign(size, 0);
    }
  }

  void reset() {
    if (dense_) {
      if (++generation_ == 0) {
        std::fill(stamps_.begin(), stamps_.end(), 0);
        generation_ = 1;
      }
    } else {
      sparse_.clear();
    }
  }

  NodeRecord* find(std::size_t idx) {
    if (dense_) return stamps_[idx] == generation_ ? &records_[idx] : nullptr;
    auto it = sparse_.find(idx);
    return it == sparse_.end() ? nullptr : &it->second;
  }

  NodeRecord& create(std::size_t idx) {
    if (dense_) {
      stamps_[idx] = generation_;
      records_[idx] = NodeRecord{};
      return records_[idx];
    }
    return sparse_[idx] = NodeRecord{};
  }

 private:
  bool dense_;
  std::uint32_t generation_ = 0;
  std::vector<NodeRecord> records_;
  std::vector<std::uint32_t> stamps_;
  std::unordered_map<std::size_t, NodeRecord> sparse_;
};

}  // namespace detail

/// Zeta metric of a full code path: sum (y_j xor x_j) |phi_j|.
inline double zeta_metric(const LlrVector& l, const Codeword& x) {
  if (l.phi.size() != x.size()) throw LengthMismatch("zeta_metric: length mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const int y = l.phi[j] < 0.0 ? 1 : 0;
    if (y != x[j]) s += std::abs(l.phi[j]);
  }
  return s;
}

/// Two-stack trellis search. Reusable across trials; not thread-safe.
class MlsdaDecoder {
 public:
  explicit MlsdaDecoder(const Trellis& trellis)
      : t_(trellis), nodes_(static_cast<std::size_t>(trellis.num_levels()) * trellis.num_states()) {}

  DecodeOutcome decode(const LlrVector& l) {
    const int n = t_.n_out();
    const int L = t_.L();
    const int last = L + t_.m();
    if (static_cast<int>(l.phi.size()) != t_.code_length()) throw LengthMismatch("mlsda_decode: phi length != N");
    const std::uint64_t per_extension = std::uint64_t{1} << t_.code().k_in();

    ymask_.resize(last);
    absphi_.resize(l.phi.size());
    for (int lv = 0; lv < last; ++lv) {
      std::uint32_t y = 0;
      for (int i = 0; i < n; ++i) {
        const double p = l.phi[static_cast<std::size_t>(lv) * n + i];
        if (p < 0.0) y |= 1U << i;
        absphi_[static_cast<std::size_t>(lv) * n + i] = std::abs(p);
      }
      ymask_[lv] = y;
    }

    nodes_.reset();
    open_.clear();
    std::uint64_t seq = 0;
    {
      auto& root = nodes_.create(t_.index(0, 0));
      root.seq = seq;
      open_.push_back({0.0, seq++, 0, 0});
    }

    DecodeOutcome out;
    while (!open_.empty()) {
      std::pop_heap(open_.begin(), open_.end(), Later{});
      const Entry top = open_.back();
      open_.pop_back();

      auto* rec = nodes_.find(t_.index(top.level, top.state));
      if (rec == nullptr || rec->closed || rec->seq != top.seq) continue;  // stale entry
      rec->closed = true;

      if (top.level == last && top.state == 0) {
        out.metric = top.zeta;
        out.decoded = trace_back(last);
        return out;
      }

      ++out.extensions;
      out.max_extended_metric = std::max(out.max_extended_metric, top.zeta);
      const int inputs = t_.num_inputs(top.level);
      if (top.level < L) {
        out.branch_computations += per_extension;
        out.branch_computations_total += per_extension;
      } else {
        out.branch_computations_total += 1;
      }
      for (int u = 0; u < inputs; ++u) {
        const auto& tr = t_.transition(top.state, u);
        const double z = top.zeta + branch_metric(top.level, tr.output);
        const int lv = top.level + 1;
        const std::size_t idx = t_.index(lv, tr.next_state);
        auto* dst = nodes_.find(idx);
        if (dst != nullptr) {
          if (dst->closed) {
            ++out.closed_discards;
            continue;
          }
          if (!(z < dst->zeta)) continue;  // ties keep the incumbent
        } else {
          dst = &nodes_.create(idx);
        }
        dst->zeta = z;
        dst->seq = seq;
        dst->parent = top.state;
        dst->input = static_cast<std::uint8_t>(u);
        open_.push_back({z, seq++, lv, tr.next_state});
        std::push_heap(open_.begin(), open_.end(), Later{});
      }
    }
    throw std::logic_error("mlsda_decode: open stack emptied before reaching the goal");
  }

 private:
  struct Entry {
    double zeta;
    std::uint64_t seq;
    int level;
    std::uint32_t state;
  };

  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.zeta != b.zeta) return a.zeta > b.zeta;
      return a.seq > b.seq;
    }
  };

  double branch_metric(int level, std::uint32_t output) const {
    std::uint32_t diff = output ^ ymask_[level];
    double s = 0.0;
    const std::size_t base = static_cast<std::size_t>(level) * t_.n_out();
    while (diff) {
      const int i = std::countr_zero(diff);
      s += absphi_[base + i];
      diff &= diff - 1;
    }
    return s;
  }

  Codeword trace_back(int last) {
    inputs_.assign(last, 0);
    std::uint32_t state = 0;
    for (int lv = last; lv > 0; --lv) {
      const auto* rec = nodes_.find(t_.index(lv, state));
      inputs_[lv - 1] = rec->input;
      state = rec->parent;
    }
    inputs_.resize(t_.L());
    return encode_conv(t_.code(), inputs_);
  }

  const Trellis& t_;
  detail::NodeTable nodes_;
  std::vector<Entry> open_;
  std::vector<std::uint32_t> ymask_;
  std::vector<double> absphi_;
  std::vector<std::uint8_t> inputs_;
};

inline DecodeOutcome mlsda_decode(const Trellis& trellis, const LlrVector& l) {
  MlsdaDecoder dec(trellis);
  return dec.decode(l);
}

struct ViterbiResult {
  Codeword decoded;
  double metric;
};

/// Forward dynamic program on zeta; returns the survivor into the goal node.
/// Equal metrics keep the first candidate (lower predecessor state, input 0).
inline ViterbiResult viterbi_ml(const Trellis& t, const LlrVector& l) {
  if (static_cast<int>(l.phi.size()) != t.code_length()) throw LengthMismatch("viterbi_ml: phi length != N");
  const int n = t.n_out();
  const int last = t.L() + t.m();
  const std::uint32_t S = t.num_states();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cur(S, inf), next(S, inf);
  std::vector<std::uint32_t> parent(static_cast<std::size_t>(last + 1) * S, 0);
  std::vector<std::uint8_t> input(static_cast<std::size_t>(last + 1) * S, 0);
  cur[0] = 0.0;
  for (int lv = 0; lv < last; ++lv) {
    std::fill(next.begin(), next.end(), inf);
    for (std::uint32_t s = 0; s < S; ++s) {
      if (cur[s] == inf) continue;
      for (int u = 0; u < t.num_inputs(lv); ++u) {
        const auto& tr = t.transition(s, u);
        double bm = 0.0;
        for (int i = 0; i < n; ++i) {
          const double p = l.phi[static_cast<std::size_t>(lv) * n + i];
          const std::uint32_t y = p < 0.0 ? 1U : 0U;
          if (((tr.output >> i) & 1U) != y) bm += std::abs(p);
        }
        const double z = cur[s] + bm;
        if (z < next[tr.next_state]) {
          next[tr.next_state] = z;
          parent[t.index(lv + 1, tr.next_state)] = s;
          input[t.index(lv + 1, tr.next_state)] = static_cast<std::uint8_t>(u);
        }
      }
    }
    std::swap(cur, next);
  }
  std::vector<std::uint8_t> info(last, 0);
  std::uint32_t state = 0;
  for (int lv = last; lv > 0; --lv) {
    info[lv - 1] = input[t.index(lv, state)];
    state = parent[t.index(lv, state)];
  }
  info.resize(t.L());
  return {encode_conv(t.code(), info), cur[0]};
}

}  // namespace seqdec
