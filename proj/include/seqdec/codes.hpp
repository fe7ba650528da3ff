#pragma once

// Binary linear block codes (systematic, n <= 64) and rate-1/n feedforward
// convolutional codes.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqdec/errors.hpp"

namespace seqdec {

struct Codeword {
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits[i]; }

  std::size_t weight() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
  }

  std::string to_string() const {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
  }

  friend bool operator==(const Codeword&, const Codeword&) = default;
};

inline Codeword operator^(const Codeword& a, const Codeword& b) {
  if (a.size() != b.size()) throw LengthMismatch("codeword xor: length mismatch");
  Codeword out{a.bits};
  for (std::size_t i = 0; i < out.bits.size(); ++i) out.bits[i] ^= b.bits[i];
  return out;
}

inline std::vector<std::uint8_t> bits_from_string(std::string_view s) {
  std::vector<std::uint8_t> out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '0' || c == '1') {
      out.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (c != ' ' && c != '_') {
      throw DomainError(std::string("bit string contains '") + c + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Block codes
// ---------------------------------------------------------------------------

/// (n, k) binary linear code in systematic [I | P] form. Bit j of a row
/// (and of every packed codeword) is codeword position j.
class BlockCode {
 public:
  BlockCode(std::string name, int n, int k, std::vector<std::uint64_t> rows)
      : name_(std::move(name)), n_(n), k_(k), rows_(std::move(rows)) {
    if (n < 1 || n > 64) throw SizeError("BlockCode: n must be in [1, 64]");
    if (k < 1 || k > n) throw SizeError("BlockCode: k must be in [1, n]");
    if (static_cast<int>(rows_.size()) != k) throw LengthMismatch("BlockCode: need k generator rows");
    const std::uint64_t mask = n == 64 ? ~0ULL : ((1ULL << n) - 1);
    const std::uint64_t info_mask = k == 64 ? ~0ULL : ((1ULL << k) - 1);
    for (int i = 0; i < k; ++i) {
      if (rows_[i] & ~mask) throw DomainError("BlockCode: row wider than n");
      if ((rows_[i] & info_mask) != (1ULL << i)) {
        throw DomainError("BlockCode: generator is not systematic in its first k columns");
      }
    }
    columns_.assign(n_, 0);
    for (int j = 0; j < n_; ++j) {
      for (int i = 0; i < k_; ++i) {
        if ((rows_[i] >> j) & 1ULL) columns_[j] |= 1ULL << i;
      }
    }
  }

  const std::string& name() const { return name_; }
  int n() const { return n_; }
  int k() const { return k_; }
  double rate() const { return static_cast<double>(k_) / n_; }
  const std::vector<std::uint64_t>& rows() const { return rows_; }

  /// Rows that contribute to position j, as a k-bit mask.
  std::uint64_t column_mask(int j) const { return columns_[j]; }

  /// Bit j of the codeword generated by the packed information word.
  int code_bit(std::uint64_t info, int j) const {
    return std::popcount(info & columns_[j]) & 1;
  }

  std::uint64_t encode_packed(std::uint64_t info) const {
    std::uint64_t cw = 0;
    for (int i = 0; i < k_; ++i) {
      if ((info >> i) & 1ULL) cw ^= rows_[i];
    }
    return cw;
  }

  Codeword unpack(std::uint64_t cw) const {
    Codeword out;
    out.bits.resize(n_);
    for (int j = 0; j < n_; ++j) out.bits[j] = static_cast<std::uint8_t>((cw >> j) & 1ULL);
    return out;
  }

 private:
  std::string name_;
  int n_;
  int k_;
  std::vector<std::uint64_t> rows_;
  std::vector<std::uint64_t> columns_;
};

/// Gauss-Jordan over GF(2) making columns 0..k-1 the identity. No column
/// swaps: throws if the leading k columns are not an information set.
inline std::vector<std::uint64_t> reduce_to_systematic(std::vector<std::uint64_t> rows, int k) {
  if (static_cast<int>(rows.size()) != k) throw LengthMismatch("reduce_to_systematic: need k rows");
  for (int col = 0; col < k; ++col) {
    int pivot = -1;
    for (int r = col; r < k; ++r) {
      if ((rows[r] >> col) & 1ULL) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw DomainError("reduce_to_systematic: first k columns are not an information set");
    std::swap(rows[col], rows[pivot]);
    for (int r = 0; r < k; ++r) {
      if (r != col && ((rows[r] >> col) & 1ULL)) rows[r] ^= rows[col];
    }
  }
  return rows;
}

/// Number of codewords of each weight 0..n, by Gray-code enumeration.
inline std::vector<std::uint64_t> weight_distribution(const BlockCode& code) {
  if (code.k() > 30) throw SizeError("weight_distribution: k > 30");
  std::vector<std::uint64_t> dist(code.n() + 1, 0);
  std::uint64_t cw = 0;
  dist[0] = 1;
  const std::uint64_t count = 1ULL << code.k();
  for (std::uint64_t i = 1; i < count; ++i) {
    cw ^= code.rows()[std::countr_zero(i)];
    ++dist[std::popcount(cw)];
  }
  return dist;
}

inline int minimum_distance(const BlockCode& code) {
  const auto dist = weight_distribution(code);
  for (std::size_t w = 1; w < dist.size(); ++w) {
    if (dist[w] != 0) return static_cast<int>(w);
  }
  return 0;
}

namespace detail {

// Generator rows x^i g(x), i = 0..k-1, of a cyclic code, each extended with
// an overall parity bit at position n_cyclic.
inline std::vector<std::uint64_t> extended_cyclic_rows(std::uint64_t generator_poly, int n_cyclic, int k) {
  std::vector<std::uint64_t> rows(k);
  for (int i = 0; i < k; ++i) {
    const std::uint64_t r = generator_poly << i;
    rows[i] = r | (static_cast<std::uint64_t>(std::popcount(r) & 1) << n_cyclic);
  }
  return rows;
}

// GF(2^23) with the primitive trinomial x^23 + x^5 + 1.
struct Gf2p23 {
  static constexpr std::uint32_t kModulus = (1U << 23) | (1U << 5) | 1U;
  static constexpr std::uint32_t kOrder = (1U << 23) - 1;

  static std::uint32_t mul(std::uint32_t a, std::uint32_t b) {
    std::uint64_t acc = 0;
    for (int i = 0; i < 23; ++i) {
      if ((b >> i) & 1U) acc ^= static_cast<std::uint64_t>(a) << i;
    }
    for (int d = 45; d >= 23; --d) {
      if ((acc >> d) & 1ULL) acc ^= static_cast<std::uint64_t>(kModulus) << (d - 23);
    }
    return static_cast<std::uint32_t>(acc);
  }

  static std::uint32_t pow(std::uint32_t a, std::uint64_t e) {
    std::uint32_t result = 1;
    while (e) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }
};

// Generator polynomial of the (47, 24) quadratic-residue code:
// prod over quadratic residues r mod 47 of (x - beta^r), beta a primitive
// 47th root of unity in GF(2^23).
inline std::uint64_t qr47_generator_poly() {
  using F = Gf2p23;
  static_assert(F::kOrder % 47 == 0);
  const std::uint32_t beta = F::pow(2, F::kOrder / 47);
  if (beta == 1 || F::pow(beta, 47) != 1) throw std::logic_error("qr47: bad 47th root of unity");

  std::vector<int> residues;
  for (int i = 1; i < 47; ++i) {
    const int r = (i * i) % 47;
    if (std::find(residues.begin(), residues.end(), r) == residues.end()) residues.push_back(r);
  }
  if (residues.size() != 23) throw std::logic_error("qr47: expected 23 quadratic residues");

  std::vector<std::uint32_t> poly{1};  // coefficient of x^i at index i
  for (int r : residues) {
    const std::uint32_t root = F::pow(beta, static_cast<std::uint64_t>(r));
    std::vector<std::uint32_t> next(poly.size() + 1, 0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] ^= poly[i];
      next[i] ^= F::mul(poly[i], root);
    }
    poly = std::move(next);
  }
  std::uint64_t g = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (poly[i] > 1) throw std::logic_error("qr47: generator has coefficients outside GF(2)");
    g |= static_cast<std::uint64_t>(poly[i]) << i;
  }
  return g;
}

}  // namespace detail

/// (24, 12) extended Golay code from g(x) = 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11.
/// Checked once against minimum distance 8.
inline BlockCode build_extended_golay() {
  static const BlockCode code = [] {
    constexpr std::uint64_t g = 0xC75;
    BlockCode c("golay24", 24, 12, reduce_to_systematic(detail::extended_cyclic_rows(g, 23, 12), 12));
    if (minimum_distance(c) != 8) throw std::logic_error("golay24: minimum distance is not 8");
    return c;
  }();
  return code;
}

/// (48, 24) extended quadratic-residue code. Checked once against minimum
/// distance 12 (2^24-codeword enumeration).
inline BlockCode build_extended_qr48() {
  static const BlockCode code = [] {
    const std::uint64_t g = detail::qr47_generator_poly();
    BlockCode c("qr48", 48, 24, reduce_to_systematic(detail::extended_cyclic_rows(g, 47, 24), 24));
    if (minimum_distance(c) != 12) throw std::logic_error("qr48: minimum distance is not 12");
    return c;
  }();
  return code;
}

inline Codeword encode_block(const BlockCode& code, std::span<const std::uint8_t> info) {
  if (static_cast<int>(info.size()) != code.k()) throw LengthMismatch("encode_block: info length != k");
  std::uint64_t packed = 0;
  for (int i = 0; i < code.k(); ++i) {
    if (info[i] > 1) throw DomainError("encode_block: info must be binary");
    packed |= static_cast<std::uint64_t>(info[i]) << i;
  }
  return code.unpack(code.encode_packed(packed));
}

// ---------------------------------------------------------------------------
// Convolutional codes
// ---------------------------------------------------------------------------

/// (n, 1, m) feedforward convolutional code. taps[i][j] multiplies the input
/// delayed by j steps on output i; taps[i][0] is the current-input tap.
class ConvCode {
 public:
  ConvCode(std::string name, int m, std::vector<std::vector<std::uint8_t>> taps, int k_in = 1)
      : name_(std::move(name)), m_(m), k_in_(k_in), taps_(std::move(taps)) {
    if (k_in_ != 1) throw ConfigError("ConvCode: only k = 1 encoders are supported");
    if (m_ < 1 || m_ > 24) throw SizeError("ConvCode: memory order must be in [1, 24]");
    if (taps_.empty() || taps_.size() > 32) throw SizeError("ConvCode: need 1..32 outputs");
    bool any_current = false;
    tap_masks_.reserve(taps_.size());
    for (const auto& t : taps_) {
      if (static_cast<int>(t.size()) != m_ + 1) throw TapLengthError("ConvCode: every tap vector needs m+1 entries");
      std::uint32_t mask = 0;
      for (int j = 0; j <= m_; ++j) {
        if (t[j] > 1) throw DomainError("ConvCode: taps must be binary");
        mask |= static_cast<std::uint32_t>(t[j]) << j;
      }
      any_current = any_current || t[0] == 1;
      tap_masks_.push_back(mask);
    }
    if (!any_current) throw DomainError("ConvCode: no output taps the current input");
  }

  const std::string& name() const { return name_; }
  int n_out() const { return static_cast<int>(taps_.size()); }
  int k_in() const { return k_in_; }
  int m() const { return m_; }
  std::uint32_t num_states() const { return 1U << m_; }
  double rate() const { return static_cast<double>(k_in_) / n_out(); }
  const std::vector<std::vector<std::uint8_t>>& taps() const { return taps_; }

  /// State bit 0 holds the most recent past input.
  std::uint32_t next_state(std::uint32_t state, int input) const {
    return ((state << 1) | static_cast<std::uint32_t>(input)) & (num_states() - 1);
  }

  /// Output block for `input` entering `state`; bit i = output i.
  std::uint32_t output(std::uint32_t state, int input) const {
    const std::uint32_t reg = static_cast<std::uint32_t>(input) | (state << 1);
    std::uint32_t out = 0;
    for (std::size_t i = 0; i < tap_masks_.size(); ++i) {
      out |= static_cast<std::uint32_t>(std::popcount(reg & tap_masks_[i]) & 1) << i;
    }
    return out;
  }

 private:
  std::string name_;
  int m_;
  int k_in_;
  std::vector<std::vector<std::uint8_t>> taps_;
  std::vector<std::uint32_t> tap_masks_;
};

/// Left-justified octal generators: each digit expands MSB-first to three
/// bits, the first m+1 bits are the taps and the remaining padding bits
/// (fewer than three) must be zero. Shorter expansions are zero-padded.
inline ConvCode parse_octal_generators(const std::vector<std::string>& octal, int m, std::string name = "") {
  if (m < 1) throw SizeError("parse_octal_generators: m must be positive");
  const std::size_t width = static_cast<std::size_t>(m) + 1;
  std::vector<std::vector<std::uint8_t>> taps;
  for (const auto& s : octal) {
    if (s.empty()) throw DomainError("parse_octal_generators: empty generator");
    std::vector<std::uint8_t> bits;
    for (char c : s) {
      if (c < '0' || c > '7') throw DomainError("parse_octal_generators: '" + s + "' is not octal");
      const int v = c - '0';
      bits.push_back(static_cast<std::uint8_t>((v >> 2) & 1));
      bits.push_back(static_cast<std::uint8_t>((v >> 1) & 1));
      bits.push_back(static_cast<std::uint8_t>(v & 1));
    }
    if (bits.size() > width) {
      const bool padding_clear = bits.size() - width < 3 &&
                                 std::all_of(bits.begin() + static_cast<long>(width), bits.end(),
                                             [](std::uint8_t b) { return b == 0; });
      if (!padding_clear) {
        throw TapLengthError("parse_octal_generators: '" + s + "' does not fit " + std::to_string(width) +
                             " taps; supply explicit tap vectors");
      }
      bits.resize(width);
    }
    bits.resize(width, 0);
    taps.push_back(std::move(bits));
  }
  return ConvCode(std::move(name), m, std::move(taps));
}

/// Shift-register encoding of `info` followed by m zero termination inputs.
inline Codeword encode_conv(const ConvCode& code, std::span<const std::uint8_t> info) {
  if (info.empty()) throw LengthMismatch("encode_conv: info must be non-empty");
  const std::size_t steps = info.size() + static_cast<std::size_t>(code.m());
  Codeword out;
  out.bits.reserve(steps * code.n_out());
  std::uint32_t state = 0;
  for (std::size_t t = 0; t < steps; ++t) {
    const int u = t < info.size() ? info[t] : 0;
    if (u > 1) throw DomainError("encode_conv: info must be binary");
    const std::uint32_t block = code.output(state, u);
    for (int i = 0; i < code.n_out(); ++i) out.bits.push_back(static_cast<std::uint8_t>((block >> i) & 1U));
    state = code.next_state(state, u);
  }
  return out;
}

/// The (3,1,2) code with taps 110, 101, 111 used to illustrate trellises.
inline ConvCode build_example_312() { return parse_octal_generators({"6", "5", "7"}, 2, "conv312"); }

/// (2,1,6) code, generators 634, 564 (octal).
inline ConvCode build_conv216() { return parse_octal_generators({"634", "564"}, 6, "conv216"); }

/// (2,1,16) code. The published octal pair 1632044 / 1145734 does not fit
/// 17 left-justified taps; these are its 19 significant bits with the two
/// trailing zeros removed.
inline ConvCode build_conv2116() {
  return ConvCode("conv2116", 16,
                  {bits_from_string("11100110100001001"), bits_from_string("10011001011110111")});
}

}  // namespace seqdec
