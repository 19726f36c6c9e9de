// Belnap's four values. The binary tables are derived from the truth order at
// compile time rather than written out by hand.

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fourdl {

enum class FourValue : std::uint8_t { F = 0, N = 1, B = 2, T = 3 };

inline constexpr std::array<FourValue, 4> all_four_values{FourValue::F, FourValue::N, FourValue::B,
                                                          FourValue::T};

namespace detail {

constexpr int idx(FourValue v) { return static_cast<int>(v); }

// Hasse diagram of <=t: f below everything, t above everything, b and n
// incomparable.
constexpr bool leq_t_table[4][4] = {
    //         F      N      B      T
    /* F */ {true, true, true, true},
    /* N */ {false, true, false, true},
    /* B */ {false, false, true, true},
    /* T */ {false, false, false, true},
};

// <=k: n at the bottom, b at the top.
constexpr bool leq_k_table[4][4] = {
    //         F      N      B      T
    /* F */ {true, false, true, false},
    /* N */ {true, true, true, true},
    /* B */ {false, false, true, false},
    /* T */ {false, false, true, true},
};

template <bool Meet>
constexpr std::array<std::array<FourValue, 4>, 4> bound_table() {
  std::array<std::array<FourValue, 4>, 4> out{};
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      // greatest lower (least upper) bound: the candidate bound that every
      // other candidate bound sits below (above)
      int best = -1;
      for (int c = 0; c < 4; ++c) {
        bool bound = Meet ? (leq_t_table[c][x] && leq_t_table[c][y]) : (leq_t_table[x][c] && leq_t_table[y][c]);
        if (!bound) continue;
        bool extremal = true;
        for (int d = 0; d < 4; ++d) {
          bool other = Meet ? (leq_t_table[d][x] && leq_t_table[d][y]) : (leq_t_table[x][d] && leq_t_table[y][d]);
          if (other && !(Meet ? leq_t_table[d][c] : leq_t_table[c][d])) extremal = false;
        }
        if (extremal) best = c;
      }
      out[x][y] = static_cast<FourValue>(best);
    }
  return out;
}

constexpr auto meet_table = bound_table<true>();
constexpr auto join_table = bound_table<false>();

constexpr FourValue neg_table[4] = {FourValue::T, FourValue::N, FourValue::B, FourValue::F};
constexpr FourValue cneg_table[4] = {FourValue::T, FourValue::B, FourValue::N, FourValue::F};

}  // namespace detail

constexpr bool leq_t(FourValue x, FourValue y) { return detail::leq_t_table[detail::idx(x)][detail::idx(y)]; }
constexpr bool leq_k(FourValue x, FourValue y) { return detail::leq_k_table[detail::idx(x)][detail::idx(y)]; }

constexpr FourValue neg4(FourValue v) { return detail::neg_table[detail::idx(v)]; }
constexpr FourValue cneg4(FourValue v) { return detail::cneg_table[detail::idx(v)]; }

constexpr FourValue meet_t(FourValue x, FourValue y) { return detail::meet_table[detail::idx(x)][detail::idx(y)]; }
constexpr FourValue join_t(FourValue x, FourValue y) { return detail::join_table[detail::idx(x)][detail::idx(y)]; }

constexpr FourValue imp4(FourValue x, FourValue y) { return join_t(cneg4(x), y); }

constexpr bool designated(FourValue v) { return v == FourValue::T || v == FourValue::B; }

// Evidence reading used by the model conversions.
constexpr FourValue from_evidence(bool positive, bool negative) {
  if (positive) return negative ? FourValue::B : FourValue::T;
  return negative ? FourValue::F : FourValue::N;
}
constexpr bool has_positive(FourValue v) { return v == FourValue::T || v == FourValue::B; }
constexpr bool has_negative(FourValue v) { return v == FourValue::F || v == FourValue::B; }

static_assert(meet_t(FourValue::B, FourValue::N) == FourValue::F);
static_assert(join_t(FourValue::B, FourValue::N) == FourValue::T);

inline char to_char(FourValue v) {
  constexpr char names[] = {'f', 'n', 'b', 't'};
  return names[detail::idx(v)];
}

inline std::string to_string(FourValue v) { return std::string(1, to_char(v)); }

inline FourValue four_value_from_char(char c) {
  switch (c) {
    case 't': return FourValue::T;
    case 'f': return FourValue::F;
    case 'b': return FourValue::B;
    case 'n': return FourValue::N;
    default: throw std::invalid_argument(std::string("not a four-valued constant: ") + c);
  }
}

}  // namespace fourdl
