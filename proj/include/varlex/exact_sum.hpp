#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>

namespace varlex {

// Correctly rounded floating-point summation. Addends are accumulated exactly
// into 32-bit limbs of a fixed-point superaccumulator spanning the whole double
// range, and the exact total is rounded once (half-even) when read. The result
// depends only on the multiset of addends, never on their order, so two code
// paths that visit the same atoms in different orders produce bit-identical
// sums. Non-finite addends propagate as in IEEE addition.
class ExactSum {
 public:
  ExactSum() = default;

  void add(double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    const auto biased = static_cast<int>((bits >> 52) & 0x7ff);
    if (biased == 0x7ff) {
      special_ += x;
      return;
    }
    std::uint64_t m = bits & ((std::uint64_t{1} << 52) - 1);
    if (m == 0 && biased == 0) {
      return;
    }
    int pos = 0;  // bit offset of m's lsb above 2^-1074
    if (biased != 0) {
      m |= std::uint64_t{1} << 52;
      pos = biased - 1;
    }
    const int limb = pos >> 5;
    const auto wide = static_cast<unsigned __int128>(m) << (pos & 31);
    const auto l0 = static_cast<std::int64_t>(static_cast<std::uint64_t>(wide) & kMask);
    const auto l1 = static_cast<std::int64_t>(static_cast<std::uint64_t>(wide >> 32) & kMask);
    const auto l2 = static_cast<std::int64_t>(static_cast<std::uint64_t>(wide >> 64));
    if (bits >> 63) {
      limbs_[limb] -= l0;
      limbs_[limb + 1] -= l1;
      limbs_[limb + 2] -= l2;
    } else {
      limbs_[limb] += l0;
      limbs_[limb + 1] += l1;
      limbs_[limb + 2] += l2;
    }
    lo_ = std::min(lo_, limb);
    hi_ = std::max(hi_, limb + 2);
    if (++pending_ == kNormalizeEvery) {
      normalize(limbs_, lo_, hi_);
      pending_ = 0;
    }
  }

  ExactSum& operator+=(double x) {
    add(x);
    return *this;
  }

  void reset() {
    if (lo_ <= hi_) {
      std::fill(limbs_.begin() + lo_, limbs_.begin() + hi_ + 1, 0);
    }
    lo_ = kLimbs;
    hi_ = -1;
    pending_ = 0;
    special_ = 0.0;
  }

  [[nodiscard]] double value() const {
    if (special_ != 0.0 || std::isnan(special_)) {
      return special_;
    }
    if (lo_ > hi_) {
      return 0.0;
    }
    auto limbs = limbs_;
    int lo = lo_;
    int hi = hi_;
    normalize(limbs, lo, hi);
    // Each limb times its scale is an exact double; round their sum once.
    Partials p;
    for (int i = lo; i <= hi; ++i) {
      if (limbs[i] != 0) {
        const double v = std::ldexp(static_cast<double>(limbs[i]), 32 * i - 1074);
        if (std::isinf(v)) {
          // Out of range; the top limb carries the sign of the total.
          return std::copysign(v, static_cast<double>(limbs[hi]));
        }
        p.add(v);
      }
    }
    const double r = p.value();
    return std::isnan(r) ? std::copysign(HUGE_VAL, static_cast<double>(limbs[hi])) : r;
  }

 private:
  static constexpr int kLimbs = 68;
  static constexpr std::uint64_t kMask = 0xffffffffULL;
  static constexpr std::int64_t kMaskSigned = 0xffffffffLL;
  static constexpr std::uint32_t kNormalizeEvery = 1u << 30;

  // Carries every limb below the top into [-2^31, 2^31) so small totals of
  // either sign stay in a few limbs.
  static void normalize(std::array<std::int64_t, kLimbs>& limbs, int& lo, int& hi) {
    std::int64_t carry = 0;
    for (int i = lo; i < kLimbs; ++i) {
      const std::int64_t v = limbs[i] + carry;
      if (i == kLimbs - 1) {
        limbs[i] = v;
        break;
      }
      const auto low = static_cast<std::int64_t>(static_cast<std::int32_t>(v & kMaskSigned));
      limbs[i] = low;
      carry = (v - low) >> 32;
      if (i >= hi && carry == 0) {
        break;
      }
    }
    while (hi < kLimbs - 1 && limbs[hi + 1] != 0) {
      ++hi;
    }
    while (hi >= lo && limbs[hi] == 0) {
      --hi;
    }
    while (lo <= hi && limbs[lo] == 0) {
      ++lo;
    }
    if (lo > hi) {
      lo = kLimbs;
      hi = -1;
    }
  }

  // Shewchuk's non-overlapping partials with the half-even correction, used
  // on the handful of limb values only.
  struct Partials {
    std::array<double, kLimbs + 1> part{};
    std::size_t count = 0;

    void add(double x) {
      std::size_t kept = 0;
      for (std::size_t j = 0; j < count; ++j) {
        const double y = part[j];
        const double s = x + y;
        const double yv = s - x;
        const double e = (x - (s - yv)) + (y - yv);
        if (e != 0.0) {
          part[kept++] = e;
        }
        x = s;
      }
      part[kept] = x;
      count = kept + 1;
    }

    [[nodiscard]] double value() const {
      if (count == 0) {
        return 0.0;
      }
      std::size_t n = count - 1;
      double hi = part[n];
      double lo = 0.0;
      while (n > 0) {
        const double x = hi;
        --n;
        const double y = part[n];
        hi = x + y;
        lo = y - (hi - x);
        if (lo != 0.0) {
          break;
        }
      }
      if (n > 0 && ((lo < 0.0 && part[n - 1] < 0.0) || (lo > 0.0 && part[n - 1] > 0.0))) {
        const double y = lo * 2.0;
        const double x = hi + y;
        if (y == x - hi) {
          hi = x;
        }
      }
      return hi;
    }
  };

  std::array<std::int64_t, kLimbs> limbs_{};
  int lo_ = kLimbs;
  int hi_ = -1;
  std::uint32_t pending_ = 0;
  double special_ = 0.0;
};

template <class Range>
double exact_sum(const Range& values) {
  ExactSum acc;
  for (const double v : values) {
    acc.add(v);
  }
  return acc.value();
}

}  // namespace varlex
