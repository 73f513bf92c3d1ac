#pragma once

#include <complex>
#include <ostream>

namespace metasymp {

/// Integer modulo 4; the indices m, ν only ever enter through i^m, i^ν.
class IndexMod4 {
 public:
  constexpr IndexMod4() = default;
  constexpr IndexMod4(int v) : value_(((v % 4) + 4) % 4) {}  // NOLINT(implicit)

  constexpr int value() const { return value_; }
  constexpr int parity() const { return value_ & 1; }

  constexpr IndexMod4 operator+(IndexMod4 o) const { return IndexMod4(value_ + o.value_); }
  constexpr IndexMod4 operator-(IndexMod4 o) const { return IndexMod4(value_ - o.value_); }
  constexpr IndexMod4 operator-() const { return IndexMod4(-value_); }
  constexpr bool operator==(const IndexMod4&) const = default;

  std::complex<double> i_power() const {
    constexpr std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[value_];
  }

 private:
  int value_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, IndexMod4 v) { return os << v.value(); }

}  // namespace metasymp
