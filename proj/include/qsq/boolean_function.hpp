// Copyright 2026 The QSQ Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QSQ_BOOLEAN_FUNCTION_HPP_
#define QSQ_BOOLEAN_FUNCTION_HPP_

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qsq {

/// Largest supported input dimension; truth tables have at most 2^16 entries.
inline constexpr int kMaxDimension = 16;

/// A subset of the n coordinates packed into an integer: bit i <-> coordinate
/// i (coordinates are 0-based throughout).  Doubles as the index of a Fourier
/// character chi_S.
using SetIndex = std::uint32_t;

inline std::size_t table_size(int n) { return std::size_t{1} << n; }

inline void check_dimension(int n) {
  if (n < 1 || n > kMaxDimension) {
    throw std::invalid_argument("dimension n must be in [1, " +
                                std::to_string(kMaxDimension) + "], got " +
                                std::to_string(n));
  }
}

/// Sign convention used everywhere: sign(0) := +1.
inline int sign_of(double v) { return v < 0.0 ? -1 : +1; }

/// chi_S(x) = (-1)^{|S & x|} in the +-1 world.
inline int parity_character(SetIndex s, std::uint32_t x) {
  return (std::popcount(s & x) & 1) ? -1 : +1;
}

/// Total truth table of f: {0,1}^n -> {-1,+1}, the ground-truth object every
/// spectrum, oracle and learner in this library is built from.
class BooleanFunction {
 public:
  BooleanFunction(int n, std::vector<std::int8_t> values)
      : n_(n), values_(std::move(values)) {
    check_dimension(n_);
    if (values_.size() != table_size(n_)) {
      throw std::invalid_argument("truth table must have 2^n entries");
    }
    for (std::int8_t v : values_) {
      if (v != -1 && v != +1) {
        throw std::invalid_argument("truth table entries must be -1 or +1");
      }
    }
  }

  /// Builds the table by evaluating `fn` (any callable x -> +-1 int).
  template <typename Fn>
  static BooleanFunction from_function(int n, Fn&& fn) {
    check_dimension(n);
    std::vector<std::int8_t> values(table_size(n));
    for (std::uint32_t x = 0; x < values.size(); ++x) {
      values[x] = static_cast<std::int8_t>(fn(x));
    }
    return BooleanFunction(n, std::move(values));
  }

  static BooleanFunction constant(int n, int value) {
    return from_function(n, [value](std::uint32_t) { return value; });
  }

  /// The parity character chi_s as a truth table.
  static BooleanFunction parity(int n, SetIndex s) {
    check_set(n, s);
    return from_function(
        n, [s](std::uint32_t x) { return parity_character(s, x); });
  }

  int dimension() const { return n_; }
  std::size_t size() const { return values_.size(); }
  int operator()(std::uint32_t x) const { return values_[x]; }
  const std::vector<std::int8_t>& values() const { return values_; }

  /// Label bit of x under the convention b -> (-1)^b: +1 |-> 0, -1 |-> 1.
  int label_bit(std::uint32_t x) const { return values_[x] == -1 ? 1 : 0; }

  bool operator==(const BooleanFunction& other) const {
    return n_ == other.n_ && values_ == other.values_;
  }

  static void check_set(int n, SetIndex s) {
    if ((s >> n) != 0) {
      throw std::invalid_argument("set index has bits outside [0, n)");
    }
  }

 private:
  int n_;
  std::vector<std::int8_t> values_;
};

/// All 2^n Fourier coefficients of a function, indexed by SetIndex.
struct FourierSpectrum {
  int n = 0;
  std::vector<double> coefficients;

  double coefficient(SetIndex s) const { return coefficients[s]; }
  double total_mass() const {
    double m = 0.0;
    for (double c : coefficients) m += c * c;
    return m;
  }
};

/// Per-coordinate constraint of a SubsetPattern.
enum class Constraint : std::uint8_t { kFree = 0, kMustBeOne = 1, kMustBeZero = 2 };

/// A structured family of character indices T = { S : S contains every
/// MustBeOne coordinate and avoids every MustBeZero coordinate }.  Used to
/// address blocks of squared Fourier mass (influences, Goldreich-Levin
/// buckets) without enumerating the whole spectrum.
class SubsetPattern {
 public:
  SubsetPattern(int n, SetIndex must_be_one, SetIndex must_be_zero)
      : n_(n), ones_(must_be_one), zeros_(must_be_zero) {
    check_dimension(n_);
    BooleanFunction::check_set(n_, ones_);
    BooleanFunction::check_set(n_, zeros_);
    if ((ones_ & zeros_) != 0) {
      throw std::invalid_argument(
          "pattern marks a coordinate both MustBeOne and MustBeZero; "
          "the matched set would be empty");
    }
  }

  static SubsetPattern from_constraints(int n,
                                        const std::vector<Constraint>& cs) {
    check_dimension(n);
    if (cs.size() != static_cast<std::size_t>(n)) {
      throw std::invalid_argument("need one constraint per coordinate");
    }
    SetIndex ones = 0, zeros = 0;
    for (int i = 0; i < n; ++i) {
      if (cs[i] == Constraint::kMustBeOne) ones |= SetIndex{1} << i;
      if (cs[i] == Constraint::kMustBeZero) zeros |= SetIndex{1} << i;
    }
    return SubsetPattern(n, ones, zeros);
  }

  /// Every coordinate free: T = all 2^n subsets.
  static SubsetPattern all_free(int n) { return SubsetPattern(n, 0, 0); }

  /// T = subsets containing coordinate `coord`; its mass is Inf_coord(f).
  static SubsetPattern influence_of(int n, int coord) {
    if (coord < 0 || coord >= n) {
      throw std::invalid_argument("coordinate out of range");
    }
    return SubsetPattern(n, SetIndex{1} << coord, 0);
  }

  int dimension() const { return n_; }
  SetIndex must_be_one() const { return ones_; }
  SetIndex must_be_zero() const { return zeros_; }
  SetIndex free_mask() const {
    return static_cast<SetIndex>(~(ones_ | zeros_)) &
           static_cast<SetIndex>(table_size(n_) - 1);
  }

  Constraint at(int coord) const {
    if (coord < 0 || coord >= n_) {
      throw std::invalid_argument("coordinate out of range");
    }
    const SetIndex bit = SetIndex{1} << coord;
    if (ones_ & bit) return Constraint::kMustBeOne;
    if (zeros_ & bit) return Constraint::kMustBeZero;
    return Constraint::kFree;
  }

  bool matches(SetIndex s) const {
    return (s & ones_) == ones_ && (s & zeros_) == 0;
  }

  /// |T| = 2^{#free coordinates}; never zero.
  std::uint64_t match_count() const {
    return std::uint64_t{1} << std::popcount(free_mask());
  }

  /// Calls fn(S) for every matched index, in increasing numeric order.
  template <typename Fn>
  void for_each_match(Fn&& fn) const {
    const SetIndex free = free_mask();
    SetIndex sub = 0;
    while (true) {
      fn(static_cast<SetIndex>(ones_ | sub));
      if (sub == free) break;
      sub = (sub - free) & free;  // next subset of free, ascending
    }
  }

  bool operator==(const SubsetPattern& other) const {
    return n_ == other.n_ && ones_ == other.ones_ && zeros_ == other.zeros_;
  }

 private:
  int n_;
  SetIndex ones_;
  SetIndex zeros_;
};

/// Fast Walsh-Hadamard transform: returns all coefficients
/// f^(S) = 2^{-n} sum_x f(x) chi_S(x) via the in-place butterfly, O(n 2^n).
inline FourierSpectrum walsh_hadamard_transform(const BooleanFunction& f) {
  const std::size_t size = f.size();
  FourierSpectrum spectrum;
  spectrum.n = f.dimension();
  spectrum.coefficients.resize(size);
  for (std::size_t x = 0; x < size; ++x) {
    spectrum.coefficients[x] = static_cast<double>(f(x));
  }
  auto& c = spectrum.coefficients;
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t block = 0; block < size; block += half << 1) {
      for (std::size_t i = block; i < block + half; ++i) {
        const double a = c[i];
        const double b = c[i + half];
        c[i] = a + b;
        c[i + half] = a - b;
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(size);
  for (double& v : c) v *= scale;
  return spectrum;
}

/// Pointwise reconstruction f(x) = sum_S f^(S) chi_S(x) as real values.
inline std::vector<double> inverse_transform_values(
    const FourierSpectrum& spectrum) {
  check_dimension(spectrum.n);
  const std::size_t size = table_size(spectrum.n);
  if (spectrum.coefficients.size() != size) {
    throw std::invalid_argument("spectrum must have 2^n coefficients");
  }
  std::vector<double> values = spectrum.coefficients;
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t block = 0; block < size; block += half << 1) {
      for (std::size_t i = block; i < block + half; ++i) {
        const double a = values[i];
        const double b = values[i + half];
        values[i] = a + b;
        values[i + half] = a - b;
      }
    }
  }
  return values;
}

/// Inverse transform mapped back to a truth table by sign (sign(0) = +1).
/// For a spectrum produced by walsh_hadamard_transform this reproduces the
/// source function exactly: all intermediate values are dyadic rationals
/// representable without rounding.
inline BooleanFunction inverse_walsh_hadamard_transform(
    const FourierSpectrum& spectrum) {
  std::vector<double> values = inverse_transform_values(spectrum);
  std::vector<std::int8_t> table(values.size());
  for (std::size_t x = 0; x < values.size(); ++x) {
    table[x] = static_cast<std::int8_t>(sign_of(values[x]));
  }
  return BooleanFunction(spectrum.n, std::move(table));
}

/// Squared Fourier mass captured by a pattern: sum_{S in T} f^(S)^2.
inline double fourier_mass(const FourierSpectrum& spectrum,
                           const SubsetPattern& pattern) {
  if (spectrum.n != pattern.dimension()) {
    throw std::invalid_argument("pattern and spectrum dimensions differ");
  }
  double mass = 0.0;
  pattern.for_each_match([&](SetIndex s) {
    const double c = spectrum.coefficient(s);
    mass += c * c;
  });
  return mass;
}

/// Influence of a coordinate: Inf_i(f) = sum_{S : i in S} f^(S)^2.
inline double influence(const FourierSpectrum& spectrum, int coord) {
  return fourier_mass(spectrum,
                      SubsetPattern::influence_of(spectrum.n, coord));
}

inline double influence(const BooleanFunction& f, int coord) {
  return influence(walsh_hadamard_transform(f), coord);
}

}  // namespace qsq

#endif  // QSQ_BOOLEAN_FUNCTION_HPP_
