#include "pseudogas/diagrammatics.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "pseudogas/errors.hpp"

namespace pseudogas::diagrams {

using boost::multiprecision::cpp_int;

bool FoamShape::valid() const noexcept {
  const int n = loop_count();
  if (n == 0) return false;
  if (n == 1) return vertices_per_loop[0] == 0;
  long long total = 0;
  for (int v : vertices_per_loop) {
    if (v < 1) return false;
    total += v;
  }
  return total == 2LL * n - 2;
}

FoamShape random_foam(int n_loops, std::uint64_t seed) {
  if (n_loops < 1) throw ConfigError("a foam needs at least one loop");
  FoamShape shape;
  if (n_loops == 1) {
    shape.vertices_per_loop = {0};
    return shape;
  }
  // A node's degree is one more than its multiplicity in the Prüfer sequence.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n_loops - 1);
  shape.vertices_per_loop.assign(n_loops, 1);
  for (int i = 0; i < n_loops - 2; ++i) ++shape.vertices_per_loop[pick(rng)];
  return shape;
}

HalfInteger coefficient_sum_exact(const FoamShape& shape) {
  if (!shape.valid()) throw ConfigError("foam shape is not a tree of loops");
  cpp_int twice = 0;
  for (int n : shape.vertices_per_loop) {
    cpp_int alternating = 0;
    cpp_int binom = n;  // C(n, 1)
    for (int m = 2; m <= n; ++m) {
      binom = binom * (n - m + 1) / m;
      if (m % 2 == 0) alternating += binom;
      else alternating -= binom;
    }
    twice += n - 2 * alternating;
  }
  return {twice.convert_to<long long>()};
}

double coefficient_sum(const FoamShape& shape) {
  const HalfInteger sum = coefficient_sum_exact(shape);
  if (shape.loop_count() >= 2 && sum.twice != 2) {
    throw InvariantViolation("foam coefficient sum is " + std::to_string(sum.value()) + ", expected 1 for " +
                             std::to_string(shape.loop_count()) + " loops");
  }
  return sum.value();
}

RingSum ring_sum_check(double a, double b, int s, int n_max) {
  if (s != 1 && s != -1) throw ConfigError("statistics sign must be +1 or -1");
  if (n_max < 10) throw ConfigError("ring series needs n_max >= 10");
  const double x = a * b;
  if (!(std::abs(x) < 1.0)) throw DomainError("ring series diverges for |ab| >= 1");
  RingSum out;
  double sum = 0.5 * x;
  double power = x;
  for (int n = 2; n <= n_max; ++n) {
    power *= x;
    const double sign = (n + 1) % 2 == 0 ? 1.0 : static_cast<double>(s);
    sum += sign * power / n;
  }
  out.truncated = sum;
  out.closed = -s * std::log1p(-s * x) - 0.5 * x;
  out.gap = std::abs(out.truncated - out.closed);
  return out;
}

}  // namespace pseudogas::diagrams
