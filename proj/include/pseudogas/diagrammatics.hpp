#pragma once

#include <cstdint>
#include <vector>

namespace pseudogas::diagrams {

/// A foam diagram as a tree of loops: loop i carries vertices_per_loop[i]
/// two-body vertices (its degree in the tree), so Σ nᵢ = 2N − 2.
struct FoamShape {
  std::vector<int> vertices_per_loop;

  int loop_count() const noexcept { return static_cast<int>(vertices_per_loop.size()); }
  bool valid() const noexcept;
};

/// Uniform random labeled tree on `n_loops` nodes (Prüfer decoding).
FoamShape random_foam(int n_loops, std::uint64_t seed);

/// Exact value of Σᵢ [½ C(nᵢ,1) − Σ_{m=2}^{nᵢ} (−1)^m C(nᵢ,m)] as a
/// fraction p/2. Integer arithmetic is arbitrary precision.
struct HalfInteger {
  long long twice;
  double value() const noexcept { return 0.5 * static_cast<double>(twice); }
  bool operator==(const HalfInteger&) const = default;
};

HalfInteger coefficient_sum_exact(const FoamShape& shape);

/// coefficient_sum_exact as a double. For N ≥ 2 anything other than 1 is
/// an InvariantViolation; the single loop (N = 1) has no vertices and sums to 0.
double coefficient_sum(const FoamShape& shape);

struct RingSum {
  double truncated = 0.0;
  double closed = 0.0;
  double gap = 0.0;
};

/// Scalar ring series ½x + Σ_{N=2}^{n_max} s^{N+1} x^N / N with x = ab
/// against its resummation −s log(1 − s x) − ½x. DomainError if |ab| ≥ 1,
/// ConfigError if n_max < 10.
RingSum ring_sum_check(double a, double b, int s, int n_max);

}  // namespace pseudogas::diagrams
