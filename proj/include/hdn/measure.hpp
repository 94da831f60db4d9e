#pragma once

#include "hdn/hdn_construction.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace hdn {

/// Axis-aligned box lo <= x < hi in space-time (contravariant corners).
class Region
{
public:
    /// Throws std::invalid_argument unless lo < hi componentwise.
    Region(const FourVectord& lo, const FourVectord& hi);

    const FourVectord& lo() const { return lo_; }
    const FourVectord& hi() const { return hi_; }
    FourVectord extent() const { return hi_ - lo_; }

private:
    FourVectord lo_;
    FourVectord hi_;
};

struct Interval
{
    double lo;
    double hi;
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for k successes out of n.
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = kZ95);

/// Verdict tallies with per-verdict proportions.
struct FractionEstimate
{
    std::array<std::uint64_t, kVerdictCount> counts{};
    std::uint64_t total = 0;
    std::uint64_t seed = 0;

    void add(Verdict v)
    {
        ++counts[static_cast<std::size_t>(v)];
        ++total;
    }
    void merge(const FractionEstimate& other);

    std::uint64_t count(Verdict v) const { return counts[static_cast<std::size_t>(v)]; }
    double fraction(Verdict v) const;
    /// Binomial standard error sqrt(p (1 - p) / n).
    double standard_error(Verdict v) const;
    Interval wilson_95(Verdict v) const { return wilson_interval(count(v), total); }
};

/// |p1 - p2| / sqrt(se1^2 + se2^2); 0 when both errors vanish and p1 == p2.
double separation_in_standard_errors(const FractionEstimate& a, const FractionEstimate& b, Verdict v);

struct ParallelOptions
{
    unsigned threads = 0;              // 0: hardware concurrency
    std::size_t chunk_size = 4096;     // samples per RNG stream
};

/// Seed of the RNG stream for one chunk. Chunks own disjoint counter-derived
/// streams, so tallies do not depend on the thread count.
std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk);

/// Uniform Monte Carlo estimate of the verdict fractions over r.
/// Throws std::invalid_argument for n == 0.
FractionEstimate estimate_spacetime_fraction(const Superposition& w,
                                             const Region& r,
                                             std::uint64_t n,
                                             std::uint64_t seed,
                                             const Tolerances& tols = {},
                                             const ParallelOptions& par = {});

/// Verdict fractions for (P, S) pairs with i.i.d. N(0, sigma^2) components.
/// Throws std::invalid_argument for n == 0 or sigma <= 0.
FractionEstimate sample_pair_space(std::uint64_t n,
                                   std::uint64_t seed,
                                   double sigma,
                                   const Tolerances& tols = {},
                                   const ParallelOptions& par = {});

using Resolution = std::array<int, 4>;

struct ScanCell
{
    FourVectord x;
    Verdict verdict;
    double theta;        // NaN when undefined
    double w_plus_sq;    // W+.W+, NaN when undefined
    double w_minus_sq;
};

/// Number of lattice points, throws std::invalid_argument if any entry < 1.
std::uint64_t lattice_size(const Resolution& res);

/// Lattice point x_i = lo + i (hi - lo) / res on each axis; the flat index
/// runs with the last axis fastest.
FourVectord lattice_point(const Region& r, const Resolution& res, std::uint64_t index);

/// Cells [begin, end) of the lattice. Concatenating consecutive ranges gives
/// the full scan.
std::vector<ScanCell> grid_scan_range(const Superposition& w,
                                      const Region& r,
                                      const Resolution& res,
                                      std::uint64_t begin,
                                      std::uint64_t end,
                                      const Tolerances& tols = {});

std::vector<ScanCell> grid_scan(const Superposition& w,
                                const Region& r,
                                const Resolution& res,
                                const Tolerances& tols = {},
                                const ParallelOptions& par = {});

FractionEstimate tally(std::span<const ScanCell> cells);

/// Largest radius (to bisection accuracy) such that every probed ray from
/// center stays BothSpacelike. Probes the 8 axis directions plus
/// random_directions seeded directions; each ray is marched in steps of
/// r_max / march_steps and the first exit is refined by bisection. Returns 0
/// when center itself is not BothSpacelike and r_max when no ray exits.
double both_spacelike_radius(const Superposition& w,
                             const FourVectord& center,
                             double r_max,
                             int random_directions,
                             std::uint64_t seed,
                             const Tolerances& tols = {},
                             int march_steps = 200);

} // namespace hdn
