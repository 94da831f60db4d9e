#include "hdn/measure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace hdn {

namespace {

constexpr std::uint64_t kSpacetimeStream = 1;
constexpr std::uint64_t kPairStream = 2;
constexpr std::uint64_t kDirectionStream = 3;

std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Runs job(chunk) for every chunk in [0, chunks) on a small pool. The first
/// exception thrown by any job is rethrown after all workers join.
template <typename Job>
void for_each_chunk(std::uint64_t chunks, unsigned threads, Job&& job)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::uint64_t c = next++; c < chunks; c = next++) {
            try {
                job(c);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = chunks;
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
}

/// Splits n samples into fixed-size chunks, runs sample(chunk_rng, count) per
/// chunk and merges the tallies in chunk order.
template <typename SampleChunk>
FractionEstimate chunked_estimate(std::uint64_t n,
                                  std::uint64_t seed,
                                  std::uint64_t stream,
                                  const ParallelOptions& par,
                                  SampleChunk&& sample)
{
    const std::uint64_t chunk_size = std::max<std::size_t>(1, par.chunk_size);
    const std::uint64_t chunks = (n + chunk_size - 1) / chunk_size;
    std::vector<FractionEstimate> partial(chunks);
    for_each_chunk(chunks, par.threads, [&](std::uint64_t c) {
        std::mt19937_64 rng(chunk_seed(seed, stream, c));
        const std::uint64_t count = std::min(chunk_size, n - c * chunk_size);
        partial[c] = sample(rng, count);
    });

    FractionEstimate total;
    for (const auto& p : partial)
        total.merge(p);
    total.seed = seed;
    return total;
}

} // namespace

Region::Region(const FourVectord& lo, const FourVectord& hi) : lo_(lo), hi_(hi)
{
    if (!lo.allFinite() || !hi.allFinite())
        throw std::invalid_argument("region corners must be finite");
    if (!(lo.array() < hi.array()).all())
        throw std::invalid_argument("region requires lo < hi in every component");
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z)
{
    if (n == 0)
        return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

void FractionEstimate::merge(const FractionEstimate& other)
{
    for (std::size_t i = 0; i < counts.size(); ++i)
        counts[i] += other.counts[i];
    total += other.total;
}

double FractionEstimate::fraction(Verdict v) const
{
    return total == 0 ? 0.0 : static_cast<double>(count(v)) / static_cast<double>(total);
}

double FractionEstimate::standard_error(Verdict v) const
{
    if (total == 0)
        return 0.0;
    const double p = fraction(v);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(total));
}

double separation_in_standard_errors(const FractionEstimate& a, const FractionEstimate& b, Verdict v)
{
    const double diff = std::abs(a.fraction(v) - b.fraction(v));
    const double se = std::hypot(a.standard_error(v), b.standard_error(v));
    if (se == 0.0)
        return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / se;
}

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk)
{
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ chunk);
}

FractionEstimate estimate_spacetime_fraction(const Superposition& w,
                                             const Region& r,
                                             std::uint64_t n,
                                             std::uint64_t seed,
                                             const Tolerances& tols,
                                             const ParallelOptions& par)
{
    if (n == 0)
        throw std::invalid_argument("sample count n must be at least 1");
    const FourVectord lo = r.lo();
    const FourVectord extent = r.extent();
    return chunked_estimate(n, seed, kSpacetimeStream, par, [&](std::mt19937_64& rng, std::uint64_t count) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        FractionEstimate est;
        for (std::uint64_t i = 0; i < count; ++i) {
            FourVectord x;
            for (int mu = 0; mu < 4; ++mu)
                x(mu) = lo(mu) + unit(rng) * extent(mu);
            est.add(assess_point(w, x, tols).verdict);
        }
        return est;
    });
}

FractionEstimate sample_pair_space(std::uint64_t n,
                                   std::uint64_t seed,
                                   double sigma,
                                   const Tolerances& tols,
                                   const ParallelOptions& par)
{
    if (n == 0)
        throw std::invalid_argument("sample count n must be at least 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("sigma must be positive and finite");
    return chunked_estimate(n, seed, kPairStream, par, [&](std::mt19937_64& rng, std::uint64_t count) {
        std::normal_distribution<double> normal(0.0, sigma);
        FractionEstimate est;
        for (std::uint64_t i = 0; i < count; ++i) {
            FourVectord P, S;
            for (int mu = 0; mu < 4; ++mu)
                P(mu) = normal(rng);
            for (int mu = 0; mu < 4; ++mu)
                S(mu) = normal(rng);
            est.add(assess_pair(P, S, tols).verdict);
        }
        return est;
    });
}

std::uint64_t lattice_size(const Resolution& res)
{
    std::uint64_t size = 1;
    for (int r : res) {
        if (r < 1)
            throw std::invalid_argument("every grid resolution must be at least 1");
        size *= static_cast<std::uint64_t>(r);
    }
    return size;
}

FourVectord lattice_point(const Region& r, const Resolution& res, std::uint64_t index)
{
    FourVectord x;
    for (int mu = 3; mu >= 0; --mu) {
        const auto n = static_cast<std::uint64_t>(res[mu]);
        const auto i = index % n;
        index /= n;
        x(mu) = r.lo()(mu) + static_cast<double>(i) * r.extent()(mu) / static_cast<double>(n);
    }
    return x;
}

std::vector<ScanCell> grid_scan_range(const Superposition& w,
                                      const Region& r,
                                      const Resolution& res,
                                      std::uint64_t begin,
                                      std::uint64_t end,
                                      const Tolerances& tols)
{
    end = std::min(end, lattice_size(res));
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<ScanCell> cells;
    cells.reserve(end > begin ? end - begin : 0);
    for (std::uint64_t i = begin; i < end; ++i) {
        const FourVectord x = lattice_point(r, res, i);
        const PointAssessment a = assess_point(w, x, tols);
        ScanCell cell{x, a.verdict, nan, nan, nan};
        if (a.point) {
            cell.theta = a.point->theta;
            cell.w_plus_sq = inner(a.point->w_plus, a.point->w_plus);
            cell.w_minus_sq = inner(a.point->w_minus, a.point->w_minus);
        }
        cells.push_back(cell);
    }
    return cells;
}

std::vector<ScanCell> grid_scan(const Superposition& w,
                                const Region& r,
                                const Resolution& res,
                                const Tolerances& tols,
                                const ParallelOptions& par)
{
    const std::uint64_t size = lattice_size(res);
    const std::uint64_t chunk_size = std::max<std::size_t>(1, par.chunk_size);
    const std::uint64_t chunks = (size + chunk_size - 1) / chunk_size;
    std::vector<std::vector<ScanCell>> parts(chunks);
    for_each_chunk(chunks, par.threads, [&](std::uint64_t c) {
        parts[c] = grid_scan_range(w, r, res, c * chunk_size, (c + 1) * chunk_size, tols);
    });

    std::vector<ScanCell> cells;
    cells.reserve(size);
    for (auto& part : parts)
        cells.insert(cells.end(), part.begin(), part.end());
    return cells;
}

FractionEstimate tally(std::span<const ScanCell> cells)
{
    FractionEstimate est;
    for (const auto& cell : cells)
        est.add(cell.verdict);
    return est;
}

double both_spacelike_radius(const Superposition& w,
                             const FourVectord& center,
                             double r_max,
                             int random_directions,
                             std::uint64_t seed,
                             const Tolerances& tols,
                             int march_steps)
{
    auto inside = [&](const FourVectord& x) { return assess_point(w, x, tols).verdict == Verdict::BothSpacelike; };
    if (!inside(center))
        return 0.0;

    std::vector<FourVectord> directions;
    for (int mu = 0; mu < 4; ++mu) {
        FourVectord e = FourVectord::Zero();
        e(mu) = 1.0;
        directions.push_back(e);
        directions.push_back(-e);
    }
    std::mt19937_64 rng(chunk_seed(seed, kDirectionStream, 0));
    std::normal_distribution<double> normal;
    for (int i = 0; i < random_directions; ++i) {
        FourVectord d;
        for (int mu = 0; mu < 4; ++mu)
            d(mu) = normal(rng);
        directions.push_back(d.normalized());
    }

    const double dr = r_max / march_steps;
    double radius = r_max;
    for (const auto& d : directions) {
        double good = 0.0;
        double bad = -1.0;
        for (int s = 1; s <= march_steps; ++s) {
            const double r = s * dr;
            if (r >= radius)
                break;
            if (!inside(center + r * d)) {
                bad = r;
                break;
            }
            good = r;
        }
        if (bad < 0.0)
            continue;
        for (int it = 0; it < 60 && bad - good > 1e-14 * r_max; ++it) {
            const double mid = 0.5 * (good + bad);
            (inside(center + mid * d) ? good : bad) = mid;
        }
        radius = std::min(radius, good);
    }
    return radius;
}

} // namespace hdn
