#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace gpsim {

/// splitmix64 finalizer, used to derive decorrelated seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seeded random stream. Distribution draws are implemented explicitly
/// (Box-Muller, Marsaglia-Tsang) so a given seed reproduces the same
/// sequence everywhere. Keyed substreams give independent streams for
/// replicates, chain samples, and per-point draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Independent stream derived from this stream's seed and a key.
    /// Depends only on (seed, key), not on how far this stream has advanced.
    Rng substream(std::uint64_t key) const;

    std::uint64_t next_u64();
    double uniform();                       // [0, 1)
    double uniform_pos();                   // (0, 1]
    double uniform(double lo, double hi);   // [lo, hi)
    double normal();
    double gamma(double shape, double rate);
    double chi_squared(double dof);
    Eigen::VectorXd normal_vector(Eigen::Index n);

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace gpsim
