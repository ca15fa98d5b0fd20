#include "sigens/random.hpp"

namespace sigens {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed)
    : key_(splitmix64(seed)), engine_(key_)
{
}

RandomStream RandomStream::derive(std::uint64_t index) const
{
    RandomStream child(0);
    child.key_ = splitmix64(key_ ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    child.engine_.seed(child.key_);
    return child;
}

double RandomStream::uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double RandomStream::normal(double mean, double stddev)
{
    return mean + stddev * normal_(engine_);
}

double RandomStream::standard_normal()
{
    return normal_(engine_);
}

} // namespace sigens
