#pragma once

#include <cstdint>
#include <random>

namespace wincast {

/// Standard-normal stream: std::mt19937_64 (bit sequence fixed by the C++
/// standard) feeding the Marsaglia polar form of Box–Muller. Uniforms take
/// the top 53 bits of each 64-bit draw. Each accepted pair yields two
/// variates, first u·f then v·f.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double next();

private:
    double uniform_pm1();

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace wincast
