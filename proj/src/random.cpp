#include "wincast/random.hpp"

#include <cmath>

namespace wincast {

double NormalStream::uniform_pm1() {
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    const double u01 = static_cast<double>(engine_() >> 11) * kScale;
    return 2.0 * u01 - 1.0;
}

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = uniform_pm1();
        v = uniform_pm1();
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

}  // namespace wincast
