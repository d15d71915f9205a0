#ifndef CHEAPBOOT_VARIATES_HPP
#define CHEAPBOOT_VARIATES_HPP

#include "cheapboot/rng.hpp"
#include "cheapboot/stats.hpp"

#include <cmath>

namespace cheapboot {

// Variate generators on top of CounterStream. Inverse-CDF transforms are
// used where available so draws are a fixed function of the stream; the
// gamma sampler rejects, which is still a pure function of the stream
// (variable consumption, deterministic outcome).

inline double draw_normal(CounterStream& stream) {
    return normal_quantile(stream.uniform01());
}

// Exponential with rate lambda; strictly positive because uniform01 avoids
// the endpoints.
inline double draw_exponential(CounterStream& stream, double rate) {
    return -std::log(stream.uniform01()) / rate;
}

// Gamma(shape, rate) with density rate^shape x^{shape-1} e^{-rate x}/Gamma(shape),
// Marsaglia-Tsang squeeze for shape >= 1, boosted by U^{1/shape} below 1.
inline double draw_gamma(CounterStream& stream, double shape, double rate) {
    if (shape < 1.0) {
        const double u = stream.uniform01();
        return draw_gamma(stream, shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = draw_normal(stream);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = stream.uniform01();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

}  // namespace cheapboot

#endif
