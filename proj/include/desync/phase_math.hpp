#pragma once

#include <cmath>

namespace desync {

// x reduced into [0, T).
inline double mod_pos(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0.0) r += period;
    if (r >= period) r = 0.0;
    return r;
}

// Signed circular offset in [-T/2, T/2). Exactly T/2 maps to -T/2.
inline double wrap_signed(double x, double period) {
    double r = mod_pos(x, period);
    return r < period * 0.5 ? r : r - period;
}

// Shortest circular distance between two phases, in [0, T/2].
inline double circ_dist(double a, double b, double period) {
    double d = mod_pos(a - b, period);
    return d <= period * 0.5 ? d : period - d;
}

} // namespace desync
