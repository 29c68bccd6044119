#pragma once
// Smooth double-well psi(s) = 1/4 (1-s^2)^2; semiconvexity constant C_psi = 1.

namespace anisoac {

struct DoubleWell {
    static constexpr double c_psi = 1.0;
    static double value(double s) {
        const double w = 1.0 - s * s;
        return 0.25 * w * w;
    }
    static double d1(double s) { return s * s * s - s; }
    static double d2(double s) { return 3.0 * s * s - 1.0; }
    static double d3(double s) { return 6.0 * s; }
};

}  // namespace anisoac
