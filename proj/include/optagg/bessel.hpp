#pragma once

// Bessel functions of the first kind, integer order, by Miller's backward
// recurrence with sum normalization (J_0 + 2*sum J_2k = 1). Accurate to
// ~1e-14 over the modulation-index range this library uses (|x| <= ~30).

#include <cmath>
#include <cstdlib>
#include <vector>

namespace optagg {

inline double bessel_j(int n, double x) {
    bool negate = false;
    if (n < 0) {
        n = -n;
        if (n % 2 == 1) negate = !negate;
    }
    if (x < 0.0) {
        x = -x;
        if (n % 2 == 1) negate = !negate;
    }
    if (x == 0.0) return (n == 0) ? 1.0 : 0.0;

    // Start far enough above max(n, x) that the downward recursion has
    // converged onto the minimal solution by the time it reaches order n.
    int start = static_cast<int>(x) + 24;
    if (start < n + 24) start = n + 24;
    if (start % 2 == 1) ++start;

    double fp = 0.0;             // J_{k+1} seed
    double fc = 1e-300;          // J_k seed (arbitrary tiny scale)
    double target = 0.0;
    double norm = 0.0;           // accumulates J_0 + 2*sum_{k even>0} J_k
    for (int k = start; k >= 0; --k) {
        const double fm = (2.0 * (k + 1)) / x * fc - fp;
        fp = fc;
        fc = fm;
        if (k == n) target = fc;
        if (k % 2 == 0) norm += (k == 0) ? fc : 2.0 * fc;
        // Rescale to dodge overflow during long recursions.
        if (std::abs(fc) > 1e250) {
            fc *= 1e-250;
            fp *= 1e-250;
            target *= 1e-250;
            norm *= 1e-250;
        }
    }
    const double value = target / norm;
    return negate ? -value : value;
}

}  // namespace optagg
