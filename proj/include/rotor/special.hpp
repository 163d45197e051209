#pragma once

#include <vector>

namespace rotor {

/// Exponentially scaled modified Bessel function of the first kind,
/// e^{-x} I_n(x), for integer order n >= 0 and x >= 0.
///
/// Small arguments use the power series directly; otherwise a downward
/// Miller recurrence normalised by e^x = I_0(x) + 2 sum_{n>=1} I_n(x).
/// Negative orders fold onto |n|.
double bessel_i_scaled(int order, double x);

/// e^{-x} I_n(x) for every n in [0, max_order], computed in one recurrence.
std::vector<double> bessel_i_scaled_table(int max_order, double x);

/// e^{-|x|} I_n(x) for signed x, using I_n(-x) = (-1)^n I_n(x).
double bessel_i_scaled_signed(int order, double x);

/// sin(x)/x with the removable singularity filled in.
double sinc(double x);

/// Natural log of |C(n, k)| for real n, k via log-Gamma; `sign` receives
/// +1, -1, or 0 (when the coefficient vanishes identically).
double log_abs_binomial(double n, double k, int& sign);

}  // namespace rotor
