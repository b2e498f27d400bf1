#pragma once

#include <span>
#include <utility>
#include <vector>

namespace dickehp {

// Ordinary least squares y = slope·x + intercept.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;      // root-mean-square residual
    double slope_stderr = 0.0;  // zero for an exact fit or two points
    std::size_t n = 0;
};

LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

struct ExponentFit {
    double exponent = 0.0;
    double intercept = 0.0;  // log(prefactor), natural log
    double residual = 0.0;   // rms residual in log space
    double stderr_exponent = 0.0;
    double ci_low = 0.0;     // 95% Student-t interval
    double ci_high = 0.0;
    std::size_t n_samples = 0;
    double decades = 0.0;    // log10(max distance / min distance)
};

// Fits value ∝ distance^exponent by least squares on (log d, log v).
// Needs at least five samples with positive distances and values spanning a
// decade or more; throws DegenerateFit otherwise.
ExponentFit fit_critical_exponent(std::span<const std::pair<double, double>> samples);

// Convenience overload for two parallel arrays.
ExponentFit fit_critical_exponent(std::span<const double> distance, std::span<const double> value);

// Log-log fit with an adjustable minimum span and sample count.
ExponentFit fit_power_law(std::span<const double> x, std::span<const double> y,
                          double min_decades = 1.0, std::size_t min_samples = 5);

}  // namespace dickehp
