#include "dickehp/fit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "dickehp/errors.hpp"

namespace dickehp {

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DegenerateFit("fit_linear: size mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw DegenerateFit("fit_linear: need at least two points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw DegenerateFit("fit_linear: all abscissae equal");

    LinearFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ssr += r * r;
    }
    f.residual = std::sqrt(ssr / n);
    if (n > 2) f.slope_stderr = std::sqrt(ssr / (n - 2) / sxx);
    return f;
}

ExponentFit fit_power_law(std::span<const double> x, std::span<const double> y,
                          double min_decades, std::size_t min_samples) {
    if (x.size() != y.size()) throw DegenerateFit("fit_power_law: size mismatch");
    if (x.size() < min_samples) {
        std::ostringstream os;
        os << "fit_power_law: " << x.size() << " samples, need at least " << min_samples;
        throw DegenerateFit(os.str());
    }
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !std::isfinite(x[i]))
            throw DegenerateFit("fit_power_law: abscissae must be positive and finite");
        if (!(y[i] > 0.0) || !std::isfinite(y[i]))
            throw DegenerateFit("fit_power_law: values must be positive and finite");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double decades = std::log10(*hi / *lo);
    if (decades < min_decades * (1.0 - 1e-12)) {
        std::ostringstream os;
        os << "fit_power_law: abscissae span " << decades << " decades, need " << min_decades;
        throw DegenerateFit(os.str());
    }

    const LinearFit lf = fit_linear(lx, ly);
    ExponentFit f;
    f.exponent = lf.slope;
    f.intercept = lf.intercept;
    f.residual = lf.residual;
    f.stderr_exponent = lf.slope_stderr;
    f.n_samples = lf.n;
    f.decades = decades;
    const boost::math::students_t dist(static_cast<double>(lf.n - 2));
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    f.ci_low = f.exponent - t * f.stderr_exponent;
    f.ci_high = f.exponent + t * f.stderr_exponent;
    return f;
}

ExponentFit fit_critical_exponent(std::span<const double> distance, std::span<const double> value) {
    return fit_power_law(distance, value, 1.0, 5);
}

ExponentFit fit_critical_exponent(std::span<const std::pair<double, double>> samples) {
    std::vector<double> d, v;
    d.reserve(samples.size());
    v.reserve(samples.size());
    for (const auto& [x, y] : samples) {
        d.push_back(x);
        v.push_back(y);
    }
    return fit_critical_exponent(d, v);
}

}  // namespace dickehp
