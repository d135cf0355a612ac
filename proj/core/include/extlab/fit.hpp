#ifndef EXTLAB_FIT_HPP
#define EXTLAB_FIT_HPP

#include <vector>

namespace extlab {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS residual of the least-squares fit
    int npoints = 0;
};

// Plain least-squares line fit y = slope*x + intercept.
FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Least squares on log-log data.  Points with y <= floor are discarded, and
// when drop_extremes is set the smallest and largest remaining x are dropped
// as well (transition regions at the ends of a scan).
FitResult loglog_fit(const std::vector<double>& x, const std::vector<double>& y,
                     bool drop_extremes = true, double floor = 0.0);

} // namespace extlab

#endif
