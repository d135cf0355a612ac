#ifndef EXTLAB_EXPERIMENTS_HPP
#define EXTLAB_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "extlab/params.hpp"
#include "extlab/report.hpp"

namespace extlab {

// moments, frame, norm-scaling, dft, psp-scan, rapid-decay, gamma-oracle,
// zero-case, nearby-case, faraway-case, small-large-range, averaged-testing,
// trilinear.
std::vector<std::string> experiment_names();

// Runs one experiment and returns its report; throws ConfigError for an
// unknown name or invalid Params.
ExperimentReport run_experiment(const std::string& name, const Params& p);

} // namespace extlab

#endif
