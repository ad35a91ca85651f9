#ifndef BKNN_CLI_SVG_PLOTS_HPP
#define BKNN_CLI_SVG_PLOTS_HPP

#include <string>

#include "bknn/experiment.hpp"
#include "bknn/sim_model.hpp"

namespace bknn::cli {

/// Test points in the feature plane, colored by posterior level.
std::string grid_svg(const TestGrid &grid);

/// Mean point estimate against the true probability, one panel per method,
/// with the 45 degree line.
std::string calibration_svg(const CoverageSummary &summary);

enum class Method { Bknn, Knn };

/// Histogram of per-point coverage for one method, nominal 0.95 marked.
std::string coverage_histogram_svg(const CoverageSummary &summary,
                                   Method method);

/// Mean interval length against 4 x std of the point estimate, one panel
/// per method, with slope=1 and slope=1/2 reference lines.
std::string length_vs_std_svg(const GoldStandardReport &report);

} // namespace bknn::cli

#endif
