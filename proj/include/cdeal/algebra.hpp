#pragma once

#include "cdeal/spectral.hpp"

#include <vector>

namespace cdeal {

/// Pointwise minimum of distortion functions, knotted at every input knot and
/// every pairwise crossing.
DistortionFunction pointwise_min(const std::vector<DistortionFunction>& distortions);

/// Weighting measure of the convolution of Weighted V@Rs (determining set is
/// the intersection, i.e. Psi is the pointwise minimum).
WeightingMeasure convolve_wvar(const std::vector<WeightingMeasure>& measures);

/// max_n rho_{mu^n}(X).
double rho_max(const std::vector<WeightingMeasure>& measures, const RandomVariable& x);

/// Least concave majorant of the pointwise maximum (upper hull of all knots).
DistortionFunction minimal_concave_majorant(const std::vector<DistortionFunction>& distortions);

}  // namespace cdeal
