#pragma once

#include "inlslab/grid.hpp"

namespace inls {

// Cubic interpolation of u at radius x. Even across r=0, odd across rmax,
// zero beyond rmax.
cplx interpolate(const RadialField& u, double x);

// lambda^{(2-b)/(2 sigma)} u(lambda r) resampled on `target` (u's grid when null).
// Throws ResampleOutOfRange when more than `lost_mass_tol` of the mass
// would land outside the target grid.
RadialField scaling_transform(const RadialField& u, double lambda, const PhysParams& p,
                              GridPtr target = nullptr, double lost_mass_tol = 1e-6);

// Same map carried out exactly: the grid is stretched to rmax/lambda and the
// node values are multiplied by lambda^{(2-b)/(2 sigma)}. No interpolation.
RadialField scaling_exact(const RadialField& u, double lambda, const PhysParams& p);

}  // namespace inls
