#include "inlslab/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "inlslab/errors.hpp"

namespace inls {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

PhysParams derive_exponents(int N, double b, double sigma) {
    if (N < 3) throw WindowViolation("dimension N=" + std::to_string(N) + " must be >= 3");
    if (!std::isfinite(b) || !std::isfinite(sigma))
        throw WindowViolation("b and sigma must be finite");

    const double bmax = std::min(N / 2.0, 2.0);
    if (!(b > 0.0)) throw WindowViolation("lower bound b > 0 violated (b=" + fmt(b) + ")");
    if (!(b < bmax))
        throw WindowViolation("upper bound b < min(N/2,2)=" + fmt(bmax) + " violated (b=" + fmt(b) + ")");

    const double lo = (2.0 - b) / N;
    const double hi = (2.0 - b) / (N - 2);
    if (!(sigma > lo))
        throw WindowViolation("lower bound sigma > (2-b)/N=" + fmt(lo) + " violated (sigma=" + fmt(sigma) + ")");
    if (!(sigma < hi))
        throw WindowViolation("upper bound sigma < (2-b)/(N-2)=" + fmt(hi) + " violated (sigma=" + fmt(sigma) + ")");

    PhysParams p;
    p.N = N;
    p.b = b;
    p.sigma = sigma;
    p.s_c = N / 2.0 - (2.0 - b) / (2.0 * sigma);
    p.sigma_c = 2.0 * N * sigma / (2.0 - b);
    p.beta = (2.0 - sigma) / (sigma * (N - 1) + b);

    // These follow from the window; a failure here is a logic error upstream.
    if (!(p.s_c > 0.0 && p.s_c < 1.0)) throw WindowViolation("s_c=" + fmt(p.s_c) + " outside (0,1)");
    if (!(p.sigma_c > 2.0)) throw WindowViolation("sigma_c=" + fmt(p.sigma_c) + " not > 2");
    if (!(p.beta > 0.0 && p.beta < 1.0)) throw WindowViolation("beta=" + fmt(p.beta) + " outside (0,1)");
    if (!(sigma < 2.0)) throw WindowViolation("sigma must be < 2");
    return p;
}

}  // namespace inls
