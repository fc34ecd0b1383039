#pragma once

namespace inls {

struct PhysParams {
    int N = 3;
    double b = 1.0;
    double sigma = 0.8;
    double s_c = 0.0;
    double sigma_c = 0.0;
    double beta = 0.0;

    // 2*beta/(1+beta), the space-time upper bound exponent.
    double upper_exponent() const { return 2.0 * beta / (1.0 + beta); }
    // exponent a in u -> lambda^a u(lambda x)
    double scaling_power() const { return (2.0 - b) / (2.0 * sigma); }
};

// Throws WindowViolation naming the failed bound.
PhysParams derive_exponents(int N, double b, double sigma);

}  // namespace inls
