#pragma once

namespace classc {

/// Numerical tolerances used across the library. One process-global instance
/// holds the defaults; a config file may override individual values.
struct Tolerances {
  double su2_unitarity = 1e-12;       // U†U = I, det U = 1
  double orthogonality = 1e-10;       // SᵀS = I, det S = ±1
  double su2_decompose = 1e-9;        // G = λŨ acceptance
  double quaternion_identity = 1e-9;  // Tr G†G = 2 det G
  double minor_identity = 1e-10;      // signed complementary-minor identity
  double evolution_unitarity = 1e-10; // assembled step operator
  double normalization = 1e-10;       // conditional-weight sums
  double chain_rule = 1e-12;          // telescoped conditional product
  double zero_entry = 1e-12;          // "vanishing" matrix entries / expansion terms
  double reduction_product = 1e-9;    // factor product reproduces S
  double solve_residual = 1e-8;       // resolvent solve acceptance
  double walk_negative = 1e-12;       // conditional weights below -this are errors
};

inline Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

}  // namespace classc
