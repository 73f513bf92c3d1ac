#pragma once

// Single table of default tolerances. Suites, unit tests and the acceptance
// binary all read from here.

namespace metasymp::tol {

inline constexpr double symplectic = 1e-10;         // ‖SᵀJS − J‖_max, scaled by max(1, ‖S‖_max²)
inline constexpr double symplectic_property = 1e-9;  // same residual, checked on every constructed S
inline constexpr double det = 1e-8;                  // "det ≠ 0", see det_clears()
inline constexpr double det_margin = 1e-3;           // harness re-draw margin on singularity_margin of random inputs

inline constexpr double lemma1_rel = 1e-9;
inline constexpr double cayley_symmetry = 1e-10;
inline constexpr double cayley_roundtrip = 1e-8;
inline constexpr double pairing_rel = 1e-9;
inline constexpr double maslov_operator = 1e-5;
inline constexpr double trace_abs = 5e-3;
inline constexpr double trace_at_pi = 1e-3;
inline constexpr double compose_residual = 1e-3;
inline constexpr double cl1_rel = 1e-8;
inline constexpr double alt_forms = 1e-8;
inline constexpr double covariance = 1e-5;
inline constexpr double heisenberg = 1e-10;
inline constexpr double fresnel = 1e-6;
inline constexpr double split_product = 1e-9;
inline constexpr double split_operator = 1e-8;  // closed-form Gaussian images of two splits
inline constexpr double twisted = 1e-4;
inline constexpr double unitarity_quarter = 1e-4;
inline constexpr double grid_tail = 1e-6;
inline constexpr double twisted_tail = 1e-5;

}  // namespace metasymp::tol
