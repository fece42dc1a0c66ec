//! Symbolic and numerical machinery for loop-space cohomology on spheres and
//! finite commutative differential graded algebras.
//!
//! The symbolic side ([`cdga`], [`linalg`], [`bar`]) works over exact rationals:
//! it validates finite CDGA presentations, enumerates bar words, applies the bar
//! differential and computes cohomology ranks, representatives and minimal
//! detecting lengths, from which distortion exponents are reported.
//!
//! The numerical side ([`geometry`], [`itint`]) evaluates iterated integrals on
//! concrete loop families in round spheres by quadrature over ordered simplices:
//! degree and Hopf functionals, norm-bound verification and sharpness scans.

pub mod bar;
pub mod cdga;
pub mod geometry;
pub mod itint;
pub mod linalg;
pub mod rational;

pub use bar::{
    bar_basis, bar_differential, cohomology, default_max_length, distortion_exponent,
    min_length_detector, BarElement, BarError, BarWord, CohomologyReport,
};
pub use cdga::{catalog, AlgebraError, Element, FiniteCdga};
pub use geometry::{
    concat_power, desuspend, geodesic_loop, loop_space_distance, pontryagin_product, sweepout,
    Domain, DomainPoint, GeometryError, Loop, LoopFamily, MapSpec, SpherePoint,
};
pub use itint::{
    check_length_bound, degree_preimage_oracle, degree_via_loops, eval_iterated_integral,
    hopf_linking_oracle, hopf_via_loops, lipschitz_pullback_check, pair, pairing_volume_bound,
    sharpness_scan, FormSpec, ItintError, NumericConfig, PairingResult, QuadratureRule, ScanMode,
};
pub use linalg::{in_span, LinalgError, RationalMatrix};
pub use rational::Rational;
