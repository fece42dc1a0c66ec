//! Benchmark inputs shared by the criterion targets.

use chen_core::catalog;
use chen_core::FiniteCdga;

pub fn nonformal8() -> FiniteCdga {
    catalog::nonformal8_model()
}

pub fn cp3() -> FiniteCdga {
    catalog::projective_model(3)
}
