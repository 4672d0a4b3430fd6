//! Arithmetic of elliptic curves over ℚ: reduction types, local heights and
//! the Néron–Tate height.

mod height;
mod local;
mod tate;

pub use height::{
    canonical_height_q, canonical_height_q_with, gram_q, height_pairing_q, naive_height_q, torsion_test_q,
    CurveData, Gram, HeightRecordQ, Place, DEFAULT_TORSION_BOUND, ZERO_HEIGHT,
};
pub use local::{local_height_arch, local_height_nonarch, NonArchHeight, ARCH_TERM_CAP};
pub use tate::{tate_at_prime, Kodaira, ReductionData};
