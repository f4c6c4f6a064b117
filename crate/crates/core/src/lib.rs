//! Marked genus-2 hyperbolic orbifolds (spheres with six order-2 cone points), their
//! tessellations, the Maskit domain and numerical checks of bracelet length lemmas.

// `!(x > 0.0)` is used on purpose to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hyperbolic;
pub mod maskit;
pub mod orbifold;
pub mod tessellation;
pub mod verify;

pub use error::{Error, Result};
pub use hyperbolic::{Isometry, Point};
pub use maskit::{check, reduce, theorem1_table, verify_minimality, MaskitReport};
pub use orbifold::{build, exceptional, mirror, oct, Holonomy, OrbifoldFile, PantsFoldParams};
pub use tessellation::{ArcInstance, ArcLabel, Bounds, Side, Tiling};
