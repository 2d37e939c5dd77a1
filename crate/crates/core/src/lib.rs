//! Exact computation with finite nilpotent `Z_p`-Lie algebras and the
//! finite p-groups they encode through the exp/log correspondence in class
//! below `p`.
//!
//! Everything is integer arithmetic modulo prime powers: Howell and Smith
//! normal forms over `Z/p^E` drive the lattice work, the
//! Baker-Campbell-Hausdorff series is computed with exact rationals, and
//! every structural claim (powerful, p-central, omega-extension property,
//! embedding bounds) is verified on the concrete instance rather than
//! assumed.

pub mod bch;
pub mod cohomology;
pub mod error;
pub mod hall;
pub mod hat;
pub mod lazard;
pub mod lie;
pub mod padic;

pub use error::{Error, Result};
