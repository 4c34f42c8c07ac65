//! Exact verification of nonconstant hexagon relations on the 5-simplex.

pub mod cohomology;
pub mod exactfield;
pub mod exactla;
pub mod exotic;
pub mod hexagon;
pub mod simplicial;
pub mod verify;
