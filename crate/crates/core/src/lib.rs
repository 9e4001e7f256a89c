//! Finite quantum groups: Hopf images, generated subgroups and intertwiners.

// Structure-constant loops index several arrays at once.
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod fqg;
pub mod hopf;
pub mod linalg;
