//! Order-k Delaunay mosaics, rhomboid tilings and order-k alpha shapes of
//! finite point sets, computed with exact rational arithmetic.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod geom;
pub mod hull;
pub mod oracle;
pub mod orderk;
pub mod radius;
pub mod tiling;

pub use error::{Error, Result};
