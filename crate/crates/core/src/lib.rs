//! Exact subset-sum counting through the geometry of non-decreasing paths.
//!
//! An [`Instance`] holds a sorted sequence and a target. The [`ndp`] module
//! builds the universal family of non-decreasing paths, [`hgraph`] counts
//! transformation paths and their wormholes, [`orbital`] builds the layered
//! orbital graph, and [`ihm`] refines and filters it until every remaining
//! root path is a zero path. [`oracle`] holds the brute-force references
//! used to check the pipeline and [`analysis`] the configuration-graph
//! diagnostics.
//!
//! ```
//! use orbital_ssp::{Instance, ihm};
//!
//! let inst = Instance::from_u64(&[1, 2, 3, 4], 5).unwrap();
//! let sol = ihm::solve(&inst, &ihm::SolveOptions::default()).unwrap();
//! assert_eq!(sol.count, 2u32.into());
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod hgraph;
pub mod ihm;
pub mod instance;
pub mod ndp;
pub mod oracle;
pub mod orbital;
pub mod scalar;

pub use error::{Error, Result};
pub use instance::{Family, Instance, LinkSet, Point, PrefixSums};
pub use scalar::Scalar;
