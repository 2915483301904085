//! Integral Khovanov homology of link diagrams.
//!
//! Diagrams come from braid words ([`braid`]) or signed PD codes
//! ([`diagram`]). [`cube`] builds the cube-of-resolutions complex,
//! [`homology`] reduces it to a bigraded table over ℤ, and [`invariants`]
//! holds the Jones state sum and the checker for positive braid closures.
//!
//! ```
//! use khlab::{braid_closure, build_complex, homology_table, parse_braid};
//!
//! let d = braid_closure(&parse_braid("1 1 1").unwrap());
//! let table = homology_table(&build_complex(&d, 20).unwrap()).unwrap();
//! assert_eq!(table.get(3, 7).unwrap().torsion, vec![2]);
//! ```

pub mod braid;
pub mod cli;
pub mod cube;
pub mod diagram;
pub mod error;
pub mod homology;
pub mod invariants;

pub use braid::{braid_closure, parse_braid, BraidWord, Letter, Sign};
pub use cube::{build_complex, ChainComplex, DEFAULT_CROSSING_CAP};
pub use diagram::{from_pd, Crossing, Diagram, Epsilon};
pub use error::{KhError, Result};
pub use homology::{homology_table, BigradedGroup, HomologyEntry};
pub use invariants::{
    graded_euler_characteristic, jones_state_sum, verify_positive_braid, Convention, LaurentPolynomial,
};
