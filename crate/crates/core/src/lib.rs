//! (1+eps)-approximate solutions for row-sparse fractional covering LPs and
//! their column-sparse packing duals.
//!
//! The crate has a centralized reference solver ([`engine`]), a CONGEST-model
//! simulator that runs the same algorithm as node-local programs on the
//! bipartite constraint graph ([`congest`]), the reduction from general
//! instances to the normal form ([`normalize`]) and a verification layer
//! ([`verify`]) with weak-duality certificates, trace audits and an exact
//! oracle for tiny instances.
//!
//! ```
//! use congest_cover::{engine, instances, verify};
//!
//! let triangle = instances::gen_vertex_cover_lp(&[(0, 1), (1, 2), (0, 2)]).unwrap();
//! let out = engine::run(&triangle, 0.1).unwrap();
//! let cert = verify::certify(&triangle, &out.solution, 0.1).unwrap();
//! assert!(cert.valid);
//! assert!(out.solution.primal_objective <= 1.1 * 1.5 + 1e-9);
//! ```

pub mod cli;
pub mod congest;
pub mod engine;
pub mod error;
pub mod instances;
pub mod normalize;
pub mod verify;

pub use error::{EngineError, InstanceError, ParseError, SimError, VerifyError};
