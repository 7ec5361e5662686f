//! Directed strongly regular graphs built from 9x9 block matrices of circulants.
//!
//! * [`polyring`]: exact arithmetic in `Z[x]/(x^m - 1)`.
//! * [`blockmat`]: compactification of block-circulant 0/1 matrices and
//!   matrix algebra over the quotient ring.
//! * [`family`]: the explicit family `dsrg(9(2n+3), 3(2n+3), 2n+4, 2n+1, 2n+4)`.
//! * [`dsrg`]: digraphs and two independent strong-regularity verifiers.
//! * [`search`]: backtracking search for structured compact adjacency matrices.
//! * [`autiso`]: partition refinement, canonical forms and automorphism groups.
//! * [`io`]: reading and writing the supported text formats.

pub mod autiso;
pub mod blockmat;
pub mod dsrg;
pub mod error;
pub mod family;
pub mod io;
pub mod polyring;
pub mod search;

pub use blockmat::{compactify, decompactify, BinaryMatrix, CompactMatrix, IntMatrix};
pub use dsrg::{infer_params, verify_combinatorial, verify_matrix, Digraph, DsrgParams, Violation};
pub use error::{Error, Result};
pub use polyring::CycPoly;
