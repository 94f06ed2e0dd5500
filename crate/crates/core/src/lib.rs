//! Exact algebra on configuration spaces: fibres of `S^⊠ S^⊗(V)`, the
//! Cauchy and Hadamard products, the kernel bracket, sections over finite
//! base spaces and their field-theoretic evaluation.
//!
//! ```
//! use uconf_core::expr::{parse_element, render};
//! use uconf_core::files::m3;
//! use uconf_core::bracket;
//!
//! let m = m3();
//! let a = parse_element("e[p,0] . e[p,0]", &m.base).unwrap();
//! let b = parse_element("e[q,0]", &m.base).unwrap();
//! assert_eq!(render(&bracket(&a, &b, &m.kernel).unwrap()), "2 * e[p,0] # 1[q]");
//! ```

pub mod configspace;
pub mod error;
pub mod expr;
pub mod fibre;
pub mod laws;
pub mod field_model;
pub mod files;
pub mod poisson;
pub mod random;
pub mod scalar;
pub mod sections;
pub mod tensor_lab;

pub use configspace::{BaseSpace, Configuration, PointId, PointSpec};
pub use error::{Error, Result};
pub use fibre::{CauchyMonomial, FibreElement, PointFactor};
pub use poisson::{bracket, Kernel};
pub use scalar::Scalar;
