//! Exact model counting for first-order knowledge bases with statistical
//! statements, and the degree of support they lend a query.
//!
//! ```
//! use statsupport::support::{support, EngineConfig, SizeRange, Status};
//! use statsupport::syntax::{parse_kb, parse_sentence};
//!
//! let kb = parse_kb("%(A(x), B(x), 4/5, 4/5). B(a).").unwrap();
//! let cfg = EngineConfig::default().with_sizes(SizeRange::new(5, 10).unwrap());
//! let v = support(&kb, &parse_sentence("A(a)").unwrap(), &cfg).unwrap();
//! assert_eq!(v.status, Status::Defined);
//! assert_eq!(v.interval.unwrap().to_string(), "[4/5, 4/5]");
//! ```

pub mod acceptance;
pub mod census;
pub mod error;
mod eval;
pub mod model;
pub mod rational;
pub mod support;
pub mod syntax;
pub mod theorems;

pub use error::{Error, Result};
