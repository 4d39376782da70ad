//! Binary forms `R_n`, `I_n` defined by `(x + yi)^n = R_n(x, y) + I_n(x, y) i`.
//!
//! The crate builds the forms exactly, computes their rational automorphism
//! groups and weights, evaluates fundamental-region areas by two independent
//! quadratures next to the beta-function closed form, and counts represented
//! integers by exhaustive lattice enumeration.
//!
//! ```
//! use binforms::forms::{build_rn, FormKind};
//! use binforms::area::closed_form_area;
//!
//! let r4 = build_rn(4).unwrap();
//! assert_eq!(r4.to_string(), "x^4 - 6x^2y^2 + y^4");
//! assert!((closed_form_area(4).unwrap() - 5.244115108584).abs() < 1e-9);
//! # let _ = FormKind::Rn;
//! ```

pub mod area;
pub mod autgroup;
pub mod count;
mod error;
pub mod exact;
pub mod forms;
pub mod quad;
pub mod roots;

pub use error::{Error, Result};
