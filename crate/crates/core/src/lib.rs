//! Exact computation of intersection cohomology Poincaré polynomials of
//! Vinberg–Popov varieties `X_G = Spec O(G/U)` for simply connected semisimple
//! groups, together with the Betti-number and generating-function checks
//! built on top of them.
//!
//! ```
//! use icvp_core::{Engine, GroupType, IntPoly};
//!
//! let engine = Engine::new();
//! let g2: GroupType = "G2".parse().unwrap();
//! assert_eq!(engine.ic_poincare(&g2).unwrap(), IntPoly::from_coeffs([1, 0, 1]));
//! ```

pub mod betti;
pub mod cache;
pub mod error;
pub mod genfun;
pub mod ic_core;
pub mod polyring;
pub mod report;
pub mod root_data;
pub mod verify;

pub use error::{Error, Result};
pub use ic_core::{Engine, EngineOptions, MemoCache};
pub use polyring::{IntPoly, TruncSeries};
pub use report::{Report, Status};
pub use root_data::{Family, GroupType, NodeSet, SimpleType};
