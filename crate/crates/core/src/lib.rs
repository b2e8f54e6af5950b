pub mod divisible;
pub mod error;
pub mod exactness;
pub mod intlinalg;
pub mod module;
pub mod ring;
pub mod splitting;

pub use error::{Error, Result};
pub use exactness::{brute_force_exactness, is_exact, ExactnessReport, NodeCheck, Orientation};
pub use intlinalg::{GradedGroup, GroupPart, IntMatrix, Localization, Parity, Rational};
pub use module::{Extension, KGModule, ModuleMap};
pub use ring::{Arrow, Poly, RingElement};
