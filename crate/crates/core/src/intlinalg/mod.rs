//! Exact linear algebra over localizations Z[1/m] of the integers.

pub mod congruence;
pub mod echelon;
pub mod group;
pub mod localization;
pub mod matrix;
pub mod smith;

pub use congruence::CongruenceSystem;
pub use echelon::{image, kernel, solve, ColumnEchelon};
pub use group::{
    image_equals_kernel, image_kernel_defect, is_zero_in, kernel_lattice, reduce_in, relation_columns, ExactnessDefect,
    GradedGroup, GroupPart, Parity, Subquotient,
};
pub use localization::{is_prime, mod_inverse, prime_factors, reduce_mod, Localization};
pub use matrix::{rat, rat_frac, IntMatrix, Rational};
pub use smith::{smith_normal_form, Smith};
