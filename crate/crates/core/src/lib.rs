//! Splitting types of restricted tangent bundles `T_X|_C` and normal bundles `N_{C/X}` for a
//! rational normal curve `C` of degree `e` on a degree-`d` hypersurface `X` in `P^n`.
//!
//! Everything is exact and generic over a [`Field`]: big rationals or a prime field.

pub mod catalog;
pub mod constructor;
pub mod error;
pub mod field;
pub mod form;
pub mod ideal;
pub mod linalg;
pub mod poly;
pub mod sheafmap;
pub mod splitting;

pub use catalog::{coarse_verdict, predicted_splitting, Prediction, Verdict};
pub use constructor::{
    extend_dimension, extend_with_kernel, extension_plan, extension_schedule, generate_example,
    lift_psi_targets, ExtensionStep, ExtensionStrategy,
};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, FieldTask, Fp};
pub use form::BinaryForm;
pub use ideal::{decompose_into_ideal, parse_hsf, IdealCombination};
pub use poly::{build_quadric, gradient_on_curve, lift_binary_form, CurveContext, MultiPoly};
pub use sheafmap::{
    build_beta, build_delta, build_df, build_gradient, build_psi, check_smooth_along_curve,
    h0_euler_crosscheck, GradedSheafMap,
};
pub use splitting::{expected_max, Incomparable, SplittingType};

pub type Rational = num_rational::BigRational;
pub type Gf32003 = Fp<32003>;
