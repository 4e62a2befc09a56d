//! Numerical checks of the decay, support and bound estimates.

mod ab;
mod bounds;
mod decay;
mod fresnel;
mod quad;
mod report;
mod suites;

pub use ab::{
    ab_pair, check_ab_lemma, check_p_lemma, cutoff_radius, integral_a, integral_b, p1, p2, AbCache,
    PGrid, AB_SPEC,
};
pub use bounds::{
    aligned_index, boundary_coefficient, boundary_samples, check_lower_bound, check_upper_bound,
    far_field_profile, far_translate, fit_upper_constant, fit_upper_constants, misaligned_index,
    shape_shears, BoundarySample, BoundsConfig, FarFieldSample, FarTranslate,
};
pub use decay::{check_decay_scales, check_spatial_decay, decay_envelope};
pub use fresnel::{
    check_fresnel_lemma, fresnel, fresnel_fc, fresnel_fs, FresnelValue, FRESNEL_SPEC,
};
pub use quad::{integrate, Quadrature, QuadratureSpec};
pub use report::{ReportPoint, VerificationReport};
pub use suites::{
    check_fftfold, check_support, check_support_with, check_windows, fold_deviation,
    fold_test_shears,
};
