//! Free probability toolkit.
//!
//! Non-crossing and interval partitions, free and Boolean cumulants of words
//! in two free elements, Cauchy/r/η transforms, subordination and free
//! additive convolution, free Poisson and free-GIG laws, series and
//! regression identities around the free Matsumoto-Yor property, and a
//! random-matrix Monte Carlo oracle.
//!
//! Numerical code is generic over [`scalar::Real`]; the aliases at the crate
//! root fix `f64`.

pub mod cumulants;
pub mod distributions;
pub mod error;
pub mod identities;
pub mod measure;
pub mod partitions;
pub mod quadrature;
pub mod rmt;
pub mod scalar;
pub mod transforms;

pub use cumulants::{
    check_factorization_formulas, Algebra, FactorizationReport, Letter, LetterPool, MarginalLaw,
    MomentContext, MomentSequence, SpectralFunction, Word,
};
pub use distributions::{
    gig_inversion_moments, make_free_gig, make_free_poisson, matsumoto_yor_pair, moment,
    FreeGigParams, FreePoissonParams, MeasureSpec,
};
pub use error::{Error, Result};
pub use measure::{MeasureKind, SpectralMeasure};
pub use partitions::{interval_partitions, noncrossing_partitions, Partition};
pub use scalar::{Field, Real};
pub use transforms::{free_convolve, subordination, FreeConvolution, SubordinationPoint};

/// `f64` measure.
pub type Measure = SpectralMeasure<f64>;
/// `f64` spectral function.
pub type Function = SpectralFunction<f64>;
/// `f64` subordination point.
pub type SubordinationPoint64 = SubordinationPoint<f64>;
/// `f64` complex number.
pub type C64 = num_complex::Complex<f64>;
/// Moment context over two `f64` measures.
pub type Context = MomentContext<SpectralMeasure<f64>>;
