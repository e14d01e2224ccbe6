//! Parameter scans, exponent fits, frequency extraction and bound checks.

mod fit;
mod frequency;
mod scan;
mod verify;

pub use fit::{fit_decay_exponent, octave_maxima, FitResult, WindowGrid};
pub use frequency::{dominant_frequency, FrequencyOutcome};
pub use scan::{scan, PredictionMeta, ScanOptions, ScanRow, ScanTable};
pub use verify::{
    interior_angles, interior_sensitivity, verify_bound, BoundKind, BoundReport, InteriorReport, DEFAULT_EPSILON0,
    DEFAULT_THRESHOLD, SENSITIVITY_EPSILON0,
};
