//! Witness construction, projection profiles, growth-law scans, weighted
//! scans, and exponent fits.

mod fit;
mod profile;
mod record;
mod scan;
mod weighted;
mod witness;

pub use fit::{fit_exponent, fit_exponent_xy, fit_linear, Fit};
pub use profile::{projection_l1_profile, projection_norms, sinc_l1_oracle, BandNormCache, ProfileConfig};
pub use record::{ExperimentRecord, Value};
pub use scan::{
    growth_intervals, lower_bound_point, lower_bound_scan, p_rule, scan_collection, witness_norm, ScanConfig,
    ScanPoint, WitnessNorm,
};
pub use weighted::{family_pairs, test_family, weighted_point, weighted_scan, WeightedConfig, WeightedPoint};
pub use witness::{eta_witness, witness_lp_profile, witness_spectrum, WitnessSpec};
