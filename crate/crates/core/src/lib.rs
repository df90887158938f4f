//! Level sets of Birkhoff averages on symbolic systems.
//!
//! The crate evaluates both sides of the variational description of level
//! sets: the entropy side through pressure and convex duality
//! ([`thermo`], [`spectra`], [`suspension`]) and the counting side through
//! exact lattice dynamic programming ([`oracle`]). Orbits with prescribed
//! oscillation are built explicitly by [`gluer`].

// `!(x > 0.0)` is used deliberately so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Dense numerical kernels index several arrays in lockstep.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod gluer;
pub mod io;
pub mod measure;
pub mod observable;
pub mod oracle;
pub mod rational;
pub mod shift;
pub mod spectra;
pub mod suspension;
pub mod thermo;

pub use error::{Error, Result};
pub use gluer::{estimate_limit_set, glue_orbit, verify_oscillation, GluedOrbit, GluingSchedule, OscillationReport};
pub use measure::{
    convex_combine, empirical_measure, integrate, markov_entropy, weakstar_distance, EmpiricalMeasure, MarkovMeasure,
    MarkovMixtureMeasure,
};
pub use observable::{birkhoff_average, birkhoff_stats, BirkhoffStats, Observable};
pub use oracle::{
    bowen_ball_membership, count_level_words, count_separated, count_words, pressure_of_set_estimate, MistakeFunction,
};
pub use rational::{format_rational, parse_rational, Rational};
pub use shift::{
    beta_admissible, connector_word, higher_block_recode, transition_gap, validate_system, RawSystem, Recoding, Symbol,
    SymbolicSystem, SystemKind, TransitionGap, Word,
};
pub use spectra::{
    joint_level_value, level_set_value, reg_irreg_value, spectrum_curve, support_extremes, Certificate, LevelSetQuery,
    SpectrumPoint, SpectrumResult,
};
pub use suspension::{abramov_entropy, suspension_level_value, RoofFunction};
pub use thermo::{
    average_range, constrained_value, constrained_value_with, equilibrium_state, evaluate_pressure, pressure,
    transfer_matrix, ConstrainedValue, DualOptions, PressureEvaluation, TransferMatrix, ValueRange,
};
