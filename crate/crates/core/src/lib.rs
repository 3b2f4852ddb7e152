//! Impact Vitality: a citation indicator built on the yearly number of
//! publications citing a researcher's work.
//!
//! The crate reduces author-centric citation datasets to yearly citing
//! counts, computes Impact Vitality profiles over moving or fixed-start
//! windows, and provides the h-index and AR-index alongside cohort
//! statistics for comparing groups of candidates.

pub mod cli;
pub mod cohort;
pub mod error;
pub mod filters;
pub mod indicators;
pub mod io;
pub mod model;

pub use error::{Error, Result};
pub use filters::FilterSet;
pub use indicators::{impact_vitality, iv_profile, IvPoint, IvProfile, WindowSpec};
pub use model::{CitationDataset, YearlyCitingCounts};
