//! Cochain complexes of the resolution, their cohomology and the long exact sequence.

pub mod complex;
pub mod les;
pub mod linalg;
pub mod sx;

pub use complex::{cohomology_of, h0_oracle, ChainComplex, Column, FinCochainComplex, TowerData};
pub use les::{column_cohomology, les, normalization_audit, ses_levelwise, Fault, LesReport, SesReport};
pub use linalg::{smith_normal_form, AbGroupPresentation, Lattice, Mat, Snf};
pub use sx::{build_sx, path_fattening, replacement_iso, ReplacementReport, SXData};
