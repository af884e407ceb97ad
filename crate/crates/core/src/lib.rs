//! Numerical toolkit for non-increasing rearrangements, Lorentz norms and
//! mixed Lipschitz norms of sections of functions on the line and the plane.
//!
//! Functions are represented on uniform grids as cell-constant samples that
//! vanish outside a finite window. Under that convention every rearrangement,
//! Lorentz integral and Steklov average in this crate is an exact finite sum,
//! so the inequality checks in [`theorems`], [`smoothing`] and
//! [`rearrangement`] compare closed-form quantities rather than quadratures.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod corpus;
pub mod counterexample;
pub mod error;
pub mod grid;
pub mod mixed;
pub mod norms;
pub mod numeric;
pub mod rearrangement;
pub mod smoothing;
pub mod sobolev;
pub mod theorems;
pub mod verdict;

pub use error::{Error, Result};
pub use grid::{GridCellMeasure, SampledFunction1D, SampledFunction2D};
pub use mixed::{MixedNormReport, SectionProfiles};
pub use norms::{LipReport, LorentzParams};
pub use rearrangement::{DistributionFunction, StepProfile};
pub use verdict::{RefinementTrace, VerdictRecord};
