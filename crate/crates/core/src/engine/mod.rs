//! Expansion, search and verification machinery.

pub mod closed_form;
pub mod congruence;
pub mod residue;
pub mod search;
pub mod suite;
