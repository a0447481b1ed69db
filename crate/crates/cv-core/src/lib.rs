//! Exact-arithmetic toolkit for the commuting variety C(u) of the
//! nilradical of a Borel subalgebra: root data, Chevalley brackets,
//! centralizer dimensions, the grading/linkedness elimination strategy,
//! degeneration-certificate checking, and an independent finite-field
//! brute-force oracle.

pub mod centralizers;
pub mod certificates;
pub mod chevalley;
pub mod exactla;
pub mod fforacle;
pub mod rootdata;
pub mod strategy;
