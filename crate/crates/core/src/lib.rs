//! Combinatorics of discrete groupoid correspondences: path spaces, the inverse
//! semigroup of singleton slices, the germ groupoid model and finite matrix
//! representations.

pub mod actions;
pub mod base;
pub mod correspondence;
pub mod document;
pub mod fixtures;
pub mod groupoid;
pub mod islice;
pub mod model;
pub mod pathspace;
pub mod presented;
pub mod rep;
pub mod report;
