pub mod classifier;
pub mod expr;
pub mod graph;
pub mod linalg;
pub mod lpa;
pub mod matrix;
pub mod scalar;
pub mod series;
