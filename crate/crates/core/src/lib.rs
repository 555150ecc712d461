pub mod catalog;
pub mod domain;
pub mod enneper;
pub mod expr;
pub mod kalgebra;
pub mod mesh;
pub mod numfmt;
pub mod quadrature;
pub mod verify;
