pub mod case;
pub mod conservation;
pub mod expr;
pub mod jet;
pub mod linsolve;
pub mod noether;
pub mod reference;
pub mod selftest;
pub mod symmetry;
