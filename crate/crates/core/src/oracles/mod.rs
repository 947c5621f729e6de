//! Independent references the transform solution is checked against.

pub mod band;
pub mod compare;
pub mod fd;
pub mod whole_line;

pub use compare::{compare, Field, Norm};
pub use fd::{fd_for_problem, fd_reference, richardson_study, FdGrid, FdSolution, RichardsonStudy};
pub use whole_line::WholeLineOracle;
