pub mod cellular;
pub mod cli;
pub mod error;
pub mod hecke;
pub mod linalg;
pub mod qcoord;
pub mod report;
pub mod reptype;
pub mod scalars;
pub mod schur;
pub mod tensor;
pub mod weylb;
