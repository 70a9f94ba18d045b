pub mod arith;
pub mod assembler;
pub mod bigfloat;
pub mod cli;
pub mod clifford;
pub mod coeffs;
pub mod expr;
pub mod finding;
pub mod geometric;
pub mod fixtures;
pub mod poly;
pub mod printed;
pub mod quadrature;
pub mod ratfunc;
pub mod report;
pub mod symbols;
