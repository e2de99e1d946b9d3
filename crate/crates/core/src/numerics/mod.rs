pub mod calculus;
pub mod elliptic;
pub mod grid;
pub mod interp;
pub mod ode;
pub mod shooting;
pub mod special;
