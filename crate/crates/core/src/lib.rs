pub mod bbob;
pub mod error;
pub mod problem;
pub mod rng;
pub mod treegen;
pub mod sampling;
pub mod ela;
pub mod subspace;
pub mod analysis;
pub mod io;
pub mod pipeline;
