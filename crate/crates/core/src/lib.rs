//! Monte Carlo simulator for quantum-logic entanglement experiments on a
//! trapped atom-molecule ion pair: state evolution, heralded preparation,
//! parity-fringe analysis, and the frequency-comb arithmetic behind the
//! molecular qubit drives.

pub mod campaign;
pub mod comb;
pub mod config;
pub mod fit;
pub mod hilbert;
pub mod measure;
pub mod noise;
pub mod protocols;
pub mod pulse;
