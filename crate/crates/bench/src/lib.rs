//! Shared fixtures for the benchmarks under `benches/`.

use frustration::models::{substream_rng, Lattice, LatticeKind, ModelSpec, DEFAULT_TILING};
use frustration::Graph;

/// Frustration graph of one brick-lattice draw with the full alphabet.
pub fn brick_graph(p: f64, sample: u64) -> Graph {
    let lat = Lattice::new(LatticeKind::Brick, DEFAULT_TILING, &Lattice::full_alphabet()).expect("default tiling");
    lat.frustration_graph(lat.sample_mask(p, &mut substream_rng(1, sample)).expect("p > 0"))
}

/// One `G(n, p)` draw.
pub fn gnp_graph(n: usize, p: f64, sample: u64) -> Graph {
    ModelSpec::Gnp { n, p }.sample_graph(&mut substream_rng(2, sample)).expect("valid p")
}
