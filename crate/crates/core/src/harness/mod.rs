//! Benchmarks, equivalence checks and image I/O.

pub mod bench;
pub mod ppm;
pub mod verify;

pub use bench::{bench_laplace, bench_projection, nrdof, BenchOptions, BenchRecord};
pub use ppm::{read_ppm, write_ppm, PpmImage};
pub use verify::{verify_equivalence, CheckReport, Suite};
