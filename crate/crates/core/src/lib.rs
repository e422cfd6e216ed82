//! Temperature-2 tile assembly engine with an oracle, tileset compiler and
//! verifier for the statistically self-similar Sierpinski triangle.

pub mod atam;
pub mod cli;
pub mod compiler;
pub mod io;
pub mod oracle;
pub mod prefix;
pub mod verifier;

pub use prefix::CodingPrefix;
