//! Instance generators, graph text I/O, experiment drivers and the
//! acceptance corpus.

pub mod acceptance;
pub mod corpus;
pub mod experiments;
pub mod generate;
pub mod io;

pub use generate::{generate, Generator};
pub use io::{parse_graph, write_graph, ParsedGraph};
