//! Exact computations in graph products of finite groups and their
//! right-angled buildings.

pub mod atlases;
pub mod building;
pub mod catalog;
pub mod error;
pub mod fuchsian;
pub mod graph;
pub mod groupoids;
pub mod group;
pub mod hyperplanes;
pub mod parallel;
pub mod report;
pub mod sets;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use graph::DefiningGraph;
pub use group::FiniteGroup;
pub use sets::{VertexPerm, VertexSet};
pub use word::{Element, Syllable};
