//! DOT and JSON exports of a finite truncation of the building.

use super::{BVertex, Building, Chamber, Cube};
use crate::word::Element;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write;

/// The chambers within a radius of `C_*`, with their vertices and cubes.
#[derive(Clone, Debug, Serialize)]
pub struct Truncation {
    pub radius: usize,
    pub vertex_names: Vec<String>,
    pub chambers: Vec<ChamberRecord>,
    pub vertices: Vec<VertexRecord>,
    pub cubes: Vec<CubeRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChamberRecord {
    pub id: usize,
    pub label: Element,
    pub center: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexRecord {
    pub id: usize,
    #[serde(flatten)]
    pub vertex: BVertex,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CubeRecord {
    pub id: usize,
    #[serde(flatten)]
    pub cube: Cube,
    pub dim: usize,
    pub vertices: Vec<usize>,
}

impl Truncation {
    pub fn new(b: &Building, radius: usize) -> Self {
        let chambers: Vec<Chamber> = b.ball(radius);
        let vertices = b.vertices_of(&chambers);
        let vid: BTreeMap<&BVertex, usize> = vertices.iter().enumerate().map(|(k, v)| (v, k)).collect();
        let mut cubes: Vec<Cube> = chambers.iter().flat_map(|c| b.chamber_cubes(c)).collect();
        cubes.sort();
        cubes.dedup();
        let chamber_records = chambers
            .iter()
            .enumerate()
            .map(|(id, c)| ChamberRecord { id, label: c.0.clone(), center: vid[&b.center(c)] })
            .collect();
        let cube_records = cubes
            .into_iter()
            .enumerate()
            .map(|(id, q)| {
                let mut vs: Vec<usize> = b.cube_vertices(&q).iter().map(|v| vid[v]).collect();
                vs.sort_unstable();
                CubeRecord { id, dim: q.dim(), cube: q, vertices: vs }
            })
            .collect();
        let vertex_records = vertices
            .iter()
            .enumerate()
            .map(|(id, v)| VertexRecord { id, vertex: v.clone(), rank: v.rank() })
            .collect();
        Truncation {
            radius,
            vertex_names: b.graph().names().to_vec(),
            chambers: chamber_records,
            vertices: vertex_records,
            cubes: cube_records,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("truncation serializes")
    }

    /// The 1-skeleton as an undirected DOT graph.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph building {{");
        let _ = writeln!(out, "  // radius {}, {} chambers", self.radius, self.chambers.len());
        for v in &self.vertices {
            let names: Vec<&str> = v.vertex.ty.iter().map(|i| self.vertex_names[i].as_str()).collect();
            let _ = writeln!(
                out,
                "  v{} [type=\"{{{}}}\", rank={}, rep=\"{:?}\"];",
                v.id,
                names.join(","),
                v.rank,
                v.vertex.rep
            );
        }
        for q in self.cubes.iter().filter(|q| q.dim == 1) {
            let label = q.cube.hi.difference(q.cube.lo).single().expect("edge");
            let _ = writeln!(
                out,
                "  v{} -- v{} [label=\"{}\"];",
                q.vertices[0], q.vertices[1], self.vertex_names[label]
            );
        }
        let _ = writeln!(out, "}}");
        out
    }
}
