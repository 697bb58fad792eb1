//! JSON, DOT and f-vector serialization of complexes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complex::{ChromaticComplex, Color, Vertex, Vid};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub vid: Vid,
    pub color: usize,
    pub label: String,
}

/// On-disk form of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub n: usize,
    pub vertices: Vec<VertexRecord>,
    pub facets: Vec<Vec<Vid>>,
}

impl From<&ChromaticComplex> for ComplexJson {
    fn from(c: &ChromaticComplex) -> Self {
        let vertices = c
            .vertex_table()
            .iter()
            .enumerate()
            .map(|(vid, v)| VertexRecord { vid, color: v.color.0, label: v.label.clone() })
            .collect();
        let facets = c.facets().iter().map(|f| f.vertices().to_vec()).collect();
        ComplexJson { n: c.n(), vertices, facets }
    }
}

impl TryFrom<ComplexJson> for ChromaticComplex {
    type Error = Error;

    fn try_from(j: ComplexJson) -> Result<Self> {
        let mut records = j.vertices;
        records.sort_by_key(|r| r.vid);
        let mut table = Vec::with_capacity(records.len());
        for (i, r) in records.into_iter().enumerate() {
            if r.vid != i {
                return Err(Error::Parse(format!("vids must be dense from 0; missing {i}")));
            }
            table.push(Vertex::new(Color(r.color), r.label));
        }
        ChromaticComplex::new(j.n, table, j.facets)
    }
}

pub fn to_json(c: &ChromaticComplex) -> String {
    serde_json::to_string_pretty(&ComplexJson::from(c)).expect("complex serializes")
}

pub fn from_json(s: &str) -> Result<ChromaticComplex> {
    let j: ComplexJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    ChromaticComplex::try_from(j)
}

/// 1-skeleton as an undirected graph; vertices carry a `color` attribute.
pub fn to_dot(c: &ChromaticComplex) -> String {
    const PALETTE: [&str; 8] =
        ["red", "blue", "green", "orange", "purple", "brown", "cyan", "magenta"];
    let mut out = String::from("graph complex {\n");
    for v in c.vertex_ids() {
        let col = c.color(v).0;
        let label = c.label(v).replace('"', "\\\"");
        let _ = writeln!(
            out,
            "  v{v} [color={col}, label=\"{label}\", fillcolor=\"{}\", style=filled];",
            PALETTE[col % PALETTE.len()]
        );
    }
    for (u, w) in c.edges() {
        let _ = writeln!(out, "  v{u} -- v{w};");
    }
    out.push_str("}\n");
    out
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Dot,
    CsvFVector,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "dot" => Ok(Self::Dot),
            "csv-fvector" => Ok(Self::CsvFVector),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

pub fn export(c: &ChromaticComplex, format: ExportFormat) -> Vec<u8> {
    let s = match format {
        ExportFormat::Json => to_json(c),
        ExportFormat::Dot => to_dot(c),
        ExportFormat::CsvFVector => c.f_vector().to_csv(),
    };
    s.into_bytes()
}

/// Export by format name.
pub fn export_named(c: &ChromaticComplex, format: &str) -> Result<Vec<u8>> {
    Ok(export(c, format.parse()?))
}
