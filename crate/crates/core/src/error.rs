use thiserror::Error;

use crate::complex::{Color, Vid};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("facet {facet:?} repeats color {color}")]
    DuplicateColorInFacet { facet: Vec<Vid>, color: Color },

    #[error("facet {inner:?} is contained in facet {outer:?}")]
    FacetContainment { inner: Vec<Vid>, outer: Vec<Vid> },

    #[error("facet references unknown vertex {0}")]
    DanglingVertexReference(Vid),

    #[error("color {color} out of range for n = {n}")]
    ColorOutOfRange { color: Color, n: usize },

    #[error("vertex {0} is not in the complex")]
    VertexNotInComplex(Vid),

    #[error("simplex {0:?} is not a face of the complex")]
    SimplexNotInComplex(Vec<Vid>),

    #[error("complexes do not share a vertex space")]
    IncompatibleVertexSpaces,

    #[error("{0:?} is not a facet of the complex")]
    NotAFacet(Vec<Vid>),

    #[error("argument is not a subcomplex")]
    NotASubcomplex,

    #[error("resource limit exceeded: {what} ({count} > {limit})")]
    ResourceLimit { what: &'static str, count: usize, limit: usize },

    #[error("ambiguous decode: reader at vertex {reader} sees code {code} from color {source_color}, candidates {candidates:?}")]
    AmbiguousDecode { reader: Vid, source_color: Color, code: u32, candidates: Vec<Vid> },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
