//! Closed-form round bounds for bounded full-information protocols.

use serde::{Serialize, Serializer};

use crate::complex::ChromaticComplex;
use crate::encoding::lower_bound_rounds;
use crate::error::{Error, Result};
use crate::greedy::upper_bound_rounds;
use crate::scalar::{factorial, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport<S: Scalar> {
    pub n: usize,
    pub r: usize,
    pub b: u32,
    /// (n!)^{r-1} · 2^{n-b}; absent for two processes
    #[serde(serialize_with = "ser_opt_display")]
    pub lower_formula: Option<S>,
    /// lower_formula · n, the snapshot-model upper template
    #[serde(serialize_with = "ser_opt_display")]
    pub snapshot_upper_formula: Option<S>,
    /// two processes: a single round suffices
    pub round_complexity: Option<usize>,
    pub degree_lower_bound: Option<usize>,
    pub cover_upper_bound: Option<usize>,
    pub measured_rounds: Option<usize>,
}

fn ser_opt_display<S: Scalar, Z: Serializer>(v: &Option<S>, z: Z) -> std::result::Result<Z::Ok, Z::Error> {
    match v {
        Some(x) => z.serialize_str(&x.to_string()),
        None => z.serialize_none(),
    }
}

/// Evaluates the closed forms for n processes, r iterations and b-bit
/// registers, plus the per-complex bounds when a complex is given.
pub fn bounds_table<S: Scalar>(
    n: usize,
    r: usize,
    b: u32,
    complex: Option<&ChromaticComplex>,
) -> Result<BoundsReport<S>> {
    if n < 2 || r == 0 || b == 0 {
        return Err(Error::InvalidParameters(format!("need n >= 2, r >= 1, b >= 1 (got n={n}, r={r}, b={b})")));
    }
    let (lower_formula, snapshot_upper_formula, round_complexity) = if n == 2 {
        (None, None, Some(1))
    } else {
        let mut v = S::pow2(n as i64 - b as i64);
        let f = factorial::<S>(n);
        for _ in 1..r {
            v = v * f.clone();
        }
        let up = v.clone() * S::from_count(n);
        (Some(v), Some(up), None)
    };
    let (degree_lower_bound, cover_upper_bound) = match complex {
        Some(c) => (Some(lower_bound_rounds(c, b)?), Some(upper_bound_rounds(c, b)?)),
        None => (None, None),
    };
    Ok(BoundsReport {
        n,
        r,
        b,
        lower_formula,
        snapshot_upper_formula,
        round_complexity,
        degree_lower_bound,
        cover_upper_bound,
        measured_rounds: None,
    })
}

impl<S: Scalar> BoundsReport<S> {
    pub fn with_measured(mut self, rounds: usize) -> Self {
        self.measured_rounds = Some(rounds);
        self
    }

    /// degree_lower_bound ≤ cover_upper_bound, and the measured count sits between them.
    pub fn consistent(&self) -> bool {
        let ordered = match (self.degree_lower_bound, self.cover_upper_bound) {
            (Some(l), Some(u)) => l <= u && u == 4 * l,
            _ => true,
        };
        let measured = match (self.degree_lower_bound, self.measured_rounds) {
            (Some(l), Some(m)) => l <= m,
            _ => true,
        };
        ordered && measured
    }
}
