//! The 11-gene encoding.
//!
//! Genes are unbounded reals. Decoding squashes each through a logistic
//! sigmoid and scales it into the gene's physical range, so every real vector
//! is a legal individual and evolution never needs bound handling.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const GENOME_LEN: usize = 11;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Genome(pub [f64; GENOME_LEN]);

impl Genome {
    pub fn zeros() -> Self {
        Genome([0.0; GENOME_LEN])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Index<usize> for Genome {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Logistic sigmoid. At double precision the open interval closes: raw ≥ 40
/// rounds to exactly 1.0 and raw ≤ -746 underflows to exactly 0.0, so both
/// range endpoints are reachable.
pub fn squash(raw: f64) -> f64 {
    1.0 / (1.0 + (-raw).exp())
}

/// Inverse of [`squash`] for interior points; used to build genomes hitting
/// chosen decoded values.
pub fn unsquash(unit: f64) -> f64 {
    assert!(unit > 0.0 && unit < 1.0, "unsquash needs (0,1), got {unit}");
    (unit / (1.0 - unit)).ln()
}

#[derive(Clone, Copy, Debug)]
pub struct GeneSpec {
    pub name: &'static str,
    pub lo: f64,
    pub hi: f64,
}

/// Physical range per gene, in genome order.
pub const GENE_SPECS: [GeneSpec; GENOME_LEN] = [
    GeneSpec {
        name: "nose_length",
        lo: 0.05,
        hi: 0.3,
    },
    GeneSpec {
        name: "nose_type",
        lo: 0.0,
        hi: 6.0,
    },
    GeneSpec {
        name: "nose_shape",
        lo: 0.0,
        hi: 1.0,
    },
    GeneSpec {
        name: "nose_thickness",
        lo: 0.001,
        hi: 0.009,
    },
    GeneSpec {
        name: "body_length",
        lo: 0.2,
        hi: 1.0,
    },
    GeneSpec {
        name: "fin_count",
        lo: 2.0,
        hi: 6.0,
    },
    GeneSpec {
        name: "fin_x1",
        lo: 0.0,
        hi: 0.1,
    },
    GeneSpec {
        name: "fin_y1",
        lo: 0.0,
        hi: 0.1,
    },
    GeneSpec {
        name: "fin_x2",
        lo: 0.0,
        hi: 0.1,
    },
    GeneSpec {
        name: "fin_y2",
        lo: 0.0,
        hi: 0.1,
    },
    GeneSpec {
        name: "fin_x3",
        lo: 0.02,
        hi: 0.1,
    },
];

/// Squash-and-scale a single gene into its physical range. The final clamp
/// absorbs the one-ulp overshoot that `lo + 1.0 * (hi - lo)` can produce.
pub fn scale_gene(index: usize, raw: f64) -> f64 {
    let spec = &GENE_SPECS[index];
    (spec.lo + squash(raw) * (spec.hi - spec.lo)).clamp(spec.lo, spec.hi)
}

/// Parses a comma-separated list of 11 finite reals, as accepted on the
/// command line. Whitespace around entries is ignored.
pub fn parse_genome(text: &str) -> Result<Genome> {
    let mut values = [0.0; GENOME_LEN];
    let mut count = 0;
    for part in text.split(',') {
        let trimmed = part.trim();
        if count == GENOME_LEN {
            return Err(Error::GenomeParse(format!(
                "expected {GENOME_LEN} values, got more"
            )));
        }
        let v: f64 = trimmed
            .parse()
            .map_err(|_| Error::GenomeParse(format!("not a number: {trimmed:?}")))?;
        if !v.is_finite() {
            return Err(Error::GenomeParse(format!("gene {count} is not finite")));
        }
        values[count] = v;
        count += 1;
    }
    if count != GENOME_LEN {
        return Err(Error::GenomeParse(format!(
            "expected {GENOME_LEN} values, got {count}"
        )));
    }
    Ok(Genome(values))
}
