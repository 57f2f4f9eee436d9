//! The star-shaped negative-definite plumbing bounded by `Σ(a₁,…,aₙ)` and
//! its intersection form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, SparseLdl};
use crate::seifert::{Multiplicities, NormalizedPresentation};

/// Negative continued fraction `[k₁,…,k_ℓ] = k₁ − 1/(k₂ − 1/(⋯ − 1/k_ℓ))`
/// with every `kᵢ ≤ −2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegContinuedFraction {
    pub entries: Vec<i64>,
}

impl NegContinuedFraction {
    pub fn evaluate(&self) -> BigRational {
        let mut it = self.entries.iter().rev();
        let last = it
            .next()
            .expect("continued fraction has at least one entry");
        let mut acc = BigRational::from_integer(BigInt::from(*last));
        for &k in it {
            acc = BigRational::from_integer(BigInt::from(k)) - acc.recip();
        }
        acc
    }
}

pub fn neg_cf(numerator: i64, denominator: i64) -> Result<NegContinuedFraction> {
    if denominator == 0 {
        return Err(Error::InvalidRange(format!("{numerator}/0")));
    }
    let mut x = BigRational::new(BigInt::from(numerator), BigInt::from(denominator));
    if x >= -BigRational::one() {
        return Err(Error::InvalidRange(x.to_string()));
    }
    let mut entries = Vec::new();
    loop {
        if x.is_integer() {
            entries.push(i64::try_from(x.to_integer()).expect("entry fits in i64"));
            break;
        }
        let k = x.floor();
        entries.push(i64::try_from(k.to_integer()).expect("entry fits in i64"));
        x = -(x - k).recip();
    }
    Ok(NegContinuedFraction { entries })
}

/// Star-shaped plumbing tree. Vertex 0 is the center; leg `j` follows,
/// listed from the center outward.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlumbingGraph {
    pub center: i64,
    pub legs: Vec<Vec<i64>>,
}

impl PlumbingGraph {
    pub fn vertex_count(&self) -> usize {
        1 + self.legs.iter().map(Vec::len).sum::<usize>()
    }

    /// Weights in canonical vertex order.
    pub fn weights(&self) -> Vec<i64> {
        std::iter::once(self.center)
            .chain(self.legs.iter().flatten().copied())
            .collect()
    }

    /// Tree edges as pairs of vertex indices.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        let mut next = 1;
        for leg in &self.legs {
            let mut prev = 0;
            for _ in leg {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        edges
    }
}

pub fn build_plumbing(norm: &NormalizedPresentation, m: &Multiplicities) -> PlumbingGraph {
    let legs = m
        .as_slice()
        .iter()
        .zip(&norm.tilde_b)
        .map(|(&a, &b)| {
            neg_cf(a, b)
                .expect("a/b̃ < -1 for normalized invariants")
                .entries
        })
        .collect();
    PlumbingGraph {
        center: norm.e0,
        legs,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    pub q: IntMatrix,
    pub det: BigInt,
    pub negative_definite: bool,
}

impl IntersectionForm {
    /// Wraps an arbitrary symmetric integer matrix.
    pub fn from_matrix(q: IntMatrix) -> Self {
        match negative_definite_det(&q) {
            Some(det) => IntersectionForm {
                q,
                det,
                negative_definite: true,
            },
            None => {
                let det = linalg::det(&q);
                let negative_definite = linalg::is_positive_definite(&linalg::negate(&q));
                IntersectionForm {
                    q,
                    det,
                    negative_definite,
                }
            }
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_matrix(linalg::to_big(rows))
    }

    pub fn rank(&self) -> usize {
        self.q.len()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.abs().is_one()
    }

    pub fn is_even(&self) -> bool {
        self.q.iter().enumerate().all(|(i, row)| row[i].is_even())
    }
}

/// `det Q` when `−Q` factors with positive pivots, `None` otherwise.
fn negative_definite_det(q: &IntMatrix) -> Option<BigInt> {
    let ldl = SparseLdl::factor(q, -1)?;
    let det = ldl.det();
    debug_assert!(det.is_integer());
    let det = det.to_integer();
    Some(if q.len().is_odd() { -det } else { det })
}

pub fn intersection_form(g: &PlumbingGraph) -> IntersectionForm {
    let weights = g.weights();
    let m = weights.len();
    let mut q = vec![vec![BigInt::zero(); m]; m];
    for (i, &w) in weights.iter().enumerate() {
        q[i][i] = BigInt::from(w);
    }
    for (i, j) in g.edges() {
        q[i][j] = BigInt::one();
        q[j][i] = BigInt::one();
    }
    IntersectionForm::from_matrix(q)
}

/// `(Q⁻¹)₁₁ = det(Q with row/column 1 removed) / det Q`, by Cramer's rule.
pub fn inverse_entry_11(f: &IntersectionForm) -> Result<BigRational> {
    if f.det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let minor = linalg::minor_matrix(&f.q, 0, 0);
    let cofactor = match f.negative_definite {
        true => {
            negative_definite_det(&minor).expect("principal minors of a definite form are definite")
        }
        false => linalg::det(&minor),
    };
    Ok(BigRational::new(cofactor, f.det.clone()))
}
