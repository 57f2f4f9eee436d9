//! Exact lattice searches on negative-definite intersection forms:
//! norm −1 vectors, diagonalization over `ℤ`, the maximal pairing of sharp
//! characteristic vectors with the central dual class, and the maximal
//! characteristic square that determines the d-invariant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, SparseLdl};
use crate::plumbing::IntersectionForm;

pub const DEFAULT_CAP: u64 = 1_000_000;

/// Search budget, counted in enumeration nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub cap: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { cap: DEFAULT_CAP }
    }
}

/// Fincke–Pohst enumeration of integer points `y` with
/// `(y − c)ᵀ H (y − c) ≤ bound` for a positive-definite `H` given by its
/// sparse `LDLᵀ` factor. Coordinates at each level are visited nearest-first,
/// so when `shrink` is set the bound tightens to the best leaf found so far.
struct Enumerator {
    ldl: SparseLdl,
    /// center in elimination order
    center: Vec<BigRational>,
    cap: u64,
    nodes: u64,
}

impl Enumerator {
    fn new(ldl: SparseLdl, center: &[BigRational], cap: u64) -> Self {
        let center = ldl.order.iter().map(|&i| center[i].clone()).collect();
        Enumerator {
            ldl,
            center,
            cap,
            nodes: 0,
        }
    }

    fn run<F>(&mut self, bound: &mut BigRational, shrink: bool, visit: &mut F) -> Result<()>
    where
        F: FnMut(&[BigInt], &BigRational),
    {
        let m = self.ldl.dim();
        if m == 0 {
            visit(&[], &BigRational::zero());
            return Ok(());
        }
        let mut y = vec![BigInt::zero(); m];
        let mut shifted = vec![BigRational::zero(); m];
        let mut leaf = vec![BigInt::zero(); m];
        let order = self.ldl.order.clone();
        let mut emit = |y: &[BigInt], cost: &BigRational| {
            for (p, &i) in order.iter().enumerate() {
                leaf[i] = y[p].clone();
            }
            visit(&leaf, cost);
        };
        self.descend(
            m - 1,
            &BigRational::zero(),
            &mut y,
            &mut shifted,
            bound,
            shrink,
            &mut emit,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn descend<F>(
        &mut self,
        level: usize,
        partial: &BigRational,
        y: &mut Vec<BigInt>,
        shifted: &mut Vec<BigRational>,
        bound: &mut BigRational,
        shrink: bool,
        visit: &mut F,
    ) -> Result<()>
    where
        F: FnMut(&[BigInt], &BigRational),
    {
        // (Lᵀ(y − c))_level = (y_level − c_level) + Σ_{q>level} L[q][level] (y_q − c_q)
        let mut offset = -self.center[level].clone();
        for (q, l) in &self.ldl.cols[level] {
            offset += l * &shifted[*q];
        }
        let target = -offset.clone();
        let mut lo = target.floor().to_integer();
        let mut hi = &lo + 1;

        let weight = self.ldl.d[level].clone();
        let term = |v: &BigInt| -> BigRational {
            let t = BigRational::from_integer(v.clone()) + &offset;
            &weight * &t * &t
        };

        loop {
            let lo_cost = partial + term(&lo);
            let hi_cost = partial + term(&hi);
            let pick_lo = lo_cost <= hi_cost;
            let (value, cost) = if pick_lo {
                (lo.clone(), lo_cost)
            } else {
                (hi.clone(), hi_cost)
            };
            if cost > *bound {
                // the nearer side already exceeds the bound; by convexity so does the rest
                break;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::EnumerationCapExceeded(self.cap));
            }
            shifted[level] = BigRational::from_integer(value.clone()) - &self.center[level];
            y[level] = value;
            if level == 0 {
                visit(y, &cost);
                if shrink && cost < *bound {
                    *bound = cost.clone();
                }
            } else {
                self.descend(level - 1, &cost, y, shifted, bound, shrink, visit)?;
            }
            if pick_lo {
                lo -= 1;
            } else {
                hi += 1;
            }
        }
        y[level] = BigInt::zero();
        Ok(())
    }
}

fn require_negative_definite(form: &IntersectionForm) -> Result<()> {
    if !form.negative_definite {
        return Err(Error::NotNegativeDefinite);
    }
    Ok(())
}

fn require_unimodular(form: &IntersectionForm) -> Result<()> {
    if !form.is_unimodular() {
        return Err(Error::NotUnimodular(form.det.to_string()));
    }
    Ok(())
}

/// All `v` with `vᵀQv = −1`, one per `±` pair (first nonzero coordinate
/// positive), in lexicographic order.
pub fn norm_minus_one_vectors(form: &IntersectionForm, cap: u64) -> Result<Vec<Vec<BigInt>>> {
    require_negative_definite(form)?;
    let ldl = SparseLdl::factor(&form.q, -1).ok_or(Error::NotNegativeDefinite)?;
    let m = form.rank();
    let mut search = Enumerator::new(ldl, &vec![BigRational::zero(); m], cap);
    let mut found = Vec::new();
    let mut overflow = false;
    let mut bound = BigRational::one();
    search.run(&mut bound, false, &mut |y, norm| {
        if !norm.is_one() {
            return;
        }
        if y.iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_positive())
        {
            if found.len() as u64 >= cap {
                overflow = true;
            } else {
                found.push(y.to_vec());
            }
        }
    })?;
    if overflow {
        return Err(Error::EnumerationCapExceeded(cap));
    }
    found.sort();
    Ok(found)
}

/// Either a basis `E` (columns, in vertex coordinates) with `EᵀQE = −I`, or
/// the evidence that none exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagonalizationCertificate {
    Present {
        e: IntMatrix,
    },
    Absent {
        vectors_found: usize,
        span_rank: usize,
    },
}

impl DiagonalizationCertificate {
    pub fn is_present(&self) -> bool {
        matches!(self, DiagonalizationCertificate::Present { .. })
    }

    pub fn matrix(&self) -> Option<&IntMatrix> {
        match self {
            DiagonalizationCertificate::Present { e } => Some(e),
            DiagonalizationCertificate::Absent { .. } => None,
        }
    }

    /// Re-checks `EᵀQE = −I` and `|det E| = 1` entry by entry.
    pub fn verify(&self, form: &IntersectionForm) -> bool {
        let Some(e) = self.matrix() else {
            return false;
        };
        let gram = linalg::mul(&linalg::mul(&linalg::transpose(e), &form.q), e);
        let m = form.rank();
        let is_minus_identity = gram.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, x)| {
                if i == j {
                    *x == -BigInt::one()
                } else {
                    x.is_zero()
                }
            })
        });
        is_minus_identity && e.len() == m && linalg::det(e).abs().is_one()
    }
}

/// Picks `m` pairwise orthogonal vectors from `vectors` by backtracking.
fn orthogonal_frame(q: &IntMatrix, vectors: &[Vec<BigInt>], m: usize) -> Option<Vec<usize>> {
    fn extend(
        q: &IntMatrix,
        vectors: &[Vec<BigInt>],
        m: usize,
        start: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == m {
            return true;
        }
        if vectors.len() - start < m - chosen.len() {
            return false;
        }
        for i in start..vectors.len() {
            let orthogonal = chosen
                .iter()
                .all(|&c| linalg::bilinear(q, &vectors[c], &vectors[i]).is_zero());
            if orthogonal {
                chosen.push(i);
                if extend(q, vectors, m, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let mut chosen = Vec::with_capacity(m);
    extend(q, vectors, m, 0, &mut chosen).then_some(chosen)
}

pub fn diagonalize(
    form: &IntersectionForm,
    config: SearchConfig,
) -> Result<DiagonalizationCertificate> {
    require_negative_definite(form)?;
    require_unimodular(form)?;
    let m = form.rank();
    let vectors = norm_minus_one_vectors(form, config.cap)?;
    match orthogonal_frame(&form.q, &vectors, m) {
        Some(idx) => {
            // columns of E are the chosen vectors
            let e: IntMatrix = (0..m)
                .map(|row| idx.iter().map(|&c| vectors[c][row].clone()).collect())
                .collect();
            let cert = DiagonalizationCertificate::Present { e };
            assert!(cert.verify(form), "diagonalizing basis failed verification");
            Ok(cert)
        }
        None => Ok(DiagonalizationCertificate::Absent {
            vectors_found: vectors.len(),
            span_rank: linalg::rank(&vectors),
        }),
    }
}

/// The class `[D] = Σ (Q⁻¹)₁ᵢ vᵢ`, characterized by `Q([D], vⱼ) = δ₁ⱼ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualClass {
    pub d: Vec<BigRational>,
    pub self_intersection: BigRational,
}

pub fn dual_class(form: &IntersectionForm) -> Result<DualClass> {
    let m = form.rank();
    let d = match SparseLdl::factor(&form.q, -1) {
        Some(ldl) => {
            let mut e1 = vec![BigRational::zero(); m];
            e1[0] = -BigRational::one();
            ldl.solve(&e1)
        }
        None => linalg::inverse(&form.q)
            .ok_or(Error::SingularMatrix)?
            .swap_remove(0),
    };
    let self_intersection = d[0].clone();
    Ok(DualClass {
        d,
        self_intersection,
    })
}

/// Maximum of `⟨κ, [D]⟩` over sharp characteristic vectors `κ = Σ ±εⱼ`,
/// which is the L¹ norm of `[D]` paired against the diagonal basis.
#[allow(clippy::needless_range_loop)]
pub fn max_sharp_pairing(
    form: &IntersectionForm,
    cert: &DiagonalizationCertificate,
    dual: &DualClass,
) -> Result<BigInt> {
    let e = cert.matrix().ok_or(Error::NotDiagonalizable)?;
    let q = linalg::to_rational(&form.q);
    let m = form.rank();
    let qd: Vec<BigRational> = (0..m)
        .map(|i| (0..m).map(|k| &q[i][k] * &dual.d[k]).sum())
        .collect();
    let mut l1 = BigInt::zero();
    let mut l2 = BigInt::zero();
    for j in 0..m {
        let c: BigRational = (0..m)
            .map(|i| BigRational::from_integer(e[i][j].clone()) * &qd[i])
            .sum();
        assert!(
            c.is_integer(),
            "pairing with a diagonal basis vector is integral"
        );
        let c = c.to_integer();
        l1 += c.abs();
        l2 += &c * &c;
    }
    assert_eq!(
        BigRational::from_integer(-l2),
        dual.self_intersection,
        "Σ cⱼ² must equal −[D]·[D]"
    );
    Ok(l1)
}

/// Result of maximizing `κᵀQ⁻¹κ` over characteristic covectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DInvariant {
    pub value: BigRational,
    /// A maximizing characteristic vector in the dual basis `{νⱼ}`.
    pub kappa: Vec<BigInt>,
    /// `−κᵀQ⁻¹κ` at the maximum.
    pub min_norm: BigInt,
}

/// `max (κᵀQ⁻¹κ + m)/4` over characteristic `κ`, for a unimodular
/// negative-definite `Q`.
///
/// Writing `κ = Qz` (Q is invertible over `ℤ`), `κ` is characteristic exactly
/// when `z` is, and `κᵀQ⁻¹κ = zᵀQz`. The search minimizes `−zᵀQz` over the
/// coset `z₀ + 2ℤᵐ` by branch and bound.
pub fn d_invariant(form: &IntersectionForm, config: SearchConfig) -> Result<DInvariant> {
    require_negative_definite(form)?;
    require_unimodular(form)?;
    let m = form.rank();
    if m == 0 {
        return Ok(DInvariant {
            value: BigRational::zero(),
            kappa: vec![],
            min_norm: BigInt::zero(),
        });
    }
    // norm −1 vectors are pairwise orthogonal and split off a −I_k summand,
    // which contributes k to the minimum and nothing to d
    let units = norm_minus_one_vectors(form, config.cap)?;
    let k = units.len();
    let mut z: Vec<BigInt> = vec![BigInt::zero(); m];
    let mut min_norm = BigInt::from(k as i64);
    if k < m {
        let (basis, gram) = if k == 0 {
            let id = (0..m)
                .map(|i| (0..m).map(|j| BigInt::from((i == j) as i64)).collect())
                .collect::<IntMatrix>();
            (id, form.q.clone())
        } else {
            complement(form, &units)?
        };
        let (rest, y) = characteristic_minimum(&gram, config.cap)?;
        min_norm += rest;
        for (row, c) in basis.iter().zip(&y) {
            for (zi, b) in z.iter_mut().zip(row) {
                *zi += c * b;
            }
        }
    }
    for e in &units {
        for (zi, x) in z.iter_mut().zip(e) {
            *zi -= x;
        }
    }
    let kappa: Vec<BigInt> = (0..m)
        .map(|i| (0..m).map(|j| &form.q[i][j] * &z[j]).sum())
        .collect();
    debug_assert!(is_characteristic(form, &kappa));
    debug_assert_eq!(-linalg::bilinear(&form.q, &z, &z), min_norm);
    let value = BigRational::new(BigInt::from(m as i64) - &min_norm, BigInt::from(4));
    Ok(DInvariant {
        value,
        kappa,
        min_norm,
    })
}

/// Basis (rows, ambient coordinates) and Gram matrix of the orthogonal
/// complement of pairwise orthogonal norm −1 vectors.
fn complement(form: &IntersectionForm, units: &[Vec<BigInt>]) -> Result<(IntMatrix, IntMatrix)> {
    let m = form.rank();
    let qe: Vec<Vec<BigInt>> = units
        .iter()
        .map(|e| {
            (0..m)
                .map(|i| (0..m).map(|j| &form.q[i][j] * &e[j]).sum())
                .collect()
        })
        .collect();
    // x ↦ x + Σ (x·e) e projects onto the complement
    let projected: IntMatrix = (0..m)
        .map(|i| {
            let mut x: Vec<BigInt> = (0..m).map(|j| BigInt::from((i == j) as i64)).collect();
            for (e, qe) in units.iter().zip(&qe) {
                let dot = qe[i].clone();
                for (xj, ej) in x.iter_mut().zip(e) {
                    *xj += &dot * ej;
                }
            }
            x
        })
        .collect();
    let basis = linalg::row_lattice_basis(&projected);
    let gram: IntMatrix = basis
        .iter()
        .map(|u| {
            basis
                .iter()
                .map(|v| linalg::bilinear(&form.q, u, v))
                .collect()
        })
        .collect();
    if basis.len() != m - units.len() || linalg::det(&gram).abs() != BigInt::one() {
        return Err(Error::NotUnimodular("orthogonal complement".into()));
    }
    Ok((basis, gram))
}

/// Minimum of `−zᵀQz` over `z` with `Qz` characteristic, for a
/// negative-definite unimodular `Q`. Returns the minimum and a minimizer.
fn characteristic_minimum(q: &IntMatrix, cap: u64) -> Result<(BigInt, Vec<BigInt>)> {
    let m = q.len();
    if m == 0 {
        return Ok((BigInt::zero(), vec![]));
    }
    let two = BigInt::from(2);
    let w: Vec<BigRational> = (0..m)
        .map(|i| BigRational::from_integer(q[i][i].mod_floor(&two)))
        .collect();
    // −Q z' = w, so z' = −Q⁻¹w is integral and Qz' ≡ w (mod 2)
    let neg = SparseLdl::factor(q, -1).ok_or(Error::NotNegativeDefinite)?;
    let z0: Vec<BigInt> = neg
        .solve(&w)
        .into_iter()
        .map(|z| {
            debug_assert!(z.is_integer());
            z.to_integer().mod_floor(&two)
        })
        .collect();

    let neg_q = linalg::negate(q);
    let half = BigRational::new(BigInt::one(), two.clone());
    let center: Vec<BigRational> = z0
        .iter()
        .map(|z| -BigRational::from_integer(z.clone()) * &half)
        .collect();

    let mut best_z = z0.clone();
    let mut bound = BigRational::from_integer(linalg::bilinear(&neg_q, &z0, &z0));
    let mut best = bound.clone();
    let scaled = SparseLdl::factor(q, -4).ok_or(Error::NotNegativeDefinite)?;
    let mut search = Enumerator::new(scaled, &center, cap);
    search.run(&mut bound, true, &mut |y, norm| {
        if *norm < best {
            best = norm.clone();
            best_z = z0.iter().zip(y).map(|(z, yi)| z + yi * 2).collect();
        }
    })?;
    Ok((best.to_integer(), best_z))
}

/// `κᵢ ≡ Qᵢᵢ (mod 2)` for every `i`.
pub fn is_characteristic(form: &IntersectionForm, kappa: &[BigInt]) -> bool {
    kappa
        .iter()
        .enumerate()
        .all(|(i, k)| (k - &form.q[i][i]).is_even())
}
