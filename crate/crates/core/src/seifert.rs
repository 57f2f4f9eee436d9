//! Seifert invariants of Brieskorn homology spheres `Σ(a₁,…,aₙ)`.
//!
//! The unnormalized invariants `(aᵢ, bᵢ)` satisfy
//! `A · Σ bₖ/aₖ = 1 + b·A` with `A = a₁⋯aₙ`; the canonical presentation
//! has `b = 0`. Everything here is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::mod_inverse;
use crate::error::{Error, Result};

/// Pairwise-coprime fiber multiplicities, `n >= 3`, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplicities {
    a: Vec<i64>,
    product: BigInt,
}

impl Multiplicities {
    pub fn new(raw: &[i64]) -> Result<Self> {
        validate_multiplicities(raw)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `A = a₁⋯aₙ`.
    pub fn product(&self) -> &BigInt {
        &self.product
    }

    pub fn get(&self, i: usize) -> BigInt {
        BigInt::from(self.a[i])
    }
}

pub fn validate_multiplicities(raw: &[i64]) -> Result<Multiplicities> {
    if raw.len() < 3 {
        return Err(Error::TooFewFibers(raw.len()));
    }
    if let Some((index, &value)) = raw.iter().enumerate().find(|(_, &x)| x < 2) {
        return Err(Error::MultiplicityTooSmall { index, value });
    }
    for i in 0..raw.len() {
        for j in i + 1..raw.len() {
            let g = raw[i].gcd(&raw[j]);
            if g != 1 {
                return Err(Error::NotCoprime {
                    a: raw[i],
                    b: raw[j],
                    gcd: g,
                });
            }
        }
    }
    let product = raw.iter().map(|&x| BigInt::from(x)).product();
    Ok(Multiplicities {
        a: raw.to_vec(),
        product,
    })
}

/// Unnormalized Seifert invariants `(b; (a₁,b₁),…,(aₙ,bₙ))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertPresentation {
    pub multiplicities: Multiplicities,
    /// Central framing; zero in canonical form.
    pub b: BigInt,
    pub bs: Vec<BigInt>,
}

impl SeifertPresentation {
    pub fn pairs(&self) -> Vec<(BigInt, BigInt)> {
        (0..self.bs.len())
            .map(|i| (self.multiplicities.get(i), self.bs[i].clone()))
            .collect()
    }

    /// `A · Σ bₖ/aₖ − b·A`, which equals 1 for a valid presentation.
    pub fn seifert_equation_lhs(&self) -> BigRational {
        let a = self.multiplicities.product();
        let sum: BigRational = self
            .pairs()
            .into_iter()
            .map(|(ak, bk)| BigRational::new(bk, ak))
            .sum();
        sum * BigRational::from(a.clone()) - BigRational::from(&self.b * a)
    }

    pub fn is_canonical(&self) -> bool {
        self.b.is_zero() && self.seifert_equation_lhs().is_one()
    }
}

/// Canonical unnormalized invariants: `bⱼ ≡ (A/aⱼ)⁻¹ (mod aⱼ)` taken in
/// `[0, aⱼ)`, then `b₁` absorbs the shift that makes `Σ bₖ·(A/aₖ) = 1`.
pub fn solve_unnormalized(m: &Multiplicities) -> SeifertPresentation {
    let big_a = m.product();
    let mut bs: Vec<BigInt> = (0..m.len())
        .map(|j| {
            let aj = m.get(j);
            let cofactor = big_a / &aj;
            mod_inverse(&cofactor, &aj).expect("multiplicities are pairwise coprime")
        })
        .collect();
    let total: BigInt = bs
        .iter()
        .enumerate()
        .map(|(k, bk)| bk * (big_a / m.get(k)))
        .sum();
    let excess = total - BigInt::one();
    debug_assert!(excess.is_multiple_of(big_a));
    let t = excess / big_a;
    bs[0] -= t * m.get(0);
    let p = SeifertPresentation {
        multiplicities: m.clone(),
        b: BigInt::zero(),
        bs,
    };
    assert!(p.is_canonical(), "Seifert equation violated");
    p
}

/// Normalized invariants `(e₀; b̃₁,…,b̃ₙ)` with `rⱼ = −b̃ⱼ/aⱼ ∈ (0,1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedPresentation {
    pub e0: i64,
    pub tilde_b: Vec<i64>,
    pub r: Vec<BigRational>,
}

pub fn normalize(p: &SeifertPresentation) -> NormalizedPresentation {
    let m = &p.multiplicities;
    let mut e0 = BigInt::zero();
    let mut tilde_b = Vec::with_capacity(m.len());
    let mut r = Vec::with_capacity(m.len());
    for (aj, bj) in p.pairs() {
        e0 += (-&bj).div_floor(&aj);
        let residue = bj.mod_floor(&aj);
        debug_assert!(!residue.is_zero());
        let tb = residue - &aj;
        r.push(BigRational::new(-&tb, aj.clone()));
        tilde_b.push(i64::try_from(tb).expect("b̃ is bounded by the multiplicity"));
    }
    let e0 = i64::try_from(e0).expect("e0 lies in [-(n-1), -1]");

    let sum: BigRational = r.iter().cloned().sum();
    let expected = BigRational::from_integer(BigInt::from(-e0))
        - BigRational::new(BigInt::one(), m.product().clone());
    assert_eq!(sum, expected, "Σ rⱼ ≠ −e0 − 1/A");
    NormalizedPresentation { e0, tilde_b, r }
}

/// Gluing matrices `[[aᵢ, uᵢ], [bᵢ, vᵢ]]` with `aᵢvᵢ − bᵢuᵢ = 1`, `0 < uᵢ < aᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingData {
    pub u: Vec<BigInt>,
    pub v: Vec<BigInt>,
}

pub fn gluing_data(p: &SeifertPresentation) -> GluingData {
    let mut u = Vec::new();
    let mut v = Vec::new();
    for (ai, bi) in p.pairs() {
        // -bᵢuᵢ ≡ 1 (mod aᵢ)
        let ui = mod_inverse(&(-&bi), &ai).expect("bᵢ is a unit modulo aᵢ");
        let num = BigInt::one() + &bi * &ui;
        debug_assert!((&num % &ai).is_zero());
        let vi = num / &ai;
        assert!(ui.is_positive() && ui < ai);
        assert!((&ai * &vi - &bi * &ui).is_one());
        u.push(ui);
        v.push(vi);
    }
    GluingData { u, v }
}

/// Order of `H₁` for the surgery diagram with coefficients `aₖ/bₖ` on the
/// legs of a 0-framed unknot: `|a₁⋯aₙ · Σ bₖ/aₖ|`. Zero means `H₁` is infinite.
pub fn h1_order(pairs: &[(BigInt, BigInt)]) -> Result<BigInt> {
    if pairs.iter().any(|(a, _)| a.is_zero()) {
        return Err(Error::DivisionByZero);
    }
    let total: BigInt = (0..pairs.len())
        .map(|k| {
            let others: BigInt = pairs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, (a, _))| a.clone())
                .product();
            &pairs[k].1 * others
        })
        .sum();
    Ok(total.abs())
}

/// Fiber framing of a regular fiber relative to its Seifert framing.
pub fn fiber_framing(m: &Multiplicities) -> BigInt {
    m.product().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn pairs(xs: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        xs.iter()
            .map(|&(a, b)| (BigInt::from(a), BigInt::from(b)))
            .collect()
    }

    #[test]
    fn validation() {
        assert_eq!(
            validate_multiplicities(&[2, 3, 5]).unwrap().product(),
            &BigInt::from(30)
        );
        assert_eq!(
            validate_multiplicities(&[2, 3, 5, 7]).unwrap().product(),
            &BigInt::from(210)
        );
        assert_eq!(
            validate_multiplicities(&[2, 4, 5]),
            Err(Error::NotCoprime { a: 2, b: 4, gcd: 2 })
        );
        assert_eq!(
            validate_multiplicities(&[2, 3]),
            Err(Error::TooFewFibers(2))
        );
        assert_eq!(
            validate_multiplicities(&[2, 1, 5]),
            Err(Error::MultiplicityTooSmall { index: 1, value: 1 })
        );
        assert!(validate_multiplicities(&[-2, 3, 5]).is_err());
    }

    #[test]
    fn unnormalized_examples() {
        for (a, b) in [
            (vec![2, 3, 5], vec![-1, 1, 1]),
            (vec![2, 3, 7], vec![-3, 2, 6]),
            (vec![2, 3, 13], vec![-3, 2, 11]),
        ] {
            let p = solve_unnormalized(&Multiplicities::new(&a).unwrap());
            assert_eq!(p.bs, ints(&b), "{a:?}");
            assert!(p.is_canonical());
        }
    }

    #[test]
    fn normalized_examples() {
        let n = normalize(&solve_unnormalized(
            &Multiplicities::new(&[2, 3, 5]).unwrap(),
        ));
        assert_eq!(n.e0, -2);
        assert_eq!(n.tilde_b, vec![-1, -2, -4]);
        assert_eq!(
            n.r,
            vec![
                BigRational::new(1.into(), 2.into()),
                BigRational::new(2.into(), 3.into()),
                BigRational::new(4.into(), 5.into()),
            ]
        );

        let n = normalize(&solve_unnormalized(
            &Multiplicities::new(&[2, 3, 7]).unwrap(),
        ));
        assert_eq!((n.e0, n.tilde_b), (-1, vec![-1, -1, -1]));

        let n = normalize(&solve_unnormalized(
            &Multiplicities::new(&[2, 3, 13]).unwrap(),
        ));
        assert_eq!((n.e0, n.tilde_b), (-1, vec![-1, -1, -2]));
    }

    #[test]
    fn gluing_examples() {
        let g = gluing_data(&solve_unnormalized(
            &Multiplicities::new(&[2, 3, 5]).unwrap(),
        ));
        assert_eq!((g.u, g.v), (ints(&[1, 2, 4]), ints(&[0, 1, 1])));
        let g = gluing_data(&solve_unnormalized(
            &Multiplicities::new(&[2, 3, 13]).unwrap(),
        ));
        assert_eq!((g.u, g.v), (ints(&[1, 1, 7]), ints(&[-1, 1, 6])));
    }

    #[test]
    fn homology_orders() {
        assert_eq!(
            h1_order(&pairs(&[(2, -1), (3, 1), (5, 1)])).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            h1_order(&pairs(&[(2, -1), (3, 1), (5, 1), (1, 1)])).unwrap(),
            BigInt::from(31)
        );
        assert_eq!(
            h1_order(&pairs(&[(2, 1), (3, 1)])).unwrap(),
            BigInt::from(5)
        );
        assert_eq!(
            h1_order(&pairs(&[(2, 1), (0, 1)])),
            Err(Error::DivisionByZero)
        );
        // S¹ × S²: the 0-framed unknot alone with a trivial leg
        assert_eq!(h1_order(&pairs(&[(1, 0)])).unwrap(), BigInt::from(0));
    }

    #[test]
    fn framing() {
        for (a, f) in [
            (vec![2, 3, 5], 30),
            (vec![2, 3, 7], 42),
            (vec![2, 3, 5, 7], 210),
        ] {
            assert_eq!(
                fiber_framing(&Multiplicities::new(&a).unwrap()),
                BigInt::from(f)
            );
        }
    }
}
