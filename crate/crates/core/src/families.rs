//! Small Seifert fibered spaces `M(e; r₁,…,r_k)`, the `M_p` and `M_{p,ℓ}`
//! families, the transverse-contact criterion for three fibers, and the
//! homotopy invariant `θ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallSeifertData {
    pub e: i64,
    pub r: Vec<BigRational>,
}

impl SmallSeifertData {
    pub fn new(e: i64, r: Vec<BigRational>) -> Result<Self> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        if let Some(bad) = r.iter().find(|x| **x <= zero || **x >= one) {
            return Err(Error::InvalidParameter(format!(
                "Seifert coefficient {bad} outside (0,1)"
            )));
        }
        Ok(SmallSeifertData { e, r })
    }
}

/// Outcome of the search for coprime `0 < a < m` with
/// `m·r₁ < a < m·(1 − r₂)` and `m·r₃ < 1` (`r₁ ≥ r₂ ≥ r₃`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransverseWitness {
    Present {
        a: u64,
        m: u64,
    },
    /// No witness with `m` below `max_m_exclusive`; the condition `m·r₃ < 1`
    /// rules out every larger `m`.
    Absent {
        max_m_exclusive: u64,
    },
}

fn satisfies(r: &[BigRational; 3], a: u64, m: u64) -> bool {
    let a_q = BigRational::from_integer(BigInt::from(a));
    let m_q = BigRational::from_integer(BigInt::from(m));
    a.gcd(&m) == 1
        && 0 < a
        && a < m
        && &m_q * &r[0] < a_q
        && a_q < &m_q * (BigRational::one() - &r[1])
        && &m_q * &r[2] < BigRational::one()
}

pub fn transverse_contact_exists(data: &SmallSeifertData) -> Result<TransverseWitness> {
    if data.e != -1 || data.r.len() != 3 {
        return Err(Error::NotApplicable(format!(
            "criterion covers M(-1; r1, r2, r3), got e = {} with {} fibers",
            data.e,
            data.r.len()
        )));
    }
    let mut sorted = data.r.clone();
    sorted.sort_by(|x, y| y.cmp(x));
    let r: [BigRational; 3] = sorted.try_into().expect("three coefficients");

    // m·r₃ < 1  ⇔  m < 1/r₃
    let limit = r[2].recip();
    let max_m_exclusive = u64::try_from(limit.ceil().to_integer()).expect("1/r3 fits in u64");
    for m in 2..max_m_exclusive {
        let m_q = BigRational::from_integer(BigInt::from(m));
        let lo = (&m_q * &r[0]).floor().to_integer() + 1;
        let lo = u64::try_from(lo).unwrap_or(1).max(1);
        for a in lo..m {
            if satisfies(&r, a, m) {
                return Ok(TransverseWitness::Present { a, m });
            }
            if BigRational::from_integer(BigInt::from(a)) >= &m_q * (BigRational::one() - &r[1]) {
                break;
            }
        }
    }
    Ok(TransverseWitness::Absent { max_m_exclusive })
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `M_p = M(−1; (p−1)/p, 1/p, 1/p)`.
pub fn mp_family(p: i64) -> Result<SmallSeifertData> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("p = {p}, expected p >= 2")));
    }
    SmallSeifertData::new(-1, vec![frac(p - 1, p), frac(1, p), frac(1, p)])
}

/// `M_{p,ℓ} = M(−ℓ; 1/p, (p−1)/p, 1/p, …, (p−1)/p, 1/p)` with `2ℓ + 1` fibers.
pub fn mpl_family(p: i64, l: i64) -> Result<SmallSeifertData> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("p = {p}, expected p >= 2")));
    }
    if l < 1 {
        return Err(Error::InvalidParameter(format!("l = {l}, expected l >= 1")));
    }
    let r = (0..2 * l + 1)
        .map(|i| {
            if i % 2 == 0 {
                frac(1, p)
            } else {
                frac(p - 1, p)
            }
        })
        .collect();
    SmallSeifertData::new(-l, r)
}

/// `θ = c₁² − 3σ − 2χ`.
pub fn theta_invariant(c1_sq: i64, sigma: i64, chi: i64) -> i64 {
    c1_sq - 3 * sigma - 2 * chi
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(r: &[(i64, i64)]) -> SmallSeifertData {
        SmallSeifertData::new(-1, r.iter().map(|&(n, d)| frac(n, d)).collect()).unwrap()
    }

    #[test]
    fn transverse_examples() {
        assert!(matches!(
            transverse_contact_exists(&mp_family(2).unwrap()).unwrap(),
            TransverseWitness::Absent { .. }
        ));
        assert!(matches!(
            transverse_contact_exists(&mp_family(3).unwrap()).unwrap(),
            TransverseWitness::Absent { .. }
        ));
        assert_eq!(
            transverse_contact_exists(&data(&[(1, 2), (1, 3), (1, 7)])).unwrap(),
            TransverseWitness::Present { a: 3, m: 5 }
        );
        assert_eq!(
            transverse_contact_exists(&data(&[(1, 7), (1, 2), (1, 3)])).unwrap(),
            TransverseWitness::Present { a: 3, m: 5 }
        );
    }

    #[test]
    fn transverse_not_applicable() {
        let d = mpl_family(3, 2).unwrap();
        assert!(matches!(
            transverse_contact_exists(&d),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn families() {
        assert_eq!(mp_family(2).unwrap(), data(&[(1, 2), (1, 2), (1, 2)]));
        assert_eq!(
            mp_family(3).unwrap().r,
            vec![frac(2, 3), frac(1, 3), frac(1, 3)]
        );
        assert!(matches!(mp_family(1), Err(Error::InvalidParameter(_))));
        assert_eq!(mpl_family(2, 1).unwrap(), data(&[(1, 2), (1, 2), (1, 2)]));
        let m = mpl_family(3, 2).unwrap();
        assert_eq!(m.e, -2);
        assert_eq!(
            m.r,
            vec![frac(1, 3), frac(2, 3), frac(1, 3), frac(2, 3), frac(1, 3)]
        );
        assert!(matches!(mpl_family(2, 0), Err(Error::InvalidParameter(_))));
        assert!(SmallSeifertData::new(-1, vec![frac(1, 1)]).is_err());
    }

    #[test]
    fn theta() {
        assert_eq!(theta_invariant(0, 0, 1), -2);
        assert_eq!(theta_invariant(0, 0, 0), 0);
        assert_eq!(theta_invariant(-8, -8, 9), -2);
    }
}
