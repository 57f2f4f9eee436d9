//! Exact integer helpers shared by the Seifert and twist-number code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Inverse of `x` modulo `m` as a representative in `[0, m)`.
/// Returns `None` when `gcd(x, m) != 1`.
pub fn mod_inverse(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    let eg = x.mod_floor(m).extended_gcd(m);
    if !eg.gcd.is_one() {
        return None;
    }
    Some(eg.x.mod_floor(m))
}

/// Chinese remaindering over pairwise-coprime moduli. Returns the residue in
/// `[0, M)` together with `M`, or `None` if some pair of moduli is not coprime.
pub fn crt(residues: &[BigInt], moduli: &[BigInt]) -> Option<(BigInt, BigInt)> {
    assert_eq!(residues.len(), moduli.len());
    let mut acc = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r, m) in residues.iter().zip(moduli) {
        // acc + modulus * t == r (mod m)
        let inv = mod_inverse(&modulus, m)?;
        let t = ((r - &acc) * inv).mod_floor(m);
        acc += &modulus * t;
        modulus *= m;
    }
    Some((acc.mod_floor(&modulus), modulus))
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative integer");
    n.sqrt()
}

/// Smallest integer `c` with `c * c >= n`, for `n >= 0`.
pub fn ceil_sqrt(n: &BigInt) -> BigInt {
    let s = isqrt(n);
    if &s * &s == *n {
        s
    } else {
        s + 1
    }
}
