//! Exact dense linear algebra over `ℤ` and `ℚ` for small symmetric forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn to_big(m: &[Vec<i64>]) -> IntMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn to_rational(m: &IntMatrix) -> RatMatrix {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect()
}

pub fn transpose(m: &IntMatrix) -> IntMatrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// `xᵀ M y` for an integer matrix.
pub fn bilinear(m: &IntMatrix, x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, row) in m.iter().enumerate() {
        if x[i].is_zero() {
            continue;
        }
        let inner: BigInt = row.iter().zip(y).map(|(a, b)| a * b).sum();
        acc += &x[i] * inner;
    }
    acc
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Leading principal minors `det(M[..k, ..k])` for `k = 1..=n`, computed by
/// Bareiss elimination without pivoting. Stops after the first zero minor.
pub fn leading_minors(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.len();
    let mut a = m.clone();
    let mut prev = BigInt::one();
    let mut minors = Vec::with_capacity(n);
    for k in 0..n {
        minors.push(a[k][k].clone());
        if a[k][k].is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    minors
}

/// Sylvester's criterion with exact minors.
pub fn is_positive_definite(m: &IntMatrix) -> bool {
    let minors = leading_minors(m);
    minors.len() == m.len() && minors.iter().all(|d| d.is_positive())
}

pub fn negate(m: &IntMatrix) -> IntMatrix {
    m.iter()
        .map(|row| row.iter().map(|x| -x).collect())
        .collect()
}

/// Removes row `r` and column `c`.
pub fn minor_matrix(m: &IntMatrix, r: usize, c: usize) -> IntMatrix {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != r)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|&(j, _)| j != c)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Inverse over `ℚ` by Gauss–Jordan elimination.
pub fn inverse(m: &IntMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a = to_rational(m);
    let mut inv: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        inv.swap(col, p);
        let piv = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &piv;
            inv[col][j] = &inv[col][j] / &piv;
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[i][j] -= t;
                let t = &f * &inv[col][j];
                inv[i][j] -= t;
            }
        }
    }
    Some(inv)
}

/// Rank over `ℚ` of a list of integer row vectors.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut a = to_rational(&rows.to_vec());
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            let (upper, lower) = a.split_at_mut(i);
            for (t, p) in lower[0][c..cols].iter_mut().zip(&upper[r][c..cols]) {
                *t -= &f * p;
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// A basis of the integer row lattice spanned by `rows`, in Hermite normal
/// form (row echelon, positive pivots, entries above each pivot reduced).
pub fn row_lattice_basis(rows: &[Vec<BigInt>]) -> IntMatrix {
    use num_integer::Integer;

    let mut a: IntMatrix = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if a.is_empty() {
        return a;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        // fold the gcd of column c (rows r..) into row r by unimodular 2×2 steps
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            if a[r][c].is_zero() {
                a.swap(r, i);
                continue;
            }
            let eg = a[r][c].extended_gcd(&a[i][c]);
            let (p, q) = (&a[r][c] / &eg.gcd, &a[i][c] / &eg.gcd);
            let (upper, lower) = a.split_at_mut(i);
            for (top, bottom) in upper[r][c..].iter_mut().zip(&mut lower[0][c..]) {
                let t = &eg.x * &*top + &eg.y * &*bottom;
                *bottom = &p * &*bottom - &q * &*top;
                *top = t;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let f = a[i][c].div_floor(&a[r][c]);
            if f.is_zero() {
                continue;
            }
            let (upper, lower) = a.split_at_mut(r);
            for (t, p) in upper[i][c..].iter_mut().zip(&lower[0][c..]) {
                *t -= &f * p;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    a
}

/// Sparse `LDLᵀ` factorization of a symmetric positive-definite matrix,
/// taken in a greedy minimum-degree elimination order. On a tree (every
/// plumbing graph) the order peels leaves first and the factor has no fill.
#[derive(Debug, Clone)]
pub struct SparseLdl {
    /// `order[p]` is the original index eliminated at step `p`.
    pub order: Vec<usize>,
    /// Pivots in elimination order.
    pub d: Vec<BigRational>,
    /// For step `p`, the entries `(q, L[q][p])` with `q > p` (elimination positions).
    pub cols: Vec<Vec<(usize, BigRational)>>,
}

fn min_degree_order(h: &IntMatrix) -> Vec<usize> {
    let n = h.len();
    let mut adj: Vec<std::collections::BTreeSet<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && !h[i][j].is_zero()).collect())
        .collect();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&i| !done[i])
            .min_by_key(|&i| (adj[i].len(), i))
            .expect("vertex remains");
        done[v] = true;
        order.push(v);
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for &a in &nbrs {
            adj[a].remove(&v);
            for &b in &nbrs {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    order
}

impl SparseLdl {
    /// Factors `scale · h`. Returns `None` as soon as a pivot is not
    /// positive, i.e. when `scale · h` is not positive definite.
    pub fn factor(h: &IntMatrix, scale: i64) -> Option<Self> {
        let scale = BigInt::from(scale);
        let n = h.len();
        let order = min_degree_order(h);
        let mut pos = vec![0; n];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        let mut rows: Vec<std::collections::BTreeMap<usize, BigRational>> =
            vec![std::collections::BTreeMap::new(); n];
        for i in 0..n {
            for j in 0..n {
                if !h[i][j].is_zero() {
                    rows[pos[i]].insert(pos[j], BigRational::from_integer(&h[i][j] * &scale));
                }
            }
        }
        let mut d = Vec::with_capacity(n);
        let mut cols = Vec::with_capacity(n);
        for p in 0..n {
            let pivot = rows[p].get(&p).cloned().unwrap_or_else(BigRational::zero);
            if !pivot.is_positive() {
                return None;
            }
            let tail: Vec<(usize, BigRational)> = rows[p]
                .range(p + 1..)
                .map(|(&q, v)| (q, v.clone()))
                .collect();
            let col: Vec<(usize, BigRational)> =
                tail.iter().map(|(q, v)| (*q, v / &pivot)).collect();
            for (q, lq) in &col {
                for (r, hr) in &tail {
                    let delta = lq * hr;
                    let entry = rows[*q].entry(*r).or_insert_with(BigRational::zero);
                    *entry -= delta;
                }
            }
            d.push(pivot);
            cols.push(col);
        }
        Some(SparseLdl { order, d, cols })
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    pub fn det(&self) -> BigRational {
        self.d.iter().cloned().product()
    }

    /// Solves `H x = b`.
    pub fn solve(&self, b: &[BigRational]) -> Vec<BigRational> {
        let n = self.dim();
        // permuted right-hand side, then L z = b', D w = z, Lᵀ x' = w
        let mut z: Vec<BigRational> = self.order.iter().map(|&i| b[i].clone()).collect();
        for p in 0..n {
            let zp = z[p].clone();
            if zp.is_zero() {
                continue;
            }
            for (q, l) in &self.cols[p] {
                z[*q] -= l * &zp;
            }
        }
        for (zp, dp) in z.iter_mut().zip(&self.d) {
            *zp = &*zp / dp;
        }
        for p in (0..n).rev() {
            let mut acc = z[p].clone();
            for (q, l) in &self.cols[p] {
                acc -= l * &z[*q];
            }
            z[p] = acc;
        }
        let mut x = vec![BigRational::zero(); n];
        for (p, &i) in self.order.iter().enumerate() {
            x[i] = z[p].clone();
        }
        x
    }
}
