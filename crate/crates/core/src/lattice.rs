//! Integer matrices: Smith invariants and saturated kernel lattices.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn from_i64(m: &[Vec<i64>]) -> IntMatrix {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &r[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn swap_cols(a: &mut IntMatrix, i: usize, j: usize) {
    for r in a.iter_mut() {
        r.swap(i, j);
    }
}

/// col_j ← col_j − q·col_i
fn sub_col(a: &mut IntMatrix, j: usize, i: usize, q: &BigInt) {
    for r in a.iter_mut() {
        let t = &r[i] * q;
        r[j] -= t;
    }
}

/// Column echelon form A·U with U unimodular; returns (A·U, U, rank).
/// The last cols − rank columns of A·U are zero.
pub fn column_echelon(a: &IntMatrix, cols: usize) -> (IntMatrix, IntMatrix, usize) {
    let mut h = a.clone();
    let mut u = identity(cols);
    let mut pivot_col = 0;
    for row in 0..h.len() {
        if pivot_col == cols {
            break;
        }
        // Euclid on the entries of this row right of the pivot column
        loop {
            let nz: Vec<usize> = (pivot_col..cols).filter(|&j| !h[row][j].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let jmin = *nz.iter().min_by_key(|&&j| h[row][j].abs()).unwrap();
            swap_cols(&mut h, pivot_col, jmin);
            swap_cols(&mut u, pivot_col, jmin);
            if nz.len() == 1 {
                pivot_col += 1;
                break;
            }
            let p = h[row][pivot_col].clone();
            for j in pivot_col + 1..cols {
                if !h[row][j].is_zero() {
                    let q = h[row][j].div_floor(&p);
                    sub_col(&mut h, j, pivot_col, &q);
                    sub_col(&mut u, j, pivot_col, &q);
                }
            }
        }
    }
    (h, u, pivot_col)
}

/// A ℤ-basis of {x ∈ ℤ^cols : A x = 0}; the result is saturated.
pub fn integer_kernel(a: &IntMatrix, cols: usize) -> Vec<Vec<BigInt>> {
    let (_, u, rank) = column_echelon(a, cols);
    (rank..cols).map(|j| u.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Nonzero Smith invariants d_1 | d_2 | … of an integer matrix.
pub fn smith_invariants(a: &IntMatrix) -> Vec<BigInt> {
    let mut m = a.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero entry in the remaining block
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by_key(|&(i, j)| m[i][j].abs())
        else {
            break;
        };
        m.swap(t, pi);
        swap_cols(&mut m, t, pj);
        let mut clean = true;
        for i in t + 1..rows {
            if !m[i][t].is_zero() {
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..cols {
                    let s = &m[t][j] * &q;
                    m[i][j] -= s;
                }
                clean &= m[i][t].is_zero();
            }
        }
        for j in t + 1..cols {
            if !m[t][j].is_zero() {
                let q = m[t][j].div_floor(&m[t][t]);
                sub_col(&mut m, j, t, &q);
                clean &= m[t][j].is_zero();
            }
        }
        if !clean {
            continue;
        }
        // the pivot must divide the whole remaining block
        let p = m[t][t].clone();
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&m[i][j] % &p).is_zero())) {
            for j in t..cols {
                let s = m[i][j].clone();
                m[t][j] += s;
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

/// Rank over 𝔽₂.
pub fn rank_mod2(a: &IntMatrix) -> usize {
    let mut m: Vec<Vec<bool>> = a
        .iter()
        .map(|r| r.iter().map(|x| x.is_odd()).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c]) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][c] {
                let pr = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(pr) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}


#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn inv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smith() {
        assert_eq!(smith_invariants(&from_i64(&[vec![2, 0], vec![0, 3]])), inv(&[1, 6]));
        assert_eq!(
            smith_invariants(&from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]])),
            inv(&[2, 6, 12])
        );
        assert_eq!(smith_invariants(&from_i64(&[vec![0, 0], vec![0, 0]])), inv(&[]));
    }

    #[test]
    fn kernel() {
        let a = from_i64(&[vec![1, 1, 1]]);
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mul(&a, &v.iter().map(|x| vec![x.clone()]).collect())[0][0].is_zero());
        }
        // saturation: kernel of (2, 4) is spanned by (2, −1), not (4, −2)
        let k = integer_kernel(&from_i64(&[vec![2, 4]]), 2);
        assert_eq!(k.len(), 1);
        let g = k[0][0].gcd(&k[0][1]);
        assert!(g.is_one());
    }
}
