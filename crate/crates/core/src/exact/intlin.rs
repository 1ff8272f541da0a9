//! Integer linear algebra: Hermite normal form, saturated kernels, affine solving.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::{IntMatrix, RatMatrix};
use super::rational::{lcm_of_denominators, RatVector, Rational};

pub type BigIntVector = Vec<BigInt>;

/// Row-style Hermite normal form of `rows` together with a unimodular `u` such
/// that `u * rows = h`. Pivots are positive and entries above a pivot are
/// reduced into `[0, pivot)`. Returns `(h, u, rank)`; the first `rank` rows of
/// `h` are nonzero.
pub fn hnf_with_transform(rows: &[BigIntVector]) -> (Vec<BigIntVector>, Vec<BigIntVector>, usize) {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut h: Vec<BigIntVector> = rows.to_vec();
    let mut u: Vec<BigIntVector> =
        (0..m).map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        loop {
            let pivot = (r..m).filter(|&i| !h[i][col].is_zero()).min_by(|&a, &b| h[a][col].abs().cmp(&h[b][col].abs()));
            let Some(p) = pivot else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[r][col]);
                sub_scaled(&mut h, i, r, &q);
                sub_scaled(&mut u, i, r, &q);
                if !h[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][col].is_zero() {
            continue;
        }
        if h[r][col].is_negative() {
            negate_row(&mut h[r]);
            negate_row(&mut u[r]);
        }
        for i in 0..r {
            let q = h[i][col].div_floor(&h[r][col]);
            if !q.is_zero() {
                sub_scaled(&mut h, i, r, &q);
                sub_scaled(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u, r)
}

fn sub_scaled(rows: &mut [BigIntVector], target: usize, source: usize, q: &BigInt) {
    let src = rows[source].clone();
    for (t, s) in rows[target].iter_mut().zip(&src) {
        *t -= q * s;
    }
}

fn negate_row(row: &mut BigIntVector) {
    for v in row.iter_mut() {
        *v = -core::mem::take(v);
    }
}

/// Hermite normal form of the lattice spanned by `rows`, zero rows dropped.
pub fn hnf_rows(rows: &[BigIntVector]) -> Vec<BigIntVector> {
    if rows.is_empty() {
        return Vec::new();
    }
    let (h, _, rank) = hnf_with_transform(rows);
    h.into_iter().take(rank).collect()
}

/// Scales each row by the lcm of its denominators.
fn clear_denominators(m: &RatMatrix) -> Vec<BigIntVector> {
    m.iter_rows()
        .map(|row| {
            let l = lcm_of_denominators(row);
            row.iter().map(|v| (v * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// Basis of `{m in Z^c : M m = 0}`, in Hermite normal form. The basis spans the
/// full integer kernel, so every vector is primitive.
pub fn kernel_saturated(m: &RatMatrix) -> Vec<BigIntVector> {
    let a = clear_denominators(m);
    let cols = m.cols();
    // Row operations on A^T: rows of the transform that annihilate A^T span ker A.
    let at: Vec<BigIntVector> = (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect();
    let (_, u, rank) = hnf_with_transform(&at);
    let basis: Vec<BigIntVector> = u.into_iter().skip(rank).collect();
    hnf_rows(&basis)
}

/// Solution set of `M x = c`: a particular solution and a saturated integer
/// basis of the kernel, or `None` if inconsistent.
pub fn solve_affine(m: &RatMatrix, c: &[Rational]) -> Option<(RatVector, Vec<RatVector>)> {
    assert_eq!(m.rows(), c.len(), "right-hand side length mismatch");
    let cols = m.cols();
    let aug = RatMatrix::from_fn(m.rows(), cols + 1, |i, j| if j < cols { m[(i, j)].clone() } else { c[i].clone() });
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[(row, cols)].clone();
    }
    let kernel = kernel_saturated(m).into_iter().map(|v| v.into_iter().map(Rational::from_integer).collect()).collect();
    Some((x, kernel))
}

/// Unimodular `V` with `V d = e_1`, for a primitive integer vector `d`.
pub fn unimodular_completion(d: &[i64]) -> Option<IntMatrix> {
    let rows: Vec<BigIntVector> = d.iter().map(|&v| vec![BigInt::from(v)]).collect();
    let (h, u, rank) = hnf_with_transform(&rows);
    if rank != 1 || !h[0][0].is_one() {
        return None;
    }
    let data = u
        .into_iter()
        .map(|row| row.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Some(IntMatrix::from_rows(data))
}

pub fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(ToPrimitive::to_i64).collect()
}

/// Gcd of the entries, made nonnegative.
pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides by the content and flips sign so the first nonzero entry is positive.
pub fn primitive_normalized(v: &[i64]) -> Vec<i64> {
    let g = content(v);
    if g == 0 {
        return v.to_vec();
    }
    let mut out: Vec<i64> = v.iter().map(|x| x / g).collect();
    if out.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        for x in &mut out {
            *x = -*x;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    fn big(v: &[i64]) -> BigIntVector {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        assert!(kernel_saturated(&RatMatrix::identity(3)).is_empty());
        let k = kernel_saturated(&RatMatrix::zeros(3, 3));
        assert_eq!(k, vec![big(&[1, 0, 0]), big(&[0, 1, 0]), big(&[0, 0, 1])]);
    }

    #[test]
    fn kernel_is_saturated() {
        // x + y = 2z over Z has kernel basis {(1,1,1),(2,0,1)} up to HNF; the
        // vector (1,1,1) must be present in the span without index.
        let m = RatMatrix::from_rows(vec![vec![int(2), int(2), int(-4)]]);
        let k = kernel_saturated(&m);
        assert_eq!(k.len(), 2);
        let det = {
            let mut rows: Vec<Vec<Rational>> =
                k.iter().map(|v| v.iter().cloned().map(Rational::from_integer).collect()).collect();
            rows.push(vec![int(1), int(0), int(0)]);
            RatMatrix::from_rows(rows).det()
        };
        assert_eq!(det.abs(), int(1));
    }

    #[test]
    fn inconsistent_system() {
        let chi1 = IntMatrix::diagonal(&[1, -1, -1]).to_rational();
        let m = RatMatrix::identity(3).sub(&chi1);
        assert!(solve_affine(&m, &[int(1), int(0), int(0)]).is_none());
        let (x, k) = solve_affine(&m, &[int(0), int(2), int(0)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![int(0), int(2), int(0)]);
        assert_eq!(k, vec![vec![int(1), int(0), int(0)]]);
    }

    #[test]
    fn completion_maps_to_e1() {
        for d in [[1i64, 0, 0], [0, 0, 1], [2, 3, 5], [-1, 1, 0], [4, -6, 9]] {
            let v = unimodular_completion(&d).unwrap();
            assert_eq!(v.mul_vec(&d), vec![1, 0, 0]);
            assert_eq!(v.det().abs(), 1);
        }
        assert!(unimodular_completion(&[2, 4, 0]).is_none());
    }
}
