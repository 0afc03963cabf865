//! Exact linear algebra over [`Scalar`].
//!
//! Rank, kernels and determinant tests go through a fraction-free (Bareiss)
//! elimination on denominator-cleared rows, which keeps intermediate entries
//! polynomial instead of piling up nested fractions. Solving and inversion
//! finish with exact field divisions.

use crate::error::{Error, Result};
use crate::scalar::{LPoly, Scalar};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c));
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !x[j].is_zero() {
                        acc = acc.add(&self[(i, j)].mul(&x[j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul_mat(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if !other[(k, j)].is_zero() {
                        out[(i, j)] = out[(i, j)].add(&self[(i, k)].mul(&other[(k, j)]));
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

/// Echelon data from fraction-free elimination.
pub struct Echelon {
    /// (row, col) of each pivot, in elimination order.
    pub pivots: Vec<(usize, usize)>,
    pub rank: usize,
    /// Row-echelon matrix over Scalar (rows unnormalized).
    pub ech: Mat,
}

/// Clear denominators row by row, then run single-step Bareiss elimination
/// with column pivoting in natural order. Pivot rows are chosen by a
/// fewest-terms heuristic to slow coefficient growth.
pub fn echelon(m: &Mat) -> Echelon {
    // clear each row to integer Laurent polynomials
    let mut rows: Vec<Vec<LPoly>> = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let mut den = LPoly::one();
        for j in 0..m.cols {
            if !m[(i, j)].is_zero() {
                den = lcm_poly(&den, m[(i, j)].denom());
            }
        }
        let denom_scalar = Scalar::from_parts(den, LPoly::one()).unwrap();
        let row: Vec<LPoly> = (0..m.cols)
            .map(|j| {
                let s = m[(i, j)].mul(&denom_scalar);
                debug_assert!(s.denom() == &LPoly::one());
                s.numer().clone()
            })
            .collect();
        rows.push(row);
    }

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; m.rows];
    let mut prev_pivot = LPoly::one();
    for col in 0..m.cols {
        // pick an unused row with nonzero entry in this column, fewest terms
        let cand = (0..m.rows)
            .filter(|&i| !used[i] && !rows[i][col].is_zero())
            .min_by_key(|&i| rows[i][col].num_terms());
        let Some(p) = cand else { continue };
        used[p] = true;
        let piv = rows[p][col].clone();
        for i in 0..m.rows {
            if used[i] && i != p {
                continue;
            }
            if i == p {
                continue;
            }
            // Bareiss update: row_i = (piv * row_i - row_i[col] * row_p) / prev_pivot
            let factor = rows[i][col].clone();
            if factor.is_zero() && piv == prev_pivot {
                continue;
            }
            for j in 0..m.cols {
                let a = piv.mul(&rows[i][j]);
                let b = factor.mul(&rows[p][j]);
                let num = a.sub(&b);
                rows[i][j] = div_exact_poly(&num, &prev_pivot);
            }
        }
        pivots.push((p, col));
        prev_pivot = piv;
    }
    let rank = pivots.len();
    let ech = Mat::from_rows(
        rows.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|p| Scalar::from_parts(p, LPoly::one()).unwrap())
                    .collect()
            })
            .collect(),
    );
    Echelon { pivots, rank, ech }
}

fn lcm_poly(a: &LPoly, b: &LPoly) -> LPoly {
    // reduce a/b; the reduced denominator is b/gcd(a,b) up to sign, so
    // a * (b/gcd) is an lcm up to sign, which is all row clearing needs
    let red = Scalar::from_parts(a.clone(), b.clone()).unwrap();
    a.mul(red.denom())
}

fn div_exact_poly(a: &LPoly, b: &LPoly) -> LPoly {
    if a.is_zero() {
        return LPoly::zero();
    }
    let s = Scalar::from_parts(a.clone(), b.clone()).unwrap();
    assert!(
        s.denom() == &LPoly::one(),
        "Bareiss division was not exact"
    );
    s.numer().clone()
}

pub fn rank(m: &Mat) -> usize {
    echelon(m).rank
}

/// Basis of the right kernel { x : M x = 0 }.
pub fn right_kernel(m: &Mat) -> Vec<Vec<Scalar>> {
    let e = echelon(m);
    let pivot_cols: Vec<usize> = e.pivots.iter().map(|&(_, c)| c).collect();
    let free_cols: Vec<usize> = (0..m.cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut x = vec![Scalar::zero(); m.cols];
        x[fc] = Scalar::one();
        // back-substitute pivots in reverse elimination order
        for &(pr, pc) in e.pivots.iter().rev() {
            // row pr: sum_j ech[pr][j] x_j = 0 => solve for x_pc
            let mut acc = Scalar::zero();
            for j in 0..m.cols {
                if j != pc && !e.ech[(pr, j)].is_zero() && !x[j].is_zero() {
                    acc = acc.add(&e.ech[(pr, j)].mul(&x[j]));
                }
            }
            x[pc] = acc.neg().div(&e.ech[(pr, pc)]).unwrap();
        }
        basis.push(x);
    }
    basis
}

/// Solve M x = b. Returns None if inconsistent. When the system is
/// underdetermined the free variables are set to zero.
pub fn solve(m: &Mat, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(m.rows, b.len());
    // eliminate on the augmented matrix
    let mut aug = Mat::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = b[i].clone();
    }
    let e = echelon(&aug);
    // a pivot in the last column means inconsistency
    if e.pivots.iter().any(|&(_, c)| c == m.cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); m.cols];
    for &(pr, pc) in e.pivots.iter().rev() {
        let mut acc = e.ech[(pr, m.cols)].clone();
        for j in 0..m.cols {
            if j != pc && !e.ech[(pr, j)].is_zero() && !x[j].is_zero() {
                acc = acc.sub(&e.ech[(pr, j)].mul(&x[j]));
            }
        }
        x[pc] = acc.div(&e.ech[(pr, pc)]).unwrap();
    }
    Some(x)
}

/// Solve with a uniqueness requirement; errors if the system is singular
/// or inconsistent.
pub fn solve_unique(m: &Mat, b: &[Scalar]) -> Result<Vec<Scalar>> {
    if rank(m) != m.cols {
        return Err(Error::Invariant(format!(
            "linear system is rank-deficient ({}x{}, rank {})",
            m.rows,
            m.cols,
            rank(m)
        )));
    }
    solve(m, b).ok_or_else(|| Error::Invariant("inconsistent linear system".into()))
}

/// Quotient data for a (Hermitian-type) Gram matrix: a greedy maximal set of
/// indices with invertible principal minor, and the reduction matrix whose
/// column j holds the coordinates of index j over the selected
/// representatives.
///
/// The greedy selection maintains the inverse of the accepted principal minor
/// incrementally through Schur complements, and a rejected index is verified
/// to be fully dependent (its entire Gram column, not just the principal
/// slice, must match its reduction) — this certifies the rank without
/// separate eliminations.
pub fn gram_quotient(gram: &Mat) -> Result<(Vec<usize>, Mat)> {
    let n = gram.rows;
    let mut reps: Vec<usize> = Vec::new();
    let mut inv = Mat::zeros(0, 0);
    for j in 0..n {
        let b: Vec<Scalar> = reps.iter().map(|&r| gram[(r, j)].clone()).collect();
        let c: Vec<Scalar> = reps.iter().map(|&r| gram[(j, r)].clone()).collect();
        let d = gram[(j, j)].clone();
        let u = inv.mul_vec(&b);
        let mut schur = d;
        for (ck, uk) in c.iter().zip(&u) {
            if !ck.is_zero() && !uk.is_zero() {
                schur = schur.sub(&ck.mul(uk));
            }
        }
        if !schur.is_zero() {
            // accept: block-update the inverse
            let r = reps.len();
            let sinv = schur.inv()?;
            // w = c * inv (row vector)
            let w: Vec<Scalar> = (0..r)
                .map(|k| {
                    let mut acc = Scalar::zero();
                    for (i, ci) in c.iter().enumerate() {
                        if !ci.is_zero() && !inv[(i, k)].is_zero() {
                            acc = acc.add(&ci.mul(&inv[(i, k)]));
                        }
                    }
                    acc
                })
                .collect();
            let mut next = Mat::zeros(r + 1, r + 1);
            for a in 0..r {
                for bcol in 0..r {
                    let corr = u[a].mul(&w[bcol]).mul(&sinv);
                    next[(a, bcol)] = inv[(a, bcol)].add(&corr);
                }
                next[(a, r)] = u[a].mul(&sinv).neg();
            }
            for bcol in 0..r {
                next[(r, bcol)] = w[bcol].mul(&sinv).neg();
            }
            next[(r, r)] = sinv;
            inv = next;
            reps.push(j);
        }
    }
    // finalize the reduction matrix; re-reduce earlier rejections against the
    // final representative set and verify full-column dependence
    let mut reduce = Mat::zeros(reps.len(), n);
    for j in 0..n {
        let coords: Vec<Scalar> = if reps.contains(&j) {
            let pos = reps.iter().position(|&r| r == j).unwrap();
            (0..reps.len())
                .map(|k| {
                    if k == pos {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        } else {
            let b: Vec<Scalar> = reps.iter().map(|&r| gram[(r, j)].clone()).collect();
            let coords = inv.mul_vec(&b);
            // full-column consistency: G[:, j] = G[:, reps] . coords
            for row in 0..n {
                let mut acc = Scalar::zero();
                for (k, &r) in reps.iter().enumerate() {
                    if !coords[k].is_zero() && !gram[(row, r)].is_zero() {
                        acc = acc.add(&gram[(row, r)].mul(&coords[k]));
                    }
                }
                if acc != gram[(row, j)] {
                    return Err(Error::Invariant(
                        "Gram column dependence is not principal".into(),
                    ));
                }
            }
            coords
        };
        for (k, cval) in coords.iter().enumerate() {
            reduce[(k, j)] = cval.clone();
        }
    }
    Ok((reps, reduce))
}

pub fn inverse(m: &Mat) -> Result<Mat> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Scalar::zero(); n];
        e[j] = Scalar::one();
        let x = solve_unique(m, &e)?;
        cols.push(x);
    }
    let mut out = Mat::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        for i in 0..n {
            out[(i, j)] = c[i].clone();
        }
    }
    Ok(out)
}

/// True if the square matrix is invertible.
pub fn is_invertible(m: &Mat) -> bool {
    m.rows == m.cols && rank(m) == m.rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rank_and_kernel() {
        let v = Scalar::v();
        // [[1, v], [v, v^2]] has rank 1, kernel spanned by (-v, 1)
        let m = Mat::from_rows(vec![
            vec![s(1), v.clone()],
            vec![v.clone(), v.mul(&v)],
        ]);
        assert_eq!(rank(&m), 1);
        let k = right_kernel(&m);
        assert_eq!(k.len(), 1);
        let chk = m.mul_vec(&k[0]);
        assert!(chk.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_exact() {
        let v = Scalar::v();
        let m = Mat::from_rows(vec![
            vec![s(1), v.clone()],
            vec![v.clone(), s(1)],
        ]);
        let b = vec![s(1), s(0)];
        let x = solve_unique(&m, &b).unwrap();
        let chk = m.mul_vec(&x);
        assert_eq!(chk[0], s(1));
        assert_eq!(chk[1], s(0));
    }

    #[test]
    fn inverse_roundtrip() {
        let v = Scalar::v();
        let m = Mat::from_rows(vec![
            vec![s(2), v.clone()],
            vec![v.clone(), s(1).add(&v.mul(&v))],
        ]);
        let inv = inverse(&m).unwrap();
        let prod = m.mul_mat(&inv);
        assert_eq!(prod, Mat::identity(2));
    }
}
