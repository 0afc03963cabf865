//! Independent dimension oracles, all at the one-parameter (t = 1) level:
//! positive-root enumeration for finite type, the Kostant partition count
//! for graded dimensions of the negative half, and Freudenthal's recursion
//! for weight multiplicities of irreducible highest-weight modules.
//!
//! These are deliberately separate from the Gram-quotient pipeline so that
//! quotient dimensions can be checked against classical theory.

use crate::cartan::{CartanDatum, DominantWeight, RootVector, Weight};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap, HashSet};

/// All positive roots of a finite-type GCM, in simple-root coordinates,
/// listed by increasing height. Errors when generation does not terminate
/// (non-finite type guard).
pub fn positive_roots(datum: &CartanDatum) -> Result<Vec<Vec<i64>>> {
    let n = datum.rank();
    let mut roots: HashSet<Vec<i64>> = HashSet::new();
    let mut by_height: Vec<Vec<Vec<i64>>> = vec![Vec::new()];
    let mut simple = Vec::new();
    for i in 0..n {
        let mut a = vec![0i64; n];
        a[i] = 1;
        simple.push(a.clone());
        roots.insert(a);
    }
    by_height.push(simple.clone());

    let cap = 1000usize;
    let mut h = 1usize;
    loop {
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &by_height[h] {
            for i in 0..n {
                // root string through beta in direction alpha_i:
                // beta + alpha_i is a root iff p - <beta, h_i> > 0 where
                // p = max { k : beta - k alpha_i is a root }
                let mut p = 0i64;
                loop {
                    let mut c = beta.clone();
                    c[i] -= p + 1;
                    if c.iter().all(|&x| x >= 0) && roots.contains(&c) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pair: i64 = (0..n).map(|j| datum.gcm(i, j) * beta[j]).sum();
                if p - pair > 0 {
                    let mut c = beta.clone();
                    c[i] += 1;
                    if roots.insert(c.clone()) {
                        next.push(c);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        by_height.push(next);
        h += 1;
        if h > cap {
            return Err(Error::Invariant(
                "positive-root generation did not terminate; datum is not finite type".into(),
            ));
        }
    }
    Ok(by_height.into_iter().flatten().collect())
}

/// Kostant partition count: the number of ways to write `nu` (nonnegative
/// coordinates) as a sum of positive roots. Equals dim U^-_{-nu} of the
/// one-parameter half at t = 1, hence of the two-parameter half as well.
pub fn kostant_partitions(datum: &CartanDatum, nu: &[i64]) -> Result<u64> {
    let roots = positive_roots(datum)?;
    let mut memo: HashMap<(usize, Vec<i64>), u64> = HashMap::new();
    fn count(
        roots: &[Vec<i64>],
        idx: usize,
        target: &[i64],
        memo: &mut HashMap<(usize, Vec<i64>), u64>,
    ) -> u64 {
        if target.iter().all(|&x| x == 0) {
            return 1;
        }
        if idx == roots.len() {
            return 0;
        }
        let key = (idx, target.to_vec());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut total = 0u64;
        let mut cur = target.to_vec();
        loop {
            total += count(roots, idx + 1, &cur, memo);
            let mut ok = true;
            for (c, r) in cur.iter_mut().zip(&roots[idx]) {
                *c -= r;
                if *c < 0 {
                    ok = false;
                }
            }
            if !ok {
                break;
            }
        }
        memo.insert(key, total);
        total
    }
    Ok(count(&roots, 0, nu, &mut memo))
}

/// Weight multiplicities of V(lambda) by Freudenthal's recursion, using the
/// symmetric form (i, j) -> i.j. Returns a map xi -> dim V(lambda)_{lambda+xi}
/// over all xi with |xi| <= depth.
pub fn freudenthal_multiplicities(
    datum: &CartanDatum,
    lambda: &DominantWeight,
    depth: usize,
) -> Result<BTreeMap<Vec<i64>, u64>> {
    let n = datum.rank();
    let roots = positive_roots(datum)?;
    // (mu, nu) for mu = lambda + xi, nu = lambda + eta expressed via the
    // bilinear extension of i.j; fundamental pairings are rational.
    let dot_wt = |a: &Weight, b: &Weight| -> BigRational {
        // (a, b) = sum_i over root coords: use (alpha_i, b) which is exact
        // plus (Lambda_k, b) = rational via pair tables... compute instead
        // through (x, y) = sum over alpha-coordinates when both are written
        // in the alpha basis with rational coefficients.
        // Here we only ever need (mu + rho', ...) differences of weights of
        // the form lambda + xi, so express everything as lambda-part plus
        // alpha-part and use linearity: (alpha_i, w) = dot_alpha(i, w).
        // (Lambda_k, w): solve from <h_k, w> = 2(alpha_k, w)/(alpha_k,alpha_k)
        // is not needed because (Lambda_k, w) = d_k^{-1}(alpha_k, w) *
        // c-coeffs... use the alpha-expansion of Lambda_k directly.
        let mut acc = BigRational::zero();
        for i in 0..n {
            // coefficient of alpha_i in `a`, rational: from fundamental part
            // plus explicit xi part
            let coeff = alpha_coeff(datum, a, i);
            let pair = BigRational::from_integer(BigInt::from(datum.dot_alpha(i, b)));
            acc += coeff * pair;
        }
        acc
    };

    let lam_wt = Weight::from_dominant(lambda);
    let mut mult: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    mult.insert(vec![0; n], 1);

    // enumerate xi in Q_- by height
    let mut frontier: Vec<Vec<i64>> = vec![vec![0; n]];
    for _h in 1..=depth {
        let mut next: HashSet<Vec<i64>> = HashSet::new();
        for xi in &frontier {
            for i in 0..n {
                let mut c = xi.clone();
                c[i] -= 1;
                next.insert(c);
            }
        }
        let mut next: Vec<Vec<i64>> = next.into_iter().collect();
        next.sort();
        for xi in &next {
            let mu = lam_wt.shift(&RootVector(xi.clone()));
            // rho in the alpha basis is not needed: Freudenthal in the form
            // ((lambda+rho, lambda+rho) - (mu+rho, mu+rho)) m_mu =
            //   2 sum_{beta>0} sum_{k>=1} m_{mu+k beta} (mu + k beta, beta)
            // and (w + rho, w + rho) - (u + rho, u + rho) =
            //   (w, w) - (u, u) + 2 (rho, w - u); (rho, alpha_i) = d_i.
            let mut rhs = BigRational::zero();
            for beta in &roots {
                let mut k = 1i64;
                loop {
                    let mut shifted = xi.clone();
                    let mut positive_ok = true;
                    for (s, b) in shifted.iter_mut().zip(beta) {
                        *s += k * b;
                        if *s > 0 {
                            positive_ok = false;
                        }
                    }
                    if !positive_ok {
                        break;
                    }
                    let m = *mult.get(&shifted).unwrap_or(&0);
                    if m > 0 {
                        let mu_k = lam_wt.shift(&RootVector(shifted.clone()));
                        let beta_wt = Weight {
                            lam: vec![0; n],
                            xi: beta.clone(),
                        };
                        let pair = dot_wt(&mu_k, &beta_wt);
                        rhs += BigRational::from_integer(BigInt::from(m)) * pair;
                    }
                    k += 1;
                }
            }
            rhs = rhs * BigRational::from_integer(BigInt::from(2));
            // denominator: (lambda,lambda) - (mu,mu) + 2(rho, lambda - mu)
            let d1 = dot_wt(&lam_wt, &lam_wt) - dot_wt(&mu, &mu);
            let mut rho_part = BigRational::zero();
            for i in 0..n {
                // lambda - mu = -xi
                rho_part += BigRational::from_integer(BigInt::from(-xi[i] * datum.d_i(i)));
            }
            let den = d1 + BigRational::from_integer(BigInt::from(2)) * rho_part;
            let m = if den.is_zero() {
                BigRational::zero()
            } else {
                rhs / den
            };
            let m_int = if m.is_integer() {
                let v: BigInt = m.to_integer();
                u64::try_from(v).map_err(|_| Error::Invariant("negative multiplicity".into()))?
            } else {
                return Err(Error::Invariant(format!(
                    "Freudenthal produced a non-integer multiplicity at {:?}",
                    xi
                )));
            };
            if m_int > 0 {
                mult.insert(xi.clone(), m_int);
            }
        }
        frontier = next;
    }
    Ok(mult)
}

fn alpha_coeff(datum: &CartanDatum, w: &Weight, i: usize) -> BigRational {
    // coefficient of alpha_i when w = sum_k lam_k Lambda_k + sum_j xi_j alpha_j
    // is expanded in the alpha basis; requires finite type (GCM invertible),
    // which holds whenever this oracle runs.
    let n = datum.rank();
    // Lambda_k = sum_j c_{jk} alpha_j with c = gcm^{-1}; recompute on the fly
    // (tiny matrices) to avoid caching rationals in the datum.
    let mut c = vec![vec![BigRational::zero(); n]; n];
    let inv = invert_gcm(datum);
    for (j, row) in inv.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            c[j][k] = x.clone();
        }
    }
    let mut acc = BigRational::from_integer(BigInt::from(w.xi[i]));
    for k in 0..n {
        acc += &c[i][k] * BigRational::from_integer(BigInt::from(w.lam[k]));
    }
    acc
}

fn invert_gcm(datum: &CartanDatum) -> Vec<Vec<BigRational>> {
    let n = datum.rank();
    let a: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| datum.gcm(i, j)).collect())
        .collect();
    // Gauss-Jordan over BigRational
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(BigInt::from(a[i][j]))
                    } else if j - n == i {
                        BigRational::from_integer(BigInt::from(1))
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .expect("finite-type GCM is invertible");
        m.swap(col, piv);
        let p = m[col][col].clone();
        for j in 0..2 * n {
            m[col][j] = &m[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..2 * n {
                    let sub = &f * &m[col][j];
                    m[r][j] = &m[r][j] - sub;
                }
            }
        }
    }
    (0..n)
        .map(|i| (0..n).map(|j| m[i][j + n].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanDatum;

    fn a2() -> std::sync::Arc<CartanDatum> {
        CartanDatum::validate(vec![vec![1, -1], vec![0, 1]], None, None).unwrap()
    }

    fn b2() -> std::sync::Arc<CartanDatum> {
        CartanDatum::validate(vec![vec![1, -2], vec![0, 2]], None, None).unwrap()
    }

    #[test]
    fn a2_positive_roots() {
        let r = positive_roots(&a2()).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.contains(&vec![1, 1]));
    }

    #[test]
    fn b2_positive_roots() {
        let r = positive_roots(&b2()).unwrap();
        // B2: alpha_1, alpha_2, alpha_1 + alpha_2, 2 alpha_1 + alpha_2
        assert_eq!(r.len(), 4);
        assert!(r.contains(&vec![2, 1]));
    }

    #[test]
    fn kostant_counts() {
        let d = a2();
        assert_eq!(kostant_partitions(&d, &[1, 1]).unwrap(), 2);
        assert_eq!(kostant_partitions(&d, &[2, 1]).unwrap(), 2);
        assert_eq!(kostant_partitions(&d, &[2, 2]).unwrap(), 3);
        assert_eq!(kostant_partitions(&d, &[0, 0]).unwrap(), 1);
    }

    #[test]
    fn freudenthal_a2_fundamental() {
        let d = a2();
        let m =
            freudenthal_multiplicities(&d, &DominantWeight::new(vec![1, 0]).unwrap(), 3).unwrap();
        // V(Lambda_1) has dims 1, 1, 1 at xi = 0, -a1, -a1-a2
        assert_eq!(m.get(&vec![0, 0]), Some(&1));
        assert_eq!(m.get(&vec![-1, 0]), Some(&1));
        assert_eq!(m.get(&vec![-1, -1]), Some(&1));
        assert_eq!(m.values().sum::<u64>(), 3);
    }

    #[test]
    fn freudenthal_a2_adjoint() {
        let d = a2();
        let m =
            freudenthal_multiplicities(&d, &DominantWeight::new(vec![1, 1]).unwrap(), 6).unwrap();
        // adjoint of sl3: total dimension 8, double weight at -a1-a2
        assert_eq!(m.get(&vec![-1, -1]), Some(&2));
        assert_eq!(m.values().sum::<u64>(), 8);
    }

    #[test]
    fn freudenthal_sl2() {
        let d = CartanDatum::validate(vec![vec![1]], None, None).unwrap();
        let m =
            freudenthal_multiplicities(&d, &DominantWeight::new(vec![3]).unwrap(), 5).unwrap();
        assert_eq!(m.values().sum::<u64>(), 4);
        assert_eq!(m.get(&vec![-3]), Some(&1));
        assert_eq!(m.get(&vec![-4]), None);
    }
}
