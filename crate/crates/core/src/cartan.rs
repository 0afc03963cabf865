//! Cartan data refined by a Lambda-matrix, with the derived pairings and
//! weight/root arithmetic everything downstream consumes.
//!
//! The matrix entries `Lambda_{ij}` refine a symmetrizable GCM through
//! `<i,j> = Lambda_{ij}`, `i.j = <i,j> + <j,i>`, `a_{ij} = 2 i.j / i.i`.
//! Fundamental-weight pairings `<i, L_k>` and `<L_k, i>` land on a lattice
//! `(1/D)Z`; `D` is computed by expressing fundamental weights in the root
//! basis when the GCM is invertible, or taken from user-supplied pairings
//! otherwise.

use crate::error::{Error, Result};
use crate::scalar::{Scalar, TExp};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// A vector in the root lattice Q, in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn zero(rank: usize) -> Self {
        RootVector(vec![0; rank])
    }

    pub fn height(&self) -> usize {
        self.0.iter().map(|n| n.unsigned_abs() as usize).sum()
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().all(|&n| n <= 0)
    }

    pub fn add_alpha(&self, i: usize, k: i64) -> RootVector {
        let mut v = self.0.clone();
        v[i] += k;
        RootVector(v)
    }

    pub fn add(&self, other: &RootVector) -> RootVector {
        RootVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

/// A dominant integral weight in fundamental-weight coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct DominantWeight(pub Vec<i64>);

impl DominantWeight {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.iter().any(|&c| c < 0) {
            return Err(Error::NotDominant(coords));
        }
        Ok(DominantWeight(coords))
    }
}

/// A weight of the form lambda + xi with lambda a sum of fundamental weights
/// (integer coefficients, not necessarily dominant for intermediate values)
/// and xi in the root lattice.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Weight {
    pub lam: Vec<i64>,
    pub xi: Vec<i64>,
}

impl Weight {
    pub fn from_dominant(lam: &DominantWeight) -> Self {
        let rank = lam.0.len();
        Weight {
            lam: lam.0.clone(),
            xi: vec![0; rank],
        }
    }

    pub fn shift(&self, xi: &RootVector) -> Weight {
        Weight {
            lam: self.lam.clone(),
            xi: self.xi.iter().zip(&xi.0).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn shift_alpha(&self, i: usize, k: i64) -> Weight {
        let mut xi = self.xi.clone();
        xi[i] += k;
        Weight {
            lam: self.lam.clone(),
            xi,
        }
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight {
            lam: self.lam.iter().zip(&other.lam).map(|(a, b)| a + b).collect(),
            xi: self.xi.iter().zip(&other.xi).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Whether to evaluate k_i or k_i'.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KGen {
    K,
    KPrime,
}

/// Optional user-supplied pairing tables for data whose GCM is singular:
/// `i_fund[i][k] = <alpha_i, Lambda_k>` and `fund_i[k][i] = <Lambda_k, alpha_i>`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingTables {
    pub i_fund: Vec<Vec<Ratio<i64>>>,
    pub fund_i: Vec<Vec<Ratio<i64>>>,
}

#[derive(Clone, Debug)]
pub struct CartanDatum {
    labels: Vec<String>,
    lambda: Vec<Vec<i64>>,
    sym: Vec<Vec<i64>>,
    gcm: Vec<Vec<i64>>,
    d_lattice: i64,
    /// <alpha_i, Lambda_k>
    pair_i_fund: Vec<Vec<Ratio<i64>>>,
    /// <Lambda_k, alpha_i>, indexed [k][i]
    pair_fund_i: Vec<Vec<Ratio<i64>>>,
    finite_type: bool,
}

impl CartanDatum {
    /// Validate a Lambda-matrix and derive everything. `pairings` is only
    /// consulted when the GCM is singular.
    pub fn validate(
        lambda: Vec<Vec<i64>>,
        labels: Option<Vec<String>>,
        pairings: Option<PairingTables>,
    ) -> Result<Arc<CartanDatum>> {
        let n = lambda.len();
        let mut violations = Vec::new();
        if n == 0 {
            violations.push("empty matrix".to_string());
            return Err(Error::InvalidDatum(violations));
        }
        if lambda.iter().any(|r| r.len() != n) {
            violations.push("matrix is not square".to_string());
            return Err(Error::InvalidDatum(violations));
        }
        for i in 0..n {
            if lambda[i][i] <= 0 {
                violations.push(format!("Lambda[{0}][{0}] = {1} must be positive", i, lambda[i][i]));
            }
            for j in 0..n {
                if i != j && lambda[i][j] > 0 {
                    violations.push(format!(
                        "Lambda[{}][{}] = {} must be <= 0 off the diagonal",
                        i, j, lambda[i][j]
                    ));
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidDatum(violations));
        }
        let mut g = 0i64;
        for i in 0..n {
            g = g.gcd(&lambda[i][i]);
        }
        if g != 1 {
            violations.push(format!("gcd of diagonal entries is {}, must be 1", g));
        }
        let mut sym = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                sym[i][j] = lambda[i][j] + lambda[j][i];
            }
        }
        let mut gcm = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let num = sym[i][j]; // (Lambda_ij + Lambda_ji)
                if num % lambda[i][i] != 0 {
                    violations.push(format!(
                        "(Lambda[{i}][{j}] + Lambda[{j}][{i}]) = {num} not divisible by Lambda[{i}][{i}]"
                    ));
                    continue;
                }
                gcm[i][j] = num / lambda[i][i];
                if i != j && gcm[i][j] > 0 {
                    violations.push(format!("GCM entry a[{}][{}] = {} is positive", i, j, gcm[i][j]));
                }
            }
        }
        for i in 0..n {
            if gcm[i][i] != 2 {
                violations.push(format!("a[{0}][{0}] = {1}, must be 2", i, gcm[i][i]));
            }
            for j in 0..n {
                if i != j && (gcm[i][j] == 0) != (gcm[j][i] == 0) {
                    violations.push(format!("a[{i}][{j}] = 0 but a[{j}][{i}] != 0"));
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidDatum(violations));
        }

        let labels = labels.unwrap_or_else(|| (1..=n).map(|i| i.to_string()).collect());
        if labels.len() != n {
            return Err(Error::InvalidDatum(vec![format!(
                "{} labels for rank {}",
                labels.len(),
                n
            )]));
        }

        // express fundamental weights in the alpha basis: columns of gcm^{-1}
        let inv = invert_rational(&gcm);
        let (pair_i_fund, pair_fund_i, finite_type) = match inv {
            Some(c) => {
                // Lambda_k = sum_j c[j][k] alpha_j
                let mut pif = vec![vec![Ratio::zero(); n]; n];
                let mut pfi = vec![vec![Ratio::zero(); n]; n];
                for k in 0..n {
                    for i in 0..n {
                        let mut a = BigRational::zero();
                        let mut b = BigRational::zero();
                        for j in 0..n {
                            a += &c[j][k] * BigRational::from_integer(BigInt::from(lambda[i][j]));
                            b += &c[j][k] * BigRational::from_integer(BigInt::from(lambda[j][i]));
                        }
                        pif[i][k] = to_small(&a)?;
                        pfi[k][i] = to_small(&b)?;
                    }
                }
                (pif, pfi, true)
            }
            None => match pairings {
                Some(p) => {
                    if p.i_fund.len() != n
                        || p.fund_i.len() != n
                        || p.i_fund.iter().any(|r| r.len() != n)
                        || p.fund_i.iter().any(|r| r.len() != n)
                    {
                        return Err(Error::InvalidDatum(vec![
                            "pairing tables have wrong shape".to_string()
                        ]));
                    }
                    (p.i_fund, p.fund_i, false)
                }
                None => return Err(Error::SingularDatum),
            },
        };

        // D: smallest positive integer putting all pairings on (1/D)Z
        let mut d: i64 = 1;
        for row in pair_i_fund.iter().chain(pair_fund_i.iter()) {
            for x in row {
                d = d.lcm(x.denom());
            }
        }

        Ok(Arc::new(CartanDatum {
            labels,
            lambda,
            sym,
            gcm,
            d_lattice: d,
            pair_i_fund,
            pair_fund_i,
            finite_type,
        }))
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn lambda_matrix(&self) -> &Vec<Vec<i64>> {
        &self.lambda
    }

    /// <i, j> = Lambda_{ij}
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        self.lambda[i][j]
    }

    /// i . j
    pub fn dot(&self, i: usize, j: usize) -> i64 {
        self.sym[i][j]
    }

    /// a_{ij} = <h_i, alpha_j>
    pub fn gcm(&self, i: usize, j: usize) -> i64 {
        self.gcm[i][j]
    }

    /// d_i = i.i / 2, the exponent in v_i = v^{d_i}, t_i = t^{d_i}.
    pub fn d_i(&self, i: usize) -> i64 {
        self.sym[i][i] / 2
    }

    pub fn d_lattice(&self) -> i64 {
        self.d_lattice
    }

    pub fn is_finite_type(&self) -> bool {
        self.finite_type
    }

    /// <h_i, lambda + xi>
    pub fn h_pair(&self, i: usize, wt: &Weight) -> i64 {
        let mut acc = wt.lam[i];
        for j in 0..self.rank() {
            acc += self.gcm[i][j] * wt.xi[j];
        }
        acc
    }

    /// (alpha_i, lambda + xi): integer because (alpha_i, Lambda_k) = d_i delta_ik.
    pub fn dot_alpha(&self, i: usize, wt: &Weight) -> i64 {
        let mut acc = self.d_i(i) * wt.lam[i];
        for j in 0..self.rank() {
            acc += self.sym[i][j] * wt.xi[j];
        }
        acc
    }

    /// <alpha_i, mu> for mu = lambda + xi.
    pub fn pair_i_wt(&self, i: usize, wt: &Weight) -> Ratio<i64> {
        let mut acc = Ratio::zero();
        for k in 0..self.rank() {
            acc += self.pair_i_fund[i][k] * wt.lam[k];
        }
        for j in 0..self.rank() {
            acc += Ratio::from_integer(self.lambda[i][j] * wt.xi[j]);
        }
        acc
    }

    /// <mu, alpha_i> for mu = lambda + xi.
    pub fn pair_wt_i(&self, i: usize, wt: &Weight) -> Ratio<i64> {
        let mut acc = Ratio::zero();
        for k in 0..self.rank() {
            acc += self.pair_fund_i[k][i] * wt.lam[k];
        }
        for j in 0..self.rank() {
            acc += Ratio::from_integer(self.lambda[j][i] * wt.xi[j]);
        }
        acc
    }

    /// The t-exponent <i, mu> - <mu, i> of both k_i and k_i' on M_mu.
    pub fn t_exponent(&self, i: usize, wt: &Weight) -> TExp {
        self.pair_i_wt(i, wt) - self.pair_wt_i(i, wt)
    }

    /// Exact eigenvalue of k_i (or k_i') on the weight space M_mu.
    pub fn k_scalar(&self, i: usize, wt: &Weight, which: KGen) -> Scalar {
        let ve = self.dot_alpha(i, wt);
        let te = self.t_exponent(i, wt);
        match which {
            KGen::K => Scalar::monomial(1, ve, te),
            KGen::KPrime => Scalar::monomial(1, -ve, te),
        }
    }
}

/// JSON document shape for datum files.
#[derive(Deserialize)]
struct DatumFile {
    #[serde(rename = "Lambda")]
    lambda: Vec<Vec<i64>>,
    labels: Option<Vec<String>>,
    pairings: Option<PairingFile>,
}

#[derive(Deserialize)]
struct PairingFile {
    i_fund: Vec<Vec<String>>,
    fund_i: Vec<Vec<String>>,
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let p: i64 = a
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad rational '{}'", s)))?;
        let q: i64 = b
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad rational '{}'", s)))?;
        if q == 0 {
            return Err(Error::Config(format!("bad rational '{}'", s)));
        }
        Ok(Ratio::new(p, q))
    } else {
        let p: i64 = s
            .parse()
            .map_err(|_| Error::Config(format!("bad rational '{}'", s)))?;
        Ok(Ratio::from_integer(p))
    }
}

/// Parse a datum from its JSON document.
pub fn datum_from_json(text: &str) -> Result<Arc<CartanDatum>> {
    let file: DatumFile = serde_json::from_str(text)?;
    let pairings = match file.pairings {
        None => None,
        Some(p) => {
            let conv = |rows: Vec<Vec<String>>| -> Result<Vec<Vec<Ratio<i64>>>> {
                rows.into_iter()
                    .map(|r| r.into_iter().map(|s| parse_ratio(&s)).collect())
                    .collect()
            };
            Some(PairingTables {
                i_fund: conv(p.i_fund)?,
                fund_i: conv(p.fund_i)?,
            })
        }
    };
    CartanDatum::validate(file.lambda, file.labels, pairings)
}

fn invert_rational(a: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(BigInt::from(a[i][j]))
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
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
    Some(
        (0..n)
            .map(|i| (0..n).map(|j| m[i][j + n].clone()).collect())
            .collect(),
    )
}

fn to_small(x: &BigRational) -> Result<Ratio<i64>> {
    let num = x.numer();
    let den = x.denom();
    let num: i64 = num
        .try_into()
        .map_err(|_| Error::Invariant("pairing value overflows i64".into()))?;
    let den: i64 = den
        .try_into()
        .map_err(|_| Error::Invariant("pairing value overflows i64".into()))?;
    Ok(Ratio::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn sl2() -> Arc<CartanDatum> {
        CartanDatum::validate(vec![vec![1]], None, None).unwrap()
    }

    pub fn a2() -> Arc<CartanDatum> {
        CartanDatum::validate(vec![vec![1, -1], vec![0, 1]], None, None).unwrap()
    }

    #[test]
    fn rank1_datum() {
        let d = sl2();
        assert_eq!(d.dot(0, 0), 2);
        assert_eq!(d.d_i(0), 1);
        assert_eq!(d.d_lattice(), 2);
    }

    #[test]
    fn a2_datum() {
        let d = a2();
        assert_eq!(d.dot(0, 1), -1);
        assert_eq!(d.gcm(0, 1), -1);
        assert_eq!(d.gcm(1, 0), -1);
        assert_eq!(d.d_lattice(), 3);
        // Lambda_1 = (2 alpha_1 + alpha_2)/3: <1, L1> = 1/3, <L1, 1> = 2/3
        assert_eq!(d.pair_i_fund[0][0], Ratio::new(1, 3));
        assert_eq!(d.pair_fund_i[0][0], Ratio::new(2, 3));
    }

    #[test]
    fn gcd_condition_rejected() {
        let err = CartanDatum::validate(vec![vec![2, 0], vec![0, 2]], None, None);
        assert!(matches!(err, Err(Error::InvalidDatum(_))));
    }

    #[test]
    fn singular_gcm_needs_pairings() {
        // affine-type matrix: the GCM [[2,-2],[-2,2]] is singular
        let lambda = vec![vec![1, -1], vec![-1, 1]];
        let err = CartanDatum::validate(lambda.clone(), None, None);
        assert!(matches!(err, Err(Error::SingularDatum)));
        let pairings = PairingTables {
            i_fund: vec![vec![Ratio::new(1, 2); 2]; 2],
            fund_i: vec![vec![Ratio::new(1, 2); 2]; 2],
        };
        let d = CartanDatum::validate(lambda, None, Some(pairings)).unwrap();
        assert!(!d.is_finite_type());
        assert_eq!(d.d_lattice(), 2);
    }

    #[test]
    fn datum_json_with_pairings() {
        let text = r#"{
            "Lambda": [[1, -1], [-1, 1]],
            "labels": ["0", "1"],
            "pairings": {
                "i_fund": [["1/2", "1/2"], ["1/2", "1/2"]],
                "fund_i": [["1/2", "1/2"], ["1/2", "1/2"]]
            }
        }"#;
        let d = datum_from_json(text).unwrap();
        assert_eq!(d.labels(), &["0".to_string(), "1".to_string()]);
        assert!(!d.is_finite_type());
    }

    #[test]
    fn k_scalar_values() {
        // sl2, lambda = Lambda_1: k_1 acts by v
        let d = sl2();
        let wt = Weight::from_dominant(&DominantWeight::new(vec![1]).unwrap());
        assert_eq!(d.k_scalar(0, &wt, KGen::K), Scalar::v());
        // A2, lambda = Lambda_1: k_1 acts by v * t^{-1/3}
        let d = a2();
        let wt = Weight::from_dominant(&DominantWeight::new(vec![1, 0]).unwrap());
        let expect = Scalar::monomial(1, 1, TExp::new(-1, 3));
        assert_eq!(d.k_scalar(0, &wt, KGen::K), expect);
        // k * k' = t^{2(<i,mu>-<mu,i>)}
        let k = d.k_scalar(0, &wt, KGen::K);
        let kp = d.k_scalar(0, &wt, KGen::KPrime);
        assert_eq!(
            k.mul(&kp),
            Scalar::t_pow(TExp::new(-2, 3))
        );
    }

    #[test]
    fn gcm_identity() {
        let d = a2();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(d.gcm(i, j) * d.dot(i, i), 2 * d.dot(i, j));
            }
        }
    }

    #[test]
    fn shift_conjugation_factors() {
        // k_scalar along an alpha_j shift multiplies by v^{+-i.j} t^{+-(<i,j>-<j,i>)}
        let d = a2();
        let wt = Weight::from_dominant(&DominantWeight::new(vec![1, 1]).unwrap());
        for i in 0..2 {
            for j in 0..2 {
                let shifted = wt.shift_alpha(j, 1);
                let a = d.k_scalar(i, &shifted, KGen::K);
                let b = d.k_scalar(i, &wt, KGen::K);
                let factor = a.div(&b).unwrap();
                let expect = Scalar::monomial(
                    1,
                    d.dot(i, j),
                    TExp::from_integer(d.pairing(i, j) - d.pairing(j, i)),
                );
                assert_eq!(factor, expect);
            }
        }
    }
}
