//! Integer-coefficient Laurent polynomials in `v` and a fractional power of `t`.
//!
//! Terms are keyed by `(v_exp, t_exp)` where the `t` exponent is an exact
//! rational (the ambient datum fixes a lattice `(1/D)Z`, but the type itself
//! carries arbitrary rational exponents so scalars from different data mix
//! safely). Coefficients are arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Exact t-exponent.
pub type TExp = Ratio<i64>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(into = "LPolyRepr", from = "LPolyRepr")]
pub struct LPoly {
    terms: BTreeMap<(i64, TExp), BigInt>,
}

/// Serialization shape: a plain term list (JSON maps need string keys).
#[derive(Serialize, Deserialize)]
pub struct LPolyRepr(Vec<(i64, TExp, BigInt)>);

impl From<LPoly> for LPolyRepr {
    fn from(p: LPoly) -> Self {
        LPolyRepr(p.terms.into_iter().map(|((a, b), c)| (a, b, c)).collect())
    }
}

impl From<LPolyRepr> for LPoly {
    fn from(r: LPolyRepr) -> Self {
        LPoly {
            terms: r.0.into_iter().map(|(a, b, c)| ((a, b), c)).collect(),
        }
    }
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0, TExp::zero())
    }

    pub fn monomial(c: BigInt, v_exp: i64, t_exp: TExp) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((v_exp, t_exp), c);
        }
        LPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::monomial(BigInt::from(n), 0, TExp::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, TExp), &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, v_exp: i64, t_exp: TExp, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((v_exp, t_exp)).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(v_exp, t_exp));
        }
    }

    pub fn add(&self, other: &LPoly) -> LPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn sub(&self, other: &LPoly) -> LPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, &(-c));
        }
        out
    }

    pub fn neg(&self) -> LPoly {
        LPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &LPoly) -> LPoly {
        let mut out = LPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add_term(a1 + a2, b1 + b2, &(c1 * c2));
            }
        }
        out
    }

    pub fn mul_monomial(&self, c: &BigInt, v_exp: i64, t_exp: TExp) -> LPoly {
        if c.is_zero() {
            return LPoly::zero();
        }
        LPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), k)| ((a + v_exp, b + t_exp), k * c))
                .collect(),
        }
    }

    /// Smallest v-exponent with a nonzero coefficient. None for the zero polynomial.
    pub fn val_v(&self) -> Option<i64> {
        self.terms.keys().map(|&(a, _)| a).min()
    }

    pub fn deg_v(&self) -> Option<i64> {
        self.terms.keys().map(|&(a, _)| a).max()
    }

    pub fn val_t(&self) -> Option<TExp> {
        self.terms.keys().map(|&(_, b)| b).min()
    }

    pub fn deg_t(&self) -> Option<TExp> {
        self.terms.keys().map(|&(_, b)| b).max()
    }

    /// The coefficient of `v^0`, as a polynomial in `t` alone.
    pub fn v0_slice(&self) -> LPoly {
        self.v_slice(0)
    }

    /// The coefficient of `v^e`, as a polynomial in `t` alone.
    pub fn v_slice(&self, e: i64) -> LPoly {
        LPoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(a, _), _)| a == e)
                .map(|(&(_, b), c)| ((0, b), c.clone()))
                .collect(),
        }
    }

    /// Substitute v -> v^{-1} (negate every v-exponent).
    pub fn invert_v(&self) -> LPoly {
        LPoly {
            terms: self.terms.iter().map(|(&(a, b), c)| ((-a, b), c.clone())).collect(),
        }
    }

    /// Substitute t^{1/D} -> t^{-1/D} (negate every t-exponent).
    pub fn invert_t(&self) -> LPoly {
        LPoly {
            terms: self.terms.iter().map(|(&(a, b), c)| ((a, -b), c.clone())).collect(),
        }
    }

    /// Substitute t -> 1 (drop all t-exponents, merging coefficients).
    pub fn eval_t1(&self) -> LPoly {
        let mut out = LPoly::zero();
        for (&(a, _), c) in &self.terms {
            out.add_term(a, TExp::zero(), c);
        }
        out
    }

    /// Substitute v -> v^k, t -> t^k for positive integer k.
    pub fn stretch(&self, k: i64) -> LPoly {
        LPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((a * k, b * k), c.clone()))
                .collect(),
        }
    }

    /// The coefficient on the lexicographically largest (v, t) key.
    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.last_key_value().map(|(_, c)| c)
    }

    /// gcd of all integer coefficients, always nonnegative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_content(&self, g: &BigInt) -> LPoly {
        if g.is_one() {
            return self.clone();
        }
        LPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, c / g)).collect(),
        }
    }

    /// True if every t-exponent is zero.
    pub fn is_t_free(&self) -> bool {
        self.terms.keys().all(|&(_, b)| b.is_zero())
    }

    /// True if this is a single term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// All distinct t-exponents.
    pub fn t_exponents(&self) -> Vec<TExp> {
        let mut es: Vec<TExp> = self.terms.keys().map(|&(_, b)| b).collect();
        es.dedup();
        es.sort();
        es.dedup();
        es
    }
}

impl std::fmt::Display for LPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // descending term order reads most naturally
        let mut first = true;
        for (&(a, b), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut pieces: Vec<String> = Vec::new();
            let coeff_needed = !c.is_one() || (a == 0 && b.is_zero());
            if coeff_needed {
                if c.is_negative() {
                    pieces.push(format!("({})", c));
                } else {
                    pieces.push(format!("{}", c));
                }
            }
            if a != 0 {
                if a == 1 {
                    pieces.push("v".to_string());
                } else {
                    pieces.push(format!("v^{}", a));
                }
            }
            if !b.is_zero() {
                if b.is_one() {
                    pieces.push("t".to_string());
                } else if b.is_integer() {
                    pieces.push(format!("t^{}", b.numer()));
                } else {
                    pieces.push(format!("t^({}/{})", b.numer(), b.denom()));
                }
            }
            write!(f, "{}", pieces.join(" * "))?;
        }
        Ok(())
    }
}
