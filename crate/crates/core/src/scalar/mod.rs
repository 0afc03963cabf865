//! Exact arithmetic in the field Q(v, t^{1/D}), plus the q-combinatorics and
//! v-adic structure the rest of the crate is built on.
//!
//! A [`Scalar`] is a reduced fraction of integer Laurent polynomials in `v`
//! and rational powers of `t`. The representation is canonical: equal values
//! have identical representations, so equality is structural.

mod gcd;
mod lpoly;

pub use lpoly::{LPoly, TExp};

use crate::error::{Error, Result};
use gcd::{vw_div_exact, vw_gcd, VWPoly, WPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Subrings of Q(v, t^{1/D}) with a decidable-enough membership test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    /// No pole at v = 0.
    A,
    /// No pole at v = infinity.
    ABar,
    /// Z[t^{+-1/D}]-algebra generated by v and (1 - v^{2n})^{-1}.
    AZ,
    /// A_Z together with v^{-1}.
    KZ,
}

/// Three-valued membership verdict; the A_Z / K_Z tests are syntactic on the
/// canonical form and conservative, so they can be inconclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    Unknown,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Scalar {
    num: LPoly,
    den: LPoly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: LPoly::zero(),
            den: LPoly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            num: LPoly::one(),
            den: LPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar {
            num: LPoly::from_int(n),
            den: LPoly::one(),
        }
    }

    pub fn rational(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar::reduce(LPoly::from_int(p), LPoly::from_int(q))
    }

    /// c * v^a * t^b
    pub fn monomial(c: i64, v_exp: i64, t_exp: TExp) -> Self {
        if c == 0 {
            return Scalar::zero();
        }
        Scalar::reduce(
            LPoly::monomial(BigInt::from(c), v_exp, t_exp),
            LPoly::one(),
        )
    }

    pub fn v() -> Self {
        Self::monomial(1, 1, TExp::zero())
    }

    pub fn v_pow(a: i64) -> Self {
        Self::monomial(1, a, TExp::zero())
    }

    pub fn t_pow(b: TExp) -> Self {
        Self::monomial(1, 0, b)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one()
    }

    pub fn numer(&self) -> &LPoly {
        &self.num
    }

    pub fn denom(&self) -> &LPoly {
        &self.den
    }

    /// Rough size measure used by pivot heuristics.
    pub fn complexity(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }

    /// Canonicalize a raw fraction.
    fn reduce(num: LPoly, den: LPoly) -> Scalar {
        assert!(!den.is_zero(), "scalar denominator is zero");
        if num.is_zero() {
            return Scalar::zero();
        }
        // strip the common monomial shift so that all exponents are >= 0 and
        // the minimum over num and den is 0 in each variable
        let mv = num.val_v().unwrap().min(den.val_v().unwrap());
        let mt = num.val_t().unwrap().min(den.val_t().unwrap());
        let one = BigInt::one();
        let mut num = num.mul_monomial(&one, -mv, -mt);
        let mut den = den.mul_monomial(&one, -mv, -mt);

        // fast path: a monomial on either side reduces by integer content
        // alone (the common monomial part is gone after the shift)
        if num.is_monomial() || den.is_monomial() {
            let g = num.content().gcd(&den.content());
            num = num.div_content(&g);
            den = den.div_content(&g);
        } else {
            let lattice = t_lattice(&num, &den);
            let a = to_vw(&num, lattice);
            let b = to_vw(&den, lattice);
            let g = vw_gcd(&a, &b);
            if !(g.len() == 1 && g[0].len() == 1 && g[0][0].is_one()) {
                num = from_vw(&vw_div_exact(&a, &g), lattice);
                den = from_vw(&vw_div_exact(&b, &g), lattice);
            }
        }
        // fixed sign convention: the leading denominator coefficient is positive
        if den.leading_coeff().map(|c| c.is_negative()).unwrap_or(false) {
            num = num.neg();
            den = den.neg();
        }
        Scalar { num, den }
    }

    pub fn from_parts(num: LPoly, den: LPoly) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::reduce(num, den))
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Scalar::reduce(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Scalar::reduce(num, den)
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        Scalar::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Scalar::zero());
        }
        Ok(Scalar::reduce(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn inv(&self) -> Result<Scalar> {
        Scalar::one().div(self)
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        if e == 0 {
            return Ok(Scalar::one());
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// The bar involution: v -> v^{-1}, t fixed.
    pub fn bar(&self) -> Scalar {
        Scalar::reduce(self.num.invert_v(), self.den.invert_v())
    }

    /// The star involution: t^{1/D} -> t^{-1/D}, v fixed.
    pub fn star(&self) -> Scalar {
        Scalar::reduce(self.num.invert_t(), self.den.invert_t())
    }

    /// v-adic valuation: order of vanishing at v = 0 (negative = pole).
    pub fn val_v(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.val_v().unwrap() - self.den.val_v().unwrap())
    }

    /// Evaluate at v = 0. The result involves t alone.
    pub fn eval_v0(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Ok(Scalar::zero());
        }
        let val = self.val_v().unwrap();
        if val < 0 {
            return Err(Error::PoleAtVZero { order: -val });
        }
        if val > 0 {
            return Ok(Scalar::zero());
        }
        // canonical form has min v-exponent 0 across num and den; val == 0
        // means both have a v^0 slice and den(0) != 0
        Ok(Scalar::reduce(self.num.v0_slice(), self.den.v0_slice()))
    }

    /// Coefficients of the v-adic expansion up to the given order, as t-only
    /// scalars. Requires no pole at v = 0.
    pub fn v_series(&self, order: usize) -> Result<Vec<Scalar>> {
        if self.is_zero() {
            return Ok(vec![Scalar::zero(); order + 1]);
        }
        if self.val_v().unwrap() < 0 {
            return Err(Error::PoleAtVZero {
                order: -self.val_v().unwrap(),
            });
        }
        let num_slice = |m: i64| -> Scalar {
            Scalar::reduce(self.num.v_slice(m), LPoly::one())
        };
        let den_slice = |m: i64| -> Scalar {
            Scalar::reduce(self.den.v_slice(m), LPoly::one())
        };
        let d0 = den_slice(0);
        debug_assert!(!d0.is_zero());
        let mut out: Vec<Scalar> = Vec::with_capacity(order + 1);
        for m in 0..=order as i64 {
            let mut acc = num_slice(m);
            for (k, s) in out.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                let dm = den_slice(m - k as i64);
                if !dm.is_zero() {
                    acc = acc.sub(&s.mul(&dm));
                }
            }
            out.push(acc.div(&d0)?);
        }
        Ok(out)
    }

    /// Substitute t = 1 (every fractional power of t becomes 1).
    pub fn eval_t1(&self) -> Result<Scalar> {
        let den = self.den.eval_t1();
        if den.is_zero() {
            return Err(Error::PoleAtTOne);
        }
        Ok(Scalar::reduce(self.num.eval_t1(), den))
    }

    /// True if the scalar does not involve t at all.
    pub fn is_t_free(&self) -> bool {
        self.num.is_t_free() && self.den.is_t_free()
    }

    /// If the scalar is exactly c * t^b with c rational, return (c_num, c_den, b).
    pub fn as_t_monomial(&self) -> Option<(BigInt, BigInt, TExp)> {
        if self.is_zero() {
            return None;
        }
        if self.num.is_monomial() && self.den.is_monomial() {
            let (&(av, at), ac) = self.num.terms().next().unwrap();
            let (&(bv, bt), bc) = self.den.terms().next().unwrap();
            if av == bv {
                return Some((ac.clone(), bc.clone(), at - bt));
            }
        }
        None
    }

    pub fn membership(&self, ring: Ring) -> Membership {
        if self.is_zero() {
            return Membership::In;
        }
        match ring {
            Ring::A => {
                if self.val_v().unwrap() >= 0 {
                    Membership::In
                } else {
                    Membership::Out
                }
            }
            Ring::ABar => {
                let dn = self.num.deg_v().unwrap();
                let dd = self.den.deg_v().unwrap();
                if dn <= dd {
                    Membership::In
                } else {
                    Membership::Out
                }
            }
            Ring::AZ => {
                if self.membership(Ring::A) == Membership::Out {
                    return Membership::Out;
                }
                self.integral_denominator_check(false)
            }
            Ring::KZ => self.integral_denominator_check(true),
        }
    }

    /// Convenience wrapper: `Unknown` counts as not-in.
    pub fn is_in(&self, ring: Ring) -> bool {
        self.membership(ring) == Membership::In
    }

    /// Checks that the canonical denominator is (up to sign and a t-monomial,
    /// and a v-monomial when `allow_v_unit`) a product of factors 1 - v^{2n}.
    fn integral_denominator_check(&self, allow_v_unit: bool) -> Membership {
        let den = &self.den;
        // strip the denominator's own monomial part
        let mv = den.val_v().unwrap();
        let mt = den.val_t().unwrap();
        if mv > 0 && !allow_v_unit {
            return Membership::Out;
        }
        let stripped = den.mul_monomial(&BigInt::one(), -mv, -mt);
        // a genuine mix of t-powers cannot divide a t-free product times a unit
        if !stripped.is_t_free() {
            return Membership::Out;
        }
        // univariate in v now; peel off cyclotomic-type factors
        let mut g: WPoly = {
            let deg = stripped.deg_v().unwrap() as usize;
            let mut c = vec![BigInt::zero(); deg + 1];
            for (&(a, _), k) in stripped.terms() {
                c[a as usize] = k.clone();
            }
            gcd::w_trim(c)
        };
        if gcd::w_is_zero(&g) {
            return Membership::Out;
        }
        let d0 = if g.len() > 1 { g.len() - 1 } else { 0 };
        let cap = (2 * d0 * d0).clamp(4, 4096);
        let mut n = 1usize;
        while g.len() > 1 && n <= cap {
            // factor 1 - v^{2n}
            let mut f = vec![BigInt::zero(); 2 * n + 1];
            f[0] = BigInt::one();
            f[2 * n] = -BigInt::one();
            let f = gcd::w_make_positive(gcd::w_trim(f));
            loop {
                let h = gcd::w_gcd(&g, &f);
                if h.len() <= 1 {
                    break;
                }
                g = gcd::w_div_exact(&g, &h);
            }
            n += 1;
        }
        if g.len() == 1 {
            if g[0].magnitude().is_one() {
                Membership::In
            } else {
                // leftover integer content, e.g. 1/2: definitely outside
                Membership::Out
            }
        } else {
            Membership::Unknown
        }
    }
}

/// lcm of the t-exponent denominators appearing in two polynomials.
fn t_lattice(a: &LPoly, b: &LPoly) -> i64 {
    let mut l: i64 = 1;
    for e in a.t_exponents().into_iter().chain(b.t_exponents()) {
        l = l.lcm(e.denom());
    }
    l
}

/// Convert to a dense Z[w][v] polynomial, scaling t-exponents onto 1/lattice.
/// Assumes all exponents are nonnegative.
fn to_vw(p: &LPoly, lattice: i64) -> VWPoly {
    let dv = p.deg_v().unwrap() as usize;
    let dt = (p.deg_t().unwrap() * lattice).to_integer() as usize;
    let mut out: VWPoly = vec![vec![BigInt::zero(); dt + 1]; dv + 1];
    for (&(a, b), c) in p.terms() {
        let bi = (b * lattice).to_integer() as usize;
        out[a as usize][bi] = c.clone();
    }
    out.iter_mut().for_each(|c| {
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
    });
    out
}

fn from_vw(p: &VWPoly, lattice: i64) -> LPoly {
    let mut out = LPoly::zero();
    for (a, coeffs) in p.iter().enumerate() {
        for (b, c) in coeffs.iter().enumerate() {
            out.add_term(a as i64, Ratio::new(b as i64, lattice), c);
        }
    }
    out
}

impl std::fmt::Display for Scalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == LPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

// q-combinatorics -----------------------------------------------------------

/// [n]_v with v replaced by v^d: sum of v^{d(n-1-2k)} for k = 0..n.
pub fn qint_v(n: i64, d: i64) -> Result<Scalar> {
    if n < 0 {
        return Err(Error::OutOfRange(format!("[n]_v needs n >= 0, got {}", n)));
    }
    let mut p = LPoly::zero();
    for k in 0..n {
        p.add_term(d * (n - 1 - 2 * k), TExp::zero(), &BigInt::one());
    }
    Ok(Scalar::reduce(p, LPoly::one()))
}

/// [n]_{v,t} with (v, t) replaced by (v^d, t^d), computed from the defining
/// quotient ((vt)^n - (vt^{-1})^{-n}) / (vt - (vt^{-1})^{-1}).
pub fn qint_vt(n: i64, d: i64) -> Result<Scalar> {
    if n < 0 {
        return Err(Error::OutOfRange(format!(
            "[n]_{{v,t}} needs n >= 0, got {}",
            n
        )));
    }
    let te = |k: i64| TExp::from_integer(k * d);
    let term = |c: i64, a: i64, b: i64| Scalar::monomial(c, a * d, te(b));
    // (vt)^n - (v^{-1} t)^n
    let num = term(1, n, n).sub(&term(1, -n, n));
    // vt - v^{-1} t
    let den = term(1, 1, 1).sub(&term(1, -1, 1));
    if n == 0 {
        return Ok(Scalar::zero());
    }
    num.div(&den)
}

pub fn qfact_v(n: i64, d: i64) -> Result<Scalar> {
    let mut out = Scalar::one();
    for r in 1..=n {
        out = out.mul(&qint_v(r, d)?);
    }
    Ok(out)
}

pub fn qfact_vt(n: i64, d: i64) -> Result<Scalar> {
    let mut out = Scalar::one();
    for r in 1..=n {
        out = out.mul(&qint_vt(r, d)?);
    }
    Ok(out)
}

pub fn qbinom_v(n: i64, k: i64, d: i64) -> Result<Scalar> {
    if k < 0 || k > n {
        return Err(Error::OutOfRange(format!(
            "binomial [{} choose {}] out of range",
            n, k
        )));
    }
    qfact_v(n, d)?
        .div(&qfact_v(k, d)?)?
        .div(&qfact_v(n - k, d)?)
}

pub fn qbinom_vt(n: i64, k: i64, d: i64) -> Result<Scalar> {
    if k < 0 || k > n {
        return Err(Error::OutOfRange(format!(
            "binomial [{} choose {}] out of range",
            n, k
        )));
    }
    qfact_vt(n, d)?
        .div(&qfact_vt(k, d)?)?
        .div(&qfact_vt(n - k, d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn v() -> Scalar {
        Scalar::v()
    }

    fn t() -> Scalar {
        Scalar::t_pow(TExp::one())
    }

    #[test]
    fn basic_arithmetic() {
        // (v + v^-1) * v = v^2 + 1
        let lhs = v().add(&v().inv().unwrap()).mul(&v());
        let rhs = v().mul(&v()).add(&Scalar::one());
        assert_eq!(lhs, rhs);

        // x / x = 1
        let x = v().add(&t()).add(&Scalar::rational(3, 2));
        assert_eq!(x.div(&x).unwrap(), Scalar::one());

        // (1 - v^2)^{-1} * (1 - v^2) = 1
        let y = Scalar::one().sub(&v().pow(2).unwrap());
        assert_eq!(y.inv().unwrap().mul(&y), Scalar::one());

        assert!(matches!(
            Scalar::one().div(&Scalar::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn canonical_equality() {
        // v^-2 / (v^-2 + 1) == 1 / (1 + v^2)
        let a = Scalar::v_pow(-2)
            .div(&Scalar::v_pow(-2).add(&Scalar::one()))
            .unwrap();
        let b = Scalar::one()
            .div(&Scalar::one().add(&v().pow(2).unwrap()))
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn involutions() {
        // bar(v^2 t) = v^-2 t
        let x = Scalar::monomial(1, 2, TExp::one());
        assert_eq!(x.bar(), Scalar::monomial(1, -2, TExp::one()));
        // star(v^2 t) = v^2 t^-1
        assert_eq!(x.star(), Scalar::monomial(1, 2, -TExp::one()));
        // involutive and commuting on a messy element
        let y = v()
            .add(&t().inv().unwrap())
            .div(&Scalar::one().sub(&v().mul(&t())))
            .unwrap();
        assert_eq!(y.bar().bar(), y);
        assert_eq!(y.star().star(), y);
        assert_eq!(y.bar().star(), y.star().bar());
    }

    #[test]
    fn bar_fixes_qint() {
        // bar([3]_v) = [3]_v
        let q3 = qint_v(3, 1).unwrap();
        assert_eq!(q3.bar(), q3);
        assert_eq!(
            q3,
            Scalar::v_pow(2)
                .add(&Scalar::one())
                .add(&Scalar::v_pow(-2))
        );
    }

    #[test]
    fn eval_v0_cases() {
        let one_over = Scalar::one()
            .div(&Scalar::one().add(&v().pow(2).unwrap()))
            .unwrap();
        assert_eq!(one_over.eval_v0().unwrap(), Scalar::one());

        let x = v().mul(&t().inv().unwrap()).add(&t());
        assert_eq!(x.eval_v0().unwrap(), t());

        assert!(matches!(
            Scalar::v_pow(-1).eval_v0(),
            Err(Error::PoleAtVZero { order: 1 })
        ));
    }

    #[test]
    fn ring_membership() {
        let f = Scalar::one()
            .div(&Scalar::one().add(&v().pow(2).unwrap()))
            .unwrap();
        assert_eq!(f.membership(Ring::A), Membership::In);
        // 1/(1+v^2) = v^{-2}/(v^{-2}+1) has no pole at v = infinity either
        assert_eq!(f.membership(Ring::ABar), Membership::In);
        assert_eq!(Scalar::v_pow(-1).membership(Ring::A), Membership::Out);
        assert_eq!(Scalar::v_pow(1).membership(Ring::ABar), Membership::Out);

        // 1/(1 - v^2) is in A_Z
        let g = Scalar::one()
            .div(&Scalar::one().sub(&v().pow(2).unwrap()))
            .unwrap();
        assert_eq!(g.membership(Ring::AZ), Membership::In);
        // 1/(1 + v^2) = (1 - v^2)/(1 - v^4) is in A_Z via the gcd-peeling
        assert_eq!(f.membership(Ring::AZ), Membership::In);
        // 1/2 is not
        assert_eq!(Scalar::rational(1, 2).membership(Ring::AZ), Membership::Out);
        // v^{-1} is in K_Z but not A_Z
        assert_eq!(Scalar::v_pow(-1).membership(Ring::KZ), Membership::In);
        assert_eq!(Scalar::v_pow(-1).membership(Ring::AZ), Membership::Out);
        // t-monomial units are fine
        let h = t().inv().unwrap().mul(&g);
        assert_eq!(h.membership(Ring::AZ), Membership::In);
        // 1/(1 - t v^2): mixed denominator, outside
        let m = Scalar::one()
            .div(&Scalar::one().sub(&t().mul(&v().pow(2).unwrap())))
            .unwrap();
        assert_eq!(m.membership(Ring::AZ), Membership::Out);
    }

    #[test]
    fn qint_identities() {
        // [1]_{v,t} = 1
        assert_eq!(qint_vt(1, 1).unwrap(), Scalar::one());
        // [2]_{v,t} = t (v + v^-1)
        let expect = t().mul(&v().add(&Scalar::v_pow(-1)));
        assert_eq!(qint_vt(2, 1).unwrap(), expect);
        // [n]_{v,t} = t^{n-1} [n]_v for n <= 6, also in the stretched flavor
        for d in 1..=2i64 {
            for n in 0..=6i64 {
                let lhs = qint_vt(n, d).unwrap();
                let rhs = Scalar::t_pow(TExp::from_integer(d * (n - 1)))
                    .mul(&qint_v(n, d).unwrap());
                assert_eq!(lhs, rhs, "n = {}, d = {}", n, d);
            }
        }
    }

    #[test]
    fn qfact_normalization() {
        // eval_v0(v^{n(n-1)/2} [n]_v!) = 1
        for n in 0..=6i64 {
            let x = Scalar::v_pow(n * (n - 1) / 2).mul(&qfact_v(n, 1).unwrap());
            assert_eq!(x.eval_v0().unwrap(), Scalar::one(), "n = {}", n);
        }
    }

    #[test]
    fn t1_specialization() {
        let x = t().mul(&v()).add(&t().inv().unwrap());
        assert_eq!(x.eval_t1().unwrap(), v().add(&Scalar::one()));
    }

    #[test]
    fn display_format() {
        let x = Scalar::monomial(-1, 2, TExp::new(1, 3));
        assert_eq!(format!("{}", x), "(-1) * v^2 * t^(1/3)");
    }
}
