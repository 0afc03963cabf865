//! Polynomial gcd over Z in one and two variables, via primitive
//! pseudo-remainder sequences. Used to keep scalar fractions reduced.
//!
//! The two-variable case treats elements of Z[w][v] as polynomials in v
//! whose coefficients are dense polynomials in w.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense polynomial in one variable over Z; index = exponent.
pub type WPoly = Vec<BigInt>;

/// Dense polynomial in v with WPoly coefficients; index = v-exponent.
pub type VWPoly = Vec<WPoly>;

pub fn w_trim(mut p: WPoly) -> WPoly {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

pub fn w_is_zero(p: &WPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}

pub fn w_deg(p: &WPoly) -> usize {
    debug_assert!(!w_is_zero(p));
    p.len() - 1
}

pub fn w_sub(a: &WPoly, b: &WPoly) -> WPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    w_trim(out)
}

pub fn w_mul(a: &WPoly, b: &WPoly) -> WPoly {
    if w_is_zero(a) || w_is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    w_trim(out)
}

pub fn w_scale(a: &WPoly, c: &BigInt) -> WPoly {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

pub fn w_content(a: &WPoly) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn w_div_int(a: &WPoly, g: &BigInt) -> WPoly {
    if g.is_one() {
        return a.clone();
    }
    a.iter().map(|x| x / g).collect()
}

/// Exact division a / b in Z[w]; panics if not divisible (internal use only,
/// callers guarantee divisibility via Bareiss/gcd identities).
pub fn w_div_exact(a: &WPoly, b: &WPoly) -> WPoly {
    assert!(!w_is_zero(b), "division by zero polynomial");
    let mut rem = a.clone();
    if w_is_zero(&rem) {
        return Vec::new();
    }
    let db = w_deg(b);
    let lb = &b[db];
    let da = w_deg(&rem);
    assert!(da >= db, "exact division degree mismatch");
    let mut q = vec![BigInt::zero(); da - db + 1];
    for k in (0..=(da - db)).rev() {
        let idx = k + db;
        let c = if idx < rem.len() {
            rem[idx].clone()
        } else {
            BigInt::zero()
        };
        if c.is_zero() {
            continue;
        }
        let (qc, r) = c.div_rem(lb);
        assert!(r.is_zero(), "inexact polynomial division");
        q[k] = qc.clone();
        for (j, bc) in b.iter().enumerate() {
            rem[k + j] -= &qc * bc;
        }
    }
    assert!(w_is_zero(&rem), "inexact polynomial division (remainder)");
    w_trim(q)
}

/// Primitive-PRS gcd in Z[w]; result has positive leading coefficient.
pub fn w_gcd(a: &WPoly, b: &WPoly) -> WPoly {
    let a = w_trim(a.clone());
    let b = w_trim(b.clone());
    if w_is_zero(&a) {
        return w_make_positive(b);
    }
    if w_is_zero(&b) {
        return w_make_positive(a);
    }
    let ca = w_content(&a);
    let cb = w_content(&b);
    let cg = ca.gcd(&cb);
    let mut p = w_div_int(&a, &ca);
    let mut q = w_div_int(&b, &cb);
    if w_deg(&p) < w_deg(&q) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        // pseudo-remainder of p by q
        let dq = w_deg(&q);
        let lq = q[dq].clone();
        let mut r = p.clone();
        while !w_is_zero(&r) && w_deg(&r) >= dq {
            let dr = w_deg(&r);
            let lr = r[dr].clone();
            // r := lq * r - lr * w^{dr-dq} * q
            r = w_scale(&r, &lq);
            for (j, bc) in q.iter().enumerate() {
                r[dr - dq + j] -= &lr * bc;
            }
            r = w_trim(r);
        }
        if w_is_zero(&r) {
            let g = w_scale(&q, &cg);
            return w_make_positive(g);
        }
        let cr = w_content(&r);
        p = q;
        q = w_div_int(&r, &cr);
    }
}

pub fn w_make_positive(p: WPoly) -> WPoly {
    if p.last().map(|c| c.is_negative()).unwrap_or(false) {
        p.iter().map(|c| -c).collect()
    } else {
        p
    }
}

pub fn vw_trim(mut p: VWPoly) -> VWPoly {
    while p.last().map(w_is_zero).unwrap_or(false) {
        p.pop();
    }
    p
}

pub fn vw_is_zero(p: &VWPoly) -> bool {
    p.iter().all(w_is_zero)
}

pub fn vw_deg(p: &VWPoly) -> usize {
    debug_assert!(!vw_is_zero(p));
    p.len() - 1
}

/// Content of p in Z[w]: gcd of all v-coefficients.
pub fn vw_content(p: &VWPoly) -> WPoly {
    let mut g: WPoly = Vec::new();
    for c in p {
        if !w_is_zero(c) {
            g = w_gcd(&g, c);
            if !w_is_zero(&g) && w_deg(&g) == 0 && g[0].is_one() {
                break;
            }
        }
    }
    g
}

pub fn vw_div_w(p: &VWPoly, g: &WPoly) -> VWPoly {
    p.iter()
        .map(|c| {
            if w_is_zero(c) {
                Vec::new()
            } else {
                w_div_exact(c, g)
            }
        })
        .collect()
}

pub fn vw_scale_w(p: &VWPoly, g: &WPoly) -> VWPoly {
    p.iter().map(|c| w_mul(c, g)).collect()
}

/// gcd in Z[w][v], including integer/w-content. Leading (v, then w)
/// coefficient is positive.
pub fn vw_gcd(a: &VWPoly, b: &VWPoly) -> VWPoly {
    let a = vw_trim(a.clone());
    let b = vw_trim(b.clone());
    if vw_is_zero(&a) {
        return vw_make_positive(b);
    }
    if vw_is_zero(&b) {
        return vw_make_positive(a);
    }
    let ca = vw_content(&a);
    let cb = vw_content(&b);
    let cg = w_gcd(&ca, &cb);
    let mut p = vw_div_w(&a, &ca);
    let mut q = vw_div_w(&b, &cb);
    if vw_deg(&p) < vw_deg(&q) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let dq = vw_deg(&q);
        let lq = q[dq].clone();
        let mut r = p.clone();
        while !vw_is_zero(&r) && vw_deg(&r) >= dq {
            let dr = vw_deg(&r);
            let lr = r[dr].clone();
            r = vw_scale_w(&r, &lq);
            for (j, bc) in q.iter().enumerate() {
                r[dr - dq + j] = w_sub(&r[dr - dq + j], &w_mul(&lr, bc));
            }
            r = vw_trim(r);
        }
        if vw_is_zero(&r) {
            let g = vw_scale_w(&q, &cg);
            return vw_make_positive(g);
        }
        let cr = vw_content(&r);
        p = q;
        q = vw_div_w(&r, &cr);
    }
}

pub fn vw_make_positive(p: VWPoly) -> VWPoly {
    let neg = p
        .last()
        .and_then(|c| c.last())
        .map(|c| c.is_negative())
        .unwrap_or(false);
    if neg {
        p.iter().map(|c| c.iter().map(|x| -x).collect()).collect()
    } else {
        p
    }
}

/// Exact division in Z[w][v]; panics if not divisible.
pub fn vw_div_exact(a: &VWPoly, b: &VWPoly) -> VWPoly {
    assert!(!vw_is_zero(b), "division by zero polynomial");
    let mut rem = vw_trim(a.clone());
    if vw_is_zero(&rem) {
        return Vec::new();
    }
    let db = vw_deg(b);
    let lb = &b[db];
    let da = vw_deg(&rem);
    assert!(da >= db, "exact division degree mismatch");
    let mut q: VWPoly = vec![Vec::new(); da - db + 1];
    for k in (0..=(da - db)).rev() {
        let idx = k + db;
        let c = if idx < rem.len() {
            rem[idx].clone()
        } else {
            Vec::new()
        };
        if w_is_zero(&c) {
            continue;
        }
        let qc = w_div_exact(&c, lb);
        q[k] = qc.clone();
        for (j, bc) in b.iter().enumerate() {
            rem[k + j] = w_sub(&rem[k + j], &w_mul(&qc, bc));
        }
    }
    assert!(vw_is_zero(&rem), "inexact polynomial division (remainder)");
    vw_trim(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(coeffs: &[i64]) -> WPoly {
        w_trim(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn univariate_gcd() {
        // gcd(x^2 - 1, x^2 - 2x + 1) = x - 1
        let a = w(&[-1, 0, 1]);
        let b = w(&[1, -2, 1]);
        assert_eq!(w_gcd(&a, &b), w(&[-1, 1]));
        // gcd includes integer content
        let a2 = w(&[2, 2]);
        let b2 = w(&[4]);
        assert_eq!(w_gcd(&a2, &b2), w(&[2]));
    }

    #[test]
    fn univariate_exact_division() {
        let a = w(&[-1, 0, 1]);
        let b = w(&[-1, 1]);
        assert_eq!(w_div_exact(&a, &b), w(&[1, 1]));
    }

    #[test]
    fn bivariate_gcd() {
        // (v^2 - w^2) and (v - w)^2 share (v - w)
        let a: VWPoly = vec![w(&[0, 0, -1]), w(&[]), w(&[1])];
        let b: VWPoly = vec![w(&[0, 0, 1]), w(&[0, -2]), w(&[1])];
        let g = vw_gcd(&a, &b);
        assert_eq!(g, vec![w(&[0, -1]), w(&[1])]);
    }
}
