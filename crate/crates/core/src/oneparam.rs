//! A self-contained one-parameter (t = 1) canonical-basis solver, used as
//! the comparison oracle for the t = 1 specialization of the two-parameter
//! global basis. It runs its own classical recursions end to end — form,
//! quotients, crystal closure, and bar-invariant solve — sharing only the
//! scalar field and generic linear algebra with the main pipeline.

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::halfalg::{word_content, words_of_content, HalfElt, Word};
use crate::linalg::{self, Mat};
use crate::scalar::{qfact_v, Scalar};
use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};

pub struct OneParamHalf {
    datum: Arc<CartanDatum>,
    bases: Mutex<HashMap<Vec<i64>, Arc<Quotient>>>,
    form_memo: Mutex<HashMap<(Word, Word), Scalar>>,
}

pub struct Quotient {
    pub words: Vec<Word>,
    pub reps: Vec<usize>,
    pub reduce: Mat,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reduce_elt(&self, x: &HalfElt) -> Vec<Scalar> {
        let index: HashMap<&Word, usize> =
            self.words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut out = vec![Scalar::zero(); self.dim()];
        for (w, c) in x.terms() {
            let j = *index.get(w).expect("word outside weight space");
            for r in 0..self.dim() {
                if !self.reduce[(r, j)].is_zero() {
                    out[r] = out[r].add(&self.reduce[(r, j)].mul(c));
                }
            }
        }
        out
    }

    pub fn elt_from_coords(&self, coords: &[Scalar]) -> HalfElt {
        let mut out = HalfElt::zero();
        for (r, c) in coords.iter().enumerate() {
            out.add_term(self.words[self.reps[r]].clone(), c);
        }
        out
    }
}

/// A node of the classical crystal, with its generation word and lattice
/// representative.
pub struct ClassicalNode {
    pub id: usize,
    pub content: Vec<i64>,
    pub gen_word: Vec<u8>,
    pub rep: HalfElt,
}

impl OneParamHalf {
    pub fn new(datum: Arc<CartanDatum>) -> Self {
        OneParamHalf {
            datum,
            bases: Mutex::new(HashMap::new()),
            form_memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    /// Classical raising operator: e_i(f_j y) = v^{-i.j} f_j e_i(y) + delta_ij y.
    pub fn raise(&self, i: usize, x: &HalfElt) -> HalfElt {
        let mut out = HalfElt::zero();
        for (w, c) in x.terms() {
            let mut factor = Scalar::one();
            for (p, &letter) in w.iter().enumerate() {
                if letter as usize == i {
                    let mut shorter = w.clone();
                    shorter.remove(p);
                    out.add_term(shorter, &factor.mul(c));
                }
                factor = factor.mul(&Scalar::v_pow(-self.datum.dot(i, letter as usize)));
            }
        }
        out
    }

    fn form_words(&self, w: &Word, u: &Word) -> Scalar {
        if w.len() != u.len() {
            return Scalar::zero();
        }
        if w.is_empty() {
            return Scalar::one();
        }
        if let Some(v) = self.form_memo.lock().unwrap().get(&(w.clone(), u.clone())) {
            return v.clone();
        }
        let i = w[0] as usize;
        let rest: Word = w[1..].to_vec();
        let raised = self.raise(i, &HalfElt::from_word(u.clone()));
        let mut acc = Scalar::zero();
        for (u2, c) in raised.terms() {
            let sub = self.form_words(&rest, u2);
            if !sub.is_zero() {
                acc = acc.add(&c.mul(&sub));
            }
        }
        self.form_memo
            .lock()
            .unwrap()
            .insert((w.clone(), u.clone()), acc.clone());
        acc
    }

    /// The classical bilinear form (symmetric: no t anywhere).
    pub fn form(&self, x: &HalfElt, y: &HalfElt) -> Scalar {
        let mut acc = Scalar::zero();
        for (w, c) in x.terms() {
            for (u, d) in y.terms() {
                if word_content(w, self.rank()) != word_content(u, self.rank()) {
                    continue;
                }
                let f = self.form_words(w, u);
                if !f.is_zero() {
                    acc = acc.add(&c.mul(d).mul(&f));
                }
            }
        }
        acc
    }

    pub fn quotient(&self, content: &[i64]) -> Result<Arc<Quotient>> {
        if let Some(b) = self.bases.lock().unwrap().get(content) {
            return Ok(b.clone());
        }
        let words = words_of_content(content);
        let n = words.len();
        let mut gram = Mat::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                gram[(a, b)] = self.form_words(&words[a], &words[b]);
            }
        }
        let (reps, reduce) = linalg::gram_quotient(&gram)?;
        let q = Arc::new(Quotient {
            words,
            reps,
            reduce,
        });
        let mut lock = self.bases.lock().unwrap();
        Ok(lock
            .entry(content.to_vec())
            .or_insert_with(|| q.clone())
            .clone())
    }

    pub fn reduce(&self, x: &HalfElt) -> Result<HalfElt> {
        if x.is_zero() {
            return Ok(HalfElt::zero());
        }
        let content = x.content(self.rank()).unwrap();
        let q = self.quotient(&content)?;
        Ok(q.elt_from_coords(&q.reduce_elt(x)))
    }

    pub fn dp_mul(&self, i: usize, n: i64, x: &HalfElt) -> Result<HalfElt> {
        let fact = qfact_v(n, self.datum.d_i(i))?;
        let mut out = HalfElt::zero();
        for (w, c) in x.terms() {
            let mut nw: Word = std::iter::repeat(i as u8).take(n as usize).collect();
            nw.extend_from_slice(w);
            out.add_term(nw, &c.div(&fact)?);
        }
        Ok(out)
    }

    fn raise_kernel(&self, i: usize, content: &[i64]) -> Result<Vec<Vec<Scalar>>> {
        let basis = self.quotient(content)?;
        let dim = basis.dim();
        if content[i] == 0 {
            return Ok((0..dim)
                .map(|r| {
                    let mut v = vec![Scalar::zero(); dim];
                    v[r] = Scalar::one();
                    v
                })
                .collect());
        }
        let mut target = content.to_vec();
        target[i] -= 1;
        let tbasis = self.quotient(&target)?;
        let mut mat = Mat::zeros(tbasis.dim(), dim);
        for (c, widx) in basis.reps.iter().enumerate() {
            let img = self.raise(i, &HalfElt::from_word(basis.words[*widx].clone()));
            let coords = tbasis.reduce_elt(&img);
            for r in 0..tbasis.dim() {
                mat[(r, c)] = coords[r].clone();
            }
        }
        Ok(linalg::right_kernel(&mat))
    }

    pub fn istring(&self, i: usize, x: &HalfElt) -> Result<Vec<HalfElt>> {
        if x.is_zero() {
            return Ok(Vec::new());
        }
        let content = x.content(self.rank()).unwrap();
        let basis = self.quotient(&content)?;
        let n_max = content[i];
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        let mut col_info: Vec<(i64, HalfElt)> = Vec::new();
        for n in 0..=n_max {
            let mut sub = content.clone();
            sub[i] -= n;
            let sub_basis = self.quotient(&sub)?;
            for kvec in self.raise_kernel(i, &sub)? {
                let kelt = sub_basis.elt_from_coords(&kvec);
                let shifted = self.dp_mul(i, n, &kelt)?;
                cols.push(basis.reduce_elt(&shifted));
                col_info.push((n, kelt));
            }
        }
        if cols.len() != basis.dim() {
            return Err(Error::Invariant(
                "classical string decomposition is not square".into(),
            ));
        }
        let mut mat = Mat::zeros(basis.dim(), cols.len());
        for (j, col) in cols.iter().enumerate() {
            for r in 0..basis.dim() {
                mat[(r, j)] = col[r].clone();
            }
        }
        let sol = linalg::solve_unique(&mat, &basis.reduce_elt(x))?;
        let mut comps: Vec<HalfElt> = vec![HalfElt::zero(); (n_max + 1) as usize];
        for (j, (n, kelt)) in col_info.iter().enumerate() {
            if !sol[j].is_zero() {
                comps[*n as usize] = comps[*n as usize].add(&kelt.scale(&sol[j]));
            }
        }
        Ok(comps)
    }

    pub fn tilde_f(&self, i: usize, x: &HalfElt) -> Result<HalfElt> {
        let comps = self.istring(i, x)?;
        let mut out = HalfElt::zero();
        for (n, xn) in comps.iter().enumerate() {
            if !xn.is_zero() {
                out = out.add(&self.dp_mul(i, n as i64 + 1, xn)?);
            }
        }
        self.reduce(&out)
    }

    /// Classical B(infinity) closure to the given depth; node classes are
    /// identified through the classical residue form.
    pub fn crystal(&self, depth: usize) -> Result<Vec<ClassicalNode>> {
        let rank = self.rank();
        let mut nodes: Vec<ClassicalNode> = vec![ClassicalNode {
            id: 0,
            content: vec![0; rank],
            gen_word: Vec::new(),
            rep: HalfElt::unit(),
        }];
        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(0);
        while let Some(id) = queue.pop_front() {
            let height: usize = nodes[id].content.iter().map(|&c| c as usize).sum();
            if height >= depth {
                continue;
            }
            for i in 0..rank {
                let img = self.tilde_f(i, &nodes[id].rep)?;
                if img.is_zero() {
                    continue;
                }
                let content = img.content(rank).unwrap();
                // residue-form classification against same-grade nodes
                let norm0 = self
                    .form(&img, &img)
                    .eval_v0()
                    .map_err(|_| Error::LatticeViolation {
                        context: "classical residue norm has a pole".into(),
                    })?;
                if norm0.is_zero() {
                    continue;
                }
                let mut hit = None;
                for n in nodes.iter().filter(|n| n.content == content) {
                    let p0 = self
                        .form(&n.rep, &img)
                        .eval_v0()
                        .map_err(|_| Error::LatticeViolation {
                            context: "classical residue pairing has a pole".into(),
                        })?;
                    if !p0.is_zero() {
                        hit = Some(n.id);
                        break;
                    }
                }
                if hit.is_none() {
                    let new_id = nodes.len();
                    let mut word = vec![i as u8];
                    word.extend_from_slice(&nodes[id].gen_word);
                    nodes.push(ClassicalNode {
                        id: new_id,
                        content,
                        gen_word: word,
                        rep: img,
                    });
                    queue.push_back(new_id);
                }
            }
        }
        Ok(nodes)
    }

    /// The canonical basis at one grade: unique bar-invariant elements of the
    /// divided-power-monomial span congruent to each crystal node mod vL.
    /// Returns (node id, basis element in reduced form).
    pub fn canonical_basis(
        &self,
        nodes: &[ClassicalNode],
        content: &[i64],
        vbound: usize,
    ) -> Result<Vec<(usize, HalfElt)>> {
        let grade_nodes: Vec<&ClassicalNode> =
            nodes.iter().filter(|n| n.content == content).collect();
        let dim = self.quotient(content)?.dim();
        if grade_nodes.len() != dim {
            return Err(Error::Invariant(format!(
                "classical crystal has {} nodes at {:?} but the grade has dimension {}",
                grade_nodes.len(),
                content,
                dim
            )));
        }
        // monomial slice from generation words
        let monomials: Vec<HalfElt> = grade_nodes
            .iter()
            .map(|n| {
                let mut m = HalfElt::unit();
                for (letter, count) in collapse_runs(&n.gen_word).into_iter().rev() {
                    m = self.dp_mul(letter as usize, count, &m)?;
                }
                Ok(m)
            })
            .collect::<Result<_>>()?;
        // pairing functions P_{c, j} = (rep_c, m_j)
        let mut pair_fns = Vec::new();
        for node in &grade_nodes {
            let row: Vec<Scalar> = monomials.iter().map(|m| self.form(&node.rep, m)).collect();
            pair_fns.push(row);
        }
        let mut out = Vec::new();
        for (bpos, node) in grade_nodes.iter().enumerate() {
            let coeffs =
                crate::global::bar_symmetric_solve(&pair_fns, bpos, vbound).map_err(|e| {
                    Error::Invariant(format!("classical solve failed: {}", e))
                })?;
            let mut g = HalfElt::zero();
            for (j, u) in coeffs.iter().enumerate() {
                g = g.add(&monomials[j].scale(u));
            }
            let g = self.reduce(&g)?;
            // verify: bar-invariant and congruent to the node
            if self.reduce(&g.bar())? != g {
                return Err(Error::Invariant(
                    "classical canonical element is not bar-invariant".into(),
                ));
            }
            for (c, peer) in grade_nodes.iter().enumerate() {
                let p0 = self.form(&peer.rep, &g).eval_v0().map_err(|_| {
                    Error::LatticeViolation {
                        context: "classical canonical element pairing has a pole".into(),
                    }
                })?;
                let expect = if c == bpos {
                    Scalar::one()
                } else {
                    Scalar::zero()
                };
                if p0 != expect {
                    return Err(Error::Invariant(
                        "classical canonical element fails its congruence".into(),
                    ));
                }
            }
            out.push((node.id, g));
        }
        Ok(out)
    }
}

/// Collapse a word into (letter, run length) pairs, left to right.
pub fn collapse_runs(word: &[u8]) -> Vec<(u8, i64)> {
    let mut out: Vec<(u8, i64)> = Vec::new();
    for &l in word {
        match out.last_mut() {
            Some((letter, count)) if *letter == l => *count += 1,
            _ => out.push((l, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanDatum;

    fn a2() -> OneParamHalf {
        OneParamHalf::new(CartanDatum::validate(vec![vec![1, -1], vec![0, 1]], None, None).unwrap())
    }

    #[test]
    fn classical_form_is_symmetric() {
        let alg = a2();
        let x = HalfElt::from_word(vec![0, 1]);
        let y = HalfElt::from_word(vec![1, 0]);
        assert_eq!(alg.form(&x, &y), alg.form(&y, &x));
        assert_eq!(alg.form(&x, &y), Scalar::v_pow(1));
    }

    #[test]
    fn classical_crystal_counts() {
        let alg = a2();
        let nodes = alg.crystal(3).unwrap();
        let at = |c: &[i64]| nodes.iter().filter(|n| n.content == c).count();
        assert_eq!(at(&[1, 1]), 2);
        assert_eq!(at(&[2, 1]), 2);
        assert_eq!(at(&[3, 0]), 1);
    }

    #[test]
    fn classical_canonical_a2() {
        let alg = a2();
        let nodes = alg.crystal(3).unwrap();
        // grade (1,1): the canonical basis is {f1 f2, f2 f1}
        let basis = alg.canonical_basis(&nodes, &[1, 1], 16).unwrap();
        let set: Vec<HalfElt> = basis.into_iter().map(|(_, g)| g).collect();
        let f12 = alg.reduce(&HalfElt::from_word(vec![0, 1])).unwrap();
        let f21 = alg.reduce(&HalfElt::from_word(vec![1, 0])).unwrap();
        assert!(set.contains(&f12));
        assert!(set.contains(&f21));
        // grade (2,1): {f1^{(2)} f2, f2 f1^{(2)}}
        let basis = alg.canonical_basis(&nodes, &[2, 1], 16).unwrap();
        let m1 = alg
            .reduce(&alg.dp_mul(0, 2, &HalfElt::generator(1)).unwrap())
            .unwrap();
        let m2 = {
            let inner = alg.dp_mul(0, 2, &HalfElt::unit()).unwrap();
            alg.reduce(&alg.dp_mul(1, 1, &inner).unwrap()).unwrap()
        };
        let set: Vec<HalfElt> = basis.into_iter().map(|(_, g)| g).collect();
        assert!(set.contains(&m1), "missing f1^(2) f2");
        assert!(set.contains(&m2), "missing f2 f1^(2)");
    }
}
