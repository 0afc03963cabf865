//! Integrable highest-weight modules V(lambda) and their tensor products:
//! weight spaces realized as word spans modulo the radical of the
//! contravariant form, exact generator actions, i-string decompositions with
//! Kashiwara operators, the projection from the negative half, and the
//! splitting maps between V(lambda+mu) and V(lambda) (x) V(mu).

use crate::cartan::{CartanDatum, DominantWeight, KGen, Weight};
use crate::error::{Error, Result};
use crate::halfalg::{word_content, words_of_content, HalfElt, Word};
use crate::linalg::{self, Mat};
use crate::oracle;
use crate::scalar::{qfact_v, Scalar};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// A vector in one weight space, in coordinates over that space's basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleVec {
    /// offset from the module's highest weight, in root coordinates (all <= 0)
    pub xi: Vec<i64>,
    pub coords: Vec<Scalar>,
}

impl ModuleVec {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &Scalar) -> ModuleVec {
        ModuleVec {
            xi: self.xi.clone(),
            coords: self.coords.iter().map(|x| x.mul(c)).collect(),
        }
    }

    pub fn add(&self, other: &ModuleVec) -> ModuleVec {
        assert_eq!(self.xi, other.xi, "weight mismatch in ModuleVec::add");
        ModuleVec {
            xi: self.xi.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &ModuleVec) -> ModuleVec {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn height(&self) -> usize {
        self.xi.iter().map(|&x| x.unsigned_abs() as usize).sum()
    }
}

enum SpaceKind {
    /// Quotient of the word span by the radical of the contravariant form.
    Words {
        words: Vec<Word>,
        reps: Vec<usize>,
        reduce: Mat,
    },
    /// Tensor basis: (xi_left, index_left, xi_right, index_right).
    Pairs {
        pairs: Vec<(Vec<i64>, usize, Vec<i64>, usize)>,
    },
}

pub struct Space {
    pub xi: Vec<i64>,
    pub dim: usize,
    kind: SpaceKind,
}

enum Kind {
    Irreducible { lambda: DominantWeight },
    Tensor { left: Arc<Module>, right: Arc<Module> },
}

pub struct Module {
    datum: Arc<CartanDatum>,
    kind: Kind,
    highest: Weight,
    depth: usize,
    complete: bool,
    spaces: BTreeMap<Vec<i64>, Arc<Space>>,
    form_memo: Mutex<HashMap<(Word, Word), Scalar>>,
    gram_memo: Mutex<HashMap<Vec<i64>, Arc<Mat>>>,
    kernel_memo: Mutex<HashMap<(usize, Vec<i64>), Arc<Vec<Vec<Scalar>>>>>,
}

impl Module {
    /// Build V(lambda) out to the given depth, as word spans modulo the
    /// radical of the contravariant form. Dimensions are checked against the
    /// Freudenthal oracle for finite-type data; construction stops early once
    /// a whole height shell vanishes (the module is then complete).
    pub fn highest_weight(
        datum: Arc<CartanDatum>,
        lambda: DominantWeight,
        depth: usize,
    ) -> Result<Arc<Module>> {
        let rank = datum.rank();
        let highest = Weight::from_dominant(&lambda);
        let mut module = Module {
            datum: datum.clone(),
            kind: Kind::Irreducible {
                lambda: lambda.clone(),
            },
            highest,
            depth,
            complete: false,
            spaces: BTreeMap::new(),
            form_memo: Mutex::new(HashMap::new()),
            gram_memo: Mutex::new(HashMap::new()),
            kernel_memo: Mutex::new(HashMap::new()),
        };
        let mult_oracle = if datum.is_finite_type() {
            Some(oracle::freudenthal_multiplicities(&datum, &lambda, depth)?)
        } else {
            None
        };
        // height-0 space
        module.spaces.insert(
            vec![0; rank],
            Arc::new(Space {
                xi: vec![0; rank],
                dim: 1,
                kind: SpaceKind::Words {
                    words: vec![Vec::new()],
                    reps: vec![0],
                    reduce: Mat::identity(1),
                },
            }),
        );
        let mut frontier: Vec<Vec<i64>> = vec![vec![0; rank]];
        for _h in 1..=depth {
            let mut shell: Vec<Vec<i64>> = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for xi in &frontier {
                for i in 0..rank {
                    let mut c = xi.clone();
                    c[i] -= 1;
                    if seen.insert(c.clone()) {
                        shell.push(c);
                    }
                }
            }
            shell.sort();
            let mut any_nonzero = false;
            for xi in shell.iter() {
                let space = module.build_space(xi)?;
                if let Some(ref mults) = mult_oracle {
                    let expect = *mults.get(xi).unwrap_or(&0);
                    if expect != space.dim as u64 {
                        return Err(Error::Invariant(format!(
                            "dim V(lambda)_{{lambda+{:?}}} = {} disagrees with character oracle {}",
                            xi, space.dim, expect
                        )));
                    }
                }
                if space.dim > 0 {
                    any_nonzero = true;
                }
                module.spaces.insert(xi.clone(), space);
            }
            if !any_nonzero {
                module.complete = true;
                break;
            }
            frontier = shell
                .into_iter()
                .filter(|xi| module.spaces.get(xi).map(|s| s.dim > 0).unwrap_or(false))
                .collect();
        }
        if !module.complete {
            // a module whose deepest built shell is empty is complete too
            let deepest_nonzero = module
                .spaces
                .values()
                .filter(|s| s.dim > 0)
                .map(|s| s.xi.iter().map(|&x| x.unsigned_abs() as usize).sum::<usize>())
                .max()
                .unwrap_or(0);
            if deepest_nonzero < depth {
                module.complete = true;
            }
        }
        Ok(Arc::new(module))
    }

    /// Tensor product with actions through the comultiplication.
    pub fn tensor(left: Arc<Module>, right: Arc<Module>) -> Result<Arc<Module>> {
        if !Arc::ptr_eq(&left.datum, &right.datum)
            && left.datum.lambda_matrix() != right.datum.lambda_matrix()
        {
            return Err(Error::DatumMismatch);
        }
        let datum = left.datum.clone();
        let rank = datum.rank();
        let highest = left.highest.add(&right.highest);
        let depth = left.depth + right.depth;
        let complete = left.complete && right.complete;
        let mut spaces: BTreeMap<Vec<i64>, Arc<Space>> = BTreeMap::new();
        for (xl, sl) in left.spaces.iter() {
            if sl.dim == 0 {
                continue;
            }
            for (xr, sr) in right.spaces.iter() {
                if sr.dim == 0 {
                    continue;
                }
                let xi: Vec<i64> = xl.iter().zip(xr).map(|(a, b)| a + b).collect();
                let entry = spaces.entry(xi.clone()).or_insert_with(|| {
                    Arc::new(Space {
                        xi: xi.clone(),
                        dim: 0,
                        kind: SpaceKind::Pairs { pairs: Vec::new() },
                    })
                });
                // rebuild in place: Arc juggling via temporary
                let mut pairs = match &entry.kind {
                    SpaceKind::Pairs { pairs } => pairs.clone(),
                    _ => unreachable!(),
                };
                for il in 0..sl.dim {
                    for ir in 0..sr.dim {
                        pairs.push((xl.clone(), il, xr.clone(), ir));
                    }
                }
                *entry = Arc::new(Space {
                    xi: xi.clone(),
                    dim: pairs.len(),
                    kind: SpaceKind::Pairs { pairs },
                });
            }
        }
        let _ = rank;
        Ok(Arc::new(Module {
            datum,
            kind: Kind::Tensor { left, right },
            highest,
            depth,
            complete,
            spaces,
            form_memo: Mutex::new(HashMap::new()),
            gram_memo: Mutex::new(HashMap::new()),
            kernel_memo: Mutex::new(HashMap::new()),
        }))
    }

    pub fn datum(&self) -> &Arc<CartanDatum> {
        &self.datum
    }

    pub fn highest(&self) -> &Weight {
        &self.highest
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// The highest weight when this is an irreducible module.
    pub fn lambda(&self) -> Option<&DominantWeight> {
        match &self.kind {
            Kind::Irreducible { lambda } => Some(lambda),
            Kind::Tensor { .. } => None,
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    /// Total dimension over all built weight spaces.
    pub fn total_dim(&self) -> usize {
        self.spaces.values().map(|s| s.dim).sum()
    }

    pub fn space(&self, xi: &[i64]) -> Option<Arc<Space>> {
        self.spaces.get(xi).cloned()
    }

    /// Pair layout of a tensor weight space: (xi_left, i_left, xi_right, i_right)
    /// per basis index. None for word-quotient spaces.
    pub fn pair_layout(&self, xi: &[i64]) -> Option<Vec<(Vec<i64>, usize, Vec<i64>, usize)>> {
        let space = self.space(xi)?;
        match &space.kind {
            SpaceKind::Pairs { pairs } => Some(pairs.clone()),
            _ => None,
        }
    }

    pub fn weights(&self) -> impl Iterator<Item = (&Vec<i64>, usize)> {
        self.spaces.iter().map(|(xi, s)| (xi, s.dim))
    }

    pub fn weight_of(&self, xi: &[i64]) -> Weight {
        Weight {
            lam: self.highest.lam.clone(),
            xi: self
                .highest
                .xi
                .iter()
                .zip(xi)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// The highest-weight vector.
    pub fn highest_vec(&self) -> ModuleVec {
        ModuleVec {
            xi: vec![0; self.rank()],
            coords: vec![Scalar::one()],
        }
    }

    pub fn zero_vec(&self, xi: &[i64]) -> ModuleVec {
        let dim = self.spaces.get(xi).map(|s| s.dim).unwrap_or(0);
        ModuleVec {
            xi: xi.to_vec(),
            coords: vec![Scalar::zero(); dim],
        }
    }

    fn build_space(&self, xi: &[i64]) -> Result<Arc<Space>> {
        let rank = self.rank();
        let content: Vec<i64> = xi.iter().map(|&x| -x).collect();
        debug_assert!(content.iter().all(|&c| c >= 0));
        let words = words_of_content(&content);
        let n = words.len();
        let mut gram = Mat::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                gram[(a, b)] = self.form_words(&words[a], &words[b])?;
            }
        }
        let (reps, reduce) = linalg::gram_quotient(&gram)?;
        let _ = rank;
        Ok(Arc::new(Space {
            xi: xi.to_vec(),
            dim: reps.len(),
            kind: SpaceKind::Words {
                words,
                reps,
                reduce,
            },
        }))
    }

    /// e_i on the free word vector w . y_lambda: e_i commutes past other
    /// letters by (R3) and each crossing of f_i inserts the scalar
    /// (k_i - k_i')/(v_i - v_i^{-1}) evaluated on the tail weight.
    fn act_e_free(&self, i: usize, w: &Word) -> Vec<(Word, Scalar)> {
        let rank = self.rank();
        let vi = Scalar::v_pow(self.datum.d_i(i));
        let vi_diff = vi.sub(&vi.inv().unwrap());
        let mut out = Vec::new();
        for p in 0..w.len() {
            if w[p] as usize != i {
                continue;
            }
            let tail = &w[p + 1..];
            let tail_xi: Vec<i64> = word_content(&tail.to_vec(), rank)
                .iter()
                .map(|&c| -c)
                .collect();
            let mu = self.weight_of(&tail_xi);
            let k = self.datum.k_scalar(i, &mu, KGen::K);
            let kp = self.datum.k_scalar(i, &mu, KGen::KPrime);
            let h = k.sub(&kp).div(&vi_diff).unwrap();
            if h.is_zero() {
                continue;
            }
            let mut shorter: Word = w[..p].to_vec();
            shorter.extend_from_slice(tail);
            out.push((shorter, h));
        }
        out
    }

    /// Contravariant form on word vectors (w y, u y), via the first-slot
    /// recursion (f_i x, y) = (x, v_i^{-1} k_i'^{-1} e_i y).
    fn form_words(&self, w: &Word, u: &Word) -> Result<Scalar> {
        match &self.kind {
            Kind::Irreducible { .. } => {}
            Kind::Tensor { .. } => {
                return Err(Error::Invariant(
                    "form_words is only defined on irreducible modules".into(),
                ))
            }
        }
        let rank = self.rank();
        if word_content(w, rank) != word_content(u, rank) {
            return Ok(Scalar::zero());
        }
        if w.is_empty() {
            return Ok(Scalar::one());
        }
        if let Some(v) = self.form_memo.lock().unwrap().get(&(w.clone(), u.clone())) {
            return Ok(v.clone());
        }
        let i = w[0] as usize;
        let rest: Word = w[1..].to_vec();
        // weight of e_i(u y): lambda + xi(u) + alpha_i
        let mut exi: Vec<i64> = word_content(u, rank).iter().map(|&c| -c).collect();
        exi[i] += 1;
        let mu = self.weight_of(&exi);
        let kp_inv = self.datum.k_scalar(i, &mu, KGen::KPrime).inv()?;
        let vi_inv = Scalar::v_pow(-self.datum.d_i(i));
        let pre = kp_inv.mul(&vi_inv);
        let mut acc = Scalar::zero();
        for (u2, c) in self.act_e_free(i, u) {
            let sub = self.form_words(&rest, &u2)?;
            if !sub.is_zero() {
                acc = acc.add(&pre.mul(&c).mul(&sub));
            }
        }
        self.form_memo
            .lock()
            .unwrap()
            .insert((w.clone(), u.clone()), acc.clone());
        Ok(acc)
    }

    /// Gram matrix of the contravariant form on the basis of one weight space.
    pub fn space_gram(&self, xi: &[i64]) -> Result<Arc<Mat>> {
        if let Some(g) = self.gram_memo.lock().unwrap().get(xi) {
            return Ok(g.clone());
        }
        let space = self
            .space(xi)
            .ok_or_else(|| Error::Invariant(format!("space {:?} not built", xi)))?;
        let g = match &space.kind {
            SpaceKind::Words { words, reps, .. } => {
                let mut m = Mat::zeros(reps.len(), reps.len());
                for (a, &ra) in reps.iter().enumerate() {
                    for (b, &rb) in reps.iter().enumerate() {
                        m[(a, b)] = self.form_words(&words[ra], &words[rb])?;
                    }
                }
                m
            }
            SpaceKind::Pairs { pairs } => {
                let (left, right) = match &self.kind {
                    Kind::Tensor { left, right } => (left, right),
                    _ => unreachable!(),
                };
                let n = pairs.len();
                let mut m = Mat::zeros(n, n);
                for a in 0..n {
                    for b in 0..n {
                        let (ref xl_a, il_a, ref xr_a, ir_a) = pairs[a];
                        let (ref xl_b, il_b, ref xr_b, ir_b) = pairs[b];
                        if xl_a != xl_b || xr_a != xr_b {
                            continue;
                        }
                        let gl = left.space_gram(xl_a)?;
                        let gr = right.space_gram(xr_a)?;
                        m[(a, b)] = gl[(il_a, il_b)].mul(&gr[(ir_a, ir_b)]);
                    }
                }
                m
            }
        };
        let arc = Arc::new(g);
        let mut lock = self.gram_memo.lock().unwrap();
        Ok(lock.entry(xi.to_vec()).or_insert_with(|| arc.clone()).clone())
    }

    /// The contravariant form, star-semilinear in the first slot.
    pub fn form(&self, x: &ModuleVec, y: &ModuleVec) -> Result<Scalar> {
        if x.xi != y.xi {
            return Ok(Scalar::zero());
        }
        if x.is_zero() || y.is_zero() {
            return Ok(Scalar::zero());
        }
        let gram = self.space_gram(&x.xi)?;
        let mut acc = Scalar::zero();
        for (a, ca) in x.coords.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let cas = ca.star();
            for (b, cb) in y.coords.iter().enumerate() {
                if cb.is_zero() || gram[(a, b)].is_zero() {
                    continue;
                }
                acc = acc.add(&cas.mul(cb).mul(&gram[(a, b)]));
            }
        }
        Ok(acc)
    }

    /// Reduce a free word combination (acting on the highest-weight vector)
    /// into basis coordinates. Only valid on irreducible modules.
    pub fn reduce_words(&self, terms: &[(Word, Scalar)]) -> Result<ModuleVec> {
        let rank = self.rank();
        if terms.is_empty() {
            return Ok(self.zero_vec(&vec![0; rank]));
        }
        let xi: Vec<i64> = word_content(&terms[0].0, rank)
            .iter()
            .map(|&c| -c)
            .collect();
        let space = match self.space(&xi) {
            Some(s) => s,
            None => {
                if self.complete {
                    return Ok(self.zero_vec(&xi));
                }
                return Err(Error::DepthExceeded {
                    requested: xi.iter().map(|&x| x.unsigned_abs() as usize).sum(),
                    cap: self.depth,
                });
            }
        };
        let (words, reduce) = match &space.kind {
            SpaceKind::Words { words, reduce, .. } => (words, reduce),
            _ => {
                return Err(Error::Invariant(
                    "reduce_words on a tensor module".into(),
                ))
            }
        };
        let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut coords = vec![Scalar::zero(); space.dim];
        for (w, c) in terms {
            if c.is_zero() {
                continue;
            }
            let j = *index
                .get(w)
                .ok_or_else(|| Error::Invariant("word outside weight space".into()))?;
            for r in 0..space.dim {
                if !reduce[(r, j)].is_zero() {
                    coords[r] = coords[r].add(&reduce[(r, j)].mul(c));
                }
            }
        }
        Ok(ModuleVec { xi, coords })
    }

    /// Representative free-word expansion of a basis coordinate vector
    /// (irreducible modules only).
    pub fn rep_terms(&self, x: &ModuleVec) -> Result<Vec<(Word, Scalar)>> {
        let space = self
            .space(&x.xi)
            .ok_or_else(|| Error::Invariant(format!("space {:?} not built", x.xi)))?;
        match &space.kind {
            SpaceKind::Words { words, reps, .. } => Ok(reps
                .iter()
                .zip(&x.coords)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&r, c)| (words[r].clone(), c.clone()))
                .collect()),
            _ => Err(Error::Invariant("rep_terms on a tensor module".into())),
        }
    }

    pub fn act_f(&self, i: usize, x: &ModuleVec) -> Result<ModuleVec> {
        let mut target = x.xi.clone();
        target[i] -= 1;
        match &self.kind {
            Kind::Irreducible { .. } => {
                if self.space(&target).is_none() {
                    if self.complete {
                        return Ok(self.zero_vec(&target));
                    }
                    return Err(Error::DepthExceeded {
                        requested: target.iter().map(|&v| v.unsigned_abs() as usize).sum(),
                        cap: self.depth,
                    });
                }
                let terms = self.rep_terms(x)?;
                let shifted: Vec<(Word, Scalar)> = terms
                    .into_iter()
                    .map(|(mut w, c)| {
                        w.insert(0, i as u8);
                        (w, c)
                    })
                    .collect();
                self.reduce_words(&shifted)
            }
            Kind::Tensor { left, right } => {
                let space = self
                    .space(&x.xi)
                    .ok_or_else(|| Error::Invariant(format!("space {:?} not built", x.xi)))?;
                let pairs = match &space.kind {
                    SpaceKind::Pairs { pairs } => pairs,
                    _ => unreachable!(),
                };
                let mut out = self.zero_vec(&target);
                if self.space(&target).is_none() {
                    if self.complete {
                        return Ok(out);
                    }
                    return Err(Error::DepthExceeded {
                        requested: target.iter().map(|&v| v.unsigned_abs() as usize).sum(),
                        cap: self.depth,
                    });
                }
                for (j, c) in x.coords.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (ref xl, il, ref xr, ir) = pairs[j];
                    // f_i (x) 1
                    let lvec = ModuleVec {
                        xi: xl.clone(),
                        coords: basis_vec(left.space(xl).unwrap().dim, il),
                    };
                    let fl = left.act_f(i, &lvec)?;
                    for (al, cl) in fl.coords.iter().enumerate() {
                        if cl.is_zero() {
                            continue;
                        }
                        let idx = self.pair_index(&target, &fl.xi, al, xr, ir)?;
                        out.coords[idx] = out.coords[idx].add(&c.mul(cl));
                    }
                    // k_i (x) f_i
                    let kappa = self
                        .datum
                        .k_scalar(i, &left.weight_of(xl), KGen::K)
                        .mul(c);
                    let rvec = ModuleVec {
                        xi: xr.clone(),
                        coords: basis_vec(right.space(xr).unwrap().dim, ir),
                    };
                    let fr = right.act_f(i, &rvec)?;
                    for (ar, cr) in fr.coords.iter().enumerate() {
                        if cr.is_zero() {
                            continue;
                        }
                        let idx = self.pair_index(&target, xl, il, &fr.xi, ar)?;
                        out.coords[idx] = out.coords[idx].add(&kappa.mul(cr));
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn act_e(&self, i: usize, x: &ModuleVec) -> Result<ModuleVec> {
        let mut target = x.xi.clone();
        target[i] += 1;
        if target[i] > 0 {
            // above the highest weight: zero
            return Ok(ModuleVec {
                xi: target,
                coords: Vec::new(),
            });
        }
        match &self.kind {
            Kind::Irreducible { .. } => {
                let terms = self.rep_terms(x)?;
                let mut raised: Vec<(Word, Scalar)> = Vec::new();
                for (w, c) in terms {
                    for (w2, h) in self.act_e_free(i, &w) {
                        raised.push((w2, h.mul(&c)));
                    }
                }
                if raised.is_empty() {
                    return Ok(self.zero_vec(&target));
                }
                self.reduce_words(&raised)
            }
            Kind::Tensor { left, right } => {
                let space = self
                    .space(&x.xi)
                    .ok_or_else(|| Error::Invariant(format!("space {:?} not built", x.xi)))?;
                let pairs = match &space.kind {
                    SpaceKind::Pairs { pairs } => pairs,
                    _ => unreachable!(),
                };
                let mut out = self.zero_vec(&target);
                if self.space(&target).is_none() {
                    return Ok(out);
                }
                for (j, c) in x.coords.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (ref xl, il, ref xr, ir) = pairs[j];
                    // e_i (x) k_i'
                    let kappa = self
                        .datum
                        .k_scalar(i, &right.weight_of(xr), KGen::KPrime)
                        .mul(c);
                    let lvec = ModuleVec {
                        xi: xl.clone(),
                        coords: basis_vec(left.space(xl).unwrap().dim, il),
                    };
                    let el = left.act_e(i, &lvec)?;
                    for (al, cl) in el.coords.iter().enumerate() {
                        if cl.is_zero() {
                            continue;
                        }
                        let idx = self.pair_index(&target, &el.xi, al, xr, ir)?;
                        out.coords[idx] = out.coords[idx].add(&kappa.mul(cl));
                    }
                    // 1 (x) e_i
                    let rvec = ModuleVec {
                        xi: xr.clone(),
                        coords: basis_vec(right.space(xr).unwrap().dim, ir),
                    };
                    let er = right.act_e(i, &rvec)?;
                    for (ar, cr) in er.coords.iter().enumerate() {
                        if cr.is_zero() {
                            continue;
                        }
                        let idx = self.pair_index(&target, xl, il, &er.xi, ar)?;
                        out.coords[idx] = out.coords[idx].add(&c.mul(cr));
                    }
                }
                Ok(out)
            }
        }
    }

    fn pair_index(
        &self,
        xi: &[i64],
        xl: &[i64],
        il: usize,
        xr: &[i64],
        ir: usize,
    ) -> Result<usize> {
        let space = self
            .space(xi)
            .ok_or_else(|| Error::Invariant(format!("space {:?} not built", xi)))?;
        match &space.kind {
            SpaceKind::Pairs { pairs } => pairs
                .iter()
                .position(|(a, b, c, d)| a == xl && *b == il && c == xr && *d == ir)
                .ok_or_else(|| Error::Invariant("tensor pair not found".into())),
            _ => Err(Error::Invariant("pair_index on a word module".into())),
        }
    }

    pub fn act_k(&self, i: usize, which: KGen, x: &ModuleVec) -> ModuleVec {
        let mu = self.weight_of(&x.xi);
        x.scale(&self.datum.k_scalar(i, &mu, which))
    }

    /// Divided power f_i^{(n)} = f_i^n / [n]_{v_i}!.
    pub fn act_f_dp(&self, i: usize, n: i64, x: &ModuleVec) -> Result<ModuleVec> {
        let mut cur = x.clone();
        for _ in 0..n {
            cur = self.act_f(i, &cur)?;
        }
        let fact = qfact_v(n, self.datum.d_i(i))?;
        Ok(cur.scale(&fact.inv()?))
    }

    /// Divided power e_i^{(n)} = e_i^n / [n]_{v_i}!.
    pub fn act_e_dp(&self, i: usize, n: i64, x: &ModuleVec) -> Result<ModuleVec> {
        let mut cur = x.clone();
        for _ in 0..n {
            cur = self.act_e(i, &cur)?;
        }
        let fact = qfact_v(n, self.datum.d_i(i))?;
        Ok(cur.scale(&fact.inv()?))
    }

    /// Kernel of e_i on the weight space xi, as coordinate vectors.
    pub fn e_kernel(&self, i: usize, xi: &[i64]) -> Result<Arc<Vec<Vec<Scalar>>>> {
        let key = (i, xi.to_vec());
        if let Some(k) = self.kernel_memo.lock().unwrap().get(&key) {
            return Ok(k.clone());
        }
        let space = self
            .space(xi)
            .ok_or_else(|| Error::Invariant(format!("space {:?} not built", xi)))?;
        let dim = space.dim;
        let result: Vec<Vec<Scalar>> = if dim == 0 {
            Vec::new()
        } else {
            let mut target = xi.to_vec();
            target[i] += 1;
            let tdim = if target[i] > 0 {
                0
            } else {
                self.space(&target).map(|s| s.dim).unwrap_or(0)
            };
            if tdim == 0 {
                (0..dim)
                    .map(|r| basis_vec(dim, r))
                    .collect()
            } else {
                let mut mat = Mat::zeros(tdim, dim);
                for c in 0..dim {
                    let img = self.act_e(
                        i,
                        &ModuleVec {
                            xi: xi.to_vec(),
                            coords: basis_vec(dim, c),
                        },
                    )?;
                    for r in 0..tdim {
                        mat[(r, c)] = img.coords[r].clone();
                    }
                }
                linalg::right_kernel(&mat)
            }
        };
        let arc = Arc::new(result);
        let mut lock = self.kernel_memo.lock().unwrap();
        Ok(lock.entry(key).or_insert_with(|| arc.clone()).clone())
    }

    /// The i-string decomposition x = sum_n f_i^{(n)} y_n with
    /// e_i(y_n) = 0, indexed by n.
    pub fn istring(&self, i: usize, x: &ModuleVec) -> Result<Vec<ModuleVec>> {
        let space = self
            .space(&x.xi)
            .ok_or_else(|| Error::Invariant(format!("space {:?} not built", x.xi)))?;
        if space.dim == 0 {
            return Ok(Vec::new());
        }
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        let mut col_info: Vec<(i64, Vec<Scalar>, Vec<i64>)> = Vec::new();
        let mut n = 0i64;
        loop {
            let mut up = x.xi.clone();
            up[i] += n;
            if up[i] > 0 {
                break;
            }
            let updim = self.space(&up).map(|s| s.dim).unwrap_or(0);
            if updim == 0 {
                if n > 0 {
                    break;
                }
                n += 1;
                continue;
            }
            // the i-string through Ker e_i at weight nu has length <h_i, nu> + 1,
            // so only n <= <h_i, nu> contributes
            let nu = self.weight_of(&up);
            if self.datum.h_pair(i, &nu) >= n {
                let kb = self.e_kernel(i, &up)?;
                for kvec in kb.iter() {
                    let kv = ModuleVec {
                        xi: up.clone(),
                        coords: kvec.clone(),
                    };
                    let shifted = self.act_f_dp(i, n, &kv)?;
                    cols.push(shifted.coords);
                    col_info.push((n, kvec.clone(), up.clone()));
                }
            }
            n += 1;
        }
        if cols.len() != space.dim {
            return Err(Error::Invariant(format!(
                "string decomposition not square at {:?}: {} columns vs dim {}",
                x.xi,
                cols.len(),
                space.dim
            )));
        }
        let mut mat = Mat::zeros(space.dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for r in 0..space.dim {
                mat[(r, j)] = col[r].clone();
            }
        }
        let sol = linalg::solve_unique(&mat, &x.coords)?;
        let n_max = col_info.iter().map(|&(n, _, _)| n).max().unwrap_or(0);
        let mut comps: Vec<ModuleVec> = (0..=n_max)
            .map(|k| {
                let mut up = x.xi.clone();
                up[i] += k;
                self.zero_vec(&up)
            })
            .collect();
        for (j, (n, kvec, up)) in col_info.iter().enumerate() {
            if sol[j].is_zero() {
                continue;
            }
            let kv = ModuleVec {
                xi: up.clone(),
                coords: kvec.iter().map(|c| c.mul(&sol[j])).collect(),
            };
            comps[*n as usize] = comps[*n as usize].add(&kv);
        }
        Ok(comps)
    }

    pub fn tilde_f(&self, i: usize, x: &ModuleVec) -> Result<ModuleVec> {
        let mut target = x.xi.clone();
        target[i] -= 1;
        if x.is_zero() {
            return Ok(self.zero_vec(&target));
        }
        let comps = self.istring(i, x)?;
        let mut out = self.zero_vec(&target);
        for (n, yn) in comps.iter().enumerate() {
            if yn.is_zero() {
                continue;
            }
            let shifted = self.act_f_dp(i, n as i64 + 1, yn)?;
            if !shifted.is_zero() {
                out = out.add(&shifted);
            }
        }
        Ok(out)
    }

    pub fn tilde_e(&self, i: usize, x: &ModuleVec) -> Result<ModuleVec> {
        let mut target = x.xi.clone();
        target[i] += 1;
        if x.is_zero() {
            return Ok(ModuleVec {
                xi: target,
                coords: Vec::new(),
            });
        }
        let comps = self.istring(i, x)?;
        let mut out = self.zero_vec(&target);
        for (n, yn) in comps.iter().enumerate() {
            if n == 0 || yn.is_zero() {
                continue;
            }
            let shifted = self.act_f_dp(i, n as i64 - 1, yn)?;
            if !shifted.is_zero() {
                out = out.add(&shifted);
            }
        }
        Ok(out)
    }

    /// pi_lambda: the image of a half-algebra element under P -> P y_lambda.
    pub fn project_half(&self, p: &HalfElt) -> Result<ModuleVec> {
        let terms: Vec<(Word, Scalar)> =
            p.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        self.reduce_words(&terms)
    }
}

fn basis_vec(dim: usize, idx: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    v[idx] = Scalar::one();
    v
}

/// The pair of splitting maps between V(lambda+mu) and V(lambda) (x) V(mu).
pub struct PhiPsi {
    pub big: Arc<Module>,
    pub tensor: Arc<Module>,
    phi: BTreeMap<Vec<i64>, Mat>,
    psi: BTreeMap<Vec<i64>, Mat>,
}

impl PhiPsi {
    /// Build Phi (P y_{lambda+mu} -> P (y_lambda (x) y_mu)) and Psi (its
    /// form-adjoint with Psi . Phi = id) on all common weight spaces.
    pub fn new(big: Arc<Module>, tensor: Arc<Module>) -> Result<PhiPsi> {
        let mut phi = BTreeMap::new();
        let mut psi = BTreeMap::new();
        let weights: Vec<Vec<i64>> = big
            .weights()
            .filter(|(_, d)| *d > 0)
            .map(|(xi, _)| xi.clone())
            .collect();
        for xi in weights {
            let bs = big.space(&xi).unwrap();
            let tdim = tensor.space(&xi).map(|s| s.dim).unwrap_or(0);
            if tdim == 0 {
                return Err(Error::Invariant(
                    "tensor module too shallow for Phi".into(),
                ));
            }
            // Phi columns: act each representative word on y_lambda (x) y_mu
            let mut phimat = Mat::zeros(tdim, bs.dim);
            for c in 0..bs.dim {
                let terms = big.rep_terms(&ModuleVec {
                    xi: xi.clone(),
                    coords: basis_vec(bs.dim, c),
                })?;
                let mut acc = tensor.zero_vec(&xi);
                for (w, coeff) in terms {
                    let mut cur = tensor.highest_vec();
                    for &l in w.iter().rev() {
                        cur = tensor.act_f(l as usize, &cur)?;
                    }
                    acc = acc.add(&cur.scale(&coeff));
                }
                for r in 0..tdim {
                    phimat[(r, c)] = acc.coords[r].clone();
                }
            }
            // Psi via the adjunction (Psi(x), y)_big = (x, Phi(y))_tensor:
            // star(Psi-matrix)^T . G_big = G_tensor . Phi-matrix, solved
            // column by column.
            let gb = big.space_gram(&xi)?;
            let gt = tensor.space_gram(&xi)?;
            let rhs_all = gt.mul_mat(&phimat); // tdim x bdim... rows tdim? gt: tdim x tdim, phimat tdim x bdim -> tdim x bdim
            let gbt = gb.transpose();
            let mut psimat = Mat::zeros(bs.dim, tdim);
            for j in 0..tdim {
                // row j of rhs_all^T: (e_j, Phi(b_l)) = (G_t . Phi)_{j, l}
                let r: Vec<Scalar> = (0..bs.dim).map(|l| rhs_all[(j, l)].clone()).collect();
                let stard = linalg::solve_unique(&gbt, &r)?;
                for k in 0..bs.dim {
                    psimat[(k, j)] = stard[k].star();
                }
            }
            phi.insert(xi.clone(), phimat);
            psi.insert(xi.clone(), psimat);
        }
        Ok(PhiPsi {
            big,
            tensor,
            phi,
            psi,
        })
    }

    pub fn apply_phi(&self, x: &ModuleVec) -> Result<ModuleVec> {
        let m = self
            .phi
            .get(&x.xi)
            .ok_or_else(|| Error::Invariant(format!("Phi not built at {:?}", x.xi)))?;
        Ok(ModuleVec {
            xi: x.xi.clone(),
            coords: m.mul_vec(&x.coords),
        })
    }

    pub fn apply_psi(&self, x: &ModuleVec) -> Result<ModuleVec> {
        let m = self
            .psi
            .get(&x.xi)
            .ok_or_else(|| Error::Invariant(format!("Psi not built at {:?}", x.xi)))?;
        Ok(ModuleVec {
            xi: x.xi.clone(),
            coords: m.mul_vec(&x.coords),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanDatum;
    use crate::scalar::TExp;

    fn sl2() -> Arc<CartanDatum> {
        CartanDatum::validate(vec![vec![1]], None, None).unwrap()
    }

    fn a2() -> Arc<CartanDatum> {
        CartanDatum::validate(vec![vec![1, -1], vec![0, 1]], None, None).unwrap()
    }

    #[test]
    fn sl2_string_module() {
        for n in 1..=4i64 {
            let m = Module::highest_weight(sl2(), DominantWeight::new(vec![n]).unwrap(), 8)
                .unwrap();
            assert!(m.is_complete());
            assert_eq!(m.total_dim() as i64, n + 1);
            for k in 0..=n {
                assert_eq!(m.space(&[-k]).unwrap().dim, 1);
            }
            assert!(m.space(&[-(n + 1)]).map(|s| s.dim).unwrap_or(0) == 0);
        }
    }

    #[test]
    fn a2_fundamental_module() {
        let m = Module::highest_weight(a2(), DominantWeight::new(vec![1, 0]).unwrap(), 4).unwrap();
        assert!(m.is_complete());
        assert_eq!(m.total_dim(), 3);
        assert_eq!(m.space(&[0, 0]).unwrap().dim, 1);
        assert_eq!(m.space(&[-1, 0]).unwrap().dim, 1);
        assert_eq!(m.space(&[-1, -1]).unwrap().dim, 1);
    }

    #[test]
    fn highest_weight_norm_one() {
        let m = Module::highest_weight(a2(), DominantWeight::new(vec![1, 1]).unwrap(), 5).unwrap();
        let y = m.highest_vec();
        assert_eq!(m.form(&y, &y).unwrap(), Scalar::one());
        assert_eq!(m.total_dim(), 8);
    }

    #[test]
    fn e_kills_highest() {
        let m = Module::highest_weight(a2(), DominantWeight::new(vec![1, 1]).unwrap(), 5).unwrap();
        let y = m.highest_vec();
        for i in 0..2 {
            assert!(m.act_e(i, &y).unwrap().is_zero());
        }
    }

    #[test]
    fn sl2_ef_commutator_on_highest() {
        // e f y = y for lambda = Lambda_1 (the t-exponent vanishes)
        let m = Module::highest_weight(sl2(), DominantWeight::new(vec![1]).unwrap(), 4).unwrap();
        let y = m.highest_vec();
        let fy = m.act_f(0, &y).unwrap();
        let efy = m.act_e(0, &fy).unwrap();
        assert_eq!(efy, y);
    }

    #[test]
    fn contravariant_contract() {
        // (f_i x, y) = (x, v_i^{-1} k_i'^{-1} e_i y) on assorted vectors
        let m = Module::highest_weight(a2(), DominantWeight::new(vec![1, 1]).unwrap(), 5).unwrap();
        let y = m.highest_vec();
        let mut vecs = vec![y.clone()];
        for i in 0..2 {
            vecs.push(m.act_f(i, &y).unwrap());
        }
        vecs.push(m.act_f(1, &vecs[1]).unwrap());
        vecs.push(m.act_f(0, &vecs[2]).unwrap());
        for x in &vecs {
            for z in &vecs {
                for i in 0..2 {
                    let lhs = m.form(&m.act_f(i, x).unwrap(), z).unwrap();
                    let mut up = z.xi.clone();
                    up[i] += 1;
                    let ez = m.act_e(i, z).unwrap();
                    let rhs = if ez.is_zero() {
                        Scalar::zero()
                    } else {
                        let mu = m.weight_of(&up);
                        let pre = Scalar::v_pow(-m.datum().d_i(i))
                            .mul(&m.datum().k_scalar(i, &mu, KGen::KPrime).inv().unwrap());
                        m.form(x, &ez.scale(&pre)).unwrap()
                    };
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn sl2_divided_power_vanishing() {
        // pi_lambda(f^{(2)}) = 0 in V(Lambda)
        let m = Module::highest_weight(sl2(), DominantWeight::new(vec![1]).unwrap(), 4).unwrap();
        let mut p = HalfElt::unit();
        let alg = crate::halfalg::HalfAlgebra::new(sl2());
        p = alg.dp_mul(0, 2, &p).unwrap();
        let img = m.project_half(&p).unwrap();
        assert!(img.is_zero());
    }

    #[test]
    fn istring_and_tilde_sl2() {
        let m = Module::highest_weight(sl2(), DominantWeight::new(vec![2]).unwrap(), 6).unwrap();
        let y = m.highest_vec();
        // f^{(1)} y: single component at n = 1
        let fy = m.act_f(0, &y).unwrap();
        let comps = m.istring(0, &fy).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps[0].is_zero());
        assert_eq!(comps[1], y);
        // tilde_f gives f^{(2)} y, tilde_e returns y
        let f2y = m.tilde_f(0, &fy).unwrap();
        assert_eq!(f2y, m.act_f_dp(0, 2, &y).unwrap());
        assert_eq!(m.tilde_e(0, &fy).unwrap(), y);
        // tilde_e at the top is zero
        assert!(m.tilde_e(0, &y).unwrap().is_zero());
    }

    #[test]
    fn tensor_weights_and_dims() {
        // V(Lambda) (x) V(Lambda) for sl2: dims 1, 2, 1
        let m = Module::highest_weight(sl2(), DominantWeight::new(vec![1]).unwrap(), 4).unwrap();
        let t = Module::tensor(m.clone(), m).unwrap();
        assert_eq!(t.space(&[0]).unwrap().dim, 1);
        assert_eq!(t.space(&[-1]).unwrap().dim, 2);
        assert_eq!(t.space(&[-2]).unwrap().dim, 1);
    }

    #[test]
    fn tensor_polarization_contract() {
        let m = Module::highest_weight(sl2(), DominantWeight::new(vec![1]).unwrap(), 4).unwrap();
        let t = Module::tensor(m.clone(), m).unwrap();
        let y = t.highest_vec();
        let fy = t.act_f(0, &y).unwrap();
        let ffy = t.act_f(0, &fy).unwrap();
        for x in [&y, &fy, &ffy] {
            for z in [&y, &fy, &ffy] {
                let lhs = t.form(&t.act_f(0, x).unwrap(), z).unwrap();
                let mut up = z.xi.clone();
                up[0] += 1;
                let ez = t.act_e(0, z).unwrap();
                let rhs = if ez.is_zero() {
                    Scalar::zero()
                } else {
                    let mu = t.weight_of(&up);
                    let pre = Scalar::v_pow(-1)
                        .mul(&t.datum().k_scalar(0, &mu, KGen::KPrime).inv().unwrap());
                    t.form(x, &ez.scale(&pre)).unwrap()
                };
                assert_eq!(lhs, rhs, "contract fails");
            }
        }
    }

    #[test]
    fn phi_psi_roundtrip() {
        let lam = Module::highest_weight(a2(), DominantWeight::new(vec![1, 0]).unwrap(), 4)
            .unwrap();
        let mu = Module::highest_weight(a2(), DominantWeight::new(vec![0, 1]).unwrap(), 4)
            .unwrap();
        let big = Module::highest_weight(a2(), DominantWeight::new(vec![1, 1]).unwrap(), 6)
            .unwrap();
        let tensor = Module::tensor(lam, mu).unwrap();
        let maps = PhiPsi::new(big.clone(), tensor.clone()).unwrap();
        // Phi(y_{lambda+mu}) = y_lambda (x) y_mu
        let top = maps.apply_phi(&big.highest_vec()).unwrap();
        assert_eq!(top, tensor.highest_vec());
        // Psi . Phi = id on every built weight space
        for (xi, dim) in big.weights() {
            if dim == 0 {
                continue;
            }
            for c in 0..dim {
                let x = ModuleVec {
                    xi: xi.clone(),
                    coords: basis_vec(dim, c),
                };
                let back = maps.apply_psi(&maps.apply_phi(&x).unwrap()).unwrap();
                assert_eq!(back, x);
            }
        }
        // (Psi(x), y) = (x, Phi(y))
        let xi = vec![-1, -1];
        let tdim = tensor.space(&xi).unwrap().dim;
        let bdim = big.space(&xi).unwrap().dim;
        for j in 0..tdim {
            for l in 0..bdim {
                let x = ModuleVec {
                    xi: xi.clone(),
                    coords: basis_vec(tdim, j),
                };
                let y = ModuleVec {
                    xi: xi.clone(),
                    coords: basis_vec(bdim, l),
                };
                let lhs = big.form(&maps.apply_psi(&x).unwrap(), &y).unwrap();
                let rhs = tensor.form(&x, &maps.apply_phi(&y).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn k_action_eigenvalues() {
        let m = Module::highest_weight(a2(), DominantWeight::new(vec![1, 0]).unwrap(), 4).unwrap();
        let y = m.highest_vec();
        let ky = m.act_k(0, KGen::K, &y);
        assert_eq!(ky, y.scale(&Scalar::monomial(1, 1, TExp::new(-1, 3))));
    }
}
