//! Crystal lattices and crystal graphs: closure of a highest-weight vector
//! (or of 1 in the negative half) under the Kashiwara operators, node
//! identification through the residue form, colored graphs, the tensor rule,
//! projections, and orthonormality and star checks.
//!
//! Raw closure vectors reaching the same node along different operator paths
//! can differ by a sign and a unit power of t (the two-parameter cocycle
//! twist), so arrivals are classified against already-discovered nodes by
//! pairing at v = 0: a vector of residue norm 0 is crystal-zero, a vector
//! pairing to a unit t-power against exactly one node is that node, and a
//! vector orthogonal to every known node opens a new one. New nodes are
//! stored with a canonical representative (sign and t-power fixed from the
//! first nonzero coordinate). Anything outside this trichotomy is a hard
//! error, as is any residue-form value with a pole at v = 0.

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::halfalg::{HalfAlgebra, HalfElt};
use crate::modules::{Module, ModuleVec};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

const MAX_NODES: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeRep {
    Module(ModuleVec),
    Half(HalfElt),
}

#[derive(Clone, Debug)]
pub struct CrystalNode {
    pub id: usize,
    /// offset from the highest weight (module crystals) or the grade (B(inf))
    pub xi: Vec<i64>,
    /// operator word: node = f~_{w[0]} f~_{w[1]} ... f~_{w[l-1]} (seed)
    pub gen_word: Vec<u8>,
    pub eps: Vec<i64>,
    pub phi: Vec<i64>,
    pub rep: NodeRep,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrystalKind {
    Module { lambda: Vec<i64> },
    Tensor { lambda: Vec<i64>, mu: Vec<i64> },
    BInf,
}

pub struct CrystalGraph {
    pub datum: Arc<CartanDatum>,
    pub kind: CrystalKind,
    pub nodes: Vec<CrystalNode>,
    /// (from, color, to) with color an index into the datum
    pub edges: Vec<(usize, usize, usize)>,
}

impl CrystalGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes_at(&self, xi: &[i64]) -> Vec<&CrystalNode> {
        self.nodes.iter().filter(|n| n.xi == xi).collect()
    }

    pub fn tilde_f_of(&self, id: usize, i: usize) -> Option<usize> {
        self.edges
            .iter()
            .find(|&&(f, c, _)| f == id && c == i)
            .map(|&(_, _, t)| t)
    }

    pub fn tilde_e_of(&self, id: usize, i: usize) -> Option<usize> {
        self.edges
            .iter()
            .find(|&&(_, c, t)| t == id && c == i)
            .map(|&(f, _, _)| f)
    }
}

/// Ambient space operations the closure needs; implemented by modules and by
/// the negative half.
pub(crate) trait Ambient {
    type Elt: Clone;
    fn rank(&self) -> usize;
    fn op_tilde_f(&self, i: usize, x: &Self::Elt) -> Result<Self::Elt>;
    fn op_tilde_e(&self, i: usize, x: &Self::Elt) -> Result<Self::Elt>;
    fn elt_xi(&self, x: &Self::Elt) -> Vec<i64>;
    fn elt_is_zero(&self, x: &Self::Elt) -> bool;
    fn elt_coords(&self, x: &Self::Elt) -> Result<Vec<Scalar>>;
    fn elt_scale(&self, x: &Self::Elt, c: &Scalar) -> Self::Elt;
    fn elt_form(&self, x: &Self::Elt, y: &Self::Elt) -> Result<Scalar>;
    /// epsilon_i: the index of the unique i-string component outside vL.
    fn string_position(&self, i: usize, x: &Self::Elt) -> Result<i64>;
    fn h_pair_at(&self, i: usize, xi: &[i64]) -> i64;
    fn wrap(&self, x: Self::Elt) -> NodeRep;
}

impl Ambient for Arc<Module> {
    type Elt = ModuleVec;

    fn rank(&self) -> usize {
        self.datum().rank()
    }

    fn op_tilde_f(&self, i: usize, x: &ModuleVec) -> Result<ModuleVec> {
        self.tilde_f(i, x)
    }

    fn op_tilde_e(&self, i: usize, x: &ModuleVec) -> Result<ModuleVec> {
        self.tilde_e(i, x)
    }

    fn elt_xi(&self, x: &ModuleVec) -> Vec<i64> {
        x.xi.clone()
    }

    fn elt_is_zero(&self, x: &ModuleVec) -> bool {
        x.is_zero()
    }

    fn elt_coords(&self, x: &ModuleVec) -> Result<Vec<Scalar>> {
        Ok(x.coords.clone())
    }

    fn elt_scale(&self, x: &ModuleVec, c: &Scalar) -> ModuleVec {
        x.scale(c)
    }

    fn elt_form(&self, x: &ModuleVec, y: &ModuleVec) -> Result<Scalar> {
        self.form(x, y)
    }

    fn string_position(&self, i: usize, x: &ModuleVec) -> Result<i64> {
        let comps = self.istring(i, x)?;
        let mut norms = Vec::new();
        for c in &comps {
            norms.push(residue_norm(self, c)?);
        }
        unique_live_component(&norms)
    }

    fn h_pair_at(&self, i: usize, xi: &[i64]) -> i64 {
        let wt = self.weight_of(xi);
        self.datum().h_pair(i, &wt)
    }

    fn wrap(&self, x: ModuleVec) -> NodeRep {
        NodeRep::Module(x)
    }
}

impl Ambient for Arc<HalfAlgebra> {
    type Elt = HalfElt;

    fn rank(&self) -> usize {
        self.datum().rank()
    }

    fn op_tilde_f(&self, i: usize, x: &HalfElt) -> Result<HalfElt> {
        self.tilde_f(i, x)
    }

    fn op_tilde_e(&self, i: usize, x: &HalfElt) -> Result<HalfElt> {
        self.tilde_e(i, x)
    }

    fn elt_xi(&self, x: &HalfElt) -> Vec<i64> {
        match x.content(self.rank()) {
            Some(c) => c.iter().map(|&m| -m).collect(),
            None => vec![0; self.rank()],
        }
    }

    fn elt_is_zero(&self, x: &HalfElt) -> bool {
        x.is_zero()
    }

    fn elt_coords(&self, x: &HalfElt) -> Result<Vec<Scalar>> {
        let content = match x.content(self.rank()) {
            Some(c) => c,
            None => return Ok(Vec::new()),
        };
        let basis = self.weight_basis(&content)?;
        Ok(basis.reduce_elt(x))
    }

    fn elt_scale(&self, x: &HalfElt, c: &Scalar) -> HalfElt {
        x.scale(c)
    }

    fn elt_form(&self, x: &HalfElt, y: &HalfElt) -> Result<Scalar> {
        Ok(self.pol_form(x, y))
    }

    fn string_position(&self, i: usize, x: &HalfElt) -> Result<i64> {
        let comps = self.istring(i, x)?;
        let mut norms = Vec::new();
        for c in &comps {
            norms.push(residue_norm(self, c)?);
        }
        unique_live_component(&norms)
    }

    fn h_pair_at(&self, i: usize, xi: &[i64]) -> i64 {
        let wt = crate::cartan::Weight {
            lam: vec![0; self.rank()],
            xi: xi.to_vec(),
        };
        self.datum().h_pair(i, &wt)
    }

    fn wrap(&self, x: HalfElt) -> NodeRep {
        NodeRep::Half(x)
    }
}

/// Residue norm (x, x)|_{v=0}: zero exactly when x lies in vL.
fn residue_norm<A: Ambient>(space: &A, x: &A::Elt) -> Result<Scalar> {
    if space.elt_is_zero(x) {
        return Ok(Scalar::zero());
    }
    let n = space.elt_form(x, x)?;
    n.eval_v0().map_err(|_| Error::LatticeViolation {
        context: "residue norm has a pole at v=0".into(),
    })
}

fn unique_live_component(norms: &[Scalar]) -> Result<i64> {
    let live: Vec<i64> = norms
        .iter()
        .enumerate()
        .filter(|(_, n)| !n.is_zero())
        .map(|(i, _)| i as i64)
        .collect();
    match live.as_slice() {
        [n] => Ok(*n),
        _ => Err(Error::Invariant(format!(
            "i-string has {} components outside vL, expected exactly 1",
            live.len()
        ))),
    }
}

/// The unit t^{-e} that anchors the t-power of the class representative:
/// the lowest v-order coefficient of the first nonzero coordinate gets
/// lowest t-exponent 0. The sign is kept as it arrived, which pins the
/// t = 1 specialization of every class to its classical value.
fn canonical_unit<A: Ambient>(space: &A, x: &A::Elt) -> Result<Scalar> {
    let coords = space.elt_coords(x)?;
    let first = coords
        .iter()
        .find(|c| !c.is_zero())
        .ok_or_else(|| Error::Invariant("canonical_unit of the zero vector".into()))?;
    let num = first.numer();
    let den = first.denom();
    let num0 = num.v_slice(num.val_v().unwrap());
    let den0 = den.v_slice(den.val_v().unwrap());
    let c0 = Scalar::from_parts(num0, den0)?;
    let e = c0.numer().val_t().unwrap() - c0.denom().val_t().unwrap();
    Ok(Scalar::t_pow(-e))
}

/// Outcome of classifying a closure vector against the nodes already known
/// at its weight.
enum Class<E> {
    Zero,
    Existing(usize),
    New(E),
}

fn classify<A: Ambient>(
    space: &A,
    nodes: &[(usize, A::Elt)],
    x: &A::Elt,
) -> Result<Class<A::Elt>> {
    if space.elt_is_zero(x) {
        return Ok(Class::Zero);
    }
    // lattice sanity: ambient coordinates must not have poles at v = 0
    for c in space.elt_coords(x)? {
        if !c.is_zero() && c.val_v().unwrap() < 0 {
            return Err(Error::LatticeViolation {
                context: "closure vector has a pole at v=0".into(),
            });
        }
    }
    let norm0 = residue_norm(space, x)?;
    if norm0.is_zero() {
        return Ok(Class::Zero);
    }
    let mut live: Vec<(usize, Scalar)> = Vec::new();
    for (id, rep) in nodes {
        let p = space.elt_form(rep, x)?;
        let p0 = p.eval_v0().map_err(|_| Error::LatticeViolation {
            context: "residue pairing has a pole at v=0".into(),
        })?;
        if !p0.is_zero() {
            live.push((*id, p0));
        }
    }
    match live.as_slice() {
        [] => {
            let unit = canonical_unit(space, x)?;
            let rep = space.elt_scale(x, &unit);
            let n = residue_norm(space, &rep)?;
            if n != Scalar::one() {
                return Err(Error::Invariant(format!(
                    "new node has residue norm {}, expected 1",
                    n
                )));
            }
            Ok(Class::New(rep))
        }
        [(id, p0)] => {
            // class(x) = p0 * b_id plus an orthogonal part, which must vanish
            let expect = p0.star().mul(p0);
            if expect != norm0 {
                return Err(Error::Invariant(
                    "closure vector overlaps a node but has orthogonal residue".into(),
                ));
            }
            match p0.as_t_monomial() {
                Some((n, d, _)) if n.magnitude() == d.magnitude() => {}
                _ => {
                    return Err(Error::Invariant(format!(
                        "residue pairing {} is not a unit t-power",
                        p0
                    )))
                }
            }
            Ok(Class::Existing(*id))
        }
        _ => Err(Error::Invariant(format!(
            "closure vector pairs against {} nodes at once",
            live.len()
        ))),
    }
}

struct Closure<A: Ambient> {
    nodes: Vec<CrystalNode>,
    reps: Vec<A::Elt>,
    edges: Vec<(usize, usize, usize)>,
    by_weight: HashMap<Vec<i64>, Vec<usize>>,
}

impl<A: Ambient> Closure<A> {
    fn weight_nodes(&self, xi: &[i64]) -> Vec<(usize, A::Elt)> {
        self.by_weight
            .get(xi)
            .map(|ids| ids.iter().map(|&id| (id, self.reps[id].clone())).collect())
            .unwrap_or_default()
    }

    fn insert(&mut self, space: &A, rep: A::Elt, gen_word: Vec<u8>) -> Result<usize> {
        let id = self.nodes.len();
        if id >= MAX_NODES {
            return Err(Error::Invariant("crystal closure exceeded node cap".into()));
        }
        let xi = space.elt_xi(&rep);
        let rank = space.rank();
        self.by_weight.entry(xi.clone()).or_default().push(id);
        self.nodes.push(CrystalNode {
            id,
            xi,
            gen_word,
            eps: vec![0; rank],
            phi: vec![0; rank],
            rep: space.wrap(rep.clone()),
        });
        self.reps.push(rep);
        Ok(id)
    }
}

fn close_under_tilde_f<A: Ambient>(
    space: &A,
    seeds: Vec<(A::Elt, Vec<u8>)>,
    depth: usize,
) -> Result<Closure<A>> {
    let rank = space.rank();
    let mut st = Closure::<A> {
        nodes: Vec::new(),
        reps: Vec::new(),
        edges: Vec::new(),
        by_weight: HashMap::new(),
    };
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (seed, word) in seeds {
        let xi = space.elt_xi(&seed);
        let existing = st.weight_nodes(&xi);
        match classify(space, &existing, &seed)? {
            Class::Zero => {
                return Err(Error::Invariant("seed vector lies in vL".into()));
            }
            Class::Existing(_) => continue,
            Class::New(rep) => {
                let id = st.insert(space, rep, word)?;
                queue.push_back(id);
            }
        }
    }
    while let Some(id) = queue.pop_front() {
        let xi = st.nodes[id].xi.clone();
        let height: usize = xi.iter().map(|&x| x.unsigned_abs() as usize).sum();
        if height >= depth {
            continue;
        }
        for i in 0..rank {
            let img = space.op_tilde_f(i, &st.reps[id])?;
            let target_xi = space.elt_xi(&img);
            let existing = st.weight_nodes(&target_xi);
            let target = match classify(space, &existing, &img)? {
                Class::Zero => continue,
                Class::Existing(t) => t,
                Class::New(rep) => {
                    let mut word = vec![i as u8];
                    word.extend_from_slice(&st.nodes[id].gen_word);
                    let t = st.insert(space, rep, word)?;
                    queue.push_back(t);
                    t
                }
            };
            // verify the inverse edge: tilde_e returns to the source class
            let back = space.op_tilde_e(i, &st.reps[target])?;
            let back_nodes = st.weight_nodes(&xi);
            match classify(space, &back_nodes, &back)? {
                Class::Existing(b) if b == id => {}
                _ => {
                    return Err(Error::Invariant(format!(
                        "edge inversion failed: tilde_e_{} does not undo tilde_f_{}",
                        i + 1,
                        i + 1
                    )))
                }
            }
            if !st.edges.contains(&(id, i, target)) {
                st.edges.push((id, i, target));
            }
        }
    }
    // epsilon from the string position of each node, phi from the weight rule
    for id in 0..st.nodes.len() {
        for i in 0..rank {
            let eps = space.string_position(i, &st.reps[id])?;
            let h = space.h_pair_at(i, &st.nodes[id].xi);
            st.nodes[id].eps[i] = eps;
            st.nodes[id].phi[i] = eps + h;
        }
    }
    st.edges.sort_unstable();
    Ok(st)
}

/// Crystal of a built module (irreducible or tensor), closing from the
/// highest-weight vector.
pub fn module_crystal(module: &Arc<Module>, depth: usize) -> Result<CrystalGraph> {
    let seeds = vec![(module.highest_vec(), Vec::new())];
    let st = close_under_tilde_f(module, seeds, depth)?;
    Ok(CrystalGraph {
        datum: module.datum().clone(),
        kind: CrystalKind::Module {
            lambda: module.highest().lam.clone(),
        },
        nodes: st.nodes,
        edges: st.edges,
    })
}

/// B(infinity) out to the given depth: closure of 1 inside the negative half.
/// Node representatives are star-aligned: each star orbit carries exactly
/// star-linked representatives, so the star involution acts on classes with
/// unit factor 1.
pub fn binf_crystal(alg: &Arc<HalfAlgebra>, depth: usize) -> Result<CrystalGraph> {
    if depth > alg.depth_cap() {
        return Err(Error::DepthExceeded {
            requested: depth,
            cap: alg.depth_cap(),
        });
    }
    let seeds = vec![(HalfElt::unit(), Vec::new())];
    let mut st = close_under_tilde_f(alg, seeds, depth)?;
    star_align(alg, &mut st)?;
    Ok(CrystalGraph {
        datum: alg.datum().clone(),
        kind: CrystalKind::BInf,
        nodes: st.nodes,
        edges: st.edges,
    })
}

/// Retarget node representatives so that star maps representatives to
/// representatives exactly: the smaller node id of each star orbit keeps its
/// canonical representative, its partner receives the starred vector, and
/// star-fixed nodes absorb an even t-power into a half-power rescale.
fn star_align(alg: &Arc<HalfAlgebra>, st: &mut Closure<Arc<HalfAlgebra>>) -> Result<()> {
    let n = st.nodes.len();
    let mut done = vec![false; n];
    for id in 0..n {
        if done[id] {
            continue;
        }
        let starred = alg.reduce(&st.reps[id].star())?;
        let xi = st.nodes[id].xi.clone();
        let peers = st.weight_nodes(&xi);
        match classify(alg, &peers, &starred)? {
            Class::Existing(j) if j == id => {
                // fixed class: make the representative literally star-fixed
                let u = alg
                    .pol_form(&st.reps[id], &starred)
                    .eval_v0()
                    .map_err(|_| Error::LatticeViolation {
                        context: "star pairing has a pole at v=0".into(),
                    })?;
                if u == Scalar::one() {
                    done[id] = true;
                    continue;
                }
                let (cn, cd, k) = u.as_t_monomial().ok_or_else(|| {
                    Error::Invariant(format!("star unit {} is not a t-power", u))
                })?;
                use num_traits::Signed;
                let negative = cn.is_negative() != cd.is_negative();
                if negative {
                    return Err(Error::Invariant(format!(
                        "star-fixed node {} has twist {} with no half-power correction",
                        id, u
                    )));
                }
                let half = k / 2;
                let c = Scalar::t_pow(half);
                st.reps[id] = st.reps[id].scale(&c);
                st.nodes[id].rep = alg.wrap(st.reps[id].clone());
                done[id] = true;
            }
            Class::Existing(j) => {
                st.reps[j] = starred;
                st.nodes[j].rep = alg.wrap(st.reps[j].clone());
                done[id] = true;
                done[j] = true;
            }
            _ => {
                return Err(Error::Invariant(format!(
                    "star of node {} is not a node class",
                    id
                )))
            }
        }
    }
    Ok(())
}

/// Crystal of a tensor module seeded from all pairs of component nodes,
/// closing under the operators without adding nodes (a new node is an
/// invariant violation).
pub fn tensor_crystal(
    tensor: &Arc<Module>,
    left: &CrystalGraph,
    right: &CrystalGraph,
) -> Result<(CrystalGraph, Vec<(usize, usize)>)> {
    let mut seeds: Vec<(ModuleVec, Vec<u8>)> = Vec::new();
    let mut labels: Vec<(usize, usize)> = Vec::new();
    for a in &left.nodes {
        for b in &right.nodes {
            let va = match &a.rep {
                NodeRep::Module(v) => v,
                _ => return Err(Error::Invariant("tensor_crystal needs module nodes".into())),
            };
            let vb = match &b.rep {
                NodeRep::Module(v) => v,
                _ => return Err(Error::Invariant("tensor_crystal needs module nodes".into())),
            };
            seeds.push((tensor_vector(tensor, va, vb)?, Vec::new()));
            labels.push((a.id, b.id));
        }
    }
    let n_seeds = seeds.len();
    let st = close_under_tilde_f(tensor, seeds, usize::MAX)?;
    if st.nodes.len() != n_seeds {
        return Err(Error::Invariant(format!(
            "tensor crystal closure escaped the pair set: {} nodes from {} seeds",
            st.nodes.len(),
            n_seeds
        )));
    }
    let hw = |g: &CrystalGraph| match &g.kind {
        CrystalKind::Module { lambda } => lambda.clone(),
        _ => Vec::new(),
    };
    Ok((
        CrystalGraph {
            datum: tensor.datum().clone(),
            kind: CrystalKind::Tensor {
                lambda: hw(left),
                mu: hw(right),
            },
            nodes: st.nodes,
            edges: st.edges,
        },
        labels,
    ))
}

/// The product vector a (x) b inside a tensor module.
pub fn tensor_vector(tensor: &Arc<Module>, a: &ModuleVec, b: &ModuleVec) -> Result<ModuleVec> {
    let xi: Vec<i64> = a.xi.iter().zip(&b.xi).map(|(x, y)| x + y).collect();
    let mut out = tensor.zero_vec(&xi);
    if out.coords.is_empty() {
        return Err(Error::Invariant("tensor space not built".into()));
    }
    let pairs = tensor
        .pair_layout(&xi)
        .ok_or_else(|| Error::Invariant("tensor space has no pair layout".into()))?;
    for (idx, (xl, il, xr, ir)) in pairs.iter().enumerate() {
        if xl == &a.xi && xr == &b.xi {
            let c = a.coords[*il].mul(&b.coords[*ir]);
            if !c.is_zero() {
                out.coords[idx] = c;
            }
        }
    }
    Ok(out)
}

// -- reports -----------------------------------------------------------------

#[derive(Debug, Default, Serialize)]
pub struct CheckReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}

/// Verify the tensor-product rule: the directly computed tensor crystal must
/// coincide, edge for edge, with the combinatorial rule applied to the
/// component graphs.
pub fn tensor_rule_check(
    tensor: &Arc<Module>,
    left: &CrystalGraph,
    right: &CrystalGraph,
) -> Result<CheckReport> {
    let (direct, labels) = tensor_crystal(tensor, left, right)?;
    let rank = tensor.datum().rank();
    let pair_of = |id: usize| labels[id];
    let mut report = CheckReport::default();
    for node in &direct.nodes {
        let (a, b) = pair_of(node.id);
        for i in 0..rank {
            let phi_a = left.nodes[a].phi[i];
            let eps_b = right.nodes[b].eps[i];
            let expect_f: Option<(usize, usize)> = if phi_a > eps_b {
                left.tilde_f_of(a, i).map(|a2| (a2, b))
            } else {
                right.tilde_f_of(b, i).map(|b2| (a, b2))
            };
            let direct_f = direct.tilde_f_of(node.id, i).map(pair_of);
            report.checked += 1;
            if direct_f != expect_f {
                report.failures.push(format!(
                    "f~_{} (b1={}, b2={}): direct {:?}, rule {:?}",
                    i + 1,
                    a,
                    b,
                    direct_f,
                    expect_f
                ));
            }
            let eps_rule: Option<(usize, usize)> = if phi_a >= eps_b {
                left.tilde_e_of(a, i).map(|a2| (a2, b))
            } else {
                right.tilde_e_of(b, i).map(|b2| (a, b2))
            };
            let direct_e = direct.tilde_e_of(node.id, i).map(pair_of);
            report.checked += 1;
            if direct_e != eps_rule {
                report.failures.push(format!(
                    "e~_{} (b1={}, b2={}): direct {:?}, rule {:?}",
                    i + 1,
                    a,
                    b,
                    direct_e,
                    eps_rule
                ));
            }
        }
    }
    Ok(report)
}

/// Orthonormality of the residue form on one crystal: (b, b')_0 = delta.
pub fn ortho_check(
    graph: &CrystalGraph,
    form: impl Fn(&NodeRep, &NodeRep) -> Result<Scalar>,
) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    for a in &graph.nodes {
        for b in &graph.nodes {
            if a.xi != b.xi || a.id > b.id {
                continue;
            }
            let val = form(&a.rep, &b.rep)?;
            let val0 = val.eval_v0().map_err(|_| Error::LatticeViolation {
                context: "form value has a pole at v=0".into(),
            })?;
            let expect = if a.id == b.id {
                Scalar::one()
            } else {
                Scalar::zero()
            };
            report.checked += 1;
            if val0 != expect {
                report
                    .failures
                    .push(format!("(b{}, b{})_0 = {}", a.id, b.id, val0));
            }
        }
    }
    Ok(report)
}

/// Star stability of B(inf): star maps every node class to a node class,
/// involutively.
pub fn star_check(alg: &Arc<HalfAlgebra>, graph: &CrystalGraph) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let mut perm: Vec<Option<usize>> = vec![None; graph.nodes.len()];
    for node in &graph.nodes {
        let rep = match &node.rep {
            NodeRep::Half(h) => h,
            _ => return Err(Error::Invariant("star_check needs B(inf) nodes".into())),
        };
        let starred = alg.reduce(&rep.star())?;
        let peers: Vec<(usize, HalfElt)> = graph
            .nodes
            .iter()
            .filter(|n| n.xi == node.xi)
            .map(|n| match &n.rep {
                NodeRep::Half(h) => (n.id, h.clone()),
                _ => unreachable!(),
            })
            .collect();
        report.checked += 1;
        match classify(alg, &peers, &starred)? {
            Class::Existing(t) => perm[node.id] = Some(t),
            Class::Zero => report
                .failures
                .push(format!("star(b{}) lies in vL", node.id)),
            Class::New(_) => report.failures.push(format!(
                "star(b{}) is not a node of B(inf) at grade {:?}",
                node.id, node.xi
            )),
        }
    }
    for (id, target) in perm.iter().enumerate() {
        if let Some(t) = target {
            report.checked += 1;
            if perm[*t] != Some(id) {
                report
                    .failures
                    .push(format!("star is not involutive at b{}", id));
            }
        }
    }
    Ok(report)
}

/// The projection of B(inf) onto B(lambda): node-level map with the
/// compatibility checks (image, bijectivity of the nonzero fiber, and
/// commutation with the Kashiwara operators).
pub fn project_binf(
    binf: &CrystalGraph,
    module: &Arc<Module>,
    blam: &CrystalGraph,
) -> Result<(Vec<Option<usize>>, CheckReport)> {
    let mut report = CheckReport::default();
    let mut image: Vec<Option<usize>> = vec![None; binf.nodes.len()];
    for node in &binf.nodes {
        let rep = match &node.rep {
            NodeRep::Half(h) => h,
            _ => return Err(Error::Invariant("project_binf needs B(inf) nodes".into())),
        };
        let projected = module.project_half(rep)?;
        report.checked += 1;
        if projected.is_zero() {
            continue;
        }
        let peers: Vec<(usize, ModuleVec)> = blam
            .nodes
            .iter()
            .filter(|n| n.xi == node.xi)
            .map(|n| match &n.rep {
                NodeRep::Module(m) => (n.id, m.clone()),
                _ => unreachable!(),
            })
            .collect();
        match classify(module, &peers, &projected)? {
            Class::Zero => {}
            Class::Existing(t) => image[node.id] = Some(t),
            Class::New(_) => report.failures.push(format!(
                "projection of b{} is not a node of B(lambda)",
                node.id
            )),
        }
    }
    // fiber bijectivity onto B(lambda), within the shared depth window
    let depth = binf
        .nodes
        .iter()
        .map(|n| n.xi.iter().map(|&x| x.unsigned_abs() as usize).sum::<usize>())
        .max()
        .unwrap_or(0);
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (src, tgt) in image.iter().enumerate() {
        if let Some(t) = tgt {
            if let Some(prev) = seen.insert(*t, src) {
                report.failures.push(format!(
                    "projection not injective: b{} and b{} both map to node {}",
                    prev, src, t
                ));
            }
        }
    }
    for m in &blam.nodes {
        let h: usize = m.xi.iter().map(|&x| x.unsigned_abs() as usize).sum();
        if h <= depth && !seen.contains_key(&m.id) {
            report
                .failures
                .push(format!("node {} of B(lambda) is not in the image", m.id));
        }
    }
    // f~ and e~ compatibility through the projection
    for node in &binf.nodes {
        let h: usize = node.xi.iter().map(|&x| x.unsigned_abs() as usize).sum();
        for i in 0..binf.datum.rank() {
            let fb = binf.tilde_f_of(node.id, i);
            if fb.is_none() && h >= depth {
                // f~_i b fell outside the generated window
                continue;
            }
            let lhs = fb.and_then(|t| image[t]);
            let rhs = image[node.id].and_then(|m| blam.tilde_f_of(m, i));
            report.checked += 1;
            if lhs != rhs {
                report.failures.push(format!(
                    "f~_{} does not commute with the projection at b{}",
                    i + 1,
                    node.id
                ));
            }
            if let Some(m) = image[node.id] {
                let eb = binf.tilde_e_of(node.id, i);
                let lhs = eb.and_then(|t| image[t]);
                let rhs = blam.tilde_e_of(m, i);
                report.checked += 1;
                if lhs != rhs {
                    report.failures.push(format!(
                        "e~_{} does not commute with the projection at b{}",
                        i + 1,
                        node.id
                    ));
                }
            }
        }
    }
    Ok((image, report))
}

// -- serialization -------------------------------------------------------------

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct GraphDoc {
    pub datum: DatumDoc,
    pub highest_weight: serde_json::Value,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
    pub eps: BTreeMap<String, Vec<i64>>,
    pub phi: BTreeMap<String, Vec<i64>>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct DatumDoc {
    #[serde(rename = "Lambda")]
    pub lambda: Vec<Vec<i64>>,
    pub labels: Vec<String>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct NodeDoc {
    pub id: usize,
    pub weight: Vec<i64>,
    pub gen_word: Vec<i64>,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
pub struct EdgeDoc {
    pub from: usize,
    pub to: usize,
    pub color: String,
}

pub fn graph_doc(graph: &CrystalGraph) -> GraphDoc {
    let datum = DatumDoc {
        lambda: graph.datum.lambda_matrix().clone(),
        labels: graph.datum.labels().to_vec(),
    };
    let highest_weight = match &graph.kind {
        CrystalKind::Module { lambda } => serde_json::json!(lambda),
        CrystalKind::Tensor { .. } => serde_json::json!("tensor"),
        CrystalKind::BInf => serde_json::json!("binf"),
    };
    let nodes = graph
        .nodes
        .iter()
        .map(|n| NodeDoc {
            id: n.id,
            weight: match &graph.kind {
                CrystalKind::BInf => n.xi.clone(),
                _ => {
                    let wt = crate::cartan::Weight {
                        lam: match &graph.kind {
                            CrystalKind::Module { lambda } => lambda.clone(),
                            _ => vec![0; graph.datum.rank()],
                        },
                        xi: n.xi.clone(),
                    };
                    (0..graph.datum.rank())
                        .map(|i| graph.datum.h_pair(i, &wt))
                        .collect()
                }
            },
            gen_word: n.gen_word.iter().map(|&i| i as i64 + 1).collect(),
        })
        .collect();
    let edges = graph
        .edges
        .iter()
        .map(|&(f, c, t)| EdgeDoc {
            from: f,
            to: t,
            color: graph.datum.labels()[c].clone(),
        })
        .collect();
    let eps = graph
        .nodes
        .iter()
        .map(|n| (n.id.to_string(), n.eps.clone()))
        .collect();
    let phi = graph
        .nodes
        .iter()
        .map(|n| (n.id.to_string(), n.phi.clone()))
        .collect();
    GraphDoc {
        datum,
        highest_weight,
        nodes,
        edges,
        eps,
        phi,
    }
}

pub fn export_json(graph: &CrystalGraph) -> Result<String> {
    Ok(serde_json::to_string_pretty(&graph_doc(graph))?)
}

pub fn import_json(text: &str) -> Result<GraphDoc> {
    Ok(serde_json::from_str(text)?)
}

pub fn reexport_json(doc: &GraphDoc) -> Result<String> {
    Ok(serde_json::to_string_pretty(doc)?)
}

pub fn export_dot(graph: &CrystalGraph) -> String {
    let mut out = String::from("digraph crystal {\n");
    for n in &graph.nodes {
        out.push_str(&format!("  n{} [label=\"{}:{:?}\"];\n", n.id, n.id, n.xi));
    }
    for &(f, c, t) in &graph.edges {
        out.push_str(&format!(
            "  n{} -> n{} [label=\"{}\"];\n",
            f,
            t,
            graph.datum.labels()[c]
        ));
    }
    out.push_str("}\n");
    out
}

/// Crystal coordinates of a lattice vector: residue pairings ((b_j, x)_0)_j
/// over the nodes at its weight. Errors if x carries residue mass outside
/// the node span.
pub fn crystal_coordinates_half(
    alg: &Arc<HalfAlgebra>,
    nodes: &[(usize, HalfElt)],
    x: &HalfElt,
) -> Result<Vec<Scalar>> {
    let mut coords = Vec::with_capacity(nodes.len());
    let mut norm_acc = Scalar::zero();
    for (_, rep) in nodes {
        let p = alg.pol_form(rep, x);
        let p0 = p.eval_v0().map_err(|_| Error::LatticeViolation {
            context: "residue pairing has a pole at v=0".into(),
        })?;
        norm_acc = norm_acc.add(&p0.star().mul(&p0));
        coords.push(p0);
    }
    let norm0 = residue_norm(&alg.clone(), x)?;
    if norm_acc != norm0 {
        return Err(Error::Invariant(
            "vector has residue mass outside the crystal-node span".into(),
        ));
    }
    Ok(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{CartanDatum, DominantWeight};

    fn sl2() -> Arc<CartanDatum> {
        CartanDatum::validate(vec![vec![1]], None, None).unwrap()
    }

    fn a2() -> Arc<CartanDatum> {
        CartanDatum::validate(vec![vec![1, -1], vec![0, 1]], None, None).unwrap()
    }

    #[test]
    fn sl2_chain() {
        for n in 1..=4i64 {
            let m = Module::highest_weight(sl2(), DominantWeight::new(vec![n]).unwrap(), 8)
                .unwrap();
            let g = module_crystal(&m, 8).unwrap();
            assert_eq!(g.node_count() as i64, n + 1);
            assert_eq!(g.edge_count() as i64, n);
            assert!(g.tilde_e_of(0, 0).is_none());
        }
    }

    #[test]
    fn a2_fundamental_crystal() {
        let m = Module::highest_weight(a2(), DominantWeight::new(vec![1, 0]).unwrap(), 4)
            .unwrap();
        let g = module_crystal(&m, 6).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edges, vec![(0, 0, 1), (1, 1, 2)]);
    }

    #[test]
    fn a2_adjoint_crystal() {
        let m = Module::highest_weight(a2(), DominantWeight::new(vec![1, 1]).unwrap(), 6)
            .unwrap();
        let g = module_crystal(&m, 8).unwrap();
        assert_eq!(g.node_count(), 8);
    }

    #[test]
    fn binf_sl2_chain() {
        let alg = Arc::new(HalfAlgebra::new(sl2()));
        let g = binf_crystal(&alg, 5).unwrap();
        assert_eq!(g.node_count(), 6);
        assert_eq!(g.edge_count(), 5);
    }

    #[test]
    fn binf_a2_counts() {
        let alg = Arc::new(HalfAlgebra::new(a2()));
        let g = binf_crystal(&alg, 2).unwrap();
        assert_eq!(g.nodes_at(&[-1, -1]).len(), 2);
        assert_eq!(g.node_count(), 7);
    }

    #[test]
    fn binf_a2_depth3_t_twist_collapses() {
        // the f~1 f~2 f~1 and f~2 f~1 f~1 paths land on the same node
        let alg = Arc::new(HalfAlgebra::new(a2()));
        let g = binf_crystal(&alg, 3).unwrap();
        assert_eq!(g.nodes_at(&[-2, -1]).len(), 2);
        assert_eq!(g.nodes_at(&[-1, -2]).len(), 2);
        assert_eq!(g.nodes_at(&[-3, 0]).len(), 1);
    }

    #[test]
    fn binf_ortho() {
        let alg = Arc::new(HalfAlgebra::new(a2()));
        let g = binf_crystal(&alg, 3).unwrap();
        let alg2 = alg.clone();
        let report = ortho_check(&g, move |a, b| match (a, b) {
            (NodeRep::Half(x), NodeRep::Half(y)) => Ok(alg2.pol_form(x, y)),
            _ => unreachable!(),
        })
        .unwrap();
        assert!(report.ok(), "failures: {:?}", report.failures);
    }

    #[test]
    fn module_ortho() {
        let m = Module::highest_weight(a2(), DominantWeight::new(vec![1, 1]).unwrap(), 6)
            .unwrap();
        let g = module_crystal(&m, 8).unwrap();
        let m2 = m.clone();
        let report = ortho_check(&g, move |a, b| match (a, b) {
            (NodeRep::Module(x), NodeRep::Module(y)) => m2.form(x, y),
            _ => unreachable!(),
        })
        .unwrap();
        assert!(report.ok(), "failures: {:?}", report.failures);
    }

    #[test]
    fn star_permutes_binf() {
        let alg = Arc::new(HalfAlgebra::new(a2()));
        let g = binf_crystal(&alg, 3).unwrap();
        let report = star_check(&alg, &g).unwrap();
        assert!(report.ok(), "failures: {:?}", report.failures);
    }

    #[test]
    fn projection_fundamental() {
        let alg = Arc::new(HalfAlgebra::new(a2()));
        let binf = binf_crystal(&alg, 3).unwrap();
        let m = Module::highest_weight(a2(), DominantWeight::new(vec![1, 0]).unwrap(), 4)
            .unwrap();
        let blam = module_crystal(&m, 6).unwrap();
        let (image, report) = project_binf(&binf, &m, &blam).unwrap();
        assert!(report.ok(), "failures: {:?}", report.failures);
        assert_eq!(image[0], Some(0));
    }

    #[test]
    fn tensor_rule_sl2() {
        let m = Module::highest_weight(sl2(), DominantWeight::new(vec![1]).unwrap(), 4)
            .unwrap();
        let g = module_crystal(&m, 6).unwrap();
        let t = Module::tensor(m.clone(), m.clone()).unwrap();
        let report = tensor_rule_check(&t, &g, &g).unwrap();
        assert!(report.ok(), "failures: {:?}", report.failures);
    }

    #[test]
    fn tensor_rule_a2() {
        let l = Module::highest_weight(a2(), DominantWeight::new(vec![1, 0]).unwrap(), 4)
            .unwrap();
        let r = Module::highest_weight(a2(), DominantWeight::new(vec![0, 1]).unwrap(), 4)
            .unwrap();
        let gl = module_crystal(&l, 6).unwrap();
        let gr = module_crystal(&r, 6).unwrap();
        let t = Module::tensor(l, r).unwrap();
        let report = tensor_rule_check(&t, &gl, &gr).unwrap();
        assert!(report.ok(), "failures: {:?}", report.failures);
    }

    #[test]
    fn export_empty_graph() {
        let g = CrystalGraph {
            datum: sl2(),
            kind: CrystalKind::BInf,
            nodes: Vec::new(),
            edges: Vec::new(),
        };
        let json = export_json(&g).unwrap();
        let doc = import_json(&json).unwrap();
        assert!(doc.nodes.is_empty());
        assert!(export_dot(&g).starts_with("digraph"));
    }

    #[test]
    fn export_roundtrip() {
        let m = Module::highest_weight(sl2(), DominantWeight::new(vec![2]).unwrap(), 6)
            .unwrap();
        let g = module_crystal(&m, 8).unwrap();
        let json = export_json(&g).unwrap();
        let doc = import_json(&json).unwrap();
        let json2 = reexport_json(&doc).unwrap();
        assert_eq!(json, json2);
        let dot = export_dot(&g);
        assert!(dot.contains("label=\"1\""));
    }
}
