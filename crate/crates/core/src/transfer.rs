//! Homotopy transfer of the product of a Hodge-decomposed DGCA to an
//! A∞-structure on its cohomology, and checks of the A∞ relations.
//!
//! Sign conventions: operations `m_k` have degree `2 - k`, the Stasheff
//! relations read
//!
//! ```text
//! Σ_{r+s+t=N} (-1)^{r+st} m_{r+1+t}(1^r ⊗ m_s ⊗ 1^t) = 0
//! ```
//!
//! and `1^r ⊗ f ⊗ 1^t` applied to `a_1 ⊗ … ⊗ a_N` carries the Koszul sign
//! `(-1)^{|f|(|a_1|+…+|a_r|)}`. Trees are summed recursively:
//! `λ_1 = ι`, `λ_p = Σ_{j+l=p} (-1)^{j(l+1)} μ(Hλ_j ⊗ Hλ_l)` with
//! `Hλ_1 = ι`, `Hλ_l = d⁻λ_l`, and `m_p = pr_ℋ λ_p`.

use crate::cochain::{Cochain, GradedSpace};
use crate::cohomology::{compute_cohomology, CohomologyData, CohomologyRing};
use crate::dgca::Dgca;
use crate::hodge::HodgeDecomposition;
use crate::linalg;
use crate::par;
use crate::scalar::{one, sign, Scalar};
use crate::small::harmonic_splitting;
use crate::sparse::{self, SparseVec};
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};

/// Operations `m_k` (`k ≥ 2`) on a graded space; `m_1 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinityStructure {
    pub space: GradedSpace,
    pub ops: BTreeMap<usize, Cochain>,
    pub arity_bound: usize,
}

impl AInfinityStructure {
    pub fn new(space: GradedSpace, arity_bound: usize) -> Self {
        AInfinityStructure { space, ops: BTreeMap::new(), arity_bound }
    }

    /// `m_k` evaluated on basis indices; zero beyond the stored arities.
    pub fn eval(&self, inputs: &[usize]) -> SparseVec {
        self.ops.get(&inputs.len()).map(|c| c.value(inputs)).unwrap_or_default()
    }

    pub fn op(&self, k: usize) -> Option<&Cochain> {
        self.ops.get(&k)
    }

    pub fn op_is_zero(&self, k: usize) -> bool {
        self.ops.get(&k).map_or(true, Cochain::is_zero)
    }

    pub fn mu3(&self) -> Cochain {
        self.ops.get(&3).cloned().unwrap_or_else(|| Cochain::new(3, -1))
    }

    pub fn to_lines(&self) -> String {
        self.ops.values().map(|c| c.to_lines(&self.space)).collect()
    }
}

/// Cohomology classes with their harmonic representatives.
#[derive(Clone, Debug)]
pub struct HarmonicBasis {
    pub cohomology: CohomologyData,
    pub reps: Vec<Vec<Scalar>>,
}

impl HarmonicBasis {
    pub fn new(dec: &HodgeDecomposition) -> Self {
        let a = dec.algebra();
        let cohomology = compute_cohomology(a);
        let split = harmonic_splitting(dec, &cohomology);
        let mut reps = Vec::new();
        for k in 0..=a.top_degree() {
            for j in 0..cohomology.classes(k).len() {
                reps.push(a.embed(k, &split.blocks[k].column(j)));
            }
        }
        HarmonicBasis { cohomology, reps }
    }

    pub fn space(&self) -> &GradedSpace {
        self.cohomology.space()
    }

    /// Class coordinates of `pr_ℋ v`.
    pub fn harmonic_class(&self, dec: &HodgeDecomposition, v: &[Scalar]) -> SparseVec {
        let a = dec.algebra();
        self.cohomology.class_sparse(a, &dec.project_harmonic(v))
    }

    pub fn ring(&self, a: &Dgca) -> CohomologyRing {
        self.cohomology.ring(a)
    }
}

fn is_zero(v: &[Scalar]) -> bool {
    linalg::is_zero_vec(v)
}

/// Tuples of arity `p` whose transferred output may be nonzero on degree
/// grounds.
fn tuples_for(space: &GradedSpace, p: usize, top: usize) -> Vec<Vec<usize>> {
    space.tuples(p).into_iter().filter(|t| space.tuple_degree(t) + 2 <= top + p).collect()
}

/// `m_2` and `m_3` from the closed formulas
/// `m_2(α,β) = pr_ℋ(αβ)` and `m_3(α,β,γ) = pr_ℋ(d⁻(αβ)γ - (-1)^{|α|} α d⁻(βγ))`.
pub fn transfer_explicit(dec: &HodgeDecomposition) -> AInfinityStructure {
    let a = dec.algebra();
    let hb = HarmonicBasis::new(dec);
    let sp = hb.space().clone();
    let n = a.top_degree();
    let mut s = AInfinityStructure::new(sp.clone(), 3);
    let mut m2 = Cochain::new(2, 0);
    for t in tuples_for(&sp, 2, n) {
        let p = a.product(&hb.reps[t[0]], &hb.reps[t[1]]);
        m2.set(t, hb.harmonic_class(dec, &p));
    }
    let rows = par::map(&tuples_for(&sp, 3, n), |t| {
        let (x, y, z) = (&hb.reps[t[0]], &hb.reps[t[1]], &hb.reps[t[2]]);
        let mut v = a.product(&dec.dminus_apply(&a.product(x, y)), z);
        let w = a.product(x, &dec.dminus_apply(&a.product(y, z)));
        linalg::add_scaled(&mut v, &-sign(sp.degree(t[0])), &w);
        (t.clone(), hb.harmonic_class(dec, &v))
    });
    let mut m3 = Cochain::new(3, -1);
    for (t, v) in rows {
        m3.set(t, v);
    }
    s.ops.insert(2, m2);
    s.ops.insert(3, m3);
    s
}

/// `m_k` for `2 ≤ k ≤ k_max` by tree summation. Each level is computed in
/// parallel from the stored lower levels.
pub fn transfer_trees(dec: &HodgeDecomposition, k_max: usize) -> AInfinityStructure {
    let a = dec.algebra();
    let hb = HarmonicBasis::new(dec);
    let sp = hb.space().clone();
    let n = a.top_degree();
    let mut s = AInfinityStructure::new(sp.clone(), k_max);
    // hl[p] maps a p-tuple to Hλ_p; only nonzero values are stored.
    let mut hl: Vec<HashMap<Vec<usize>, Vec<Scalar>>> = vec![HashMap::new(), HashMap::new()];
    for (i, r) in hb.reps.iter().enumerate() {
        if !is_zero(r) {
            hl[1].insert(vec![i], r.clone());
        }
    }
    for p in 2..=k_max {
        let tuples = tuples_for(&sp, p, n);
        let lower = &hl;
        let results = par::map(&tuples, |t| {
            let mut lam = a.zero_vector();
            let mut deg_prefix = 0;
            for j in 1..p {
                deg_prefix += sp.degree(t[j - 1]);
                let l = p - j;
                let (Some(x), Some(y)) = (lower[j].get(&t[..j]), lower[l].get(&t[j..])) else {
                    continue;
                };
                let sg = sign((l + 1) * (j + deg_prefix));
                linalg::add_scaled(&mut lam, &sg, &a.product(x, y));
            }
            if is_zero(&lam) {
                return (t.clone(), Vec::new(), None);
            }
            let m = hb.harmonic_class(dec, &lam);
            let h = dec.dminus_apply(&lam);
            (t.clone(), m, (!is_zero(&h)).then_some(h))
        });
        let mut op = Cochain::new(p, 2 - p as i64);
        let mut level = HashMap::new();
        for (t, m, h) in results {
            if let Some(h) = h {
                level.insert(t.clone(), h);
            }
            op.set(t, m);
        }
        hl.push(level);
        s.ops.insert(p, op);
    }
    s
}

/// A failed relation on a basis tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationFailure {
    pub arity: usize,
    pub inputs: Vec<usize>,
    pub value: SparseVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub checked: Vec<usize>,
    pub tuples: usize,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `Σ (-1)^{r+st} m_{r+1+t}(1^r ⊗ m_s ⊗ 1^t)` on one tuple.
pub fn stasheff_value(s: &AInfinityStructure, t: &[usize]) -> SparseVec {
    let big_n = t.len();
    let mut acc: SparseVec = Vec::new();
    for ss in 2..big_n {
        let mut deg_prefix = 0;
        for r in 0..=big_n - ss {
            if r > 0 {
                deg_prefix += s.space.degree(t[r - 1]);
            }
            let tt = big_n - ss - r;
            let inner = s.eval(&t[r..r + ss]);
            if inner.is_empty() {
                continue;
            }
            let sg = sign(r + ss * tt + ss * deg_prefix);
            for (i, c) in &inner {
                let mut outer = t[..r].to_vec();
                outer.push(*i);
                outer.extend_from_slice(&t[r + ss..]);
                let v = s.eval(&outer);
                if !v.is_empty() {
                    acc = sparse::axpy(&acc, &(&sg * c), &v);
                }
            }
        }
    }
    acc
}

/// Checks the Stasheff relations of arities `3..=through` on all basis
/// tuples of admissible degree.
pub fn verify_stasheff(s: &AInfinityStructure, through: usize) -> RelationReport {
    let top = s.space.max_degree();
    let mut failures = Vec::new();
    let mut tuples = 0;
    let checked: Vec<usize> = (3..=through).collect();
    for &big_n in &checked {
        let ts: Vec<Vec<usize>> = s.space.tuples(big_n).into_iter().filter(|t| s.space.tuple_degree(t) + 3 <= top + big_n).collect();
        tuples += ts.len();
        let bad = par::flat_map(&ts, |t| {
            let v = stasheff_value(s, t);
            if v.is_empty() {
                Vec::new()
            } else {
                vec![RelationFailure { arity: big_n, inputs: t.clone(), value: v }]
            }
        });
        failures.extend(bad);
    }
    RelationReport { checked, tuples, failures }
}

/// Components `φ_k` of degree `1 - k` between two structures on spaces of
/// equal shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinityMorphism {
    pub components: BTreeMap<usize, Cochain>,
}

impl AInfinityMorphism {
    /// `φ_1 = id`, `φ_2 = phi2`, higher components zero.
    pub fn identity_plus(space: &GradedSpace, phi2: Cochain) -> Self {
        let mut id = Cochain::new(1, 0);
        for i in 0..space.dim() {
            id.set(vec![i], vec![(i, one())]);
        }
        let mut components = BTreeMap::new();
        components.insert(1, id);
        components.insert(2, phi2);
        AInfinityMorphism { components }
    }

    /// `φ_1` from a matrix given as a cochain, higher components zero.
    pub fn linear(phi1: Cochain) -> Self {
        let mut components = BTreeMap::new();
        components.insert(1, phi1);
        AInfinityMorphism { components }
    }

    fn eval(&self, inputs: &[usize]) -> SparseVec {
        self.components.get(&inputs.len()).map(|c| c.value(inputs)).unwrap_or_default()
    }
}

/// All compositions of `n` into `j` positive parts.
fn compositions(n: usize, j: usize) -> Vec<Vec<usize>> {
    if j == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(j - 1) {
        for mut rest in compositions(n - first, j - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `μ_j` applied multilinearly to sparse arguments.
fn apply_multilinear(s: &AInfinityStructure, args: &[SparseVec]) -> SparseVec {
    let mut acc: SparseVec = Vec::new();
    let mut stack: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), one())];
    for arg in args {
        let mut next = Vec::new();
        for (idx, c) in &stack {
            for (i, x) in arg {
                let mut t = idx.clone();
                t.push(*i);
                next.push((t, c * x));
            }
        }
        stack = next;
    }
    for (t, c) in stack {
        let v = s.eval(&t);
        if !v.is_empty() {
            acc = sparse::axpy(&acc, &c, &v);
        }
    }
    acc
}

/// Left minus right side of the morphism relation on one tuple:
/// `Σ (-1)^{r+st} φ(1^r ⊗ μ_s ⊗ 1^t) - Σ (-1)^w μ̃_j(φ_{i_1} ⊗ … ⊗ φ_{i_j})`
/// with `w = Σ_k (j-k)(i_k-1)` plus Koszul signs.
pub fn morphism_defect(f: &AInfinityMorphism, src: &AInfinityStructure, tgt: &AInfinityStructure, t: &[usize]) -> SparseVec {
    let big_n = t.len();
    let mut acc: SparseVec = Vec::new();
    for ss in 2..=big_n {
        let mut deg_prefix = 0;
        for r in 0..=big_n - ss {
            if r > 0 {
                deg_prefix += src.space.degree(t[r - 1]);
            }
            let tt = big_n - ss - r;
            let inner = src.eval(&t[r..r + ss]);
            let sg = sign(r + ss * tt + ss * deg_prefix);
            for (i, c) in &inner {
                let mut outer = t[..r].to_vec();
                outer.push(*i);
                outer.extend_from_slice(&t[r + ss..]);
                let v = f.eval(&outer);
                if !v.is_empty() {
                    acc = sparse::axpy(&acc, &(&sg * c), &v);
                }
            }
        }
    }
    for j in 2..=big_n {
        for comp in compositions(big_n, j) {
            let mut w = 0;
            let mut start = 0;
            let mut deg_before = 0;
            let mut args = Vec::new();
            for (k, &ik) in comp.iter().enumerate() {
                w += (j - 1 - k) * (ik - 1) + (ik + 1) * deg_before;
                let block = &t[start..start + ik];
                args.push(f.eval(block));
                deg_before += src.space.tuple_degree(block);
                start += ik;
            }
            if args.iter().any(Vec::is_empty) {
                continue;
            }
            let v = apply_multilinear(tgt, &args);
            acc = sparse::axpy(&acc, &-sign(w), &v);
        }
    }
    acc
}

/// Checks the morphism identities of arities `1..=through`.
pub fn verify_morphism(f: &AInfinityMorphism, src: &AInfinityStructure, tgt: &AInfinityStructure, through: usize) -> RelationReport {
    let top = src.space.max_degree();
    let mut failures = Vec::new();
    let mut tuples = 0;
    let checked: Vec<usize> = (1..=through).collect();
    for &big_n in &checked {
        let ts: Vec<Vec<usize>> = src.space.tuples(big_n).into_iter().filter(|t| src.space.tuple_degree(t) + 2 <= top + big_n).collect();
        tuples += ts.len();
        failures.extend(par::flat_map(&ts, |t| {
            let v = morphism_defect(f, src, tgt, t);
            if v.is_empty() {
                Vec::new()
            } else {
                vec![RelationFailure { arity: big_n, inputs: t.clone(), value: v }]
            }
        }));
    }
    RelationReport { checked, tuples, failures }
}

/// `τ(α,β,γ,δ) = ⟨m_3(α,β,γ), δ⟩` on basis quadruples, nonzero entries only.
pub fn tau_tensor(s: &AInfinityStructure, ring: &CohomologyRing) -> BTreeMap<[usize; 4], Scalar> {
    let mut out = BTreeMap::new();
    let Some(m3) = s.op(3) else { return out };
    for (t, v) in m3.entries() {
        for d in 0..ring.dim() {
            let x = ring.pair(v, &vec![(d, one())]);
            if !x.is_zero() {
                out.insert([t[0], t[1], t[2], d], x);
            }
        }
    }
    out
}

/// Recovers `m_3` from `τ` using the non-degenerate pairing on cohomology.
pub fn mu3_from_tau(tau: &BTreeMap<[usize; 4], Scalar>, ring: &CohomologyRing) -> Cochain {
    let sp = &ring.space;
    let mut out = Cochain::new(3, -1);
    let mut grouped: BTreeMap<Vec<usize>, Vec<(usize, Scalar)>> = BTreeMap::new();
    for (k, x) in tau {
        grouped.entry(k[..3].to_vec()).or_default().push((k[3], x.clone()));
    }
    for (t, vals) in grouped {
        let deg = sp.tuple_degree(&t) - 1;
        let outs = sp.in_degree(deg);
        let duals = sp.in_degree(ring.top - deg);
        // Solve Σ_o c_o ⟨o, d⟩ = τ(t, d) for every dual d.
        let g = ring.gram(deg);
        let rhs: Vec<Scalar> = duals.iter().map(|d| vals.iter().find(|(e, _)| e == d).map(|(_, x)| x.clone()).unwrap_or_else(Scalar::zero)).collect();
        let c = g.transpose().solve(&rhs).expect("non-degenerate pairing");
        out.set(t, outs.iter().zip(c).filter(|(_, x)| !x.is_zero()).map(|(o, x)| (*o, x)).collect());
    }
    out
}
