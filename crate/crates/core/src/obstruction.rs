//! Hochschild and Harrison cochains on a cohomology ring, the formality
//! decision for `μ_3`, and comparison of two transferred structures along a
//! ring isomorphism.
//!
//! The Hochschild differential of a `p`-cochain `f` of internal degree `|f|`:
//!
//! ```text
//! (d f)(a_1,…,a_{p+1}) = -(-1)^{|f||a_1|} a_1 f(a_2,…)
//!                      + Σ_{i=1}^{p} (-1)^{i-1} f(…, a_i a_{i+1}, …)
//!                      + (-1)^p f(a_1,…,a_p) a_{p+1}
//! ```
//!
//! With this sign, `(id, φ_2)` is an A∞-morphism from `μ_3` to
//! `μ_3 + d φ_2` when both share `m_2`.

use crate::cochain::{Cochain, GradedSpace};
use crate::cohomology::CohomologyRing;
use crate::linalg::Matrix;
use crate::par;
use crate::scalar::{one, sign, zero, Scalar};
use crate::sparse::{self, SpanResult, SpanSolver, SparseVec};
use crate::transfer::AInfinityStructure;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

fn parity(e: i64) -> usize {
    e.rem_euclid(2) as usize
}

fn basis(i: usize) -> SparseVec {
    vec![(i, one())]
}

/// Multilinear extension of a cochain to sparse arguments.
pub fn apply(c: &Cochain, args: &[SparseVec]) -> SparseVec {
    let mut stack: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), one())];
    for arg in args {
        let mut next = Vec::new();
        for (t, x) in &stack {
            for (i, y) in arg {
                let mut u = t.clone();
                u.push(*i);
                next.push((u, x * y));
            }
        }
        stack = next;
    }
    let mut acc = Vec::new();
    for (t, x) in stack {
        if let Some(v) = c.get(&t) {
            acc = sparse::axpy(&acc, &x, v);
        }
    }
    acc
}

/// `d_Hoch f` evaluated on one tuple.
fn hochschild_value(f: &Cochain, ring: &CohomologyRing, t: &[usize]) -> SparseVec {
    let p = f.arity();
    let sp = &ring.space;
    let fp = parity(f.degree());
    let mut acc: SparseVec = Vec::new();
    let left = ring.product(&basis(t[0]), &f.value(&t[1..]));
    acc = sparse::axpy(&acc, &-sign(fp * sp.degree(t[0])), &left);
    for i in 0..p {
        let prod = ring.product(&basis(t[i]), &basis(t[i + 1]));
        let mut args: Vec<SparseVec> = t[..i].iter().map(|&j| basis(j)).collect();
        args.push(prod);
        args.extend(t[i + 2..].iter().map(|&j| basis(j)));
        acc = sparse::axpy(&acc, &sign(i), &apply(f, &args));
    }
    let right = ring.product(&f.value(&t[..p]), &basis(t[p]));
    sparse::axpy(&acc, &sign(p), &right)
}

/// The Hochschild coboundary of `c` with respect to the product of `ring`.
pub fn hochschild_differential(c: &Cochain, ring: &CohomologyRing) -> Cochain {
    let sp = &ring.space;
    let tuples = sp.admissible_tuples(c.arity() + 1, c.degree());
    let rows = par::map(&tuples, |t| (t.clone(), hochschild_value(c, ring, t)));
    let mut out = Cochain::new(c.arity() + 1, c.degree());
    for (t, v) in rows {
        out.set(t, v);
    }
    out
}

/// Left side of the signed 3-term shuffle identity on `(a, b, c)`.
pub fn harrison_value(c: &Cochain, sp: &GradedSpace, t: &[usize]) -> SparseVec {
    let (a, b, cc) = (sp.degree(t[0]), sp.degree(t[1]), sp.degree(t[2]));
    let mut acc = c.value(t);
    acc = sparse::axpy(&acc, &-sign(a * b), &c.value(&[t[1], t[0], t[2]]));
    sparse::axpy(&acc, &sign(a * (b + cc)), &c.value(&[t[1], t[2], t[0]]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleChecks {
    pub hochschild_cocycle: bool,
    pub harrison: bool,
    /// First tuple violating each check, if any.
    pub hochschild_witness: Option<Vec<usize>>,
    pub harrison_witness: Option<Vec<usize>>,
}

pub fn cocycle_checks(mu3: &Cochain, ring: &CohomologyRing) -> CocycleChecks {
    let d = hochschild_differential(mu3, ring);
    let hochschild_witness = d.entries().next().map(|(t, _)| t.clone());
    let sp = &ring.space;
    let harrison_witness = sp.admissible_tuples(3, mu3.degree()).into_iter().find(|t| !harrison_value(mu3, sp, t).is_empty());
    CocycleChecks {
        hochschild_cocycle: hochschild_witness.is_none(),
        harrison: harrison_witness.is_none(),
        hochschild_witness,
        harrison_witness,
    }
}

/// Sum of coefficient products over matching table entries.
pub fn pair_cochains(f: &Cochain, c: &Cochain) -> Scalar {
    let mut s = zero();
    for (t, v) in f.entries() {
        s += sparse::dot(v, &c.value(t));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formality {
    /// `μ_3 = d_Hoch φ_2`.
    Formal(Cochain),
    /// A functional on trilinear cochains, given as a table of coefficients,
    /// vanishing on all coboundaries and nonzero on `μ_3`.
    NonFormal(Cochain),
}

impl Formality {
    pub fn is_formal(&self) -> bool {
        matches!(self, Formality::Formal(_))
    }
}

/// Unit bilinear cochains of degree `-1`.
fn bilinear_basis(sp: &GradedSpace) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    for t in sp.admissible_tuples(2, -1) {
        let deg = sp.tuple_degree(&t) - 1;
        for o in sp.in_degree(deg) {
            out.push((t.clone(), o));
        }
    }
    out
}

fn unit_cochain(t: &[usize], o: usize) -> Cochain {
    let mut c = Cochain::new(2, -1);
    c.set(t.to_vec(), basis(o));
    c
}

/// Coordinates of trilinear cochains as sparse vectors.
#[derive(Default)]
struct Coords {
    index: BTreeMap<(Vec<usize>, usize), usize>,
    keys: Vec<(Vec<usize>, usize)>,
}

impl Coords {
    fn vector(&mut self, c: &Cochain) -> SparseVec {
        let mut pairs = Vec::new();
        for (t, v) in c.entries() {
            for (o, x) in v {
                let key = (t.clone(), *o);
                let i = match self.index.get(&key) {
                    Some(&i) => i,
                    None => {
                        self.index.insert(key.clone(), self.keys.len());
                        self.keys.push(key);
                        self.keys.len() - 1
                    }
                };
                pairs.push((i, x.clone()));
            }
        }
        sparse::from_pairs(pairs)
    }

    fn cochain(&self, f: &SparseVec) -> Cochain {
        let mut c = Cochain::new(3, -1);
        for (i, x) in f {
            let (t, o) = &self.keys[*i];
            c.add_to(t.clone(), &basis(*o), x);
        }
        c
    }
}

/// Decides whether `target` is a Hochschild coboundary of a bilinear
/// degree `-1` cochain.
pub fn solve_coboundary(target: &Cochain, ring: &CohomologyRing) -> Formality {
    let sp = &ring.space;
    let unknowns = bilinear_basis(sp);
    let images = par::map(&unknowns, |(t, o)| hochschild_differential(&unit_cochain(t, *o), ring));
    let mut coords = Coords::default();
    let mut solver = SpanSolver::new();
    for (label, img) in images.iter().enumerate() {
        let v = coords.vector(img);
        solver.add(label, &v);
    }
    let tv = coords.vector(target);
    match solver.decide(&tv) {
        SpanResult::InSpan(coeffs) => {
            let mut phi = Cochain::new(2, -1);
            for (label, x) in coeffs {
                let (t, o) = &unknowns[label];
                phi.add_to(t.clone(), &basis(*o), &x);
            }
            Formality::Formal(phi)
        }
        SpanResult::Separated(f) => Formality::NonFormal(coords.cochain(&f)),
    }
}

/// Decides whether `μ_3` is Hochschild-exact.
pub fn formality_decision(mu3: &Cochain, ring: &CohomologyRing) -> Formality {
    solve_coboundary(mu3, ring)
}

/// Re-checks a certificate: `target = d φ_2`, or the functional kills every
/// coboundary and not the target.
pub fn verify_certificate(target: &Cochain, ring: &CohomologyRing, cert: &Formality) -> bool {
    match cert {
        Formality::Formal(phi) => hochschild_differential(phi, ring) == *target,
        Formality::NonFormal(f) => {
            if pair_cochains(f, target).is_zero() {
                return false;
            }
            bilinear_basis(&ring.space)
                .iter()
                .all(|(t, o)| pair_cochains(f, &hochschild_differential(&unit_cochain(t, *o), ring)).is_zero())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// `φ^{-1} μ_3^{(2)}(φ⊗φ⊗φ) - μ_3^{(1)} = d_Hoch φ_2`.
    Equivalent(Cochain),
    Distinct(Cochain),
    PhiInvalid(String),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("dimension mismatch: {0} vs {1}")]
pub struct DimensionMismatch(pub usize, pub usize);

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comparison::Equivalent(_) => f.write_str("equivalent"),
            Comparison::Distinct(_) => f.write_str("distinct"),
            Comparison::PhiInvalid(why) => write!(f, "phi-invalid: {why}"),
        }
    }
}

fn phi_matrix(phi: &Cochain, n1: usize, n2: usize) -> Matrix {
    let mut m = Matrix::zeros(n2, n1);
    for j in 0..n1 {
        for (i, x) in phi.value(&[j]) {
            m.set(i, j, x);
        }
    }
    m
}

/// Checks that `phi` is a degree-preserving unital ring isomorphism.
pub fn validate_ring_iso(phi: &Cochain, r1: &CohomologyRing, r2: &CohomologyRing) -> Result<(), String> {
    if phi.arity() != 1 || phi.degree() != 0 {
        return Err("phi must be linear of degree 0".into());
    }
    let (s1, s2) = (&r1.space, &r2.space);
    for j in 0..s1.dim() {
        for (i, _) in phi.value(&[j]) {
            if s2.degree(i) != s1.degree(j) {
                return Err(format!("phi({}) leaves degree {}", s1.name(j), s1.degree(j)));
            }
        }
    }
    let m = phi_matrix(phi, s1.dim(), s2.dim());
    if m.rank() != s1.dim() || s1.dim() != s2.dim() {
        return Err("phi is not bijective".into());
    }
    if apply(phi, &[r1.unit.clone()]) != r2.unit {
        return Err("phi is not unital".into());
    }
    for i in 0..s1.dim() {
        for j in 0..s1.dim() {
            let lhs = apply(phi, &[r1.product(&basis(i), &basis(j))]);
            let rhs = r2.product(&phi.value(&[i]), &phi.value(&[j]));
            if lhs != rhs {
                return Err(format!("phi({}·{}) differs from phi({})·phi({})", s1.name(i), s1.name(j), s1.name(i), s1.name(j)));
            }
        }
    }
    Ok(())
}

/// Pulls `μ_3` of the target back along `φ`: `φ^{-1} μ(φ⊗φ⊗φ)`.
pub fn pullback_mu3(mu3: &Cochain, phi: &Cochain, space: &GradedSpace) -> Cochain {
    let n = space.dim();
    let inv = phi_matrix(phi, n, n).inverse().expect("invertible phi");
    let mut out = Cochain::new(3, -1);
    for t in space.admissible_tuples(3, -1) {
        let args: Vec<SparseVec> = t.iter().map(|&i| phi.value(&[i])).collect();
        let v = apply(mu3, &args);
        if v.is_empty() {
            continue;
        }
        let mut w = vec![zero(); n];
        for (i, x) in &v {
            w[*i] = x.clone();
        }
        let back = inv.apply(&w);
        out.set(t, back.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect());
    }
    out
}

/// Compares two transferred structures along a user-supplied isomorphism.
pub fn compare_classes(
    s1: &AInfinityStructure,
    r1: &CohomologyRing,
    s2: &AInfinityStructure,
    r2: &CohomologyRing,
    phi: &Cochain,
) -> Result<Comparison, DimensionMismatch> {
    if r1.dim() != r2.dim() {
        return Err(DimensionMismatch(r1.dim(), r2.dim()));
    }
    if let Err(why) = validate_ring_iso(phi, r1, r2) {
        return Ok(Comparison::PhiInvalid(why));
    }
    let diff = pullback_mu3(&s2.mu3(), phi, &r1.space).sub(&s1.mu3());
    Ok(match solve_coboundary(&diff, r1) {
        Formality::Formal(phi2) => Comparison::Equivalent(phi2),
        Formality::NonFormal(f) => Comparison::Distinct(f),
    })
}

/// The identity map on a graded space as a linear cochain.
pub fn identity(sp: &GradedSpace) -> Cochain {
    let mut c = Cochain::new(1, 0);
    for i in 0..sp.dim() {
        c.set(vec![i], basis(i));
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::hodge::find_hodge;
    use crate::scalar::int;
    use crate::transfer::{transfer_trees, verify_morphism, AInfinityMorphism, HarmonicBasis};

    fn transferred(name: &str) -> (AInfinityStructure, CohomologyRing) {
        let a = catalog::lookup(name).unwrap().algebra;
        let dec = find_hodge(&a).unwrap();
        let s = transfer_trees(&dec, 3);
        let ring = HarmonicBasis::new(&dec).ring(&a);
        (s, ring)
    }

    /// Deterministic sparse cochain with small integer coefficients.
    fn sample(sp: &GradedSpace, arity: usize, degree: i64, seed: usize) -> Cochain {
        let mut c = Cochain::new(arity, degree);
        for (k, t) in sp.admissible_tuples(arity, degree).into_iter().enumerate() {
            let out = sp.tuple_degree(&t) as i64 + degree;
            for o in sp.in_degree(out as usize) {
                let x = ((k * 7 + o * 3 + seed * 11) % 5) as i64 - 2;
                if x != 0 {
                    c.add_to(t.clone(), &basis(o), &int(x));
                }
            }
        }
        c
    }

    #[test]
    fn zero_cochain() {
        let (_, ring) = transferred("cp2");
        assert!(hochschild_differential(&Cochain::new(2, -1), &ring).is_zero());
    }

    #[test]
    fn d_squared_vanishes() {
        for name in ["nonformal-7", "heisenberg-3", "cp3", "torus-2"] {
            let (_, ring) = transferred(name);
            for (arity, degree, seed) in [(1, 0, 1), (1, -1, 2), (2, -1, 3), (2, 0, 4), (3, -1, 5)] {
                let c = sample(&ring.space, arity, degree, seed);
                let dd = hochschild_differential(&hochschild_differential(&c, &ring), &ring);
                assert!(dd.is_zero(), "{name} arity {arity} degree {degree}");
            }
        }
    }

    #[test]
    fn transferred_mu3_is_harrison_cocycle() {
        for e in catalog::catalog().into_iter().filter(|e| e.name != "nonhodge-4") {
            let (s, ring) = transferred(&e.name);
            let c = cocycle_checks(&s.mu3(), &ring);
            assert!(c.hochschild_cocycle && c.harrison, "{}: {:?}", e.name, c);
        }
    }

    #[test]
    fn random_table_is_not_a_cocycle() {
        let (_, ring) = transferred("nonformal-7");
        let c = cocycle_checks(&sample(&ring.space, 3, -1, 7), &ring);
        assert!(!c.hochschild_cocycle && !c.harrison);
    }

    #[test]
    fn nonformal_certificate() {
        let (s, ring) = transferred("nonformal-7");
        let d = formality_decision(&s.mu3(), &ring);
        assert!(!d.is_formal());
        assert!(verify_certificate(&s.mu3(), &ring, &d));
    }

    #[test]
    fn planted_coboundary() {
        let (_, ring) = transferred("nonformal-7");
        let psi = sample(&ring.space, 2, -1, 2);
        let target = hochschild_differential(&psi, &ring);
        let d = formality_decision(&target, &ring);
        assert!(d.is_formal());
        assert!(verify_certificate(&target, &ring, &d));
    }

    #[test]
    fn coboundary_shift_is_a_morphism() {
        let (s, ring) = transferred("nonformal-7");
        let phi2 = sample(&ring.space, 2, -1, 4);
        let mut t = s.clone();
        t.ops.insert(3, s.mu3().axpy(&one(), &hochschild_differential(&phi2, &ring)));
        let f = AInfinityMorphism::identity_plus(&s.space, phi2);
        assert!(verify_morphism(&f, &s, &t, 3).is_ok());
        let g = AInfinityMorphism::identity_plus(&s.space, Cochain::new(2, -1));
        assert!(!verify_morphism(&g, &s, &t, 3).is_ok());
    }

    #[test]
    fn compare_with_itself() {
        let (s, ring) = transferred("nonformal-7");
        let id = identity(&ring.space);
        assert!(matches!(compare_classes(&s, &ring, &s, &ring, &id).unwrap(), Comparison::Equivalent(p) if p.is_zero()));
        let mut bad = id.clone();
        bad.set(vec![1], vec![(1, int(2))]);
        assert!(matches!(compare_classes(&s, &ring, &s, &ring, &bad).unwrap(), Comparison::PhiInvalid(_)));
    }
}
