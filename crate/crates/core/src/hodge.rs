//! Hodge-type decompositions `A^k = dA^{k-1} ⊕ ℋ^k ⊕ ℬ^k` with
//! `⟨ℋ ⊕ ℬ, ℬ⟩ = 0`, the partial inverse `d⁻` and the three projectors.

use crate::cohomology::{compute_cohomology, validate_poincare};
use crate::dgca::Dgca;
use crate::ideal::null_ideal;
use crate::linalg::{self, Echelon, Matrix};
use crate::scalar::{frac, zero, Scalar};
use crate::subspace::{GradedMap, SubspaceFamily};
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HodgeError {
    #[error("pairing is degenerate on cohomology in degrees {0:?}")]
    NotPoincare(Vec<usize>),
    #[error("family has {found} degrees, algebra has {expected}")]
    Shape { expected: usize, found: usize },
    #[error("degree {degree}: harmonic vector {witness} is not closed")]
    NotClosed { degree: usize, witness: String },
    #[error("degree {degree}: dA, H and B do not form a direct sum decomposition ({detail})")]
    DirectSum { degree: usize, detail: String },
    #[error("degree {degree}: d is not injective on B, {witness} maps into ker d")]
    NotHarmonic { degree: usize, witness: String },
    #[error("degrees {degree}/{dual}: <{left}, {right}> = {value}, expected 0")]
    Orthogonality { degree: usize, dual: usize, left: String, right: String, value: String },
}

/// A verified decomposition together with its derived maps.
#[derive(Clone, Debug)]
pub struct HodgeDecomposition {
    algebra: Dgca,
    harmonic: SubspaceFamily,
    complement: SubspaceFamily,
    exact: SubspaceFamily,
    d_minus: GradedMap,
    pr_harmonic: GradedMap,
    pr_exact: GradedMap,
    pr_complement: GradedMap,
}

fn local_pair(a: &Dgca, k: usize, u: &[Scalar], j: usize, v: &[Scalar]) -> Scalar {
    a.pair(&a.embed(k, u), &a.embed(j, v))
}

/// Checks the decomposition conditions degree by degree and materializes
/// `d⁻` and the projectors.
pub fn verify_hodge(a: &Dgca, h: &SubspaceFamily, b: &SubspaceFamily) -> Result<HodgeDecomposition, HodgeError> {
    let report = validate_poincare(a);
    if !report.is_ok() {
        return Err(HodgeError::NotPoincare(report.degenerate));
    }
    let n = a.top_degree();
    for f in [h, b] {
        if f.dims().len() != n + 1 {
            return Err(HodgeError::Shape { expected: n + 1, found: f.dims().len() });
        }
    }
    let mut exact = SubspaceFamily::empty(n);
    for k in 0..=n {
        let dim = a.dim(k);
        for v in h.get(k) {
            if !linalg::is_zero_vec(&a.d_matrix(k).apply(v)) {
                return Err(HodgeError::NotClosed { degree: k, witness: a.show(&a.embed(k, v)) });
            }
        }
        let dk = a.d_matrix(k);
        let mut image = Echelon::new(a.dim(k + 1));
        for v in b.get(k) {
            let dv = dk.apply(v);
            if !image.insert(&dv) {
                return Err(HodgeError::NotHarmonic { degree: k, witness: a.show(&a.embed(k, v)) });
            }
        }
        let ex: Vec<Vec<Scalar>> = if k == 0 { Vec::new() } else { b.get(k - 1).iter().map(|v| a.d_matrix(k - 1).apply(v)).collect() };
        let total = ex.len() + h.get(k).len() + b.get(k).len();
        if total != dim {
            return Err(HodgeError::DirectSum {
                degree: k,
                detail: format!("dimensions {} + {} + {} != {}", ex.len(), h.get(k).len(), b.get(k).len(), dim),
            });
        }
        let mut cols = ex.clone();
        cols.extend(h.get(k).iter().cloned());
        cols.extend(b.get(k).iter().cloned());
        let mut e = Echelon::new(dim);
        for c in &cols {
            if !e.insert(c) {
                return Err(HodgeError::DirectSum { degree: k, detail: format!("{} is dependent", a.show(&a.embed(k, c))) });
            }
        }
        exact.set(k, ex);
    }
    for k in 0..=n {
        let j = n - k;
        for u in h.get(k).iter().chain(b.get(k)) {
            for v in b.get(j) {
                let x = local_pair(a, k, u, j, v);
                if !x.is_zero() {
                    return Err(HodgeError::Orthogonality {
                        degree: k,
                        dual: j,
                        left: a.show(&a.embed(k, u)),
                        right: a.show(&a.embed(j, v)),
                        value: crate::scalar::format(&x),
                    });
                }
            }
        }
    }
    Ok(materialize(a, h, b, exact))
}

fn rows_of(m: &Matrix, range: std::ops::Range<usize>) -> Matrix {
    let mut out = Matrix::zeros(range.len(), m.cols());
    for (r, i) in range.enumerate() {
        for c in 0..m.cols() {
            out.set(r, c, m.get(i, c).clone());
        }
    }
    out
}

fn materialize(a: &Dgca, h: &SubspaceFamily, b: &SubspaceFamily, exact: SubspaceFamily) -> HodgeDecomposition {
    let n = a.top_degree();
    let mut dm = Vec::new();
    let mut ph = Vec::new();
    let mut pe = Vec::new();
    let mut pb = Vec::new();
    for k in 0..=n {
        let dim = a.dim(k);
        let (e, hh) = (exact.get(k).len(), h.get(k).len());
        let mut cols = exact.get(k).to_vec();
        cols.extend(h.get(k).iter().cloned());
        cols.extend(b.get(k).iter().cloned());
        let tinv = Matrix::from_columns(dim, &cols).inverse().expect("verified direct sum");
        let ce = rows_of(&tinv, 0..e);
        let ch = rows_of(&tinv, e..e + hh);
        let cb = rows_of(&tinv, e + hh..dim);
        let prev = if k == 0 { 0 } else { a.dim(k - 1) };
        dm.push(if k == 0 { Matrix::zeros(0, dim) } else { Matrix::from_columns(prev, b.get(k - 1)).mul(&ce) });
        pe.push(Matrix::from_columns(dim, exact.get(k)).mul(&ce));
        ph.push(Matrix::from_columns(dim, h.get(k)).mul(&ch));
        pb.push(Matrix::from_columns(dim, b.get(k)).mul(&cb));
    }
    HodgeDecomposition {
        algebra: a.clone(),
        harmonic: h.clone(),
        complement: b.clone(),
        exact,
        d_minus: GradedMap::new(-1, dm),
        pr_harmonic: GradedMap::new(0, ph),
        pr_exact: GradedMap::new(0, pe),
        pr_complement: GradedMap::new(0, pb),
    }
}

impl HodgeDecomposition {
    pub fn algebra(&self) -> &Dgca {
        &self.algebra
    }

    pub fn harmonic(&self) -> &SubspaceFamily {
        &self.harmonic
    }

    pub fn complement(&self) -> &SubspaceFamily {
        &self.complement
    }

    pub fn exact(&self) -> &SubspaceFamily {
        &self.exact
    }

    pub fn d_minus(&self) -> &GradedMap {
        &self.d_minus
    }

    pub fn pr_harmonic(&self) -> &GradedMap {
        &self.pr_harmonic
    }

    pub fn pr_exact(&self) -> &GradedMap {
        &self.pr_exact
    }

    pub fn pr_complement(&self) -> &GradedMap {
        &self.pr_complement
    }

    /// `d⁻` of a global vector: the inverse of `d: ℬ → dA` on the exact
    /// component, zero on `ℋ ⊕ ℬ`.
    pub fn dminus_apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.d_minus.apply(&self.algebra, v)
    }

    pub fn project_harmonic(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.pr_harmonic.apply(&self.algebra, v)
    }

    pub fn project_exact(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.pr_exact.apply(&self.algebra, v)
    }

    pub fn project_complement(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.pr_complement.apply(&self.algebra, v)
    }

    /// Global basis of `ℋ^k`.
    pub fn harmonic_basis(&self, k: usize) -> Vec<Vec<Scalar>> {
        self.harmonic.global(&self.algebra, k)
    }

    /// Checks the operator identities on every basis vector: `dd⁻d = d`,
    /// `d⁻dd⁻ = d⁻`, `(d⁻)² = 0`, `pr_ℋ = 1 - (dd⁻ + d⁻d)`, `pr_dA = dd⁻`,
    /// `pr_ℬ = d⁻d`, and the orthogonality of closed against exact and of
    /// `ker d⁻` against `im d⁻`. Returns the names of failed identities.
    pub fn identity_failures(&self) -> Vec<String> {
        let a = &self.algebra;
        let d = |v: &[Scalar]| a.d(v);
        let dm = |v: &[Scalar]| self.dminus_apply(v);
        let mut fails = Vec::new();
        let mut note = |ok: bool, name: &str| {
            if !ok && !fails.iter().any(|f| f == name) {
                fails.push(name.to_string());
            }
        };
        for i in 0..a.len() {
            let e = a.basis_vector(i);
            note(d(&dm(&d(&e))) == d(&e), "d d⁻ d = d");
            note(dm(&d(&dm(&e))) == dm(&e), "d⁻ d d⁻ = d⁻");
            note(linalg::is_zero_vec(&dm(&dm(&e))), "d⁻ d⁻ = 0");
            let mut comm = d(&dm(&e));
            linalg::add_scaled(&mut comm, &crate::scalar::one(), &dm(&d(&e)));
            let mut rest = e.clone();
            linalg::add_scaled(&mut rest, &crate::scalar::int(-1), &comm);
            note(self.project_harmonic(&e) == rest, "pr_H = 1 - [d, d⁻]");
            note(self.project_exact(&e) == d(&dm(&e)), "pr_dA = d d⁻");
            note(self.project_complement(&e) == dm(&d(&e)), "pr_B = d⁻ d");
            let ph = self.project_harmonic(&e);
            let pe = self.project_exact(&e);
            let pb = self.project_complement(&e);
            let mut sum = ph.clone();
            linalg::add_scaled(&mut sum, &crate::scalar::one(), &pe);
            linalg::add_scaled(&mut sum, &crate::scalar::one(), &pb);
            note(sum == e, "projectors sum to 1");
            note(self.project_harmonic(&ph) == ph && self.project_exact(&pe) == pe && self.project_complement(&pb) == pb, "projectors idempotent");
            note(
                linalg::is_zero_vec(&self.project_harmonic(&pe))
                    && linalg::is_zero_vec(&self.project_exact(&pb))
                    && linalg::is_zero_vec(&self.project_complement(&ph)),
                "projectors annihilate each other",
            );
        }
        let n = a.top_degree();
        let cohom = compute_cohomology(a);
        for k in 0..=n {
            let j = n - k;
            for z in cohom.cocycles(k) {
                for x in cohom.exact(j) {
                    note(local_pair(a, k, z, j, x).is_zero(), "<closed, exact> = 0");
                }
            }
            let kernel: Vec<Vec<Scalar>> = self.harmonic.get(k).iter().chain(self.complement.get(k)).cloned().collect();
            let image: Vec<Vec<Scalar>> = (0..a.dim(j + 1))
                .map(|i| a.restrict(j, &self.dminus_apply(&a.embed(j + 1, &linalg::unit_vector(a.dim(j + 1), i)))))
                .collect();
            for u in &kernel {
                for v in &image {
                    note(local_pair(a, k, u, j, v).is_zero(), "<ker d⁻, im d⁻> = 0");
                }
            }
        }
        fails
    }

    /// Checks `d⁻(A_⊥) ⊆ A_⊥` and `A_⊥ = dd⁻A_⊥ ⊕ d⁻dA_⊥`.
    pub fn splits_null_ideal(&self) -> bool {
        let a = &self.algebra;
        let perp = null_ideal(a);
        for k in 0..=a.top_degree() {
            for v in perp.global(a, k) {
                let dmv = self.dminus_apply(&v);
                if !perp.contains_global(a, &dmv) {
                    return false;
                }
                let x = a.d(&dmv);
                let y = self.dminus_apply(&a.d(&v));
                if !perp.contains_global(a, &x) || !perp.contains_global(a, &y) {
                    return false;
                }
                let mut s = x;
                linalg::add_scaled(&mut s, &crate::scalar::one(), &y);
                if s != v {
                    return false;
                }
            }
        }
        true
    }

    /// Rank of `pr_ℬ = d⁻d` per degree.
    pub fn complement_ranks(&self) -> Vec<usize> {
        (0..=self.algebra.top_degree()).map(|k| self.pr_complement.block(k).rank()).collect()
    }
}

/// Cohomology of the null ideal `A_⊥` under `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AperpReport {
    pub acyclic: bool,
    pub betti: Vec<usize>,
    /// One non-exact cocycle of `A_⊥` in each degree with nonzero cohomology.
    pub witnesses: Vec<(usize, Vec<Scalar>)>,
}

/// Computes `H(A_⊥, d)`; a nonzero result rules out every Hodge-type
/// decomposition.
pub fn aperp_acyclicity(a: &Dgca) -> AperpReport {
    let perp = null_ideal(a);
    let n = a.top_degree();
    let mut betti = Vec::new();
    let mut witnesses = Vec::new();
    for k in 0..=n {
        let p = perp.get(k);
        if p.is_empty() {
            betti.push(0);
            continue;
        }
        let dk = a.d_matrix(k);
        let images: Vec<Vec<Scalar>> = p.iter().map(|v| dk.apply(v)).collect();
        let ker = Matrix::from_columns(a.dim(k + 1), &images).kernel();
        let cocycles: Vec<Vec<Scalar>> = ker.iter().map(|c| linalg::combine(a.dim(k), c, p)).collect();
        let exact: Vec<Vec<Scalar>> = if k == 0 { Vec::new() } else { perp.get(k - 1).iter().map(|v| a.d_matrix(k - 1).apply(v)).collect() };
        let fresh = linalg::extend_basis(a.dim(k), &exact, &cocycles);
        betti.push(fresh.len());
        if let Some(w) = fresh.first() {
            witnesses.push((k, a.embed(k, w)));
        }
    }
    AperpReport { acyclic: betti.iter().all(|&b| b == 0), betti, witnesses }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotFoundReason {
    /// `A_⊥` has cohomology; no decomposition exists.
    Obstruction,
    /// The construction did not succeed; existence is undecided.
    SearchFailed,
}

impl fmt::Display for NotFoundReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NotFoundReason::Obstruction => "obstruction",
            NotFoundReason::SearchFailed => "search-failed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("no decomposition found ({reason}): {detail}")]
pub struct NotFound {
    pub reason: NotFoundReason,
    pub detail: String,
}

fn search_failed(detail: String) -> NotFound {
    NotFound { reason: NotFoundReason::SearchFailed, detail }
}

/// Replaces each `b` by `b - h(b)` with `h(b) ∈ ℋ^k` pairing like `b`
/// against `ℋ^{n-k}`.
fn harmonic_correction(a: &Dgca, k: usize, hk: &[Vec<Scalar>], hdual: &[Vec<Scalar>], bs: Vec<Vec<Scalar>>) -> Option<Vec<Vec<Scalar>>> {
    if hk.is_empty() {
        return Some(bs);
    }
    let j = a.top_degree() - k;
    // Row r: pairing against the r-th dual harmonic vector.
    let rows: Vec<Vec<Scalar>> = hdual.iter().map(|y| hk.iter().map(|x| local_pair(a, k, x, j, y)).collect()).collect();
    let g = Matrix::from_rows(hk.len(), rows);
    bs.into_iter()
        .map(|b| {
            let rhs: Vec<Scalar> = hdual.iter().map(|y| local_pair(a, k, &b, j, y)).collect();
            let c = g.solve(&rhs)?;
            let mut out = b;
            linalg::add_scaled(&mut out, &crate::scalar::int(-1), &linalg::combine(a.dim(k), &c, hk));
            Some(out)
        })
        .collect()
}

/// Constructs a decomposition by exact linear algebra, or reports why none
/// was found.
pub fn find_hodge(a: &Dgca) -> Result<HodgeDecomposition, NotFound> {
    let report = validate_poincare(a);
    if !report.is_ok() {
        return Err(search_failed(format!("pairing is degenerate on cohomology in degrees {:?}", report.degenerate)));
    }
    let ap = aperp_acyclicity(a);
    if !ap.acyclic {
        let (k, w) = &ap.witnesses[0];
        return Err(NotFound {
            reason: NotFoundReason::Obstruction,
            detail: format!("null ideal has cohomology {:?}; {} is a non-exact cocycle in degree {}", ap.betti, a.show(w), k),
        });
    }
    let n = a.top_degree();
    let cohom = compute_cohomology(a);
    let mut h = SubspaceFamily::empty(n);
    for k in 0..=n {
        h.set(k, cohom.classes(k).map(|i| a.restrict(k, cohom.rep(i))).collect());
    }
    let mut b = SubspaceFamily::empty(n);
    // Below and at the middle: echelon complement of ker d, corrected.
    for k in 0..=n {
        if 2 * k > n {
            continue;
        }
        let b0 = linalg::complement(a.dim(k), cohom.cocycles(k));
        let corrected = harmonic_correction(a, k, h.get(k), h.get(n - k), b0)
            .ok_or_else(|| search_failed(format!("degree {k}: harmonic pairing is singular")))?;
        let fixed = if 2 * k == n { isotropic_correction(a, k, cohom.exact(k), corrected)? } else { corrected };
        b.set(k, fixed);
    }
    // Above the middle: complements of ker d orthogonal to ℋ ⊕ ℬ in the dual degree.
    for k in 0..=n {
        if 2 * k <= n {
            continue;
        }
        let j = n - k;
        let dim = a.dim(k);
        let target = dim - cohom.cocycles(k).len();
        let dual: Vec<Vec<Scalar>> = h.get(j).iter().chain(b.get(j)).cloned().collect();
        let rows: Vec<Vec<Scalar>> =
            dual.iter().map(|u| (0..dim).map(|i| local_pair(a, j, u, k, &linalg::unit_vector(dim, i))).collect()).collect();
        let allowed = if rows.is_empty() { (0..dim).map(|i| linalg::unit_vector(dim, i)).collect() } else { Matrix::from_rows(dim, rows).kernel() };
        let chosen = linalg::extend_basis(dim, cohom.cocycles(k), &allowed);
        if chosen.len() < target {
            return Err(search_failed(format!(
                "degree {k}: the orthogonal of H + B in degree {j} meets a complement of ker d in dimension {} < {target}",
                chosen.len()
            )));
        }
        b.set(k, chosen);
    }
    verify_hodge(a, &h, &b).map_err(|e| search_failed(format!("constructed candidate rejected: {e}")))
}

/// Middle degree: finds `c_i ∈ dA^{k-1}` with `{b_i + c_i}` isotropic. The
/// conditions are linear in the `c_i` because exact forms pair to zero.
fn isotropic_correction(a: &Dgca, k: usize, exact: &[Vec<Scalar>], bs: Vec<Vec<Scalar>>) -> Result<Vec<Vec<Scalar>>, NotFound> {
    let m = bs.len();
    let e = exact.len();
    let unknowns = m * e;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..m {
        for j in i..m {
            let mut row = vec![zero(); unknowns];
            // <b_i, c_j> + <c_i, b_j>
            for t in 0..e {
                row[j * e + t] += local_pair(a, k, &bs[i], k, &exact[t]);
                row[i * e + t] += local_pair(a, k, &exact[t], k, &bs[j]);
            }
            rows.push(row);
            rhs.push(-local_pair(a, k, &bs[i], k, &bs[j]));
        }
    }
    if rows.is_empty() {
        return Ok(bs);
    }
    let sol = Matrix::from_rows(unknowns, rows)
        .solve(&rhs)
        .ok_or_else(|| search_failed(format!("degree {k}: no exact correction makes the complement isotropic")))?;
    Ok(bs
        .into_iter()
        .enumerate()
        .map(|(i, mut v)| {
            linalg::add_scaled(&mut v, &crate::scalar::one(), &linalg::combine(a.dim(k), &sol[i * e..(i + 1) * e], exact));
            v
        })
        .collect())
}

/// Replaces the harmonic subspace by `ĥ` and adjusts the complement so that
/// the result is again a decomposition.
pub fn change_harmonic(dec: &HodgeDecomposition, hhat: &SubspaceFamily) -> Result<HodgeDecomposition, HodgeError> {
    let a = &dec.algebra;
    let n = a.top_degree();
    if hhat.dims().len() != n + 1 {
        return Err(HodgeError::Shape { expected: n + 1, found: hhat.dims().len() });
    }
    let cohom = compute_cohomology(a);
    // α on the harmonic basis, per degree: α(h_i) = pr_dA(ĥ) with pr_ℋ ĥ = h_i.
    let mut alpha: Vec<Vec<Vec<Scalar>>> = Vec::new();
    for k in 0..=n {
        let dim = a.dim(k);
        let hk = dec.harmonic.get(k);
        let hh = hhat.get(k);
        for v in hh {
            if !linalg::is_zero_vec(&a.d_matrix(k).apply(v)) {
                return Err(HodgeError::NotClosed { degree: k, witness: a.show(&a.embed(k, v)) });
            }
        }
        if hh.len() != hk.len() || linalg::extend_basis(dim, cohom.exact(k), hh).len() != hk.len() {
            return Err(HodgeError::DirectSum { degree: k, detail: "replacement is not complementary to dA in ker d".into() });
        }
        let ph = dec.pr_harmonic.block(k);
        let pe = dec.pr_exact.block(k);
        // Columns: harmonic coordinates of pr_ℋ ĥ_j.
        let cols: Vec<Vec<Scalar>> = hh.iter().map(|v| linalg::coordinates(dim, hk, &ph.apply(v)).expect("lies in H")).collect();
        let minv = Matrix::from_columns(hk.len(), &cols).inverse().expect("replacement is complementary");
        let row: Vec<Vec<Scalar>> = (0..hk.len())
            .map(|i| {
                let coeffs = minv.column(i);
                let hat = linalg::combine(dim, &coeffs, hh);
                pe.apply(&hat)
            })
            .collect();
        alpha.push(row);
    }
    let alpha_apply = |k: usize, v: &[Scalar]| -> Vec<Scalar> {
        let hk = dec.harmonic.get(k);
        let c = linalg::coordinates(a.dim(k), hk, v).expect("harmonic input");
        linalg::combine(a.dim(k), &c, &alpha[k])
    };
    let mut bhat = SubspaceFamily::empty(n);
    for j in 0..=n {
        let k = n - j;
        let hk = dec.harmonic.get(k);
        let hj = dec.harmonic.get(j);
        let out: Vec<Vec<Scalar>> = dec
            .complement
            .get(j)
            .iter()
            .map(|x| {
                // α†x ∈ ℋ^j with <α†x, v> = <x, α v> for v ∈ ℋ^k.
                let adj = if hk.is_empty() {
                    vec![zero(); a.dim(j)]
                } else {
                    let rows: Vec<Vec<Scalar>> = hk.iter().map(|v| hj.iter().map(|g| local_pair(a, j, g, k, v)).collect()).collect();
                    let rhs: Vec<Scalar> = (0..hk.len()).map(|i| local_pair(a, j, x, k, &alpha[k][i])).collect();
                    let c = Matrix::from_rows(hj.len(), rows).solve(&rhs).expect("non-degenerate harmonic pairing");
                    linalg::combine(a.dim(j), &c, hj)
                };
                let aa = alpha_apply(j, &adj);
                let mut y = x.clone();
                linalg::add_scaled(&mut y, &crate::scalar::int(-1), &adj);
                linalg::add_scaled(&mut y, &frac(-1, 2), &aa);
                y
            })
            .collect();
        bhat.set(j, out);
    }
    verify_hodge(a, hhat, &bhat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgca::DgcaBuilder;
    use crate::scalar::int;

    fn nonhodge() -> Dgca {
        DgcaBuilder::new("nonhodge-4", 4)
            .element("x0", 0)
            .element("x2", 2)
            .element("x3", 3)
            .element("x4", 4)
            .unit("x0")
            .mul("x2", "x2", "x4", int(1))
            .diff("x2", "x3", int(1))
            .integral("x4", int(1))
            .build()
            .unwrap()
    }

    fn sphere2() -> Dgca {
        DgcaBuilder::new("s2", 2).element("1", 0).element("v", 2).unit("1").integral("v", int(1)).build().unwrap()
    }

    /// An acyclic pair `u → w` whose members pair to the top class.
    fn paired_acyclic() -> Dgca {
        DgcaBuilder::new("pair", 3)
            .element("1", 0)
            .element("u", 1)
            .element("w", 2)
            .element("t", 3)
            .unit("1")
            .mul("u", "w", "t", int(1))
            .diff("u", "w", int(1))
            .integral("t", int(1))
            .build()
            .unwrap()
    }

    #[test]
    fn trivial_differential() {
        let a = sphere2();
        let h = SubspaceFamily::new(vec![vec![vec![int(1)]], vec![], vec![vec![int(1)]]]);
        let dec = verify_hodge(&a, &h, &SubspaceFamily::empty(2)).unwrap();
        for i in 0..a.len() {
            let e = a.basis_vector(i);
            assert!(linalg::is_zero_vec(&dec.dminus_apply(&e)));
            assert_eq!(dec.project_harmonic(&e), e);
        }
        assert!(dec.identity_failures().is_empty());
        let found = find_hodge(&a).unwrap();
        assert!(found.complement().is_zero());
    }

    #[test]
    fn nonhodge_is_obstructed() {
        let a = nonhodge();
        let ap = aperp_acyclicity(&a);
        assert!(!ap.acyclic);
        assert_eq!(ap.betti, vec![0, 0, 0, 1, 0]);
        let e = find_hodge(&a).unwrap_err();
        assert_eq!(e.reason, NotFoundReason::Obstruction);
        let h = SubspaceFamily::new(vec![vec![vec![int(1)]], vec![], vec![], vec![], vec![vec![int(1)]]]);
        let b = SubspaceFamily::new(vec![vec![], vec![], vec![vec![int(1)]], vec![], vec![]]);
        assert!(matches!(verify_hodge(&a, &h, &b), Err(HodgeError::Orthogonality { .. })));
    }

    #[test]
    fn acyclic_pair() {
        let a = paired_acyclic();
        assert!(validate_poincare(&a).is_ok());
        let ap = aperp_acyclicity(&a);
        assert!(ap.acyclic);
        let h = SubspaceFamily::new(vec![vec![vec![int(1)]], vec![], vec![], vec![vec![int(1)]]]);
        let b = SubspaceFamily::new(vec![vec![], vec![vec![int(1)]], vec![], vec![]]);
        let dec = verify_hodge(&a, &h, &b).unwrap();
        let w = a.basis_vector(a.basis().index_of("w").unwrap());
        assert_eq!(dec.dminus_apply(&w), a.basis_vector(a.basis().index_of("u").unwrap()));
        assert!(dec.identity_failures().is_empty());
        assert!(dec.splits_null_ideal());
        let found = find_hodge(&a).unwrap();
        assert!(found.identity_failures().is_empty());
    }

    #[test]
    fn same_harmonic_keeps_complement() {
        let a = paired_acyclic();
        let dec = find_hodge(&a).unwrap();
        let again = change_harmonic(&dec, dec.harmonic()).unwrap();
        assert!(again.complement().same_as(&a, dec.complement()));
    }
}

#[cfg(test)]
mod catalog_tests {
    use super::*;
    use crate::catalog::catalog;

    #[test]
    fn catalog_decompositions() {
        for e in catalog() {
            match find_hodge(&e.algebra) {
                Ok(dec) => {
                    assert!(dec.identity_failures().is_empty(), "{}: {:?}", e.name, dec.identity_failures());
                    assert!(dec.splits_null_ideal(), "{}", e.name);
                }
                Err(nf) => {
                    assert_eq!(e.name, "nonhodge-4", "{}", nf);
                }
            }
        }
    }

    #[test]
    fn shifted_harmonic_on_nonformal_7() {
        let a = crate::catalog::nonformal_7();
        let dec = find_hodge(&a).unwrap();
        let mut hhat = dec.harmonic().clone();
        let shifted: Vec<Vec<Scalar>> = hhat
            .get(4)
            .iter()
            .map(|v| {
                let mut v = v.clone();
                v[0] += crate::scalar::int(3);
                v
            })
            .collect();
        hhat.set(4, shifted);
        let moved = change_harmonic(&dec, &hhat).unwrap();
        assert!(moved.identity_failures().is_empty());
        assert!(moved.exact().same_as(&a, dec.exact()));
        assert_eq!(moved.complement_ranks(), dec.complement_ranks());
        assert!(!moved.complement().same_as(&a, dec.complement()));
    }
}
