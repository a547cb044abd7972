//! The null ideal of the pairing, quotients by differential ideals,
//! sub-DGCAs spanned by a graded family, and DGCA morphisms.

use crate::cohomology::compute_cohomology;
use crate::dgca::{Dgca, DgcaBuilder, ModelError};
use crate::linalg::{self, Echelon, Matrix};
use crate::scalar::Scalar;
use crate::subspace::SubspaceFamily;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("not closed under multiplication: {a} * ({element}) leaves the subspace")]
    NotAnIdeal { a: String, element: String },
    #[error("not closed under d: d({element}) leaves the subspace")]
    NotDifferential { element: String },
    #[error("the unit lies in the ideal")]
    ContainsUnit,
    #[error("not closed under multiplication: ({x}) * ({y}) leaves the subspace")]
    NotSubalgebra { x: String, y: String },
    #[error("the unit is not in the subspace")]
    MissingUnit,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `A_⊥^k = {α ∈ A^k : ⟨α, A^{n-k}⟩ = 0}`.
pub fn null_ideal(a: &Dgca) -> SubspaceFamily {
    let spaces = (0..=a.top_degree())
        .map(|k| {
            if a.dim(k) == 0 {
                return Vec::new();
            }
            let m = a.pairing_matrix(k);
            if m.rows() == 0 {
                return (0..a.dim(k)).map(|i| linalg::unit_vector(a.dim(k), i)).collect();
            }
            m.kernel()
        })
        .collect();
    SubspaceFamily::new(spaces)
}

pub fn check_ideal(a: &Dgca, i: &SubspaceFamily) -> Result<(), IdealError> {
    for k in 0..=a.top_degree() {
        for v in i.global(a, k) {
            for j in 0..a.len() {
                let p = a.product(&a.basis_vector(j), &v);
                if !i.contains_global(a, &p) {
                    return Err(IdealError::NotAnIdeal { a: a.id(j).to_string(), element: a.show(&v) });
                }
            }
            if !i.contains_global(a, &a.d(&v)) {
                return Err(IdealError::NotDifferential { element: a.show(&v) });
            }
        }
    }
    Ok(())
}

/// Degree-preserving linear map between two algebras, per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgcaMorphism {
    pub blocks: Vec<Matrix>,
}

impl DgcaMorphism {
    pub fn apply(&self, src: &Dgca, tgt: &Dgca, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = tgt.zero_vector();
        for (k, b) in self.blocks.iter().enumerate() {
            let local = src.restrict(k, v);
            if linalg::is_zero_vec(&local) || k > tgt.top_degree() {
                continue;
            }
            for (x, i) in b.apply(&local).into_iter().zip(tgt.range(k)) {
                out[i] += x;
            }
        }
        out
    }

    /// Checks unit, multiplicativity and `f d = d f` on basis elements.
    pub fn is_dga_map(&self, src: &Dgca, tgt: &Dgca) -> bool {
        if self.apply(src, tgt, &src.unit_vector()) != tgt.unit_vector() {
            return false;
        }
        for i in 0..src.len() {
            let ei = src.basis_vector(i);
            let fi = self.apply(src, tgt, &ei);
            if self.apply(src, tgt, &src.d(&ei)) != tgt.d(&fi) {
                return false;
            }
            for j in 0..src.len() {
                let ej = src.basis_vector(j);
                let lhs = self.apply(src, tgt, &src.product(&ei, &ej));
                let rhs = tgt.product(&fi, &self.apply(src, tgt, &ej));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Matrices of the induced map on cohomology, per degree.
    pub fn on_cohomology(&self, src: &Dgca, tgt: &Dgca) -> Vec<Matrix> {
        let hs = compute_cohomology(src);
        let ht = compute_cohomology(tgt);
        (0..=src.top_degree())
            .map(|k| {
                let cols: Vec<Vec<Scalar>> = hs
                    .classes(k)
                    .map(|i| {
                        let img = self.apply(src, tgt, hs.rep(i));
                        let c = ht.class_of(tgt, &img);
                        ht.classes(k).map(|j| c[j].clone()).collect()
                    })
                    .collect();
                Matrix::from_columns(ht.classes(k).len(), &cols)
            })
            .collect()
    }
}

/// Whether `f` is a DGA map inducing an isomorphism on cohomology.
pub fn is_quasi_iso(src: &Dgca, tgt: &Dgca, f: &DgcaMorphism) -> bool {
    if src.top_degree() != tgt.top_degree() || !f.is_dga_map(src, tgt) {
        return false;
    }
    f.on_cohomology(src, tgt).iter().all(|m| m.rows() == m.cols() && m.rank() == m.rows())
}

/// `A/I` with its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: Dgca,
    pub projection: DgcaMorphism,
}

/// Quotient by a differential ideal. The basis of `A/I` consists of the
/// images of the basis elements outside the pivot columns of `I`, so ids are
/// preserved. Integration is induced when it vanishes on `I`, and is zero
/// otherwise.
pub fn quotient_by_ideal(a: &Dgca, i: &SubspaceFamily) -> Result<Quotient, IdealError> {
    check_ideal(a, i)?;
    if i.contains_global(a, &a.unit_vector()) {
        return Err(IdealError::ContainsUnit);
    }
    let n = a.top_degree();
    let mut kept: Vec<Vec<usize>> = Vec::new();
    let mut blocks = Vec::new();
    for k in 0..=n {
        let dim = a.dim(k);
        let pivots = Echelon::from_vectors(dim, i.get(k)).pivots();
        let keep: Vec<usize> = (0..dim).filter(|j| pivots.binary_search(j).is_err()).collect();
        let mut cols: Vec<Vec<Scalar>> = keep.iter().map(|&j| linalg::unit_vector(dim, j)).collect();
        cols.extend(i.get(k).iter().cloned());
        let inv = Matrix::from_columns(dim, &cols).inverse().expect("complement completes a basis");
        let mut p = Matrix::zeros(keep.len(), dim);
        for r in 0..keep.len() {
            for c in 0..dim {
                p.set(r, c, inv.get(r, c).clone());
            }
        }
        blocks.push(p);
        kept.push(keep.into_iter().map(|j| a.range(k).start + j).collect());
    }
    let projection = DgcaMorphism { blocks };
    let ids: Vec<(usize, String)> =
        kept.iter().enumerate().flat_map(|(k, ks)| ks.iter().map(move |&g| (k, g))).map(|(k, g)| (k, a.id(g).to_string())).collect();
    let project = |v: &[Scalar]| -> Vec<(String, Scalar)> {
        let mut out = Vec::new();
        for k in 0..=n {
            let local = a.restrict(k, v);
            if linalg::is_zero_vec(&local) {
                continue;
            }
            let c = projection.blocks[k].apply(&local);
            for (x, &g) in c.into_iter().zip(&kept[k]) {
                if !x.is_zero() {
                    out.push((a.id(g).to_string(), x));
                }
            }
        }
        out
    };
    let mut b = DgcaBuilder::new(&format!("{}/I", a.name()), n);
    for (k, id) in &ids {
        b = b.element(id, *k);
    }
    b = b.unit(a.id(a.unit()));
    let flat: Vec<usize> = kept.iter().flatten().copied().collect();
    for (x, &gi) in flat.iter().enumerate() {
        for &gj in &flat[x..] {
            let p = a.product(&a.basis_vector(gi), &a.basis_vector(gj));
            let terms = project(&p);
            let involves_unit = gi == a.unit() || gj == a.unit();
            if involves_unit && terms.is_empty() {
                b = b.mul(a.id(gi), a.id(gj), a.id(if gi == a.unit() { gj } else { gi }), Scalar::zero());
            }
            for (c, coef) in terms {
                b = b.mul(a.id(gi), a.id(gj), &c, coef);
            }
        }
        for (c, coef) in project(&a.d(&a.basis_vector(gi))) {
            b = b.diff(a.id(gi), &c, coef);
        }
    }
    let induces = i.global(a, n).iter().all(|v| a.integrate(v).is_zero());
    if induces {
        for &g in &kept[n] {
            let x = a.integrate(&a.basis_vector(g));
            if !x.is_zero() {
                b = b.integral(a.id(g), x);
            }
        }
    }
    Ok(Quotient { algebra: b.build()?, projection })
}

/// Sub-DGCA spanned by a graded family, with its inclusion.
#[derive(Clone, Debug)]
pub struct SubAlgebra {
    pub algebra: Dgca,
    pub inclusion: DgcaMorphism,
}

/// Builds the sub-DGCA on the given columns. Columns that are basis vectors
/// keep their id; other columns are named `<prefix><degree>.<index>`.
pub fn subalgebra(a: &Dgca, family: &SubspaceFamily, name: &str) -> Result<SubAlgebra, IdealError> {
    let n = a.top_degree();
    if !family.contains_global(a, &a.unit_vector()) {
        return Err(IdealError::MissingUnit);
    }
    let mut ids: Vec<Vec<String>> = Vec::new();
    for k in 0..=n {
        let names = family
            .get(k)
            .iter()
            .enumerate()
            .map(|(idx, v)| {
                let nz: Vec<usize> = (0..v.len()).filter(|&j| !v[j].is_zero()).collect();
                if nz.len() == 1 && v[nz[0]].is_one() {
                    a.id(a.range(k).start + nz[0]).to_string()
                } else {
                    format!("s{k}.{idx}")
                }
            })
            .collect();
        ids.push(names);
    }
    // Coordinates of a global vector in the family's columns, per degree.
    let coords = |v: &[Scalar]| -> Option<Vec<(String, Scalar)>> {
        let mut out = Vec::new();
        for k in 0..=n {
            let local = a.restrict(k, v);
            if linalg::is_zero_vec(&local) {
                continue;
            }
            let c = linalg::coordinates(a.dim(k), family.get(k), &local)?;
            for (x, id) in c.into_iter().zip(&ids[k]) {
                if !x.is_zero() {
                    out.push((id.clone(), x));
                }
            }
        }
        Some(out)
    };
    let unit_terms = coords(&a.unit_vector()).ok_or(IdealError::MissingUnit)?;
    let unit_id = match unit_terms.as_slice() {
        [(id, c)] if c.is_one() => id.clone(),
        _ => return Err(IdealError::MissingUnit),
    };
    let mut b = DgcaBuilder::new(name, n);
    let mut cols: Vec<(usize, String, Vec<Scalar>)> = Vec::new();
    for k in 0..=n {
        for (v, id) in family.get(k).iter().zip(&ids[k]) {
            b = b.element(id, k);
            cols.push((k, id.clone(), a.embed(k, v)));
        }
    }
    b = b.unit(&unit_id);
    for (x, (_, idx, vx)) in cols.iter().enumerate() {
        for (_, idy, vy) in &cols[x..] {
            let p = a.product(vx, vy);
            let terms = coords(&p).ok_or_else(|| IdealError::NotSubalgebra { x: a.show(vx), y: a.show(vy) })?;
            let involves_unit = *idx == unit_id || *idy == unit_id;
            if involves_unit && terms.is_empty() {
                let other = if *idx == unit_id { idy } else { idx };
                b = b.mul(idx, idy, other, Scalar::zero());
            }
            for (c, coef) in terms {
                b = b.mul(idx, idy, &c, coef);
            }
        }
        let terms = coords(&a.d(vx)).ok_or_else(|| IdealError::NotDifferential { element: a.show(vx) })?;
        for (c, coef) in terms {
            b = b.diff(idx, &c, coef);
        }
    }
    for (k, id, v) in &cols {
        if *k == n {
            let x = a.integrate(v);
            if !x.is_zero() {
                b = b.integral(id, x);
            }
        }
    }
    let algebra = b.build()?;
    let blocks = (0..=n).map(|k| Matrix::from_columns(a.dim(k), family.get(k))).collect();
    Ok(SubAlgebra { algebra, inclusion: DgcaMorphism { blocks } })
}
