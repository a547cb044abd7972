//! Cohomology with chosen cocycle representatives, the cohomology ring and
//! Poincaré duality checks.
//!
//! In each degree the representatives are the kernel vectors of `d` (one per
//! free column of the row-reduced differential) that are independent modulo
//! the exact forms, taken in order. A class is named after the basis element
//! at the free column of its representative, e.g. `[x4]`.

use crate::cochain::{Cochain, GradedSpace};
use crate::dgca::Dgca;
use crate::linalg::{self, Matrix};
use crate::scalar::{zero, Scalar};
use crate::sparse::SparseVec;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyData {
    space: GradedSpace,
    reps: Vec<Vec<Scalar>>,
    offsets: Vec<usize>,
    proj: Vec<Matrix>,
    cocycles: Vec<Vec<Vec<Scalar>>>,
    exact: Vec<Vec<Vec<Scalar>>>,
}

pub fn compute_cohomology(a: &Dgca) -> CohomologyData {
    let n = a.top_degree();
    let mut cocycles = Vec::new();
    let mut exact = Vec::new();
    for k in 0..=n {
        cocycles.push(a.d_matrix(k).kernel());
        exact.push(if k == 0 { Vec::new() } else { a.d_matrix(k - 1).image() });
    }
    let mut names = Vec::new();
    let mut degrees = Vec::new();
    let mut reps = Vec::new();
    let mut offsets = vec![0];
    let mut proj = Vec::new();
    for k in 0..=n {
        let dim = a.dim(k);
        let chosen = linalg::extend_basis(dim, &exact[k], &cocycles[k]);
        let mut cols = chosen.clone();
        cols.extend(exact[k].iter().cloned());
        let fill = linalg::complement(dim, &cols);
        cols.extend(fill);
        let inv = Matrix::from_columns(dim, &cols).inverse().expect("basis completion is invertible");
        let mut p = Matrix::zeros(chosen.len(), dim);
        for i in 0..chosen.len() {
            for j in 0..dim {
                p.set(i, j, inv.get(i, j).clone());
            }
        }
        proj.push(p);
        for r in &chosen {
            let last = r.iter().rposition(|x| !x.is_zero()).expect("nonzero representative");
            names.push(format!("[{}]", a.id(a.range(k).start + last)));
            degrees.push(k);
            reps.push(a.embed(k, r));
        }
        offsets.push(reps.len());
    }
    CohomologyData { space: GradedSpace::new(names, degrees), reps, offsets, proj, cocycles, exact }
}

impl CohomologyData {
    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn betti(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn classes(&self, k: usize) -> std::ops::Range<usize> {
        if k + 1 >= self.offsets.len() {
            return self.dim()..self.dim();
        }
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn rep(&self, i: usize) -> &Vec<Scalar> {
        &self.reps[i]
    }

    pub fn reps(&self) -> &[Vec<Scalar>] {
        &self.reps
    }

    /// Cocycle basis of `Z^k` in local coordinates.
    pub fn cocycles(&self, k: usize) -> &[Vec<Scalar>] {
        &self.cocycles[k]
    }

    /// Basis of `dA^{k-1} ⊆ A^k` in local coordinates.
    pub fn exact(&self, k: usize) -> &[Vec<Scalar>] {
        &self.exact[k]
    }

    /// Class coordinates of a cocycle. The result is meaningless for
    /// vectors that are not closed.
    pub fn class_of(&self, a: &Dgca, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![zero(); self.dim()];
        for k in 0..self.proj.len() {
            let local = a.restrict(k, v);
            if linalg::is_zero_vec(&local) {
                continue;
            }
            let c = self.proj[k].apply(&local);
            for (x, i) in c.into_iter().zip(self.classes(k)) {
                out[i] = x;
            }
        }
        out
    }

    pub fn class_sparse(&self, a: &Dgca, v: &[Scalar]) -> SparseVec {
        self.class_of(a, v).into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
    }

    /// Representative of a class given by coordinates.
    pub fn rep_of(&self, a: &Dgca, coords: &[Scalar]) -> Vec<Scalar> {
        let mut v = a.zero_vector();
        for (c, r) in coords.iter().zip(&self.reps) {
            linalg::add_scaled(&mut v, c, r);
        }
        v
    }

    pub fn is_exact(&self, a: &Dgca, k: usize, v: &[Scalar]) -> bool {
        let local = a.restrict(k, v);
        linalg::Echelon::from_vectors(a.dim(k), &self.exact[k]).contains(&local)
    }

    pub fn is_closed(a: &Dgca, v: &[Scalar]) -> bool {
        linalg::is_zero_vec(&a.d(v))
    }

    /// The cohomology ring with its integration functional.
    pub fn ring(&self, a: &Dgca) -> CohomologyRing {
        let mut mul = Cochain::new(2, 0);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if self.space.degree(i) + self.space.degree(j) > a.top_degree() {
                    continue;
                }
                let p = a.product(&self.reps[i], &self.reps[j]);
                mul.set(vec![i, j], self.class_sparse(a, &p));
            }
        }
        let unit = self.class_sparse(a, &a.unit_vector());
        let integral = self.reps.iter().map(|r| a.integrate(r)).collect();
        CohomologyRing { space: self.space.clone(), mul, unit, integral, top: a.top_degree() }
    }
}

/// A graded commutative algebra on a finite basis, with an integration
/// functional; used for cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyRing {
    pub space: GradedSpace,
    pub mul: Cochain,
    pub unit: SparseVec,
    pub integral: Vec<Scalar>,
    pub top: usize,
}

impl CohomologyRing {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn product(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (i, x) in u {
            for (j, y) in v {
                if let Some(p) = self.mul.get(&[*i, *j]) {
                    acc = crate::sparse::axpy(&acc, &(x * y), p);
                }
            }
        }
        acc
    }

    pub fn pair(&self, u: &SparseVec, v: &SparseVec) -> Scalar {
        let p = self.product(u, v);
        p.iter().map(|(i, x)| x * &self.integral[*i]).fold(zero(), |s, t| s + t)
    }

    /// Gram matrix of the pairing `H^k × H^{n-k}`, rows indexed by `H^k`.
    pub fn gram(&self, k: usize) -> Matrix {
        let left = self.space.in_degree(k);
        let right = if k <= self.top { self.space.in_degree(self.top - k) } else { Vec::new() };
        let mut g = Matrix::zeros(left.len(), right.len());
        for (r, &i) in left.iter().enumerate() {
            for (c, &j) in right.iter().enumerate() {
                g.set(r, c, self.pair(&vec![(i, Scalar::one())], &vec![(j, Scalar::one())]));
            }
        }
        g
    }
}

/// Result of the Poincaré duality check on cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareReport {
    pub betti: Vec<usize>,
    pub degenerate: Vec<usize>,
}

impl PoincareReport {
    pub fn is_ok(&self) -> bool {
        self.degenerate.is_empty()
    }
}

pub fn validate_poincare(a: &Dgca) -> PoincareReport {
    let h = compute_cohomology(a);
    let ring = h.ring(a);
    let betti = h.betti();
    let n = a.top_degree();
    let degenerate = (0..=n)
        .filter(|&k| {
            let g = ring.gram(k);
            betti[k] != betti[n - k] || g.rank() < betti[k]
        })
        .collect();
    PoincareReport { betti, degenerate }
}

/// Largest `r` with `H^k = 0` for `1 <= k <= r`.
pub fn connectivity(a: &Dgca) -> usize {
    let b = compute_cohomology(a).betti();
    let n = a.top_degree();
    (1..=n).find(|&k| b[k] != 0).map(|k| k - 1).unwrap_or(n)
}

pub fn is_connected(a: &Dgca) -> bool {
    compute_cohomology(a).betti().first() == Some(&1)
}
