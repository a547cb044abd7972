//! Graded subspaces and degree-shifting linear maps of an algebra.

use crate::dgca::Dgca;
use crate::linalg::{self, Echelon, Matrix};
use crate::scalar::Scalar;

/// One subspace per degree, each given by independent local column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SubspaceFamily {
    spaces: Vec<Vec<Vec<Scalar>>>,
}

impl SubspaceFamily {
    pub fn empty(top: usize) -> Self {
        SubspaceFamily { spaces: vec![Vec::new(); top + 1] }
    }

    pub fn new(spaces: Vec<Vec<Vec<Scalar>>>) -> Self {
        SubspaceFamily { spaces }
    }

    /// Reduces each degree to an independent spanning set.
    pub fn spanned(a: &Dgca, spaces: Vec<Vec<Vec<Scalar>>>) -> Self {
        let spaces = spaces.into_iter().enumerate().map(|(k, vs)| linalg::independent(a.dim(k), &vs)).collect();
        SubspaceFamily { spaces }
    }

    pub fn top(&self) -> usize {
        self.spaces.len().saturating_sub(1)
    }

    pub fn get(&self, k: usize) -> &[Vec<Scalar>] {
        self.spaces.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn set(&mut self, k: usize, vs: Vec<Vec<Scalar>>) {
        self.spaces[k] = vs;
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Vec::len).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn contains(&self, a: &Dgca, k: usize, local: &[Scalar]) -> bool {
        Echelon::from_vectors(a.dim(k), self.get(k)).contains(local)
    }

    /// Whether the homogeneous global vector `v` lies in the family.
    pub fn contains_global(&self, a: &Dgca, v: &[Scalar]) -> bool {
        match a.degree_of(v) {
            None => true,
            Some(k) => {
                let local = a.restrict(k, v);
                let mut rest = v.to_vec();
                for i in a.range(k) {
                    rest[i] = crate::scalar::zero();
                }
                linalg::is_zero_vec(&rest) && self.contains(a, k, &local)
            }
        }
    }

    pub fn global(&self, a: &Dgca, k: usize) -> Vec<Vec<Scalar>> {
        self.get(k).iter().map(|v| a.embed(k, v)).collect()
    }

    pub fn sum(&self, a: &Dgca, other: &SubspaceFamily) -> SubspaceFamily {
        let spaces = (0..=a.top_degree())
            .map(|k| {
                let mut vs = self.get(k).to_vec();
                vs.extend(other.get(k).iter().cloned());
                linalg::independent(a.dim(k), &vs)
            })
            .collect();
        SubspaceFamily { spaces }
    }

    pub fn intersect(&self, a: &Dgca, other: &SubspaceFamily) -> SubspaceFamily {
        let spaces = (0..=a.top_degree()).map(|k| linalg::intersection(a.dim(k), self.get(k), other.get(k))).collect();
        SubspaceFamily { spaces }
    }

    pub fn is_subspace_of(&self, a: &Dgca, other: &SubspaceFamily) -> bool {
        (0..=a.top_degree()).all(|k| {
            let e = Echelon::from_vectors(a.dim(k), other.get(k));
            self.get(k).iter().all(|v| e.contains(v))
        })
    }

    /// Equality of the degree-`k` parts.
    pub fn same_as_in(&self, a: &Dgca, k: usize, other: &SubspaceFamily) -> bool {
        let (x, y) = (Echelon::from_vectors(a.dim(k), self.get(k)), Echelon::from_vectors(a.dim(k), other.get(k)));
        x.rank() == y.rank() && self.get(k).iter().all(|v| y.contains(v))
    }

    pub fn same_as(&self, a: &Dgca, other: &SubspaceFamily) -> bool {
        self.is_subspace_of(a, other) && other.is_subspace_of(a, self)
    }
}

/// A linear map `A → A` of fixed degree shift, stored per source degree in
/// local coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    shift: i64,
    blocks: Vec<Matrix>,
}

impl GradedMap {
    pub fn new(shift: i64, blocks: Vec<Matrix>) -> Self {
        GradedMap { shift, blocks }
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn block(&self, k: usize) -> &Matrix {
        &self.blocks[k]
    }

    pub fn target_degree(&self, k: usize) -> Option<usize> {
        let t = k as i64 + self.shift;
        (t >= 0 && (t as usize) < self.blocks.len()).then_some(t as usize)
    }

    pub fn apply(&self, a: &Dgca, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = a.zero_vector();
        for k in 0..self.blocks.len() {
            let local = a.restrict(k, v);
            if linalg::is_zero_vec(&local) {
                continue;
            }
            if let Some(t) = self.target_degree(k) {
                let img = self.blocks[k].apply(&local);
                for (x, i) in img.into_iter().zip(a.range(t)) {
                    out[i] += x;
                }
            }
        }
        out
    }

    /// `self ∘ other` on the algebra `a`.
    pub fn compose(&self, a: &Dgca, other: &GradedMap) -> GradedMap {
        let shift = self.shift + other.shift;
        let blocks = (0..other.blocks.len())
            .map(|k| match other.target_degree(k) {
                Some(t) if self.target_degree(t).is_some() => self.blocks[t].mul(&other.blocks[k]),
                _ => {
                    let tt = k as i64 + shift;
                    let rows = if tt >= 0 { a.dim(tt as usize) } else { 0 };
                    Matrix::zeros(rows, a.dim(k))
                }
            })
            .collect();
        GradedMap { shift, blocks }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgca::DgcaBuilder;
    use crate::scalar::int;

    #[test]
    fn family_sum_and_intersection() {
        let a = DgcaBuilder::new("t2", 2)
            .element("1", 0)
            .element("s", 1)
            .element("t", 1)
            .element("st", 2)
            .unit("1")
            .mul("s", "t", "st", int(1))
            .integral("st", int(1))
            .build()
            .unwrap();
        let mut f = SubspaceFamily::empty(2);
        f.set(1, vec![vec![int(1), int(0)]]);
        let mut g = SubspaceFamily::empty(2);
        g.set(1, vec![vec![int(1), int(1)]]);
        assert_eq!(f.sum(&a, &g).dims(), vec![0, 2, 0]);
        assert_eq!(f.intersect(&a, &g).dims(), vec![0, 0, 0]);
        assert!(f.contains_global(&a, &a.basis_vector(1)));
        assert!(!f.contains_global(&a, &a.basis_vector(2)));
    }
}
