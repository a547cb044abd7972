//! Sparse vectors and an incremental span solver for large, thin systems
//! (cochain equations).

use crate::scalar::Scalar;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Sorted `(index, coefficient)` pairs without zero coefficients.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn from_pairs(mut pairs: Vec<(usize, Scalar)>) -> SparseVec {
    pairs.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(pairs.len());
    for (i, x) in pairs {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// `y + c x`.
pub fn axpy(y: &SparseVec, c: &Scalar, x: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        let take_y = j >= x.len() || (i < y.len() && y[i].0 < x[j].0);
        let take_x = i >= y.len() || (j < x.len() && x[j].0 < y[i].0);
        if take_y {
            out.push(y[i].clone());
            i += 1;
        } else if take_x {
            out.push((x[j].0, c * &x[j].1));
            j += 1;
        } else {
            let s = &y[i].1 + c * &x[j].1;
            if !s.is_zero() {
                out.push((y[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

pub fn get(v: &SparseVec, i: usize) -> Option<&Scalar> {
    v.binary_search_by_key(&i, |(k, _)| *k).ok().map(|p| &v[p].1)
}

pub fn dot(f: &SparseVec, v: &SparseVec) -> Scalar {
    let mut s = Scalar::zero();
    let (mut i, mut j) = (0, 0);
    while i < f.len() && j < v.len() {
        match f[i].0.cmp(&v[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += &f[i].1 * &v[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    combo: SparseVec,
}

/// Reduced echelon basis of the span of labelled generators, tracking how
/// each basis row is built from the generators.
#[derive(Clone, Debug, Default)]
pub struct SpanSolver {
    rows: Vec<Row>,
    pivot_row: HashMap<usize, usize>,
}

/// Outcome of reducing a target against the span.
pub enum SpanResult {
    /// Coefficients over generator labels with `Σ c_g · gen_g = target`.
    InSpan(SparseVec),
    /// A functional vanishing on every generator and nonzero on the target.
    Separated(SparseVec),
}

impl SpanSolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut r = v.clone();
        let mut combo: SparseVec = Vec::new();
        for (idx, _) in v {
            if let Some(&ri) = self.pivot_row.get(idx) {
                let row = &self.rows[ri];
                let Some(c) = get(&r, *idx).cloned() else {
                    continue;
                };
                let neg = -c;
                r = axpy(&r, &neg, &row.vec);
                combo = axpy(&combo, &neg, &row.combo);
            }
        }
        (r, combo)
    }

    /// Adds generator `label`; returns false if it was already in the span.
    pub fn add(&mut self, label: usize, v: &SparseVec) -> bool {
        let (r, combo) = self.reduce(v);
        let Some((p, lead)) = r.first().cloned() else {
            return false;
        };
        let inv = lead.recip();
        let mut combo = axpy(&combo, &Scalar::one(), &vec![(label, Scalar::one())]);
        let vec: SparseVec = r.into_iter().map(|(i, x)| (i, x * &inv)).collect();
        combo = combo.into_iter().map(|(i, x)| (i, x * &inv)).collect();
        for row in self.rows.iter_mut() {
            if let Some(f) = get(&row.vec, p).cloned() {
                let neg = -f;
                row.vec = axpy(&row.vec, &neg, &vec);
                row.combo = axpy(&row.combo, &neg, &combo);
            }
        }
        self.pivot_row.insert(p, self.rows.len());
        self.rows.push(Row { vec, combo });
        true
    }

    pub fn decide(&self, target: &SparseVec) -> SpanResult {
        let (r, combo) = self.reduce(target);
        match r.first() {
            None => SpanResult::InSpan(combo.into_iter().map(|(i, x)| (i, -x)).collect()),
            Some((j, _)) => {
                let mut f: SparseVec = vec![(*j, Scalar::one())];
                for (p, &ri) in &self.pivot_row {
                    if let Some(x) = get(&self.rows[ri].vec, *j) {
                        f.push((*p, -x.clone()));
                    }
                }
                SpanResult::Separated(from_pairs(f))
            }
        }
    }
}
