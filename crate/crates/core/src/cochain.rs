//! Multilinear maps on a graded vector space with a fixed basis.
//!
//! A cochain of arity `p` and internal degree `e` sends a tuple of basis
//! elements of total degree `s` to a vector of degree `s + e`. Tables are
//! sparse and ordered, so printing is deterministic.

use crate::scalar::{self, Scalar};
use crate::sparse::{self, SparseVec};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    names: Vec<String>,
    degrees: Vec<usize>,
}

impl GradedSpace {
    pub fn new(names: Vec<String>, degrees: Vec<usize>) -> Self {
        assert_eq!(names.len(), degrees.len());
        GradedSpace { names, degrees }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn in_degree(&self, k: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == k).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn tuple_degree(&self, t: &[usize]) -> usize {
        t.iter().map(|&i| self.degrees[i]).sum()
    }

    /// All `p`-tuples of basis indices, in lexicographic order.
    pub fn tuples(&self, p: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..p {
            let mut next = Vec::with_capacity(out.len() * self.dim());
            for t in &out {
                for i in 0..self.dim() {
                    let mut u = t.clone();
                    u.push(i);
                    next.push(u);
                }
            }
            out = next;
        }
        out
    }

    /// Tuples whose image under a map of internal degree `e` can be nonzero.
    pub fn admissible_tuples(&self, p: usize, e: i64) -> Vec<Vec<usize>> {
        let top = self.max_degree() as i64;
        let mut out = vec![(Vec::new(), 0usize)];
        for _ in 0..p {
            let mut next = Vec::new();
            for (t, s) in &out {
                for i in 0..self.dim() {
                    let s2 = s + self.degrees[i];
                    // Partial sums only grow, so prune early.
                    if s2 as i64 + e > top {
                        continue;
                    }
                    let mut u = t.clone();
                    u.push(i);
                    next.push((u, s2));
                }
            }
            out = next;
        }
        out.into_iter()
            .filter(|(_, s)| {
                let d = *s as i64 + e;
                d >= 0 && d <= top && !self.in_degree(d as usize).is_empty()
            })
            .map(|(t, _)| t)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    arity: usize,
    degree: i64,
    table: BTreeMap<Vec<usize>, SparseVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CochainParseError {
    #[error("line {line}: {detail}")]
    Malformed { line: usize, detail: String },
}

impl Cochain {
    pub fn new(arity: usize, degree: i64) -> Self {
        Cochain { arity, degree, table: BTreeMap::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn get(&self, t: &[usize]) -> Option<&SparseVec> {
        self.table.get(t)
    }

    pub fn value(&self, t: &[usize]) -> SparseVec {
        self.table.get(t).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, t: Vec<usize>, v: SparseVec) {
        assert_eq!(t.len(), self.arity, "arity mismatch");
        let v: SparseVec = v.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        if v.is_empty() {
            self.table.remove(&t);
        } else {
            self.table.insert(t, v);
        }
    }

    pub fn add_to(&mut self, t: Vec<usize>, v: &SparseVec, c: &Scalar) {
        let cur = self.value(&t);
        self.set(t, sparse::axpy(&cur, c, v));
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &SparseVec)> {
        self.table.iter()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn scaled(&self, c: &Scalar) -> Cochain {
        let mut out = Cochain::new(self.arity, self.degree);
        if c.is_zero() {
            return out;
        }
        for (t, v) in &self.table {
            out.table.insert(t.clone(), v.iter().map(|(i, x)| (*i, x * c)).collect());
        }
        out
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Scalar, other: &Cochain) -> Cochain {
        assert_eq!((self.arity, self.degree), (other.arity, other.degree), "incompatible cochains");
        let mut out = self.clone();
        for (t, v) in &other.table {
            out.add_to(t.clone(), v, c);
        }
        out
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.axpy(&-Scalar::from_integer(1.into()), other)
    }

    /// Serializes as lines `k; a1,...,ak; out; p/q`.
    pub fn to_lines(&self, space: &GradedSpace) -> String {
        let mut s = String::new();
        for (t, v) in &self.table {
            let ins: Vec<&str> = t.iter().map(|&i| space.name(i)).collect();
            for (o, x) in v {
                let _ = writeln!(s, "{}; {}; {}; {}", self.arity, ins.join(","), space.name(*o), scalar::format(x));
            }
        }
        s
    }

    pub fn from_lines(space: &GradedSpace, arity: usize, degree: i64, text: &str) -> Result<Cochain, CochainParseError> {
        let mut c = Cochain::new(arity, degree);
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let bad = |detail: &str| CochainParseError::Malformed { line, detail: detail.to_string() };
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = l.split(';').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(bad("expected four ';'-separated fields"));
            }
            let k: usize = parts[0].parse().map_err(|_| bad("arity is not an integer"))?;
            if k != arity {
                return Err(bad("arity does not match"));
            }
            let ins: Vec<usize> = if k == 0 {
                Vec::new()
            } else {
                parts[1]
                    .split(',')
                    .map(|x| space.index_of(x.trim()).ok_or_else(|| bad("unknown input name")))
                    .collect::<Result<_, _>>()?
            };
            if ins.len() != k {
                return Err(bad("wrong number of inputs"));
            }
            let o = space.index_of(parts[2]).ok_or_else(|| bad("unknown output name"))?;
            let x = scalar::parse(parts[3]).map_err(|_| bad("malformed coefficient"))?;
            c.add_to(ins, &vec![(o, x)], &Scalar::from_integer(1.into()));
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn space() -> GradedSpace {
        GradedSpace::new(vec!["1".into(), "a".into(), "b".into()], vec![0, 2, 4])
    }

    #[test]
    fn lines_round_trip() {
        let sp = space();
        let mut c = Cochain::new(2, 0);
        c.set(vec![1, 1], vec![(2, frac(-3, 2))]);
        c.set(vec![0, 1], vec![(1, int(1))]);
        let text = c.to_lines(&sp);
        assert_eq!(text, "2; 1,a; a; 1\n2; a,a; b; -3/2\n");
        assert_eq!(Cochain::from_lines(&sp, 2, 0, &text).unwrap(), c);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let sp = space();
        let e = Cochain::from_lines(&sp, 2, 0, "2; a,a; b; 1\n2; a,z; b; 1\n").unwrap_err();
        assert_eq!(e, CochainParseError::Malformed { line: 2, detail: "unknown input name".into() });
    }

    #[test]
    fn axpy_cancels() {
        let mut c = Cochain::new(1, 2);
        c.set(vec![1], vec![(2, int(1))]);
        assert!(c.sub(&c).is_zero());
    }

    #[test]
    fn admissible_tuples_respect_degrees() {
        let sp = space();
        let ts = sp.admissible_tuples(2, 0);
        assert!(ts.contains(&vec![1, 1]));
        assert!(!ts.contains(&vec![2, 2]));
        assert!(!ts.contains(&vec![1, 2]));
    }
}
