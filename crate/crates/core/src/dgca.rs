//! Finite-dimensional differential graded commutative algebras with an
//! integration functional on the top degree.
//!
//! The basis is ordered by degree; the order within a degree is the order in
//! which elements were declared. Elements are dense coordinate vectors over
//! the whole basis. Products are stored once per unordered pair and the
//! opposite order is derived with the Koszul sign.

use crate::linalg::Matrix;
use crate::par;
use crate::scalar::{self, sign, zero, Scalar, ScalarParseError};
use num_traits::{One, Zero};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate basis id {0:?}")]
    DuplicateId(String),
    #[error("{location}: unknown basis id {id:?}")]
    UnknownId { id: String, location: String },
    #[error("basis element {id:?} has degree {degree} outside 0..={top}")]
    DegreeOutOfRange { id: String, degree: usize, top: usize },
    #[error("{location}: degrees do not match ({detail})")]
    DegreeMismatch { location: String, detail: String },
    #[error("{location}: tuple repeats an earlier entry")]
    DuplicateTuple { location: String },
    #[error("unit {0:?} is missing or not in degree 0")]
    BadUnit(String),
    #[error("{location}: {source}")]
    Scalar { location: String, source: ScalarParseError },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    ids: Vec<String>,
    degrees: Vec<usize>,
    offsets: Vec<usize>,
    index: HashMap<String, usize>,
}

impl GradedBasis {
    fn new(mut elems: Vec<(String, usize)>, top: usize) -> Result<Self, ModelError> {
        let mut seen = BTreeSet::new();
        for (id, d) in &elems {
            if !seen.insert(id.clone()) {
                return Err(ModelError::DuplicateId(id.clone()));
            }
            if *d > top {
                return Err(ModelError::DegreeOutOfRange { id: id.clone(), degree: *d, top });
            }
        }
        elems.sort_by_key(|(_, d)| *d);
        let mut offsets = vec![0; top + 2];
        for (_, d) in &elems {
            offsets[d + 1] += 1;
        }
        for k in 1..offsets.len() {
            offsets[k] += offsets[k - 1];
        }
        let index = elems.iter().enumerate().map(|(i, (id, _))| (id.clone(), i)).collect();
        let (ids, degrees) = elems.into_iter().unzip();
        Ok(GradedBasis { ids, degrees, offsets, index })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn range(&self, k: usize) -> std::ops::Range<usize> {
        if k + 1 >= self.offsets.len() {
            return self.ids.len()..self.ids.len();
        }
        self.offsets[k]..self.offsets[k + 1]
    }
}

/// Entry of a structure-constant table.
pub type Terms = Vec<(usize, Scalar)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dgca {
    name: String,
    top: usize,
    basis: GradedBasis,
    unit: usize,
    mul: Vec<Vec<Terms>>,
    diff: Vec<Terms>,
    integral: Terms,
}

/// Collects declarations by id and assembles a [`Dgca`].
#[derive(Clone, Debug, Default)]
pub struct DgcaBuilder {
    name: String,
    top: usize,
    elements: Vec<(String, usize)>,
    unit: Option<String>,
    mul: Vec<(String, String, String, Scalar)>,
    diff: Vec<(String, String, Scalar)>,
    integral: Vec<(String, Scalar)>,
}

impl DgcaBuilder {
    pub fn new(name: &str, top: usize) -> Self {
        DgcaBuilder { name: name.to_string(), top, ..Default::default() }
    }

    pub fn element(mut self, id: &str, degree: usize) -> Self {
        self.elements.push((id.to_string(), degree));
        self
    }

    pub fn unit(mut self, id: &str) -> Self {
        self.unit = Some(id.to_string());
        self
    }

    pub fn mul(mut self, a: &str, b: &str, c: &str, coef: Scalar) -> Self {
        self.mul.push((a.to_string(), b.to_string(), c.to_string(), coef));
        self
    }

    pub fn diff(mut self, a: &str, b: &str, coef: Scalar) -> Self {
        self.diff.push((a.to_string(), b.to_string(), coef));
        self
    }

    pub fn integral(mut self, a: &str, coef: Scalar) -> Self {
        self.integral.push((a.to_string(), coef));
        self
    }

    pub fn build(self) -> Result<Dgca, ModelError> {
        let basis = GradedBasis::new(self.elements, self.top)?;
        let n = basis.len();
        let look = |id: &str, location: String| {
            basis.index_of(id).ok_or(ModelError::UnknownId { id: id.to_string(), location })
        };
        let unit_id = self.unit.clone().unwrap_or_default();
        let unit = basis
            .index_of(&unit_id)
            .filter(|&u| basis.degree(u) == 0)
            .ok_or(ModelError::BadUnit(unit_id))?;

        let mut mul: Vec<Vec<Terms>> = vec![vec![Vec::new(); n]; n];
        let mut orientation: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        let mut coords: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
        let mut explicit = vec![false; n];
        for (t, (a, b, c, coef)) in self.mul.iter().enumerate() {
            let location = format!("mul[{t}]");
            let (ia, ib, ic) = (look(a, location.clone())?, look(b, location.clone())?, look(c, location.clone())?);
            let (da, db, dc) = (basis.degree(ia), basis.degree(ib), basis.degree(ic));
            if da + db != dc {
                return Err(ModelError::DegreeMismatch {
                    location,
                    detail: format!("|{a}|+|{b}| = {} but |{c}| = {dc}", da + db),
                });
            }
            let pair = (ia.min(ib), ia.max(ib));
            // Each unordered pair is declared in a single orientation.
            if *orientation.entry(pair).or_insert((ia, ib)) != (ia, ib) || !coords.insert((pair.0, pair.1, ic)) {
                return Err(ModelError::DuplicateTuple { location });
            }
            if ia == unit {
                explicit[ib] = true;
            }
            if ib == unit {
                explicit[ia] = true;
            }
            if coef.is_zero() {
                continue;
            }
            mul[ia][ib].push((ic, coef.clone()));
            if ia != ib {
                mul[ib][ia].push((ic, sign(da * db) * coef));
            }
        }
        for e in 0..n {
            if !explicit[e] {
                mul[unit][e].push((e, Scalar::one()));
                if e != unit {
                    mul[e][unit].push((e, Scalar::one()));
                }
            }
        }
        for row in mul.iter_mut() {
            for t in row.iter_mut() {
                *t = normalize(std::mem::take(t));
            }
        }

        let mut diff: Vec<Terms> = vec![Vec::new(); n];
        let mut dseen = BTreeSet::new();
        for (t, (a, b, coef)) in self.diff.iter().enumerate() {
            let location = format!("diff[{t}]");
            let (ia, ib) = (look(a, location.clone())?, look(b, location.clone())?);
            if basis.degree(ib) != basis.degree(ia) + 1 {
                return Err(ModelError::DegreeMismatch {
                    location,
                    detail: format!("|{b}| must be |{a}|+1"),
                });
            }
            if !dseen.insert((ia, ib)) {
                return Err(ModelError::DuplicateTuple { location });
            }
            diff[ia].push((ib, coef.clone()));
        }
        for t in diff.iter_mut() {
            *t = normalize(std::mem::take(t));
        }

        let mut integral = Vec::new();
        let mut iseen = BTreeSet::new();
        for (t, (a, coef)) in self.integral.iter().enumerate() {
            let location = format!("integrate[{t}]");
            let ia = look(a, location.clone())?;
            if basis.degree(ia) != self.top {
                return Err(ModelError::DegreeMismatch {
                    location,
                    detail: format!("{a} is not in the top degree {}", self.top),
                });
            }
            if !iseen.insert(ia) {
                return Err(ModelError::DuplicateTuple { location });
            }
            integral.push((ia, coef.clone()));
        }
        let integral = normalize(integral);

        Ok(Dgca { name: self.name, top: self.top, basis, unit, mul, diff, integral })
    }
}

fn normalize(mut t: Terms) -> Terms {
    t.sort_by_key(|(i, _)| *i);
    let mut out: Terms = Vec::new();
    for (i, x) in t {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

impl Dgca {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn top_degree(&self) -> usize {
        self.top
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.basis.range(k).len()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.top).map(|k| self.dim(k)).collect()
    }

    pub fn range(&self, k: usize) -> std::ops::Range<usize> {
        self.basis.range(k)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.basis.degree(i)
    }

    pub fn id(&self, i: usize) -> &str {
        self.basis.id(i)
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn unit_vector(&self) -> Vec<Scalar> {
        crate::linalg::unit_vector(self.len(), self.unit)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &Terms {
        &self.mul[i][j]
    }

    pub fn basis_diff(&self, i: usize) -> &Terms {
        &self.diff[i]
    }

    pub fn integral_terms(&self) -> &Terms {
        &self.integral
    }

    pub fn zero_vector(&self) -> Vec<Scalar> {
        vec![zero(); self.len()]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        crate::linalg::unit_vector(self.len(), i)
    }

    /// Places a local coordinate vector of degree `k` into the global basis.
    pub fn embed(&self, k: usize, local: &[Scalar]) -> Vec<Scalar> {
        let mut v = self.zero_vector();
        for (x, i) in local.iter().zip(self.range(k)) {
            v[i] = x.clone();
        }
        v
    }

    /// Degree-`k` component of `v` in local coordinates.
    pub fn restrict(&self, k: usize, v: &[Scalar]) -> Vec<Scalar> {
        v[self.range(k)].to_vec()
    }

    /// Degree of a nonzero homogeneous vector.
    pub fn degree_of(&self, v: &[Scalar]) -> Option<usize> {
        v.iter().position(|x| !x.is_zero()).map(|i| self.degree(i))
    }

    pub fn product(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vector();
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.mul[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    pub fn d(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vector();
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, c) in &self.diff[i] {
                out[*k] += a * c;
            }
        }
        out
    }

    pub fn integrate(&self, v: &[Scalar]) -> Scalar {
        let mut s = zero();
        for (i, c) in &self.integral {
            if !v[*i].is_zero() {
                s += &v[*i] * c;
            }
        }
        s
    }

    /// `⟨u, v⟩ = ∫ u·v`.
    pub fn pair(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        self.integrate(&self.product(u, v))
    }

    /// Matrix of `d: A^k → A^{k+1}` in local coordinates.
    pub fn d_matrix(&self, k: usize) -> Matrix {
        let src = self.range(k);
        let tgt = self.range(k + 1);
        let mut m = Matrix::zeros(tgt.len(), src.len());
        for (j, i) in src.clone().enumerate() {
            for (t, c) in &self.diff[i] {
                m.set(t - tgt.start, j, c.clone());
            }
        }
        m
    }

    /// Matrix of the pairing `A^k × A^{n-k} → F`, rows indexed by `A^{n-k}`.
    pub fn pairing_matrix(&self, k: usize) -> Matrix {
        if k > self.top {
            return Matrix::zeros(0, 0);
        }
        let src = self.range(k);
        let dual = self.range(self.top - k);
        let mut m = Matrix::zeros(dual.len(), src.len());
        for (c, i) in src.enumerate() {
            for (r, j) in dual.clone().enumerate() {
                let mut s = zero();
                for (t, x) in &self.mul[j][i] {
                    for (u, y) in &self.integral {
                        if t == u {
                            s += x * y;
                        }
                    }
                }
                m.set(r, c, s);
            }
        }
        m
    }

    /// Stored multiplication entries: one orientation per unordered pair,
    /// implicit unit products omitted.
    pub fn stored_products(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i..self.len() {
                let terms = &self.mul[i][j];
                if i == self.unit || j == self.unit {
                    let other = if i == self.unit { j } else { i };
                    if terms.len() == 1 && terms[0].0 == other && terms[0].1.is_one() {
                        continue;
                    }
                    if terms.is_empty() {
                        // Keeps an explicitly vanishing unit product explicit.
                        out.push((i, j, other, zero()));
                        continue;
                    }
                }
                for (k, c) in terms {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    /// Rebuilds a builder holding this algebra's declarations.
    pub fn to_builder(&self) -> DgcaBuilder {
        let mut b = DgcaBuilder::new(&self.name, self.top);
        for i in 0..self.len() {
            b = b.element(self.id(i), self.degree(i));
        }
        b = b.unit(self.id(self.unit));
        for (i, j, k, c) in self.stored_products() {
            b = b.mul(self.id(i), self.id(j), self.id(k), c);
        }
        for i in 0..self.len() {
            for (k, c) in &self.diff[i] {
                b = b.diff(self.id(i), self.id(*k), c.clone());
            }
        }
        for (i, c) in &self.integral {
            b = b.integral(self.id(*i), c.clone());
        }
        b
    }

    /// Same algebra with integration scaled by `c`.
    pub fn with_integral_scaled(&self, c: &Scalar) -> Dgca {
        let mut a = self.clone();
        a.integral = normalize(a.integral.into_iter().map(|(i, x)| (i, x * c)).collect());
        a
    }

    /// Renders a vector as `c*id + ...`.
    pub fn show(&self, v: &[Scalar]) -> String {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| {
                if x.is_one() {
                    self.id(i).to_string()
                } else {
                    format!("{}*{}", scalar::format(x), self.id(i))
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// One failed axiom with the basis elements that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Commutativity { a: String },
    Associativity { a: String, b: String, c: String },
    Unit { a: String },
    Leibniz { a: String, b: String },
    DSquared { a: String },
    IntegralOfExact { a: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Commutativity { a } => write!(f, "commutativity: {a}*{a} must vanish for odd {a}"),
            Violation::Associativity { a, b, c } => write!(f, "associativity: ({a}*{b})*{c} != {a}*({b}*{c})"),
            Violation::Unit { a } => write!(f, "unit: 1*{a} != {a}"),
            Violation::Leibniz { a, b } => write!(f, "leibniz: d({a}*{b}) fails"),
            Violation::DSquared { a } => write!(f, "d^2: d(d{a}) != 0"),
            Violation::IntegralOfExact { a } => write!(f, "integration: integral of d{a} != 0"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks all DGCA axioms on basis elements.
pub fn validate_dgca(a: &Dgca) -> ValidationReport {
    let n = a.len();
    let id = |i: usize| a.id(i).to_string();
    let mut violations = Vec::new();

    for i in 0..n {
        if a.degree(i) % 2 == 1 && !a.mul[i][i].is_empty() {
            violations.push(Violation::Commutativity { a: id(i) });
        }
    }
    for i in 0..n {
        let p = a.product(&a.unit_vector(), &a.basis_vector(i));
        if p != a.basis_vector(i) {
            violations.push(Violation::Unit { a: id(i) });
        }
    }
    let assoc: Vec<Vec<Violation>> = par::map_range(n, |i| {
        let ei = a.basis_vector(i);
        let mut out = Vec::new();
        for j in 0..n {
            if a.degree(i) + a.degree(j) > a.top {
                continue;
            }
            let ij = a.product(&ei, &a.basis_vector(j));
            for k in 0..n {
                if a.degree(i) + a.degree(j) + a.degree(k) > a.top {
                    continue;
                }
                let ek = a.basis_vector(k);
                let left = a.product(&ij, &ek);
                let right = a.product(&ei, &a.product(&a.basis_vector(j), &ek));
                if left != right {
                    out.push(Violation::Associativity { a: id(i), b: id(j), c: id(k) });
                }
            }
        }
        out
    });
    violations.extend(assoc.into_iter().flatten());
    for i in 0..n {
        let ei = a.basis_vector(i);
        for j in i..n {
            if a.degree(i) + a.degree(j) + 1 > a.top {
                continue;
            }
            let ej = a.basis_vector(j);
            let lhs = a.d(&a.product(&ei, &ej));
            let mut rhs = a.product(&a.d(&ei), &ej);
            let t = a.product(&ei, &a.d(&ej));
            crate::linalg::add_scaled(&mut rhs, &sign(a.degree(i)), &t);
            if lhs != rhs {
                violations.push(Violation::Leibniz { a: id(i), b: id(j) });
            }
        }
    }
    for i in 0..n {
        let ei = a.basis_vector(i);
        let di = a.d(&ei);
        if !crate::linalg::is_zero_vec(&a.d(&di)) {
            violations.push(Violation::DSquared { a: id(i) });
        }
        if a.degree(i) + 1 == a.top && !a.integrate(&di).is_zero() {
            violations.push(Violation::IntegralOfExact { a: id(i) });
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn toy() -> DgcaBuilder {
        DgcaBuilder::new("toy", 4)
            .element("x0", 0)
            .element("x2", 2)
            .element("x3", 3)
            .element("x4", 4)
            .unit("x0")
            .mul("x2", "x2", "x4", int(1))
            .diff("x2", "x3", int(1))
            .integral("x4", int(1))
    }

    #[test]
    fn builds_and_validates() {
        let a = toy().build().unwrap();
        assert_eq!(a.dims(), vec![1, 0, 1, 1, 1]);
        assert!(validate_dgca(&a).is_ok());
        let x2 = a.basis_vector(1);
        assert_eq!(a.pair(&x2, &x2), int(1));
    }

    #[test]
    fn integration_of_exact_is_reported() {
        let a = DgcaBuilder::new("bad", 4)
            .element("x0", 0)
            .element("x2", 2)
            .element("x3", 3)
            .element("x4", 4)
            .unit("x0")
            .mul("x2", "x2", "x4", int(1))
            .diff("x3", "x4", int(1))
            .integral("x4", int(1))
            .build()
            .unwrap();
        let r = validate_dgca(&a);
        assert!(r.violations.contains(&Violation::IntegralOfExact { a: "x3".into() }));
    }

    #[test]
    fn odd_square_is_reported() {
        let a = DgcaBuilder::new("odd", 2)
            .element("1", 0)
            .element("t", 1)
            .element("w", 2)
            .unit("1")
            .mul("t", "t", "w", int(1))
            .integral("w", int(1))
            .build()
            .unwrap();
        assert!(validate_dgca(&a).violations.contains(&Violation::Commutativity { a: "t".into() }));
    }

    #[test]
    fn builder_errors() {
        assert!(matches!(toy().element("x2", 2).build(), Err(ModelError::DuplicateId(_))));
        assert!(matches!(toy().mul("x2", "x3", "x4", int(1)).build(), Err(ModelError::DegreeMismatch { .. })));
        assert!(matches!(toy().mul("x2", "x2", "x4", int(2)).build(), Err(ModelError::DuplicateTuple { .. })));
        assert!(matches!(toy().diff("x9", "x3", int(1)).build(), Err(ModelError::UnknownId { .. })));
        assert!(matches!(toy().element("x9", 7).build(), Err(ModelError::DegreeOutOfRange { .. })));
        assert!(matches!(toy().unit("x2").build(), Err(ModelError::BadUnit(_))));
    }

    #[test]
    fn koszul_sign_is_derived() {
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
        assert_eq!(a.basis_product(2, 1), &vec![(3, int(-1))]);
        assert!(validate_dgca(&a).is_ok());
    }

    #[test]
    fn builder_round_trip() {
        let a = toy().build().unwrap();
        assert_eq!(a.to_builder().build().unwrap(), a);
    }
}
