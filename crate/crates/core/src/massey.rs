//! Defining systems and higher Massey products, degree screens for their
//! triviality, and the comparison of triple products with `μ_3`.
//!
//! Conventions: `ā = (-1)^{|a|} a`, `d a_ij = Σ_{k=i}^{j-1} ā_ik a_{k+1,j}`,
//! and the product is the class of `α = Σ_{k=1}^{l-1} ā_1k a_{k+1,l}`.
//! With the canonical system `a_ij = d⁻(…)` one gets
//! `[α] = (-1)^{|x_2|+1} μ_3(x_1, x_2, x_3)`.

use crate::cohomology::{compute_cohomology, CohomologyData};
use crate::dgca::Dgca;
use crate::hodge::HodgeDecomposition;
use crate::linalg::{self, Echelon};
use crate::obstruction;
use crate::scalar::{sign, zero, Scalar};
use crate::sparse::SparseVec;
use crate::transfer::{transfer_explicit, HarmonicBasis};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MasseyError {
    #[error("a Massey product needs at least three entries, got {0}")]
    TooShort(usize),
    #[error("entry {0} is not a homogeneous cocycle")]
    NotCocycle(usize),
    #[error("no defining system exists")]
    NoDefiningSystem,
    #[error("pairwise products do not vanish in cohomology")]
    ProductsNonzero,
}

/// A triangular family `a_ij`, `1 ≤ i ≤ j ≤ l`, `(i,j) ≠ (1,l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningSystem {
    pub degrees: Vec<usize>,
    pub entries: BTreeMap<(usize, usize), Vec<Scalar>>,
}

impl DefiningSystem {
    pub fn order(&self) -> usize {
        self.degrees.len()
    }

    /// `|a_ij| = |x_i| + … + |x_j| - (j - i)`; may be negative.
    pub fn degree(&self, i: usize, j: usize) -> i64 {
        self.degrees[i - 1..j].iter().sum::<usize>() as i64 - (j - i) as i64
    }

    pub fn get(&self, i: usize, j: usize) -> &Vec<Scalar> {
        &self.entries[&(i, j)]
    }

    /// `Σ_{k=i}^{j-1} ā_ik a_{k+1,j}`, also defined for `(1, l)`.
    pub fn rhs(&self, a: &Dgca, i: usize, j: usize) -> Vec<Scalar> {
        let mut out = a.zero_vector();
        for k in i..j {
            let s = sign(self.degree(i, k).rem_euclid(2) as usize);
            linalg::add_scaled(&mut out, &s, &a.product(self.get(i, k), self.get(k + 1, j)));
        }
        out
    }

    /// The associated cocycle `α`.
    pub fn alpha(&self, a: &Dgca) -> Vec<Scalar> {
        self.rhs(a, 1, self.order())
    }

    /// Degree of `α`: `Σ|x_i| + 2 - l`.
    pub fn alpha_degree(&self) -> i64 {
        self.degree(1, self.order()) + 1
    }

    /// Every defining equation holds and `α` is closed.
    pub fn check(&self, a: &Dgca) -> bool {
        let l = self.order();
        for span in 1..l - 1 {
            for i in 1..=l - span {
                let j = i + span;
                if a.d(self.get(i, j)) != self.rhs(a, i, j) {
                    return false;
                }
            }
        }
        linalg::is_zero_vec(&a.d(&self.alpha(a)))
    }
}

fn check_inputs(a: &Dgca, xs: &[Vec<Scalar>]) -> Result<Vec<usize>, MasseyError> {
    if xs.len() < 3 {
        return Err(MasseyError::TooShort(xs.len()));
    }
    let mut degrees = Vec::new();
    for (p, x) in xs.iter().enumerate() {
        if !linalg::is_zero_vec(&a.d(x)) {
            return Err(MasseyError::NotCocycle(p + 1));
        }
        match a.degree_of(x) {
            Some(k) => degrees.push(k),
            None => {
                if !linalg::is_zero_vec(x) {
                    return Err(MasseyError::NotCocycle(p + 1));
                }
                degrees.push(0);
            }
        }
    }
    Ok(degrees)
}

/// Solves `d a = rhs` in degree `deg`, preferring `d⁻`.
fn primitive(a: &Dgca, dec: Option<&HodgeDecomposition>, deg: i64, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
    if linalg::is_zero_vec(rhs) {
        return Some(a.zero_vector());
    }
    if deg < 0 || deg as usize >= a.top_degree() {
        return None;
    }
    if let Some(dec) = dec {
        let cand = dec.dminus_apply(rhs);
        if a.d(&cand) == rhs {
            return Some(cand);
        }
    }
    let k = deg as usize;
    let local = a.d_matrix(k).solve(&a.restrict(k + 1, rhs))?;
    Some(a.embed(k, &local))
}

/// Builds the canonical defining system by increasing span `j - i`. Zero
/// inputs are treated as degree 0; use [`find_defining_system_graded`] to
/// fix their degrees.
pub fn find_defining_system(
    a: &Dgca,
    xs: &[Vec<Scalar>],
    dec: Option<&HodgeDecomposition>,
) -> Result<Option<DefiningSystem>, MasseyError> {
    let degrees = check_inputs(a, xs)?;
    find_defining_system_graded(a, xs, &degrees, dec)
}

/// As [`find_defining_system`], with the input degrees given explicitly.
pub fn find_defining_system_graded(
    a: &Dgca,
    xs: &[Vec<Scalar>],
    degrees: &[usize],
    dec: Option<&HodgeDecomposition>,
) -> Result<Option<DefiningSystem>, MasseyError> {
    let l = xs.len();
    let mut sys = DefiningSystem { degrees: degrees.to_vec(), entries: BTreeMap::new() };
    for (i, x) in xs.iter().enumerate() {
        sys.entries.insert((i + 1, i + 1), x.clone());
    }
    for span in 1..l - 1 {
        for i in 1..=l - span {
            let j = i + span;
            let rhs = sys.rhs(a, i, j);
            match primitive(a, dec, sys.degree(i, j), &rhs) {
                Some(v) => {
                    sys.entries.insert((i, j), v);
                }
                None => return Ok(None),
            }
        }
    }
    Ok(Some(sys))
}

/// A Massey product as an affine subspace of `H^degree`, in local class
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductDescription {
    pub degree: i64,
    pub representative: Vec<Scalar>,
    /// Basis of the indeterminacy; empty and meaningless when `partial`.
    pub indeterminacy: Vec<Vec<Scalar>>,
    /// Only the canonical system's class is known.
    pub partial: bool,
    /// `Some(true)` when `0` is in the set, `Some(false)` when it is not,
    /// `None` when undecided.
    pub trivial: Option<bool>,
}

impl ProductDescription {
    /// Exact membership of a class (local coordinates) in the set.
    pub fn contains(&self, v: &[Scalar]) -> Option<bool> {
        let diff: Vec<Scalar> = v.iter().zip(&self.representative).map(|(x, y)| x - y).collect();
        if linalg::is_zero_vec(&diff) {
            return Some(true);
        }
        if self.partial {
            return None;
        }
        Some(Echelon::from_vectors(diff.len(), &self.indeterminacy).contains(&diff))
    }
}

fn local_class(h: &CohomologyData, a: &Dgca, deg: i64, v: &[Scalar]) -> Vec<Scalar> {
    if deg < 0 || deg as usize > a.top_degree() {
        return Vec::new();
    }
    let g = h.class_of(a, v);
    g[h.classes(deg as usize)].to_vec()
}

/// The Massey product `⟨x_1, …, x_l⟩`. For `l = 3` this is the full
/// affine set `[α] + [x_1]·H + H·[x_3]`; for larger `l` only the canonical
/// system's class is computed.
pub fn massey_product(a: &Dgca, xs: &[Vec<Scalar>], dec: Option<&HodgeDecomposition>) -> Result<ProductDescription, MasseyError> {
    let h = compute_cohomology(a);
    let sys = find_defining_system(a, xs, dec)?.ok_or(MasseyError::NoDefiningSystem)?;
    let deg = sys.alpha_degree();
    let representative = local_class(&h, a, deg, &sys.alpha(a));
    let zero = linalg::is_zero_vec(&representative);
    if xs.len() > 3 {
        return Ok(ProductDescription { degree: deg, representative, indeterminacy: Vec::new(), partial: true, trivial: zero.then_some(true) });
    }
    // Varying a_12 by a cocycle c changes α by c̄·x_3; varying a_23 by c'
    // changes it by x̄_1·c'.
    let mut indeterminacy = Vec::new();
    let (d12, d23) = (sys.degree(1, 2), sys.degree(2, 3));
    if d23 >= 0 && d23 as usize <= a.top_degree() {
        for i in h.classes(d23 as usize) {
            indeterminacy.push(local_class(&h, a, deg, &a.product(&xs[0], h.rep(i))));
        }
    }
    if d12 >= 0 && d12 as usize <= a.top_degree() {
        for i in h.classes(d12 as usize) {
            indeterminacy.push(local_class(&h, a, deg, &a.product(h.rep(i), &xs[2])));
        }
    }
    let dim = representative.len();
    let indeterminacy = linalg::independent(dim, &indeterminacy);
    let trivial = zero || Echelon::from_vectors(dim, &indeterminacy).contains(&representative);
    Ok(ProductDescription { degree: deg, representative, indeterminacy, partial: false, trivial: Some(trivial) })
}

/// Which rule settled a screen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScreenReason {
    ZeroEntry,
    DegreeZeroEntry,
    TopDegree,
    BelowWindow,
    OutsideWindow,
    LowDimension,
    DegreeSevenTriple,
    DegreeEightTriple,
}

impl fmt::Display for ScreenReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScreenReason::ZeroEntry => "zero-entry",
            ScreenReason::DegreeZeroEntry => "degree-zero-entry",
            ScreenReason::TopDegree => "top-degree",
            ScreenReason::BelowWindow => "below-window",
            ScreenReason::OutsideWindow => "outside-window",
            ScreenReason::LowDimension => "low-dimension",
            ScreenReason::DegreeSevenTriple => "degree-seven-triple",
            ScreenReason::DegreeEightTriple => "degree-eight-triple",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Screen {
    Trivial(ScreenReason),
    Unscreened,
}

impl Screen {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Screen::Trivial(_))
    }
}

/// Data for a degree screen. `r` is the least positive degree with nonzero
/// cohomology; `hodge_product` asserts that the algebra is of Hodge type and
/// simply connected up to a tensor factor of closed degree-1 variables,
/// which enables the triple-product rules in degrees 7 and 8.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScreenQuery {
    pub l: usize,
    pub degrees: Option<Vec<usize>>,
    pub r: usize,
    pub n: usize,
    pub connected: bool,
    pub zero_entry: bool,
    pub hodge_product: bool,
}

impl ScreenQuery {
    pub fn new(degrees: &[usize], r: usize, n: usize) -> Self {
        ScreenQuery { l: degrees.len(), degrees: Some(degrees.to_vec()), r, n, connected: true, zero_entry: false, hodge_product: false }
    }

    pub fn of_length(l: usize, r: usize, n: usize) -> Self {
        ScreenQuery { l, degrees: None, r, n, connected: true, zero_entry: false, hodge_product: false }
    }
}

/// `(r + a_1, …, r + a_l)` with `a_i ≥ 0` and `Σ a_i ≤ q`.
fn in_window(degrees: &[usize], r: usize, q: usize) -> bool {
    degrees.iter().all(|&d| d >= r) && degrees.iter().map(|&d| d - r).sum::<usize>() <= q
}

/// Degree-based sufficient conditions for triviality, applied in a fixed
/// order.
pub fn triviality_screen(q: &ScreenQuery) -> Screen {
    let l = q.l;
    if q.zero_entry {
        return Screen::Trivial(ScreenReason::ZeroEntry);
    }
    if let Some(ds) = &q.degrees {
        if q.connected && ds.contains(&0) {
            return Screen::Trivial(ScreenReason::DegreeZeroEntry);
        }
        if q.connected && ds.iter().sum::<usize>() + 2 == q.n + l {
            return Screen::Trivial(ScreenReason::TopDegree);
        }
    }
    if q.r > 1 {
        let base = q.r * (l + 1) + 2;
        if q.n + l < base {
            return Screen::Trivial(ScreenReason::BelowWindow);
        }
        if let Some(ds) = &q.degrees {
            let slack = q.n + l - base;
            if !in_window(ds, q.r, slack) {
                return Screen::Trivial(ScreenReason::OutsideWindow);
            }
        }
    }
    if q.hodge_product && l == 3 {
        if q.n <= 6 {
            return Screen::Trivial(ScreenReason::LowDimension);
        }
        if let Some(ds) = &q.degrees {
            if q.n == 7 && ds[..] != [2, 2, 2] {
                return Screen::Trivial(ScreenReason::DegreeSevenTriple);
            }
            let eight: [[usize; 3]; 4] = [[2, 2, 2], [2, 2, 3], [2, 3, 2], [3, 2, 2]];
            if q.n == 8 && !eight.iter().any(|e| ds[..] == e[..]) {
                return Screen::Trivial(ScreenReason::DegreeEightTriple);
            }
        }
    }
    Screen::Unscreened
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crosscheck {
    /// `μ_3` of the classes, local coordinates in the product's degree.
    pub mu3: Vec<Scalar>,
    pub product: ProductDescription,
    pub member: bool,
}

/// Compares `(-1)^{|x_2|+1} μ_3(x_1, x_2, x_3)` with the triple Massey
/// product of the harmonic representatives. Classes are given in the
/// class coordinates of [`compute_cohomology`].
pub fn crosscheck_mu3(dec: &HodgeDecomposition, classes: &[SparseVec; 3]) -> Result<Crosscheck, MasseyError> {
    let a = dec.algebra();
    let hb = HarmonicBasis::new(dec);
    let ring = hb.ring(a);
    for w in classes.windows(2) {
        if !ring.product(&w[0], &w[1]).is_empty() {
            return Err(MasseyError::ProductsNonzero);
        }
    }
    let xs: Vec<Vec<Scalar>> = classes
        .iter()
        .map(|c| {
            let mut v = a.zero_vector();
            for (i, x) in c {
                linalg::add_scaled(&mut v, x, &hb.reps[*i]);
            }
            v
        })
        .collect();
    let product = massey_product(a, &xs, Some(dec))?;
    let s = transfer_explicit(dec);
    let m = obstruction::apply(&s.mu3(), classes);
    let deg2 = classes[1].first().map_or(0, |(i, _)| hb.space().degree(*i));
    let mut global = vec![zero(); hb.space().dim()];
    for (i, x) in m {
        global[i] = x * sign(deg2 + 1);
    }
    let mu3 = if product.degree >= 0 && product.degree as usize <= a.top_degree() {
        global[hb.cohomology.classes(product.degree as usize)].to_vec()
    } else {
        Vec::new()
    };
    let member = product.contains(&mu3).unwrap_or(false);
    Ok(Crosscheck { mu3, product, member })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::hodge::find_hodge;
    use crate::scalar::{int, one};

    fn nf7() -> (Dgca, HodgeDecomposition) {
        let a = catalog::nonformal_7();
        let dec = find_hodge(&a).unwrap();
        (a, dec)
    }

    fn v(a: &Dgca, id: &str) -> Vec<Scalar> {
        a.basis_vector(a.basis().index_of(id).unwrap())
    }

    #[test]
    fn defining_system_on_nonformal_7() {
        let (a, dec) = nf7();
        let xs = [v(&a, "x"), v(&a, "y"), v(&a, "y")];
        let sys = find_defining_system(&a, &xs, Some(&dec)).unwrap().unwrap();
        assert!(sys.check(&a));
        assert_eq!(sys.alpha_degree(), 5);
        let p = massey_product(&a, &xs, Some(&dec)).unwrap();
        assert_eq!(p.trivial, Some(false));
        // Without a decomposition the echelon solve gives the same set.
        let q = massey_product(&a, &xs, None).unwrap();
        assert_eq!(q.contains(&p.representative), Some(true));
    }

    #[test]
    fn nonvanishing_product_has_no_system() {
        let a = catalog::projective("cp3", 3);
        let x = v(&a, "a");
        assert_eq!(find_defining_system(&a, &[x.clone(), x.clone(), x], None).unwrap(), None);
    }

    #[test]
    fn zero_middle_entry() {
        let (a, _) = nf7();
        let xs = [v(&a, "x"), a.zero_vector(), v(&a, "y")];
        let sys = find_defining_system_graded(&a, &xs, &[2, 2, 2], None).unwrap().unwrap();
        assert!(sys.check(&a));
    }

    #[test]
    fn top_degree_triple_is_trivial() {
        let (a, dec) = nf7();
        let p = massey_product(&a, &[v(&a, "x"), v(&a, "z"), v(&a, "z")], Some(&dec)).unwrap();
        assert_eq!(p.degree, 7);
        assert_eq!(p.trivial, Some(true));
        assert_eq!(p.indeterminacy.len(), 1);
    }

    #[test]
    fn representative_change_keeps_the_set() {
        let (a, dec) = nf7();
        let p = massey_product(&a, &[v(&a, "x"), v(&a, "y"), v(&a, "w")], Some(&dec)).unwrap();
        // w + xy = w + du represents the same class.
        let mut w2 = v(&a, "w");
        linalg::add_scaled(&mut w2, &int(1), &a.d(&v(&a, "u")));
        let q = massey_product(&a, &[v(&a, "x"), v(&a, "y"), w2], Some(&dec)).unwrap();
        assert_eq!(q.contains(&p.representative), Some(true));
        assert_eq!(p.contains(&q.representative), Some(true));
        assert_eq!(p.indeterminacy.len(), q.indeterminacy.len());
    }

    #[test]
    fn crosscheck_on_nonformal_7() {
        let (_, dec) = nf7();
        let hb = HarmonicBasis::new(&dec);
        let sp = hb.space();
        let x = sp.index_of("[x]").unwrap();
        let y = sp.index_of("[y]").unwrap();
        let c = crosscheck_mu3(&dec, &[vec![(x, one())], vec![(y, one())], vec![(y, one())]]).unwrap();
        assert!(c.member);
        assert!(!linalg::is_zero_vec(&c.mu3));
        let scaled = crosscheck_mu3(&dec, &[vec![(x, int(3))], vec![(y, one())], vec![(y, one())]]).unwrap();
        assert!(scaled.member);
        let tripled: Vec<Scalar> = c.product.representative.iter().map(|t| t * int(3)).collect();
        assert_eq!(scaled.product.contains(&tripled), Some(true));
    }

    #[test]
    fn screens() {
        let t = |d: &[usize], r, n| triviality_screen(&ScreenQuery::new(d, r, n));
        assert!(t(&[2, 2, 3], 2, 7).is_trivial());
        assert_eq!(t(&[2, 2, 2], 2, 7), Screen::Unscreened);
        assert!(triviality_screen(&ScreenQuery::of_length(4, 2, 7)).is_trivial());
        assert!(triviality_screen(&ScreenQuery::of_length(3, 2, 6)).is_trivial());
        assert_eq!(t(&[2, 2, 2, 2], 2, 8), Screen::Unscreened);
        assert!(t(&[2, 2, 5], 2, 9).is_trivial());
        assert!(t(&[0, 2, 5], 1, 9).is_trivial());
    }
}
