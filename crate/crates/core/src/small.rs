//! The small algebra of a Hodge-type decomposition, generating subspaces of
//! cohomology, adapted splittings, and the small quotient algebra.

use crate::cohomology::{compute_cohomology, CohomologyData, CohomologyRing};
use crate::dgca::Dgca;
use crate::hodge::{change_harmonic, HodgeDecomposition, HodgeError};
use crate::ideal::{is_quasi_iso, null_ideal, quotient_by_ideal, subalgebra, IdealError, Quotient, SubAlgebra};
use crate::linalg::{self, Echelon, Matrix};
use crate::scalar::{one, Scalar};
use crate::sparse::SparseVec;
use crate::subspace::SubspaceFamily;
use num_traits::Zero;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmallError {
    #[error("the algebra is not connected (dim H^0 = {0})")]
    NotConnected(usize),
    #[error("the algebra is not simply connected (H^1 has dimension {0})")]
    NotSimplyConnected(usize),
    #[error("degree {degree}: the given map is not a section of the projection to cohomology")]
    NotASection { degree: usize },
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
}

/// `r` such that the algebra is `(r-1)`-connected: the least positive degree
/// with nonzero cohomology, or `n + 1` when there is none.
pub fn connectivity_index(betti: &[usize]) -> usize {
    (1..betti.len()).find(|&k| betti[k] != 0).unwrap_or(betti.len())
}

fn family_products(a: &Dgca, fam: &[Vec<Vec<Scalar>>], k: usize, min: usize) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    for l1 in min..=k.saturating_sub(min) {
        let l2 = k - l1;
        if l2 < min || l1 >= fam.len() || l2 >= fam.len() {
            continue;
        }
        for u in &fam[l1] {
            for v in &fam[l2] {
                out.push(a.restrict(k, &a.product(&a.embed(l1, u), &a.embed(l2, v))));
            }
        }
    }
    linalg::independent(a.dim(k), &out)
}

/// The small algebra: the smallest sub-DGCA containing `ℋ` and closed
/// under `d⁻`, computed degreewise by the recursion
/// `A^k = ℋ^k ⊕ dd⁻(P^k) ⊕ d⁻(P^{k+1})`, where `P^j` is spanned by products
/// of small elements of degrees at least 2 summing to `j`.
pub fn small_family(dec: &HodgeDecomposition) -> Result<SubspaceFamily, SmallError> {
    let a = dec.algebra();
    let n = a.top_degree();
    let b = compute_cohomology(a).betti();
    if b[0] != 1 {
        return Err(SmallError::NotConnected(b[0]));
    }
    if n >= 1 && b[1] != 0 {
        return Err(SmallError::NotSimplyConnected(b[1]));
    }
    let mut fam: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); n + 1];
    fam[0] = dec.harmonic().get(0).to_vec();
    for k in 2..=n {
        let mut vs = dec.harmonic().get(k).to_vec();
        for p in family_products(a, &fam, k, 2) {
            let g = dec.d_minus().apply(a, &a.embed(k, &p));
            vs.push(a.restrict(k, &a.d(&g)));
        }
        if k < n {
            for p in family_products(a, &fam, k + 1, 2) {
                vs.push(a.restrict(k, &dec.dminus_apply(&a.embed(k + 1, &p))));
            }
        }
        fam[k] = linalg::independent(a.dim(k), &vs);
    }
    Ok(SubspaceFamily::new(fam))
}

/// Whether a family contains `ℋ` and is closed under `d`, `d⁻` and
/// multiplication.
pub fn is_harmonic_subalgebra(dec: &HodgeDecomposition, fam: &SubspaceFamily) -> bool {
    let a = dec.algebra();
    if !dec.harmonic().is_subspace_of(a, fam) {
        return false;
    }
    let all: Vec<(usize, Vec<Scalar>)> = (0..=a.top_degree()).flat_map(|k| fam.global(a, k).into_iter().map(move |v| (k, v))).collect();
    for (_, v) in &all {
        if !fam.contains_global(a, &a.d(v)) || !fam.contains_global(a, &dec.dminus_apply(v)) {
            return false;
        }
    }
    all.iter().all(|(_, u)| all.iter().all(|(_, v)| fam.contains_global(a, &a.product(u, v))))
}

/// Closure of `ℋ` under `d`, `d⁻` and products by plain iteration; an
/// independent route to the small algebra.
pub fn saturate(dec: &HodgeDecomposition) -> SubspaceFamily {
    let a = dec.algebra();
    let n = a.top_degree();
    let mut ech: Vec<Echelon> = (0..=n).map(|k| Echelon::from_vectors(a.dim(k), dec.harmonic().get(k))).collect();
    loop {
        let elems: Vec<Vec<Scalar>> = (0..=n).flat_map(|k| ech[k].basis().into_iter().map(move |v| (k, v))).map(|(k, v)| a.embed(k, &v)).collect();
        let mut candidates = Vec::new();
        for v in &elems {
            candidates.push(a.d(v));
            candidates.push(dec.dminus_apply(v));
            for u in &elems {
                candidates.push(a.product(u, v));
            }
        }
        let mut grew = false;
        for c in candidates {
            if let Some(k) = a.degree_of(&c) {
                grew |= ech[k].insert(&a.restrict(k, &c));
            }
        }
        if !grew {
            return SubspaceFamily::new(ech.iter().map(Echelon::basis).collect());
        }
    }
}

#[derive(Clone, Debug)]
pub struct SmallAlgebra {
    pub family: SubspaceFamily,
    pub sub: SubAlgebra,
}

pub fn small_algebra(dec: &HodgeDecomposition) -> Result<SmallAlgebra, SmallError> {
    let family = small_family(dec)?;
    let sub = subalgebra(dec.algebra(), &family, &format!("{}-small", dec.algebra().name()))?;
    Ok(SmallAlgebra { family, sub })
}

/// Per-degree linear maps out of cohomology (or a subspace of it) into the
/// algebra, in local coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub blocks: Vec<Matrix>,
}

impl Splitting {
    pub fn image(&self) -> SubspaceFamily {
        SubspaceFamily::new(self.blocks.iter().map(|m| m.columns()).collect())
    }
}

/// `H_gen`, per degree, as vectors in class coordinates of `H^k`.
pub fn generating_subspace(h: &CohomologyData, ring: &CohomologyRing) -> Result<SubspaceFamily, SmallError> {
    let betti = h.betti();
    if betti[0] != 1 {
        return Err(SmallError::NotConnected(betti[0]));
    }
    let n = betti.len() - 1;
    let mut out = vec![Vec::new(); n + 1];
    for k in 1..=n {
        let dk = betti[k];
        let local = |v: &SparseVec| -> Vec<Scalar> {
            let mut x = vec![Scalar::zero(); dk];
            for (i, c) in v {
                x[i - h.classes(k).start] = c.clone();
            }
            x
        };
        let mut prods = Vec::new();
        for i in 1..k {
            for p in h.classes(i) {
                for q in h.classes(k - i) {
                    prods.push(local(&ring.product(&vec![(p, one())], &vec![(q, one())])));
                }
            }
        }
        out[k] = linalg::complement(dk, &prods);
    }
    Ok(SubspaceFamily::new(out))
}

/// Splitting `H → ℋ` sending a class to its harmonic representative.
pub fn harmonic_splitting(dec: &HodgeDecomposition, h: &CohomologyData) -> Splitting {
    let a = dec.algebra();
    let blocks = (0..=a.top_degree())
        .map(|k| {
            let hk = dec.harmonic().get(k);
            let range = h.classes(k);
            let cols: Vec<Vec<Scalar>> = hk
                .iter()
                .map(|v| {
                    let c = h.class_of(a, &a.embed(k, v));
                    range.clone().map(|i| c[i].clone()).collect()
                })
                .collect();
            let inv = Matrix::from_columns(range.len(), &cols).inverse().expect("harmonic classes form a basis");
            Matrix::from_columns(a.dim(k), hk).mul(&inv)
        })
        .collect();
    Splitting { blocks }
}

/// A monomial in `S(H_gen)`: nondecreasing generator indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub gens: Vec<usize>,
    pub degree: usize,
}

#[derive(Clone, Debug)]
pub struct GeneratingData {
    /// Generating subspace in class coordinates.
    pub h_gen: SubspaceFamily,
    /// Generators: (degree, class-coordinate vector), in order.
    pub generators: Vec<(usize, Vec<Scalar>)>,
    /// `ι₀` on each generator, as a global vector.
    pub iota0: Vec<Vec<Scalar>>,
    /// Monomials of `S(H_gen)` of positive degree up to `n`.
    pub monomials: Vec<Monomial>,
    /// `K^k` in coordinates over the degree-`k` monomials.
    pub kernel: Vec<Vec<Vec<Scalar>>>,
    /// `𝒦 = ι₀(K)`.
    pub kcal: SubspaceFamily,
    /// The adapted splitting `ι = ι₀ ⊕ ι₁`.
    pub iota: Splitting,
}

impl GeneratingData {
    pub fn monomials_of_degree(&self, k: usize) -> Vec<usize> {
        (0..self.monomials.len()).filter(|&i| self.monomials[i].degree == k).collect()
    }

    /// Dimension of `K^k` per degree.
    pub fn kernel_dims(&self) -> Vec<usize> {
        self.kernel.iter().map(Vec::len).collect()
    }
}

fn monomials(gen_degrees: &[usize], n: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    fn rec(gd: &[usize], n: usize, start: usize, cur: &mut Vec<usize>, deg: usize, out: &mut Vec<Monomial>) {
        for g in start..gd.len() {
            let d = deg + gd[g];
            if d > n {
                continue;
            }
            // Odd generators square to zero.
            if gd[g] % 2 == 1 && cur.last() == Some(&g) {
                continue;
            }
            cur.push(g);
            out.push(Monomial { gens: cur.clone(), degree: d });
            rec(gd, n, g, cur, d, out);
            cur.pop();
        }
    }
    rec(gen_degrees, n, 0, &mut Vec::new(), 0, &mut out);
    out.sort_by(|x, y| (x.degree, x.gens.len(), &x.gens).cmp(&(y.degree, y.gens.len(), &y.gens)));
    out
}

/// Builds `K`, `𝒦` and the adapted splitting `ι` from a partial splitting
/// `ι₀`, given per degree as a matrix from `H_gen` coordinates to `A^k`.
pub fn adapted_splitting(dec: &HodgeDecomposition, h_gen: &SubspaceFamily, iota0: &Splitting) -> Result<GeneratingData, SmallError> {
    let a = dec.algebra();
    let n = a.top_degree();
    let h = compute_cohomology(a);
    let ring = h.ring(a);
    let mut generators = Vec::new();
    let mut images = Vec::new();
    for k in 1..=n {
        let block = &iota0.blocks[k];
        for (j, g) in h_gen.get(k).iter().enumerate() {
            let img = a.embed(k, &block.column(j));
            let class = h.class_of(a, &img);
            let local: Vec<Scalar> = h.classes(k).map(|i| class[i].clone()).collect();
            if !linalg::is_zero_vec(&a.d(&img)) || &local != g {
                return Err(SmallError::NotASection { degree: k });
            }
            generators.push((k, g.clone()));
            images.push(img);
        }
    }
    let gd: Vec<usize> = generators.iter().map(|(k, _)| *k).collect();
    let monos = monomials(&gd, n);
    let class_global = |k: usize, local: &[Scalar]| -> SparseVec {
        local.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (h.classes(k).start + i, x.clone())).collect()
    };
    let mono_class = |m: &Monomial| -> SparseVec {
        let mut acc = ring.unit.clone();
        for &g in &m.gens {
            acc = ring.product(&acc, &class_global(generators[g].0, &generators[g].1));
        }
        acc
    };
    let mono_elem = |m: &Monomial| -> Vec<Scalar> {
        let mut acc = a.unit_vector();
        for &g in &m.gens {
            acc = a.product(&acc, &images[g]);
        }
        acc
    };
    let mut kernel = vec![Vec::new(); n + 1];
    let mut kcal = vec![Vec::new(); n + 1];
    let mut blocks = Vec::new();
    for k in 0..=n {
        let idx: Vec<usize> = (0..monos.len()).filter(|&i| monos[i].degree == k).collect();
        let bk = h.classes(k).len();
        let to_local = |v: &SparseVec| -> Vec<Scalar> {
            let mut x = vec![Scalar::zero(); bk];
            for (i, c) in v {
                x[i - h.classes(k).start] = c.clone();
            }
            x
        };
        let cols: Vec<Vec<Scalar>> = idx.iter().map(|&i| to_local(&mono_class(&monos[i]))).collect();
        let elems: Vec<Vec<Scalar>> = idx.iter().map(|&i| a.restrict(k, &mono_elem(&monos[i]))).collect();
        if !idx.is_empty() {
            let ker = Matrix::from_columns(bk, &cols).kernel();
            kcal[k] = linalg::independent(a.dim(k), &ker.iter().map(|c| linalg::combine(a.dim(k), c, &elems)).collect::<Vec<_>>());
            kernel[k] = ker;
        }
        // ι on H^k: generators map by ι₀, decomposables through monomials of length ≥ 2.
        if k == 0 {
            blocks.push(Matrix::from_columns(a.dim(0), &[a.restrict(0, &a.unit_vector())]));
            continue;
        }
        let gens_k = h_gen.get(k);
        let long: Vec<usize> = (0..idx.len()).filter(|&j| monos[idx[j]].gens.len() >= 2).collect();
        let dec_basis = linalg::independent(bk, &long.iter().map(|&j| cols[j].clone()).collect::<Vec<_>>());
        let mut basis = gens_k.to_vec();
        basis.extend(dec_basis.iter().cloned());
        let long_mat = Matrix::from_columns(bk, &long.iter().map(|&j| cols[j].clone()).collect::<Vec<_>>());
        let mut images_k: Vec<Vec<Scalar>> = (0..gens_k.len()).map(|j| iota0.blocks[k].column(j)).collect();
        for d in &dec_basis {
            let s = long_mat.solve(d).expect("decomposable classes are products of generators");
            let coeffs: Vec<Vec<Scalar>> = long.iter().map(|&j| elems[j].clone()).collect();
            images_k.push(linalg::combine(a.dim(k), &s, &coeffs));
        }
        let tinv = Matrix::from_columns(bk, &basis).inverse().expect("generators and decomposables span H^k");
        blocks.push(Matrix::from_columns(a.dim(k), &images_k).mul(&tinv));
    }
    Ok(GeneratingData {
        h_gen: h_gen.clone(),
        generators,
        iota0: images,
        monomials: monos,
        kernel,
        kcal: SubspaceFamily::new(kcal),
        iota: Splitting { blocks },
    })
}

/// Generating data with `H_gen` the echelon complement of the
/// decomposables and `ι₀` the harmonic splitting of `dec` on it.
pub fn default_generating_data(dec: &HodgeDecomposition) -> Result<GeneratingData, SmallError> {
    let a = dec.algebra();
    let h = compute_cohomology(a);
    let ring = h.ring(a);
    let h_gen = generating_subspace(&h, &ring)?;
    let split = harmonic_splitting(dec, &h);
    let iota0 = Splitting { blocks: (0..=a.top_degree()).map(|k| split.blocks[k].mul(&Matrix::from_columns(h.classes(k).len(), h_gen.get(k)))).collect() };
    adapted_splitting(dec, &h_gen, &iota0)
}

/// Replaces the harmonic subspace of `dec` by the image of the adapted
/// splitting.
pub fn adapted_decomposition(dec: &HodgeDecomposition) -> Result<(HodgeDecomposition, GeneratingData), SmallError> {
    let data = default_generating_data(dec)?;
    let moved = change_harmonic(dec, &data.iota.image())?;
    Ok((moved, data))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for StructureCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.name, if self.passed { "pass" } else { "FAIL" }, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct StructureReport {
    pub n: usize,
    pub r: usize,
    pub betti: Vec<usize>,
    pub small_dims: Vec<usize>,
    pub quotient_dims: Vec<usize>,
    /// Target degrees `k` with `d: Q^{k-1} → Q^k` nonzero.
    pub differential_support: Vec<usize>,
    pub square_injective: bool,
    pub checks: Vec<StructureCheck>,
}

impl StructureReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Whether every differential of the small quotient vanishes.
    pub fn formal_by_degree(&self) -> bool {
        self.differential_support.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SmallQuotient {
    pub small: SmallAlgebra,
    pub quotient: Quotient,
    pub report: StructureReport,
}

fn check(name: &str, passed: bool, detail: String) -> StructureCheck {
    StructureCheck { name: name.to_string(), passed, detail }
}

/// `Q_small = A_small / (A_small)_⊥` with the dimension, support and
/// quasi-isomorphism checks.
pub fn small_quotient(dec: &HodgeDecomposition) -> Result<SmallQuotient, SmallError> {
    let a = dec.algebra();
    let n = a.top_degree();
    let h = compute_cohomology(a);
    let betti = h.betti();
    let small = small_algebra(dec)?;
    let s = &small.sub.algebra;
    let perp = null_ideal(s);
    let quotient = quotient_by_ideal(s, &perp)?;
    let q = &quotient.algebra;
    let r = connectivity_index(&betti);
    let ring = h.ring(a);

    // Injectivity of the symmetric square H^r ⊙ H^r → H^{2r}.
    let square_injective = if 2 * r <= n {
        let cls: Vec<usize> = h.classes(r).collect();
        let mut cols = Vec::new();
        for (x, &i) in cls.iter().enumerate() {
            for &j in &cls[x..] {
                if r % 2 == 1 && i == j {
                    continue;
                }
                let p = ring.product(&vec![(i, one())], &vec![(j, one())]);
                let mut v = vec![Scalar::zero(); h.classes(2 * r).len()];
                for (t, c) in p {
                    v[t - h.classes(2 * r).start] = c;
                }
                cols.push(v);
            }
        }
        linalg::rank_of(h.classes(2 * r).len(), &cols) == cols.len()
    } else {
        true
    };

    let qd = q.dims();
    let support: Vec<usize> = (1..=n).filter(|&k| !q.d_matrix(k - 1).is_zero()).collect();
    let low = (2 * r).saturating_sub(2);
    let high = (n + 2).saturating_sub(2 * r);
    let mut checks = Vec::new();
    let bad: Vec<usize> = (0..=n).filter(|&k| (k <= low || k >= high) && qd[k] != betti[k]).collect();
    checks.push(check(
        "harmonic window",
        bad.is_empty(),
        format!("dim Q^k = b^k for k <= {low} and k >= {high}; mismatches at {bad:?}"),
    ));
    if square_injective {
        let ext: Vec<usize> = [2 * r - 1, (n + 1).saturating_sub(2 * r)].into_iter().filter(|&k| k <= n && qd[k] != betti[k]).collect();
        checks.push(check(
            "injective square window",
            ext.is_empty(),
            format!("H^r ⊙ H^r → H^2r injective, so dim Q^k = b^k also for k = {} and {}; mismatches at {ext:?}", 2 * r - 1, (n + 1).saturating_sub(2 * r)),
        ));
    }
    let lo_s = 2 * r;
    let hi_s = (n + 1).saturating_sub(2 * r);
    let outside: Vec<usize> = support.iter().copied().filter(|&k| k < lo_s || k > hi_s).collect();
    checks.push(check(
        "differential support",
        outside.is_empty(),
        format!("d: Q^(k-1) → Q^k nonzero for k in {support:?}, allowed {lo_s}..={hi_s}"),
    ));
    let dual = (0..=n).all(|k| qd[k] == qd[n - k]);
    checks.push(check("quotient duality", dual, format!("dims {qd:?}")));
    let nondeg = null_ideal(q).is_zero();
    checks.push(check("quotient non-degenerate", nondeg, "null ideal of Q_small vanishes".into()));
    let inc = is_quasi_iso(s, a, &small.sub.inclusion);
    checks.push(check("small inclusion quasi-isomorphism", inc, "A_small → A".into()));
    let proj = is_quasi_iso(s, q, &quotient.projection);
    checks.push(check("small projection quasi-isomorphism", proj, "A_small → Q_small".into()));
    let big = quotient_by_ideal(a, &null_ideal(a))?;
    let pi = is_quasi_iso(a, &big.algebra, &big.projection);
    checks.push(check("null quotient quasi-isomorphism", pi, "A → A/A_⊥".into()));
    let closed = is_harmonic_subalgebra(dec, &small.family);
    checks.push(check("small algebra closure", closed, "contains H, closed under d, d⁻ and products".into()));
    let restricts = restricted_decomposition(dec, &small.family);
    checks.push(check("restricted decomposition", restricts, "A_small = H ⊕ dA_small ⊕ d⁻A_small".into()));
    let low_shape: Vec<usize> = (0..=low.min(n)).filter(|&k| !small.family.same_as_in(a, k, dec.harmonic())).collect();
    checks.push(check("small algebra is harmonic in low degrees", low_shape.is_empty(), format!("mismatches at {low_shape:?}")));
    if r >= 2 && 2 * r <= n {
        if let Ok(data) = default_generating_data(dec) {
            let adapted = data.iota.image().same_as(a, dec.harmonic());
            if adapted {
                let k = 2 * r - 1;
                let mut expected = dec.harmonic().get(k).to_vec();
                for v in data.kcal.get(2 * r) {
                    expected.push(a.restrict(k, &dec.dminus_apply(&a.embed(2 * r, v))));
                }
                let exp = SubspaceFamily::spanned(a, (0..=n).map(|j| if j == k { expected.clone() } else { Vec::new() }).collect());
                let ok = small.family.same_as_in(a, k, &exp);
                checks.push(check("adapted shape in degree 2r-1", ok, format!("A^{k}_small = H^{k} ⊕ d⁻K^{}", 2 * r)));
            }
        }
    }
    let report = StructureReport {
        n,
        r,
        betti,
        small_dims: small.family.dims(),
        quotient_dims: qd,
        differential_support: support,
        square_injective,
        checks,
    };
    Ok(SmallQuotient { small, quotient, report })
}

/// `C = ℋ ⊕ dC ⊕ d⁻C` for an `ℋ`-subalgebra `C`.
pub fn restricted_decomposition(dec: &HodgeDecomposition, fam: &SubspaceFamily) -> bool {
    let a = dec.algebra();
    (0..=a.top_degree()).all(|k| {
        let mut parts = dec.harmonic().get(k).to_vec();
        if k > 0 {
            for v in fam.get(k - 1) {
                parts.push(a.restrict(k, &a.d(&a.embed(k - 1, v))));
            }
        }
        for v in fam.get(k + 1) {
            parts.push(a.restrict(k, &dec.dminus_apply(&a.embed(k + 1, v))));
        }
        let span = linalg::independent(a.dim(k), &parts);
        let e = Echelon::from_vectors(a.dim(k), &span);
        span.len() == fam.get(k).len() && fam.get(k).iter().all(|v| e.contains(v))
    })
}
