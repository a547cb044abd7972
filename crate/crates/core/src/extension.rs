//! Extension of an algebra by closed degree-1 exterior variables, and the
//! `F[t]`-linear extension of Hodge decompositions and of `μ_3`.
//!
//! Elements are `a·t_S` for a basis element `a` and a set `S` of variable
//! indices; `(a t_S)(b t_T) = (-1)^{|S||b|} ab·t_S t_T`.

use crate::cochain::{Cochain, GradedSpace};
use crate::dgca::{Dgca, DgcaBuilder};
use crate::hodge::{verify_hodge, HodgeDecomposition, HodgeError};
use crate::scalar::{one, sign, Scalar};
use crate::subspace::SubspaceFamily;
use num_traits::Zero;

/// Sign and union of `t_S · t_T` for sets given as bitmasks.
fn wedge(s: u32, t: u32) -> Option<(usize, u32)> {
    if s & t != 0 {
        return None;
    }
    let swaps: u32 = (0..32).filter(|j| t >> j & 1 == 1).map(|j| (s >> j).count_ones() - (s >> j & 1)).sum();
    Some((swaps as usize, s | t))
}

/// Subsets of `k` variables in lexicographic order of their sorted index
/// lists: `∅, {1}, {1,2}, …, {2}, …`.
fn monomials(k: usize) -> Vec<u32> {
    fn rec(k: usize, from: usize, cur: u32, out: &mut Vec<u32>) {
        out.push(cur);
        for i in from..k {
            rec(k, i + 1, cur | 1 << i, out);
        }
    }
    let mut out = Vec::new();
    rec(k, 0, 0, &mut out);
    out
}

fn mono_name(names: &[String], s: u32) -> String {
    (0..names.len()).filter(|i| s >> i & 1 == 1).map(|i| names[i].as_str()).collect::<Vec<_>>().join("*")
}

fn element_id(base: &Dgca, i: usize, names: &[String], s: u32) -> String {
    if s == 0 {
        base.id(i).to_string()
    } else if i == base.unit() {
        mono_name(names, s)
    } else {
        format!("{}*{}", base.id(i), mono_name(names, s))
    }
}

/// `base ⊗ Λ[t_1, …, t_k]` with `t_i` closed of degree 1.
pub fn extend(base: &Dgca, k: usize) -> Dgca {
    let names: Vec<String> = (1..=k).map(|i| format!("t{i}")).collect();
    extend_with(base, &names)
}

/// As [`extend`], with chosen variable names.
pub fn extend_with(base: &Dgca, names: &[String]) -> Dgca {
    let k = names.len();
    let ms = monomials(k);
    let id = |i: usize, s: u32| element_id(base, i, names, s);
    let mut b = DgcaBuilder::new(&format!("{}[{}]", base.name(), names.join(",")), base.top_degree() + k);
    for i in 0..base.len() {
        for &s in &ms {
            b = b.element(&id(i, s), base.degree(i) + s.count_ones() as usize);
        }
    }
    b = b.unit(&id(base.unit(), 0));
    let elems: Vec<(usize, u32)> = (0..base.len()).flat_map(|i| ms.iter().map(move |&s| (i, s))).collect();
    for (p, &(i, s)) in elems.iter().enumerate() {
        for &(j, t) in &elems[p..] {
            if (i, s) == (base.unit(), 0) || (j, t) == (base.unit(), 0) {
                continue;
            }
            let Some((sw, u)) = wedge(s, t) else { continue };
            let sg = sign(sw + s.count_ones() as usize * base.degree(j));
            for (c, x) in base.basis_product(i, j) {
                b = b.mul(&id(i, s), &id(j, t), &id(*c, u), &sg * x);
            }
        }
    }
    for i in 0..base.len() {
        for (j, c) in base.basis_diff(i) {
            for &s in &ms {
                b = b.diff(&id(i, s), &id(*j, s), c.clone());
            }
        }
    }
    let full = if k == 0 { 0 } else { (1u32 << k) - 1 };
    for (i, c) in base.integral_terms() {
        b = b.integral(&id(*i, full), c.clone());
    }
    b.build().expect("extension of a valid algebra")
}

/// Global index of `a·t_S` in an extension built by [`extend_with`].
pub fn lift_index(base: &Dgca, ext: &Dgca, names: &[String], i: usize, s: u32) -> usize {
    ext.basis().index_of(&element_id(base, i, names, s)).expect("extension element")
}

/// `v·t_S` for a base vector `v`.
pub fn lift(base: &Dgca, ext: &Dgca, names: &[String], v: &[Scalar], s: u32) -> Vec<Scalar> {
    let mut out = ext.zero_vector();
    for (i, x) in v.iter().enumerate() {
        if !x.is_zero() {
            out[lift_index(base, ext, names, i, s)] = x.clone();
        }
    }
    out
}

/// The decomposition with `ℋ = ℋ_base·Λ` and `ℬ = ℬ_base·Λ`, re-verified on
/// `extend(base, k)`.
pub fn extend_decomposition(dec: &HodgeDecomposition, k: usize) -> Result<HodgeDecomposition, HodgeError> {
    let base = dec.algebra();
    let names: Vec<String> = (1..=k).map(|i| format!("t{i}")).collect();
    let ext = extend_with(base, &names);
    let top = ext.top_degree();
    let mut h = vec![Vec::new(); top + 1];
    let mut b = vec![Vec::new(); top + 1];
    for deg in 0..=base.top_degree() {
        for &s in &monomials(k) {
            let e = deg + s.count_ones() as usize;
            for v in dec.harmonic().global(base, deg) {
                h[e].push(ext.restrict(e, &lift(base, &ext, &names, &v, s)));
            }
            for v in dec.complement().global(base, deg) {
                b[e].push(ext.restrict(e, &lift(base, &ext, &names, &v, s)));
            }
        }
    }
    verify_hodge(&ext, &SubspaceFamily::new(h), &SubspaceFamily::new(b))
}

/// `b^j = Σ_i C(k,i) b^{j-i}`.
pub fn kunneth_betti(betti: &[usize], k: usize) -> Vec<usize> {
    let mut binom = vec![1usize];
    for _ in 0..k {
        let mut next = vec![1usize; binom.len() + 1];
        for i in 1..binom.len() {
            next[i] = binom[i - 1] + binom[i];
        }
        binom = next;
    }
    let mut out = vec![0; betti.len() + k];
    for (j, b) in betti.iter().enumerate() {
        for (i, c) in binom.iter().enumerate() {
            out[j + i] += b * c;
        }
    }
    out
}

/// The class space `H ⊗ Λ[t_1, …, t_k]`, base class first.
pub fn extended_space(space: &GradedSpace, k: usize) -> GradedSpace {
    let names: Vec<String> = (1..=k).map(|i| format!("t{i}")).collect();
    let mut ns = Vec::new();
    let mut ds = Vec::new();
    for i in 0..space.dim() {
        for &s in &monomials(k) {
            ns.push(if s == 0 { space.name(i).to_string() } else { format!("{}*{}", space.name(i), mono_name(&names, s)) });
            ds.push(space.degree(i) + s.count_ones() as usize);
        }
    }
    GradedSpace::new(ns, ds)
}

/// Index of `c·t_S` in [`extended_space`].
pub fn extended_index(k: usize, class: usize, s: u32) -> usize {
    let ms = monomials(k);
    class * ms.len() + ms.iter().position(|&m| m == s).expect("monomial")
}

/// `μ_3(a t_S, b t_T, c t_U) = (-1)^{|S||b| + (|S|+|T|)|c|} μ_3(a,b,c)·t_S t_T t_U`.
pub fn extended_mu3(mu3: &Cochain, space: &GradedSpace, k: usize) -> Cochain {
    let ms = monomials(k);
    let mut out = Cochain::new(3, mu3.degree());
    for (t, v) in mu3.entries() {
        let (db, dc) = (space.degree(t[1]), space.degree(t[2]));
        for &s in &ms {
            for &tt in &ms {
                let Some((sw1, st)) = wedge(s, tt) else { continue };
                for &u in &ms {
                    let Some((sw2, all)) = wedge(st, u) else { continue };
                    let (ls, lt) = (s.count_ones() as usize, tt.count_ones() as usize);
                    let sg = sign(sw1 + sw2 + ls * db + (ls + lt) * dc);
                    let key = vec![extended_index(k, t[0], s), extended_index(k, t[1], tt), extended_index(k, t[2], u)];
                    let val = v.iter().map(|(o, x)| (extended_index(k, *o, all), x * &sg)).collect();
                    out.add_to(key, &val, &one());
                }
            }
        }
    }
    out
}

/// The map from [`extended_space`] to the class basis of the extension
/// sending `c·t_S` to the class of `h_c·t_S`, as a linear cochain.
pub fn extended_class_map(dec: &HodgeDecomposition, ext_dec: &HodgeDecomposition, k: usize) -> Cochain {
    let base = dec.algebra();
    let ext = ext_dec.algebra();
    let names: Vec<String> = (1..=k).map(|i| format!("t{i}")).collect();
    let hb = crate::transfer::HarmonicBasis::new(dec);
    let hx = crate::transfer::HarmonicBasis::new(ext_dec);
    let mut phi = Cochain::new(1, 0);
    for (c, rep) in hb.reps.iter().enumerate() {
        for &s in &monomials(k) {
            let v = lift(base, ext, &names, rep, s);
            phi.set(vec![extended_index(k, c, s)], hx.cohomology.class_sparse(ext, &v));
        }
    }
    phi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::cohomology::{compute_cohomology, validate_poincare};
    use crate::dgca::validate_dgca;
    use crate::hodge::find_hodge;
    use crate::obstruction::pullback_mu3;
    use crate::scalar::int;
    use crate::transfer::transfer_explicit;

    fn point() -> Dgca {
        DgcaBuilder::new("point", 0).element("1", 0).unit("1").integral("1", int(1)).build().unwrap()
    }

    #[test]
    fn exterior_on_a_point() {
        let a = extend(&point(), 1);
        assert_eq!(a.top_degree(), 1);
        let t = a.basis_vector(a.basis().index_of("t1").unwrap());
        assert_eq!(a.pair(&a.unit_vector(), &t), int(1));
        let b = extend(&point(), 2);
        assert_eq!(compute_cohomology(&b).betti(), vec![1, 2, 1]);
    }

    #[test]
    fn kunneth() {
        assert_eq!(kunneth_betti(&[1, 0, 1], 2), vec![1, 2, 2, 2, 1]);
        for e in catalog::catalog() {
            for k in 1..=2 {
                let x = extend(&e.algebra, k);
                assert!(validate_dgca(&x).is_ok(), "{}", e.name);
                assert!(validate_poincare(&x).is_ok(), "{}", e.name);
                let b = compute_cohomology(&e.algebra).betti();
                assert_eq!(compute_cohomology(&x).betti(), kunneth_betti(&b, k), "{} k={k}", e.name);
            }
        }
    }

    #[test]
    fn iterated_extension() {
        let a = catalog::formal_6();
        let once = extend_with(&extend_with(&a, &["t1".into()]), &["t2".into()]);
        let twice = extend(&a, 2);
        assert_eq!(once.len(), twice.len());
        for i in 0..once.len() {
            let j = twice.basis().index_of(once.id(i)).unwrap();
            assert_eq!(once.degree(i), twice.degree(j));
        }
        let map = |v: &[Scalar]| {
            let mut out = twice.zero_vector();
            for (i, x) in v.iter().enumerate() {
                out[twice.basis().index_of(once.id(i)).unwrap()] = x.clone();
            }
            out
        };
        for i in 0..once.len() {
            for j in 0..once.len() {
                let (u, v) = (once.basis_vector(i), once.basis_vector(j));
                assert_eq!(map(&once.product(&u, &v)), twice.product(&map(&u), &map(&v)));
            }
            assert_eq!(map(&once.d(&once.basis_vector(i))), twice.d(&map(&once.basis_vector(i))));
            assert_eq!(once.integrate(&once.basis_vector(i)), twice.integrate(&map(&once.basis_vector(i))));
        }
    }

    #[test]
    fn extended_mu3_matches_direct_transfer() {
        let a = catalog::nonformal_7();
        let dec = find_hodge(&a).unwrap();
        let base = transfer_explicit(&dec);
        let ext_dec = extend_decomposition(&dec, 1).unwrap();
        let direct = transfer_explicit(&ext_dec);
        let space = extended_space(&base.space, 1);
        let phi = extended_class_map(&dec, &ext_dec, 1);
        let pulled = pullback_mu3(&direct.mu3(), &phi, &space);
        let ext = extended_mu3(&base.mu3(), &base.space, 1);
        assert!(!ext.is_zero());
        assert_eq!(pulled, ext);
    }
}
