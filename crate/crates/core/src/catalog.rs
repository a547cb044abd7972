//! Built-in algebras: standard cohomology models, nilmanifold models, a
//! Poincaré DGCA without a Hodge-type decomposition, and constructed
//! non-formal examples.

use crate::dgca::{Dgca, DgcaBuilder};
use crate::scalar::{int, Scalar};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Small hand-made counterexample.
    Counterexample,
    /// Cohomology ring or standard model of a familiar space.
    StandardModel,
    /// Built for this library and shipped with a verification transcript.
    Constructed,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Counterexample => "counterexample",
            Provenance::StandardModel => "standard-model",
            Provenance::Constructed => "constructed",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub algebra: Dgca,
    pub provenance: Provenance,
    pub summary: String,
}

fn entry(algebra: Dgca, provenance: Provenance, summary: &str) -> CatalogEntry {
    CatalogEntry { name: algebra.name().to_string(), algebra, provenance, summary: summary.to_string() }
}

/// All catalog entries, in a fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = vec![
        entry(nonhodge_4(), Provenance::Counterexample, "degree-4 Poincaré DGCA whose null ideal has cohomology"),
        entry(exterior("torus-1", &["t"], &[]), Provenance::StandardModel, "exterior algebra on one degree-1 generator"),
        entry(exterior("torus-2", &["s", "t"], &[]), Provenance::StandardModel, "cohomology of the 2-torus"),
    ];
    for n in 1..=8 {
        out.push(entry(sphere(n), Provenance::StandardModel, &format!("cohomology of the {n}-sphere")));
    }
    out.push(entry(projective("cp2", 2), Provenance::StandardModel, "cohomology of the complex projective plane"));
    out.push(entry(projective("cp3", 3), Provenance::StandardModel, "cohomology of complex projective 3-space"));
    out.push(entry(
        exterior("heisenberg-3", &["x", "y", "z"], &[("z", &[(1, "x", "y")])]),
        Provenance::StandardModel,
        "minimal model of the Heisenberg nilmanifold",
    ));
    out.push(entry(
        exterior("filiform-4", &["x1", "x2", "x3", "x4"], &[("x3", &[(1, "x1", "x2")]), ("x4", &[(1, "x1", "x3")])]),
        Provenance::StandardModel,
        "model of a 4-dimensional filiform nilmanifold",
    ));
    out.push(entry(formal_6(), Provenance::Constructed, "simply connected degree-6 model with a null pair, formal"));
    out.push(entry(nonformal_7(), Provenance::Constructed, "simply connected degree-7 model with a nontrivial triple Massey product"));
    out.push(entry(
        nonformal_7_padded(),
        Provenance::Constructed,
        "the degree-7 model with an acyclic square-zero null pair adjoined",
    ));
    out
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

pub fn names() -> Vec<String> {
    catalog().into_iter().map(|e| e.name).collect()
}

/// Basis `x0, x2, x3, x4`, `dx2 = x3`, `x2·x2 = x4`.
pub fn nonhodge_4() -> Dgca {
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
        .expect("valid model")
}

/// `H(S^n)`: unit and one class in degree `n`.
pub fn sphere(n: usize) -> Dgca {
    DgcaBuilder::new(&format!("sphere-{n}"), n)
        .element("1", 0)
        .element("v", n)
        .unit("1")
        .integral("v", int(1))
        .build()
        .expect("valid model")
}

/// `H(CP^m) = F[a]/(a^{m+1})` with `|a| = 2`.
pub fn projective(name: &str, m: usize) -> Dgca {
    let id = |p: usize| match p {
        0 => "1".to_string(),
        1 => "a".to_string(),
        _ => format!("a{p}"),
    };
    let mut b = DgcaBuilder::new(name, 2 * m);
    for p in 0..=m {
        b = b.element(&id(p), 2 * p);
    }
    b = b.unit("1");
    for p in 1..=m {
        for q in p..=m - p {
            b = b.mul(&id(p), &id(q), &id(p + q), int(1));
        }
    }
    b.integral(&id(m), int(1)).build().expect("valid model")
}

/// Sign and mask of the product of two exterior monomials.
fn wedge(a: u32, b: u32) -> Option<(i64, u32)> {
    if a & b != 0 {
        return None;
    }
    // Each generator of `b` passes the generators of `a` above it.
    let swaps: u32 = (0..32).filter(|j| b >> j & 1 == 1).map(|j| (a >> j).count_ones() - (a >> j & 1)).sum();
    Some((if swaps % 2 == 0 { 1 } else { -1 }, a | b))
}

/// Exterior algebra on degree-1 generators with a quadratic differential
/// given on generators as `(generator, [(coef, left, right)])`, extended by
/// the Leibniz rule. Monomials are named by concatenating generator names.
pub fn exterior(name: &str, gens: &[&str], diffs: &[(&str, &[(i64, &str, &str)])]) -> Dgca {
    let g = gens.len();
    let pos = |s: &str| gens.iter().position(|x| *x == s).expect("known generator");
    let mono = |m: u32| -> String {
        if m == 0 {
            "1".to_string()
        } else {
            (0..g).filter(|i| m >> i & 1 == 1).map(|i| gens[i]).collect::<String>()
        }
    };
    let mut dgen: Vec<Vec<(i64, u32)>> = vec![Vec::new(); g];
    for (x, terms) in diffs {
        for (c, l, r) in terms.iter() {
            if let Some((s, m)) = wedge(1 << pos(l), 1 << pos(r)) {
                dgen[pos(x)].push((c * s, m));
            }
        }
    }
    let masks: Vec<u32> = (0..1u32 << g).collect();
    let mut b = DgcaBuilder::new(name, g);
    for &m in &masks {
        b = b.element(&mono(m), m.count_ones() as usize);
    }
    b = b.unit("1");
    for &p in &masks[1..] {
        for &q in &masks[1..] {
            if p > q {
                continue;
            }
            if let Some((s, m)) = wedge(p, q) {
                b = b.mul(&mono(p), &mono(q), &mono(m), int(s));
            }
        }
    }
    for &m in &masks {
        let mut acc: std::collections::BTreeMap<u32, i64> = std::collections::BTreeMap::new();
        for i in (0..g).filter(|i| m >> i & 1 == 1) {
            let below = (m & ((1 << i) - 1)).count_ones();
            let sign = if below % 2 == 0 { 1 } else { -1 };
            let prefix = m & ((1 << i) - 1);
            let suffix = m & !((1 << (i + 1)) - 1);
            for (c, dm) in &dgen[i] {
                let Some((s1, left)) = wedge(prefix, *dm) else { continue };
                let Some((s2, all)) = wedge(left, suffix) else { continue };
                *acc.entry(all).or_default() += sign * c * s1 * s2;
            }
        }
        for (t, c) in acc {
            if c != 0 {
                b = b.diff(&mono(m), &mono(t), int(c));
            }
        }
    }
    b.integral(&mono((1 << g) - 1), int(1)).build().expect("valid model")
}

/// Degree 6: `x, y` in degree 2, `u` in degree 3 with `du = xy`, `x³ = y³`
/// the top class, and `x²y = xy² = 0`.
pub fn formal_6() -> Dgca {
    DgcaBuilder::new("formal-6", 6)
        .element("1", 0)
        .element("x", 2)
        .element("y", 2)
        .element("u", 3)
        .element("m", 4)
        .element("p", 4)
        .element("q", 4)
        .element("w", 6)
        .unit("1")
        .mul("x", "x", "p", int(1))
        .mul("x", "y", "m", int(1))
        .mul("y", "y", "q", int(1))
        .mul("x", "p", "w", int(1))
        .mul("y", "q", "w", int(1))
        .diff("u", "m", int(1))
        .integral("w", int(1))
        .build()
        .expect("valid model")
}

fn nonformal_7_builder(name: &str) -> DgcaBuilder {
    let one = || -> Scalar { int(1) };
    DgcaBuilder::new(name, 7)
        .element("1", 0)
        .element("x", 2)
        .element("y", 2)
        .element("u", 3)
        .element("v", 3)
        .element("z", 3)
        .element("xy", 4)
        .element("yy", 4)
        .element("w", 4)
        .element("a", 5)
        .element("b", 5)
        .element("o", 7)
        .unit("1")
        .mul("x", "y", "xy", one())
        .mul("y", "y", "yy", one())
        .mul("x", "u", "b", one())
        .mul("y", "u", "a", one())
        .mul("y", "v", "b", one())
        .mul("x", "a", "o", one())
        .mul("y", "b", "o", one())
        .mul("u", "xy", "o", one())
        .mul("v", "yy", "o", one())
        .mul("z", "w", "o", one())
        .diff("u", "xy", one())
        .diff("v", "yy", one())
        .integral("o", one())
}

/// Degree 7, simply connected: `x, y` in degree 2 with `xy = du` and
/// `y² = dv` exact, `z, w` a dual pair in degrees 3 and 4, and top class
/// `o`. The triple Massey product `⟨x, y, y⟩` is the class of `a`.
pub fn nonformal_7() -> Dgca {
    nonformal_7_builder("nonformal-7").build().expect("valid model")
}

/// `nonformal-7` with `e → f` in degrees 3 and 4 multiplying trivially with
/// everything but the unit.
pub fn nonformal_7_padded() -> Dgca {
    nonformal_7_builder("nonformal-7-padded")
        .element("e", 3)
        .element("f", 4)
        .diff("e", "f", int(1))
        .build()
        .expect("valid model")
}

/// Verification transcript: decomposition, small quotient, transfer and
/// formality results. Deterministic, so stored copies can be compared
/// byte for byte.
pub fn transcript(entry: &CatalogEntry) -> String {
    use crate::cohomology::compute_cohomology;
    use crate::hodge::find_hodge;
    use crate::obstruction::{cocycle_checks, formality_decision, verify_certificate, Formality};
    use crate::small::small_quotient;
    use crate::transfer::{transfer_trees, verify_stasheff, HarmonicBasis};

    let a = &entry.algebra;
    let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let mut out = format!("name: {}\nprovenance: {}\n", entry.name, entry.provenance);
    out += &format!("betti: {}\n", join(&compute_cohomology(a).betti()));
    let dec = match find_hodge(a) {
        Ok(d) => d,
        Err(e) => {
            out += &format!("hodge: not-found ({})\n", e.reason);
            return out;
        }
    };
    out += &format!("hodge: found\nharmonic-dims: {}\n", join(&dec.harmonic().dims()));
    out += &format!("complement-dims: {}\n", join(&dec.complement().dims()));
    out += &format!("identities: {}\n", if dec.identity_failures().is_empty() { "pass" } else { "fail" });
    if let Ok(sq) = small_quotient(&dec) {
        out += &format!("small-dims: {}\nquotient-dims: {}\n", join(&sq.report.small_dims), join(&sq.report.quotient_dims));
        out += &format!("differential-support: {}\n", join(&sq.report.differential_support));
        for c in &sq.report.checks {
            out += &format!("check {}: {}\n", c.name, if c.passed { "pass" } else { "fail" });
        }
    }
    let s = transfer_trees(&dec, 5);
    let ring = HarmonicBasis::new(&dec).ring(a);
    out += &format!("stasheff-through-5: {}\n", if verify_stasheff(&s, 5).is_ok() { "pass" } else { "fail" });
    for k in [4, 5] {
        out += &format!("m{k}-zero: {}\n", s.op_is_zero(k));
    }
    out += "mu3:\n";
    out += &s.mu3().to_lines(&s.space);
    let c = cocycle_checks(&s.mu3(), &ring);
    out += &format!("hochschild-cocycle: {}\nharrison: {}\n", c.hochschild_cocycle, c.harrison);
    let f = formality_decision(&s.mu3(), &ring);
    let (verdict, cert) = match &f {
        Formality::Formal(phi) => ("formal", phi),
        Formality::NonFormal(g) => ("non-formal", g),
    };
    out += &format!("formality: {verdict}\ncertificate:\n{}", cert.to_lines(&s.space));
    out += &format!("certificate-verified: {}\n", verify_certificate(&s.mu3(), &ring, &f));
    out
}
