//! JSON interchange format for algebras, with an optional sidecar holding a
//! Hodge decomposition.
//!
//! Emission is canonical: basis ids sorted within each degree, product pairs
//! oriented by canonical basis order, and all tuple lists sorted. Loading and
//! re-emitting a canonical document reproduces it byte for byte.

use crate::dgca::{Dgca, DgcaBuilder, ModelError};
use crate::hodge::{verify_hodge, HodgeDecomposition, HodgeError};
use crate::scalar::{self, Scalar};
use crate::subspace::SubspaceFamily;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub id: String,
    pub degree: usize,
}

/// Harmonic and complement subspaces, per degree, as columns in the
/// document's basis order within that degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub harmonic: BTreeMap<usize, Vec<Vec<String>>>,
    pub complement: BTreeMap<usize, Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub top_degree: usize,
    pub basis: Vec<BasisEntry>,
    pub unit: String,
    pub mul: Vec<(String, String, String, String)>,
    pub diff: Vec<(String, String, String)>,
    pub integrate: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hodge: Option<Sidecar>,
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{location}: malformed rational {text:?}")]
    Rational { location: String, text: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("hodge sidecar: {0}")]
    Sidecar(String),
    #[error("hodge sidecar does not verify: {0}")]
    Hodge(#[from] HodgeError),
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

fn rational(location: impl Fn() -> String, text: &str) -> Result<Scalar, FormatError> {
    scalar::parse(text).map_err(|_| FormatError::Rational { location: location(), text: text.to_string() })
}

/// Basis indices in canonical order: by degree, then id.
fn canonical_order(a: &Dgca) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..a.len()).collect();
    idx.sort_by(|&i, &j| (a.degree(i), a.id(i)).cmp(&(a.degree(j), a.id(j))));
    idx
}

/// Positions within each degree in canonical order, per basis index.
fn canonical_local(a: &Dgca) -> Vec<usize> {
    let mut pos = vec![0; a.len()];
    for k in 0..=a.top_degree() {
        let mut ids: Vec<usize> = a.range(k).collect();
        ids.sort_by(|&i, &j| a.id(i).cmp(a.id(j)));
        for (p, i) in ids.into_iter().enumerate() {
            pos[i] = p;
        }
    }
    pos
}

pub fn to_document(a: &Dgca) -> Document {
    let order = canonical_order(a);
    let rank: BTreeMap<usize, usize> = order.iter().enumerate().map(|(r, &i)| (i, r)).collect();
    let u = a.unit();
    let mut mul = Vec::new();
    for (r, &i) in order.iter().enumerate() {
        for &j in &order[r..] {
            let terms = a.basis_product(i, j);
            if i == u || j == u {
                let other = if i == u { j } else { i };
                let standard = terms.len() == 1 && terms[0].0 == other && terms[0].1.is_one();
                if standard {
                    continue;
                }
                if terms.is_empty() {
                    mul.push((a.id(i).to_string(), a.id(j).to_string(), a.id(other).to_string(), "0".to_string()));
                    continue;
                }
            }
            let mut ts: Vec<&(usize, Scalar)> = terms.iter().collect();
            ts.sort_by_key(|(c, _)| rank[c]);
            for (c, x) in ts {
                mul.push((a.id(i).to_string(), a.id(j).to_string(), a.id(*c).to_string(), scalar::format(x)));
            }
        }
    }
    let mut diff = Vec::new();
    for &i in &order {
        let mut ts: Vec<&(usize, Scalar)> = a.basis_diff(i).iter().collect();
        ts.sort_by_key(|(c, _)| rank[c]);
        for (c, x) in ts {
            diff.push((a.id(i).to_string(), a.id(*c).to_string(), scalar::format(x)));
        }
    }
    let mut integrate: Vec<(usize, String)> = a.integral_terms().iter().map(|(i, x)| (rank[i], scalar::format(x))).collect();
    integrate.sort();
    Document {
        name: a.name().to_string(),
        comment: None,
        top_degree: a.top_degree(),
        basis: order.iter().map(|&i| BasisEntry { id: a.id(i).to_string(), degree: a.degree(i) }).collect(),
        unit: a.id(u).to_string(),
        mul,
        diff,
        integrate: integrate.into_iter().map(|(r, x)| (a.id(order[r]).to_string(), x)).collect(),
        hodge: None,
    }
}

pub fn from_document(doc: &Document) -> Result<Dgca, FormatError> {
    let mut b = DgcaBuilder::new(&doc.name, doc.top_degree);
    for e in &doc.basis {
        b = b.element(&e.id, e.degree);
    }
    b = b.unit(&doc.unit);
    for (t, (x, y, z, c)) in doc.mul.iter().enumerate() {
        b = b.mul(x, y, z, rational(|| format!("mul[{t}]"), c)?);
    }
    for (t, (x, y, c)) in doc.diff.iter().enumerate() {
        b = b.diff(x, y, rational(|| format!("diff[{t}]"), c)?);
    }
    for (t, (x, c)) in doc.integrate.iter().enumerate() {
        b = b.integral(x, rational(|| format!("integrate[{t}]"), c)?);
    }
    Ok(b.build()?)
}

fn pretty(doc: &Document) -> String {
    // One tuple per line keeps the files readable and diffable.
    let mut s = String::from("{\n");
    let q = |x: &str| serde_json::to_string(x).expect("string");
    s += &format!("  \"name\": {},\n", q(&doc.name));
    if let Some(c) = &doc.comment {
        s += &format!("  \"comment\": {},\n", q(c));
    }
    s += &format!("  \"top_degree\": {},\n", doc.top_degree);
    let list = |items: Vec<String>| -> String {
        if items.is_empty() {
            "[]".to_string()
        } else {
            format!("[\n    {}\n  ]", items.join(",\n    "))
        }
    };
    s += &format!(
        "  \"basis\": {},\n",
        list(doc.basis.iter().map(|e| format!("{{\"id\": {}, \"degree\": {}}}", q(&e.id), e.degree)).collect())
    );
    s += &format!("  \"unit\": {},\n", q(&doc.unit));
    s += &format!("  \"mul\": {},\n", list(doc.mul.iter().map(|(a, b, c, x)| format!("[{}, {}, {}, {}]", q(a), q(b), q(c), q(x))).collect()));
    s += &format!("  \"diff\": {},\n", list(doc.diff.iter().map(|(a, b, x)| format!("[{}, {}, {}]", q(a), q(b), q(x))).collect()));
    s += &format!("  \"integrate\": {}", list(doc.integrate.iter().map(|(a, x)| format!("[{}, {}]", q(a), q(x))).collect()));
    if let Some(h) = &doc.hodge {
        let block = |m: &BTreeMap<usize, Vec<Vec<String>>>| -> String {
            let items: Vec<String> = m
                .iter()
                .map(|(k, cols)| {
                    let cs: Vec<String> = cols.iter().map(|c| format!("[{}]", c.iter().map(|x| q(x)).collect::<Vec<_>>().join(", "))).collect();
                    format!("\"{k}\": [{}]", cs.join(", "))
                })
                .collect();
            if items.is_empty() {
                "{}".to_string()
            } else {
                format!("{{\n      {}\n    }}", items.join(",\n      "))
            }
        };
        s += &format!(",\n  \"hodge\": {{\n    \"harmonic\": {},\n    \"complement\": {}\n  }}", block(&h.harmonic), block(&h.complement));
    }
    s += "\n}\n";
    s
}

/// Canonical text of an algebra.
pub fn emit(a: &Dgca) -> String {
    pretty(&to_document(a))
}

/// Canonical text with a comment line.
pub fn emit_with_comment(a: &Dgca, comment: &str) -> String {
    let mut doc = to_document(a);
    doc.comment = Some(comment.to_string());
    pretty(&doc)
}

pub fn parse_document(text: &str) -> Result<Document, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })
}

pub fn parse(text: &str) -> Result<Dgca, FormatError> {
    from_document(&parse_document(text)?)
}

pub fn load(path: &std::path::Path) -> Result<Dgca, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse(&text)
}

/// The algebra with its basis re-declared in canonical order.
pub fn canonicalize(a: &Dgca) -> Dgca {
    from_document(&to_document(a)).expect("canonical form of a valid algebra")
}

fn columns_of(a: &Dgca, fam: &SubspaceFamily) -> BTreeMap<usize, Vec<Vec<String>>> {
    let pos = canonical_local(a);
    let mut out = BTreeMap::new();
    for k in 0..=a.top_degree() {
        let cols = fam.get(k);
        if cols.is_empty() {
            continue;
        }
        let r = a.range(k);
        let mut list = Vec::new();
        for c in cols {
            let mut v = vec![String::new(); c.len()];
            for (local, x) in c.iter().enumerate() {
                v[pos[r.start + local]] = scalar::format(x);
            }
            list.push(v);
        }
        out.insert(k, list);
    }
    out
}

/// Document with a decomposition sidecar.
pub fn emit_with_hodge(dec: &HodgeDecomposition) -> String {
    let a = dec.algebra();
    let mut doc = to_document(a);
    doc.hodge = Some(Sidecar { harmonic: columns_of(a, dec.harmonic()), complement: columns_of(a, dec.complement()) });
    pretty(&doc)
}

fn family_from(a: &Dgca, m: &BTreeMap<usize, Vec<Vec<String>>>, what: &str) -> Result<SubspaceFamily, FormatError> {
    let pos = canonical_local(a);
    let mut fam = SubspaceFamily::empty(a.top_degree());
    for (&k, cols) in m {
        if k > a.top_degree() {
            return Err(FormatError::Sidecar(format!("{what} degree {k} above the top degree")));
        }
        let r = a.range(k);
        let mut vs = Vec::new();
        for (ci, c) in cols.iter().enumerate() {
            if c.len() != r.len() {
                return Err(FormatError::Sidecar(format!("{what}[{k}][{ci}] has {} entries, expected {}", c.len(), r.len())));
            }
            let mut v = vec![Scalar::zero(); r.len()];
            for local in 0..r.len() {
                v[local] = rational(|| format!("hodge.{what}[{k}][{ci}]"), &c[pos[r.start + local]])?;
            }
            vs.push(v);
        }
        fam.set(k, vs);
    }
    Ok(fam)
}

/// Parses an algebra and, when present, its verified decomposition.
pub fn parse_with_hodge(text: &str) -> Result<(Dgca, Option<HodgeDecomposition>), FormatError> {
    let doc = parse_document(text)?;
    let a = from_document(&doc)?;
    let Some(h) = &doc.hodge else { return Ok((a, None)) };
    let harm = family_from(&a, &h.harmonic, "harmonic")?;
    let comp = family_from(&a, &h.complement, "complement")?;
    let dec = verify_hodge(&a, &harm, &comp)?;
    Ok((a, Some(dec)))
}
