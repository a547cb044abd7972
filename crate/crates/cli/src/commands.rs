use crate::report::{Report, Status};
use crate::{Cli, Command};
use pdgca::catalog;
use pdgca::cochain::{Cochain, GradedSpace};
use pdgca::cohomology::{compute_cohomology, validate_poincare, CohomologyRing};
use pdgca::extension;
use pdgca::format;
use pdgca::hodge::{aperp_acyclicity, find_hodge, HodgeDecomposition, NotFoundReason};
use pdgca::ideal::null_ideal;
use pdgca::massey::{self, Screen, ScreenQuery};
use pdgca::obstruction::{self, Comparison, Formality};
use pdgca::scalar::{self, Scalar};
use pdgca::small::{connectivity_index, small_quotient};
use pdgca::sparse::SparseVec;
use pdgca::transfer::{tau_tensor, transfer_explicit, transfer_trees, verify_stasheff, AInfinityStructure, HarmonicBasis};
use pdgca::{validate_dgca, Dgca};
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<format::FormatError> for CliError {
    fn from(e: format::FormatError) -> Self {
        CliError(e.to_string())
    }
}

type Outcome = Result<(Status, Report), CliError>;

pub fn name(c: &Command) -> &'static str {
    match c {
        Command::Validate => "validate",
        Command::Cohomology => "cohomology",
        Command::Hodge => "hodge",
        Command::Small => "small",
        Command::Transfer { .. } => "transfer",
        Command::Mu3 => "mu3",
        Command::Formality => "formality",
        Command::Compare { .. } => "compare",
        Command::Massey { .. } => "massey",
        Command::Screen { .. } => "screen",
        Command::Extend { .. } => "extend",
        Command::Catalog => "catalog",
    }
}

struct Loaded {
    algebra: Dgca,
    sidecar: Option<HodgeDecomposition>,
}

fn load_source(source: &str) -> Result<Loaded, CliError> {
    let path = Path::new(source);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError(format!("cannot read {source}: {e}")))?;
        let (algebra, sidecar) = format::parse_with_hodge(&text)?;
        return Ok(Loaded { algebra, sidecar });
    }
    catalog::lookup(source)
        .map(|e| Loaded { algebra: e.algebra, sidecar: None })
        .ok_or_else(|| CliError(format!("{source:?} is neither a file nor a catalog name")))
}

fn load(cli: &Cli) -> Result<Option<Loaded>, CliError> {
    match (&cli.input, &cli.catalog) {
        (Some(_), Some(_)) => Err(CliError("give either --input or --catalog, not both".into())),
        (Some(p), None) => {
            if !p.exists() {
                return Err(CliError(format!("no such file: {}", p.display())));
            }
            load_source(&p.display().to_string()).map(Some)
        }
        (None, Some(n)) => catalog::lookup(n)
            .map(|e| Some(Loaded { algebra: e.algebra, sidecar: None }))
            .ok_or_else(|| CliError(format!("unknown catalog entry {n:?}"))),
        (None, None) => Ok(None),
    }
}

fn require(cli: &Cli) -> Result<Loaded, CliError> {
    load(cli)?.ok_or_else(|| CliError("an algebra is required: use --input PATH or --catalog NAME".into()))
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn show_sparse(space: &GradedSpace, v: &SparseVec) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.iter().map(|(i, x)| format!("{}*{}", scalar::format(x), space.name(*i))).collect::<Vec<_>>().join(" + ")
}

fn show_local(space: &GradedSpace, degree: usize, v: &[Scalar]) -> String {
    let idx = space.in_degree(degree);
    let sp: SparseVec = idx.into_iter().zip(v.iter()).filter(|(_, x)| !num_traits::Zero::is_zero(*x)).map(|(i, x)| (i, x.clone())).collect();
    show_sparse(space, &sp)
}

/// The given decomposition, or one found by search.
fn decomposition(l: &Loaded, r: &mut Report) -> Result<HodgeDecomposition, Status> {
    if let Some(d) = &l.sidecar {
        r.push("decomposition", "from file");
        return Ok(d.clone());
    }
    match find_hodge(&l.algebra) {
        Ok(d) => {
            r.push("decomposition", "found");
            Ok(d)
        }
        Err(e) => {
            r.push("decomposition", "not found");
            r.push("reason", e.reason);
            r.push("detail", &e.detail);
            Err(match e.reason {
                NotFoundReason::Obstruction => Status::Negative,
                NotFoundReason::SearchFailed => Status::Inconclusive,
            })
        }
    }
}

fn finish(mut r: Report, s: Status) -> Outcome {
    r.push("status", s.label());
    Ok((s, r))
}

pub fn run(cli: &Cli) -> Outcome {
    let mut r = Report::new(name(&cli.command));
    match &cli.command {
        Command::Validate => validate(cli, r),
        Command::Cohomology => cohomology(cli, r),
        Command::Hodge => hodge(cli, r),
        Command::Small => small(cli, r),
        Command::Transfer { kmax } => transfer(cli, r, *kmax),
        Command::Mu3 => mu3(cli, r),
        Command::Formality => formality(cli, r),
        Command::Compare { other, phi } => compare(cli, r, other, phi.as_deref()),
        Command::Massey { elements, degrees, r: rr, n, l } => {
            if elements.is_empty() {
                screen(cli, r, degrees, *rr, *n, *l, false)
            } else {
                massey_cmd(cli, r, elements)
            }
        }
        Command::Screen { degrees, r: rr, n, l, hodge_product } => screen(cli, r, degrees, *rr, *n, *l, *hodge_product),
        Command::Extend { vars } => extend(cli, r, *vars),
        Command::Catalog => {
            r.push("entries", catalog::names().len());
            catalog_cmd(cli, r)
        }
    }
}

fn header(r: &mut Report, a: &Dgca) {
    r.push("algebra", a.name());
    r.push("top-degree", a.top_degree());
    r.push("dimensions", join(&a.dims()));
}

fn validate(cli: &Cli, mut r: Report) -> Outcome {
    let l = require(cli)?;
    let a = &l.algebra;
    header(&mut r, a);
    let v = validate_dgca(a);
    r.push("dgca-axioms", if v.is_ok() { "pass" } else { "fail" });
    for x in &v.violations {
        r.push("violation", x);
    }
    if !v.is_ok() {
        return finish(r, Status::Negative);
    }
    let p = validate_poincare(a);
    r.push("betti", join(&p.betti));
    r.push("poincare-duality", if p.is_ok() { "pass" } else { "fail" });
    if !p.is_ok() {
        r.push("degenerate-degrees", join(&p.degenerate));
        return finish(r, Status::Negative);
    }
    finish(r, Status::Success)
}

fn cohomology(cli: &Cli, mut r: Report) -> Outcome {
    let l = require(cli)?;
    let a = &l.algebra;
    header(&mut r, a);
    let h = compute_cohomology(a);
    r.push("betti", join(&h.betti()));
    r.push("connectivity-index", connectivity_index(&h.betti()));
    for i in 0..h.dim() {
        r.push("class", format!("{} = {}", h.space().name(i), a.show(h.rep(i))));
    }
    finish(r, Status::Success)
}

fn hodge(cli: &Cli, mut r: Report) -> Outcome {
    let l = require(cli)?;
    let a = &l.algebra;
    header(&mut r, a);
    let perp = null_ideal(a);
    r.push("null-ideal-dims", join(&perp.dims()));
    for k in 0..=a.top_degree() {
        for v in perp.global(a, k) {
            r.push("null-ideal", a.show(&v));
        }
    }
    let ap = aperp_acyclicity(a);
    r.push("null-ideal-betti", join(&ap.betti));
    r.push("null-ideal-acyclic", ap.acyclic);
    let dec = match decomposition(&l, &mut r) {
        Ok(d) => d,
        Err(s) => return finish(r, s),
    };
    r.push("harmonic-dims", join(&dec.harmonic().dims()));
    r.push("complement-dims", join(&dec.complement().dims()));
    r.push("exact-dims", join(&dec.exact().dims()));
    let fails = dec.identity_failures();
    r.push("decomposition identities", if fails.is_empty() { "pass" } else { "fail" });
    for f in &fails {
        r.push("identity-failure", f);
    }
    r.push("null ideal splits into exact and coexact parts", if dec.splits_null_ideal() { "pass" } else { "fail" });
    if let Some(p) = &cli.output {
        write(p, &format::emit_with_hodge(&dec))?;
        r.push("written", p.display());
    }
    finish(r, if fails.is_empty() { Status::Success } else { Status::Negative })
}

fn write(p: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(p, text).map_err(|e| CliError(format!("cannot write {}: {e}", p.display())))
}

fn small(cli: &Cli, mut r: Report) -> Outcome {
    let l = require(cli)?;
    header(&mut r, &l.algebra);
    let dec = match decomposition(&l, &mut r) {
        Ok(d) => d,
        Err(s) => return finish(r, s),
    };
    let sq = match small_quotient(&dec) {
        Ok(x) => x,
        Err(e) => {
            r.push("reason", e);
            return finish(r, Status::Inconclusive);
        }
    };
    let rep = &sq.report;
    r.push("n", rep.n);
    r.push("r", rep.r);
    r.push("betti", join(&rep.betti));
    r.push("small-dims", join(&rep.small_dims));
    r.push("quotient-dims", join(&rep.quotient_dims));
    r.push("differential-support", join(&rep.differential_support));
    r.push("square-injective", rep.square_injective);
    r.push("formal-by-degree", rep.formal_by_degree());
    for c in &rep.checks {
        r.push(&format!("check {}", c.name), if c.passed { "pass".to_string() } else { format!("fail ({})", c.detail) });
    }
    finish(r, if rep.all_passed() { Status::Success } else { Status::Negative })
}

fn transferred(l: &Loaded, r: &mut Report) -> Result<(HodgeDecomposition, CohomologyRing), Status> {
    let dec = decomposition(l, r)?;
    let ring = HarmonicBasis::new(&dec).ring(dec.algebra());
    Ok((dec, ring))
}

fn push_ops(r: &mut Report, s: &AInfinityStructure) {
    for (k, c) in &s.ops {
        r.push(&format!("m{k}-entries"), c.len());
        r.push_lines(&format!("m{k}"), &c.to_lines(&s.space));
    }
}

fn transfer(cli: &Cli, mut r: Report, kmax: Option<usize>) -> Outcome {
    let l = require(cli)?;
    header(&mut r, &l.algebra);
    let kmax = kmax.unwrap_or_else(|| l.algebra.top_degree().clamp(2, 6));
    if kmax < 2 {
        return Err(CliError("--kmax must be at least 2".into()));
    }
    let dec = match decomposition(&l, &mut r) {
        Ok(d) => d,
        Err(s) => return finish(r, s),
    };
    let s = transfer_trees(&dec, kmax);
    r.push("kmax", kmax);
    for k in 3..=kmax {
        r.push(&format!("m{k}-zero"), s.op_is_zero(k));
    }
    let st = verify_stasheff(&s, kmax);
    r.push("stasheff relations", if st.is_ok() { format!("pass through arity {kmax}") } else { format!("fail ({} violations)", st.failures.len()) });
    push_ops(&mut r, &s);
    finish(r, if st.is_ok() { Status::Success } else { Status::Negative })
}

fn mu3(cli: &Cli, mut r: Report) -> Outcome {
    let l = require(cli)?;
    header(&mut r, &l.algebra);
    let (dec, ring) = match transferred(&l, &mut r) {
        Ok(x) => x,
        Err(s) => return finish(r, s),
    };
    let s = transfer_explicit(&dec);
    r.push("mu3-zero", s.op_is_zero(3));
    r.push_lines("mu3", &s.mu3().to_lines(&s.space));
    for (k, x) in tau_tensor(&s, &ring) {
        let names: Vec<&str> = k.iter().map(|&i| s.space.name(i)).collect();
        r.push("tau", format!("{}; {}", names.join(","), scalar::format(&x)));
    }
    finish(r, Status::Success)
}

fn formality(cli: &Cli, mut r: Report) -> Outcome {
    let l = require(cli)?;
    header(&mut r, &l.algebra);
    let (dec, ring) = match transferred(&l, &mut r) {
        Ok(x) => x,
        Err(s) => return finish(r, s),
    };
    let s = transfer_explicit(&dec);
    let m = s.mu3();
    let c = obstruction::cocycle_checks(&m, &ring);
    r.push("hochschild cocycle", c.hochschild_cocycle);
    r.push("harrison shuffle identity", c.harrison);
    let f = obstruction::formality_decision(&m, &ring);
    let ok = obstruction::verify_certificate(&m, &ring, &f);
    let (verdict, cert, status) = match &f {
        Formality::Formal(phi) => ("formal", phi, Status::Success),
        Formality::NonFormal(g) => ("non-formal", g, Status::Negative),
    };
    r.push("formality", verdict);
    r.push("certificate-verified", ok);
    r.push_lines("certificate", &cert.to_lines(&s.space));
    finish(r, if ok { status } else { Status::Inconclusive })
}

fn parse_phi(text: &str, s1: &GradedSpace, s2: &GradedSpace) -> Result<Cochain, CliError> {
    let mut c = Cochain::new(1, 0);
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: &str| CliError(format!("phi line {}: {m}", no + 1));
        let parts: Vec<&str> = line.split(';').map(str::trim).collect();
        if parts.len() != 4 || parts[0] != "1" {
            return Err(err("expected `1; input; output; p/q`"));
        }
        let i = s1.index_of(parts[1]).ok_or_else(|| err(&format!("unknown class {}", parts[1])))?;
        let o = s2.index_of(parts[2]).ok_or_else(|| err(&format!("unknown class {}", parts[2])))?;
        let x = scalar::parse(parts[3]).map_err(|_| err(&format!("malformed rational {}", parts[3])))?;
        c.add_to(vec![i], &vec![(o, x)], &scalar::one());
    }
    Ok(c)
}

fn compare(cli: &Cli, mut r: Report, other: &str, phi: Option<&Path>) -> Outcome {
    let l1 = require(cli)?;
    let l2 = load_source(other)?;
    r.push("algebra", l1.algebra.name());
    r.push("other", l2.algebra.name());
    let (d1, r1) = match transferred(&l1, &mut r) {
        Ok(x) => x,
        Err(s) => return finish(r, s),
    };
    let (d2, r2) = match transferred(&l2, &mut r) {
        Ok(x) => x,
        Err(s) => return finish(r, s),
    };
    let (s1, s2) = (transfer_explicit(&d1), transfer_explicit(&d2));
    let phi = match phi {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError(format!("cannot read {}: {e}", p.display())))?;
            parse_phi(&text, &s1.space, &s2.space)?
        }
        None => obstruction::identity(&s1.space),
    };
    let out = obstruction::compare_classes(&s1, &r1, &s2, &r2, &phi).map_err(|e| CliError(e.to_string()))?;
    r.push("comparison", &out);
    let status = match &out {
        Comparison::Equivalent(w) => {
            r.push_lines("witness", &w.to_lines(&s1.space));
            Status::Success
        }
        Comparison::Distinct(f) => {
            r.push_lines("certificate", &f.to_lines(&s1.space));
            Status::Negative
        }
        Comparison::PhiInvalid(_) => Status::InputError,
    };
    finish(r, status)
}

fn massey_cmd(cli: &Cli, mut r: Report, ids: &[String]) -> Outcome {
    let l = require(cli)?;
    let a = &l.algebra;
    header(&mut r, a);
    let mut xs = Vec::new();
    for id in ids {
        let i = a.basis().index_of(id).ok_or_else(|| CliError(format!("unknown basis id {id:?}")))?;
        xs.push(a.basis_vector(i));
    }
    let dec = l.sidecar.clone().or_else(|| find_hodge(a).ok());
    let h = compute_cohomology(a);
    r.push("entries", ids.join(","));
    match massey::massey_product(a, &xs, dec.as_ref()) {
        Ok(p) => {
            r.push("degree", p.degree);
            let deg = p.degree as usize;
            r.push("representative", show_local(h.space(), deg, &p.representative));
            if p.partial {
                r.push("set", "partial (canonical defining system only)");
            } else {
                r.push("indeterminacy-dim", p.indeterminacy.len());
                for v in &p.indeterminacy {
                    r.push("indeterminacy", show_local(h.space(), deg, v));
                }
            }
            let (t, s) = match p.trivial {
                Some(true) => ("yes", Status::Success),
                Some(false) => ("no", Status::Success),
                None => ("undecided", Status::Inconclusive),
            };
            r.push("trivial", t);
            finish(r, s)
        }
        Err(massey::MasseyError::NoDefiningSystem) => {
            r.push("defining-system", "none");
            finish(r, if ids.len() == 3 { Status::Negative } else { Status::Inconclusive })
        }
        Err(e) => Err(CliError(e.to_string())),
    }
}

#[allow(clippy::too_many_arguments)]
fn screen(cli: &Cli, mut r: Report, degrees: &[usize], rr: Option<usize>, n: Option<usize>, l: Option<usize>, hodge_product: bool) -> Outcome {
    let loaded = load(cli)?;
    let (mut rv, mut nv, mut connected) = (rr, n, true);
    if let Some(ld) = &loaded {
        let b = compute_cohomology(&ld.algebra).betti();
        r.push("algebra", ld.algebra.name());
        rv = rv.or(Some(connectivity_index(&b)));
        nv = nv.or(Some(ld.algebra.top_degree()));
        connected = b[0] == 1;
    }
    let rv = rv.ok_or_else(|| CliError("--r is required without an algebra".into()))?;
    let nv = nv.ok_or_else(|| CliError("--n is required without an algebra".into()))?;
    let len = if degrees.is_empty() { l.ok_or_else(|| CliError("give --degrees or --l".into()))? } else { degrees.len() };
    if !degrees.is_empty() && l.is_some_and(|x| x != degrees.len()) {
        return Err(CliError("--l disagrees with the number of --degrees".into()));
    }
    if len < 3 {
        return Err(CliError("Massey products need at least three entries".into()));
    }
    let q = ScreenQuery {
        l: len,
        degrees: (!degrees.is_empty()).then(|| degrees.to_vec()),
        r: rv,
        n: nv,
        connected,
        zero_entry: false,
        hodge_product,
    };
    r.push("r", rv);
    r.push("n", nv);
    r.push("l", len);
    if !degrees.is_empty() {
        r.push("degrees", join(degrees));
    }
    match massey::triviality_screen(&q) {
        Screen::Trivial(reason) => {
            r.push("screen", "trivial");
            r.push("rule", reason);
            finish(r, Status::Success)
        }
        Screen::Unscreened => {
            r.push("screen", "unscreened");
            finish(r, Status::Inconclusive)
        }
    }
}

fn extend(cli: &Cli, mut r: Report, k: usize) -> Outcome {
    let l = require(cli)?;
    let base = &l.algebra;
    let ext = extension::extend(base, k);
    r.push("base", base.name());
    r.push("vars", k);
    header(&mut r, &ext);
    let b = compute_cohomology(base).betti();
    let be = compute_cohomology(&ext).betti();
    r.push("betti", join(&be));
    r.push("kunneth", if be == extension::kunneth_betti(&b, k) { "pass" } else { "fail" });
    let text = format::emit_with_comment(&ext, &format!("extension of {} by {k} closed degree-1 variables", base.name()));
    match &cli.output {
        Some(p) => {
            write(p, &text)?;
            r.push("written", p.display());
        }
        None => r.push_lines("document", &text),
    }
    finish(r, Status::Success)
}

fn catalog_cmd(cli: &Cli, mut r: Report) -> Outcome {
    for e in catalog::catalog() {
        let b = compute_cohomology(&e.algebra).betti();
        r.push("entry", format!("{} | n={} | {} | betti {} | {}", e.name, e.algebra.top_degree(), e.provenance, join(&b), e.summary));
    }
    if let Some(dir) = &cli.output {
        let tdir = dir.join("transcripts");
        std::fs::create_dir_all(&tdir).map_err(|e| CliError(format!("cannot create {}: {e}", tdir.display())))?;
        for e in catalog::catalog() {
            write(&dir.join(format!("{}.json", e.name)), &format::emit(&e.algebra))?;
            write(&tdir.join(format!("{}.txt", e.name)), &catalog::transcript(&e))?;
        }
        r.push("exported", dir.display());
    }
    finish(r, Status::Success)
}
