//! Command-line front end. [`run`] does all the work and returns a
//! [`CommandResult`]; `main` only prints it.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::algebra::{IdentityReport, SuperAlgebra};
use crate::catalog;
use crate::classify;
use crate::envelope::{self, systems, witness, NcPoly, RewriteSystem, SearchBounds};
use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::iso;
use crate::peirce;
use crate::sca;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    /// 0 success, 1 property violated, 2 usage or input error.
    pub status: u8,
    pub report: String,
    pub payload: Option<serde_json::Value>,
}

impl CommandResult {
    fn new<P: Serialize>(status: u8, report: String, payload: &P) -> Self {
        CommandResult {
            status,
            report,
            payload: Some(serde_json::to_value(payload).expect("payload serializes")),
        }
    }

    fn error(e: &Error) -> Self {
        CommandResult {
            status: 2,
            report: format!("error: {e}\n"),
            payload: Some(serde_json::json!({ "error": e.to_string() })),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "superjordan", version, about = "Structure-constant superalgebra workbench")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Work over GF(p), or `rational`. Inputs over the rationals are reduced.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Use the quadratic extension GF(p²) where it applies.
    #[arg(long, global = true)]
    pub ext: bool,
    /// Print nothing; only the exit status matters.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Print the machine-readable payload instead of the report.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check supercommutativity and the super Jordan identity of a table.
    Check(CheckArgs),
    /// Browse the built-in catalog.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Peirce decomposition relative to one or more idempotents.
    Peirce(PeirceArgs),
    /// Search for a graded isomorphism between two algebras.
    Iso(IsoArgs),
    /// Enumerate a classification template over a finite field.
    Classify(ClassifyArgs),
    /// Certify a speciality witness or search for an embedding.
    Special(SpecialArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// A `.sca` file or a catalog name.
    pub input: String,
    /// Also check the identity on every element pair (finite fields only).
    #[arg(long)]
    pub exhaustive: bool,
    /// Also check the ordinary Jordan identity with the grading ignored.
    #[arg(long)]
    pub ungraded: bool,
    /// Do not fill in transposed products missing from the file.
    #[arg(long)]
    pub no_complete: bool,
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    /// List entries with their types and annotations.
    List {
        #[arg(long)]
        dim: Option<usize>,
        /// Keep names containing this text.
        #[arg(long)]
        name: Option<String>,
    },
    /// Print the multiplication table of an entry.
    Show { name: String },
    /// Write an entry as a `.sca` file (stdout without --out).
    Export {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct PeirceArgs {
    pub input: String,
    /// Idempotent as a combination such as `e1+e2`; repeat for a family.
    #[arg(long = "idempotent")]
    pub idempotents: Vec<String>,
    /// Decompose relative to every idempotent (finite fields only).
    #[arg(long, conflicts_with = "idempotents")]
    pub all: bool,
    /// Refined decomposition for an orthogonal family.
    #[arg(long)]
    pub refined: bool,
}

#[derive(Debug, Args)]
pub struct IsoArgs {
    pub first: String,
    pub second: String,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Even and odd dimensions, e.g. `1,2`.
    #[arg(long = "type", value_name = "N,M")]
    pub type_pair: String,
    /// Even part, e.g. `U1` or `B1` or `U1+U2`.
    #[arg(long)]
    pub even: String,
    /// Also print the constraint polynomials.
    #[arg(long)]
    pub constraints: bool,
    /// Write orbit representatives as `.sca` files here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpecialArgs {
    /// K3, S1_3, S1_3-fixed, UT6 or S8_3.
    #[arg(long, conflicts_with = "search")]
    pub witness: Option<String>,
    /// Algebra to embed: a `.sca` file or catalog name (rationals).
    #[arg(long)]
    pub search: Option<String>,
    /// Built-in target: weyl, m11weyl, oddweyl, oddweylsupercommutator,
    /// m12 or cliffordN.
    #[arg(long, default_value = "m11weyl")]
    pub system: String,
    /// Rewrite system declaration file, overriding --system.
    #[arg(long)]
    pub system_file: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
    /// Comma-separated coefficient set.
    #[arg(long, default_value = "0,1,-1,2,-2,1/2,-1/2")]
    pub coeffs: String,
    #[arg(long, default_value_t = 2)]
    pub max_terms: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub identity: String,
    pub basis: Vec<String>,
    pub defect: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckPayload {
    pub field: String,
    pub supercommutative: bool,
    pub super_jordan: bool,
    pub ungraded: Option<bool>,
    pub exhaustive: Option<bool>,
    pub violations: Vec<ViolationRecord>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub name: String,
    pub type_pair: (usize, usize),
    pub annotations: Vec<String>,
    pub underlying: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeircePayload {
    pub idempotents: Vec<String>,
    /// Component name to basis, one map per decomposition.
    pub decompositions: Vec<Vec<(String, Vec<String>)>>,
    pub violations: Vec<ViolationRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoPayload {
    pub field: String,
    pub isomorphic: bool,
    pub map: Option<Vec<String>>,
    pub fingerprint_diff: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub members: usize,
    pub name: Option<String>,
    pub products: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyPayload {
    pub template: String,
    pub field: String,
    pub solutions: usize,
    pub orbits: Vec<OrbitRecord>,
    pub unmatched: usize,
    pub constraints: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialPayload {
    pub algebra: String,
    pub target: String,
    pub holds: bool,
    /// Basis label to image.
    pub images: Vec<(String, String)>,
    pub defects: Vec<ViolationRecord>,
}

/// Parses arguments (without the program name filtered out) and runs.
pub fn run_from<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            CommandResult { status, report: e.to_string(), payload: None }
        }
    }
}

pub fn run(cli: &Cli) -> CommandResult {
    let g = &cli.global;
    let out = match &cli.command {
        Command::Check(a) => cmd_check(g, a),
        Command::Catalog(c) => cmd_catalog(c),
        Command::Peirce(a) => cmd_peirce(g, a),
        Command::Iso(a) => cmd_iso(g, a),
        Command::Classify(a) => cmd_classify(g, a),
        Command::Special(a) => cmd_special(a),
    };
    out.unwrap_or_else(|e| CommandResult::error(&e))
}

/// `rational`, a prime, or a prime with `--ext` for GF(p²).
pub fn parse_field(text: &str, ext: bool) -> Result<Field> {
    let t = text.trim().to_ascii_lowercase();
    if matches!(t.as_str(), "rational" | "q" | "0") {
        if ext {
            return Err(Error::InvalidField("--ext needs a prime field".into()));
        }
        return Ok(Field::Rational);
    }
    let p: u64 = t
        .strip_prefix("gf(")
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(&t)
        .parse()
        .map_err(|_| Error::InvalidField(format!("{text:?} is not a prime or `rational`")))?;
    if ext {
        Field::ext(p)
    } else {
        Field::prime(p)
    }
}

fn load_input(input: &str, no_complete: bool) -> Result<SuperAlgebra> {
    let path = Path::new(input);
    if path.exists() {
        return sca::load(path, no_complete);
    }
    match catalog::get(input) {
        Ok(e) => Ok(e.algebra),
        Err(_) if input.ends_with(".sca") || input.contains('/') => Err(Error::Io(
            std::io::Error::new(std::io::ErrorKind::NotFound, format!("{input}: no such file")),
        )),
        Err(e) => Err(e),
    }
}

/// Loads and moves the algebra into the requested field.
fn load_in(g: &Global, input: &str, no_complete: bool) -> Result<SuperAlgebra> {
    let a = load_input(input, no_complete)?;
    match &g.field {
        None if g.ext => a.reduce(&a.field().extension()?),
        None => Ok(a),
        Some(f) => {
            let f = parse_field(f, g.ext)?;
            if *a.field() == f {
                Ok(a)
            } else {
                a.reduce(&f)
            }
        }
    }
}

fn records(a: &SuperAlgebra, identity: &str, r: &IdentityReport) -> Vec<ViolationRecord> {
    r.violations
        .iter()
        .map(|v| ViolationRecord {
            identity: identity.to_string(),
            basis: v.indices.iter().map(|&i| a.label(i).to_string()).collect(),
            defect: a.format_element(&v.defect),
        })
        .collect()
}

fn render_records(out: &mut String, recs: &[ViolationRecord]) {
    for r in recs {
        out.push_str(&format!("  {} fails at ({}): {}\n", r.identity, r.basis.join(", "), r.defect));
    }
}

fn status_of(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

fn cmd_check(g: &Global, args: &CheckArgs) -> Result<CommandResult> {
    let a = load_in(g, &args.input, args.no_complete)?;
    let sc = a.check_supercommutativity();
    let sj = a.check_super_jordan();
    let mut violations = records(&a, "supercommutativity", &sc);
    violations.extend(records(&a, "super Jordan", &sj));
    let mut warnings = sj.warnings.clone();
    let ungraded = if args.ungraded {
        let r = a.check_jordan_ungraded();
        violations.extend(records(&a, "ungraded Jordan", &r));
        Some(r.holds)
    } else {
        None
    };
    let exhaustive = if args.exhaustive {
        let r = a.check_jordan_exhaustive()?;
        warnings.extend(r.warnings.iter().cloned());
        violations.extend(
            r.violations
                .iter()
                .map(|v| ViolationRecord {
                    identity: "element pair".into(),
                    basis: v.indices.iter().map(|i| i.to_string()).collect(),
                    defect: a.format_element(&v.defect),
                }),
        );
        Some(r.holds)
    } else {
        None
    };
    warnings.sort();
    warnings.dedup();
    let ok = violations.is_empty();
    let mut report = String::new();
    for w in &warnings {
        report.push_str(&format!("warning: {w}\n"));
    }
    report.push_str(&format!(
        "{} over {}: type ({}|{})\n",
        args.input,
        a.field(),
        a.dim_even(),
        a.dim_odd()
    ));
    let mark = |b: bool| if b { "holds" } else { "FAILS" };
    report.push_str(&format!("supercommutativity: {}\n", mark(sc.holds)));
    report.push_str(&format!("super Jordan identity: {}\n", mark(sj.holds)));
    if let Some(u) = ungraded {
        report.push_str(&format!("ungraded Jordan identity: {}\n", mark(u)));
    }
    if let Some(x) = exhaustive {
        report.push_str(&format!("element-pair check: {}\n", mark(x)));
    }
    render_records(&mut report, &violations);
    let payload = CheckPayload {
        field: a.field().to_string(),
        supercommutative: sc.holds,
        super_jordan: sj.holds,
        ungraded,
        exhaustive,
        violations,
        warnings,
    };
    Ok(CommandResult::new(status_of(ok), report, &payload))
}

fn catalog_record(e: &catalog::CatalogEntry) -> CatalogRecord {
    CatalogRecord {
        name: e.name.clone(),
        type_pair: e.type_pair(),
        annotations: e.annotations.iter().map(|t| t.to_string()).collect(),
        underlying: e.underlying_algebra.clone(),
    }
}

fn cmd_catalog(c: &CatalogCommand) -> Result<CommandResult> {
    match c {
        CatalogCommand::List { dim, name } => {
            let names: Vec<String> = match dim {
                Some(d) => catalog::names_of_dimension(*d)?.iter().map(|s| s.to_string()).collect(),
                None => catalog::all_names(),
            };
            let mut recs = Vec::new();
            for n in names {
                if name.as_ref().is_some_and(|f| !n.contains(f.as_str())) {
                    continue;
                }
                recs.push(catalog_record(&catalog::get(&n)?));
            }
            let width = recs.iter().map(|r| r.name.len()).max().unwrap_or(0);
            let mut report = String::new();
            for r in &recs {
                report.push_str(&format!(
                    "{:width$}  ({}|{})  {}\n",
                    r.name,
                    r.type_pair.0,
                    r.type_pair.1,
                    r.annotations.join(",")
                ));
            }
            report.push_str(&format!("{} entries\n", recs.len()));
            Ok(CommandResult::new(0, report, &recs))
        }
        CatalogCommand::Show { name } => {
            let e = catalog::get(name)?;
            let mut report = format!(
                "{} ({}|{}) over {}\n",
                e.name,
                e.type_pair().0,
                e.type_pair().1,
                e.algebra.field()
            );
            if !e.annotations.is_empty() {
                report.push_str(&format!("annotations: {}\n", e.tag_list()));
            }
            if let Some(u) = &e.underlying_algebra {
                report.push_str(&format!("underlying algebra: {u}\n"));
            }
            report.push_str(&format!("source: {}\n", e.source));
            report.push_str(&e.algebra.render_table());
            Ok(CommandResult::new(0, report, &catalog_record(&e)))
        }
        CatalogCommand::Export { name, out } => {
            let e = catalog::get(name)?;
            let text = sca::to_string(&e.algebra);
            let report = match out {
                Some(p) => {
                    std::fs::write(p, &text)?;
                    format!("wrote {}\n", p.display())
                }
                None => text,
            };
            Ok(CommandResult::new(0, report, &sca::to_file(&e.algebra)))
        }
    }
}

fn dec_map(d: &peirce::PeirceDecomposition) -> Vec<(String, Vec<String>)> {
    let a = &d.algebra;
    peirce::EIGENVALUES
        .iter()
        .zip(&d.components)
        .map(|(n, b)| (format!("P{n}"), b.iter().map(|x| a.format_element(x)).collect()))
        .collect()
}

fn cmd_peirce(g: &Global, args: &PeirceArgs) -> Result<CommandResult> {
    let a = load_in(g, &args.input, false)?;
    let es = if args.all {
        if !a.field().is_finite() {
            return Err(Error::NeedsFiniteField(
                "--all enumerates idempotents over finite fields; pass --field p".into(),
            ));
        }
        peirce::find_idempotents(&a)?
    } else {
        if args.idempotents.is_empty() {
            return Err(Error::Peirce("give --idempotent or --all".into()));
        }
        args.idempotents
            .iter()
            .map(|t| a.parse_element(t))
            .collect::<Result<Vec<_>>>()?
    };
    let mut report = String::new();
    let mut payload = PeircePayload {
        idempotents: es.iter().map(|e| a.format_element(e)).collect(),
        decompositions: Vec::new(),
        violations: Vec::new(),
    };
    if args.refined {
        let r = peirce::refined_peirce(&a, &es)?;
        report.push_str(&r.render());
        let v = peirce::check_refined_multiplication(&r);
        payload.decompositions.push(
            r.components
                .iter()
                .map(|((i, j), b)| (format!("P{i}{j}"), b.iter().map(|x| a.format_element(x)).collect()))
                .collect(),
        );
        payload.violations = records(&a, "refined containment", &v);
    } else {
        if es.is_empty() {
            report.push_str("no idempotents\n");
        }
        for e in &es {
            let d = peirce::peirce_decompose(&a, e)?;
            report.push_str(&d.render());
            let v = peirce::check_peirce_multiplication(&d);
            payload.decompositions.push(dec_map(&d));
            payload.violations.extend(records(&a, "containment", &v));
        }
    }
    render_records(&mut report, &payload.violations);
    Ok(CommandResult::new(status_of(payload.violations.is_empty()), report, &payload))
}

fn cmd_iso(g: &Global, args: &IsoArgs) -> Result<CommandResult> {
    let a0 = load_input(&args.first, false)?;
    let b0 = load_input(&args.second, false)?;
    let field = match &g.field {
        Some(f) => parse_field(f, false)?,
        None if a0.field().is_finite() => a0.field().clone(),
        None => return Err(Error::NeedsFiniteField("isomorphism search needs --field p".into())),
    };
    let bring = |x: &SuperAlgebra| -> Result<SuperAlgebra> {
        if *x.field() == field {
            Ok(x.clone())
        } else {
            x.reduce(&field)
        }
    };
    let (a, b) = (bring(&a0)?, bring(&b0)?);
    let mut found = iso::find_graded_isomorphism(&a, &b)?.map(|m| (m, field.clone()));
    if found.is_none() && g.ext {
        let big = field.extension()?;
        let (a2, b2) = (a.reduce(&big)?, b.reduce(&big)?);
        found = iso::find_graded_isomorphism(&a2, &b2)?.map(|m| (m, big));
    }
    let (fa, fb) = (iso::fingerprint(&a0), iso::fingerprint(&b0));
    let diff = fa.diff(&fb);
    let mut report = String::new();
    let payload = match &found {
        Some((m, f)) => {
            report.push_str(&format!("isomorphic over {f}\n"));
            for line in m.describe() {
                report.push_str(&format!("  {line}\n"));
            }
            IsoPayload {
                field: f.to_string(),
                isomorphic: true,
                map: Some(m.describe()),
                fingerprint_diff: diff,
            }
        }
        None => {
            report.push_str(&format!("no graded isomorphism over {field}"));
            report.push_str(if g.ext { " or its quadratic extension\n" } else { "\n" });
            if diff.is_empty() {
                report.push_str("fingerprints agree\n");
            } else {
                report.push_str("fingerprint differences:\n");
                for d in &diff {
                    report.push_str(&format!("  {d}\n"));
                }
            }
            IsoPayload {
                field: field.to_string(),
                isomorphic: false,
                map: None,
                fingerprint_diff: diff,
            }
        }
    };
    Ok(CommandResult::new(status_of(payload.isomorphic), report, &payload))
}

fn cmd_classify(g: &Global, args: &ClassifyArgs) -> Result<CommandResult> {
    let (n, m) = args
        .type_pair
        .split_once(',')
        .and_then(|(n, m)| Some((n.trim().parse().ok()?, m.trim().parse().ok()?)))
        .ok_or_else(|| Error::Template(format!("bad --type {:?}; expected N,M", args.type_pair)))?;
    let t = classify::standard_template(n, m, &args.even)?;
    let field = match &g.field {
        Some(f) => parse_field(f, false)?,
        None => return Err(Error::NeedsFiniteField("classification needs --field p".into())),
    };
    let rep = classify::classify(&t, &field, g.ext)?;
    let mut report = rep.render();
    let constraints = args.constraints.then(|| {
        let sys = classify::generate_constraints(&t);
        sys.distinct().iter().map(|p| p.render(&sys.unknowns)).collect::<Vec<_>>()
    });
    if let Some(c) = &constraints {
        report.push_str("constraints:\n");
        for p in c {
            report.push_str(&format!("  {p}\n"));
        }
    }
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        for (i, (o, _)) in rep.orbits.iter().enumerate() {
            let path = dir.join(format!("orbit{}.sca", i + 1));
            sca::save(&o.representative, &path)?;
        }
        report.push_str(&format!("representatives written to {}\n", dir.display()));
    }
    let unmatched = rep.unmatched().len();
    let payload = ClassifyPayload {
        template: rep.template.clone(),
        field: rep.field.to_string(),
        solutions: rep.solutions,
        orbits: rep
            .orbits
            .iter()
            .map(|(o, name)| OrbitRecord {
                members: o.members.len(),
                name: name.clone(),
                products: o.representative.product_lines(),
            })
            .collect(),
        unmatched,
        constraints,
    };
    Ok(CommandResult::new(status_of(unmatched == 0), report, &payload))
}

fn embedding_result(
    j: &SuperAlgebra,
    name: &str,
    target: &str,
    sys: &RewriteSystem,
    images: &[NcPoly],
) -> Result<(bool, String, SpecialPayload)> {
    let r = envelope::verify_special_embedding(j, images, sys)?;
    let mut report = format!("{name} into {target}\n");
    for (i, im) in images.iter().enumerate() {
        report.push_str(&format!("  {} -> {}\n", j.label(i), sys.render(im)));
    }
    report.push_str(&r.render(j, sys));
    report.push_str(if r.holds { "embedding verified\n" } else { "embedding FAILS\n" });
    let payload = SpecialPayload {
        algebra: name.into(),
        target: target.into(),
        holds: r.holds,
        images: images
            .iter()
            .enumerate()
            .map(|(i, im)| (j.label(i).to_string(), sys.render(im)))
            .collect(),
        defects: r
            .violations
            .iter()
            .map(|(a, b, d)| ViolationRecord {
                identity: "homomorphism".into(),
                basis: vec![j.label(*a).into(), j.label(*b).into()],
                defect: sys.render(d),
            })
            .collect(),
    };
    Ok((r.holds, report, payload))
}

fn cmd_special(args: &SpecialArgs) -> Result<CommandResult> {
    if let Some(w) = &args.witness {
        let (w, target) = match w.to_ascii_uppercase().as_str() {
            "K3" => (witness::k3(), "M_{1|1}(W1)"),
            "S1_3" | "S3_1" => (witness::s3_1_as_printed(), "M_{1|2}"),
            "S1_3-FIXED" | "S3_1-FIXED" => (witness::s3_1(), "M_{1|2}"),
            "S8_3" | "S3_8" => (witness::s3_8(), "odd Weyl algebra"),
            "UT6" => return ut6_report(),
            _ => return Err(Error::UnknownEntry(format!("no witness named {w:?}"))),
        };
        let (ok, report, payload) = embedding_result(&w.algebra, w.entry, target, &w.system, &w.images)?;
        return Ok(CommandResult::new(status_of(ok), report, &payload));
    }
    let Some(input) = &args.search else {
        return Err(Error::InvalidMap("give --witness or --search".into()));
    };
    let j = load_input(input, false)?;
    let sys = match &args.system_file {
        Some(p) => RewriteSystem::from_json(&std::fs::read_to_string(p)?)?,
        None => systems::by_name(&args.system)?,
    };
    let coefficients = args
        .coeffs
        .split(',')
        .map(|c| {
            c.trim().parse::<Rational>().map_err(|_| Error::ScalarParse {
                input: c.into(),
                reason: "expected a rational".into(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let bounds = SearchBounds { degree: args.degree, coefficients, max_terms: args.max_terms };
    match envelope::search_embedding(&j, &sys, &bounds)? {
        Some(images) => {
            let (ok, report, payload) = embedding_result(&j, input, &args.system, &sys, &images)?;
            Ok(CommandResult::new(status_of(ok), report, &payload))
        }
        None => {
            let payload = SpecialPayload {
                algebra: input.clone(),
                target: args.system.clone(),
                holds: false,
                images: vec![],
                defects: vec![],
            };
            let report = format!(
                "no embedding of {input} into {} within degree {} and {} terms per image\n",
                args.system, args.degree, args.max_terms
            );
            Ok(CommandResult::new(1, report, &payload))
        }
    }
}

fn ut6_report() -> Result<CommandResult> {
    let mut report = String::new();
    let mut all = true;
    let mut defects = Vec::new();
    let t6 = catalog::get("T6")?.algebra;
    let s12 = catalog::get("S3_12")?.algebra;
    for (name, env, j) in [("T6", witness::ut6(), &t6), ("S3_12", witness::ut6_graded(), &s12)] {
        let r = envelope::verify_associative_envelope_table(&env, j, &witness::UT6_INCLUSION)?;
        let mark = |b: bool| if b { "holds" } else { "FAILS" };
        report.push_str(&format!(
            "{name} in a ({}|{}) envelope: associativity {}, homomorphism {}, injective {}\n",
            env.dim_even(),
            env.dim_odd(),
            mark(r.associativity.holds),
            mark(r.homomorphism.holds),
            mark(r.injective)
        ));
        defects.extend(records(&env, "associativity", &r.associativity));
        defects.extend(records(&env, "homomorphism", &r.homomorphism));
        all &= r.holds();
    }
    render_records(&mut report, &defects);
    report.push_str(if all { "envelope verified\n" } else { "envelope FAILS\n" });
    let payload = SpecialPayload {
        algebra: "T6".into(),
        target: "U(T6)".into(),
        holds: all,
        images: witness::UT6_INCLUSION
            .iter()
            .enumerate()
            .map(|(i, im)| (t6.label(i).to_string(), im.to_string()))
            .collect(),
        defects,
    };
    Ok(CommandResult::new(status_of(all), report, &payload))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CommandResult {
        run_from(std::iter::once("superjordan").chain(args.iter().copied()))
    }

    #[test]
    fn field_flags() {
        assert_eq!(parse_field("rational", false).unwrap(), Field::Rational);
        assert_eq!(parse_field("5", false).unwrap(), Field::prime(5).unwrap());
        assert_eq!(parse_field("GF(7)", true).unwrap(), Field::ext(7).unwrap());
        assert!(parse_field("6", false).is_err());
        assert!(parse_field("q", true).is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["nope"]).status, 2);
        assert_eq!(run_args(&["catalog", "show", "NOPE"]).status, 2);
        assert_eq!(run_args(&["--help"]).status, 0);
        assert_eq!(run_args(&["iso", "S3_9", "S3_12"]).status, 2);
        assert_eq!(run_args(&["peirce", "K3", "--all"]).status, 2);
    }

    #[test]
    fn payloads_parse_back() {
        let r = run_args(&["--field", "5", "iso", "S3_9", "S3_12"]);
        assert_eq!(r.status, 1);
        let p: IsoPayload = serde_json::from_value(r.payload.unwrap()).unwrap();
        assert!(!p.isomorphic);
        assert!(!p.fingerprint_diff.is_empty());
        let r = run_args(&["catalog", "list", "--dim", "1"]);
        let recs: Vec<CatalogRecord> = serde_json::from_value(r.payload.unwrap()).unwrap();
        assert!(recs.iter().any(|r| r.name == "S1_1"));
    }
}
