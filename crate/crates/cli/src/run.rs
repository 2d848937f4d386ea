//! Command implementations and verification suites.
//!
//! Exit codes: `0` when every requested check passes, `1` when a check fails
//! (the witness is in the report on standard output), `2` on input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use polaritykit::canonical::CanonicalFrame;
use polaritykit::guard;
use polaritykit::polarity::{all_stable_sets, dm_completion_check, is_separated};
use polaritykit::relation::{
    check_complete_additivity, closed_image, conjugate_operator, conjugate_relation_from,
    galois_tuples, is_conjugate_pair, residual_galois, SortedRelation,
};
use polaritykit::set::IndexSet;
use polaritykit::{Check, Error, GaloisSet, Polarity, Report, Sort};

use crate::doc::{
    parse_frame_doc, parse_lattice_doc, serialize_frame_doc, serialize_lattice_doc, DocError,
    ParsedFrame, ParsedLattice,
};
use crate::random::{random_lattice, random_polarity, random_relation};

#[derive(Debug, Parser)]
#[command(
    name = "polaritykit",
    version,
    about = "Frames, stable-set lattices, and canonical frames of lattice expansions"
)]
pub struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Include wall-clock timing in the report (off by default so identical
    /// inputs give byte-identical output).
    #[arg(long, global = true)]
    pub timings: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemmas,
    Additivity,
    Conjugates,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RandomKind {
    Polarity,
    Lattice,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the stable-set lattices of a frame and check that they
    /// complete the point order.
    Complete { file: PathBuf },

    /// Build the canonical frame of a lattice document and emit it as a
    /// frame document.
    Canonical {
        file: PathBuf,
        /// Write the frame document here instead of standard output.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },

    /// Run a verification suite on a frame or lattice document.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },

    /// Verify that a lattice document is isomorphic to the stable-set
    /// lattice of its canonical frame, operators included.
    Represent { file: PathBuf },

    /// Generate a random structure document.
    Random {
        #[arg(long, value_enum)]
        kind: RandomKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Left carrier size (polarity).
        #[arg(long, default_value_t = 3)]
        nx: usize,
        /// Right carrier size (polarity).
        #[arg(long, default_value_t = 3)]
        ny: usize,
        /// Incidence or tuple density in [0,1].
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Element count (lattice).
        #[arg(long, default_value_t = 4)]
        size: usize,
        /// Number of random relations to attach (polarity).
        #[arg(long, default_value_t = 0)]
        relations: usize,
        /// Arity of the attached relations.
        #[arg(long, default_value_t = 1)]
        arity: usize,
    },
}

/// Everything a command can fail with before producing a report.
#[derive(Debug)]
pub enum RunError {
    Io(PathBuf, std::io::Error),
    Doc(DocError),
    Core(Error),
    Input(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            RunError::Doc(e) => write!(f, "{e}"),
            RunError::Core(e) => write!(f, "{e}"),
            RunError::Input(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<DocError> for RunError {
    fn from(e: DocError) -> RunError {
        RunError::Doc(e)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> RunError {
        RunError::Core(e)
    }
}

/// Run a parsed command line; report goes to `out`, problems to `err`.
pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, RunError> {
    match &cli.command {
        Command::Complete { file } => {
            let frame = load_frame(file)?;
            let report = timed(cli.timings, || completion_report(&frame.polarity));
            emit_report(cli, &report, out)
        }
        Command::Canonical { file, out: dest } => {
            let lattice = load_lattice(file)?;
            let frame = CanonicalFrame::new(lattice.expansion)?;
            let doc = ParsedFrame {
                name: lattice.name,
                polarity: frame.polarity().clone(),
                relations: frame.relations().to_vec(),
            };
            let text = serialize_frame_doc(&doc);
            match dest {
                Some(path) => {
                    fs::write(path, text).map_err(|e| RunError::Io(path.clone(), e))?;
                }
                None => {
                    out.write_all(text.as_bytes())
                        .map_err(|e| RunError::Io("<stdout>".into(), e))?;
                }
            }
            Ok(0)
        }
        Command::Check { file, suite } => {
            let text = read_input(file)?;
            let report = match sniff(&text) {
                Kind::Lattice => {
                    let lattice = parse_lattice_doc(&text)?;
                    let frame = CanonicalFrame::new(lattice.expansion)?;
                    timed_result(cli.timings, || lattice_suite(&frame, *suite))?
                }
                Kind::Frame => {
                    let frame = parse_frame_doc(&text)?;
                    timed_result(cli.timings, || {
                        frame_suite(&frame.polarity, &frame.relations, *suite)
                    })?
                }
            };
            emit_report(cli, &report, out)
        }
        Command::Represent { file } => {
            let lattice = load_lattice(file)?;
            let frame = CanonicalFrame::new(lattice.expansion)?;
            let report = timed_result(cli.timings, || representation_suite(&frame))?;
            emit_report(cli, &report, out)
        }
        Command::Random {
            kind,
            seed,
            nx,
            ny,
            density,
            size,
            relations,
            arity,
        } => {
            let text = match kind {
                RandomKind::Polarity => {
                    let polarity = random_polarity(*seed, *nx, *ny, *density)?;
                    let rels: Vec<SortedRelation> = (0..*relations)
                        .map(|i| {
                            random_relation(
                                seed.wrapping_add(1 + i as u64),
                                &polarity,
                                *arity,
                                *density,
                            )
                        })
                        .collect::<Result<_, _>>()?;
                    serialize_frame_doc(&ParsedFrame {
                        name: format!("random-{seed}"),
                        polarity,
                        relations: rels,
                    })
                }
                RandomKind::Lattice => {
                    let lattice = random_lattice(*seed, *size)?;
                    serialize_lattice_doc(&ParsedLattice {
                        name: format!("random-{seed}"),
                        element_names: None,
                        expansion: polaritykit::LatticeExpansion::bare(lattice),
                    })
                }
            };
            out.write_all(text.as_bytes())
                .map_err(|e| RunError::Io("<stdout>".into(), e))?;
            Ok(0)
        }
    }
}

enum Kind {
    Lattice,
    Frame,
}

fn sniff(text: &str) -> Kind {
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with("frame") {
            return Kind::Frame;
        }
        break;
    }
    Kind::Lattice
}

fn read_input(path: &Path) -> Result<String, RunError> {
    fs::read_to_string(path).map_err(|e| RunError::Io(path.to_path_buf(), e))
}

fn load_lattice(path: &Path) -> Result<ParsedLattice, RunError> {
    let text = read_input(path)?;
    match sniff(&text) {
        Kind::Lattice => Ok(parse_lattice_doc(&text)?),
        Kind::Frame => Err(RunError::Input(format!(
            "{} is a frame document; this command needs a lattice document",
            path.display()
        ))),
    }
}

fn load_frame(path: &Path) -> Result<ParsedFrame, RunError> {
    let text = read_input(path)?;
    match sniff(&text) {
        Kind::Frame => Ok(parse_frame_doc(&text)?),
        Kind::Lattice => Err(RunError::Input(format!(
            "{} is a lattice document; this command needs a frame document",
            path.display()
        ))),
    }
}

fn timed(timings: bool, f: impl FnOnce() -> Report) -> Report {
    let start = Instant::now();
    let mut report = f();
    if timings {
        report.elapsed_micros = Some(start.elapsed().as_micros() as u64);
    }
    report
}

fn timed_result(
    timings: bool,
    f: impl FnOnce() -> Result<Report, RunError>,
) -> Result<Report, RunError> {
    let start = Instant::now();
    let mut report = f()?;
    if timings {
        report.elapsed_micros = Some(start.elapsed().as_micros() as u64);
    }
    Ok(report)
}

fn emit_report(cli: &Cli, report: &Report, out: &mut dyn Write) -> Result<i32, RunError> {
    let rendered = match cli.format {
        Format::Text => render_text(report),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
    };
    out.write_all(rendered.as_bytes())
        .map_err(|e| RunError::Io("<stdout>".into(), e))?;
    Ok(if report.passed() { 0 } else { 1 })
}

/// Plain-text rendering of a report tree.
pub fn render_text(report: &Report) -> String {
    fn walk(check: &Check, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        let verdict = if check.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{pad}[{verdict}] {}\n", check.name));
        for w in &check.witnesses {
            out.push_str(&format!("{pad}  - {w}\n"));
        }
        for child in &check.children {
            walk(child, depth + 1, out);
        }
    }
    let mut out = String::new();
    out.push_str(&format!("schema {}\n", report.schema));
    out.push_str(&format!("report {}\n", report.name));
    for check in &report.checks {
        walk(check, 0, &mut out);
    }
    if let Some(us) = report.elapsed_micros {
        out.push_str(&format!("elapsed {us}us\n"));
    }
    out.push_str(&format!(
        "result: {}\n",
        if report.passed() { "PASS" } else { "FAIL" }
    ));
    out
}

/// The `complete` report: list both stable-set families, then check
/// separation and the completion properties.
pub fn completion_report(p: &Polarity) -> Report {
    let mut report = Report::new("completion");
    for (sort, label) in [(Sort::One, "left"), (Sort::Dual, "right")] {
        let family = all_stable_sets(p, sort);
        let mut check = Check::pass(format!("stable-sets-{label}"));
        check.witnesses = family.sets.iter().map(|s| format!("{s}")).collect();
        report.push(check);
    }
    let separated = is_separated(p);
    report.push(Check::leaf(
        "separated",
        if separated {
            None
        } else {
            Some("duplicate polars on a carrier".into())
        },
    ));
    if separated {
        match dm_completion_check(p) {
            Ok(dm) => report.push(Check::group("dedekind-macneille", dm.checks)),
            Err(e) => report.push(Check::fail("dedekind-macneille", e.to_string())),
        }
    }
    report.sort_by_name();
    report
}

/// Frame-level lemma suite: closure laws of the connection and section
/// stability of every relation's Galois dual.
pub fn frame_lemma_suite(p: &Polarity, relations: &[SortedRelation]) -> Report {
    let mut report = Report::new("frame-lemmas");
    let limit = guard::limit(guard::POWERSET_DEFAULT);

    let mut closure_witness = None;
    let mut upset_witness = None;
    for sort in [Sort::One, Sort::Dual] {
        let n = p.carrier_size(sort);
        if n <= limit {
            for s in IndexSet::subsets(n) {
                let c = p.closure_mask(sort, s);
                if !s.is_subset(c) || p.closure_mask(sort, c) != c {
                    closure_witness = Some(format!("subset {s} of sort {sort}"));
                }
            }
        }
        let pre = polaritykit::polarity::preorder(p, sort);
        for g in all_stable_sets(p, sort).sets {
            for u in g.iter() {
                for w in 0..n {
                    if pre.le(u, w) && !g.contains(w) {
                        upset_witness = Some(format!("set {g}, points {u} and {w}"));
                    }
                }
            }
        }
    }
    report.push(Check::leaf("closure-idempotent-extensive", closure_witness));
    report.push(Check::leaf("galois-sets-are-upsets", upset_witness));

    let left = all_stable_sets(p, Sort::One);
    let right = all_stable_sets(p, Sort::Dual);
    let duality = if left.len() == right.len()
        && left.sets.iter().all(|&g| {
            let im = p.polar(Sort::One, g);
            right.index_of(im).is_some() && p.polar(Sort::Dual, im) == g
        }) {
        None
    } else {
        Some("polar maps do not pair the stable families".to_string())
    };
    report.push(Check::leaf("stable-families-dual", duality));

    for r in relations {
        let st = polaritykit::relation::sections_all_stable(p, r);
        report.push(Check::leaf(
            format!("dual-sections-stable-{}", r.name),
            st.witness,
        ));
    }
    report.sort_by_name();
    report
}

/// Complete additivity of every relation at every argument place.
pub fn frame_additivity_suite(
    p: &Polarity,
    relations: &[SortedRelation],
) -> Result<Report, RunError> {
    let mut report = Report::new("additivity");
    for r in relations {
        for k in 0..r.arity() {
            let outcome = check_complete_additivity(p, r, k)?;
            report.push(Check::leaf(
                format!("join-distribution-{}-place-{}", r.name, k + 1),
                outcome.witness,
            ));
        }
    }
    report.sort_by_name();
    Ok(report)
}

/// Conjugate construction, the conjugacy law, and the residual/conjugate
/// agreement at every place of every relation.
pub fn frame_conjugate_suite(
    p: &Polarity,
    relations: &[SortedRelation],
) -> Result<Report, RunError> {
    let mut report = Report::new("conjugates");
    for r in relations {
        for k in 0..r.arity() {
            let label = format!("{}-place-{}", r.name, k + 1);
            match conjugate_relation_from(p, r, k) {
                Err(Error::SectionsNotStable(msg)) => {
                    report.push(Check::fail(format!("conjugate-construction-{label}"), msg));
                    continue;
                }
                Err(e) => return Err(e.into()),
                Ok(s) => {
                    report.push(Check::pass(format!("conjugate-construction-{label}")));
                    let pair = is_conjugate_pair(p, r, &s, k)?;
                    report.push(Check::leaf(
                        format!("conjugacy-law-{label}"),
                        if pair {
                            None
                        } else {
                            Some("derived relation is not a conjugate".into())
                        },
                    ));
                }
            }
            report.push(residual_conjugate_agreement(p, r, k, &label)?);
        }
    }
    report.sort_by_name();
    Ok(report)
}

/// For every Galois tuple and target: the three-form residual exists, is the
/// polar twist of the conjugate operator, and satisfies the residuation law.
fn residual_conjugate_agreement(
    p: &Polarity,
    r: &SortedRelation,
    k: usize,
    label: &str,
) -> Result<Check, RunError> {
    let out_family = all_stable_sets(p, r.stype().out);
    let mut witness = None;
    'outer: for tuple in galois_tuples(p, &r.stype().args) {
        for gi in 0..out_family.len() {
            let target: GaloisSet = out_family.galois(gi);
            let mut residual_args = tuple.clone();
            residual_args[k] = target;
            let beta = match residual_galois(p, r, k, &residual_args) {
                Ok(b) => b,
                Err(e) => {
                    witness = Some(format!("residual failed: {e}"));
                    break 'outer;
                }
            };
            let mut conj_args = tuple.clone();
            conj_args[k] = target.polar(p);
            let gamma = conjugate_operator(p, r, k, &conj_args)?;
            if gamma.polar(p) != beta {
                witness = Some(format!(
                    "residual {} differs from the conjugate's polar {}",
                    beta.members(),
                    gamma.polar(p).members()
                ));
                break 'outer;
            }
            // Residuation law.
            let alpha = closed_image(p, r, &tuple)?;
            if alpha.members().is_subset(target.members())
                != tuple[k].members().is_subset(beta.members())
            {
                witness = Some(format!(
                    "residuation law fails at target {}",
                    target.members()
                ));
                break 'outer;
            }
        }
    }
    Ok(Check::leaf(
        format!("residual-conjugate-agreement-{label}"),
        witness,
    ))
}

pub fn frame_suite(
    p: &Polarity,
    relations: &[SortedRelation],
    suite: Suite,
) -> Result<Report, RunError> {
    match suite {
        Suite::Lemmas => Ok(frame_lemma_suite(p, relations)),
        Suite::Additivity => frame_additivity_suite(p, relations),
        Suite::Conjugates => frame_conjugate_suite(p, relations),
        Suite::All => {
            let mut report = Report::new("frame-checks");
            let lemmas = frame_lemma_suite(p, relations);
            report.push(Check::group("lemmas", lemmas.checks));
            let additivity = frame_additivity_suite(p, relations)?;
            report.push(Check::group("additivity", additivity.checks));
            let conjugates = frame_conjugate_suite(p, relations)?;
            report.push(Check::group("conjugates", conjugates.checks));
            report.sort_by_name();
            Ok(report)
        }
    }
}

/// Representation verdict for a lattice document.
pub fn representation_suite(frame: &CanonicalFrame) -> Result<Report, RunError> {
    let mut report = Report::new("representation");
    let iso = frame.representation_report();
    report.push(Check::group("lattice-isomorphism", iso.checks));
    for idx in 0..frame.expansion().operators.len() {
        let name = frame.expansion().operators[idx].name.clone();
        match frame.represented_operator(idx) {
            Ok((_, op_report)) => {
                report.push(Check::group(format!("operator-{name}"), op_report.checks))
            }
            Err(e) => report.push(Check::fail(format!("operator-{name}"), e.to_string())),
        }
    }
    report.sort_by_name();
    Ok(report)
}

pub fn lattice_suite(frame: &CanonicalFrame, suite: Suite) -> Result<Report, RunError> {
    match suite {
        Suite::Lemmas => Ok(frame.verify_lemmas()),
        Suite::Additivity => frame_additivity_suite(frame.polarity(), frame.relations()),
        Suite::Conjugates => frame_conjugate_suite(frame.polarity(), frame.relations()),
        Suite::All => {
            let mut report = Report::new("canonical-checks");
            report.push(Check::group("lemmas", frame.verify_lemmas().checks));
            let additivity = frame_additivity_suite(frame.polarity(), frame.relations())?;
            report.push(Check::group("additivity", additivity.checks));
            let conjugates = frame_conjugate_suite(frame.polarity(), frame.relations())?;
            report.push(Check::group("conjugates", conjugates.checks));
            let representation = representation_suite(frame)?;
            report.push(Check::group("representation", representation.checks));
            report.push(Check::group(
                "extension",
                frame.canonical_extension_check().checks,
            ));
            match dm_completion_check(frame.polarity()) {
                Ok(dm) => report.push(Check::group("dedekind-macneille", dm.checks)),
                Err(e) => report.push(Check::fail("dedekind-macneille", e.to_string())),
            }
            report.sort_by_name();
            Ok(report)
        }
    }
}
