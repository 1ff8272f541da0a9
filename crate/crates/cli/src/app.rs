//! Command dispatch, human rendering and JSON reports.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbispec_core::catalog::{self, CatalogEntry, EntryData};
use orbispec_core::crystal::{CrystalGroup, FiniteAffine};
use orbispec_core::exact::{parse_rational, IntMatrix, RatMatrix, Rational};
use orbispec_core::group::IsotropyType;
use orbispec_core::homog::{self, FiniteOrthGroup, NonConjugacyWitness, OrthConjugacy, QuotientKind};
use orbispec_core::isotropy::{self, Topology};
use orbispec_core::spectrum::{self, Comparison};
use serde_json::{json, Value};

use crate::files::{self, FileError, GroupFile, Loaded};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_DIFFERENT: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "orbispec", version, about = "Exact spectra and isotropy of flat orbifolds")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues 4π²·μ of the Hodge Laplacian on k-forms, with multiplicities.
    Spectrum {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        cutoff: String,
        #[command(flatten)]
        out: Output,
    },
    /// First μ at which two k-form spectra differ.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        cutoff: String,
        #[command(flatten)]
        out: Output,
    },
    /// Maximal isotropy order and the groups attaining it.
    Isotropy {
        #[arg(long)]
        group: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Components of the singular set.
    Strata {
        #[arg(long)]
        group: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Class-preserving bijection between two groups.
    AlmostConjugate {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// A torus or orthogonal group file, or `orthogonal` for the full orthogonal group.
        #[arg(long)]
        ambient: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// The built-in example pairs.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    List {
        #[command(flatten)]
        out: Output,
    },
    Run {
        name: String,
        #[command(flatten)]
        out: Output,
    },
    RunAll {
        #[command(flatten)]
        out: Output,
    },
    /// Writes the entry's groups as group files into a directory.
    Export {
        name: String,
        #[arg(long)]
        dir: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    File(#[from] FileError),
    #[error("{0}")]
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::File(_) | Failure::Input(_) => EXIT_INPUT,
        }
    }
}

/// What a command produced: a human rendering, structured results and whether
/// the answer was the "different" outcome.
struct Outcome {
    inputs: Value,
    human: String,
    results: Value,
    different: bool,
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (name, format) = describe(&cli.command);
    match execute(cli.command) {
        Ok(o) => {
            let text = match format {
                Format::Table => o.human,
                Format::Json => {
                    let report = json!({
                        "command": name,
                        "inputs": o.inputs,
                        "results": o.results,
                        "version": env!("CARGO_PKG_VERSION"),
                    });
                    serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
                }
            };
            let _ = out.write_all(text.as_bytes());
            if o.different {
                EXIT_DIFFERENT
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn describe(c: &Command) -> (&'static str, Format) {
    match c {
        Command::Spectrum { out, .. } => ("spectrum", out.format),
        Command::Compare { out, .. } => ("compare", out.format),
        Command::Isotropy { out, .. } => ("isotropy", out.format),
        Command::Strata { out, .. } => ("strata", out.format),
        Command::AlmostConjugate { out, .. } => ("almost-conjugate", out.format),
        Command::Catalog { action } => match action {
            CatalogAction::List { out } => ("catalog list", out.format),
            CatalogAction::Run { out, .. } => ("catalog run", out.format),
            CatalogAction::RunAll { out } => ("catalog run-all", out.format),
            CatalogAction::Export { out, .. } => ("catalog export", out.format),
        },
    }
}

fn execute(c: Command) -> Result<Outcome, Failure> {
    match c {
        Command::Spectrum { group, k, cutoff, .. } => spectrum_cmd(&group, k, &cutoff),
        Command::Compare { a, b, k, cutoff, .. } => compare_cmd(&a, &b, k, &cutoff),
        Command::Isotropy { group, .. } => isotropy_cmd(&group),
        Command::Strata { group, .. } => strata_cmd(&group),
        Command::AlmostConjugate { a, b, ambient, .. } => almost_conjugate_cmd(&a, &b, ambient.as_deref()),
        Command::Catalog { action } => match action {
            CatalogAction::List { .. } => Ok(catalog_list()),
            CatalogAction::Run { name, .. } => {
                let entry = catalog::get(&name).map_err(|e| Failure::Usage(e.to_string()))?;
                Ok(catalog_run(&[entry]))
            }
            CatalogAction::RunAll { .. } => {
                let entries: Vec<CatalogEntry> =
                    catalog::list().into_iter().map(|n| catalog::get(n).expect("listed entry")).collect();
                Ok(catalog_run(&entries))
            }
            CatalogAction::Export { name, dir, .. } => {
                let entry = catalog::get(&name).map_err(|e| Failure::Usage(e.to_string()))?;
                catalog_export(&entry, &dir)
            }
        },
    }
}

fn cutoff_arg(s: &str) -> Result<Rational, Failure> {
    let q = parse_rational(s).map_err(|e| Failure::Usage(format!("--cutoff: {e}")))?;
    if q < Rational::from_integer(0.into()) {
        return Err(Failure::Usage(format!("--cutoff: {s} is negative")));
    }
    Ok(q)
}

fn crystal(path: &Path) -> Result<(String, CrystalGroup, Option<IntMatrix>), Failure> {
    match files::load(path)? {
        Loaded::Crystal { name, group, sublattice } => Ok((name, group, sublattice)),
        other => Err(Failure::Input(format!(
            "{}: expected a crystal group file, found kind {}",
            path.display(),
            other.kind()
        ))),
    }
}

fn degree(k: usize, g: &CrystalGroup) -> Result<(), Failure> {
    if k > g.dim() {
        return Err(Failure::Usage(format!("--k: degree {k} exceeds the dimension {}", g.dim())));
    }
    Ok(())
}

fn spectrum_cmd(path: &Path, k: usize, cutoff: &str) -> Result<Outcome, Failure> {
    let q = cutoff_arg(cutoff)?;
    let (name, g, _) = crystal(path)?;
    degree(k, &g)?;
    let table = spectrum::spectrum_table(&g, k, &q).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let rows: Vec<(&Rational, u64)> = table.entries.iter().filter(|(_, d)| **d > 0).map(|(mu, d)| (mu, *d)).collect();
    let mut human = format!("{name}: Laplacian on {k}-forms, mu <= {q}\n");
    let width = rows.iter().map(|(mu, _)| eigenvalue(mu).chars().count()).max().unwrap_or(0).max(10);
    let _ = writeln!(human, "{:<width$}  multiplicity", "eigenvalue");
    for (mu, d) in &rows {
        let _ = writeln!(human, "{:<width$}  {d}", eigenvalue(mu));
    }
    let results = json!({
        "k": k,
        "cutoff": q.to_string(),
        "entries": rows.iter().map(|(mu, d)| json!({"mu": mu.to_string(), "multiplicity": d})).collect::<Vec<_>>(),
    });
    let inputs = json!({"group": path.display().to_string(), "k": k, "cutoff": q.to_string()});
    Ok(Outcome { inputs, human, results, different: false })
}

fn eigenvalue(mu: &Rational) -> String {
    format!("4π²·{mu}")
}

fn compare_cmd(a: &Path, b: &Path, k: usize, cutoff: &str) -> Result<Outcome, Failure> {
    let q = cutoff_arg(cutoff)?;
    let (na, ga, _) = crystal(a)?;
    let (nb, gb, _) = crystal(b)?;
    if ga.dim() != gb.dim() {
        return Err(Failure::Input(format!("{}: dimension {} differs from {}", b.display(), gb.dim(), ga.dim())));
    }
    degree(k, &ga)?;
    let cmp = spectrum::compare(&ga, &gb, k, &q).map_err(|e| Failure::Input(e.to_string()))?;
    let inputs = json!({"a": a.display().to_string(), "b": b.display().to_string(), "k": k, "cutoff": q.to_string()});
    Ok(match cmp {
        Comparison::Equal => Outcome {
            inputs,
            human: format!("Equal: {na} and {nb} have the same {k}-form spectrum for mu <= {q}\n"),
            results: json!({"verdict": "equal"}),
            different: false,
        },
        Comparison::FirstDifference { mu, a: da, b: db } => Outcome {
            inputs,
            human: format!(
                "FirstDifference at mu = {mu} (eigenvalue {}): {na} has multiplicity {da}, {nb} has {db}\n",
                eigenvalue(&mu)
            ),
            results: json!({"verdict": "first_difference", "mu": mu.to_string(), "a": da, "b": db}),
            different: true,
        },
    })
}

fn iso_names(types: &[IsotropyType]) -> Vec<String> {
    types.iter().map(ToString::to_string).collect()
}

fn isotropy_cmd(path: &Path) -> Result<Outcome, Failure> {
    let inputs = json!({"group": path.display().to_string()});
    match files::load(path)? {
        Loaded::Crystal { name, group, .. } => {
            let (order, types) = isotropy::max_isotropy(&group);
            let names = iso_names(&types);
            Ok(Outcome {
                inputs,
                human: format!("{name}: maximal isotropy order {order}, attained by {}\n", names.join(", ")),
                results: json!({"space": "quotient", "max_order": order, "types": names}),
                different: false,
            })
        }
        Loaded::Orthogonal { name, group } => {
            let (order, witnesses) = homog::max_order_with_fixed_dim(&group, 1);
            let fixed: Vec<usize> = witnesses.iter().map(|s| homog::fixed_dim(s, group.dim())).collect();
            Ok(Outcome {
                inputs,
                human: format!(
                    "{name}: maximal isotropy order {order} on the unit sphere, {} subgroup(s) attaining it\n",
                    witnesses.len()
                ),
                results: json!({"space": "sphere", "max_order": order, "witness_fixed_dims": fixed}),
                different: false,
            })
        }
        Loaded::Torus { .. } => {
            Err(Failure::Input(format!("{}: isotropy needs a crystal or orthogonal group file", path.display())))
        }
    }
}

fn topology_name(t: Topology) -> &'static str {
    match t {
        Topology::Point => "point",
        Topology::Circle => "circle",
        Topology::OpenSegment => "open segment",
        Topology::Surface => "surface",
    }
}

fn strata_cmd(path: &Path) -> Result<Outcome, Failure> {
    let inputs = json!({"group": path.display().to_string()});
    match files::load(path)? {
        Loaded::Crystal { name, group, .. } => {
            let strata =
                isotropy::singular_strata(&group).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let mut human = format!("{name}: {} kind(s) of singular component\n", strata.len());
            let mut rows = Vec::new();
            for s in &strata {
                let len = s.sq_length.as_ref().map(|l| format!(", squared length {l}")).unwrap_or_default();
                let _ =
                    writeln!(human, "{} x {} with isotropy {}{len}", s.count, topology_name(s.topology), s.isotropy);
                rows.push(json!({
                    "count": s.count,
                    "dim": s.dim,
                    "topology": topology_name(s.topology),
                    "isotropy": s.isotropy.to_string(),
                    "sq_length": s.sq_length.as_ref().map(ToString::to_string),
                }));
            }
            Ok(Outcome { inputs, human, results: json!({"space": "quotient", "strata": rows}), different: false })
        }
        Loaded::Orthogonal { name, group } => {
            let strata =
                homog::sphere_strata(&group).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let mut human = format!("{name}: strata of maximal isotropy on the unit sphere\n");
            let mut rows = Vec::new();
            for s in &strata {
                let kind = match s.kind {
                    QuotientKind::ProjectiveSpace => "projective space",
                    QuotientKind::Sphere => "sphere",
                };
                let points = s.point_count.map(|p| format!(", {p} point(s)")).unwrap_or_default();
                // A one-dimensional projective space is again a circle.
                let shape = if s.dim() == 1 { "circle" } else { kind };
                let _ = writeln!(
                    human,
                    "{} x dimension {} ({shape}), isotropy order {}{points}",
                    s.components,
                    s.dim(),
                    s.isotropy_order
                );
                rows.push(json!({
                    "components": s.components,
                    "dim": s.dim(),
                    "fixed_dim": s.fixed_dim,
                    "kind": kind,
                    "isotropy_order": s.isotropy_order,
                    "point_count": s.point_count,
                }));
            }
            Ok(Outcome { inputs, human, results: json!({"space": "sphere", "strata": rows}), different: false })
        }
        Loaded::Torus { .. } => {
            Err(Failure::Input(format!("{}: strata needs a crystal or orthogonal group file", path.display())))
        }
    }
}

fn affine_json(x: &FiniteAffine) -> Value {
    json!({
        "linear": x.linear.to_rows(),
        "transl": x.transl.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

fn matrix_json(m: &RatMatrix) -> Value {
    json!(m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn orthogonal(path: &Path) -> Result<(String, FiniteOrthGroup), Failure> {
    match files::load(path)? {
        Loaded::Orthogonal { name, group } => Ok((name, group)),
        other => Err(Failure::Input(format!(
            "{}: expected an orthogonal group file, found kind {}",
            path.display(),
            other.kind()
        ))),
    }
}

fn verdict(found: bool) -> &'static str {
    if found {
        "almost conjugate"
    } else {
        "not almost conjugate"
    }
}

fn almost_conjugate_cmd(a: &Path, b: &Path, ambient: Option<&str>) -> Result<Outcome, Failure> {
    let mut inputs = json!({"a": a.display().to_string(), "b": b.display().to_string()});
    inputs["ambient"] = json!(ambient.unwrap_or("orthogonal"));
    match ambient {
        None | Some("orthogonal") => {
            let (na, ga) = orthogonal(a)?;
            let (nb, gb) = orthogonal(b)?;
            let matches = homog::almost_conjugate_orthogonal(&ga, &gb);
            let mut human = format!("{na} and {nb}: {} in O({})\n", verdict(matches.is_some()), ga.dim());
            let pairs: Vec<Value> = matches
                .iter()
                .flatten()
                .map(|m| {
                    json!({
                        "from": matrix_json(&m.from),
                        "to": matrix_json(&m.to),
                        "conjugator": m.conjugator.as_ref().map(matrix_json),
                    })
                })
                .collect();
            if let Some(ms) = &matches {
                let certified = ms.iter().filter(|m| m.conjugator.is_some()).count();
                let _ =
                    writeln!(human, "{} element pairs matched, {certified} certified in SO({})", ms.len(), ga.dim());
            }
            let conjugacy = match homog::conjugate_in_orthogonal(&ga, &gb) {
                Ok(OrthConjugacy::Conjugate(q)) => {
                    let _ = writeln!(human, "the groups are conjugate by {q}");
                    json!({"verdict": "conjugate", "conjugator": matrix_json(&q)})
                }
                Ok(OrthConjugacy::ProvablyNot(w)) => {
                    let text = witness_text(&w);
                    let _ = writeln!(human, "the groups are not conjugate: {text}");
                    json!({"verdict": "not_conjugate", "witness": text})
                }
                Err(e) => {
                    let _ = writeln!(human, "conjugacy undecided: {e}");
                    json!({"verdict": "undecided", "reason": e.to_string()})
                }
            };
            let results = json!({"verdict": verdict(matches.is_some()), "matches": pairs, "conjugacy": conjugacy});
            Ok(Outcome { inputs, human, results, different: matches.is_none() })
        }
        Some(file) => {
            let path = Path::new(file);
            match files::load(path)? {
                Loaded::Torus { name: nz, group: amb } => {
                    let (na, ga, sa) = crystal(a)?;
                    let (nb, gb, sb) = crystal(b)?;
                    if sa != sb {
                        return Err(Failure::Input(format!(
                            "{}: sublattice differs from {}",
                            b.display(),
                            a.display()
                        )));
                    }
                    let s = sa.unwrap_or_else(|| IntMatrix::identity(ga.dim()));
                    let qa = ga
                        .quotient_mod_sublattice(&s)
                        .map_err(|e| Failure::Input(format!("{}: sublattice: {e}", a.display())))?;
                    let qb = gb
                        .quotient_mod_sublattice(&s)
                        .map_err(|e| Failure::Input(format!("{}: sublattice: {e}", b.display())))?;
                    let found = homog::almost_conjugate_finite(qa.elements(), qb.elements(), amb.elements())
                        .map_err(|e| Failure::Input(format!("{file}: {e}")))?;
                    let mut human = format!(
                        "{na} and {nb} (quotients of order {}, {}): {} in {nz} (order {})\n",
                        qa.order(),
                        qb.order(),
                        verdict(found.is_some()),
                        amb.order()
                    );
                    let pairs: Vec<Value> = found
                        .iter()
                        .flatten()
                        .map(|m| json!({"from": affine_json(&m.from), "to": affine_json(&m.to), "conjugator": affine_json(&m.conjugator)}))
                        .collect();
                    if let Some(ms) = &found {
                        let _ = writeln!(human, "{} element pairs matched with explicit conjugators", ms.len());
                    }
                    let results = json!({
                        "verdict": verdict(found.is_some()),
                        "ambient_order": amb.order(),
                        "quotient_orders": [qa.order(), qb.order()],
                        "matches": pairs,
                    });
                    Ok(Outcome { inputs, human, results, different: found.is_none() })
                }
                Loaded::Orthogonal { name: nz, group: amb } => {
                    let (na, ga) = orthogonal(a)?;
                    let (nb, gb) = orthogonal(b)?;
                    let found = homog::almost_conjugate_finite(ga.elements(), gb.elements(), amb.elements())
                        .map_err(|e| Failure::Input(format!("{file}: {e}")))?;
                    let human =
                        format!("{na} and {nb}: {} in {nz} (order {})\n", verdict(found.is_some()), amb.order());
                    let pairs: Vec<Value> = found
                        .iter()
                        .flatten()
                        .map(|m| json!({"from": matrix_json(&m.from), "to": matrix_json(&m.to), "conjugator": matrix_json(&m.conjugator)}))
                        .collect();
                    let results =
                        json!({"verdict": verdict(found.is_some()), "ambient_order": amb.order(), "matches": pairs});
                    Ok(Outcome { inputs, human, results, different: found.is_none() })
                }
                Loaded::Crystal { .. } => {
                    Err(Failure::Input(format!("{file}: an ambient group must be a torus or orthogonal group file")))
                }
            }
        }
    }
}

fn witness_text(w: &NonConjugacyWitness) -> String {
    match w {
        NonConjugacyWitness::SubgroupFixedDim { order, fixed_dim, count_a, count_b } => format!(
            "subgroups of order {order} fixing a {fixed_dim}-dimensional space pointwise: {count_a} vs {count_b}"
        ),
        NonConjugacyWitness::NoCoordinatePermutation => {
            "no coordinate permutation maps one group onto the other".to_string()
        }
    }
}

fn catalog_list() -> Outcome {
    let mut human = String::new();
    let mut rows = Vec::new();
    for name in catalog::list() {
        let entry = catalog::get(name).expect("listed entry");
        let _ = writeln!(human, "{name:<12} {}", entry.summary);
        rows.push(json!({"name": name, "summary": entry.summary}));
    }
    Outcome { inputs: json!({}), human, results: json!({"entries": rows}), different: false }
}

fn catalog_run(entries: &[CatalogEntry]) -> Outcome {
    let mut human = String::new();
    let mut rows = Vec::new();
    let (mut passed, mut total) = (0, 0);
    for entry in entries {
        for c in catalog::run_checks(entry) {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(human, "{status} {} {}: {}", entry.name, c.label, c.detail);
            total += 1;
            passed += usize::from(c.passed);
            rows.push(json!({"entry": entry.name, "label": c.label, "passed": c.passed, "detail": c.detail}));
        }
    }
    let _ = writeln!(human, "{passed} of {total} checks passed");
    let names: Vec<&str> = entries.iter().map(|e| e.name).collect();
    Outcome {
        inputs: json!({"entries": names}),
        human,
        results: json!({"checks": rows, "passed": passed, "total": total}),
        different: passed != total,
    }
}

fn catalog_export(entry: &CatalogEntry, dir: &Path) -> Result<Outcome, Failure> {
    std::fs::create_dir_all(dir).map_err(|source| FileError::Io { path: dir.display().to_string(), source })?;
    let mut written: Vec<(PathBuf, GroupFile)> = Vec::new();
    let name = entry.name;
    match &entry.data {
        EntryData::Flat(p) => {
            let s = p.sublattice.as_ref();
            written.push((dir.join(format!("{name}_a.json")), GroupFile::from_crystal(&format!("{name}_a"), &p.a, s)));
            written.push((dir.join(format!("{name}_b.json")), GroupFile::from_crystal(&format!("{name}_b"), &p.b, s)));
            if !p.ambient_generators.is_empty() {
                let file = GroupFile::from_torus(&format!("{name}_ambient"), &p.ambient_generators);
                written.push((dir.join(format!("{name}_ambient.json")), file));
            }
        }
        EntryData::Orth(p) => {
            written.push((dir.join(format!("{name}_a.json")), GroupFile::from_orthogonal(&format!("{name}_a"), &p.a)));
            written.push((dir.join(format!("{name}_b.json")), GroupFile::from_orthogonal(&format!("{name}_b"), &p.b)));
        }
    }
    let mut human = String::new();
    let mut paths = Vec::new();
    for (path, file) in &written {
        files::write(path, file)?;
        let _ = writeln!(human, "wrote {}", path.display());
        paths.push(path.display().to_string());
    }
    Ok(Outcome {
        inputs: json!({"entry": name, "dir": dir.display().to_string()}),
        human,
        results: json!({"files": paths}),
        different: false,
    })
}
