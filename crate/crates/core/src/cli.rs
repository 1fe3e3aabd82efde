//! Command-line front end.
//!
//! Exit codes: `0` success, `1` validation failure (a report is still printed), `2` usage or
//! input error. Output is deterministic for fixed inputs and seed.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::borel::{cartan_check, equivariant_homology};
use crate::cascade::{main_theorem_rehearsal, RehearsalConfig};
use crate::complexes::GappedMap;
use crate::doc::{self, barcode_body, Document, Kind};
use crate::gcw::{named_space, validate_gcw, EGFamily, FiniteGroup, GcwComplex};
use crate::homology::{barcode, z2_homology, Betti};
use crate::novikov::parse_energy;
use crate::telescope::{build_telescope, colim_homology};
use crate::trees::{boundary_facets, enumerate_strata, strata_table};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Doc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coefficients {
    Z2,
    Novikov,
}

#[derive(Debug, Parser)]
#[command(name = "novtel", version, about = "Exact gapped complexes over the Novikov ring")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Seed for every random choice.
    #[arg(long, env = "NOVTEL_SEED", default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology of a complex document (`-` for stdin).
    Homology {
        input: String,
        #[arg(long, value_enum, default_value = "z2")]
        over: Coefficients,
    },
    /// Assemble a telescope document and compare with the colimit.
    Telescope { input: String },
    /// Equivariant homology on degrees `0..=depth`.
    Borel {
        /// `z2`, `z<m>` or `trivial`.
        #[arg(long)]
        group: String,
        /// Built-in space name or G-CW document.
        #[arg(long)]
        space: String,
        #[arg(long)]
        depth: usize,
    },
    /// Compare equivariant homology of a free space with homology of its quotient.
    Cartan {
        #[arg(long)]
        space: String,
        #[arg(long)]
        depth: usize,
    },
    /// Randomized gapped deformations.
    Cascade {
        #[command(subcommand)]
        action: CascadeCommand,
    },
    /// Strata and boundary facets of the metric tree space.
    Trees {
        #[arg(long)]
        n: usize,
    },
    /// Validate a complex, G-CW or telescope document.
    Validate { input: String },
}

#[derive(Debug, Subcommand)]
pub enum CascadeCommand {
    /// Run the gapped Cartan argument on random deformations.
    Rehearse {
        #[arg(long)]
        space: String,
        #[arg(long)]
        gap: String,
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// Top degree compared; defaults to the dimension of the space.
        #[arg(long)]
        depth: Option<usize>,
        /// Replace the zero-energy parts of the comparison maps by zero.
        #[arg(long)]
        adversarial: bool,
    },
}

/// What a subcommand produced.
struct Outcome {
    ok: bool,
    text: String,
    kind: Kind,
    body: Value,
}

impl Outcome {
    fn new(ok: bool, text: String, kind: Kind, body: Value) -> Self {
        Outcome { ok, text, kind, body }
    }

    fn report(ok: bool, text: String, body: Value) -> Self {
        Outcome::new(ok, text, Kind::Report, body)
    }
}

/// Parses `argv` (including the program name), runs it and writes to `out`; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let written = match cli.format {
                Format::Text => out.write_all(o.text.as_bytes()),
                Format::Doc => out.write_all(Document::new(o.kind, o.body).to_pretty().as_bytes()),
            };
            match (written, o.ok) {
                (Err(e), _) => {
                    let _ = writeln!(err, "error: {e}");
                    2
                }
                (Ok(()), true) => 0,
                (Ok(()), false) => 1,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) | Error::UnsupportedGroup(_) | Error::InvalidSphereModel { .. } | Error::GroupMismatch(_) => 2,
        _ => 1,
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    Ok(fs::read_to_string(path)?)
}

fn read_doc(path: &str) -> Result<Document> {
    read_input(path)?.parse()
}

fn parse_group(name: &str) -> Result<FiniteGroup> {
    match name {
        "trivial" => Ok(FiniteGroup::trivial()),
        _ => {
            let m = name.strip_prefix('z').and_then(|m| m.parse().ok()).ok_or_else(|| Error::Parse(format!("unknown group `{name}`")))?;
            FiniteGroup::cyclic(m)
        }
    }
}

/// A built-in name, or a path to a G-CW document. `pt` and `regular` take the given group.
fn load_space(name: &str, group: Option<&FiniteGroup>) -> Result<GcwComplex> {
    match (name, group) {
        ("pt", Some(g)) => GcwComplex::point(g.clone()),
        ("regular", Some(g)) => GcwComplex::regular_orbit(g.clone()),
        _ if name.ends_with(".json") || name == "-" => {
            let c = doc::gcw_from_doc(&read_doc(name)?)?;
            let report = validate_gcw(&c);
            if !report.is_valid() {
                return Err(Error::InvalidComplex(report.to_string().trim_end().to_string()));
            }
            GcwComplex::new(c.complex().clone(), c.group().clone(), c.action().to_vec())
        }
        _ => named_space(name),
    }
}

fn dims_text(dims: &[usize]) -> String {
    let parts: Vec<String> = dims.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

fn betti_json(b: &Betti) -> Value {
    Value::Object(b.0.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Homology { input, over } => homology(input, *over),
        Command::Telescope { input } => telescope(input),
        Command::Borel { group, space, depth } => {
            let g = parse_group(group)?;
            let m = load_space(space, Some(&g))?;
            if *m.group() != g {
                return Err(Error::GroupMismatch(format!("space `{space}` carries {}, not {g}", m.group())));
            }
            let h = equivariant_homology(&m, &EGFamily::spheres(g.clone(), 0)?, *depth)?;
            let text = format!("group {g}\nspace {space}\nstages 0..={}\ndims {}\n", h.depth, dims_text(&h.dims));
            Ok(Outcome::report(true, text, json!({"command": "borel", "group": g.to_string(), "space": space, "depth": h.depth, "dims": h.dims})))
        }
        Command::Cartan { space, depth } => {
            let m = load_space(space, None)?;
            let r = cartan_check(&m, &EGFamily::spheres(m.group().clone(), 0)?, *depth)?;
            let trimmed = trim_zeros(&r.quotient);
            let text = format!(
                "verdict {}\nequivariant {}\nquotient {}\ndims {}\nstages 0..={}\n",
                r.verdict,
                dims_text(&r.equivariant),
                dims_text(&r.quotient),
                dims_text(&trimmed),
                r.depth
            );
            let body = json!({
                "command": "cartan",
                "space": space,
                "verdict": r.verdict.to_string(),
                "equivariant": r.equivariant,
                "quotient": r.quotient,
                "depth": r.depth,
                "map": doc::matrix_body(r.phi.matrix()),
            });
            Ok(Outcome::report(r.verdict == crate::homology::Verdict::Iso, text, body))
        }
        Command::Cascade { action: CascadeCommand::Rehearse { space, gap, seeds, depth, adversarial } } => {
            let m = load_space(space, None)?;
            let gap = parse_energy(gap)?;
            let top = depth.unwrap_or_else(|| m.complex().degrees().last().copied().unwrap_or(0).max(0) as usize);
            let family = EGFamily::spheres(m.group().clone(), 0)?;
            let expected = if *adversarial { crate::homology::Verdict::BarNotQuasiIso } else { crate::homology::Verdict::Iso };
            let mut text = format!("space {space}\ngap {}\ndegrees 0..={top}\n", crate::novikov::format_energy(&gap));
            let mut runs = Vec::new();
            let mut ok = true;
            for seed in cli.seed..cli.seed + seeds {
                let mut cfg = RehearsalConfig::new(top, gap, seed);
                cfg.adversarial = *adversarial;
                let r = main_theorem_rehearsal(&m, &family, cfg)?;
                ok &= r.verdict == expected && r.filtration_preserved;
                let gaps: Vec<String> = r.stage_gaps.iter().map(ToString::to_string).collect();
                text.push_str(&format!(
                    "seed {seed}: {} stage gaps [{}] telescope gap {} map gap {}\n",
                    r.verdict,
                    gaps.join(","),
                    r.telescope_gap,
                    r.map_gap
                ));
                runs.push(json!({
                    "seed": seed,
                    "verdict": r.verdict.to_string(),
                    "depth": r.depth,
                    "stage_gaps": gaps,
                    "quotient_gap": r.quotient_gap.to_string(),
                    "telescope_gap": r.telescope_gap.to_string(),
                    "map_gap": r.map_gap.to_string(),
                    "filtration_preserved": r.filtration_preserved,
                    "bar_cone_homology": betti_json(&r.bar_cone_homology),
                    "cone_barcode": r.cone_barcode.as_ref().map(barcode_body),
                }));
            }
            text.push_str(&format!("result {}\n", if ok { "pass" } else { "fail" }));
            Ok(Outcome::report(ok, text, json!({"command": "cascade rehearse", "space": space, "gap": crate::novikov::format_energy(&gap), "adversarial": adversarial, "runs": runs})))
        }
        Command::Trees { n } => {
            let strata = enumerate_strata(*n as i64)?;
            let facets = boundary_facets(*n);
            let body = json!({
                "command": "trees",
                "n": n,
                "strata": strata.iter().map(|s| s.edge_states().iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "facets": facets,
            });
            Ok(Outcome::report(true, strata_table(*n), body))
        }
        Command::Validate { input } => validate(input),
    }
}

fn trim_zeros(dims: &[usize]) -> Vec<usize> {
    let end = dims.iter().rposition(|&d| d != 0).map_or(0, |i| i + 1);
    dims[..end].to_vec()
}

fn homology(input: &str, over: Coefficients) -> Result<Outcome> {
    let c = doc::complex_from_doc(&read_doc(input)?)?;
    let report = c.validate();
    if !report.is_valid() {
        return Ok(Outcome::report(false, format!("invalid\n{report}\n"), json!({"valid": false, "violations": report.violations.iter().map(ToString::to_string).collect::<Vec<_>>()})));
    }
    match over {
        Coefficients::Z2 => {
            let h = z2_homology(&c.bar_reduce()?)?;
            let text: String = h.0.iter().map(|(k, d)| format!("H_{k} = {d}\n")).collect();
            Ok(Outcome::report(true, text, json!({"command": "homology", "over": "z2", "dims": betti_json(&h)})))
        }
        Coefficients::Novikov => {
            let b = barcode(&c)?;
            Ok(Outcome::new(true, b.to_table(), Kind::Barcode, serde_json::to_value(barcode_body(&b))?))
        }
    }
}

fn telescope(input: &str) -> Result<Outcome> {
    let (stages, maps) = doc::telescope_from_doc(&read_doc(input)?)?;
    let stages: Vec<Arc<_>> = stages.into_iter().map(Arc::new).collect();
    let connecting = maps
        .into_iter()
        .enumerate()
        .map(|(n, m)| GappedMap::new(stages[n].clone(), stages[n + 1].clone(), m, 0))
        .collect::<Result<Vec<_>>>()?;
    let bars: Vec<_> = stages.iter().map(|s| s.bar_reduce()).collect::<Result<_>>()?;
    let bar_maps: Vec<_> = connecting.iter().map(GappedMap::bar_reduce).collect::<Result<_>>()?;
    let tel = build_telescope(stages, connecting)?;
    let h = z2_homology(&tel.assembled().bar_reduce()?)?;
    let colim = colim_homology(&bars, &bar_maps)?;
    let agree = colim.dims.0.iter().all(|(k, d)| h.get(*k) == *d) && h.0.iter().all(|(k, d)| colim.dims.get(*k) == *d);
    let mut text = format!("stages {}\ngenerators {}\ngap {}\n", tel.stages().len(), tel.assembled().len(), tel.gap());
    for (k, d) in &h.0 {
        text.push_str(&format!("H_{k} = {d} (colimit {})\n", colim.dims.get(*k)));
    }
    text.push_str(&format!("colimit check {}\n", if agree { "pass" } else { "fail" }));
    let body = json!({
        "command": "telescope",
        "generators": tel.assembled().len(),
        "gap": tel.gap().to_string(),
        "dims": betti_json(&h),
        "colimit": betti_json(&colim.dims),
        "agree": agree,
    });
    Ok(Outcome::report(agree, text, body))
}

fn validate(input: &str) -> Result<Outcome> {
    let d = read_doc(input)?;
    let violations: Vec<String> = match d.kind {
        Kind::Complex => doc::complex_from_doc(&d)?.validate().violations.iter().map(ToString::to_string).collect(),
        Kind::Gcw => validate_gcw(&doc::gcw_from_doc(&d)?).violations,
        Kind::Telescope => {
            let (stages, maps) = doc::telescope_from_doc(&d)?;
            let mut v: Vec<String> = stages
                .iter()
                .enumerate()
                .flat_map(|(n, s)| s.validate().violations.into_iter().map(move |x| format!("stage {n}: {x}")))
                .collect();
            if v.is_empty() {
                let stages: Vec<Arc<_>> = stages.into_iter().map(Arc::new).collect();
                for (n, m) in maps.into_iter().enumerate() {
                    if let Err(e) = GappedMap::new(stages[n].clone(), stages[n + 1].clone(), m, 0) {
                        v.push(format!("map {n}: {e}"));
                    }
                }
            }
            v
        }
        other => return Err(Error::Parse(format!("cannot validate a {other} document"))),
    };
    let ok = violations.is_empty();
    let mut text = format!("{} {}\n", d.kind, if ok { "valid" } else { "invalid" });
    for v in &violations {
        text.push_str(&format!("  {v}\n"));
    }
    Ok(Outcome::report(ok, text, json!({"command": "validate", "kind": d.kind, "valid": ok, "violations": violations})))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("novtel").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
    }

    #[test]
    fn trees_subcommand() {
        let (code, out) = run_str(&["trees", "--n", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("strata of T_2: 3"));
        assert!(out.contains("facets: 1\nT_1 x T_1"));
    }

    #[test]
    fn cartan_subcommand() {
        let (code, out) = run_str(&["cartan", "--space", "s1-antipodal", "--depth", "3"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("verdict iso"));
        assert!(out.contains("dims (1,1)\n"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["borel", "--group", "q8", "--space", "pt", "--depth", "2"]).0, 2);
    }

    #[test]
    fn doc_format_is_a_document() {
        let (code, out) = run_str(&["--format", "doc", "borel", "--group", "z2", "--space", "pt", "--depth", "2"]);
        assert_eq!(code, 0);
        let d: Document = out.parse().unwrap();
        assert_eq!(d.body["dims"], json!([1, 1, 1]));
    }
}
