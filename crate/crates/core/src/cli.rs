//! The `mdsfe` command line: flag parsing, validation, dispatch and output.
//!
//! Exit codes: 0 on success, 1 on a domain error (JSON on stderr), 2 on a usage
//! or validation error.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::feq::{chinta_mohler, fe_solve, fe_verify, rational_verify, solve_block_values, tau_apply, FeKind, MultiRational};
use crate::ffield::{gauss_sum, Field, FieldRef, MultChar};
use crate::groupoid::{bicharacter_build, cone_cover_check, groupoid_enumerate, BicharSource, BicharState, CartanType};
use crate::mdcoeff::{coeff_assemble, series_truncate, CoeffError, MdsConfig, SeriesMode};
use crate::nichols::{betti_relations_check, betti_solve_with, kostant_oracle, verma_check, BettiOptions};
use crate::polyring::{Poly, PolyRing};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag values, found before any computation.
    #[error("{kind}: {message}")]
    Usage { kind: String, message: String },
    /// A failure inside a computation.
    #[error("{kind}: {message}")]
    Domain { kind: String, message: String },
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::Domain { .. } => 1,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Usage { kind, message } | CliError::Domain { kind, message } => (kind, message),
        };
        json!({ "error": kind, "message": message })
    }
}

/// The variant name from a `Debug` rendering, e.g. `EvenCharacteristic`.
fn kind_of(e: &impl std::fmt::Debug) -> String {
    let s = format!("{e:?}");
    s.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect()
}

fn usage<E: std::fmt::Debug + std::fmt::Display>(e: E) -> CliError {
    CliError::Usage { kind: kind_of(&e), message: e.to_string() }
}

fn domain<E: std::fmt::Debug + std::fmt::Display>(e: E) -> CliError {
    CliError::Domain { kind: kind_of(&e), message: e.to_string() }
}

fn bad(kind: &str, message: impl Into<String>) -> CliError {
    CliError::Usage { kind: kind.into(), message: message.into() }
}

#[derive(Debug, Parser)]
#[command(name = "mdsfe", about = "Multiple Dirichlet series over F_q(T): coefficients, functional equations, groupoids, Betti numbers")]
pub struct Cli {
    /// Worker threads; computations are sequential and the flag is accepted for compatibility.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct SeriesArgs {
    /// Field size, a power of an odd prime.
    #[arg(long)]
    q: u64,
    /// Character order (even, dividing q − 1).
    #[arg(long)]
    n: u32,
    /// Symmetric matrix, rows separated by `;`, e.g. "0,1;1,0".
    #[arg(long = "M")]
    m: String,
}

#[derive(Debug, Args, Clone, Default)]
pub struct OutArgs {
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

/// Where a bicharacter comes from: `--n/--M`, a Cartan type, or a diagram.
#[derive(Debug, Args, Clone)]
pub struct SourceArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long = "M")]
    m: Option<String>,
    /// Cartan type letter, with --rank, --order and --v.
    #[arg(long = "type")]
    ty: Option<String>,
    #[arg(long)]
    rank: Option<usize>,
    /// Order of the root of unity used by --type or --nodes.
    #[arg(long)]
    order: Option<u32>,
    /// Exponent of `v = ζ_order^v` for --type.
    #[arg(long, default_value_t = 1)]
    v: u32,
    /// Diagram node labels as exponents of ζ_order, e.g. "3,2,3".
    #[arg(long)]
    nodes: Option<String>,
    /// Diagram edges "a-b:e" separated by `,`, nodes counted from 1.
    #[arg(long)]
    edges: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One coefficient a(f_1, …, f_r).
    Coeff {
        #[command(flatten)]
        series: SeriesArgs,
        /// Monic polynomials separated by `;`, e.g. "T^2+1;T".
        #[arg(long)]
        polys: String,
        #[arg(long, default_value_t = 100)]
        cutoff: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// A truncated global or local coefficient table.
    Series {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long)]
        degree: u32,
        /// A monic prime; gives the local series at it.
        #[arg(long)]
        local: Option<String>,
        /// Fill blocks without a closed form from the functional equations.
        #[arg(long)]
        solve_blocks: bool,
        #[arg(long, default_value_t = 100)]
        cutoff: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check one functional equation on truncated tables.
    FeCheck {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long)]
        kind: String,
        /// Variable index, counted from 1.
        #[arg(long)]
        index: usize,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        local: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Recover the tables of every object from the functional equations.
    Solve {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        local: Option<String>,
        #[arg(long, default_value_t = 100)]
        cutoff: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare solved coefficients with a rational function.
    RationalVerify {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long)]
        degree: u32,
        /// JSON file `{"num": [...], "den": [...]}`; without it the two-variable closed form is used.
        #[arg(long)]
        candidate: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        cutoff: usize,
    },
    /// Enumerate the Weyl groupoid of a bicharacter.
    Groupoid {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 10_000)]
        cutoff: usize,
        /// Exponent g of the generator ζ_N^g used for object matrices.
        #[arg(long, default_value_t = 1)]
        gene: u32,
        /// Random samples for the cone covering check, 0 to skip.
        #[arg(long, default_value_t = 0)]
        cones: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Betti tables of Nichols-algebra cohomology.
    Betti {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        dmax: u32,
        #[arg(long)]
        jmax: u32,
        #[arg(long, default_value_t = 10_000)]
        cutoff: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Kostant's pattern and its reflection symmetries.
    Kostant {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        rank: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Invariants of the Verma module over the small quantum sl_2.
    Verma {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        s: u32,
    },
    /// Run the built-in fixture checks.
    Selftest,
}

fn field_of(q: u64) -> Result<FieldRef, CliError> {
    if q < 2 {
        return Err(bad("BadField", format!("q = {q} is not a prime power")));
    }
    let p = (2..=q).find(|p| q % p == 0).expect("q ≥ 2 has a prime factor");
    let mut e = 0;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(bad("BadField", format!("q = {q} is not a prime power")));
    }
    Field::build(p as u32, e, None).map_err(usage)
}

pub fn parse_matrix(text: &str) -> Result<Vec<Vec<i64>>, CliError> {
    let rows: Result<Vec<Vec<i64>>, _> = text
        .split(';')
        .map(|row| row.split(',').map(|v| v.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>())
        .collect();
    let rows = rows.map_err(|e| bad("BadMatrix", format!("{text:?}: {e}")))?;
    let r = rows.len();
    if r == 0 || rows.iter().any(|row| row.len() != r) {
        return Err(bad("BadMatrix", format!("{text:?} is not square")));
    }
    Ok(rows)
}

fn parse_list(text: &str) -> Result<Vec<u32>, CliError> {
    text.split(',').map(|v| v.trim().parse::<u32>().map_err(|e| bad("BadList", format!("{text:?}: {e}")))).collect()
}

fn config_of(a: &SeriesArgs) -> Result<MdsConfig, CliError> {
    let field = field_of(a.q)?;
    MdsConfig::new(&field, a.n, parse_matrix(&a.m)?).map_err(usage)
}

fn monic_prime(ring: &PolyRing, text: &str) -> Result<Poly, CliError> {
    let p = ring.parse_monic(text).map_err(usage)?;
    if p.deg() == 0 || !ring.is_irreducible(&p) {
        return Err(bad("NotPrime", format!("{text:?} is not a monic irreducible polynomial")));
    }
    Ok(p)
}

fn mode_of(cfg: &MdsConfig, local: &Option<String>) -> Result<SeriesMode, CliError> {
    Ok(match local {
        Some(text) => SeriesMode::Local(monic_prime(cfg.ring(), text)?),
        None => SeriesMode::Global,
    })
}

fn source_of(a: &SourceArgs) -> Result<BicharState, CliError> {
    let source = match (a.n, &a.m, &a.ty, &a.nodes) {
        (Some(n), Some(m), None, None) => BicharSource::Matrix { n, m: parse_matrix(m)? },
        (None, None, Some(ty), None) => {
            let ty: CartanType = ty.parse().map_err(usage)?;
            let rank = a.rank.ok_or_else(|| bad("MissingFlag", "--type needs --rank"))?;
            let order = a.order.ok_or_else(|| bad("MissingFlag", "--type needs --order"))?;
            BicharSource::Cartan { ty, rank, order, v: a.v }
        }
        (None, None, None, Some(nodes)) => {
            let order = a.order.ok_or_else(|| bad("MissingFlag", "--nodes needs --order"))?;
            let mut edges = Vec::new();
            for item in a.edges.as_deref().unwrap_or("").split(',').filter(|s| !s.trim().is_empty()) {
                let parsed = item.split_once(':').and_then(|(ends, e)| {
                    let (x, y) = ends.split_once('-')?;
                    Some((x.trim().parse::<usize>().ok()?, y.trim().parse::<usize>().ok()?, e.trim().parse::<u32>().ok()?))
                });
                match parsed {
                    Some((x, y, e)) if x >= 1 && y >= 1 => edges.push((x - 1, y - 1, e)),
                    _ => return Err(bad("BadEdge", format!("{item:?} is not of the form a-b:e"))),
                }
            }
            BicharSource::Dynkin { order, nodes: parse_list(nodes)?, edges }
        }
        _ => return Err(bad("MissingFlag", "give exactly one of --n/--M, --type, --nodes")),
    };
    bicharacter_build(&source).map_err(usage)
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    if let Some(p) = path {
        fs::write(p, content).map_err(|e| CliError::Domain { kind: "Io".into(), message: format!("{}: {e}", p.display()) })?;
    }
    Ok(())
}

fn print_json(v: &Value) {
    use std::io::Write;
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(v).expect("plain data"));
}

/// Parses `argv` and runs the command, returning the exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if cli.threads == 0 {
        let e = bad("BadThreads", "--threads must be at least 1");
        eprintln!("{}", e.to_json());
        return 2;
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

fn run(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Coeff { series, polys, cutoff, out } => {
            let cfg = config_of(&series)?;
            let fs: Vec<Poly> =
                polys.split(';').map(|t| cfg.ring().parse_monic(t.trim()).map_err(usage)).collect::<Result<_, _>>()?;
            if fs.len() != cfg.rank() {
                return Err(bad("BadPolys", format!("expected {} polynomials, got {}", cfg.rank(), fs.len())));
            }
            let value = match coeff_assemble(&cfg, &fs, None) {
                Err(CoeffError::UnknownLocalBlock { .. }) => {
                    let total = fs.iter().map(Poly::deg).sum();
                    let blocks = solve_block_values(&cfg, total, cutoff).map_err(domain)?;
                    coeff_assemble(&cfg, &fs, Some(&blocks)).map_err(domain)?
                }
                other => other.map_err(domain)?,
            };
            let v = json!({ "value": value.to_string(), "exact": value.to_json() });
            write_out(&out.json, &v.to_string())?;
            print_json(&v);
        }
        Command::Series { series, degree, local, solve_blocks, cutoff, out } => {
            let cfg = config_of(&series)?;
            let mode = mode_of(&cfg, &local)?;
            let blocks = if solve_blocks { Some(solve_block_values(&cfg, degree, cutoff).map_err(domain)?) } else { None };
            let table = series_truncate(&cfg, mode, degree, blocks.as_ref()).map_err(domain)?;
            let v = table.to_json(cfg.ring());
            write_out(&out.json, &v.to_string())?;
            print_json(&json!({ "bound": degree, "entries": table.iter().count(), "unknown": table.unknown_count() }));
        }
        Command::FeCheck { series, kind, index, degree, local, out } => {
            let cfg = config_of(&series)?;
            let kind: FeKind = kind.parse().map_err(usage)?;
            if index == 0 || index > cfg.rank() {
                return Err(bad("BadIndex", format!("index {index} out of 1..={}", cfg.rank())));
            }
            let i = index - 1;
            let mode = mode_of(&cfg, &local)?;
            let table = series_truncate(&cfg, mode.clone(), degree, None).map_err(domain)?;
            let partner = match kind {
                FeKind::Kubota => table.clone(),
                FeKind::Dirichlet => {
                    let pc = cfg.with_matrix(tau_apply(i, cfg.matrix(), cfg.n()).map_err(domain)?);
                    series_truncate(&pc, mode, degree, None).map_err(domain)?
                }
            };
            let rep = fe_verify(&cfg, &table, &partner, kind, i).map_err(domain)?;
            let v = json!({
                "index": index,
                "checked": rep.checked(),
                "failures": rep.failures().iter().map(|(d, _)| d.clone()).collect::<Vec<_>>(),
                "undetermined": rep.undetermined().len(),
                "zero_residual": rep.is_zero(),
            });
            write_out(&out.json, &v.to_string())?;
            print_json(&v);
        }
        Command::Solve { series, degree, local, cutoff, out } => {
            let cfg = config_of(&series)?;
            let mode = mode_of(&cfg, &local)?;
            let set = fe_solve(&cfg, mode, degree, cutoff, None).map_err(domain)?;
            let tables: Vec<Value> = set.tables.iter().map(|t| t.to_json(cfg.ring())).collect();
            write_out(&out.json, &json!({ "objects": set.objects, "tables": tables }).to_string())?;
            print_json(&json!({
                "objects": set.objects,
                "unknown": set.tables.iter().map(|t| t.unknown_count()).collect::<Vec<_>>(),
            }));
        }
        Command::RationalVerify { series, degree, candidate, cutoff } => {
            let cfg = config_of(&series)?;
            let cand: MultiRational = match candidate {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| bad("Io", format!("{}: {e}", path.display())))?;
                    serde_json::from_str(&text).map_err(|e| bad("BadCandidate", e.to_string()))?
                }
                None => chinta_mohler(cfg.q(), cfg.n()),
            };
            let set = fe_solve(&cfg, SeriesMode::Global, degree, cutoff, None).map_err(domain)?;
            let ok = rational_verify(&set.tables[0], &cand, degree).map_err(domain)?;
            print_json(&json!({ "bound": degree, "matches": ok }));
            return Ok(if ok { 0 } else { 1 });
        }
        Command::Groupoid { source, cutoff, gene, cones, seed, out } => {
            let st = source_of(&source)?;
            let g = groupoid_enumerate(&st, gene, cutoff).map_err(domain)?;
            write_out(&out.json, &g.to_json().to_string())?;
            write_out(&out.csv, &g.to_csv())?;
            write_out(&out.dot, &g.to_dot())?;
            let mut v = json!({
                "objects": g.objects.len(),
                "edges": g.edges.len(),
                "bases": g.base_count,
                "truncated": g.truncated,
                "all_classified": g.all_classified(),
                "involutive": g.is_involutive(),
            });
            if cones > 0 {
                let rep = cone_cover_check(&g, cones, seed).map_err(domain)?;
                v["cones"] = serde_json::to_value(&rep).expect("plain data");
            }
            print_json(&v);
        }
        Command::Betti { source, dmax, jmax, cutoff, out } => {
            let st = source_of(&source)?;
            let opts = BettiOptions { cutoff, ..Default::default() };
            let sol = betti_solve_with(&st, dmax, jmax, &opts).map_err(domain)?;
            for i in 0..st.rank() {
                betti_relations_check(&sol, i).map_err(domain)?;
            }
            write_out(&out.csv, &sol.to_csv())?;
            let full: Vec<Value> = sol
                .tables
                .iter()
                .map(|t| json!({ "object": t.object, "entries": t.entries().map(|(j, d, h)| json!([j, d, h])).collect::<Vec<_>>() }))
                .collect();
            write_out(&out.json, &Value::Array(full).to_string())?;
            let support: Vec<Value> = sol
                .tables
                .iter()
                .map(|t| json!({ "object": t.object, "nonzero": t.support().iter().map(|(j, d, h)| json!([j, d, h])).collect::<Vec<_>>() }))
                .collect();
            print_json(&json!({ "objects": sol.tables.len(), "tables": support }));
        }
        Command::Kostant { ty, rank, out } => {
            let ty: CartanType = ty.parse().map_err(usage)?;
            let rep = kostant_oracle(ty, rank).map_err(domain)?;
            let pattern: Vec<Value> = rep.pattern.keys().map(|(k, b)| json!({ "degree": k, "weight": b })).collect();
            let v = json!({
                "type": format!("{ty}{rank}"),
                "weyl_order": rep.datum.elements.len(),
                "pattern": pattern,
                "reflection_checks": rep.reflection_checks,
                "reflections_hold": rep.holds(),
            });
            write_out(&out.json, &v.to_string())?;
            print_json(&v);
        }
        Command::Verma { order, s } => {
            let rep = verma_check(order, s).map_err(usage)?;
            print_json(&serde_json::to_value(&rep).expect("plain data"));
        }
        Command::Selftest => {
            let results = selftest();
            let mut failed = 0;
            for (name, res) in &results {
                match res {
                    Ok(()) => println!("PASS {name}"),
                    Err(why) => {
                        failed += 1;
                        println!("FAIL {name}: {why}");
                    }
                }
            }
            return Ok(if failed == 0 { 0 } else { 1 });
        }
    }
    Ok(0)
}

type Check = Result<(), String>;

fn expect(cond: bool, why: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

/// A fast pass over the main fixtures.
pub fn selftest() -> Vec<(&'static str, Check)> {
    let mut out: Vec<(&'static str, Check)> = Vec::new();
    out.push(("gauss sums have absolute value sqrt(q)", (|| {
        let f = Field::build(5, 1, None).map_err(|e| e.to_string())?;
        let chi = MultChar::new(&f, 4).map_err(|e| e.to_string())?;
        for j in 1..4 {
            let g = gauss_sum(&chi.pow(j));
            expect(&g * &g.conj() == crate::exactnum::CycNum::from_int(5), || format!("χ^{j}"))?;
        }
        Ok(())
    })()));
    out.push(("off-diagonal groupoid has three objects", (|| {
        let st = bicharacter_build(&BicharSource::Matrix { n: 4, m: vec![vec![0, 1], vec![1, 0]] }).map_err(|e| e.to_string())?;
        let g = groupoid_enumerate(&st, 1, 100).map_err(|e| e.to_string())?;
        expect(g.objects.len() == 3 && g.edges.len() == 6, || format!("{} objects", g.objects.len()))
    })()));
    out.push(("dirichlet equation on the off-diagonal series", (|| {
        let f = Field::build(5, 1, None).map_err(|e| e.to_string())?;
        let cfg = MdsConfig::new(&f, 4, vec![vec![0, 1], vec![1, 0]]).map_err(|e| e.to_string())?;
        let t = series_truncate(&cfg, SeriesMode::Global, 4, None).map_err(|e| e.to_string())?;
        let pc = cfg.with_matrix(tau_apply(0, cfg.matrix(), 4).map_err(|e| e.to_string())?);
        let pt = series_truncate(&pc, SeriesMode::Global, 4, None).map_err(|e| e.to_string())?;
        let rep = fe_verify(&cfg, &t, &pt, FeKind::Dirichlet, 0).map_err(|e| e.to_string())?;
        expect(rep.is_zero(), || format!("{} failing slices", rep.failures().len()))
    })()));
    out.push(("solver recovers the two-variable closed form", (|| {
        let f = Field::build(5, 1, None).map_err(|e| e.to_string())?;
        let cfg = MdsConfig::new(&f, 4, vec![vec![0, 1], vec![1, 0]]).map_err(|e| e.to_string())?;
        let set = fe_solve(&cfg, SeriesMode::Global, 6, 100, None).map_err(|e| e.to_string())?;
        let ok = rational_verify(&set.tables[0], &chinta_mohler(5, 4), 6).map_err(|e| e.to_string())?;
        expect(ok, || "mismatch".into())
    })()));
    out.push(("rank-one betti table", (|| {
        let st = bicharacter_build(&BicharSource::Dynkin { order: 3, nodes: vec![1], edges: vec![] }).map_err(|e| e.to_string())?;
        let sol = betti_solve_with(&st, 9, 6, &BettiOptions::default()).map_err(|e| e.to_string())?;
        let support: Vec<(u32, u32)> = sol.tables[0].support().iter().map(|(j, d, _)| (*j, d[0])).collect();
        expect(support == vec![(0, 0), (1, 1), (2, 3), (3, 4), (4, 6), (5, 7), (6, 9)], || format!("{support:?}"))
    })()));
    out.push(("kostant pattern for A2", (|| {
        let rep = kostant_oracle(CartanType::A, 2).map_err(|e| e.to_string())?;
        expect(rep.holds() && rep.degree_counts() == vec![1, 2, 2, 1], || format!("{:?}", rep.degree_counts()))
    })()));
    out.push(("verma invariants", (|| {
        let rep = verma_check(3, 0).map_err(|e| e.to_string())?;
        expect((rep.e_invariants, rep.f_invariants) == (2, 1) && rep.relations_hold(), || format!("{rep:?}"))
    })()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_characteristic_is_a_usage_error() {
        let code = main_with(["mdsfe", "coeff", "--q", "4", "--n", "2", "--M", "0", "--polys", "T"]);
        assert_eq!(code, 2);
        let err = config_of(&SeriesArgs { q: 4, n: 2, m: "0".into() }).unwrap_err();
        assert_eq!(err.to_json()["error"], "EvenCharacteristic");
    }

    #[test]
    fn matrices_parse_and_validate() {
        assert_eq!(parse_matrix("0,1;1,0").unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert!(parse_matrix("0,1;1").is_err());
        assert!(parse_matrix("a").is_err());
    }

    #[test]
    fn bad_flags_exit_with_two() {
        assert_eq!(main_with(["mdsfe", "verma", "--order", "4", "--s", "0"]), 2);
        assert_eq!(main_with(["mdsfe", "nosuch"]), 2);
        assert_eq!(main_with(["mdsfe", "betti", "--dmax", "2", "--jmax", "2"]), 2);
    }

    #[test]
    fn selftest_passes() {
        for (name, res) in selftest() {
            assert!(res.is_ok(), "{name}: {res:?}");
        }
    }
}
