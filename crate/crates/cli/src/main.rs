use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use obfol_core::constructions::{annulus_chain, hkm_disc, lekili_lisca_movie, paper_counts, theorem3_disc};
use obfol_core::foliation::{check_transverse_ot_disc, to_dot, to_svg, FoliationComplex};
use obfol_core::mcg::{phi_family, OpenBook};
use obfol_core::movie::{compile_foliation, validate_closure, Movie, Sign};
use obfol_core::veering::{build_chain, find_nrv_witness, validate_chain, WitnessChain};
use obfol_core::EngineError;
use serde::Serialize;
use thiserror::Error;

mod frames;
mod report;

use report::{digest, Check, CountsTable, RunReport, Verdict};

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Overtwisted discs in planar open books: witness search, disc
/// construction and rendering.
#[derive(Debug, Parser)]
#[command(name = "obfol", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Args)]
struct Family {
    /// Exponent of T_a in Φ_{h,i,k}.
    #[arg(long)]
    h: Option<i32>,
    /// Exponent of T_b in Φ_{h,i,k}.
    #[arg(long)]
    i: Option<i32>,
    /// Φ_{h,i,k} carries T_e^{-k-1}.
    #[arg(long)]
    k: Option<i32>,
    /// Run every triple up to (h, i, k).
    #[arg(long)]
    grid: bool,
}

#[derive(Debug, Args)]
struct Output {
    /// Directory for the emitted documents.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the report as JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Theorem3,
    Hkm,
    LekiliLisca,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Search for an arc sent strictly to the left by the monodromy.
    Witness {
        /// Open book document; defaults to Φ_{h,i,k}.
        book: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        bound: usize,
        #[command(flatten)]
        family: Family,
        #[command(flatten)]
        output: Output,
    },
    /// Build a disc and check it.
    Disc {
        #[arg(value_enum)]
        mode: Mode,
        /// Open book (theorem3) or movie/foliation document (hkm).
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        bound: usize,
        /// Use the annulus chain of this length instead of a search.
        #[arg(long)]
        chain_k: Option<usize>,
        #[command(flatten)]
        family: Family,
        #[command(flatten)]
        output: Output,
    },
    /// Draw a movie or foliation document.
    Render {
        input: PathBuf,
        /// Radial picture of the disc.
        #[arg(long)]
        svg: bool,
        /// G_{++} and G_{--} in Graphviz format.
        #[arg(long)]
        dot: bool,
        /// One picture per page of a movie.
        #[arg(long)]
        frames: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, bytes: &[u8]) -> Result<T> {
    serde_json::from_slice(bytes).map_err(|source| CliError::Parse { path: path.into(), source })
}

fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.into(), source })?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Ok(path)
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let text = serde_json::to_string_pretty(value).expect("documents serialize");
    write(dir, name, &(text + "\n"))
}

fn triples(f: &Family) -> Result<Vec<(i32, i32, i32)>> {
    let (h, i, k) = (f.h.unwrap_or(1), f.i.unwrap_or(1), f.k.unwrap_or(1));
    if h < 1 || i < 1 || k < 1 {
        return Err(CliError::Usage(format!("h, i, k must be positive, got ({h}, {i}, {k})")));
    }
    if !f.grid {
        return Ok(vec![(h, i, k)]);
    }
    Ok((1..=h).flat_map(|a| (1..=i).flat_map(move |b| (1..=k).map(move |c| (a, b, c)))).collect())
}

fn triple_dir(out: &Option<PathBuf>, grid: bool, (h, i, k): (i32, i32, i32)) -> Option<PathBuf> {
    out.as_ref().map(|d| if grid { d.join(format!("h{h}-i{i}-k{k}")) } else { d.clone() })
}

type Loaded = (String, String, OpenBook, Option<(i32, i32, i32)>);
type Run = (String, String, OpenBook, Option<WitnessChain>, Option<PathBuf>);

/// Loads open books: the given file, or Φ_{h,i,k} for each requested triple.
fn books(path: &Option<PathBuf>, family: &Family) -> Result<Vec<Loaded>> {
    match path {
        Some(p) => {
            let bytes = read(p)?;
            let ob: OpenBook = parse(p, &bytes)?;
            Ok(vec![(p.display().to_string(), digest(&[&bytes]), ob, None)])
        }
        None => triples(family)?
            .into_iter()
            .map(|t| {
                let (h, i, k) = t;
                let ob = phi_family(h, i, k)?;
                Ok((format!("phi({h},{i},{k})"), digest(&[format!("phi {h} {i} {k}").as_bytes()]), ob, Some(t)))
            })
            .collect(),
    }
}

fn witness(book: Option<PathBuf>, bound: usize, family: Family, output: Output) -> Result<Vec<RunReport>> {
    let mut reports = Vec::new();
    for (name, dig, ob, t) in books(&book, &family)? {
        let mut r = RunReport::new(format!("witness {name} --bound {bound}"), digest(&[dig.as_bytes(), &bound.to_le_bytes()]));
        let dir = match t {
            Some(t) => triple_dir(&output.out, family.grid, t),
            None => output.out.clone(),
        };
        match find_nrv_witness(&ob, bound)? {
            Some(arc) => {
                let image = ob.apply(&arc)?;
                r.checks.push(Check::new("witness", true, format!("{arc} is sent to {image}")));
                r.set_verdict(Verdict::WitnessFound);
                if let Some(d) = &dir {
                    write_json(d, "witness.json", &arc)?;
                }
            }
            None => {
                r.checks.push(Check::new("witness", false, format!("none up to length {bound}")));
                r.set_verdict(Verdict::NoWitness { bound });
            }
        }
        if let Some(d) = &dir {
            write_json(d, "report.json", &r)?;
        }
        reports.push(r);
    }
    Ok(reports)
}

fn finish_disc(r: &mut RunReport, m: Option<&Movie>, f: &FoliationComplex, dir: &Option<PathBuf>) -> Result<()> {
    if let Some(m) = m {
        let c = validate_closure(m)?;
        r.checks.push(Check::new("closure", c.passed, c.unmatched.join("; ")));
    }
    let rep = check_transverse_ot_disc(f);
    r.add_disc(f, &rep);
    r.fail_extra(&["closure"]);
    if let Some(d) = dir {
        if let Some(m) = m {
            write_json(d, "movie.json", m)?;
        }
        write_json(d, "foliation.json", f)?;
        write_json(d, "report.json", r)?;
    }
    Ok(())
}

fn theorem3(input: Option<PathBuf>, bound: usize, chain_k: Option<usize>, family: Family, output: Output) -> Result<Vec<RunReport>> {
    let runs: Vec<Run> = match chain_k {
        Some(k) => {
            let (ob, chain) = annulus_chain(k)?;
            vec![(format!("annulus chain k={k}"), digest(&[format!("annulus {k}").as_bytes()]), ob, Some(chain), output.out.clone())]
        }
        None => books(&input, &family)?
            .into_iter()
            .map(|(n, d, ob, t)| {
                let dir = match t {
                    Some(t) => triple_dir(&output.out, family.grid, t),
                    None => output.out.clone(),
                };
                (n, d, ob, None, dir)
            })
            .collect(),
    };
    let mut reports = Vec::new();
    for (name, dig, ob, chain, dir) in runs {
        let mut r = RunReport::new(format!("disc theorem3 {name}"), digest(&[dig.as_bytes(), &bound.to_le_bytes()]));
        let chain = match chain {
            Some(c) => c,
            None => {
                let Some(alpha) = find_nrv_witness(&ob, bound)? else {
                    r.checks.push(Check::new("witness", false, format!("none up to length {bound}")));
                    r.set_verdict(Verdict::NoWitness { bound });
                    if let Some(d) = &dir {
                        write_json(d, "report.json", &r)?;
                    }
                    reports.push(r);
                    continue;
                };
                r.checks.push(Check::new("witness", true, alpha.to_string()));
                match build_chain(&ob, &alpha) {
                    Ok(c) => c,
                    Err(e) => {
                        r.checks.push(Check::new("chain", false, e.to_string()));
                        r.set_verdict(Verdict::ConditionsFailed(vec!["chain".into()]));
                        if let Some(d) = &dir {
                            write_json(d, "report.json", &r)?;
                        }
                        reports.push(r);
                        continue;
                    }
                }
            }
        };
        let cr = validate_chain(&chain, &ob)?;
        r.add_chain(&cr);
        if !cr.all_passed() {
            let failed = cr.conditions.iter().filter(|c| !c.passed).map(|c| format!("chain {}", c.condition)).collect();
            r.set_verdict(Verdict::ConditionsFailed(failed));
            if let Some(d) = &dir {
                write_json(d, "report.json", &r)?;
            }
            reports.push(r);
            continue;
        }
        if let Some(d) = &dir {
            write_json(d, "chain.json", &chain)?;
        }
        let m = theorem3_disc(&chain, &ob)?;
        let f = compile_foliation(&m)?;
        finish_disc(&mut r, Some(&m), &f, &dir)?;
        reports.push(r);
    }
    Ok(reports)
}

/// Reads a foliation document, compiling it first if it is a movie.
fn load_foliation(path: &Path) -> Result<(FoliationComplex, Option<Movie>, Vec<u8>)> {
    let bytes = read(path)?;
    let value: serde_json::Value = parse(path, &bytes)?;
    if value.get("initial").is_some() {
        let m: Movie = parse(path, &bytes)?;
        let m = m.revalidate()?;
        Ok((compile_foliation(&m)?, Some(m), bytes))
    } else {
        Ok((parse(path, &bytes)?, None, bytes))
    }
}

fn hkm(input: Option<PathBuf>, chain_k: Option<usize>, output: Output) -> Result<Vec<RunReport>> {
    let (f, name, dig) = match (&input, chain_k) {
        (Some(p), _) => {
            let (f, _, bytes) = load_foliation(p)?;
            (f, p.display().to_string(), digest(&[&bytes]))
        }
        (None, k) => {
            let k = k.unwrap_or(1);
            let (ob, chain) = annulus_chain(k)?;
            let f = compile_foliation(&theorem3_disc(&chain, &ob)?)?;
            (f, format!("annulus chain k={k}"), digest(&[format!("annulus {k}").as_bytes()]))
        }
    };
    let g = hkm_disc(&f)?;
    let mut r = RunReport::new(format!("disc hkm {name}"), dig);
    finish_disc(&mut r, None, &g, &output.out)?;
    Ok(vec![r])
}

fn lekili_lisca(family: Family, output: Output) -> Result<Vec<RunReport>> {
    let mut reports = Vec::new();
    for t in triples(&family)? {
        let (h, i, k) = t;
        let mut r = RunReport::new(format!("disc lekili-lisca --h {h} --i {i} --k {k}"), digest(&[format!("ll {h} {i} {k}").as_bytes()]));
        let m = lekili_lisca_movie(h, i, k)?;
        let f = compile_foliation(&m)?;
        let (ep, em, hp, hm) = paper_counts(k);
        let stated = CountsTable {
            e_plus: ep as usize,
            e_minus: em as usize,
            h_plus: hp as usize,
            h_minus: hm as usize,
            euler: (ep + em - hp - hm) as i64,
        };
        r.stated_counts = Some(stated);
        finish_disc(&mut r, Some(&m), &f, &triple_dir(&output.out, family.grid, t))?;
        let got = r.counts.expect("set by finish_disc");
        if got != stated {
            r.notes.push(format!(
                "computed counts differ from the stated ones: h- is {} not {}; the stated totals give euler {}, the computed ones {}",
                got.h_minus, stated.h_minus, stated.euler, got.euler
            ));
        }
        if let Some(d) = triple_dir(&output.out, family.grid, t) {
            write_json(&d, "report.json", &r)?;
        }
        reports.push(r);
    }
    Ok(reports)
}

fn render(input: PathBuf, svg: bool, dot: bool, frames: bool, out: PathBuf) -> Result<Vec<PathBuf>> {
    if !(svg || dot || frames) {
        return Err(CliError::Usage("nothing to render: pass --svg, --dot or --frames".into()));
    }
    let (f, m, _) = load_foliation(&input)?;
    let mut written = Vec::new();
    if svg {
        written.push(write(&out, "disc.svg", &to_svg(&f))?);
    }
    if dot {
        written.push(write(&out, "g_pp.dot", &to_dot(&f, Sign::Positive))?);
        written.push(write(&out, "g_mm.dot", &to_dot(&f, Sign::Negative))?);
    }
    if frames {
        let m = m.ok_or_else(|| CliError::Usage("--frames needs a movie document".into()))?;
        for (i, page) in frames::movie_frames(&m)?.iter().enumerate() {
            written.push(write(&out.join("frames"), &format!("frame_{i:02}.svg"), page)?);
        }
    }
    Ok(written)
}

fn run(cli: Cli) -> Result<()> {
    let (reports, json) = match cli.cmd {
        Cmd::Witness { book, bound, family, output } => {
            let json = output.json;
            (witness(book, bound, family, output)?, json)
        }
        Cmd::Disc { mode, input, bound, chain_k, family, output } => {
            let json = output.json;
            let reports = match mode {
                Mode::Theorem3 => theorem3(input, bound, chain_k, family, output)?,
                Mode::Hkm => hkm(input, chain_k, output)?,
                Mode::LekiliLisca => lekili_lisca(family, output)?,
            };
            (reports, json)
        }
        Cmd::Render { input, svg, dot, frames, out } => {
            for p in render(input, svg, dot, frames, out)? {
                println!("wrote {}", p.display());
            }
            return Ok(());
        }
    };
    if json {
        let text = if reports.len() == 1 { serde_json::to_string_pretty(&reports[0]) } else { serde_json::to_string_pretty(&reports) };
        println!("{}", text.expect("reports serialize"));
    } else {
        for r in &reports {
            print!("{}", r.human());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
