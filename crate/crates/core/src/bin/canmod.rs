use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use canmod::algebra::{fmt_q, parse_q};
use canmod::analysis::{analyze, Analysis, AnalyzeOptions};
use canmod::corpus::corpus_run;
use canmod::curve::{cone_curve, serre_contract, ClusterKind, CurveModel};
use canmod::dsl::{describe_curve, parse_curve, serialize_curve_file, CurveFile, PointDecl};
use canmod::report::{analysis_json, error_json, render, verdict_json};
use canmod::{Error, Result, Settings};

#[derive(Parser)]
#[command(name = "canmod", version, about = "Canonical models of singular rational curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Emit JSON.
    #[arg(long)]
    json: bool,
    /// Multiplier on the default truncation order.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(1..))]
    truncation_scale: i64,
    /// Cap on the degree of Hilbert functions and ideal checks.
    #[arg(long)]
    max_degree: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn settings(&self) -> Settings {
        Settings { truncation_scale: self.truncation_scale, max_degree: self.max_degree }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of a `.curve` file.
    Analyze {
        file: PathBuf,
        /// Skip the Clifford audit.
        #[arg(long)]
        no_clifford: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Equivalence suites only.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Emit a `.curve` file for a standard construction.
    Construct {
        #[command(subcommand)]
        what: Construction,
        /// Write the file here instead of stdout.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Analyze every `.curve` file of a directory.
    Corpus {
        dir: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum Construction {
    /// Contract a divisor `a:m …` on the line to one point.
    Serre {
        #[arg(required = true)]
        divisor: Vec<String>,
    },
    /// The genus-`n` curve whose model lies on a cone.
    Cone { n: u32 },
    /// One point with the given semigroup.
    Semigroup {
        #[arg(required = true)]
        gens: Vec<u64>,
        /// Branch point.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        at: String,
    },
}

fn load(path: &Path) -> Result<(String, CurveModel)> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidData(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map_or_else(|| "curve".into(), |s| s.to_string_lossy().into_owned());
    Ok((name, parse_curve(&text)?))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::InvalidData(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn summary(name: &str, c: &CurveModel, a: &Analysis) -> String {
    let mut s = format!("curve {name}: genus {}, {} singular point(s)\n", a.genus, c.clusters.len());
    for cp in &a.profile.clusters {
        s.push_str(&format!(
            "  {}: delta {}, d {}, eta {}, type {}, multiplicity {}, embdim {}, xi {}, mu {}\n",
            cp.name, cp.delta, cp.d, cp.eta, cp.cm_type, cp.multiplicity, cp.embdim, cp.xi, cp.mu
        ));
    }
    let p = &a.profile;
    s.push_str(&format!(
        "gorenstein {}, nearly normal {}, nearly gorenstein {}, eta {}\n",
        yes(p.gorenstein),
        yes(p.nearly_normal),
        yes(p.nearly_gorenstein),
        p.eta
    ));
    let cmp = &a.comparison;
    s.push_str(&format!("canonical map: m = {}, degree {} onto its image\n", a.map.degree(), a.map_degree));
    match &cmp.lambda {
        Some(l) => s.push_str(&format!("hyperelliptic: lambda = ({}) / ({})\n", l.num, l.den)),
        None => s.push_str(&format!("model identified with the blowup: {}\n", yes(cmp.rmt_verified == Some(true)))),
    }
    s.push_str(&format!("d' = {}, g' = {}, blowup genus {}\n", cmp.d_prime, cmp.g_prime, cmp.blowup_genus));
    let nm = &a.normality;
    s.push_str(&format!(
        "normality: linear {}, projective {}, arithmetic {}, extremal {}\n",
        yes(nm.linear),
        yes(nm.projective),
        yes(nm.arithmetic),
        yes(nm.extremal)
    ));
    if let Some(r) = &a.ideals {
        s.push_str(&format!(
            "ideal: quadrics generate {}, quadrics and cubics generate {}, verified through degree {}\n",
            yes(r.quadrics_generate),
            yes(r.quadrics_cubics_generate),
            r.verified_through
        ));
    }
    if let Some(rs) = &a.clifford {
        let eq = rs.iter().filter(|r| r.equality_case.is_some()).count();
        s.push_str(&format!("clifford: {} sheaves audited, {} at equality, bound holds\n", rs.len(), eq));
    }
    s.push_str(&verdicts_text(a));
    s
}

fn verdicts_text(a: &Analysis) -> String {
    let mut s = String::new();
    for v in a.theorems.iter().filter(|v| v.applicable) {
        let conds: Vec<String> = v.conditions.iter().map(|c| format!("{}={}", c.name, u8::from(c.value))).collect();
        s.push_str(&format!("  [{}] {} {}\n", if v.holds() { "ok" } else { "VIOLATED" }, v.id, conds.join(" ")));
        for r in v.riders.iter().filter(|r| !r.value) {
            s.push_str(&format!("      rider fails: {}\n", r.name));
        }
    }
    s
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze { file, no_clifford, common } => {
            let (name, c) = load(&file)?;
            let settings = common.settings();
            let options = AnalyzeOptions { clifford: !no_clifford, ..AnalyzeOptions::default() };
            let a = analyze(&c, &settings, &options)?;
            let text = if common.json { render(&analysis_json(&name, &c, &a, &settings)) } else { summary(&name, &c, &a) };
            emit(common.out.as_deref(), &text)?;
            a.enforce()?;
            Ok(0)
        }
        Command::Verify { file, common } => {
            let (name, c) = load(&file)?;
            let settings = common.settings();
            let options = AnalyzeOptions { clifford: false, ..AnalyzeOptions::default() };
            let a = analyze(&c, &settings, &options)?;
            let text = if common.json {
                render(&serde_json::json!({
                    "curve": name,
                    "theorems": a.theorems.iter().map(verdict_json).collect::<Vec<_>>(),
                }))
            } else {
                format!("curve {name}\n{}", verdicts_text(&a))
            };
            emit(common.out.as_deref(), &text)?;
            a.enforce()?;
            Ok(0)
        }
        Command::Construct { what, out } => {
            let file = match what {
                Construction::Serre { divisor } => {
                    let mut d = Vec::new();
                    for item in &divisor {
                        let parsed = item.rsplit_once(':').and_then(|(a, m)| Some((parse_q(a)?, m.trim().parse::<u32>().ok()?)));
                        d.push(parsed.ok_or_else(|| Error::Semantic(format!("expected a:m, got '{item}'")))?);
                    }
                    describe_curve(&serre_contract(&d)?)
                }
                Construction::Cone { n } => describe_curve(&cone_curve(n)?.0),
                Construction::Semigroup { gens, at } => {
                    let a = parse_q(&at).ok_or_else(|| Error::Semantic(format!("not a rational number: '{at}'")))?;
                    let file = CurveFile {
                        field: "Q".into(),
                        points: vec![PointDecl { name: "P".into(), branches: vec![a], kind: ClusterKind::Semigroup(gens) }],
                    };
                    file.to_curve()?;
                    file
                }
            };
            let mut text = String::new();
            let g = file.to_curve()?.genus();
            let pts: Vec<String> = file.points.iter().flat_map(|p| p.branches.iter().map(fmt_q)).collect();
            text.push_str(&format!("# genus {g}, branches at {}\n", pts.join(", ")));
            text.push_str(&serialize_curve_file(&file));
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Corpus { dir, common } => {
            let settings = common.settings();
            let summary = corpus_run(&dir, common.out.as_deref(), &settings, &AnalyzeOptions::default())?;
            if common.json {
                print!("{}", render(&summary.to_json()));
            } else {
                print!("{}", summary.table());
            }
            Ok(if summary.all_passed() { 0 } else { 1 })
        }
    }
}

fn wants_json(cli: &Cli) -> bool {
    match &cli.command {
        Command::Analyze { common, .. } | Command::Verify { common, .. } | Command::Corpus { common, .. } => common.json,
        Command::Construct { .. } => false,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = wants_json(&cli);
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            if json {
                print!("{}", render(&error_json("", &e)));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.class().exit_code() as u8)
        }
    }
}
