use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use oidforge::brackets::{check_algebroid, CheckOutcome, LieInftyAlgebroid, Report};
use oidforge::catalog::{hyperelliptic, koszul_foliation, vanishing_ideal, CatalogError};
use oidforge::construct::{build_all, rescale, restrict, BuildOptions, ConstructError};
use oidforge::io::{
    algebroid_from_str, algebroid_to_string, isotropy_json, order_from_name, parse_in, IoError, Session,
};
use oidforge::isotropy::{is_regular, isotropy_lie_algebra, minimality_at, parse_point, IsotropyError};
use oidforge::modres::{certify_exactness, free_resolution, ModresError};
use oidforge::poly::{Poly, Ring, Q};
use num_traits::{One, Signed, Zero};

/// `println!` / `print!` that exit quietly when the reader has gone away (`| head`).
macro_rules! out {
    ($($t:tt)*) => { emit!(writeln, $($t)*) };
}

macro_rules! out_part {
    ($($t:tt)*) => { emit!(write, $($t)*) };
}

macro_rules! emit {
    ($w:ident, $($t:tt)*) => {{
        use std::io::Write;
        if let Err(e) = $w!(std::io::stdout(), $($t)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("stdout: {}", e);
        }
    }};
}

#[derive(Parser)]
#[command(name = "oidforge", version, about = "Universal Lie ∞-algebroids of polynomial singular foliations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Free resolution of the module generated by a session's vector fields.
    Resolve {
        #[arg(long, visible_alias = "session")]
        gens: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Resolution plus all brackets.
    Build {
        #[arg(long, visible_alias = "session")]
        gens: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form algebroids.
    Catalog {
        #[command(subcommand)]
        which: CatalogCmd,
    },
    /// Check every identity of a stored algebroid.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Isotropy Lie algebra of a stored algebroid at a rational point.
    Isotropy {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        point: String,
        #[command(flatten)]
        common: Common,
    },
    /// Restrict a stored algebroid to the quotient by an ideal.
    Restrict {
        #[arg(long = "in")]
        input: PathBuf,
        /// Ideal generators; repeat the flag or separate with commas.
        #[arg(long, required = true)]
        ideal: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Multiply ρ and every bracket by a function χ.
    Rescale {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        chi: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Vector fields X with X(φ) ∈ ⟨φ⟩ for a weight-homogeneous φ.
    Koszul {
        #[arg(long)]
        phi: String,
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        common: Common,
    },
    /// I·𝔛 for a complete intersection I.
    Vanishing {
        /// Generators of I; repeat the flag or separate with commas.
        #[arg(long, required = true)]
        phi: Vec<String>,
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Vector fields tangent to y² = h(x) on the surface {y² = h}.
    Hyperelliptic {
        #[arg(long)]
        h: String,
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct RingArgs {
    /// Variable names, comma separated. Default: identifiers in order of appearance.
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
}

#[derive(Args)]
struct Common {
    /// Monomial order: grevlex or lex.
    #[arg(long)]
    order: Option<String>,
    /// Highest arity checked (and built, for `build`).
    #[arg(long)]
    max_arity: Option<usize>,
    /// Tie-break seed for the bracket solver.
    #[arg(long)]
    seed: Option<u64>,
    /// Check exactness and every identity; exit 1 on failure.
    #[arg(long)]
    verify: bool,
    /// Also compute the isotropy Lie algebra at this point, e.g. 0,1/2.
    #[arg(long, value_name = "POINT")]
    isotropy: Option<String>,
    /// Where to write the JSON artifact ('-' for stdout).
    #[arg(long)]
    json_out: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<IsotropyError> for Failure {
    fn from(e: IsotropyError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<ModresError> for Failure {
    fn from(e: ModresError) -> Self {
        match e {
            ModresError::Malformed(m) => Failure::Input(m),
            e => Failure::Check(e.to_string()),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Input(m) => Failure::Input(m),
            CatalogError::Modres(e) => e.into(),
        }
    }
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::NotLieRinehartIdeal { .. } => Failure::Input(e.to_string()),
            e => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(m)) => {
            out!("error: {}", m);
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Resolve { gens, common } => {
            let (ring, session) = load_session(&gens, &common)?;
            let res = free_resolution(&ring, &session.fields(&ring)?)?;
            let alg = LieInftyAlgebroid::new(res);
            describe(&alg);
            let mut ok = true;
            if common.verify {
                let report = exactness_report(&alg);
                out_part!("{}", report.to_text());
                ok = report.passed();
            }
            write_artifact(&common, &algebroid_to_string(&alg))?;
            Ok(ok)
        }
        Cmd::Build { gens, common } => {
            let (ring, session) = load_session(&gens, &common)?;
            let res = free_resolution(&ring, &session.fields(&ring)?)?;
            let opts = BuildOptions {
                max_arity: common.max_arity.or(session.max_arity),
                seed: common.seed.or(session.seed),
                ..BuildOptions::default()
            };
            let alg = build_all(&res, opts)?;
            finish(&alg, &common)
        }
        Cmd::Catalog { which } => {
            let (alg, common) = match which {
                CatalogCmd::Koszul { phi, ring, common } => {
                    let r = make_ring(&ring, &[phi.as_str()], &common)?;
                    (koszul_foliation(&parse_in(&r, &phi)?)?, common)
                }
                CatalogCmd::Vanishing { phi, ring, common } => {
                    let phis = split_list(&phi);
                    let srcs: Vec<&str> = phis.iter().map(String::as_str).collect();
                    let r = make_ring(&ring, &srcs, &common)?;
                    let polys = parse_all(&r, &phis)?;
                    (vanishing_ideal(&r, &polys)?.alg, common)
                }
                CatalogCmd::Hyperelliptic { h, ring, common } => {
                    let r = make_ring(&ring, &[h.as_str()], &common)?;
                    if r.nvars() != 1 {
                        return Err(Failure::Input("h must be a polynomial in one variable".into()));
                    }
                    (hyperelliptic(&parse_in(&r, &h)?)?.alg, common)
                }
            };
            finish(&alg, &common)
        }
        Cmd::Verify { input, common } => {
            let alg = load_algebroid(&input)?;
            describe(&alg);
            let report = full_report(&alg, &common);
            out_part!("{}", report.to_text());
            write_artifact(&common, &pretty(&report.to_json()))?;
            Ok(report.passed())
        }
        Cmd::Isotropy { input, point, common } => {
            let alg = load_algebroid(&input)?;
            let ok = isotropy_section(&alg, &point, &common, true)?;
            Ok(ok)
        }
        Cmd::Restrict { input, ideal, common } => {
            let alg = load_algebroid(&input)?;
            let polys = parse_all(alg.ring(), &split_list(&ideal))?;
            let out = restrict(&alg, &polys)?;
            finish(&out, &common)
        }
        Cmd::Rescale { input, chi, common } => {
            let alg = load_algebroid(&input)?;
            let chi = parse_in(alg.ring(), &chi)?;
            finish(&rescale(&alg, &chi), &common)
        }
    }
}

/// Shared tail of every command that produces an algebroid.
fn finish(alg: &LieInftyAlgebroid, common: &Common) -> Outcome {
    describe(alg);
    let mut ok = true;
    if common.verify {
        let report = full_report(alg, common);
        out_part!("{}", report.to_text());
        ok &= report.passed();
    }
    if let Some(pt) = &common.isotropy {
        ok &= isotropy_section(alg, pt, common, false)?;
    }
    write_artifact(common, &algebroid_to_string(alg))?;
    Ok(ok)
}

fn exactness_report(alg: &LieInftyAlgebroid) -> Report {
    let witness = certify_exactness(alg.res()).err().map(|e| match e {
        ModresError::NotExact { level, witness } => format!(
            "level {}: [{}]",
            level,
            witness.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
        ),
        e => e.to_string(),
    });
    let mut r = Report::default();
    r.push(CheckOutcome { name: "resolution exact".into(), passed: witness.is_none(), cases: alg.length(), witness });
    r
}

fn full_report(alg: &LieInftyAlgebroid, common: &Common) -> Report {
    let mut r = exactness_report(alg);
    r.extend(check_algebroid(alg, common.max_arity));
    r
}

fn describe(alg: &LieInftyAlgebroid) {
    let ring = alg.ring();
    out_part!("ring: ℚ[{}]", ring.vars().join(", "));
    let q = ring.quotient_basis();
    if !q.is_empty() {
        out_part!(" / ⟨{}⟩", q.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "));
    }
    out!();
    let ranks: Vec<String> = alg.ranks().iter().map(|r| r.to_string()).collect();
    out!("ranks: {}", ranks.join(", "));
    for k in alg.bracket_arities() {
        out!("ℓ{}: {} entries", k, alg.bracket(k).map_or(0, |t| t.entries().count()));
    }
    if alg.is_partial() {
        out!("partial: brackets truncated");
    }
}

fn isotropy_section(alg: &LieInftyAlgebroid, point: &str, common: &Common, write: bool) -> Outcome {
    let pt = parse_point(point).map_err(Failure::Input)?;
    let g = isotropy_lie_algebra(alg, &pt)?;
    let regular = is_regular(alg, &pt)?;
    let minimal = minimality_at(alg, &pt)?.is_some();
    out!("isotropy at ({}): dimension {}", point, g.dim());
    out!("regular: {}, minimal: {}", regular, minimal);
    for i in 0..g.dim() {
        for j in i + 1..g.dim() {
            let v = &g.structure[i][j];
            let rhs = linear_combination(v);
            out!("[b{}, b{}] = {}", i + 1, j + 1, rhs);
        }
    }
    let j = isotropy_json(&g, regular, minimal);
    out!("{} isotropy Jacobi", if j.jacobi { "ok  " } else { "FAIL" });
    if write {
        write_artifact(common, &pretty(&serde_json::to_value(&j).expect("plain data")))?;
    }
    Ok(j.jacobi)
}

/// "b2 - 1/2*b3" style rendering of a coordinate vector.
fn linear_combination(v: &[Q]) -> String {
    let mut s = String::new();
    for (k, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let neg = c.is_negative();
        let a = c.abs();
        if s.is_empty() {
            s.push_str(if neg { "-" } else { "" });
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            s.push_str(&format!("{}*", a));
        }
        s.push_str(&format!("b{}", k + 1));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("plain data")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))
}

fn load_session(path: &Path, common: &Common) -> Result<(Ring, Session), Failure> {
    let mut s = Session::from_str(&read(path)?)?;
    if let Some(o) = &common.order {
        s.order = o.clone();
    }
    Ok((s.ring()?, s))
}

fn load_algebroid(path: &Path) -> Result<LieInftyAlgebroid, Failure> {
    Ok(algebroid_from_str(&read(path)?)?)
}

fn write_artifact(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.json_out {
        None => Ok(()),
        Some(p) if p.as_os_str() == "-" => {
            out!("{}", text);
            Ok(())
        }
        Some(p) => fs::write(p, format!("{}\n", text))
            .map_err(|e| Failure::Input(format!("{}: {}", p.display(), e))),
    }
}

fn split_list(items: &[String]) -> Vec<String> {
    items
        .iter()
        .flat_map(|s| s.split(','))
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_all(ring: &Ring, srcs: &[String]) -> Result<Vec<Poly>, Failure> {
    srcs.iter().map(|s| parse_in(ring, s).map_err(Failure::from)).collect()
}

/// Identifiers in order of first appearance.
fn identifiers(srcs: &[&str]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in srcs {
        let cs: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < cs.len() {
            if cs[i].is_alphabetic() || cs[i] == '_' {
                let st = i;
                while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                let id: String = cs[st..i].iter().collect();
                if !out.contains(&id) {
                    out.push(id);
                }
            } else {
                i += 1;
            }
        }
    }
    out
}

fn make_ring(args: &RingArgs, srcs: &[&str], common: &Common) -> Result<Ring, Failure> {
    let vars = if args.vars.is_empty() { identifiers(srcs) } else { args.vars.clone() };
    if vars.is_empty() {
        return Err(Failure::Input("no variables: pass --vars".into()));
    }
    let order = order_from_name(common.order.as_deref().unwrap_or("grevlex"), vars.len())?;
    Ok(Ring::with_names(vars, order))
}
