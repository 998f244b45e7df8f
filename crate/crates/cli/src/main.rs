use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use grope_core::bracket::{jones_from_bracket, kauffman_bracket_fast_with, BracketLimits};
use grope_core::construct::{
    draw_boundary, generate_inout, generate_type_i, generate_type_ii, ConstructError, EmbeddedGropePresentation,
    GraphKind, Target,
};
use grope_core::grope::find_free_set;
use grope_core::laurent::{LaurentPolynomial, Variable};
use grope_core::scheme::{tot_formal, tot_with, Invariant};
use grope_tools::formats::{parse_grope_spec, parse_layout, parse_pd, parse_scheme, write_pd, write_scheme, FormatError};
use grope_tools::suites::{self, Caps, RunConfig, Suite, SuiteError};

#[derive(Parser)]
#[command(name = "grope", version, about = "Jones polynomials, crossing-change schemes and grope boundaries")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Lines, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// `key = value` lines
    Lines,
    /// PASS/FAIL first, for reading
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bracket, writhe, Jones polynomial and its derivatives at 1.
    Jones {
        pd_file: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        derivatives: u32,
        /// Take a Jones polynomial in t instead of a diagram.
        #[arg(long, conflicts_with = "pd_file")]
        poly: Option<String>,
        #[arg(long, default_value_t = 4_000_000)]
        max_states: usize,
    },
    /// Alternating sum of an invariant over a crossing-change scheme.
    SchemeTot {
        pd_file: PathBuf,
        scheme_file: PathBuf,
        #[arg(long, default_value = "jones")]
        invariant: String,
        /// Print the formal sum of diagrams instead of evaluating.
        #[arg(long)]
        formal: bool,
        #[arg(long, default_value_t = 20)]
        max_scheme_size: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        class: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        max_scheme_size: usize,
        #[arg(long, default_value_t = 600)]
        time_budget: u64,
    },
    /// Draw the boundary of a grope presentation.
    Construct {
        grope_file: PathBuf,
        layout_file: PathBuf,
        #[arg(short = 'o', long)]
        output: PathBuf,
        /// Write type-I, type-II and in/out scheme files here.
        #[arg(long)]
        emit_schemes: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Resource(String),
    /// A check ran and failed; already reported.
    #[error("check failed")]
    Check,
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<SuiteError> for Failure {
    fn from(e: SuiteError) -> Self {
        match e {
            SuiteError::Resource(m) => Failure::Resource(m),
            SuiteError::Input(m) => Failure::Input(m),
        }
    }
}

// every core error funnels through the suite classification
macro_rules! via_suite {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                SuiteError::from(e).into()
            }
        }
    )*};
}
via_suite!(grope_core::bracket::BracketError, grope_core::scheme::SchemeError, ConstructError, grope_core::diagram::DiagramError);

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn in_file(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn print_derivatives(j: &LaurentPolynomial, k: u32) {
    for i in 0..=k {
        println!("J^({i})(1) = {}", j.derivative_at_one(i));
    }
}

fn cmd_jones(pd: Option<PathBuf>, k: u32, poly: Option<String>, max_states: usize) -> Result<(), Failure> {
    if let Some(text) = poly {
        let j = LaurentPolynomial::parse(&text, Variable::T).map_err(|e| Failure::Input(format!("--poly: {e}")))?;
        println!("J = {j}");
        print_derivatives(&j, k);
        return Ok(());
    }
    let path = pd.ok_or_else(|| Failure::Input("give a PD file or --poly".into()))?;
    let d = parse_pd(&read(&path)?).map_err(|e| in_file(&path, e))?;
    let limits = BracketLimits { max_states, ..BracketLimits::default() };
    let bracket = kauffman_bracket_fast_with(&d, &limits)?;
    let j = jones_from_bracket(&bracket, d.writhe()).map_err(|e| Failure::Input(e.to_string()))?;
    println!("crossings = {}", d.crossing_count());
    println!("components = {}", d.component_count());
    println!("bracket = {}", bracket.render(Variable::A));
    println!("writhe = {}", d.writhe());
    println!("J = {j}");
    print_derivatives(&j, k);
    Ok(())
}

fn cmd_scheme_tot(pd: &Path, scheme: &Path, invariant: &str, formal: bool, cap: usize) -> Result<(), Failure> {
    let d = parse_pd(&read(pd)?).map_err(|e| in_file(pd, e))?;
    let (s, labels) = parse_scheme(&d, &read(scheme)?).map_err(|e| in_file(scheme, e))?;
    let mu: Invariant = invariant.parse().map_err(|e| Failure::Input(format!("--invariant: {e}")))?;
    println!("moves = {}", s.len());
    for (i, (m, l)) in s.moves().iter().zip(&labels).enumerate() {
        let idx: Vec<String> = m.crossings().iter().map(usize::to_string).collect();
        match l {
            Some(l) => println!("move[{i}] = {}  # {l}", idx.join(" ")),
            None => println!("move[{i}] = {}", idx.join(" ")),
        }
    }
    if formal {
        if s.len() > cap {
            return Err(Failure::Resource(format!("scheme size {} exceeds cap {cap}", s.len())));
        }
        let f = tot_formal(&s)?;
        println!("terms = {}", f.len());
        for (i, (c, d)) in f.terms().enumerate() {
            let pd = write_pd(d).trim_end().replace('\n', "; ");
            println!("term[{i}] = {c:+} * [{pd}]");
        }
        return Ok(());
    }
    let v = tot_with(&s, mu, cap)?;
    match mu {
        Invariant::JonesDeriv(k) if s.len() == k as usize + 1 => {
            let pass = v.is_zero();
            println!("Tot = {v}  {}", if pass { "PASS" } else { "FAIL" });
            if !pass {
                return Err(Failure::Check);
            }
        }
        _ => println!("Tot = {v}"),
    }
    Ok(())
}

fn cmd_verify(suite: Suite, cfg: RunConfig, format: Format) -> Result<(), Failure> {
    let checks = suites::run(suite, &cfg)?;
    println!("suite = {}", suite.name());
    println!("seed = {}", cfg.seed);
    for c in &checks {
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        match format {
            Format::Lines => println!("{} = {verdict}  {}", c.id, c.detail),
            Format::Text => println!("{verdict}  {}  {}", c.id, c.detail),
        }
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    println!("summary = {passed}/{} PASS", checks.len());
    if passed == checks.len() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_construct(grope: &Path, layout: &Path, output: &Path, emit: Option<PathBuf>) -> Result<(), Failure> {
    let spec = parse_grope_spec(&read(grope)?).map_err(|e| in_file(grope, e))?;
    let events = parse_layout(&read(layout)?).map_err(|e| in_file(layout, e))?;
    let p = EmbeddedGropePresentation::new(spec, events).map_err(|e| in_file(layout, e))?;
    let d = draw_boundary(&p)?.diagram;
    write(output, &write_pd(&d))?;
    println!("class = {}", p.class());
    println!("crossings = {}", d.crossing_count());
    println!("components = {}", d.component_count());
    println!("wrote = {}", output.display());
    let Some(dir) = emit else { return Ok(()) };
    fs::create_dir_all(&dir).map_err(|e| in_file(&dir, e))?;
    let kind = GraphKind::Gamma;
    let g = p.decorated_graph(kind);
    let mut targets: Vec<Target> = g.edges().map(|(u, v)| Target::edge(u, v)).collect();
    targets.extend((0..g.vertex_count()).filter(|&v| g.is_marked(v)).map(Target::Mark));
    let mut schemes = vec![("type-i", generate_type_i(&p, kind, &targets)?)];
    let free = (1..=g.vertex_count()).rev().find_map(|m| find_free_set(&g, m)).unwrap_or_default();
    schemes.push(("type-ii", generate_type_ii(&p, kind, &free)?));
    let unmarked = (0..g.vertex_count()).filter(|&v| !g.is_marked(v));
    let mut inout: Option<grope_core::construct::GeneratedScheme> = None;
    for v in unmarked {
        match generate_inout(&p, v) {
            Ok(s) => {
                inout = Some(match inout {
                    None => s,
                    Some(acc) => match acc.merge(&s) {
                        Ok(m) => m,
                        // moves of two vertices in the same half overlap
                        Err(_) => acc,
                    },
                })
            }
            Err(ConstructError::BottomStageNotGenusOne(_)) => break,
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(s) = inout {
        schemes.push(("inout", s));
    }
    for (name, s) in schemes {
        let path = dir.join(format!("{name}.scheme"));
        write(&path, &format!("# {name} moves on {}\n{}", output.display(), write_scheme(&s)))?;
        println!("wrote = {} ({} moves)", path.display(), s.scheme.len());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Jones { pd_file, derivatives, poly, max_states } => cmd_jones(pd_file, derivatives, poly, max_states),
        Cmd::SchemeTot { pd_file, scheme_file, invariant, formal, max_scheme_size } => {
            cmd_scheme_tot(&pd_file, &scheme_file, &invariant, formal, max_scheme_size)
        }
        Cmd::Verify { suite, class, trials, seed, max_scheme_size, time_budget } => {
            let caps = Caps { max_scheme_size, time_budget_seconds: time_budget, ..Caps::default() };
            cmd_verify(suite, RunConfig { seed, trials, class, caps }, cli.format)
        }
        Cmd::Construct { grope_file, layout_file, output, emit_schemes } => {
            cmd_construct(&grope_file, &layout_file, &output, emit_schemes)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
