//! Verification suites run by `grope verify`.
//!
//! Randomized suites draw from ChaCha8 seeded with `seed_from_u64(seed)`,
//! so a (suite, seed, trials) triple fixes every sampled diagram.

use std::time::{Duration, Instant};

use grope_core::bracket::{jones, jones_derivatives_at_one, BracketError};
use grope_core::construct::{
    build_sharp_example, draw_boundary, draw_resolutions, draw_sub_boundary, generate_inout, ConstructError,
    EmbeddedGropePresentation, GraphKind,
};
use grope_core::diagram::{DiagramError, LinkDiagram};
use grope_core::grope::{find_free_set, random_hypothesis_graph, TipPath};
use grope_core::laurent::{ExactRational, LaurentPolynomial};
use grope_core::random::random_diagram;
use grope_core::scheme::{tot_with, Invariant, Move, Scheme, SchemeError, Value};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::fixtures;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Eq1,
    MainTheorem,
    Sharpness,
    Lemma4term,
    Counting,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Eq1 => "eq1",
            Suite::MainTheorem => "main-theorem",
            Suite::Sharpness => "sharpness",
            Suite::Lemma4term => "lemma4term",
            Suite::Counting => "counting",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Caps {
    pub max_scheme_size: usize,
    pub max_crossings_naive: usize,
    pub time_budget_seconds: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self { max_scheme_size: 20, max_crossings_naive: 24, time_budget_seconds: 600 }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: Option<usize>,
    pub class: Option<usize>,
    pub caps: Caps,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { id: id.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("{0}")]
    Input(String),
}

impl From<BracketError> for SuiteError {
    fn from(e: BracketError) -> Self {
        match e {
            BracketError::ResourceLimit { .. } => SuiteError::Resource(e.to_string()),
            other => SuiteError::Input(other.to_string()),
        }
    }
}

impl From<SchemeError> for SuiteError {
    fn from(e: SchemeError) -> Self {
        match e {
            SchemeError::ResourceLimit { .. } => SuiteError::Resource(e.to_string()),
            SchemeError::Bracket(b) => b.into(),
            other => SuiteError::Input(other.to_string()),
        }
    }
}

impl From<ConstructError> for SuiteError {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::Scheme(s) => s.into(),
            other => SuiteError::Input(other.to_string()),
        }
    }
}

impl From<DiagramError> for SuiteError {
    fn from(e: DiagramError) -> Self {
        SuiteError::Input(e.to_string())
    }
}

struct Clock {
    start: Instant,
    budget: Duration,
}

impl Clock {
    fn new(caps: &Caps) -> Self {
        Self { start: Instant::now(), budget: Duration::from_secs(caps.time_budget_seconds) }
    }

    fn tick(&self) -> Result<(), SuiteError> {
        if self.start.elapsed() > self.budget {
            return Err(SuiteError::Resource(format!("time budget of {}s exceeded", self.budget.as_secs())));
        }
        Ok(())
    }
}

pub fn run(suite: Suite, cfg: &RunConfig) -> Result<Vec<Check>, SuiteError> {
    let clock = Clock::new(&cfg.caps);
    match suite {
        Suite::Eq1 => eq1(cfg, &clock),
        Suite::MainTheorem => main_theorem(cfg, &clock),
        Suite::Sharpness => sharpness(cfg, &clock),
        Suite::Lemma4term => lemma4term(&clock),
        Suite::Counting => counting(cfg, &clock),
    }
}

fn below(rng: &mut impl RngCore, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

fn shuffled(rng: &mut impl RngCore, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        v.swap(i, below(rng, i + 1));
    }
    v
}

fn derivs(d: &LinkDiagram, k: usize) -> Result<Vec<ExactRational>, SuiteError> {
    Ok(jones_derivatives_at_one(d, k as u32)?)
}

fn prime(k: usize) -> String {
    match k {
        1..=3 => format!("J{}(1)", "'".repeat(k)),
        _ => format!("J^({k})(1)"),
    }
}

/// Random host, `k + 1` moves, `mu = J^(k)(1)`; the alternating sum must
/// vanish. The first `trials` schemes use single crossings, the rest split
/// a random crossing set into `k + 1` blocks.
fn eq1(cfg: &RunConfig, clock: &Clock) -> Result<Vec<Check>, SuiteError> {
    let trials = cfg.trials.unwrap_or(50);
    let multi = (2 * trials).div_ceil(5);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for t in 0..trials + multi {
        clock.tick()?;
        let single = t < trials;
        let k = below(&mut rng, 4);
        let lo = if single { k + 1 } else { (k + 2).max(3) };
        let n = lo + below(&mut rng, 9 - lo);
        let host = random_diagram(&mut rng, n);
        let order = shuffled(&mut rng, n);
        let moves: Vec<Move> = if single {
            order[..=k].iter().map(|&i| Move::single(i)).collect()
        } else {
            let used = k + 1 + below(&mut rng, n - k);
            let mut blocks: Vec<Vec<usize>> = order[..=k].iter().map(|&i| vec![i]).collect();
            for &i in &order[k + 1..used] {
                blocks[below(&mut rng, k + 1)].push(i);
            }
            blocks.into_iter().map(Move::new).collect()
        };
        let sizes: Vec<String> = moves.iter().map(|m| m.crossings().len().to_string()).collect();
        let s = Scheme::new(host, moves)?;
        let v = tot_with(&s, Invariant::JonesDeriv(k as u32), cfg.caps.max_scheme_size)?;
        let kind = if single { "single" } else { "multi" };
        out.push(Check::new(
            format!("eq1.{kind}-{t:03}"),
            v.is_zero(),
            format!("Tot = {v} (k = {k}, {n} crossings, move sizes {})", sizes.join("+")),
        ));
    }
    Ok(out)
}

fn main_theorem(cfg: &RunConfig, clock: &Clock) -> Result<Vec<Check>, SuiteError> {
    let mut out = Vec::new();
    for (name, p) in fixtures::presentations() {
        let n = p.class();
        if cfg.class.is_some_and(|c| c != n) {
            continue;
        }
        clock.tick()?;
        let d = draw_boundary(&p)?.diagram;
        let top = n.div_ceil(2);
        let v = derivs(&d, top)?;
        let shown: Vec<String> = (1..=top).map(|k| format!("{} = {}", prime(k), v[k])).collect();
        out.push(Check::new(
            format!("main-theorem.{name}"),
            v[1..].iter().all(ExactRational::is_zero),
            format!("class {n}, {} crossings: {}", d.crossing_count(), shown.join(", ")),
        ));
    }
    if out.is_empty() {
        return Err(SuiteError::Input(format!("no bundled presentation of class {}", cfg.class.unwrap_or(0))));
    }
    Ok(out)
}

fn sharpness(cfg: &RunConfig, clock: &Clock) -> Result<Vec<Check>, SuiteError> {
    let mut out = Vec::new();
    let d = draw_boundary(&fixtures::presentation("c2-twist"))?.diagram;
    let j2 = derivs(&d, 2)?.swap_remove(2);
    out.push(Check::new("sharpness.c2-twist", !j2.is_zero(), format!("{} = {j2}", prime(2))));

    clock.tick()?;
    let ex = build_sharp_example(4, cfg.seed)?;
    let d = draw_boundary(&ex.presentation)?.diagram;
    let v = derivs(&d, 3)?;
    out.push(Check::new(
        "sharpness.family-4",
        ex.presentation.class() == 4 && v[1].is_zero() && v[2].is_zero(),
        format!("class {}, {} = {}, {} = {}, {} = {}", ex.presentation.class(), prime(1), v[1], prime(2), v[2], prime(3), v[3]),
    ));

    let mut witnesses = Vec::new();
    for (name, p) in fixtures::presentations() {
        let n = p.class();
        if n != 3 && n != 4 {
            continue;
        }
        clock.tick()?;
        let k = n.div_ceil(2) + 1;
        let d = draw_boundary(&p)?.diagram;
        let v = derivs(&d, k)?.swap_remove(k);
        if !v.is_zero() {
            witnesses.push(format!("{name} {} = {v}", prime(k)));
        }
    }
    let detail = if witnesses.is_empty() { "none".to_string() } else { witnesses.join("; ") };
    out.push(Check::new("sharpness.witness", !witnesses.is_empty(), detail));
    Ok(out)
}

/// Unmarked Γ vertices whose tips all lie in the half `0.<side>`.
fn vertices_in_half(p: &EmbeddedGropePresentation, side: &str) -> Vec<usize> {
    let g = p.decorated_graph(GraphKind::Gamma);
    let half: TipPath = format!("0.{side}").parse().expect("half path");
    (0..g.vertex_count())
        .filter(|&v| !g.is_marked(v) && p.grouping().groups[v].iter().all(|t| t.starts_with(&half)))
        .collect()
}

fn lemma4term(clock: &Clock) -> Result<Vec<Check>, SuiteError> {
    let p = fixtures::presentation(fixtures::COMPOSITE);
    let g = p.decorated_graph(GraphKind::Gamma);
    let (xs, ys) = (vertices_in_half(&p, "a"), vertices_in_half(&p, "b"));
    let pairs: Vec<(usize, usize)> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
    let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| !g.has_edge(x, y)).or(pairs.first()) else {
        return Err(SuiteError::Input("composite fixture lacks an unmarked vertex in each half".into()));
    };
    let adjacent = g.has_edge(x, y);
    let mut out = vec![Check::new("lemma4term.hypothesis", !adjacent, format!("x = V{x}, y = V{y}, adjacent = {adjacent}"))];

    let s = generate_inout(&p, x)?.merge(&generate_inout(&p, y)?)?;
    clock.tick()?;
    let Value::Polynomial(sum) = tot_with(&s.scheme, Invariant::Jones, 4)? else { unreachable!("jones is polynomial") };
    let whole = jones(s.scheme.host())?;
    let [h, h_hat] = draw_resolutions(&p)?;
    let (jh, jhh) = (jones(&h.diagram)?, jones(&h_hat.diagram)?);
    let two = |q: &LaurentPolynomial| q + q;
    let literal = &(&whole + &two(&jh)) + &two(&jhh);
    out.push(Check::new("lemma4term.literal", sum == literal, format!("sum = {sum}; J(G) + 2J(H) + 2J(H^) = {literal}")));

    let g1 = jones(&draw_sub_boundary(&p, &"0.a".parse().expect("path"))?.diagram)?;
    let g2 = jones(&draw_sub_boundary(&p, &"0.b".parse().expect("path"))?.diagram)?;
    let four = |q: &LaurentPolynomial| two(&two(q));
    let corrected = &(&(&literal - &four(&g1)) - &four(&g2)) + &LaurentPolynomial::monomial(0, 3);
    out.push(Check::new(
        "lemma4term.with-half-terms",
        sum == corrected,
        format!("J(G) + 2J(H) + 2J(H^) - 4J(G') - 4J(G'') + 3 = {corrected}"),
    ));
    Ok(out)
}

fn counting(cfg: &RunConfig, clock: &Clock) -> Result<Vec<Check>, SuiteError> {
    let trials = cfg.trials.unwrap_or(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    // per m: (trials, failures)
    let mut tally = [(0usize, 0usize); 7];
    for _ in 0..trials {
        let m = 1 + below(&mut rng, 6);
        let g = random_hypothesis_graph(&mut rng, m);
        let ok = g.complexity() <= m + 1
            && find_free_set(&g, m).is_some_and(|set| {
                let distinct = set.iter().enumerate().all(|(i, u)| !set[i + 1..].contains(u));
                let independent = g.edges().all(|(u, v)| !(set.contains(&u) && set.contains(&v)));
                set.len() == m && distinct && independent && set.iter().all(|&v| !g.is_marked(v))
            });
        tally[m].0 += 1;
        tally[m].1 += usize::from(!ok);
    }
    clock.tick()?;
    Ok((1..=6)
        .filter(|&m| tally[m].0 > 0)
        .map(|m| {
            let (n, bad) = tally[m];
            Check::new(format!("counting.m{m}"), bad == 0, format!("{n} graphs on {} vertices, {bad} failures", 2 * m + 1))
        })
        .collect())
}
