//! One PASS/FAIL line per acceptance criterion.
//!
//! Oracles live here: a state sum that counts loops by walking arcs, and
//! derivatives by termwise differentiation. Engine values are compared
//! against them, not against each other.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use grope_core::bracket::{
    jones, jones_derivatives_at_one, kauffman_bracket_fast, kauffman_bracket_naive_with, skein_resolve, BracketLimits,
};
use grope_core::construct::{
    build_sharp_example, draw_boundary, draw_resolutions, draw_sub_boundary, generate_inout, GraphKind,
};
use grope_core::diagram::{LinkDiagram, SingularDiagram};
use grope_core::grope::{find_free_set, random_hypothesis_graph, TipPath};
use grope_core::laurent::{binomial, ExactRational, LaurentPolynomial};
use grope_core::random::{random_diagram, random_knot};
use grope_core::scheme::{eval_singular, tot, Invariant, Move, Scheme, Value};
use grope_tools::fixtures;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const SEED: u64 = 20;

/// These two are stated with a defect and fail as written; the corrected
/// forms are printed underneath.
const EXPECTED_FAIL: &[usize] = &[7, 9];

type Poly = BTreeMap<i64, i128>;

fn poly(p: &LaurentPolynomial) -> Poly {
    p.terms().map(|(e, c)| (e, i128::try_from(c.clone()).expect("small coefficient"))).collect()
}

fn mul(p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::new();
    for (a, x) in p {
        for (b, y) in q {
            *out.entry(a + b).or_default() += x * y;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// State sum: A-smoothing joins slots 0-3 and 1-2, B joins 0-1 and 2-3.
fn oracle_bracket(d: &LinkDiagram) -> Poly {
    let delta: Poly = [(2, -1), (-2, -1)].into();
    let power = |k: usize| (0..k).fold(Poly::from([(0, 1)]), |acc, _| mul(&acc, &delta));
    let n = d.crossing_count();
    let free = d.free_loops() as usize;
    if n == 0 {
        return power(free - 1);
    }
    let labels = d.arc_labels();
    let at = |l: u32| labels.binary_search(&l).expect("label");
    let mut tally: BTreeMap<(usize, usize), i128> = BTreeMap::new();
    for state in 0u64..1 << n {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); labels.len()];
        let mut a_count = 0;
        for (i, c) in d.crossings().iter().enumerate() {
            let [p, q, r, s] = c.arcs.map(at);
            let joins = if state >> i & 1 == 0 {
                a_count += 1;
                [(p, s), (q, r)]
            } else {
                [(p, q), (r, s)]
            };
            for (x, y) in joins {
                adj[x].push(y);
                adj[y].push(x);
            }
        }
        let mut seen = vec![false; labels.len()];
        let mut loops = 0;
        for start in 0..labels.len() {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        *tally.entry((a_count, loops + free)).or_default() += 1;
    }
    let mut out = Poly::new();
    for ((a, loops), count) in tally {
        for (e, c) in power(loops - 1) {
            *out.entry(e + 2 * a as i64 - n as i64).or_default() += c * count;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `(d/dt)^k` at 1 by differentiating term by term; keys are halves of t exponents.
fn deriv(p: &LaurentPolynomial, k: u32) -> ExactRational {
    let mut terms = poly(p);
    for _ in 0..k {
        terms = terms.into_iter().map(|(e, c)| (e - 2, c * e as i128)).collect();
    }
    ExactRational::new(terms.values().sum::<i128>(), 1i128 << k)
}

fn int(n: i64) -> ExactRational {
    ExactRational::integer(n)
}

fn below(rng: &mut impl RngCore, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

fn distinct(rng: &mut impl RngCore, n: usize, k: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in 0..k {
        v.swap(i, i + below(rng, n - i));
    }
    v.truncate(k);
    v
}

fn naive(d: &LinkDiagram) -> LaurentPolynomial {
    kauffman_bracket_naive_with(d, &BracketLimits { max_naive_crossings: 20, ..BracketLimits::default() }).unwrap()
}

/// `sum over sigma of (-1)^|sigma| J(K_sigma)`, one diagram at a time.
fn alternating_sum(s: &Scheme) -> LaurentPolynomial {
    let mut sum = LaurentPolynomial::zero();
    for mask in 0usize..1 << s.len() {
        let sigma: Vec<usize> = (0..s.len()).filter(|i| mask >> i & 1 == 1).collect();
        let j = jones(&s.apply_subset(&sigma).unwrap()).unwrap();
        sum = if sigma.len().is_multiple_of(2) { &sum + &j } else { &sum - &j };
    }
    sum
}

struct Report {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

impl Report {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into(), notes: Vec::new() }
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}

fn c1_printed_polynomials() -> Report {
    let polys = [LaurentPolynomial::from_t_coeffs(0, &[2, -1, 1, -2, 1, -1, 1]), LaurentPolynomial::from_t_coeffs(-4, &[1, -2, 3, -4, 5, -4, 3, -2, 1])];
    let mut ok = true;
    let mut shown = Vec::new();
    for p in &polys {
        let start = Instant::now();
        let v = p.derivative_at_one(2);
        let took = start.elapsed();
        ok &= v == int(12) && deriv(p, 2) == int(12) && took < Duration::from_millis(1);
        shown.push(format!("{v} in {took:?}"));
    }
    Report::new(ok, format!("J''(1) = {}", shown.join(", ")))
}

fn c2_oracle_equivalence(rng: &mut ChaCha8Rng) -> Report {
    let start = Instant::now();
    let mut cases: Vec<(String, LinkDiagram)> = Vec::new();
    for &(name, _) in fixtures::DIAGRAMS {
        cases.push((name.into(), fixtures::diagram(name)));
    }
    for k in 1..=10 {
        cases.push((format!("torus-braid-{k}"), fixtures::torus_braid(k)));
    }
    for (name, p) in fixtures::presentations() {
        cases.push((name.into(), draw_boundary(&p).unwrap().diagram));
    }
    cases.retain(|(_, d)| d.crossing_count() <= 20);
    let fixed = cases.len();
    for i in 0..200 {
        let n = below(rng, 9);
        cases.push((format!("random-{i}"), random_diagram(rng, n)));
    }
    let bad: Vec<&str> = cases
        .iter()
        .filter(|(_, d)| {
            let fast = kauffman_bracket_fast(d).unwrap();
            fast != naive(d) || poly(&fast) != oracle_bracket(d)
        })
        .map(|(n, _)| n.as_str())
        .collect();
    let took = start.elapsed();
    Report::new(
        bad.is_empty() && took < Duration::from_secs(60),
        format!("{fixed} fixtures + 200 random, mismatches {bad:?}, {took:.1?}"),
    )
}

fn c3_eq1(rng: &mut ChaCha8Rng) -> Report {
    let start = Instant::now();
    let mut bad = 0;
    for t in 0..70 {
        let single = t < 50;
        let k = below(rng, 4);
        let lo = if single { k + 1 } else { k + 2 };
        let n = lo + below(rng, 9 - lo);
        let host = random_diagram(rng, n);
        let used = if single { k + 1 } else { lo + below(rng, n - lo + 1) };
        let chosen = distinct(rng, n, used);
        let mut blocks: Vec<Vec<usize>> = chosen[..=k].iter().map(|&i| vec![i]).collect();
        for &i in &chosen[k + 1..] {
            blocks[below(rng, k + 1)].push(i);
        }
        let s = Scheme::new(host, blocks.into_iter().map(Move::new).collect()).unwrap();
        let direct = deriv(&alternating_sum(&s), k as u32);
        let engine = tot(&s, Invariant::JonesDeriv(k as u32)).unwrap();
        if !direct.is_zero() || engine != Value::Rational(direct) {
            bad += 1;
        }
    }
    let took = start.elapsed();
    Report::new(bad == 0 && took < Duration::from_secs(120), format!("50 single + 20 multi-crossing, {bad} nonzero, {took:.1?}"))
}

fn c4_singular(rng: &mut ChaCha8Rng) -> Report {
    let mut bad = 0;
    for _ in 0..20 {
        let n = below(rng, 4);
        let size = n + 1 + below(rng, 8 - n);
        let host = random_diagram(rng, size);
        let dp = distinct(rng, size, n + 1);
        let engine = eval_singular(&SingularDiagram::new(host.clone(), dp.clone()).unwrap(), Invariant::JonesDeriv(n as u32)).unwrap();
        // positive minus negative resolution at every double point
        let mut direct = int(0);
        for mask in 0usize..1 << dp.len() {
            let flips = dp.iter().enumerate().filter(|&(b, &i)| (mask >> b & 1 == 1) == (host.crossings()[i].sign.value() > 0)).map(|(_, &i)| i);
            let v = deriv(&jones(&host.switch_crossings(flips).unwrap()).unwrap(), n as u32);
            direct = if mask.count_ones() % 2 == 0 { direct + v } else { direct - v };
        }
        if !engine.is_zero() || !direct.is_zero() {
            bad += 1;
        }
    }
    Report::new(bad == 0, format!("20 trials, {bad} nonzero"))
}

fn c5_main_theorem() -> Report {
    let start = Instant::now();
    let mut per_class = [0usize; 6];
    let mut bad = Vec::new();
    let mut checked = 0;
    for (name, p) in fixtures::presentations() {
        let n = p.class();
        per_class[n] += 1;
        let d = draw_boundary(&p).unwrap().diagram;
        let top = n.div_ceil(2) as u32;
        let v = jones_derivatives_at_one(&d, top).unwrap();
        let mut ok = v[1..].iter().all(ExactRational::is_zero);
        if d.crossing_count() <= 70 {
            let j = jones(&d).unwrap();
            ok &= (1..=top).all(|k| deriv(&j, k).is_zero());
            checked += 1;
        }
        if !ok {
            bad.push(name);
        }
    }
    let took = start.elapsed();
    let enough = per_class[2..].iter().all(|&c| c >= 3);
    Report::new(
        bad.is_empty() && enough && took < Duration::from_secs(120),
        format!("fixtures per class 2..5 = {:?}, failing {bad:?}, {checked} also via full polynomial, {took:.1?}", &per_class[2..]),
    )
}

fn c6_sharpness() -> Report {
    let twist = jones(&draw_boundary(&fixtures::presentation("c2-twist")).unwrap().diagram).unwrap();
    let j2 = deriv(&twist, 2);
    let ex = build_sharp_example(4, SEED).unwrap();
    let v = jones_derivatives_at_one(&draw_boundary(&ex.presentation).unwrap().diagram, 3).unwrap();
    let family = ex.presentation.class() == 4 && v[1].is_zero() && v[2].is_zero();
    let mut witnesses = Vec::new();
    for (name, p) in fixtures::presentations() {
        let n = p.class();
        if n == 3 || n == 4 {
            let k = n.div_ceil(2) + 1;
            let w = jones_derivatives_at_one(&draw_boundary(&p).unwrap().diagram, k as u32).unwrap().swap_remove(k);
            if !w.is_zero() {
                witnesses.push(format!("{name} J^({k})(1) = {w}"));
            }
        }
    }
    Report::new(
        j2 == int(-6) && family && !witnesses.is_empty(),
        format!("c2-twist J''(1) = {j2}; class-4 family J'(1) = {}, J''(1) = {}, J'''(1) = {}; {}", v[1], v[2], v[3], witnesses.join(", ")),
    )
}

fn c7_four_term() -> Report {
    let p = fixtures::presentation(fixtures::COMPOSITE);
    let g = p.decorated_graph(GraphKind::Gamma);
    let in_half = |h: &str| -> Vec<usize> {
        let half: TipPath = h.parse().unwrap();
        (0..g.vertex_count()).filter(|&v| !g.is_marked(v) && p.grouping().groups[v].iter().all(|t| t.starts_with(&half))).collect()
    };
    let (x, y) = in_half("0.a")
        .into_iter()
        .flat_map(|x| in_half("0.b").into_iter().map(move |y| (x, y)))
        .find(|&(x, y)| !g.has_edge(x, y))
        .expect("a non-adjacent pair");
    let s = generate_inout(&p, x).unwrap().merge(&generate_inout(&p, y).unwrap()).unwrap().scheme;
    let sum = alternating_sum(&s);
    let [h, h_hat] = draw_resolutions(&p).unwrap();
    let jg = jones(s.host()).unwrap();
    let (jh, jhh) = (jones(&h.diagram).unwrap(), jones(&h_hat.diagram).unwrap());
    let scale = |q: &LaurentPolynomial, k: i64| q.scale(&k.into());
    let literal = &(&jg + &scale(&jh, 2)) + &scale(&jhh, 2);
    let half = |h: &str| jones(&draw_sub_boundary(&p, &h.parse().unwrap()).unwrap().diagram).unwrap();
    let corrected = &(&(&literal - &scale(&half("0.a"), 4)) - &scale(&half("0.b"), 4)) + &LaurentPolynomial::monomial(0, 3);
    Report::new(sum == literal, format!("x = V{x}, y = V{y}: sum = {sum}, J(G) + 2J(H) + 2J(H^) = {literal}")).note(format!(
        "with the half-boundary terms, sum = J(G) + 2J(H) + 2J(H^) - 4J(G') - 4J(G'') + 3: {}",
        if sum == corrected { "holds" } else { "does not hold" }
    ))
}

fn c8_counting(rng: &mut ChaCha8Rng) -> Report {
    let mut bad = 0;
    for _ in 0..1000 {
        let m = 1 + below(rng, 6);
        let g = random_hypothesis_graph(rng, m);
        let ok = g.vertex_count() == 2 * m + 1
            && g.complexity() <= m + 1
            && find_free_set(&g, m).is_some_and(|set| {
                let mut sorted = set.clone();
                sorted.sort_unstable();
                sorted.dedup();
                sorted.len() == m
                    && set.iter().all(|&v| !g.is_marked(v))
                    && set.iter().all(|&u| set.iter().all(|&v| u == v || !g.has_edge(u, v)))
            });
        bad += usize::from(!ok);
    }
    Report::new(bad == 0, format!("1000 graphs, {bad} failures"))
}

fn c9_skein(rng: &mut ChaCha8Rng) -> Report {
    let a = |k| LaurentPolynomial::monomial(k, 1);
    let mut bad = 0;
    for _ in 0..200 {
        let n = 1 + below(rng, 8);
        let d = random_diagram(rng, n);
        let s = skein_resolve(&d, below(rng, n)).unwrap();
        let [l, h, hh] = [&s.l, &s.h, &s.h_hat].map(|x| kauffman_bracket_fast(x).unwrap());
        let ok = &(&a(1) * &hh) + &(&a(-1) * &h) == l
            && poly(&l) == oracle_bracket(&s.l)
            && poly(&h) == oracle_bracket(&s.h)
            && poly(&hh) == oracle_bracket(&s.h_hat);
        bad += usize::from(!ok);
    }
    // u = t^(1/2) is key 1
    let (u, u_inv) = (LaurentPolynomial::monomial(1, 1), LaurentPolynomial::monomial(-1, 1));
    let (mut literal, mut corrected, mut pinned) = (0, 0, 0);
    for &(name, i) in fixtures::SKEIN_PINNED {
        let s = skein_resolve(&fixtures::diagram(name), i).unwrap();
        pinned += usize::from((s.l.writhe(), s.h.writhe(), s.h_hat.writhe()) == (0, 1, -1));
        let [jl, jh, jhh] = [&s.l, &s.h, &s.h_hat].map(|x| jones(x).unwrap());
        literal += usize::from(&(&u * &jhh) - &(&u_inv * &jh) == jl);
        corrected += usize::from(-(&(&u * &jhh)) - (&u_inv * &jh) == jl);
    }
    let k = fixtures::SKEIN_PINNED.len();
    Report::new(
        bad == 0 && literal == k && pinned == k,
        format!("bracket identity: 200 pairs, {bad} failures; u J(H^) - u^-1 J(H) = J(L) on {literal}/{k} pinned fixtures"),
    )
    .note(format!("-u J(H^) - u^-1 J(H) = J(L) holds on {corrected}/{k} pinned fixtures"))
}

fn c10_jones_algebra(rng: &mut ChaCha8Rng) -> Report {
    let mut bad = 0;
    for _ in 0..50 {
        let (n1, n2) = (below(rng, 9), below(rng, 9));
        let (k1, k2) = (random_knot(rng, n1), random_knot(rng, n2));
        let (j1, j2) = (jones(&k1).unwrap(), jones(&k2).unwrap());
        let arc = |rng: &mut ChaCha8Rng, k: &LinkDiagram| {
            let labels = k.arc_labels();
            if labels.is_empty() { 1 } else { labels[below(rng, labels.len())] }
        };
        let product = &j1 * &j2;
        let sums_ok = (0..2).all(|_| {
            let (c1, c2) = (arc(rng, &k1), arc(rng, &k2));
            jones(&k1.connected_sum(c1, &k2, c2).unwrap()).unwrap() == product
        });
        let ok = sums_ok
            && jones(&k1.reverse()).unwrap() == j1
            && jones(&k1.mirror()).unwrap() == j1.invert_variable()
            && deriv(&j1, 0) == int(1)
            && deriv(&j1, 1).is_zero();
        bad += usize::from(!ok);
    }
    Report::new(bad == 0, format!("50 random knots, {bad} failures"))
}

fn c11_leibniz(rng: &mut ChaCha8Rng) -> Report {
    let t_minus_one = LaurentPolynomial::from_t_coeffs(0, &[-1, 1]);
    let gen = |rng: &mut ChaCha8Rng, m: usize| {
        let coeffs: Vec<i64> = (0..1 + below(rng, 4)).map(|_| below(rng, 11) as i64 - 5).collect();
        let r = LaurentPolynomial::from_t_coeffs(-(below(rng, 4) as i64), &coeffs);
        &LaurentPolynomial::one() + &(&t_minus_one.pow(m as u32 + 1) * &r)
    };
    let mut bad = 0;
    for _ in 0..100 {
        let m = 1 + below(rng, 4);
        let (p, q) = (gen(rng, m), gen(rng, m));
        let pre = [&p, &q].iter().all(|x| deriv(x, 0) == int(1) && (1..=m as u32).all(|k| deriv(x, k).is_zero()));
        let k = m as u32 + 2;
        let p2q2 = &(&p * &p) * &(&q * &q);
        let two = int(2);
        let want = &(&two * &deriv(&p, k)) + &(&two * &deriv(&q, k));
        // the general Leibniz expansion, as a second route
        let pp = &p * &p;
        let qq = &q * &q;
        let expanded: ExactRational =
            (0..=k).map(|i| ExactRational::integer(binomial(k, i)) * deriv(&pp, i) * deriv(&qq, k - i)).sum();
        let ok = pre && p2q2.derivative_at_one(k) == want && deriv(&p2q2, k) == want && expanded == want;
        bad += usize::from(!ok);
    }
    Report::new(bad == 0, format!("100 pairs, {bad} failures"))
}

fn c12_performance() -> Report {
    let d = fixtures::diagram("torus-3-14");
    let start = Instant::now();
    let b = kauffman_bracket_fast(&d).unwrap();
    let took = start.elapsed();
    let family = d == fixtures::torus_braid(14).canonical();
    let agree = (1..=10).all(|k| {
        let t = fixtures::torus_braid(k);
        let fast = kauffman_bracket_fast(&t).unwrap();
        fast == naive(&t) && poly(&fast) == oracle_bracket(&t)
    });
    Report::new(
        took < Duration::from_secs(10) && family && agree && !b.is_zero(),
        format!("{} crossings in {took:.2?}; truncations up to 20 crossings agree with the state sum: {agree}", d.crossing_count()),
    )
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    type Criterion = Box<dyn FnOnce(&mut ChaCha8Rng) -> Report>;
    let criteria: Vec<(&str, Criterion)> = vec![
        ("printed polynomials", Box::new(|_| c1_printed_polynomials())),
        ("fast = naive bracket", Box::new(c2_oracle_equivalence)),
        ("alternating sums vanish", Box::new(c3_eq1)),
        ("singular extension", Box::new(c4_singular)),
        ("main theorem on fixtures", Box::new(|_| c5_main_theorem())),
        ("sharpness witnesses", Box::new(|_| c6_sharpness())),
        ("four-term identity", Box::new(|_| c7_four_term())),
        ("counting lemma", Box::new(c8_counting)),
        ("skein identity", Box::new(c9_skein)),
        ("Jones algebra", Box::new(c10_jones_algebra)),
        ("Leibniz consequence", Box::new(c11_leibniz)),
        ("performance", Box::new(|_| c12_performance())),
    ];
    let mut unexpected = 0;
    for (i, (title, run)) in criteria.into_iter().enumerate() {
        let id = i + 1;
        let r = run(&mut rng);
        println!("criterion {id:2} {}  {title}: {}", if r.pass { "PASS" } else { "FAIL" }, r.detail);
        for n in &r.notes {
            println!("             note: {n}");
        }
        if !r.pass && !EXPECTED_FAIL.contains(&id) {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
