//! Text formats: PD diagrams, schemes, grope specs and layouts.

use std::fmt::Write as _;

use grope_core::construct::{GeneratedScheme, LayoutEvent};
use grope_core::diagram::{Crossing, DiagramError, LinkDiagram, Sign};
use grope_core::grope::GropeSpec;
use grope_core::scheme::{Move, Scheme, SchemeError};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid diagram: {0}")]
    Diagram(#[from] DiagramError),
    #[error("invalid scheme: {0}")]
    Scheme(#[from] SchemeError),
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, column, message: message.into() }
}

/// Non-blank lines with comments stripped, as (1-based line number, text).
fn statements(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split('#').next().unwrap_or("").trim_end();
        (!body.trim().is_empty()).then_some((i + 1, body))
    })
}

/// Tokens of a line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain([(line.len(), ' ')]) {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn sign_token(line: usize, (col, tok): (usize, &str)) -> Result<Sign, FormatError> {
    match tok {
        "+" => Ok(Sign::Pos),
        "-" => Ok(Sign::Neg),
        _ => Err(parse_err(line, col, format!("expected `+` or `-`, found `{tok}`"))),
    }
}

pub fn parse_pd(text: &str) -> Result<LinkDiagram, FormatError> {
    let mut crossings = Vec::new();
    let mut loops = 0u32;
    for (n, line) in statements(text) {
        let toks = tokens(line);
        match toks[0].1 {
            "U" if toks.len() == 1 => loops += 1,
            "U" => return Err(parse_err(n, toks[1].0, "`U` takes no arguments")),
            "X" => {
                if toks.len() != 6 {
                    return Err(parse_err(n, toks[0].0, format!("`X` needs 4 arcs and a sign, found {} fields", toks.len() - 1)));
                }
                let mut arcs = [0u32; 4];
                for (k, &(col, tok)) in toks[1..5].iter().enumerate() {
                    arcs[k] = match tok.parse::<u32>() {
                        Ok(a) if a > 0 => a,
                        _ => return Err(parse_err(n, col, format!("arc label must be a positive integer, found `{tok}`"))),
                    };
                }
                crossings.push(Crossing::new(arcs, sign_token(n, toks[5])?));
            }
            other => return Err(parse_err(n, toks[0].0, format!("unknown statement `{other}`"))),
        }
    }
    if crossings.is_empty() && loops == 0 {
        return Err(parse_err(1, 1, "empty diagram"));
    }
    Ok(LinkDiagram::new(crossings, loops)?)
}

pub fn write_pd(d: &LinkDiagram) -> String {
    d.to_pd_string()
}

/// A scheme file: moves as crossing-index lists, with the `# label:` lines
/// that precede them.
pub fn parse_scheme(host: &LinkDiagram, text: &str) -> Result<(Scheme, Vec<Option<String>>), FormatError> {
    let mut moves = Vec::new();
    let mut labels = Vec::new();
    let mut pending = None;
    for (i, raw) in text.lines().enumerate() {
        if let Some(label) = raw.trim().strip_prefix('#').map(str::trim).and_then(|c| c.strip_prefix("label:")) {
            pending = Some(label.trim().to_string());
            continue;
        }
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let mut m = Vec::new();
        for (col, tok) in tokens(body) {
            m.push(tok.parse::<usize>().map_err(|_| parse_err(i + 1, col, format!("expected a crossing index, found `{tok}`")))?);
        }
        moves.push(Move::new(m));
        labels.push(pending.take());
    }
    Ok((Scheme::new(host.clone(), moves)?, labels))
}

pub fn write_scheme(s: &GeneratedScheme) -> String {
    let mut out = String::new();
    for (m, label) in s.scheme.moves().iter().zip(&s.labels) {
        let _ = writeln!(out, "# label: {label}");
        let idx: Vec<String> = m.crossings().iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{}", idx.join(" "));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Word(&'a str),
}

struct Lexer<'a> {
    toks: Vec<(usize, usize, Tok<'a>)>,
    at: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        let mut toks = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let mut word: Option<usize> = None;
            for (i, ch) in line.char_indices().chain([(line.len(), ' ')]) {
                let delim = ch.is_whitespace() || ch == '(' || ch == ')';
                if delim {
                    if let Some(s) = word.take() {
                        toks.push((n + 1, s + 1, Tok::Word(&line[s..i])));
                    }
                    if ch == '(' {
                        toks.push((n + 1, i + 1, Tok::Open));
                    } else if ch == ')' {
                        toks.push((n + 1, i + 1, Tok::Close));
                    }
                } else if word.is_none() {
                    word = Some(i);
                }
            }
        }
        Self { toks, at: 0 }
    }

    fn next(&mut self) -> Result<(usize, usize, Tok<'a>), FormatError> {
        let t = self.toks.get(self.at).copied();
        self.at += 1;
        t.ok_or_else(|| {
            let (l, c) = self.toks.last().map(|t| (t.0, t.1)).unwrap_or((1, 1));
            parse_err(l, c, "unexpected end of input")
        })
    }

    fn expect(&mut self, want: Tok<'_>) -> Result<(), FormatError> {
        let (l, c, t) = self.next()?;
        if t == want {
            Ok(())
        } else {
            Err(parse_err(l, c, format!("expected {want:?}, found {t:?}")))
        }
    }

    fn spec(&mut self) -> Result<GropeSpec, FormatError> {
        match self.next()? {
            (_, _, Tok::Word("o")) => Ok(GropeSpec::Leaf),
            (_, _, Tok::Open) => {
                let (l, c, t) = self.next()?;
                if t != Tok::Word("stage") {
                    return Err(parse_err(l, c, format!("expected `stage`, found {t:?}")));
                }
                let (l, c, t) = self.next()?;
                let g = match t {
                    Tok::Word(w) => w.parse::<usize>().ok().filter(|&g| g > 0),
                    _ => None,
                }
                .ok_or_else(|| parse_err(l, c, "genus must be a positive integer"))?;
                self.expect(Tok::Open)?;
                let mut pairs = Vec::with_capacity(g);
                for _ in 0..g {
                    self.expect(Tok::Open)?;
                    let a = self.spec()?;
                    let b = self.spec()?;
                    self.expect(Tok::Close)?;
                    pairs.push((a, b));
                }
                self.expect(Tok::Close)?;
                self.expect(Tok::Close)?;
                Ok(GropeSpec::Stage(pairs))
            }
            (l, c, t) => Err(parse_err(l, c, format!("expected `o` or `(`, found {t:?}"))),
        }
    }
}

pub fn parse_grope_spec(text: &str) -> Result<GropeSpec, FormatError> {
    let mut lx = Lexer::new(text);
    let spec = lx.spec()?;
    if let Some(&(l, c, t)) = lx.toks.get(lx.at) {
        return Err(parse_err(l, c, format!("trailing input {t:?}")));
    }
    if spec == GropeSpec::Leaf {
        return Err(parse_err(1, 1, "a grope needs at least one stage"));
    }
    Ok(spec)
}

pub fn parse_layout(text: &str) -> Result<Vec<LayoutEvent>, FormatError> {
    statements(text)
        .map(|(n, line)| {
            let col = line.len() - line.trim_start().len() + 1;
            line.trim().parse::<LayoutEvent>().map_err(|e| parse_err(n, col, e.to_string()))
        })
        .collect()
}

pub fn write_layout(events: &[LayoutEvent]) -> String {
    events.iter().map(|e| format!("{e}\n")).collect()
}
