//! Line-based text format for quiver presentations.
//!
//! ```text
//! field Q                     # or F2, F3, F5, ...
//! vertices 1 2 3
//! arrow a : 1 -> 2 deg 0
//! arrow b : 2 -> 3 deg 0
//! relation b*a               # b*a means: first a, then b
//! differential a = 0
//! ```
//!
//! Dg modules and twisted complexes are given in blocks closed by `end`:
//!
//! ```text
//! module M
//!   elem x deg 0 at 2
//!   elem y deg 0 at 1
//!   act x a = y
//!   diff x = 0
//! end
//! twisted T
//!   entry 1 shift 0
//!   entry 2 shift 0
//!   twist 1 2 = a
//! end
//! ```

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::quiver::{Arrow, GradedQuiver, Path};
use crate::error::{Error, Result};
use crate::exactlin::{rational_to_string, FieldTag};

/// Linear combination of paths with rational coefficients, as written.
pub type PathPoly = Vec<(BigRational, Path)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebraPresentation {
    pub field: FieldTag,
    pub quiver: GradedQuiver,
    pub relations: Vec<PathPoly>,
    /// `(arrow, d(arrow))`, at most one entry per arrow.
    pub differentials: Vec<(usize, PathPoly)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpec {
    pub name: String,
    /// `(name, degree, vertex)`
    pub elems: Vec<(String, i64, usize)>,
    /// `x · arrow = Σ c y`
    pub actions: Vec<(usize, usize, Vec<(BigRational, usize)>)>,
    pub diffs: Vec<(usize, Vec<(BigRational, usize)>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedSpec {
    pub name: String,
    /// `(vertex, shift)`
    pub entries: Vec<(usize, i64)>,
    /// `(i, j, δ_ij)` with zero-based `i < j`.
    pub twists: Vec<(usize, usize, PathPoly)>,
}

/// A presentation together with any module and twisted-complex blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub presentation: DgAlgebraPresentation,
    pub modules: Vec<ModuleSpec>,
    pub twisted: Vec<TwistedSpec>,
}

impl Document {
    pub fn module(&self, name: &str) -> Option<&ModuleSpec> {
        self.modules.iter().find(|m| m.name == name)
    }

    pub fn twisted_complex(&self, name: &str) -> Option<&TwistedSpec> {
        self.twisted.iter().find(|t| t.name == name)
    }
}

pub fn parse_presentation(text: &str) -> Result<DgAlgebraPresentation> {
    parse_document(text).map(|d| d.presentation)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Star,
    Plus,
    Minus,
}

struct LineCtx<'a> {
    line: usize,
    text: &'a str,
}

impl LineCtx<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Syntax { line: self.line, column, message: message.into() }
    }

    fn column_of(&self, sub: &str) -> usize {
        let base = self.text.as_ptr() as usize;
        let p = sub.as_ptr() as usize;
        if p >= base && p <= base + self.text.len() {
            p - base + 1
        } else {
            1
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '.'
}

fn tokenize(ctx: &LineCtx, s: &str) -> Result<Vec<(Tok, usize)>> {
    let offset = ctx.column_of(s);
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let col = offset + pos;
        match c {
            ' ' | '\t' => i += 1,
            '*' => {
                out.push((Tok::Star, col));
                i += 1;
            }
            '+' => {
                out.push((Tok::Plus, col));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, col));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '/') {
                    i += 1;
                }
                let end = if i < chars.len() { chars[i].0 } else { s.len() };
                let lit = &s[chars[start].0..end];
                // an identifier may start with digits (vertex-like arrow names are not allowed)
                if i < chars.len() && is_ident_char(chars[i].1) && chars[i].1 != '.' {
                    return Err(ctx.err(col, format!("malformed number `{lit}`")));
                }
                let q = parse_rational(lit).ok_or_else(|| ctx.err(col, format!("malformed number `{lit}`")))?;
                out.push((Tok::Num(q), col));
            }
            c if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i].1) {
                    i += 1;
                }
                let end = if i < chars.len() { chars[i].0 } else { s.len() };
                out.push((Tok::Ident(s[chars[start].0..end].to_string()), col));
            }
            other => return Err(ctx.err(col, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

fn parse_rational(lit: &str) -> Option<BigRational> {
    match lit.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(lit.parse().ok()?)),
    }
}

/// Parses `±c*x*y*z ± ...` into a list of (coefficient, factor names).
fn parse_lincomb(ctx: &LineCtx, s: &str) -> Result<Vec<(BigRational, Vec<(String, usize)>)>> {
    let toks = tokenize(ctx, s)?;
    let end_col = ctx.column_of(s) + s.len();
    if toks.len() == 1 {
        if let (Tok::Num(q), _) = &toks[0] {
            if q.is_zero() {
                return Ok(Vec::new());
            }
        }
    }
    let mut out = Vec::new();
    let mut i = 0;
    if toks.is_empty() {
        return Err(ctx.err(end_col, "expected a linear combination"));
    }
    loop {
        let mut coef = BigRational::one();
        while i < toks.len() && matches!(toks[i].0, Tok::Plus | Tok::Minus) {
            if toks[i].0 == Tok::Minus {
                coef = -coef;
            }
            i += 1;
        }
        if i < toks.len() {
            if let Tok::Num(q) = &toks[i].0 {
                coef *= q.clone();
                i += 1;
                if i < toks.len() && toks[i].0 == Tok::Star {
                    i += 1;
                }
            }
        }
        let mut factors = Vec::new();
        loop {
            match toks.get(i) {
                Some((Tok::Ident(name), col)) => {
                    factors.push((name.clone(), *col));
                    i += 1;
                }
                Some((_, col)) => return Err(ctx.err(*col, "expected a name")),
                None => return Err(ctx.err(end_col, "expected a name")),
            }
            if i < toks.len() && toks[i].0 == Tok::Star {
                i += 1;
                continue;
            }
            break;
        }
        out.push((coef, factors));
        match toks.get(i) {
            None => break,
            Some((Tok::Plus | Tok::Minus, _)) => continue,
            Some((_, col)) => return Err(ctx.err(*col, "expected `+` or `-`")),
        }
    }
    Ok(out)
}

fn parse_path_poly(ctx: &LineCtx, quiver: &GradedQuiver, s: &str) -> Result<PathPoly> {
    let mut out = Vec::new();
    for (coef, factors) in parse_lincomb(ctx, s)? {
        let mut path: Option<Path> = None;
        for (name, col) in factors.iter().rev() {
            let a = quiver.arrow_index(name).ok_or_else(|| ctx.err(*col, format!("unknown arrow `{name}`")))?;
            let next = quiver.arrow_path(a);
            path = Some(match path {
                None => next,
                Some(p) => next.compose(&p).ok_or_else(|| {
                    Error::Presentation(format!("line {}: path is not composable at `{name}`", ctx.line))
                })?,
            });
        }
        out.push((coef, path.expect("nonempty factor list")));
    }
    Ok(out)
}

fn parse_int(ctx: &LineCtx, s: &str) -> Result<i64> {
    s.parse().map_err(|_| ctx.err(ctx.column_of(s), format!("expected an integer, found `{s}`")))
}

fn expect_word<'a>(ctx: &LineCtx, words: &[&'a str], i: usize, what: &str) -> Result<&'a str> {
    words.get(i).copied().ok_or_else(|| ctx.err(ctx.text.len() + 1, format!("expected {what}")))
}

fn expect_keyword(ctx: &LineCtx, words: &[&str], i: usize, kw: &str) -> Result<()> {
    let w = expect_word(ctx, words, i, &format!("`{kw}`"))?;
    if w != kw {
        return Err(ctx.err(ctx.column_of(w), format!("expected `{kw}`, found `{w}`")));
    }
    Ok(())
}

fn vertex(ctx: &LineCtx, quiver: &GradedQuiver, w: &str) -> Result<usize> {
    quiver.vertex_index(w).ok_or_else(|| ctx.err(ctx.column_of(w), format!("unknown vertex `{w}`")))
}

/// The remainder of `content` after the word `w`, which must be a subslice of it.
fn after<'a>(content: &'a str, w: &str) -> &'a str {
    let start = w.as_ptr() as usize - content.as_ptr() as usize + w.len();
    &content[start..]
}

enum Block {
    Module(ModuleSpec),
    Twisted(TwistedSpec),
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut field = None;
    let mut quiver = GradedQuiver::default();
    let mut relations = Vec::new();
    let mut differentials: Vec<(usize, PathPoly)> = Vec::new();
    let mut modules = Vec::new();
    let mut twisted = Vec::new();
    let mut block: Option<Block> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let ctx = LineCtx { line: lineno + 1, text: raw };
        let words: Vec<&str> = content.split_whitespace().collect();
        let Some(&kw) = words.first() else { continue };

        if let Some(b) = block.as_mut() {
            if kw == "end" {
                match block.take().expect("open block") {
                    Block::Module(m) => modules.push(m),
                    Block::Twisted(t) => twisted.push(t),
                }
                continue;
            }
            match b {
                Block::Module(m) => parse_module_line(&ctx, &quiver, m, &words, content)?,
                Block::Twisted(t) => parse_twisted_line(&ctx, &quiver, t, &words, content)?,
            }
            continue;
        }

        match kw {
            "field" => {
                let w = expect_word(&ctx, &words, 1, "a field")?;
                field = Some(parse_field(w).ok_or_else(|| ctx.err(ctx.column_of(w), format!("unknown field `{w}`")))?);
            }
            "vertices" => {
                for &w in &words[1..] {
                    if quiver.vertex_index(w).is_some() {
                        return Err(ctx.err(ctx.column_of(w), format!("duplicate vertex `{w}`")));
                    }
                    quiver.vertices.push(w.to_string());
                }
            }
            "arrow" => {
                let name = expect_word(&ctx, &words, 1, "an arrow name")?;
                if !name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_') {
                    return Err(ctx.err(ctx.column_of(name), "arrow names must start with a letter"));
                }
                if quiver.arrow_index(name).is_some() {
                    return Err(ctx.err(ctx.column_of(name), format!("duplicate arrow `{name}`")));
                }
                expect_keyword(&ctx, &words, 2, ":")?;
                let src = vertex(&ctx, &quiver, expect_word(&ctx, &words, 3, "a source vertex")?)?;
                expect_keyword(&ctx, &words, 4, "->")?;
                let tgt = vertex(&ctx, &quiver, expect_word(&ctx, &words, 5, "a target vertex")?)?;
                expect_keyword(&ctx, &words, 6, "deg")?;
                let degree = parse_int(&ctx, expect_word(&ctx, &words, 7, "a degree")?)?;
                if let Some(extra) = words.get(8) {
                    return Err(ctx.err(ctx.column_of(extra), "trailing input"));
                }
                quiver.arrows.push(Arrow { name: name.to_string(), source: src, target: tgt, degree });
            }
            "relation" => {
                let poly = parse_path_poly(&ctx, &quiver, after(content, kw))?;
                check_homogeneous(&quiver, &poly, &format!("relation on line {}", ctx.line))?;
                if poly.is_empty() {
                    return Err(ctx.err(ctx.column_of(kw), "empty relation"));
                }
                relations.push(poly);
            }
            "differential" => {
                let name = expect_word(&ctx, &words, 1, "an arrow name")?;
                let a = quiver.arrow_index(name).ok_or_else(|| ctx.err(ctx.column_of(name), format!("unknown arrow `{name}`")))?;
                expect_keyword(&ctx, &words, 2, "=")?;
                let value = parse_path_poly(&ctx, &quiver, after(content, words[2]))?;
                check_differential(&quiver, a, &value)?;
                if differentials.iter().any(|(b, _)| *b == a) {
                    return Err(ctx.err(ctx.column_of(name), format!("differential of `{name}` given twice")));
                }
                differentials.push((a, value));
            }
            "module" => {
                let name = expect_word(&ctx, &words, 1, "a module name")?;
                block = Some(Block::Module(ModuleSpec {
                    name: name.to_string(),
                    elems: Vec::new(),
                    actions: Vec::new(),
                    diffs: Vec::new(),
                }));
            }
            "twisted" => {
                let name = expect_word(&ctx, &words, 1, "a name")?;
                block = Some(Block::Twisted(TwistedSpec { name: name.to_string(), entries: Vec::new(), twists: Vec::new() }));
            }
            other => return Err(ctx.err(ctx.column_of(other), format!("unknown directive `{other}`"))),
        }
    }
    if block.is_some() {
        return Err(Error::Syntax { line: text.lines().count(), column: 1, message: "unterminated block".into() });
    }
    if quiver.vertices.is_empty() {
        return Err(Error::Syntax { line: 1, column: 1, message: "no vertices declared".into() });
    }
    Ok(Document {
        presentation: DgAlgebraPresentation {
            field: field.unwrap_or(FieldTag::Rationals),
            quiver,
            relations,
            differentials,
        },
        modules,
        twisted,
    })
}

fn parse_module_line(
    ctx: &LineCtx,
    quiver: &GradedQuiver,
    m: &mut ModuleSpec,
    words: &[&str],
    content: &str,
) -> Result<()> {
    let elem_index = |m: &ModuleSpec, w: &str| -> Result<usize> {
        m.elems.iter().position(|e| e.0 == w).ok_or_else(|| ctx.err(ctx.column_of(w), format!("unknown element `{w}`")))
    };
    let elem_comb = |m: &ModuleSpec, s: &str| -> Result<Vec<(BigRational, usize)>> {
        let mut out = Vec::new();
        for (c, factors) in parse_lincomb(ctx, s)? {
            if factors.len() != 1 {
                return Err(ctx.err(factors[1].1, "module elements cannot be multiplied"));
            }
            out.push((c, elem_index(m, &factors[0].0)?));
        }
        Ok(out)
    };
    match words[0] {
        "elem" => {
            let name = expect_word(ctx, words, 1, "an element name")?;
            if m.elems.iter().any(|e| e.0 == name) {
                return Err(ctx.err(ctx.column_of(name), format!("duplicate element `{name}`")));
            }
            expect_keyword(ctx, words, 2, "deg")?;
            let deg = parse_int(ctx, expect_word(ctx, words, 3, "a degree")?)?;
            expect_keyword(ctx, words, 4, "at")?;
            let v = vertex(ctx, quiver, expect_word(ctx, words, 5, "a vertex")?)?;
            m.elems.push((name.to_string(), deg, v));
        }
        "act" => {
            let x = elem_index(m, expect_word(ctx, words, 1, "an element")?)?;
            let aw = expect_word(ctx, words, 2, "an arrow")?;
            let a = quiver.arrow_index(aw).ok_or_else(|| ctx.err(ctx.column_of(aw), format!("unknown arrow `{aw}`")))?;
            expect_keyword(ctx, words, 3, "=")?;
            let value = elem_comb(m, after(content, words[3]))?;
            m.actions.push((x, a, value));
        }
        "diff" => {
            let x = elem_index(m, expect_word(ctx, words, 1, "an element")?)?;
            expect_keyword(ctx, words, 2, "=")?;
            let value = elem_comb(m, after(content, words[2]))?;
            m.diffs.push((x, value));
        }
        other => return Err(ctx.err(ctx.column_of(other), format!("unknown module directive `{other}`"))),
    }
    Ok(())
}

fn parse_twisted_line(
    ctx: &LineCtx,
    quiver: &GradedQuiver,
    t: &mut TwistedSpec,
    words: &[&str],
    content: &str,
) -> Result<()> {
    match words[0] {
        "entry" => {
            let v = vertex(ctx, quiver, expect_word(ctx, words, 1, "a vertex")?)?;
            expect_keyword(ctx, words, 2, "shift")?;
            let r = parse_int(ctx, expect_word(ctx, words, 3, "a shift")?)?;
            t.entries.push((v, r));
        }
        "twist" => {
            let iw = expect_word(ctx, words, 1, "a row index")?;
            let jw = expect_word(ctx, words, 2, "a column index")?;
            let i = parse_int(ctx, iw)?;
            let j = parse_int(ctx, jw)?;
            let n = t.entries.len() as i64;
            if !(1 <= i && i < j && j <= n) {
                return Err(ctx.err(ctx.column_of(iw), "twist entries need 1 <= i < j <= number of entries"));
            }
            expect_keyword(ctx, words, 3, "=")?;
            let poly = parse_path_poly(ctx, quiver, after(content, words[3]))?;
            t.twists.push(((i - 1) as usize, (j - 1) as usize, poly));
        }
        other => return Err(ctx.err(ctx.column_of(other), format!("unknown twisted-complex directive `{other}`"))),
    }
    Ok(())
}

pub fn parse_field(w: &str) -> Option<FieldTag> {
    if w == "Q" {
        return Some(FieldTag::Rationals);
    }
    let p: u64 = w.strip_prefix('F')?.parse().ok()?;
    crate::exactlin::is_prime(p).then_some(FieldTag::Prime(p))
}

fn check_homogeneous(quiver: &GradedQuiver, poly: &PathPoly, what: &str) -> Result<()> {
    if let Some((_, first)) = poly.first() {
        let deg = quiver.path_degree(first);
        for (_, p) in poly {
            if p.source != first.source || p.target != first.target {
                return Err(Error::Presentation(format!("{what} mixes paths with different endpoints")));
            }
            if quiver.path_degree(p) != deg {
                return Err(Error::Presentation(format!("{what} is not homogeneous in degree")));
            }
        }
    }
    Ok(())
}

fn check_differential(quiver: &GradedQuiver, a: usize, value: &PathPoly) -> Result<()> {
    let arrow = &quiver.arrows[a];
    for (_, p) in value {
        if p.source != arrow.source || p.target != arrow.target {
            return Err(Error::Presentation(format!("differential of `{}` is not parallel to it", arrow.name)));
        }
        if quiver.path_degree(p) != arrow.degree + 1 {
            return Err(Error::Presentation(format!(
                "differential of `{}` must have degree {}",
                arrow.name,
                arrow.degree + 1
            )));
        }
    }
    Ok(())
}

fn write_poly(out: &mut String, quiver: &GradedQuiver, poly: &PathPoly) {
    if poly.is_empty() {
        out.push('0');
        return;
    }
    for (k, (c, p)) in poly.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            let _ = write!(out, "{}*", rational_to_string(&abs));
        }
        out.push_str(&quiver.path_label(p));
    }
}

/// Renders a presentation in the input grammar.
pub fn pretty_print(p: &DgAlgebraPresentation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field {}", p.field);
    let _ = writeln!(out, "vertices {}", p.quiver.vertices.join(" "));
    for a in &p.quiver.arrows {
        let _ = writeln!(
            out,
            "arrow {} : {} -> {} deg {}",
            a.name, p.quiver.vertices[a.source], p.quiver.vertices[a.target], a.degree
        );
    }
    for r in &p.relations {
        out.push_str("relation ");
        write_poly(&mut out, &p.quiver, r);
        out.push('\n');
    }
    for (a, v) in &p.differentials {
        let _ = write!(out, "differential {} = ", p.quiver.arrows[*a].name);
        write_poly(&mut out, &p.quiver, v);
        out.push('\n');
    }
    out
}
