//! Line-oriented text formats.
//!
//! Every file is a sequence of `\n`-terminated lines with single spaces
//! between fields and no trailing whitespace. Matrix, cover and set indices
//! are 0-based; subset-family elements are 1-based subsets of `[k]`.
//!
//! ```text
//! 3 3                     COVER 3 3 2             FAMILY-SETS 4 2 3
//! 011                     R 0 C 1,2               1,2
//! 101                     R 1,2 C 0               1,3
//! 110                                             2,3
//!
//! FAMILY 3 3 2            SPANOID 3 2             SETS 2
//! COVER 3 3 1             S: 0,1 -> 2             0,1
//! R 0 C 1,2               S: - -> 0               -
//! COVER 3 3 1
//! R 1,2 C 0               MATSPANOID c2.mat
//! ```
//!
//! A certificate is a cover followed by `LOWER kind=<kind> value=<v>` lines.

use std::fmt::Write as _;

use kronrank::bounds::LowerBound;
use kronrank::crown::SubsetFamily;
use kronrank::spanoid::RuleSpanoid;
use kronrank::{BoolMatrix, Cover, MatrixFamily, Rectangle};
use thiserror::Error;

/// A format violation at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

type Parsed<T> = Result<T, ParseError>;

fn fail<T>(line: usize, col: usize, msg: impl Into<String>) -> Parsed<T> {
    Err(ParseError { line, col, msg: msg.into() })
}

struct Reader<'a> {
    lines: Vec<&'a str>,
    next: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Parsed<Self> {
        let mut lines: Vec<&str> = text.split('\n').collect();
        let last = lines.pop().unwrap_or_default();
        if !last.is_empty() {
            return fail(lines.len() + 1, last.len() + 1, "missing final newline");
        }
        for (n, line) in lines.iter().enumerate() {
            if let Some(c) = line.find('\r') {
                return fail(n + 1, c + 1, "carriage return");
            }
            if line.ends_with([' ', '\t']) {
                return fail(n + 1, line.trim_end().len() + 1, "trailing whitespace");
            }
        }
        Ok(Reader { lines, next: 0 })
    }

    /// The next line and its 1-based number.
    fn line(&mut self, what: &str) -> Parsed<(usize, &'a str)> {
        match self.lines.get(self.next) {
            Some(&l) => {
                self.next += 1;
                Ok((self.next, l))
            }
            None => fail(self.next + 1, 1, format!("expected {what}, found end of input")),
        }
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.next).copied()
    }

    fn finish(self) -> Parsed<()> {
        if self.next < self.lines.len() {
            return fail(self.next + 1, 1, "unexpected extra line");
        }
        Ok(())
    }

    /// `KEYWORD a b c` with exactly `names.len()` numeric fields.
    fn header(&mut self, keyword: &str, names: &[&str]) -> Parsed<(usize, Vec<usize>)> {
        let (n, line) = self.line(&format!("{keyword} header"))?;
        let toks = tokens(n, line)?;
        let fields = if keyword.is_empty() {
            &toks[..]
        } else {
            if toks[0].1 != keyword {
                return fail(n, 1, format!("expected `{keyword}`"));
            }
            &toks[1..]
        };
        if fields.len() != names.len() {
            let col = fields.get(names.len()).map_or(line.len() + 1, |t| t.0);
            return fail(n, col, format!("expected {} fields: {}", names.len(), names.join(" ")));
        }
        let values = fields.iter().map(|&(c, t)| number(n, c, t)).collect::<Parsed<_>>()?;
        Ok((n, values))
    }
}

/// Fields separated by single spaces, with their 1-based columns.
fn tokens(n: usize, line: &str) -> Parsed<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    let mut col = 1;
    for t in line.split(' ') {
        if t.is_empty() {
            return fail(n, col, "empty field");
        }
        out.push((col, t));
        col += t.len() + 1;
    }
    Ok(out)
}

fn number(n: usize, col: usize, t: &str) -> Parsed<usize> {
    if let Some(off) = t.bytes().position(|b| !b.is_ascii_digit()) {
        return fail(n, col + off, format!("expected a decimal number, found `{t}`"));
    }
    t.parse().or_else(|_| fail(n, col, format!("number `{t}` out of range")))
}

/// Comma-separated numbers, or `-` for the empty list. With `bound`, every
/// entry must lie in `lo..bound`; with `sorted`, entries must increase.
fn index_list(n: usize, col: usize, t: &str, lo: usize, bound: Option<usize>, sorted: bool) -> Parsed<Vec<usize>> {
    if t == "-" {
        return Ok(Vec::new());
    }
    let mut out: Vec<usize> = Vec::new();
    let mut c = col;
    for piece in t.split(',') {
        if piece.is_empty() {
            return fail(n, c, "empty list entry");
        }
        let v = number(n, c, piece)?;
        if v < lo || bound.is_some_and(|b| v >= b) {
            let hi = bound.map_or(String::from("∞"), |b| (b - 1).to_string());
            return fail(n, c, format!("{v} outside {lo}..={hi}"));
        }
        if sorted && out.last().is_some_and(|&p| p >= v) {
            return fail(n, c, "entries must be strictly increasing");
        }
        out.push(v);
        c += piece.len() + 1;
    }
    Ok(out)
}

fn join(v: &[usize]) -> String {
    if v.is_empty() {
        return String::from("-");
    }
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

pub fn read_matrix(text: &str) -> Parsed<BoolMatrix> {
    let mut r = Reader::new(text)?;
    let (_, dims) = r.header("", &["rows", "cols"])?;
    let (rows, cols) = (dims[0], dims[1]);
    let mut bits = Vec::with_capacity(rows.min(1 << 16));
    for _ in 0..rows {
        let (n, line) = r.line("matrix row")?;
        if let Some(off) = line.bytes().position(|b| b != b'0' && b != b'1') {
            return fail(n, off + 1, "expected 0 or 1");
        }
        if line.len() != cols {
            return fail(n, line.len().min(cols) + 1, format!("expected {cols} entries, found {}", line.len()));
        }
        bits.push(line.bytes().map(|b| b - b'0').collect::<Vec<u8>>());
    }
    r.finish()?;
    Ok(BoolMatrix::from_fn(rows, cols, |i, j| bits[i][j] == 1))
}

pub fn write_matrix(m: &BoolMatrix) -> String {
    let mut s = String::with_capacity(m.rows() * (m.cols() + 1) + 16);
    let _ = writeln!(s, "{} {}", m.rows(), m.cols());
    for i in 0..m.rows() {
        s.extend((0..m.cols()).map(|j| if m.get(i, j) { '1' } else { '0' }));
        s.push('\n');
    }
    s
}

fn read_cover_block(r: &mut Reader<'_>) -> Parsed<Cover> {
    let (_, h) = r.header("COVER", &["rows", "cols", "s"])?;
    let (rows, cols, s) = (h[0], h[1], h[2]);
    let mut rects = Vec::with_capacity(s.min(1 << 20));
    for _ in 0..s {
        let (n, line) = r.line("rectangle")?;
        let toks = tokens(n, line)?;
        if toks.len() != 4 || toks[0].1 != "R" || toks[2].1 != "C" {
            return fail(n, 1, "expected `R <rows> C <cols>`");
        }
        let ri = index_list(n, toks[1].0, toks[1].1, 0, Some(rows), true)?;
        let ci = index_list(n, toks[3].0, toks[3].1, 0, Some(cols), true)?;
        if ri.is_empty() || ci.is_empty() {
            let col = if ri.is_empty() { toks[1].0 } else { toks[3].0 };
            return fail(n, col, "rectangle sides must be nonempty");
        }
        rects.push(Rectangle::new(ri, ci).expect("validated"));
    }
    Ok(Cover::new(rows, cols, rects).expect("validated"))
}

fn write_cover_block(s: &mut String, c: &Cover) {
    let (rows, cols) = c.dims();
    let _ = writeln!(s, "COVER {rows} {cols} {}", c.len());
    for r in c.rects() {
        let _ = writeln!(s, "R {} C {}", join(r.rows()), join(r.cols()));
    }
}

pub fn read_cover(text: &str) -> Parsed<Cover> {
    let mut r = Reader::new(text)?;
    let c = read_cover_block(&mut r)?;
    r.finish()?;
    Ok(c)
}

pub fn write_cover(c: &Cover) -> String {
    let mut s = String::new();
    write_cover_block(&mut s, c);
    s
}

/// Members are the Boolean sums of their `COVER` blocks.
pub fn read_family(text: &str) -> Parsed<MatrixFamily> {
    let mut r = Reader::new(text)?;
    let (_, h) = r.header("FAMILY", &["rows", "cols", "s"])?;
    let (rows, cols, s) = (h[0], h[1], h[2]);
    let mut covers = Vec::with_capacity(s.min(1 << 16));
    for _ in 0..s {
        let n = r.next + 1;
        let c = read_cover_block(&mut r)?;
        if c.dims() != (rows, cols) {
            return fail(n, 7, format!("member is {}x{}, family is {rows}x{cols}", c.dims().0, c.dims().1));
        }
        covers.push(c);
    }
    r.finish()?;
    Ok(MatrixFamily::from_covers(rows, cols, covers).expect("dims checked"))
}

/// Members without a stored decomposition are written by rows.
pub fn write_family(f: &MatrixFamily) -> String {
    let (rows, cols) = f.dims();
    let mut s = String::new();
    let _ = writeln!(s, "FAMILY {rows} {cols} {}", f.len());
    for t in 0..f.len() {
        match f.decomposition(t) {
            Some(c) => write_cover_block(&mut s, c),
            None => write_cover_block(&mut s, &Cover::row_decomposition(f.member(t))),
        }
    }
    s
}

pub fn read_subset_family(text: &str) -> Parsed<SubsetFamily> {
    let mut r = Reader::new(text)?;
    let (hn, h) = r.header("FAMILY-SETS", &["k", "ell", "n"])?;
    let (k, ell, count) = (h[0], h[1], h[2]);
    if k > 63 {
        return fail(hn, 13, "ground sets above 63 elements are not supported");
    }
    let mut sets = Vec::with_capacity(count.min(1 << 20));
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..count {
        let (n, line) = r.line("subset")?;
        let s = index_list(n, 1, line, 1, Some(k + 1), true)?;
        if s.len() != ell {
            return fail(n, 1, format!("expected {ell} elements, found {}", s.len()));
        }
        if !seen.insert(s.clone()) {
            return fail(n, 1, "repeated subset");
        }
        sets.push(s);
    }
    r.finish()?;
    Ok(SubsetFamily::from_elements(k, ell, &sets).expect("validated"))
}

pub fn write_subset_family(f: &SubsetFamily) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "FAMILY-SETS {} {} {}", f.k(), f.ell(), f.len());
    for i in 0..f.len() {
        let _ = writeln!(s, "{}", join(&f.elements(i)));
    }
    s
}

/// A spanoid file: explicit rules, or a reference to a matrix file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanoidSource {
    Rules(RuleSpanoid),
    Matrix(String),
}

pub fn read_spanoid(text: &str) -> Parsed<SpanoidSource> {
    let mut r = Reader::new(text)?;
    if let Some(rest) = r.peek().and_then(|l| l.strip_prefix("MATSPANOID ")) {
        if rest.is_empty() {
            return fail(1, 12, "missing matrix file");
        }
        r.line("MATSPANOID")?;
        r.finish()?;
        return Ok(SpanoidSource::Matrix(rest.to_string()));
    }
    let (_, h) = r.header("SPANOID", &["u", "r"])?;
    let (u, count) = (h[0], h[1]);
    let mut rules = Vec::with_capacity(count.min(1 << 20));
    for _ in 0..count {
        let (n, line) = r.line("rule")?;
        let toks = tokens(n, line)?;
        if toks.len() != 4 || toks[0].1 != "S:" || toks[2].1 != "->" {
            return fail(n, 1, "expected `S: <premises> -> <element>`");
        }
        let premises = index_list(n, toks[1].0, toks[1].1, 0, Some(u), true)?;
        let target = index_list(n, toks[3].0, toks[3].1, 0, Some(u), true)?;
        if target.len() != 1 {
            return fail(n, toks[3].0, "expected a single element");
        }
        rules.push((premises, target[0]));
    }
    r.finish()?;
    Ok(SpanoidSource::Rules(RuleSpanoid::new(u, rules).expect("validated")))
}

pub fn write_spanoid(s: &SpanoidSource) -> String {
    match s {
        SpanoidSource::Matrix(path) => format!("MATSPANOID {path}\n"),
        SpanoidSource::Rules(sp) => {
            use kronrank::spanoid::Spanoid;
            let mut out = String::new();
            let _ = writeln!(out, "SPANOID {} {}", sp.universe_size(), sp.rules().len());
            for (premises, j) in sp.rules() {
                let _ = writeln!(out, "S: {} -> {j}", join(premises));
            }
            out
        }
    }
}

/// `SETS t` followed by `t` lists of 0-based elements; order is kept.
pub fn read_sets(text: &str) -> Parsed<Vec<Vec<usize>>> {
    let mut r = Reader::new(text)?;
    let (_, h) = r.header("SETS", &["t"])?;
    let mut sets = Vec::with_capacity(h[0].min(1 << 20));
    for _ in 0..h[0] {
        let (n, line) = r.line("set")?;
        sets.push(index_list(n, 1, line, 0, None, true)?);
    }
    r.finish()?;
    Ok(sets)
}

pub fn write_sets(sets: &[Vec<usize>]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "SETS {}", sets.len());
    for set in sets {
        let _ = writeln!(s, "{}", join(set));
    }
    s
}

pub fn lower_line(b: &LowerBound) -> String {
    format!("LOWER kind={} value={}\n", b.kind(), b.value())
}

pub fn write_certificate(upper: &Cover, lower: &[LowerBound]) -> String {
    let mut s = write_cover(upper);
    lower.iter().for_each(|b| s.push_str(&lower_line(b)));
    s
}

/// The cover and the `(kind, value)` of each `LOWER` line.
pub fn read_certificate(text: &str) -> Parsed<(Cover, Vec<(String, usize)>)> {
    let mut r = Reader::new(text)?;
    let c = read_cover_block(&mut r)?;
    let mut lower = Vec::new();
    while r.peek().is_some() {
        let (n, line) = r.line("LOWER line")?;
        let toks = tokens(n, line)?;
        if toks.len() != 3 || toks[0].1 != "LOWER" {
            return fail(n, 1, "expected `LOWER kind=<kind> value=<v>`");
        }
        let kind = match toks[1].1.strip_prefix("kind=") {
            Some(k @ ("isolation" | "mu" | "search")) => k.to_string(),
            _ => return fail(n, toks[1].0, "expected kind=isolation, kind=mu or kind=search"),
        };
        let value = match toks[2].1.strip_prefix("value=") {
            Some(v) => number(n, toks[2].0 + 6, v)?,
            None => return fail(n, toks[2].0, "expected value=<v>"),
        };
        lower.push((kind, value));
    }
    r.finish()?;
    Ok((c, lower))
}

#[cfg(test)]
mod tests {
    use super::*;
    use kronrank::crown::{c4_triple, canonical_family, crown_matrix};

    #[test]
    fn matrix_roundtrip() {
        let text = "2 3\n010\n111\n";
        let m = read_matrix(text).unwrap();
        assert_eq!(write_matrix(&m), text);
        assert_eq!(read_matrix("0 0\n").unwrap().dims(), (0, 0));
    }

    #[test]
    fn matrix_errors_have_positions() {
        let e = read_matrix("2 2\n01\n0x\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 2));
        let e = read_matrix("2 2\n01\n011\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 3));
        let e = read_matrix("2 2\n01\n01").unwrap_err();
        assert_eq!((e.line, e.col), (3, 3));
        let e = read_matrix("2 2 \n01\n01\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 4));
        let e = read_matrix("2 2\n01\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 1));
        let e = read_matrix("2 +2\n01\n01\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 3));
        let e = read_matrix("1 2\n01\n10\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn cover_roundtrip_and_errors() {
        let c = canonical_family(4, 6).unwrap().cover();
        let text = write_cover(&c);
        assert_eq!(read_cover(&text).unwrap(), c);
        assert_eq!(write_cover(&read_cover(&text).unwrap()), text);
        let e = read_cover("COVER 3 3 1\nR 0,3 C 1\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 5));
        let e = read_cover("COVER 3 3 1\nR 1,0 C 1\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 5));
        let e = read_cover("COVER 3 3 1\nR - C 1\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
        let e = read_cover("COVER 3 3 2\nR 0 C 1\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 1));
        let e = read_cover("COVR 3 3 0\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 1));
    }

    #[test]
    fn family_roundtrip() {
        let f = c4_triple();
        let text = write_family(&f);
        let back = read_family(&text).unwrap();
        assert_eq!(back.members(), f.members());
        assert_eq!(write_family(&back), text);
        let e = read_family("FAMILY 2 2 1\nCOVER 2 3 0\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn subset_family_roundtrip() {
        let f = canonical_family(5, 10).unwrap();
        let text = write_subset_family(&f);
        assert!(text.starts_with("FAMILY-SETS 5 3 10\n1,2,3\n"));
        assert_eq!(read_subset_family(&text).unwrap(), f);
        let e = read_subset_family("FAMILY-SETS 3 2 2\n1,2\n1,2\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = read_subset_family("FAMILY-SETS 3 2 1\n1,4\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
    }

    #[test]
    fn spanoid_and_sets_roundtrip() {
        let text = "SPANOID 3 2\nS: 0,1 -> 2\nS: - -> 0\n";
        let s = read_spanoid(text).unwrap();
        assert_eq!(write_spanoid(&s), text);
        assert_eq!(read_spanoid("MATSPANOID c2.mat\n").unwrap(), SpanoidSource::Matrix("c2.mat".into()));
        let e = read_spanoid("SPANOID 3 1\nS: 0,3 -> 2\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 6));
        let sets = vec![vec![0, 2], vec![], vec![1]];
        assert_eq!(read_sets(&write_sets(&sets)).unwrap(), sets);
    }

    #[test]
    fn certificate_roundtrip() {
        let c = Cover::row_decomposition(&crown_matrix(3));
        let text = write_certificate(&c, &[LowerBound::Isolation(vec![(0, 1), (1, 2), (2, 0)]), LowerBound::Search(3)]);
        assert!(text.ends_with("LOWER kind=isolation value=3\nLOWER kind=search value=3\n"));
        let (back, lower) = read_certificate(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(lower, vec![("isolation".into(), 3), ("search".into(), 3)]);
    }
}
