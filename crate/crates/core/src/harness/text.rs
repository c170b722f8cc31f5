//! Plain-text and JSON input formats.
//!
//! Whitespace is ignored everywhere. Coefficients are exact rationals
//! written `n` or `n/d`.
//!
//! Exterior elements:
//!
//! ```text
//! element := ['-'] term (('+' | '-') term)*
//! term    := coeff | [coeff '*'] gen
//! gen     := ('x' | 'y') '{' [index (',' index)*] '}'
//! ```
//!
//! `x` gives an element of S(V[1]), `y` one of S(V*[-1]); a single element
//! may not mix them. Indices are 1-based and may repeat only to produce
//! zero. The braces list the generators in wedge order, so
//! `x{2,1}` equals `-x{1,2}`. Example: `3/2*x{1,3} - x{2}`.
//!
//! Polynomials:
//!
//! ```text
//! poly  := ['-'] mono (('+' | '-') mono)*
//! mono  := coeff | [coeff '*'] var ('*' var)*
//! var   := 'x' index ['^' power]
//! ```
//!
//! Example: `x1^2*x2 + 3`.
//!
//! Hochschild chains:
//!
//! ```text
//! chain := ['-'] cterm (('+' | '-') cterm)*
//! cterm := [coeff '*'] 'w[' poly (';' poly)* ']'
//! ```
//!
//! `w[p0; p1; p2]` is the word p0 ⊗ p1 ⊗ p2, expanded multilinearly.
//!
//! Atiyah tensors are JSON, see [`AtiyahTensor::from_json`]:
//! `{"m": 2, "c": [[k, i, j, num, den], ...], "symmetric": false}`.
//!
//! Lie bases are JSON, a list of square matrices whose entries are integers
//! or rational strings: `{"basis": [[[0, 1], [0, 0]], ...]}`.

use num_traits::One;
use serde::Deserialize;

use crate::atiyah::AtiyahTensor;
use crate::error::{Error, Result};
use crate::graded::{wedge_sign, Rational, SubsetLabel};
use crate::hochschild::{Chain, ChainWord};
use crate::lie::{LieBasis, SquareMatrix};
use crate::odd::{ExtElement, Side};
use crate::poly::Poly;

struct Cursor<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, chars: src.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn err(&self, what: &str) -> Error {
        let found = self.peek().map_or("end of input".to_string(), |c| format!("'{c}'"));
        Error::parse(format!("{what} at position {} in {:?}, found {found}", self.pos, self.src))
    }

    fn done(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn usize(&mut self, what: &str) -> Result<usize> {
        self.digits().and_then(|d| d.parse().ok()).ok_or_else(|| self.err(what))
    }

    fn coeff(&mut self) -> Result<Option<Rational>> {
        let Some(n) = self.digits() else { return Ok(None) };
        let mut text = n;
        if self.eat('/') {
            let d = self.digits().ok_or_else(|| self.err("expected a denominator"))?;
            if d.trim_start_matches('0').is_empty() {
                return Err(self.err("zero denominator"));
            }
            text = format!("{text}/{d}");
        }
        text.parse().map(Some).map_err(|_| self.err("bad rational"))
    }

    /// Leading sign of the first term, or the separator between terms.
    fn sign(&mut self, first: bool) -> Result<Option<Rational>> {
        if self.eat('+') {
            Ok(Some(Rational::one()))
        } else if self.eat('-') {
            Ok(Some(-Rational::one()))
        } else if first {
            Ok(Some(Rational::one()))
        } else if self.done() {
            Ok(None)
        } else {
            Err(self.err("expected '+' or '-'"))
        }
    }

    /// Parses `sign term sign term ...`, feeding each signed term to `f`.
    fn sum(&mut self, mut f: impl FnMut(&mut Self, Rational) -> Result<()>) -> Result<()> {
        let mut first = true;
        while let Some(s) = self.sign(first)? {
            first = false;
            f(self, s)?;
        }
        if first {
            return Err(self.err("empty expression"));
        }
        Ok(())
    }
}

/// Parses an exterior element in `m` generators. `m = None` takes the
/// largest index that occurs.
pub fn parse_ext(text: &str, m: Option<usize>) -> Result<ExtElement> {
    let mut cur = Cursor::new(text);
    let mut side = None;
    let mut terms: Vec<(Vec<usize>, Rational)> = Vec::new();
    cur.sum(|cur, sign| {
        let c = cur.coeff()?;
        let has_gen = c.is_none() || cur.eat('*');
        let mut idx = Vec::new();
        if has_gen {
            let s = match cur.peek() {
                Some('x') => Side::V,
                Some('y') => Side::Dual,
                _ => return Err(cur.err("expected x{...} or y{...}")),
            };
            cur.pos += 1;
            if side.is_some_and(|old| old != s) {
                return Err(cur.err("x and y generators mixed"));
            }
            side = Some(s);
            cur.expect('{')?;
            if !cur.eat('}') {
                loop {
                    let i = cur.usize("expected an index")?;
                    if i == 0 {
                        return Err(cur.err("indices start at 1"));
                    }
                    idx.push(i);
                    if cur.eat('}') {
                        break;
                    }
                    cur.expect(',')?;
                }
            }
        }
        terms.push((idx, sign * c.unwrap_or_else(Rational::one)));
        Ok(())
    })?;
    let top = terms.iter().flat_map(|(i, _)| i.iter().copied()).max().unwrap_or(0);
    let m = m.unwrap_or(top.max(1));
    if top > m {
        return Err(Error::parse(format!("index {top} exceeds dimension {m} in {text:?}")));
    }
    let mut out = ExtElement::zero(side.unwrap_or(Side::V), m);
    for (idx, c) in terms {
        // build the wedge left to right to get the sign of the ordering
        let mut label = SubsetLabel::EMPTY;
        let mut coeff = c;
        for i in idx {
            let g = SubsetLabel::from_indices(&[i], m)?;
            coeff *= Rational::from_integer(wedge_sign(label, g).into());
            label = SubsetLabel(label.0 | g.0);
        }
        out.add_term(label, coeff);
    }
    Ok(out)
}

fn parse_poly_at(cur: &mut Cursor, nvars: usize, stop: &[char]) -> Result<Poly> {
    let mut out = Poly::zero(nvars);
    let mut first = true;
    loop {
        let sign = if cur.eat('+') {
            Rational::one()
        } else if cur.eat('-') {
            -Rational::one()
        } else if first {
            Rational::one()
        } else if cur.done() || cur.peek().is_some_and(|c| stop.contains(&c)) {
            break;
        } else {
            return Err(cur.err("expected '+' or '-'"));
        };
        first = false;
        let c = cur.coeff()?;
        let mut exps = vec![0u32; nvars];
        if c.is_none() || cur.eat('*') {
            loop {
                cur.expect('x')?;
                let i = cur.usize("expected a variable index")?;
                if i == 0 || i > nvars {
                    return Err(cur.err(&format!("variable x{i} outside x1..x{nvars}")));
                }
                let p = if cur.eat('^') { cur.usize("expected a power")? as u32 } else { 1 };
                exps[i - 1] += p;
                if !cur.eat('*') {
                    break;
                }
            }
        }
        out.add_term(exps, sign * c.unwrap_or_else(Rational::one));
    }
    Ok(out)
}

/// Highest `xN` index in a polynomial or chain literal.
fn max_var(text: &str) -> usize {
    let b = text.as_bytes();
    let mut best = 0;
    for (k, _) in text.match_indices('x') {
        let digits: String = b[k + 1..].iter().take_while(|c| c.is_ascii_digit()).map(|&c| c as char).collect();
        best = best.max(digits.parse().unwrap_or(0));
    }
    best
}

/// Parses a polynomial in `nvars` variables (`None`: the largest index used).
pub fn parse_poly(text: &str, nvars: Option<usize>) -> Result<Poly> {
    let n = nvars.unwrap_or(max_var(text).max(1));
    let mut cur = Cursor::new(text);
    let p = parse_poly_at(&mut cur, n, &[])?;
    if !cur.done() {
        return Err(cur.err("trailing input"));
    }
    Ok(p)
}

/// Parses a Hochschild chain in `nvars` variables (`None`: the largest
/// index used).
pub fn parse_chain(text: &str, nvars: Option<usize>) -> Result<Chain> {
    let n = nvars.unwrap_or(max_var(text).max(1));
    let mut cur = Cursor::new(text);
    let mut out = Chain::zero(n);
    cur.sum(|cur, sign| {
        let c = cur.coeff()?;
        if c.is_some() {
            cur.expect('*')?;
        }
        cur.expect('w')?;
        cur.expect('[')?;
        let mut factors = vec![parse_poly_at(cur, n, &[';', ']'])?];
        while cur.eat(';') {
            factors.push(parse_poly_at(cur, n, &[';', ']'])?);
        }
        cur.expect(']')?;
        let word = Chain::from_word(&ChainWord::new(factors)?);
        out = out.add(&word.scale(&(sign * c.unwrap_or_else(Rational::one))));
        Ok(())
    })?;
    Ok(out)
}

/// Parses an Atiyah tensor file.
pub fn parse_atiyah(json: &str) -> Result<AtiyahTensor> {
    AtiyahTensor::from_json(json)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisFile {
    basis: Vec<Vec<Vec<Entry>>>,
}

/// Parses a Lie basis file.
pub fn parse_lie_basis(json: &str) -> Result<LieBasis> {
    let file: BasisFile = serde_json::from_str(json).map_err(|e| Error::parse(format!("Lie basis: {e}")))?;
    let mut mats = Vec::new();
    for rows in file.basis {
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|e| match e {
                        Entry::Int(n) => Ok(Rational::from_integer(n.into())),
                        Entry::Text(s) => {
                            let mut cur = Cursor::new(&s);
                            let neg = cur.eat('-');
                            match cur.coeff()? {
                                Some(q) if cur.done() => Ok(if neg { -q } else { q }),
                                _ => Err(Error::parse(format!("bad matrix entry {s:?}"))),
                            }
                        }
                    })
                    .collect::<Result<Vec<Rational>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        mats.push(SquareMatrix::from_rows(rows)?);
    }
    LieBasis::new(mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{q, qi};

    #[test]
    fn ext_syntax() {
        let e = parse_ext("3/2*x{1,3} - x{2}", None).unwrap();
        assert_eq!(e.to_string(), "-x{2} + 3/2*x{1,3}");
        assert_eq!(parse_ext("x{2,1}", Some(2)).unwrap(), parse_ext("-x{1,2}", Some(2)).unwrap());
        assert!(parse_ext("x{1,1}", None).unwrap().is_zero());
        assert_eq!(parse_ext(" 2 + y{} ", Some(3)).unwrap().coeff(SubsetLabel::EMPTY), qi(3));
        for bad in ["", "x{1", "x{0}", "x{1} y{2}", "x{1} + y{2}", "1/0", "x{5}", "3*"] {
            let m = if bad == "x{5}" { Some(4) } else { None };
            assert!(matches!(parse_ext(bad, m), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn poly_and_chain_syntax() {
        let p = parse_poly("x1^2*x2 + 3", None).unwrap();
        assert_eq!(p.to_string(), "x1^2*x2 + 3");
        assert_eq!(parse_poly("-1/2*x1*x1", Some(2)).unwrap().to_string(), "-1/2*x1^2");
        let c = parse_chain("w[1; x1 + x2] - 2*w[x1; x2]", None).unwrap();
        assert_eq!(c.len(), 3);
        assert!(parse_chain("w[x1; x2", None).is_err());
        assert!(parse_chain("w[x3]", Some(2)).is_err());
    }

    #[test]
    fn lie_basis_json() {
        let b = parse_lie_basis(r#"{"basis": [[[0,1,0],[0,0,0],[0,0,0]], [[0,0,"1/2"],[0,0,0],[0,0,0]], [[0,0,0],[0,0,1],[0,0,0]]]}"#)
            .unwrap();
        assert_eq!(b.dim(), 3);
        assert_eq!(b.elements()[1].get(0, 2), &q(1, 2));
        assert!(parse_lie_basis(r#"{"basis": [[[0,"x"],[0,0]]]}"#).is_err());
        assert!(parse_lie_basis("[]").is_err());
    }
}
