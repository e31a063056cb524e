//! Text syntax for algebra elements and product states.
//!
//! Elements:
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := [scalar '*'] product
//! product := chain ('*' chain)*
//! chain   := atom ('(x)' atom)*
//! atom    := 'E[' nat '](' nat ',' nat ')' | 'I[' nat ']' | '(' expr ')'
//! scalar  := real | '(' real ',' real ')'
//! ```
//!
//! `E[n](j,k)` is the 1-based matrix unit `E^{(n)}_{jk}`, `(x)` the tensor
//! product, `I[n]` the identity of `M_n`, and `*` between chains the algebra
//! product. Whitespace is ignored.
//!
//! States are `;`-separated factors, each `diag(p_1,…,p_k)`, an inline JSON
//! matrix, or `file:PATH` naming a JSON array of matrices. Matrices are arrays
//! of rows; entries are numbers, `[re, im]` pairs or `{"re":…,"im":…}`.

use std::fmt::{self, Write as _};

use serde_json::Value;

use crate::dense::DenseMatrix;
use crate::element::{AlgebraElement, Complex64};
use crate::error::{Axis, Error, Result};
use crate::signature::{MatrixUnitIndex, Signature};
use crate::states::{DensityFactor, ProductState};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    E,
    I,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Minus,
    Star,
    Tensor,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) => write!(f, "number `{s}`"),
            Tok::E => f.write_str("`E`"),
            Tok::I => f.write_str("`I`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Tensor => f.write_str("`(x)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn parse_err(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut positions = Vec::with_capacity(chars.len() + 1);
    let (mut line, mut column) = (1, 1);
    for &c in &chars {
        positions.push(Pos { line, column });
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    positions.push(Pos { line, column });

    let skip_ws = |mut i: usize| {
        while i < chars.len() && chars[i].is_whitespace() {
            i += 1;
        }
        i
    };

    let mut toks = Vec::new();
    let mut i = 0;
    loop {
        i = skip_ws(i);
        let pos = positions[i];
        let Some(&c) = chars.get(i) else {
            toks.push((Tok::End, pos));
            return Ok(toks);
        };
        let tok = match c {
            '(' => {
                // `(x)` with optional inner whitespace is the tensor operator
                let a = skip_ws(i + 1);
                if matches!(chars.get(a), Some('x') | Some('X')) {
                    let b = skip_ws(a + 1);
                    if chars.get(b) == Some(&')') {
                        i = b + 1;
                        toks.push((Tok::Tensor, pos));
                        continue;
                    }
                }
                Tok::LParen
            }
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            'E' => Tok::E,
            'I' => Tok::I,
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                toks.push((Tok::Num(chars[start..i].iter().collect()), pos));
                continue;
            }
            other => return Err(parse_err(pos, format!("unexpected character `{other}`"))),
        };
        toks.push((tok, pos));
        i += 1;
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        let pos = self.pos();
        let got = self.bump();
        if got == want {
            Ok(())
        } else {
            Err(parse_err(pos, format!("expected {want}, found {got}")))
        }
    }

    fn nat(&mut self) -> Result<usize> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(s) => s
                .parse::<usize>()
                .map_err(|_| parse_err(pos, format!("expected a natural number, found `{s}`"))),
            other => Err(parse_err(
                pos,
                format!("expected a natural number, found {other}"),
            )),
        }
    }

    fn real(&mut self) -> Result<f64> {
        let pos = self.pos();
        let sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -1.0
            }
            Tok::Plus => {
                self.bump();
                1.0
            }
            _ => 1.0,
        };
        match self.bump() {
            Tok::Num(s) => s
                .parse::<f64>()
                .map(|v| sign * v)
                .map_err(|_| parse_err(pos, format!("malformed number `{s}`"))),
            other => Err(parse_err(pos, format!("expected a number, found {other}"))),
        }
    }

    /// `real '*'` or `'(' real ',' real ')' '*'`; restores the position on failure.
    fn try_scalar(&mut self) -> Option<Complex64> {
        let save = self.at;
        let parsed = (|| -> Result<Complex64> {
            let z = if *self.peek() == Tok::LParen {
                self.bump();
                let re = self.real()?;
                self.expect(Tok::Comma)?;
                let im = self.real()?;
                self.expect(Tok::RParen)?;
                Complex64::new(re, im)
            } else {
                Complex64::new(self.real()?, 0.0)
            };
            self.expect(Tok::Star)?;
            Ok(z)
        })();
        match parsed {
            Ok(z) => Some(z),
            Err(_) => {
                self.at = save;
                None
            }
        }
    }

    fn expr(&mut self) -> Result<AlgebraElement> {
        let mut sign = 1.0;
        match self.peek() {
            Tok::Minus => {
                self.bump();
                sign = -1.0;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        let start = self.pos();
        let mut acc = self.term()?.scale(Complex64::new(sign, 0.0));
        loop {
            let s = match self.peek() {
                Tok::Plus => 1.0,
                Tok::Minus => -1.0,
                _ => return Ok(acc),
            };
            self.bump();
            let pos = self.pos();
            let t = self.term()?;
            if t.signature() != acc.signature() {
                return Err(parse_err(
                    pos,
                    format!(
                        "inconsistent signatures: {} (term at line {}, column {}) vs {}",
                        acc.signature(),
                        start.line,
                        start.column,
                        t.signature()
                    ),
                ));
            }
            acc = acc.add(&t.scale(Complex64::new(s, 0.0)))?;
        }
    }

    fn term(&mut self) -> Result<AlgebraElement> {
        let scalar = self.try_scalar();
        let mut acc = self.chain()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let pos = self.pos();
            let rhs = self.chain()?;
            if rhs.signature() != acc.signature() {
                return Err(parse_err(
                    pos,
                    format!(
                        "inconsistent signatures in product: {} vs {}",
                        acc.signature(),
                        rhs.signature()
                    ),
                ));
            }
            acc = acc.mul(&rhs)?;
        }
        Ok(match scalar {
            Some(z) => acc.scale(z),
            None => acc,
        })
    }

    fn chain(&mut self) -> Result<AlgebraElement> {
        let mut acc = self.atom(0)?;
        while *self.peek() == Tok::Tensor {
            self.bump();
            let next = self.atom(acc.signature().level())?;
            acc = acc.tensor(&next);
        }
        Ok(acc)
    }

    /// `offset` is the number of tensor slots to the left, for error positions.
    fn atom(&mut self, offset: usize) -> Result<AlgebraElement> {
        let pos = self.pos();
        match self.bump() {
            Tok::E => {
                self.expect(Tok::LBracket)?;
                let dim_pos = self.pos();
                let n = self.nat()?;
                self.expect(Tok::RBracket)?;
                self.expect(Tok::LParen)?;
                let j = self.nat()?;
                self.expect(Tok::Comma)?;
                let k = self.nat()?;
                self.expect(Tok::RParen)?;
                let sig = Signature::new(vec![n]).map_err(|e| parse_err(dim_pos, e.to_string()))?;
                for (axis, v) in [(Axis::Row, j), (Axis::Col, k)] {
                    if v == 0 || v > n {
                        return Err(Error::IndexOutOfRange {
                            axis,
                            position: offset + 1,
                            index: v,
                            dim: n,
                        });
                    }
                }
                AlgebraElement::matrix_unit(sig, MatrixUnitIndex::one_based(&[j], &[k])?)
            }
            Tok::I => {
                self.expect(Tok::LBracket)?;
                let dim_pos = self.pos();
                let n = self.nat()?;
                self.expect(Tok::RBracket)?;
                let sig = Signature::new(vec![n]).map_err(|e| parse_err(dim_pos, e.to_string()))?;
                Ok(AlgebraElement::identity(sig))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(parse_err(
                pos,
                format!("expected `E[`, `I[` or `(`, found {other}"),
            )),
        }
    }
}

/// Parses an element expression into canonical form.
pub fn parse_element(text: &str) -> Result<AlgebraElement> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let x = p.expr()?;
    if *p.peek() != Tok::End {
        let pos = p.pos();
        return Err(parse_err(pos, format!("unexpected {}", p.peek())));
    }
    Ok(x)
}

fn write_unit(out: &mut String, sig: &Signature, idx: &MatrixUnitIndex) {
    for (slot, &d) in sig.dims().iter().enumerate() {
        if slot > 0 {
            out.push_str(" (x) ");
        }
        let _ = write!(
            out,
            "E[{d}]({},{})",
            idx.rows()[slot] + 1,
            idx.cols()[slot] + 1
        );
    }
}

/// Prints `x` in the grammar accepted by [`parse_element`], terms in index
/// order with round-trip exact coefficients. The zero element prints as a
/// zero multiple of the first unit so that its signature survives.
pub fn format_element(x: &AlgebraElement) -> String {
    let mut out = String::new();
    if x.is_zero() {
        let zeros = vec![0; x.signature().level()];
        out.push_str("(0.0,0.0)*");
        write_unit(
            &mut out,
            x.signature(),
            &MatrixUnitIndex::zero_based(zeros.clone(), zeros),
        );
        return out;
    }
    for (i, (idx, c)) in x.terms().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        let _ = write!(out, "({:?},{:?})*", c.re, c.im);
        write_unit(&mut out, x.signature(), idx);
    }
    out
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_element(self))
    }
}

fn json_complex(v: &Value) -> Result<Complex64> {
    let num = |v: &Value| {
        v.as_f64()
            .ok_or_else(|| Error::InvalidInput(format!("expected a number, found {v}")))
    };
    match v {
        Value::Number(_) => Ok(Complex64::new(num(v)?, 0.0)),
        Value::Array(p) if p.len() == 2 => Ok(Complex64::new(num(&p[0])?, num(&p[1])?)),
        Value::Object(o) => Ok(Complex64::new(
            o.get("re").map(num).transpose()?.unwrap_or(0.0),
            o.get("im").map(num).transpose()?.unwrap_or(0.0),
        )),
        other => Err(Error::InvalidInput(format!(
            "expected a complex entry, found {other}"
        ))),
    }
}

/// A row-major matrix: array of rows of complex entries.
pub fn json_matrix(v: &Value) -> Result<DenseMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput("matrix must be an array of rows".into()))?;
    let n = rows.len();
    let mut m = DenseMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::InvalidInput(format!("row {} is not an array", i + 1)))?;
        if row.len() != n {
            return Err(Error::InvalidInput(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
        for (j, e) in row.iter().enumerate() {
            m[(i, j)] = json_complex(e)?;
        }
    }
    Ok(m)
}

/// Factors from a JSON array of matrices.
fn json_factors(v: &Value) -> Result<Vec<DensityFactor>> {
    v.as_array()
        .ok_or_else(|| Error::InvalidInput("expected an array of matrices".into()))?
        .iter()
        .map(|m| DensityFactor::new(json_matrix(m)?))
        .collect()
}

/// Parses the state syntax described in the module docs.
pub fn parse_state(text: &str) -> Result<ProductState> {
    let mut factors = Vec::new();
    for part in text.split(';').map(str::trim) {
        if part.is_empty() {
            return Err(Error::InvalidInput(format!("empty factor in `{text}`")));
        }
        if let Some(path) = part.strip_prefix("file:") {
            let raw = std::fs::read_to_string(path.trim())?;
            factors.extend(json_factors(&serde_json::from_str(&raw)?)?);
        } else if let Some(body) = part
            .strip_prefix("diag(")
            .and_then(|rest| rest.strip_suffix(')'))
        {
            let p = body
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidInput(format!("bad diagonal entry `{s}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            factors.push(DensityFactor::diagonal(&p)?);
        } else if part.starts_with('[') {
            factors.push(DensityFactor::new(json_matrix(&serde_json::from_str(
                part,
            )?)?)?);
        } else {
            return Err(Error::InvalidInput(format!(
                "unrecognized state factor `{part}`; expected diag(...), file:PATH or a JSON matrix"
            )));
        }
    }
    ProductState::new(factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(d: &[usize], r: &[usize], c: &[usize]) -> AlgebraElement {
        AlgebraElement::matrix_unit(
            Signature::new(d.to_vec()).unwrap(),
            MatrixUnitIndex::one_based(r, c).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn witness_element() {
        let x = parse_element("E[4](2,2) - E[4](3,3)").unwrap();
        assert_eq!(
            x,
            unit(&[4], &[2], &[2]).sub(&unit(&[4], &[3], &[3])).unwrap()
        );
        assert_eq!(parse_element("E[4](2,2)-E[4](3,3)").unwrap(), x);
    }

    #[test]
    fn tensor_chain() {
        let x = parse_element("E[2](1,2) (x) E[2](2,1)").unwrap();
        assert_eq!(x, unit(&[2, 2], &[1, 2], &[2, 1]));
        assert_eq!(parse_element("E[2](1,2)(x)E[2](2,1)").unwrap(), x);
    }

    #[test]
    fn index_out_of_range() {
        let err = parse_element("E[2](3,1)").unwrap_err();
        assert!(matches!(
            err,
            Error::IndexOutOfRange {
                axis: Axis::Row,
                index: 3,
                dim: 2,
                position: 1
            }
        ));
        let err = parse_element("E[2](1,1) (x) E[3](1,4)").unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { position: 2, .. }));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_element("E[2](1,1) +\n  E[2](1,") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 10)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_element("E[2](1 1)"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(parse_element(""), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_element("E[2](1,1) $"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_element("E[1](1,1)"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn inconsistent_signatures() {
        assert!(matches!(
            parse_element("E[2](1,1) + E[3](1,1)"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn scalars_products_and_groups() {
        let x = parse_element("(2,-1)*E[3](1,3)").unwrap();
        assert_eq!(x, unit(&[3], &[1], &[3]).scale(Complex64::new(2.0, -1.0)));
        let x = parse_element("-0.5*E[2](1,1) + 1e-1*E[2](2,2)").unwrap();
        let want = unit(&[2], &[1], &[1])
            .scale(Complex64::new(-0.5, 0.0))
            .add(&unit(&[2], &[2], &[2]).scale(Complex64::new(0.1, 0.0)))
            .unwrap();
        assert_eq!(x, want);
        let x = parse_element("E[2](1,2) * E[2](2,1)").unwrap();
        assert_eq!(x, unit(&[2], &[1], &[1]));
        let x = parse_element("(E[2](1,1) + E[2](2,2)) (x) E[3](1,2)").unwrap();
        assert_eq!(
            x,
            AlgebraElement::identity(Signature::new(vec![2]).unwrap()).tensor(&unit(
                &[3],
                &[1],
                &[2]
            ))
        );
        assert_eq!(
            parse_element("I[4]").unwrap(),
            AlgebraElement::identity(Signature::new(vec![4]).unwrap())
        );
    }

    #[test]
    fn printing_round_trips() {
        let x = parse_element("(0.1,-0.3)*E[2](1,2) (x) E[3](3,1) - 7*E[2](2,2) (x) E[3](1,1)")
            .unwrap();
        assert_eq!(parse_element(&format_element(&x)).unwrap(), x);
        let z = AlgebraElement::zero(Signature::new(vec![2, 5]).unwrap());
        assert_eq!(parse_element(&format_element(&z)).unwrap(), z);
    }

    #[test]
    fn states_from_text() {
        let s = parse_state("diag(1,0); diag(0,0.5,0.5)").unwrap();
        assert_eq!(s.signature_ref().dims(), &[2, 3]);
        let s = parse_state("[[0.5,[0,0.25]],[[0,-0.25],0.5]]").unwrap();
        assert_eq!(s.factors()[0].matrix()[(0, 1)], Complex64::new(0.0, 0.25));
        assert!(parse_state("diag(1,1)").is_err());
        assert!(parse_state("nope").is_err());
        assert!(parse_state("diag(1,0);").is_err());
    }

    #[test]
    fn states_from_file() {
        let dir = std::env::temp_dir().join(format!("uhfkron-expr-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("state.json");
        std::fs::write(
            &path,
            r#"[[[1,0],[0,0]], [[{"re":0.5},{"re":0,"im":0.5}],[{"im":-0.5},0.5]]]"#,
        )
        .unwrap();
        let s = parse_state(&format!("file:{}; diag(0,1)", path.display())).unwrap();
        assert_eq!(s.signature_ref().dims(), &[2, 2, 2]);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
