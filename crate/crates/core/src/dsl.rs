//! Text front end for linear entropy inequalities.
//!
//! ```text
//! ineq  := expr ("<=" | ">=") expr
//! expr  := term (("+" | "-") term)*        a leading "-" is allowed
//! term  := [rational ["*"]] atom | "0"
//! atom  := "H(" vars ")" | "H(" vars "|" vars ")"
//!        | "I(" vars ";" vars ["|" vars] ")"
//! vars  := ident ("," ident)*
//! rational := int ["/" int]
//! ```
//!
//! Conditional and mutual-information atoms expand to plain entropies:
//! `H(A|B) = H(AB) - H(B)`, `I(A;B) = H(A) + H(B) - H(AB)` and
//! `I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C)`. Variables are numbered by
//! first appearance unless an explicit name list is supplied.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::DslError;
use crate::model::{format_rational, LinearInequality, Rational, SubsetIndex, MAX_VARS};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    Bar,
    Semi,
    Le,
    Ge,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Int(n) => format!("number `{n}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Bar => "`|`".into(),
        Tok::Semi => "`;`".into(),
        Tok::Le => "`<=`".into(),
        Tok::Ge => "`>=`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, DslError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let simple = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            b'|' => Some(Tok::Bar),
            b';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, start));
            i += 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'<' || c == b'>' {
            if bytes.get(i + 1) != Some(&b'=') {
                return Err(DslError::Syntax {
                    position: start,
                    message: "expected `<=` or `>=`".into(),
                });
            }
            out.push((if c == b'<' { Tok::Le } else { Tok::Ge }, start));
            i += 2;
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((Tok::Int(n), start));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else {
            let ch = src[start..].chars().next().unwrap_or('?');
            return Err(DslError::Syntax {
                position: start,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    declared: Option<&'a [String]>,
    names: Vec<String>,
}

/// One parsed entropy term: coefficient times `H(mask)` over variable ids.
type RawTerm = (u32, Rational);

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), DslError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {}", describe(&want))))
        }
    }

    fn unexpected(&self, message: &str) -> DslError {
        DslError::Syntax {
            position: self.at(),
            message: format!("{message}, found {}", describe(self.peek())),
        }
    }

    fn variable(&mut self, name: &str, position: usize) -> Result<u32, DslError> {
        if let Some(decl) = self.declared {
            return decl
                .iter()
                .position(|n| n == name)
                .map(|k| 1u32 << k)
                .ok_or_else(|| DslError::UnknownVariable { name: name.to_string(), position });
        }
        let k = match self.names.iter().position(|n| n == name) {
            Some(k) => k,
            None => {
                if self.names.len() == MAX_VARS {
                    return Err(DslError::TooManyVariables { count: MAX_VARS + 1, max: MAX_VARS });
                }
                self.names.push(name.to_string());
                self.names.len() - 1
            }
        };
        Ok(1u32 << k)
    }

    fn vars(&mut self) -> Result<u32, DslError> {
        let mut mask = 0u32;
        loop {
            let position = self.at();
            match self.peek().clone() {
                Tok::Ident(name) => {
                    self.bump();
                    mask |= self.variable(&name, position)?;
                }
                Tok::RParen | Tok::Bar | Tok::Semi if mask == 0 => {
                    return Err(DslError::EmptyVars { position });
                }
                _ => return Err(self.unexpected("expected a variable name")),
            }
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                return Ok(mask);
            }
        }
    }

    fn rational(&mut self) -> Result<Rational, DslError> {
        let Tok::Int(num) = self.bump() else {
            unreachable!("caller checked for a number")
        };
        if *self.peek() == Tok::Slash {
            self.bump();
            let position = self.at();
            match self.bump() {
                Tok::Int(den) if !den.is_zero() => Ok(Rational::new(num, den)),
                Tok::Int(_) => Err(DslError::Syntax { position, message: "zero denominator".into() }),
                other => Err(DslError::Syntax {
                    position,
                    message: format!("expected a denominator, found {}", describe(&other)),
                }),
            }
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn atom(&mut self, coeff: &Rational, out: &mut Vec<RawTerm>) -> Result<(), DslError> {
        let name = match self.peek() {
            Tok::Ident(s) if s == "H" || s == "I" => s.clone(),
            _ => return Err(self.unexpected("expected `H(` or `I(`")),
        };
        self.bump();
        self.expect(Tok::LParen)?;
        let neg = -coeff.clone();
        if name == "H" {
            let a = self.vars()?;
            if *self.peek() == Tok::Bar {
                self.bump();
                let b = self.vars()?;
                out.push((a | b, coeff.clone()));
                out.push((b, neg));
            } else {
                out.push((a, coeff.clone()));
            }
        } else {
            let a = self.vars()?;
            self.expect(Tok::Semi)?;
            let b = self.vars()?;
            let c = if *self.peek() == Tok::Bar {
                self.bump();
                self.vars()?
            } else {
                0
            };
            out.push((a | c, coeff.clone()));
            out.push((b | c, coeff.clone()));
            out.push((a | b | c, neg.clone()));
            if c != 0 {
                out.push((c, neg));
            }
        }
        self.expect(Tok::RParen)
    }

    fn term(&mut self, sign: &Rational, out: &mut Vec<RawTerm>) -> Result<(), DslError> {
        let coeff = if matches!(self.peek(), Tok::Int(_)) {
            let q = self.rational()?;
            match self.peek() {
                Tok::Star => {
                    self.bump();
                }
                Tok::Ident(_) => {}
                // a bare constant is only meaningful as zero
                _ if q.is_zero() => return Ok(()),
                _ => return Err(self.unexpected("expected an entropy term after the coefficient")),
            }
            q
        } else {
            Rational::one()
        };
        self.atom(&(sign * coeff), out)
    }

    fn expr(&mut self, out: &mut Vec<RawTerm>) -> Result<(), DslError> {
        let mut sign = Rational::one();
        if *self.peek() == Tok::Minus {
            self.bump();
            sign = -sign;
        }
        self.term(&sign, out)?;
        loop {
            match self.peek() {
                Tok::Plus => sign = Rational::one(),
                Tok::Minus => sign = -Rational::one(),
                _ => return Ok(()),
            }
            self.bump();
            self.term(&sign, out)?;
        }
    }
}

/// Parses inequality text into canonical `Σ c_T H(T) ≥ 0` form.
///
/// With `declared_vars`, variable `k` of the list is position `k + 1` and
/// `m` is the list length; otherwise positions follow first appearance.
pub fn parse_inequality(
    text: &str,
    declared_vars: Option<&[String]>,
) -> Result<LinearInequality, DslError> {
    if let Some(decl) = declared_vars {
        if decl.len() > MAX_VARS {
            return Err(DslError::TooManyVariables { count: decl.len(), max: MAX_VARS });
        }
        for (k, n) in decl.iter().enumerate() {
            if decl[..k].contains(n) {
                return Err(DslError::DuplicateDeclaration(n.clone()));
            }
        }
    }
    let mut p = Parser { toks: lex(text)?, pos: 0, declared: declared_vars, names: Vec::new() };
    let mut left = Vec::new();
    let mut right = Vec::new();
    p.expr(&mut left)?;
    let less = match p.bump() {
        Tok::Le => true,
        Tok::Ge => false,
        other => {
            return Err(DslError::Syntax {
                position: p.toks[p.pos.saturating_sub(1)].1,
                message: format!("expected `<=` or `>=`, found {}", describe(&other)),
            })
        }
    };
    p.expr(&mut right)?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("expected end of input"));
    }

    // lhs <= rhs  becomes  rhs - lhs >= 0
    let (pos_side, neg_side) = if less { (right, left) } else { (left, right) };
    let mut coeffs: BTreeMap<u32, Rational> = BTreeMap::new();
    for (mask, c) in pos_side {
        *coeffs.entry(mask).or_insert_with(Rational::zero) += c;
    }
    for (mask, c) in neg_side {
        *coeffs.entry(mask).or_insert_with(Rational::zero) -= c;
    }
    coeffs.retain(|_, c| !c.is_zero());
    if coeffs.is_empty() {
        return Err(DslError::ZeroInequality);
    }
    let m = declared_vars.map_or(p.names.len(), <[String]>::len);
    let terms = coeffs
        .into_iter()
        .map(|(mask, c)| (SubsetIndex::from_mask(mask as u16, m).expect("mask built from m vars"), c));
    LinearInequality::new(m, terms).map_err(|_| DslError::ZeroInequality)
}

/// Variable names as bound by [`parse_inequality`] without a declaration:
/// first-appearance order.
pub fn variable_names(text: &str) -> Result<Vec<String>, DslError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, declared: None, names: Vec::new() };
    let mut sink = Vec::new();
    p.expr(&mut sink)?;
    if matches!(p.peek(), Tok::Le | Tok::Ge) {
        p.bump();
        p.expr(&mut sink)?;
    }
    Ok(p.names)
}

fn render_side(terms: &[(SubsetIndex, Rational)], names: &[String]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(s, c)| {
            debug_assert!(c.is_positive());
            let vars: Vec<&str> = s.coordinates().into_iter().map(|k| names[k].as_str()).collect();
            format!("{} H({})", format_rational(c), vars.join(","))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Renders the split form `Σ λ_I H(I) <= Σ μ_J H(J)` with positive
/// coefficients written out, e.g. `2 H(x,y,z) <= 1 H(x,y) + 1 H(x,z) + 1 H(y,z)`.
pub fn format_inequality(ineq: &LinearInequality, names: &[String]) -> Result<String, DslError> {
    if names.len() != ineq.m() {
        return Err(DslError::NameCountMismatch { expected: ineq.m(), found: names.len() });
    }
    Ok(format!("{} <= {}", render_side(&ineq.lhs(), names), render_side(&ineq.rhs(), names)))
}

/// Default names `x1, x2, …` for `m` variables.
pub fn default_names(m: usize) -> Vec<String> {
    (1..=m).map(|k| format!("x{k}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn coeff_map(ineq: &LinearInequality, ns: &[&str]) -> BTreeMap<String, i64> {
        ineq.coeffs()
            .iter()
            .map(|(s, c)| {
                let key: String = s.coordinates().iter().map(|&k| ns[k]).collect();
                (key, c.to_integer().try_into().unwrap())
            })
            .collect()
    }

    #[test]
    fn loomis_whitney_text() {
        let ineq = parse_inequality("2 H(x,y,z) <= H(x,y)+H(x,z)+H(y,z)", None).unwrap();
        let want: BTreeMap<String, i64> =
            [("xy", 1), ("xz", 1), ("yz", 1), ("xyz", -2)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
        assert_eq!(coeff_map(&ineq, &["x", "y", "z"]), want);
        assert_eq!(
            format_inequality(&ineq, &names(&["x", "y", "z"])).unwrap(),
            "2 H(x,y,z) <= 1 H(x,y) + 1 H(x,z) + 1 H(y,z)"
        );
    }

    #[test]
    fn mutual_information_sugar() {
        let ineq = parse_inequality("I(x;y) >= 0", None).unwrap();
        let want: BTreeMap<String, i64> =
            [("x", 1), ("y", 1), ("xy", -1)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
        assert_eq!(coeff_map(&ineq, &["x", "y"]), want);
        assert_eq!(
            format_inequality(&ineq, &names(&["x", "y"])).unwrap(),
            "1 H(x,y) <= 1 H(x) + 1 H(y)"
        );
    }

    #[test]
    fn conditional_sugar() {
        let ineq = parse_inequality("H(y,z|x) <= H(y|x) + H(z|x)", None).unwrap();
        // first appearance: y=1, z=2, x=3
        let ns = ["y", "z", "x"];
        let got = coeff_map(&ineq, &ns);
        let want: BTreeMap<String, i64> = [("yx", 1), ("zx", 1), ("x", -1), ("yzx", -1)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        assert_eq!(got, want);

        let decl = names(&["x", "y", "z"]);
        let ineq = parse_inequality("H(y,z|x) <= H(y|x) + H(z|x)", Some(&decl)).unwrap();
        let want: BTreeMap<String, i64> = [("xy", 1), ("xz", 1), ("x", -1), ("xyz", -1)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        assert_eq!(coeff_map(&ineq, &["x", "y", "z"]), want);
    }

    #[test]
    fn conditional_mutual_information() {
        let decl = names(&["x", "y", "z"]);
        let ineq = parse_inequality("I(x;y|z) >= 0", Some(&decl)).unwrap();
        let want: BTreeMap<String, i64> = [("xz", 1), ("yz", 1), ("xyz", -1), ("z", -1)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        assert_eq!(coeff_map(&ineq, &["x", "y", "z"]), want);
    }

    #[test]
    fn coefficients_and_star() {
        let a = parse_inequality("3/2*H(a) + 1/2 H(b) >= -H(a,b) + 2*H(a,b)", None).unwrap();
        let b = parse_inequality("  3/2 H(a)+1/2*H(b)-H(a,b)>=0 ", None).unwrap();
        assert_eq!(a, b);
        assert_eq!(format_inequality(&a, &names(&["a", "b"])).unwrap(), "1 H(a,b) <= 3/2 H(a) + 1/2 H(b)");
    }

    #[test]
    fn zero_side_round_trip() {
        let ineq = parse_inequality("H(x) >= 0", None).unwrap();
        let text = format_inequality(&ineq, &names(&["x"])).unwrap();
        assert_eq!(text, "0 <= 1 H(x)");
        assert_eq!(parse_inequality(&text, None).unwrap(), ineq);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_inequality("H(x) <= H(x,", None),
            Err(DslError::Syntax { position: 12, .. })
        ));
        assert!(matches!(parse_inequality("H() >= 0", None), Err(DslError::EmptyVars { position: 2 })));
        assert!(matches!(parse_inequality("H(x) = H(y)", None), Err(DslError::Syntax { position: 5, .. })));
        assert_eq!(parse_inequality("H(x) <= H(x)", None), Err(DslError::ZeroInequality));
        let decl = names(&["x"]);
        assert_eq!(
            parse_inequality("H(x) <= H(x,y)", Some(&decl)),
            Err(DslError::UnknownVariable { name: "y".into(), position: 12 })
        );
        assert!(parse_inequality("H(a,b,c,d,e,f,g,h,i) >= 0", None).is_err());
        assert!(parse_inequality("2 >= H(x)", None).is_err());
        assert!(parse_inequality("H(x) >= 1/0 H(y)", None).is_err());
        assert!(parse_inequality("H(x) >= G(y)", None).is_err());
    }

    #[test]
    fn format_rejects_wrong_name_count() {
        let ineq = parse_inequality("H(x) <= H(x,y)", None).unwrap();
        assert_eq!(
            format_inequality(&ineq, &names(&["x"])),
            Err(DslError::NameCountMismatch { expected: 2, found: 1 })
        );
    }

    fn arb_inequality() -> impl Strategy<Value = LinearInequality> {
        (1usize..=4).prop_flat_map(|m| {
            let n = (1usize << m) - 1;
            proptest::collection::vec((-6i64..=6, 1i64..=5), n).prop_filter_map("nonzero", move |cs| {
                let terms = cs.into_iter().enumerate().map(|(k, (p, q))| {
                    (
                        SubsetIndex::from_mask(k as u16 + 1, m).unwrap(),
                        Rational::new(p.into(), q.into()),
                    )
                });
                LinearInequality::new(m, terms).ok()
            })
        })
    }

    proptest! {
        #[test]
        fn parse_format_round_trip(ineq in arb_inequality()) {
            let ns = default_names(ineq.m());
            let text = format_inequality(&ineq, &ns).unwrap();
            let back = parse_inequality(&text, Some(&ns)).unwrap();
            prop_assert_eq!(back, ineq);
        }
    }
}
