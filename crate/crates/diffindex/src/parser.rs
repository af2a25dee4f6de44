//! Text format for difference systems and polynomial expressions.
//!
//! A system file is line based: a `vars: <name>+` header declares the base
//! variables, `f<k>: <expr>` lines give the equations (consecutively
//! numbered from 1), optional `q<k>: <expr>` lines store query polynomials,
//! and `#` starts a comment. Expressions use `+ - *`, parentheses and
//! rational literals `p` or `p/q`; a variable atom may carry a transform
//! order `^(<int>)` followed by an optional power `^<int>`, so `y2^(4)^3`
//! is the cube of the fourth transform of `y2`. Writing `y1^(0)` is the
//! same as `y1`. Juxtaposition is not multiplication.

use crate::poly::{Monomial, Polynomial, System, SystemError, Variable};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: undeclared variable `{name}`")]
    UndeclaredVariable {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: transform order must be a non-negative integer")]
    InvalidTransformOrder { line: usize, col: usize },
    #[error("line {line}: duplicate variable `{name}` in vars declaration")]
    DuplicateVariable { line: usize, name: String },
    #[error("line {line}: duplicate label `{label}`")]
    DuplicateLabel { line: usize, label: String },
    #[error("line {line}: unknown directive `{label}` (expected vars, f<k> or q<k>)")]
    UnknownDirective { line: usize, label: String },
    #[error("line {line}: equations appear before the vars declaration")]
    MissingVars { line: usize },
    #[error("equation labels must run f1..f{expected} without gaps; f{missing} is missing")]
    MissingEquation { expected: usize, missing: usize },
    #[error("system file declares no equations")]
    NoEquations,
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str, line: usize, col_start: usize) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = line;
    let mut col = col_start;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let start_col = col;
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '+' | '-' | '*' | '^' | '/' | '(' | ')' => {
                chars.next();
                col += 1;
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push(Spanned {
                    tok,
                    line,
                    col: start_col,
                });
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Int(s),
                    line,
                    col: start_col,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Ident(s),
                    line,
                    col: start_col,
                });
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    message: format!("unexpected character `{}`", other),
                })
            }
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    tokens: Vec<Spanned>,
    pos: usize,
    vars: &'a BTreeMap<String, u32>,
    end_line: usize,
    end_col: usize,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.peek()
            .map(|s| (s.line, s.col))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned, ParseError> {
        match self.peek() {
            Some(s) if s.tok == tok => Ok(self.next().unwrap()),
            _ => Err(self.syntax(format!("expected {}", what))),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::Plus) => {
                    self.next();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while matches!(self.peek().map(|s| &s.tok), Some(Tok::Star)) {
            self.next();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if matches!(self.peek().map(|s| &s.tok), Some(Tok::Minus)) {
            self.next();
            Ok(-&self.unary()?)
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek().map(|s| s.tok.clone()) {
            Some(Tok::Int(_)) => self.number(),
            Some(Tok::Ident(_)) => self.variable_atom(),
            Some(Tok::LParen) => {
                self.next();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.syntax("expected a number, a variable or `(`")),
        }
    }

    fn int_literal(&mut self, what: &str) -> Result<(BigInt, usize, usize), ParseError> {
        match self.peek().cloned() {
            Some(Spanned {
                tok: Tok::Int(s),
                line,
                col,
            }) => {
                self.next();
                let n = s.parse::<BigInt>().map_err(|_| ParseError::Syntax {
                    line,
                    col,
                    message: format!("invalid integer `{}`", s),
                })?;
                Ok((n, line, col))
            }
            _ => Err(self.syntax(format!("expected {}", what))),
        }
    }

    fn number(&mut self) -> Result<Polynomial, ParseError> {
        let (numer, _, _) = self.int_literal("an integer")?;
        if matches!(self.peek().map(|s| &s.tok), Some(Tok::Slash)) {
            self.next();
            let (denom, line, col) = self.int_literal("a denominator")?;
            if denom.is_zero() {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    message: "zero denominator".into(),
                });
            }
            Ok(Polynomial::constant(BigRational::new(numer, denom)))
        } else {
            Ok(Polynomial::constant(BigRational::from_integer(numer)))
        }
    }

    fn small_uint(&mut self, what: &str) -> Result<u32, ParseError> {
        let (n, line, col) = self.int_literal(what)?;
        u32::try_from(n).map_err(|_| ParseError::Syntax {
            line,
            col,
            message: format!("{} out of range", what),
        })
    }

    fn variable_atom(&mut self) -> Result<Polynomial, ParseError> {
        let (name, line, col) = match self.next() {
            Some(Spanned {
                tok: Tok::Ident(name),
                line,
                col,
            }) => (name, line, col),
            _ => unreachable!("caller checked for an identifier"),
        };
        let base =
            *self
                .vars
                .get(&name)
                .ok_or(ParseError::UndeclaredVariable { line, col, name })?;

        let mut order = 0;
        let mut power = 1;
        // `^(` is a transform order, a bare `^` is a power; a transform
        // order may be followed by one power.
        if matches!(self.peek().map(|s| &s.tok), Some(Tok::Caret)) {
            let caret = self.next().unwrap();
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::LParen) => {
                    self.next();
                    match self.peek().map(|s| s.tok.clone()) {
                        Some(Tok::Int(_)) => {
                            order = self.small_uint("transform order")?;
                            self.expect(Tok::RParen, "`)` after transform order")?;
                        }
                        _ => {
                            let (line, col) = self.here();
                            return Err(ParseError::InvalidTransformOrder { line, col });
                        }
                    }
                    if matches!(self.peek().map(|s| &s.tok), Some(Tok::Caret)) {
                        self.next();
                        power = self.small_uint("power exponent")?;
                    }
                }
                Some(Tok::Int(_)) => {
                    power = self.small_uint("power exponent")?;
                }
                _ => {
                    return Err(ParseError::Syntax {
                        line: caret.line,
                        col: caret.col,
                        message: "`^` must be followed by `(<order>)` or an integer power".into(),
                    })
                }
            }
        }

        let m = Monomial::from_powers([(Variable::new(base, order), power)]);
        Ok(Polynomial::term(m, BigRational::one()))
    }
}

fn parse_expr_at(
    text: &str,
    vars: &BTreeMap<String, u32>,
    line: usize,
    col_start: usize,
) -> Result<Polynomial, ParseError> {
    let tokens = lex(text, line, col_start)?;
    let end = tokens
        .last()
        .map(|s| (s.line, s.col + 1))
        .unwrap_or((line, col_start));
    let mut parser = ExprParser {
        tokens,
        pos: 0,
        vars,
        end_line: end.0,
        end_col: end.1,
    };
    if parser.peek().is_none() {
        return Err(parser.syntax("empty expression"));
    }
    let p = parser.expr()?;
    if parser.peek().is_some() {
        return Err(
            parser.syntax("unexpected trailing input (note: juxtaposition is not multiplication)")
        );
    }
    Ok(p)
}

fn var_table(vars: &[String]) -> BTreeMap<String, u32> {
    vars.iter()
        .enumerate()
        .map(|(i, name)| (name.clone(), i as u32 + 1))
        .collect()
}

/// Parses a single polynomial expression; `vars` lists the declared base
/// variable names in order, so `vars[0]` becomes `y1` and so on.
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<Polynomial, ParseError> {
    parse_expr_at(text, &var_table(vars), 1, 1)
}

/// The parsed contents of a system file.
#[derive(Debug, Clone)]
pub struct SystemFile {
    pub var_names: Vec<String>,
    pub equations: Vec<Polynomial>,
    pub queries: Vec<(String, Polynomial)>,
}

impl SystemFile {
    pub fn system(&self) -> Result<System, SystemError> {
        System::new(self.equations.clone(), self.var_names.len())
    }

    pub fn name_of(&self, base: u32) -> String {
        self.var_names
            .get(base as usize - 1)
            .cloned()
            .unwrap_or_else(|| format!("y{}", base))
    }

    /// Renders a polynomial using the file's declared variable names.
    pub fn render(&self, p: &Polynomial) -> String {
        p.to_string_with(|b| self.name_of(b))
    }
}

pub fn parse_system_file(text: &str) -> Result<SystemFile, ParseError> {
    let mut var_names: Option<Vec<String>> = None;
    let mut table = BTreeMap::new();
    let mut equations: BTreeMap<usize, Polynomial> = BTreeMap::new();
    let mut queries: BTreeMap<usize, Polynomial> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let uncommented = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if uncommented.trim().is_empty() {
            continue;
        }
        let colon = uncommented.find(':').ok_or(ParseError::Syntax {
            line: lineno,
            col: 1,
            message: "expected `vars:`, `f<k>:` or `q<k>:`".into(),
        })?;
        let label = uncommented[..colon].trim();
        let rest = &uncommented[colon + 1..];
        let rest_col = uncommented[..colon + 1].chars().count() + 1;

        if label == "vars" {
            if var_names.is_some() {
                return Err(ParseError::DuplicateLabel {
                    line: lineno,
                    label: "vars".into(),
                });
            }
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if names.is_empty() {
                return Err(ParseError::Syntax {
                    line: lineno,
                    col: rest_col,
                    message: "vars declaration lists no variables".into(),
                });
            }
            for name in &names {
                let mut chars = name.chars();
                let head_ok = chars
                    .next()
                    .map(|c| c.is_ascii_alphabetic() || c == '_')
                    .unwrap_or(false);
                if !head_ok || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(ParseError::Syntax {
                        line: lineno,
                        col: rest_col,
                        message: format!("invalid variable name `{}`", name),
                    });
                }
            }
            table = var_table(&names);
            if table.len() != names.len() {
                let dup = names
                    .iter()
                    .find(|n| names.iter().filter(|m| m == n).count() > 1)
                    .unwrap()
                    .clone();
                return Err(ParseError::DuplicateVariable {
                    line: lineno,
                    name: dup,
                });
            }
            var_names = Some(names);
            continue;
        }

        let (kind, digits) = label.split_at(1.min(label.len()));
        let index: Option<usize> =
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                digits.parse().ok().filter(|&k| k >= 1)
            } else {
                None
            };
        let bucket = match (kind, index) {
            ("f", Some(k)) => Some((&mut equations, k)),
            ("q", Some(k)) => Some((&mut queries, k)),
            _ => None,
        };
        let Some((bucket, k)) = bucket else {
            return Err(ParseError::UnknownDirective {
                line: lineno,
                label: label.to_string(),
            });
        };
        if var_names.is_none() {
            return Err(ParseError::MissingVars { line: lineno });
        }
        let poly = parse_expr_at(rest, &table, lineno, rest_col)?;
        if bucket.insert(k, poly).is_some() {
            return Err(ParseError::DuplicateLabel {
                line: lineno,
                label: label.to_string(),
            });
        }
    }

    let var_names = var_names.ok_or(ParseError::NoEquations)?;
    if equations.is_empty() {
        return Err(ParseError::NoEquations);
    }
    let expected = equations.len();
    for k in 1..=expected {
        if !equations.contains_key(&k) {
            return Err(ParseError::MissingEquation {
                expected,
                missing: k,
            });
        }
    }
    Ok(SystemFile {
        var_names,
        equations: equations.into_values().collect(),
        queries: queries
            .into_iter()
            .map(|(k, p)| (format!("q{}", k), p))
            .collect(),
    })
}

/// Parses a system file and validates the system metadata.
pub fn parse_system(text: &str) -> Result<System, ParseError> {
    Ok(parse_system_file(text)?.system()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn y(base: u32, order: u32) -> Polynomial {
        Polynomial::variable(Variable::new(base, order))
    }

    #[test]
    fn parses_basic_expressions() {
        let vars = names(&["y1", "y2", "y3"]);
        let p = parse_polynomial("y1^(1) - y1*y3", &vars).unwrap();
        assert_eq!(p, &y(1, 1) - &(&y(1, 0) * &y(3, 0)));

        let p = parse_polynomial("y1 + y2 - 1", &vars).unwrap();
        assert_eq!(p, &(&y(1, 0) + &y(2, 0)) - &Polynomial::one());

        let p = parse_polynomial("3/2*y2^(4)^3", &vars).unwrap();
        let expected = y(2, 4).pow(3).scale(&BigRational::new(3.into(), 2.into()));
        assert_eq!(p, expected);
    }

    #[test]
    fn transform_order_zero_is_optional() {
        let vars = names(&["u"]);
        assert_eq!(
            parse_polynomial("u^(0)", &vars).unwrap(),
            parse_polynomial("u", &vars).unwrap()
        );
    }

    #[test]
    fn precedence_and_unary_minus() {
        let vars = names(&["y1", "y2"]);
        // `^` binds tighter than unary minus
        let p = parse_polynomial("-y1^2", &vars).unwrap();
        assert_eq!(p, -&y(1, 0).pow(2));
        // parenthesized subtraction
        let p = parse_polynomial("y1*(y2 - 1)", &vars).unwrap();
        assert_eq!(p, &(&y(1, 0) * &y(2, 0)) - &y(1, 0));
        // left associativity of minus
        let p = parse_polynomial("y1 - y2 - y2", &vars).unwrap();
        assert_eq!(
            p,
            &y(1, 0) - &y(2, 0).scale(&BigRational::from_integer(2.into()))
        );
    }

    #[test]
    fn rejects_juxtaposition() {
        let vars = names(&["y1", "y2"]);
        let err = parse_polynomial("y1 y2", &vars).unwrap_err();
        assert!(
            matches!(
                err,
                ParseError::Syntax {
                    line: 1,
                    col: 4,
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn rejects_undeclared_and_bad_orders() {
        let vars = names(&["y1"]);
        assert!(matches!(
            parse_polynomial("z + 1", &vars).unwrap_err(),
            ParseError::UndeclaredVariable {
                line: 1,
                col: 1,
                ..
            }
        ));
        assert!(matches!(
            parse_polynomial("y1^(-1)", &vars).unwrap_err(),
            ParseError::InvalidTransformOrder { .. }
        ));
        assert!(matches!(
            parse_polynomial("y1^(x)", &vars).unwrap_err(),
            ParseError::InvalidTransformOrder { .. }
        ));
        assert!(matches!(
            parse_polynomial("1/0", &vars).unwrap_err(),
            ParseError::Syntax { .. }
        ));
    }

    const GOLDEN: &str = "\
# logistic-style example
vars: y1 y2 y3
f1: y1^(1) - y1*y3
f2: y2^(1) - y2*y3
f3: y1 + y2 - 1
q1: y3 - 1
q2: y1
";

    #[test]
    fn parses_system_files() {
        let file = parse_system_file(GOLDEN).unwrap();
        assert_eq!(file.var_names, names(&["y1", "y2", "y3"]));
        assert_eq!(file.equations.len(), 3);
        assert_eq!(file.queries.len(), 2);
        let sys = file.system().unwrap();
        assert_eq!(sys.max_order(), 1);
        assert_eq!(
            sys.order_matrix(),
            &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 0]]
        );
    }

    #[test]
    fn accepts_crlf() {
        let text = GOLDEN.replace('\n', "\r\n");
        assert!(parse_system_file(&text).is_ok());
    }

    #[test]
    fn file_error_cases() {
        assert!(matches!(
            parse_system_file("f1: y1").unwrap_err(),
            ParseError::MissingVars { line: 1 }
        ));
        assert!(matches!(
            parse_system_file("vars: a\nf2: a^(1) - a").unwrap_err(),
            ParseError::MissingEquation { missing: 1, .. }
        ));
        assert!(matches!(
            parse_system_file("vars: a\ng1: a").unwrap_err(),
            ParseError::UnknownDirective { line: 2, .. }
        ));
        assert!(matches!(
            parse_system_file("vars: a a\nf1: a^(1)").unwrap_err(),
            ParseError::DuplicateVariable { .. }
        ));
        // metadata validation propagates
        assert!(matches!(
            parse_system_file("vars: a\nf1: a + 1").and_then(|f| Ok(f.system()?)),
            Err(ParseError::System(SystemError::NoTransform))
        ));
    }

    prop_compose! {
        fn arb_poly()(
            terms in prop::collection::vec(
                (
                    prop::collection::vec(((1u32..=3), (0u32..=3), (1u32..=3)), 0..=3),
                    (-9i64..=9, 1i64..=4),
                ),
                0..=5,
            )
        ) -> Polynomial {
            let mut p = Polynomial::zero();
            for (powers, (num, den)) in terms {
                let m = Monomial::from_powers(
                    powers.into_iter().map(|(b, o, e)| (Variable::new(b, o), e)),
                );
                p.add_term(m, BigRational::new(num.into(), den.into()));
            }
            p
        }
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(p in arb_poly()) {
            let vars = names(&["y1", "y2", "y3"]);
            let printed = p.to_string_with(|b| format!("y{}", b));
            let reparsed = parse_polynomial(&printed, &vars).unwrap();
            prop_assert_eq!(reparsed, p);
        }
    }
}
