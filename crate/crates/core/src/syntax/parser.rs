//! Recursive-descent parser for the knowledge-base language.
//!
//! ```text
//! kb        := (statement)*
//! statement := formula '.'
//! formula   := imp ('<->' imp)*
//! imp       := or ('->' imp)?
//! or        := and ('|' and)*
//! and       := unary ('&' unary)*
//! unary     := '~' unary | ('forall' | 'exists') VAR unary | primary
//! primary   := '(' formula ')'
//!            | '%' '(' formula ',' formula ',' NUM ',' NUM ')'
//!            | PRED [ '(' term (',' term)* ')' ]
//! term      := VAR | CONST | NAME '(' term (',' term)* ')'
//! ```
//!
//! Lexical conventions: predicates start with an uppercase letter; object
//! variables are lowercase names starting with `u`..`z`; every other
//! lowercase name is a constant. `#` starts a comment running to the end of
//! the line.

use std::fmt;

use crate::rational::Rational;
use crate::syntax::ast::{Formula, Sentence, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// File name when the text came from a file.
    pub source: Option<String>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(src) = &self.source {
            write!(f, "{src}:")?;
        }
        if self.line > 0 {
            write!(f, "{}:{}:", self.line, self.column)?;
        }
        write!(f, " {}", self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Percent,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Num(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Percent => f.write_str("`%`"),
            Tok::Not => f.write_str("`~`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Implies => f.write_str("`->`"),
            Tok::Iff => f.write_str("`<->`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str, diags: &mut Vec<Diagnostic>) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut line_start) = (0, 1, 0);
    let digits_from = |mut k: usize| {
        while k < chars.len() && chars[k].is_ascii_digit() {
            k += 1;
        }
        k
    };
    let is_digit = |k: usize| chars.get(k).is_some_and(|d| d.is_ascii_digit());
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let column = i - line_start + 1;
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                line_start = i;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '%' => Tok::Percent,
            '~' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Implies
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                i += 2;
                Tok::Iff
            }
            // A statement never starts with a digit, so `.5` is a numeral.
            '.' if is_digit(i + 1) => {
                i = digits_from(i + 1) - 1;
                Tok::Num(chars[start..=i].iter().collect())
            }
            '.' => Tok::Dot,
            d if d.is_ascii_digit() => {
                i = digits_from(i);
                if i < chars.len() && (chars[i] == '/' || chars[i] == '.') && is_digit(i + 1) {
                    i = digits_from(i + 1);
                }
                i -= 1;
                Tok::Num(chars[start..=i].iter().collect())
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            other => {
                diags.push(Diagnostic {
                    line,
                    column,
                    message: format!("unexpected character `{other}`"),
                    source: None,
                });
                i += 1;
                continue;
            }
        };
        i += 1;
        out.push(Token { tok, line, column });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: i - line_start + 1,
    });
    out
}

pub(crate) fn is_variable_name(name: &str) -> bool {
    name.starts_with(|c: char| ('u'..='z').contains(&c))
}

fn is_predicate_name(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_uppercase())
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    /// Depth of enclosing `%` arguments.
    in_stat: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'t> Parser<'t> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn here(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> &Token {
        let t = &self.tokens[self.pos];
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, tok: &Token, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            line: tok.line,
            column: tok.column,
            message: message.into(),
            source: None,
        }
    }

    fn expect(&mut self, want: Tok, context: &str) -> PResult<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error_at(
                self.here(),
                format!("expected {want} {context}, found {}", self.peek()),
            ))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        let start = self.here().clone();
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(kw) if kw == "forall" || kw == "exists" => {
                if self.in_stat > 0 {
                    return Err(self.error_at(&start, "quantifiers are not allowed inside `%`"));
                }
                self.bump();
                let var_tok = self.here().clone();
                let var = match self.bump().tok.clone() {
                    Tok::Ident(v) if is_variable_name(&v) => v,
                    other => {
                        return Err(self.error_at(
                            &var_tok,
                            format!("expected an object variable after `{kw}`, found {other}"),
                        ))
                    }
                };
                let body = self.unary()?;
                Ok(if kw == "forall" {
                    Formula::forall(&var, body)
                } else {
                    Formula::exists(&var, body)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> PResult<Formula> {
        let start = self.here().clone();
        match start.tok.clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "to close parenthesis")?;
                Ok(f)
            }
            Tok::Percent => {
                if self.in_stat > 0 {
                    return Err(self.error_at(&start, "nested `%` statements are not supported"));
                }
                self.bump();
                self.expect(Tok::LParen, "after `%`")?;
                self.in_stat += 1;
                let target = self.formula();
                let target = target.and_then(|t| {
                    self.expect(Tok::Comma, "after `%` target")?;
                    Ok(t)
                });
                let reference = target.and_then(|t| {
                    let r = self.formula()?;
                    self.expect(Tok::Comma, "after `%` reference")?;
                    Ok((t, r))
                });
                self.in_stat -= 1;
                let (target, reference) = reference?;
                let lower = self.bound()?;
                self.expect(Tok::Comma, "between `%` bounds")?;
                let upper_tok = self.here().clone();
                let upper = self.bound()?;
                self.expect(Tok::RParen, "to close `%`")?;
                if lower > upper {
                    return Err(self.error_at(
                        &upper_tok,
                        format!("`%` lower bound {lower} exceeds upper bound {upper}"),
                    ));
                }
                Ok(Formula::stat(target, reference, lower, upper))
            }
            Tok::Ident(name) if is_predicate_name(&name) => {
                self.bump();
                let args = if *self.peek() == Tok::LParen {
                    self.bump();
                    self.term_list()?
                } else {
                    Vec::new()
                };
                Ok(Formula::Atom(name, args))
            }
            Tok::Ident(name) => Err(self.error_at(
                &start,
                format!("expected a formula, found `{name}` (predicates start with an uppercase letter)"),
            )),
            other => Err(self.error_at(&start, format!("expected a formula, found {other}"))),
        }
    }

    fn bound(&mut self) -> PResult<Rational> {
        let tok = self.here().clone();
        match tok.tok.clone() {
            Tok::Num(text) => {
                let value: Rational = text
                    .parse()
                    .map_err(|e: crate::rational::RationalError| self.error_at(&tok, e.to_string()))?;
                if !value.is_unit() {
                    return Err(self.error_at(&tok, format!("`%` bound {value} is outside [0, 1]")));
                }
                self.bump();
                Ok(value)
            }
            Tok::Ident(name) => Err(self.error_at(
                &tok,
                format!("`%` bound `{name}` is not a numeral; field variables are not accepted in knowledge bases"),
            )),
            other => Err(self.error_at(&tok, format!("expected a numeral `%` bound, found {other}"))),
        }
    }

    /// Parses `term (',' term)* ')'`; the opening parenthesis is consumed.
    fn term_list(&mut self) -> PResult<Vec<Term>> {
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "to close argument list")?;
        Ok(args)
    }

    fn term(&mut self) -> PResult<Term> {
        let tok = self.here().clone();
        match tok.tok.clone() {
            Tok::Ident(name) if name == "forall" || name == "exists" => {
                Err(self.error_at(&tok, format!("keyword `{name}` used as a term")))
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let args = self.term_list()?;
                    return Ok(Term::App(name, args));
                }
                if is_variable_name(&name) {
                    Ok(Term::Var(name))
                } else if name.starts_with(|c: char| c.is_ascii_lowercase()) {
                    Ok(Term::Const(name))
                } else {
                    Err(self.error_at(
                        &tok,
                        format!("`{name}` is not a term (constants and variables start lowercase)"),
                    ))
                }
            }
            other => Err(self.error_at(&tok, format!("expected a term, found {other}"))),
        }
    }

    /// Parses one statement and checks it is closed. Leaves the parser at
    /// the terminating `.` (or end of input).
    fn sentence(&mut self) -> PResult<Sentence> {
        let start = self.here().clone();
        let f = self.formula()?;
        Sentence::new(f).map_err(|f| {
            let vars: Vec<String> = f.free_vars().into_iter().collect();
            self.error_at(
                &start,
                format!("free variable(s) {} not bound by a quantifier or `%`", vars.join(", ")),
            )
        })
    }

    fn skip_statement(&mut self) {
        while !matches!(self.peek(), Tok::Dot | Tok::Eof) {
            self.bump();
        }
        if *self.peek() == Tok::Dot {
            self.bump();
        }
    }
}

/// Parses a single closed sentence. A trailing `.` is optional.
pub fn parse_sentence(text: &str) -> Result<Sentence, Diagnostic> {
    let mut diags = Vec::new();
    let tokens = lex(text, &mut diags);
    if let Some(d) = diags.into_iter().next() {
        return Err(d);
    }
    let mut p = Parser {
        tokens: &tokens,
        pos: 0,
        in_stat: 0,
    };
    let s = p.sentence()?;
    if *p.peek() == Tok::Dot {
        p.bump();
    }
    if *p.peek() != Tok::Eof {
        return Err(p.error_at(p.here(), format!("unexpected {} after sentence", p.peek())));
    }
    Ok(s)
}

/// Parses a sequence of `.`-terminated statements, recovering at the next
/// `.` after an error. Returns each sentence with its 1-based line number.
pub(crate) fn parse_statements(text: &str) -> (Vec<(Sentence, usize)>, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let tokens = lex(text, &mut diags);
    let mut p = Parser {
        tokens: &tokens,
        pos: 0,
        in_stat: 0,
    };
    let mut out = Vec::new();
    while *p.peek() != Tok::Eof {
        let line = p.here().line;
        p.in_stat = 0;
        match p.sentence() {
            Ok(s) => {
                if *p.peek() == Tok::Dot {
                    p.bump();
                    out.push((s, line));
                } else {
                    diags.push(p.error_at(
                        p.here(),
                        format!("expected `.` to end the statement, found {}", p.peek()),
                    ));
                    p.skip_statement();
                }
            }
            Err(d) => {
                diags.push(d);
                p.skip_statement();
            }
        }
    }
    diags.sort_by_key(|d| (d.line, d.column));
    (out, diags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Formula {
        parse_sentence(s).unwrap().into_formula()
    }

    fn err(s: &str) -> String {
        parse_sentence(s).unwrap_err().message
    }

    #[test]
    fn ground_atom() {
        assert_eq!(parse("B(a)."), Formula::atom("B", vec![Term::constant("a")]));
    }

    #[test]
    fn direct_inference_premise() {
        let f = parse("%(A(x), B(x), 4/5, 4/5).");
        assert_eq!(
            f,
            Formula::stat(
                Formula::atom("A", vec![Term::var("x")]),
                Formula::atom("B", vec![Term::var("x")]),
                Rational::new(4, 5),
                Rational::new(4, 5)
            )
        );
    }

    #[test]
    fn subclass_axiom() {
        let f = parse("forall x (Bp(x) -> B(x)).");
        assert_eq!(
            f,
            Formula::forall(
                "x",
                Formula::implies(
                    Formula::atom("Bp", vec![Term::var("x")]),
                    Formula::atom("B", vec![Term::var("x")])
                )
            )
        );
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("P & Q | R -> S <-> T").to_string(), "P & Q | R -> S <-> T");
        assert_eq!(
            parse("P & Q | R -> S <-> T"),
            Formula::iff(
                Formula::implies(
                    Formula::or(
                        Formula::and(Formula::atom("P", vec![]), Formula::atom("Q", vec![])),
                        Formula::atom("R", vec![])
                    ),
                    Formula::atom("S", vec![])
                ),
                Formula::atom("T", vec![])
            )
        );
        assert_eq!(parse("~P(a) & Q(a)").to_string(), "~P(a) & Q(a)");
    }

    #[test]
    fn decimal_bounds_are_exact() {
        let f = parse("%(A(x), B(x), 0.8, .9)");
        match f {
            Formula::Stat { lower, upper, .. } => {
                assert_eq!(lower, Rational::new(4, 5));
                assert_eq!(upper, Rational::new(9, 10));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mismatched_variables_parse() {
        let f = parse("%(R(x, y), Q(w, v), 0, 1)");
        assert!(f.is_closed());
    }

    #[test]
    fn function_terms_parse() {
        assert_eq!(
            parse("forall x R(F(x), a)").to_string(),
            "forall x R(F(x), a)"
        );
    }

    #[test]
    fn error_cases() {
        assert!(err("P(x).").contains("free variable"));
        assert!(err("%(A(x), B(x), 9/10, 1/2).").contains("exceeds"));
        assert!(err("%(A(x), B(x), p, q).").contains("not a numeral"));
        assert!(err("%(%(A(x), B(x), 0, 1), B(x), 0, 1).").contains("nested"));
        assert!(err("%(exists y A(y), B(x), 0, 1).").contains("quantifiers"));
        assert!(err("%(A(x), B(x), 0, 3/2).").contains("outside"));
        assert!(err("P(a) Q(a)").contains("unexpected"));
        assert!(err("P(a").contains("expected `)`"));
        assert!(err("p(a)").contains("uppercase"));
    }

    #[test]
    fn diagnostics_carry_position() {
        let d = parse_sentence("P(a) &\n  & Q(b)").unwrap_err();
        assert_eq!((d.line, d.column), (2, 3));
    }

    #[test]
    fn statements_recover_after_errors() {
        let (ok, diags) = parse_statements("P(a).\nP(x).\nQ(b). # comment\nR(.\nS(c).");
        let texts: Vec<String> = ok.iter().map(|(s, l)| format!("{l}:{s}")).collect();
        assert_eq!(texts, ["1:P(a)", "3:Q(b)", "5:S(c)"]);
        assert_eq!(diags.len(), 2);
        assert_eq!(diags[0].line, 2);
        assert_eq!(diags[1].line, 4);
    }
}
