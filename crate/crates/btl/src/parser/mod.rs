//! Concrete ASCII syntax for formulas and the pretty-printer.
//!
//! Grammar (tightest first): unary operators `! X F G Y wY Finf Ginf` and the
//! jumps `@xN`/`@root`; the infix `U`/`S` (right-associative); `&`; `|`;
//! `->` (right-associative); `<->`. The quantifiers `E`/`A` and the binder
//! `down xN .` extend maximally to the right. `<->` and `->`/`<->` at path
//! level are sugar and never reappear when printing.
//!
//! Boolean structure below a temporal operator is read as a single lifted
//! state formula whenever no temporal operator occurs inside it; only mixed
//! combinations become path-level connectives. Printing inverts this reading,
//! so `parse(print(f)) == f` holds for formulas built that way.

pub mod json;

use crate::formula::*;
use std::fmt;
use thiserror::Error;

/// Byte range into the input text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bytes {}..{}", self.start, self.end)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {span}: {message} (expected {})", expected.join(", "))]
    Syntax {
        span: SourceSpan,
        message: String,
        expected: Vec<String>,
    },
    #[error("invalid variable at {span}: variable indices start at x1")]
    ZeroVariableIndex { span: SourceSpan },
    #[error("malformed binder at {span}: {message}")]
    MalformedBinder { span: SourceSpan, message: String },
    #[error("path operator outside a path quantifier at {span}")]
    PathOperatorOutsideQuantifier { span: SourceSpan },
}

impl ParseError {
    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::ZeroVariableIndex { span }
            | ParseError::MalformedBinder { span, .. }
            | ParseError::PathOperatorOutsideQuantifier { span } => *span,
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(usize),
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    At,
    Dot,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn lex(input: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '(' => {
                toks.push(Token { tok: Tok::LParen, span: SourceSpan::new(start, i + 1) });
                i += 1;
            }
            ')' => {
                toks.push(Token { tok: Tok::RParen, span: SourceSpan::new(start, i + 1) });
                i += 1;
            }
            '!' => {
                toks.push(Token { tok: Tok::Bang, span: SourceSpan::new(start, i + 1) });
                i += 1;
            }
            '&' => {
                toks.push(Token { tok: Tok::Amp, span: SourceSpan::new(start, i + 1) });
                i += 1;
            }
            '|' => {
                toks.push(Token { tok: Tok::Pipe, span: SourceSpan::new(start, i + 1) });
                i += 1;
            }
            '@' => {
                toks.push(Token { tok: Tok::At, span: SourceSpan::new(start, i + 1) });
                i += 1;
            }
            '.' => {
                toks.push(Token { tok: Tok::Dot, span: SourceSpan::new(start, i + 1) });
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push(Token { tok: Tok::Arrow, span: SourceSpan::new(start, i + 2) });
                    i += 2;
                } else {
                    return Err(ParseError::Syntax {
                        span: SourceSpan::new(start, i + 1),
                        message: format!("unexpected character '{c}'"),
                        expected: vec!["->".into()],
                    });
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    toks.push(Token { tok: Tok::DArrow, span: SourceSpan::new(start, i + 3) });
                    i += 3;
                } else {
                    return Err(ParseError::Syntax {
                        span: SourceSpan::new(start, i + 1),
                        message: format!("unexpected character '{c}'"),
                        expected: vec!["<->".into()],
                    });
                }
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < bytes.len() {
                    let d = bytes[j] as char;
                    if d.is_ascii_alphanumeric() || d == '_' {
                        j += 1;
                    } else {
                        break;
                    }
                }
                let word = &input[i..j];
                let span = SourceSpan::new(i, j);
                // Identifiers of the form x<digits> are variable references.
                if word.len() > 1
                    && word.starts_with('x')
                    && word[1..].chars().all(|d| d.is_ascii_digit())
                {
                    let idx: usize = word[1..].parse().map_err(|_| ParseError::Syntax {
                        span,
                        message: "variable index out of range".into(),
                        expected: vec!["variable index".into()],
                    })?;
                    if idx == 0 {
                        return Err(ParseError::ZeroVariableIndex { span });
                    }
                    toks.push(Token { tok: Tok::Var(idx), span });
                } else {
                    toks.push(Token { tok: Tok::Ident(word.to_string()), span });
                }
                i = j;
            }
            _ => {
                return Err(ParseError::Syntax {
                    span: SourceSpan::new(start, i + 1),
                    message: format!("unexpected character '{c}'"),
                    expected: vec!["formula".into()],
                });
            }
        }
    }
    toks.push(Token { tok: Tok::Eof, span: SourceSpan::new(input.len(), input.len()) });
    Ok(toks)
}

// ---------------------------------------------------------------------------
// Surface syntax tree (untyped with respect to state/path)

#[derive(Debug, Clone)]
enum SExpr {
    True,
    False,
    Root,
    Var(usize),
    Ident(String),
    Not(Box<SExpr>),
    And(Box<SExpr>, Box<SExpr>),
    Or(Box<SExpr>, Box<SExpr>),
    Implies(Box<SExpr>, Box<SExpr>),
    Iff(Box<SExpr>, Box<SExpr>),
    Next(Box<SExpr>),
    Until(Box<SExpr>, Box<SExpr>),
    Since(Box<SExpr>, Box<SExpr>),
    Eventually(Box<SExpr>),
    Always(Box<SExpr>),
    Previous(Box<SExpr>),
    WeakPrevious(Box<SExpr>),
    InfOften(Box<SExpr>),
    AlmAlways(Box<SExpr>),
    Exists(Box<SExpr>),
    Forall(Box<SExpr>),
    Bind(usize, Box<SExpr>),
    AtVar(usize, Box<SExpr>),
    AtRoot(Box<SExpr>),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    // span of the most recently consumed token, for error reporting
    last_span: SourceSpan,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].clone();
        self.last_span = t.span;
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t.tok
    }

    fn err(&self, message: &str, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            span: self.peek_span(),
            message: message.to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    // iff := impl ('<->' impl)*   (left fold)
    fn parse_formula(&mut self) -> Result<SExpr, ParseError> {
        let mut lhs = self.parse_implies()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.parse_implies()?;
            lhs = SExpr::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // impl := or ('->' impl)?   (right-assoc)
    fn parse_implies(&mut self) -> Result<SExpr, ParseError> {
        let lhs = self.parse_or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.parse_implies()?;
            Ok(SExpr::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Result<SExpr, ParseError> {
        let mut lhs = self.parse_and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.parse_and()?;
            lhs = SExpr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<SExpr, ParseError> {
        let mut lhs = self.parse_until()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.parse_until()?;
            lhs = SExpr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // until := unary (('U'|'S') until)?   (right-assoc)
    fn parse_until(&mut self) -> Result<SExpr, ParseError> {
        let lhs = self.parse_unary()?;
        match self.peek() {
            Tok::Ident(w) if w == "U" => {
                self.bump();
                let rhs = self.parse_until()?;
                Ok(SExpr::Until(Box::new(lhs), Box::new(rhs)))
            }
            Tok::Ident(w) if w == "S" => {
                self.bump();
                let rhs = self.parse_until()?;
                Ok(SExpr::Since(Box::new(lhs), Box::new(rhs)))
            }
            _ => Ok(lhs),
        }
    }

    fn parse_unary(&mut self) -> Result<SExpr, ParseError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(SExpr::Not(Box::new(self.parse_unary()?)))
            }
            Tok::At => {
                self.bump();
                match self.bump() {
                    Tok::Var(i) => Ok(SExpr::AtVar(i, Box::new(self.parse_unary()?))),
                    Tok::Ident(w) if w == "root" => {
                        Ok(SExpr::AtRoot(Box::new(self.parse_unary()?)))
                    }
                    _ => Err(ParseError::Syntax {
                        span: self.last_span,
                        message: "'@' must be followed by a variable or 'root'".into(),
                        expected: vec!["xN".into(), "root".into()],
                    }),
                }
            }
            Tok::Ident(w) => match w.as_str() {
                "E" => {
                    self.bump();
                    Ok(SExpr::Exists(Box::new(self.parse_formula()?)))
                }
                "A" => {
                    self.bump();
                    Ok(SExpr::Forall(Box::new(self.parse_formula()?)))
                }
                "X" => {
                    self.bump();
                    Ok(SExpr::Next(Box::new(self.parse_unary()?)))
                }
                "F" => {
                    self.bump();
                    Ok(SExpr::Eventually(Box::new(self.parse_unary()?)))
                }
                "G" => {
                    self.bump();
                    Ok(SExpr::Always(Box::new(self.parse_unary()?)))
                }
                "Y" => {
                    self.bump();
                    Ok(SExpr::Previous(Box::new(self.parse_unary()?)))
                }
                "wY" => {
                    self.bump();
                    Ok(SExpr::WeakPrevious(Box::new(self.parse_unary()?)))
                }
                "Finf" => {
                    self.bump();
                    Ok(SExpr::InfOften(Box::new(self.parse_unary()?)))
                }
                "Ginf" => {
                    self.bump();
                    Ok(SExpr::AlmAlways(Box::new(self.parse_unary()?)))
                }
                "down" => {
                    self.bump();
                    let idx = match self.bump() {
                        Tok::Var(i) => i,
                        Tok::Ident(w) if w.starts_with('x') => {
                            // x0 is caught by the lexer; anything else here is
                            // an identifier that is not a variable.
                            return Err(ParseError::MalformedBinder {
                                span: self.last_span,
                                message: format!("'{w}' is not a variable (use x1, x2, ...)"),
                            });
                        }
                        _ => {
                            return Err(ParseError::MalformedBinder {
                                span: self.last_span,
                                message: "'down' must be followed by a variable".into(),
                            });
                        }
                    };
                    match self.bump() {
                        Tok::Dot => {}
                        _ => {
                            return Err(ParseError::MalformedBinder {
                                span: self.last_span,
                                message: "expected '.' after the bound variable".into(),
                            });
                        }
                    }
                    Ok(SExpr::Bind(idx, Box::new(self.parse_formula()?)))
                }
                "U" | "S" => Err(self.err("temporal infix operator needs a left operand", &["formula"])),
                "root" => {
                    self.bump();
                    Ok(SExpr::Root)
                }
                "true" => {
                    self.bump();
                    Ok(SExpr::True)
                }
                "false" => {
                    self.bump();
                    Ok(SExpr::False)
                }
                _ => {
                    self.bump();
                    Ok(SExpr::Ident(w))
                }
            },
            Tok::Var(i) => {
                self.bump();
                Ok(SExpr::Var(i))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.parse_formula()?;
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    _ => Err(ParseError::Syntax {
                        span: self.last_span,
                        message: "unclosed parenthesis".into(),
                        expected: vec![")".into()],
                    }),
                }
            }
            Tok::RParen | Tok::Eof | Tok::Amp | Tok::Pipe | Tok::Arrow | Tok::DArrow
            | Tok::Dot => Err(self.err("expected a formula", &["proposition", "(", "!", "E", "A"])),
        }
    }
}

// ---------------------------------------------------------------------------
// Elaboration into state/path ASTs

/// True when the expression contains no bare temporal operator, i.e. it can
/// be read as a state formula.
fn is_state_shape(e: &SExpr) -> bool {
    use SExpr::*;
    match e {
        True | False | Root | Var(_) | Ident(_) => true,
        Exists(_) | Forall(_) => true,
        Not(a) => is_state_shape(a),
        And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => is_state_shape(a) && is_state_shape(b),
        Bind(_, a) | AtVar(_, a) | AtRoot(a) => is_state_shape(a),
        Next(_) | Until(_, _) | Since(_, _) | Eventually(_) | Always(_) | Previous(_)
        | WeakPrevious(_) | InfOften(_) | AlmAlways(_) => false,
    }
}

fn elab_state(e: &SExpr, whole: SourceSpan) -> Result<StateFormula, ParseError> {
    use SExpr::*;
    match e {
        True => Ok(StateFormula::True),
        False => Ok(StateFormula::False),
        Root => Ok(StateFormula::Root),
        Var(i) => Ok(var(*i)),
        Ident(name) => Ok(prop(name)),
        Not(a) => Ok(not(elab_state(a, whole)?)),
        And(a, b) => Ok(and(elab_state(a, whole)?, elab_state(b, whole)?)),
        Or(a, b) => Ok(or(elab_state(a, whole)?, elab_state(b, whole)?)),
        Implies(a, b) => Ok(implies(elab_state(a, whole)?, elab_state(b, whole)?)),
        Iff(a, b) => Ok(iff(elab_state(a, whole)?, elab_state(b, whole)?)),
        Exists(p) => Ok(exists(elab_path(p, whole)?)),
        Forall(p) => Ok(forall(elab_path(p, whole)?)),
        Bind(i, a) => Ok(bind(*i, elab_state(a, whole)?)),
        AtVar(i, a) => Ok(at_var(*i, elab_state(a, whole)?)),
        AtRoot(a) => Ok(at_root(elab_state(a, whole)?)),
        Next(_) | Until(_, _) | Since(_, _) | Eventually(_) | Always(_) | Previous(_)
        | WeakPrevious(_) | InfOften(_) | AlmAlways(_) => {
            Err(ParseError::PathOperatorOutsideQuantifier { span: whole })
        }
    }
}

fn elab_path(e: &SExpr, whole: SourceSpan) -> Result<PathFormula, ParseError> {
    use SExpr::*;
    if is_state_shape(e) {
        return Ok(lift(elab_state(e, whole)?));
    }
    match e {
        Not(a) => Ok(pnot(elab_path(a, whole)?)),
        And(a, b) => Ok(pand(elab_path(a, whole)?, elab_path(b, whole)?)),
        Or(a, b) => Ok(por(elab_path(a, whole)?, elab_path(b, whole)?)),
        Implies(a, b) => Ok(pimplies(elab_path(a, whole)?, elab_path(b, whole)?)),
        Iff(a, b) => Ok(piff(elab_path(a, whole)?, elab_path(b, whole)?)),
        Next(a) => Ok(next(elab_path(a, whole)?)),
        Until(a, b) => Ok(until(elab_path(a, whole)?, elab_path(b, whole)?)),
        Since(a, b) => Ok(since(elab_path(a, whole)?, elab_path(b, whole)?)),
        Eventually(a) => Ok(eventually(elab_path(a, whole)?)),
        Always(a) => Ok(always(elab_path(a, whole)?)),
        Previous(a) => Ok(previous(elab_path(a, whole)?)),
        WeakPrevious(a) => Ok(weak_previous(elab_path(a, whole)?)),
        InfOften(a) => Ok(inf_often(elab_path(a, whole)?)),
        AlmAlways(a) => Ok(alm_always(elab_path(a, whole)?)),
        // state-shaped expressions were handled above
        _ => unreachable!("state shapes are lifted before matching"),
    }
}

fn parse_surface(text: &str) -> Result<(SExpr, SourceSpan), ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, last_span: SourceSpan::new(0, 0) };
    let e = p.parse_formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("trailing input after formula", &["end of input"]));
    }
    Ok((e, SourceSpan::new(0, text.len())))
}

/// Parse a state formula.
pub fn parse_formula(text: &str) -> Result<StateFormula, ParseError> {
    let (e, whole) = parse_surface(text)?;
    elab_state(&e, whole)
}

/// Parse either kind of formula; bare path operators at the top level yield a
/// path formula.
pub fn parse_any_formula(text: &str) -> Result<Formula, ParseError> {
    let (e, whole) = parse_surface(text)?;
    if is_state_shape(&e) {
        Ok(Formula::State(elab_state(&e, whole)?))
    } else {
        Ok(Formula::Path(elab_path(&e, whole)?))
    }
}

// ---------------------------------------------------------------------------
// Printer

// Binding strengths used when printing; parentheses are emitted whenever a
// child's strength is below what its context requires.
const PREC_QUANT: u8 = 10;
const PREC_IMPLIES: u8 = 50;
const PREC_OR: u8 = 60;
const PREC_AND: u8 = 70;
const PREC_UNTIL: u8 = 80;
const PREC_UNARY: u8 = 90;
const PREC_ATOM: u8 = 100;

fn paren(needed: u8, have: u8, body: String) -> String {
    if have < needed {
        format!("({body})")
    } else {
        body
    }
}

fn show_state(f: &StateFormula, min: u8) -> String {
    use StateFormula::*;
    let (s, prec) = match f {
        True => ("true".to_string(), PREC_ATOM),
        False => ("false".to_string(), PREC_ATOM),
        Root => ("root".to_string(), PREC_ATOM),
        Prop(p) => (p.clone(), PREC_ATOM),
        Var(i) => (format!("x{i}"), PREC_ATOM),
        Not(a) => (format!("! {}", show_state(a, PREC_UNARY)), PREC_UNARY),
        And(a, b) => (
            format!("{} & {}", show_state(a, PREC_AND), show_state(b, PREC_AND + 1)),
            PREC_AND,
        ),
        Or(a, b) => (
            format!("{} | {}", show_state(a, PREC_OR), show_state(b, PREC_OR + 1)),
            PREC_OR,
        ),
        Implies(a, b) => (
            format!(
                "{} -> {}",
                show_state(a, PREC_IMPLIES + 1),
                show_state(b, PREC_IMPLIES)
            ),
            PREC_IMPLIES,
        ),
        Exists(p) => (format!("E {}", show_path(p, PREC_QUANT)), PREC_QUANT),
        Forall(p) => (format!("A {}", show_path(p, PREC_QUANT)), PREC_QUANT),
        Bind(i, a) => (format!("down x{i} . {}", show_state(a, PREC_QUANT)), PREC_QUANT),
        AtVar(i, a) => (format!("@x{i} {}", show_state(a, PREC_UNARY)), PREC_UNARY),
        AtRoot(a) => (format!("@root {}", show_state(a, PREC_UNARY)), PREC_UNARY),
    };
    paren(min, prec, s)
}

fn show_path(p: &PathFormula, min: u8) -> String {
    use PathFormula::*;
    let (s, prec) = match p {
        State(f) => return show_state(f, min),
        Not(a) => (format!("! {}", show_path(a, PREC_UNARY)), PREC_UNARY),
        And(a, b) => (
            format!("{} & {}", show_path(a, PREC_AND), show_path(b, PREC_AND + 1)),
            PREC_AND,
        ),
        Or(a, b) => (
            format!("{} | {}", show_path(a, PREC_OR), show_path(b, PREC_OR + 1)),
            PREC_OR,
        ),
        Next(a) => (format!("X {}", show_path(a, PREC_UNARY)), PREC_UNARY),
        Eventually(a) => (format!("F {}", show_path(a, PREC_UNARY)), PREC_UNARY),
        Always(a) => (format!("G {}", show_path(a, PREC_UNARY)), PREC_UNARY),
        Previous(a) => (format!("Y {}", show_path(a, PREC_UNARY)), PREC_UNARY),
        WeakPrevious(a) => (format!("wY {}", show_path(a, PREC_UNARY)), PREC_UNARY),
        InfinitelyOften(a) => (format!("Finf {}", show_path(a, PREC_UNARY)), PREC_UNARY),
        AlmostAlways(a) => (format!("Ginf {}", show_path(a, PREC_UNARY)), PREC_UNARY),
        Until(a, b) => (
            format!(
                "{} U {}",
                show_path(a, PREC_UNTIL + 1),
                show_path(b, PREC_UNTIL)
            ),
            PREC_UNTIL,
        ),
        Since(a, b) => (
            format!(
                "{} S {}",
                show_path(a, PREC_UNTIL + 1),
                show_path(b, PREC_UNTIL)
            ),
            PREC_UNTIL,
        ),
    };
    paren(min, prec, s)
}

/// Render a state formula; `parse_formula` reparses the output to a
/// structurally equal AST.
pub fn print_formula(f: &StateFormula) -> String {
    show_state(f, 0)
}

pub fn print_path_formula(p: &PathFormula) -> String {
    show_path(p, 0)
}

pub fn print_any_formula(f: &Formula) -> String {
    match f {
        Formula::State(s) => print_formula(s),
        Formula::Path(p) => print_path_formula(p),
    }
}
