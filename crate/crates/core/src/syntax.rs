//! Process expressions with guarded recursion.
//!
//! ```text
//! E ::= a1.E1 + ... + an.En  |  mu X. a1.E1 + ... + an.En  |  X
//! ```
//!
//! The body of a `mu` binder is always a sum of action prefixes, which keeps
//! every recursive variable underneath at least one prefix. The AST encodes
//! that structurally: [`ProcessExpr::Mu`] holds summands, not an arbitrary
//! expression.

use std::collections::BTreeSet;
use std::fmt;
use std::iter::Peekable;
use std::str::CharIndices;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("unguarded mu body at column {column}: `mu {binder}.` must bind a sum of prefixes")]
    UnguardedMu { column: usize, binder: String },
    #[error("invalid action name `{0}` (expected [a-z][a-z0-9_]*)")]
    InvalidAction(String),
    #[error("invalid variable name `{0}` (expected [A-Z][A-Za-z0-9_]*)")]
    InvalidVar(String),
    #[error("open substituend: free variables {{{}}}", join_vars(.0))]
    OpenSubstituend(BTreeSet<VarName>),
    #[error("not a process: free variables {{{}}}", join_vars(.0))]
    NotAProcess(BTreeSet<VarName>),
}

fn join_vars(vars: &BTreeSet<VarName>) -> String {
    vars.iter()
        .map(VarName::as_str)
        .collect::<Vec<_>>()
        .join(", ")
}

/// An action label such as `a` or `send_1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action(String);

impl Action {
    pub fn new(name: impl Into<String>) -> Result<Self, SyntaxError> {
        let name = name.into();
        if is_action_name(&name) {
            Ok(Action(name))
        } else {
            Err(SyntaxError::InvalidAction(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A recursion variable such as `X`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName(String);

impl VarName {
    pub fn new(name: impl Into<String>) -> Result<Self, SyntaxError> {
        let name = name.into();
        if is_var_name(&name) {
            Ok(VarName(name))
        } else {
            Err(SyntaxError::InvalidVar(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn is_action_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn is_var_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// One `a.E` term of a sum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Summand {
    pub action: Action,
    pub target: ProcessExpr,
}

impl Summand {
    pub fn new(action: Action, target: ProcessExpr) -> Self {
        Summand { action, target }
    }
}

/// Equality is literal: `mu X. a.X` and `mu Y. a.Y` are different expressions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcessExpr {
    /// An indexed family of prefixes; the empty family is `0`.
    Sum(Vec<Summand>),
    Mu(VarName, Vec<Summand>),
    Var(VarName),
}

impl ProcessExpr {
    pub fn nil() -> Self {
        ProcessExpr::Sum(Vec::new())
    }

    pub fn prefix(action: Action, target: ProcessExpr) -> Self {
        ProcessExpr::Sum(vec![Summand::new(action, target)])
    }

    pub fn var(name: VarName) -> Self {
        ProcessExpr::Var(name)
    }

    pub fn is_sum(&self) -> bool {
        matches!(self, ProcessExpr::Sum(_))
    }

    pub fn is_process(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Variables occurring outside the scope of a binder of the same name.
    pub fn free_vars(&self) -> BTreeSet<VarName> {
        let mut free = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut free);
        free
    }

    /// Replaces every free occurrence of `var` by the closed expression `replacement`.
    ///
    /// Substitution stops at inner binders named `var`. No renaming is needed
    /// because a closed replacement cannot be captured.
    pub fn substitute(
        &self,
        var: &VarName,
        replacement: &ProcessExpr,
    ) -> Result<ProcessExpr, SyntaxError> {
        let open = replacement.free_vars();
        if !open.is_empty() {
            return Err(SyntaxError::OpenSubstituend(open));
        }
        Ok(subst(self, var, replacement))
    }

    /// Exposes the top-level sum of a process: `mu X. S` becomes `S{X := mu X. S}`.
    /// A sum is returned unchanged.
    pub fn head_unfold(&self) -> Result<ProcessExpr, SyntaxError> {
        self.require_process()?;
        Ok(ProcessExpr::Sum(self.head_summands_unchecked()))
    }

    /// The summands of [`head_unfold`](Self::head_unfold).
    pub fn head_summands(&self) -> Result<Vec<Summand>, SyntaxError> {
        self.require_process()?;
        Ok(self.head_summands_unchecked())
    }

    pub(crate) fn head_summands_unchecked(&self) -> Vec<Summand> {
        match self {
            ProcessExpr::Sum(summands) => summands.clone(),
            ProcessExpr::Mu(x, body) => body
                .iter()
                .map(|s| Summand::new(s.action.clone(), subst(&s.target, x, self)))
                .collect(),
            ProcessExpr::Var(_) => unreachable!("closed expressions are never bare variables"),
        }
    }

    pub(crate) fn require_process(&self) -> Result<(), SyntaxError> {
        let free = self.free_vars();
        if free.is_empty() {
            Ok(())
        } else {
            Err(SyntaxError::NotAProcess(free))
        }
    }

    /// Number of AST nodes, counting the body sum of a `mu` as its own node.
    pub fn size(&self) -> usize {
        match self {
            ProcessExpr::Var(_) => 1,
            ProcessExpr::Sum(s) => 1 + s.iter().map(|s| s.target.size()).sum::<usize>(),
            ProcessExpr::Mu(_, s) => 2 + s.iter().map(|s| s.target.size()).sum::<usize>(),
        }
    }

    /// Debug-style tree notation, e.g. `Mu(X, Sum[(a, Var X)])`.
    pub fn ast_string(&self) -> String {
        let mut out = String::new();
        write_ast(self, &mut out);
        out
    }
}

fn collect_free(e: &ProcessExpr, bound: &mut Vec<VarName>, free: &mut BTreeSet<VarName>) {
    match e {
        ProcessExpr::Var(x) => {
            if !bound.contains(x) {
                free.insert(x.clone());
            }
        }
        ProcessExpr::Sum(summands) => {
            for s in summands {
                collect_free(&s.target, bound, free);
            }
        }
        ProcessExpr::Mu(x, body) => {
            bound.push(x.clone());
            for s in body {
                collect_free(&s.target, bound, free);
            }
            bound.pop();
        }
    }
}

fn subst(e: &ProcessExpr, var: &VarName, replacement: &ProcessExpr) -> ProcessExpr {
    let subst_all = |summands: &[Summand]| {
        summands
            .iter()
            .map(|s| Summand::new(s.action.clone(), subst(&s.target, var, replacement)))
            .collect()
    };
    match e {
        ProcessExpr::Var(x) if x == var => replacement.clone(),
        ProcessExpr::Var(_) => e.clone(),
        ProcessExpr::Sum(summands) => ProcessExpr::Sum(subst_all(summands)),
        ProcessExpr::Mu(x, _) if x == var => e.clone(),
        ProcessExpr::Mu(x, body) => ProcessExpr::Mu(x.clone(), subst_all(body)),
    }
}

fn write_ast(e: &ProcessExpr, out: &mut String) {
    fn write_sum(summands: &[Summand], out: &mut String) {
        out.push_str("Sum[");
        for (i, s) in summands.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push('(');
            out.push_str(s.action.as_str());
            out.push_str(", ");
            write_ast(&s.target, out);
            out.push(')');
        }
        out.push(']');
    }
    match e {
        ProcessExpr::Var(x) => {
            out.push_str("Var ");
            out.push_str(x.as_str());
        }
        ProcessExpr::Sum(s) => write_sum(s, out),
        ProcessExpr::Mu(x, body) => {
            out.push_str("Mu(");
            out.push_str(x.as_str());
            out.push_str(", ");
            write_sum(body, out);
            out.push(')');
        }
    }
}

// ---------------------------------------------------------------------------
// Rendering

/// Canonical concrete syntax. `parse(&render(e)) == Ok(e)` for every `e`.
pub fn render(e: &ProcessExpr) -> String {
    let mut out = String::new();
    render_expr(e, true, &mut out);
    out
}

impl fmt::Display for ProcessExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

// `tail` is true when nothing follows this position before a closing
// parenthesis or the end of input, so a `mu` may extend to the right freely.
fn render_expr(e: &ProcessExpr, tail: bool, out: &mut String) {
    match e {
        ProcessExpr::Var(x) => out.push_str(x.as_str()),
        ProcessExpr::Sum(s) => render_sum(s, tail, out),
        ProcessExpr::Mu(x, body) => {
            out.push_str("mu ");
            out.push_str(x.as_str());
            out.push_str(". ");
            render_sum(body, tail, out);
        }
    }
}

fn render_sum(summands: &[Summand], tail: bool, out: &mut String) {
    if summands.is_empty() {
        out.push('0');
        return;
    }
    let last = summands.len() - 1;
    for (i, s) in summands.iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        render_prefix(s, tail && i == last, out);
    }
}

fn render_prefix(s: &Summand, tail: bool, out: &mut String) {
    out.push_str(s.action.as_str());
    out.push('.');
    match &s.target {
        ProcessExpr::Sum(inner) if inner.is_empty() => out.push('0'),
        ProcessExpr::Sum(inner) if inner.len() == 1 => render_prefix(&inner[0], tail, out),
        ProcessExpr::Var(x) => out.push_str(x.as_str()),
        ProcessExpr::Mu(..) if tail => render_expr(&s.target, true, out),
        other => {
            out.push('(');
            render_expr(other, true, out);
            out.push(')');
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Zero,
    Dot,
    Plus,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Lower(s) | Tok::Upper(s) => write!(f, "`{s}`"),
            Tok::Zero => f.write_str("`0`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let mut tokens = Vec::new();
    let mut chars: Peekable<CharIndices<'_>> = text.char_indices().peekable();
    let column = |byte: usize| text[..byte].chars().count() + 1;
    while let Some(&(start, c)) = chars.peek() {
        let col = column(start);
        let simple = match c {
            '.' => Some(Tok::Dot),
            '+' => Some(Tok::Plus),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '0' => Some(Tok::Zero),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            tokens.push((tok, col));
        } else if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_alphabetic() {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    end = i + c.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let word = &text[start..end];
            if is_action_name(word) {
                tokens.push((Tok::Lower(word.to_string()), col));
            } else if is_var_name(word) {
                tokens.push((Tok::Upper(word.to_string()), col));
            } else {
                return Err(SyntaxError::Parse {
                    column: col,
                    message: format!("`{word}` is neither an action nor a variable name"),
                });
            }
        } else {
            return Err(SyntaxError::Parse {
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    tokens.push((Tok::Eof, text.chars().count() + 1));
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
}

/// Parses the concrete syntax produced by [`render`].
///
/// `.` binds tighter than `+`, `mu X.` extends as far right as possible and
/// parentheses group. A word `mu` followed by a variable name starts a
/// binder; otherwise it is an ordinary action.
pub fn parse(text: &str) -> Result<ProcessExpr, SyntaxError> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let expr = parser.expr()?;
    parser.expect(&Tok::Eof, "end of input")?;
    Ok(expr)
}

impl std::str::FromStr for ProcessExpr {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        let i = (self.pos + 1).min(self.tokens.len() - 1);
        &self.tokens[i].0
    }

    fn column(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error<T>(&self, expected: &str) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse {
            column: self.column(),
            message: format!("expected {expected}, found {}", self.peek()),
        })
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), SyntaxError> {
        if self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(what)
        }
    }

    fn at_binder(&self) -> bool {
        matches!(self.peek(), Tok::Lower(w) if w == "mu") && matches!(self.peek2(), Tok::Upper(_))
    }

    fn expr(&mut self) -> Result<ProcessExpr, SyntaxError> {
        match self.peek() {
            Tok::Upper(name) => {
                let var = VarName(name.clone());
                self.bump();
                Ok(ProcessExpr::Var(var))
            }
            _ if self.at_binder() => self.mu(),
            _ => self.sum().map(ProcessExpr::Sum),
        }
    }

    fn sum(&mut self) -> Result<Vec<Summand>, SyntaxError> {
        if *self.peek() == Tok::Zero {
            self.bump();
            return Ok(Vec::new());
        }
        let mut summands = vec![self.prefix()?];
        while *self.peek() == Tok::Plus {
            self.bump();
            summands.push(self.prefix()?);
        }
        Ok(summands)
    }

    fn prefix(&mut self) -> Result<Summand, SyntaxError> {
        let action = match self.peek() {
            Tok::Lower(name) if !self.at_binder() => Action(name.clone()),
            _ => return self.error("an action prefix"),
        };
        self.bump();
        self.expect(&Tok::Dot, "`.` after action")?;
        let target = self.continuation()?;
        Ok(Summand::new(action, target))
    }

    fn continuation(&mut self) -> Result<ProcessExpr, SyntaxError> {
        match self.peek() {
            Tok::Zero => {
                self.bump();
                Ok(ProcessExpr::nil())
            }
            Tok::Upper(name) => {
                let var = VarName(name.clone());
                self.bump();
                Ok(ProcessExpr::Var(var))
            }
            Tok::LParen => self.parenthesized(),
            _ if self.at_binder() => self.mu(),
            Tok::Lower(_) => Ok(ProcessExpr::Sum(vec![self.prefix()?])),
            _ => self.error("`0`, a variable, `(`, `mu` or an action prefix"),
        }
    }

    fn parenthesized(&mut self) -> Result<ProcessExpr, SyntaxError> {
        self.expect(&Tok::LParen, "`(`")?;
        let inner = self.expr()?;
        self.expect(&Tok::RParen, "`)`")?;
        Ok(inner)
    }

    fn mu(&mut self) -> Result<ProcessExpr, SyntaxError> {
        self.bump(); // `mu`
        let binder = match self.bump() {
            Tok::Upper(name) => VarName(name),
            _ => unreachable!("at_binder checked the variable"),
        };
        self.expect(&Tok::Dot, "`.` after binder")?;
        let column = self.column();
        let unguarded = || SyntaxError::UnguardedMu {
            column,
            binder: binder.as_str().to_string(),
        };
        let body = match self.peek() {
            Tok::Upper(_) => return Err(unguarded()),
            _ if self.at_binder() => return Err(unguarded()),
            Tok::LParen => match self.parenthesized()? {
                ProcessExpr::Sum(s) => s,
                _ => return Err(unguarded()),
            },
            _ => self.sum()?,
        };
        Ok(ProcessExpr::Mu(binder, body))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn act(name: &str) -> Action {
        Action::new(name).unwrap()
    }

    fn var(name: &str) -> VarName {
        VarName::new(name).unwrap()
    }

    fn pre(a: &str, e: ProcessExpr) -> Summand {
        Summand::new(act(a), e)
    }

    #[test]
    fn parses_recursive_example() {
        let e = parse("mu X. a.a.X").unwrap();
        let expected = ProcessExpr::Mu(
            var("X"),
            vec![pre(
                "a",
                ProcessExpr::Sum(vec![pre("a", ProcessExpr::Var(var("X")))]),
            )],
        );
        assert_eq!(e, expected);
        assert_eq!(render(&e), "mu X. a.a.X");
    }

    #[test]
    fn nil_and_binary_sum() {
        assert_eq!(parse("0").unwrap(), ProcessExpr::nil());
        assert_eq!(render(&ProcessExpr::nil()), "0");
        let e = parse("a.0 + b.0").unwrap();
        assert_eq!(
            e,
            ProcessExpr::Sum(vec![
                pre("a", ProcessExpr::nil()),
                pre("b", ProcessExpr::nil())
            ])
        );
        assert_eq!(render(&e), "a.0 + b.0");
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(
            parse("mu X.a.a.X").unwrap(),
            parse("  mu  X .\n a . a . X ").unwrap()
        );
    }

    #[test]
    fn rejects_unguarded_bodies() {
        assert!(matches!(
            parse("mu X. X"),
            Err(SyntaxError::UnguardedMu { .. })
        ));
        assert!(matches!(
            parse("mu X. mu Y. a.X"),
            Err(SyntaxError::UnguardedMu { .. })
        ));
        assert!(matches!(
            parse("mu X. (mu Y. a.Y)"),
            Err(SyntaxError::UnguardedMu { .. })
        ));
        assert!(parse("mu X. (a.X + b.0)").is_ok());
    }

    #[test]
    fn syntax_errors_carry_columns() {
        match parse("a.0 + ") {
            Err(SyntaxError::Parse { column, .. }) => assert_eq!(column, 7),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("a.").is_err());
        assert!(parse("a.0 b.0").is_err());
        assert!(parse("0 + a.0").is_err());
        assert!(parse("a.0)").is_err());
        assert!(parse("a.0 # c").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn mu_as_an_action_name() {
        let e = parse("mu.0").unwrap();
        assert_eq!(e, ProcessExpr::prefix(act("mu"), ProcessExpr::nil()));
        assert_eq!(parse(&render(&e)).unwrap(), e);
    }

    #[test]
    fn mu_extends_right_and_renders_with_parens_when_needed() {
        let e = parse("a.mu X. b.X + c.X").unwrap();
        let ProcessExpr::Sum(outer) = &e else {
            panic!()
        };
        assert_eq!(outer.len(), 1);
        assert!(matches!(&outer[0].target, ProcessExpr::Mu(_, body) if body.len() == 2));

        let shadow = ProcessExpr::Sum(vec![
            pre(
                "b",
                ProcessExpr::Mu(var("X"), vec![pre("a", ProcessExpr::Var(var("X")))]),
            ),
            pre("c", ProcessExpr::Var(var("X"))),
        ]);
        assert_eq!(render(&shadow), "b.(mu X. a.X) + c.X");
        assert_eq!(parse(&render(&shadow)).unwrap(), shadow);
    }

    #[test]
    fn nested_sums_are_parenthesized() {
        let e = parse("a.(b.0 + c.0) + d.0").unwrap();
        assert_eq!(render(&e), "a.(b.0 + c.0) + d.0");
        assert_eq!(parse("a.(b.0)").unwrap(), parse("a.b.0").unwrap());
    }

    #[test]
    fn free_variables() {
        assert_eq!(
            ProcessExpr::Var(var("X")).free_vars(),
            BTreeSet::from([var("X")])
        );
        assert!(parse("mu X. a.X").unwrap().free_vars().is_empty());
        let e = parse("b.(mu X. a.X) + c.X").unwrap();
        assert_eq!(e.free_vars(), BTreeSet::from([var("X")]));
        assert!(!e.is_process());
    }

    #[test]
    fn substitution() {
        let body = parse("a.a.X").unwrap();
        let p = parse("mu X. a.a.X").unwrap();
        let out = body.substitute(&var("X"), &p).unwrap();
        assert_eq!(render(&out), "a.a.mu X. a.a.X");

        let y = ProcessExpr::Var(var("Y"));
        assert_eq!(y.substitute(&var("X"), &p).unwrap(), y);

        let shadow = parse("b.(mu X. a.X) + c.X").unwrap();
        let out = shadow.substitute(&var("X"), &ProcessExpr::nil()).unwrap();
        assert_eq!(out, parse("b.(mu X. a.X) + c.0").unwrap());

        assert!(matches!(
            body.substitute(&var("X"), &ProcessExpr::Var(var("Z"))),
            Err(SyntaxError::OpenSubstituend(_))
        ));
    }

    #[test]
    fn head_unfolding() {
        let p = parse("mu X. a.a.X").unwrap();
        assert_eq!(render(&p.head_unfold().unwrap()), "a.a.mu X. a.a.X");
        let q = parse("mu Y. a.a.a.Y").unwrap();
        assert_eq!(render(&q.head_unfold().unwrap()), "a.a.a.mu Y. a.a.a.Y");
        let s = parse("a.0 + b.0").unwrap();
        assert_eq!(s.head_unfold().unwrap(), s);
        assert!(matches!(
            parse("a.X").unwrap().head_unfold(),
            Err(SyntaxError::NotAProcess(_))
        ));
    }

    #[test]
    fn name_validation() {
        assert!(Action::new("a_1").is_ok());
        assert!(Action::new("A").is_err());
        assert!(Action::new("").is_err());
        assert!(VarName::new("Xs_2").is_ok());
        assert!(VarName::new("x").is_err());
    }

    #[test]
    fn ast_notation() {
        let e = parse("mu X. a.a.X").unwrap();
        assert_eq!(e.ast_string(), "Mu(X, Sum[(a, Sum[(a, Var X)])])");
        assert_eq!(e.size(), 4);
    }
}
