//! Comparison expressions over attributes and trace aggregates.
//!
//! The grammar is deliberately small:
//!
//! ```text
//! expr    := and ( "or" and )*
//! and     := clause ( "and" clause )*
//! clause  := operand op literal
//! operand := ident | ("min" | "max" | "final") "(" ident ")"
//! op      := "<" | "<=" | "=" | "==" | ">=" | ">"
//! literal := number | "true" | "false" | quoted string
//! ```
//!
//! `and` binds tighter than `or`. Identifiers may contain dots so signal
//! names like `grid.u_pcc` work unquoted.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::value::ScalarValue;
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        };
        f.write_str(s)
    }
}

/// Trace aggregate applied to a named signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregate {
    Min,
    Max,
    Final,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Operand {
    /// Plain attribute or signal reference.
    Attribute(String),
    /// Aggregate over a named signal, e.g. `min(u_pcc)`.
    Aggregate(AggregateRef),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AggregateRef {
    pub kind: AggregateKind,
    pub signal: String,
}

/// Orderable mirror of [`Aggregate`] so operands can live in sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AggregateKind {
    Min,
    Max,
    Final,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub operand: Operand,
    pub op: CmpOp,
    pub literal: ScalarValue,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Cmp(Comparison),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Error, PartialEq)]
pub enum ExprError {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown reference `{0}`")]
    UnknownReference(String),
    #[error("cannot order values of type {0}")]
    Unordered(String),
}

/// Supplies operand values during evaluation.
pub trait EvalContext {
    fn resolve(&self, operand: &Operand) -> Option<ScalarValue>;
}

impl Expr {
    pub fn parse(input: &str) -> Result<Expr, ExprError> {
        Parser::new(input).parse()
    }

    /// Every operand mentioned anywhere in the expression.
    pub fn referenced_operands(&self) -> BTreeSet<Operand> {
        let mut out = BTreeSet::new();
        self.collect_operands(&mut out);
        out
    }

    fn collect_operands(&self, out: &mut BTreeSet<Operand>) {
        match self {
            Expr::Cmp(c) => {
                out.insert(c.operand.clone());
            }
            Expr::And(a, b) | Expr::Or(a, b) => {
                a.collect_operands(out);
                b.collect_operands(out);
            }
        }
    }

    pub fn evaluate(&self, ctx: &dyn EvalContext) -> Result<bool, ExprError> {
        match self {
            Expr::And(a, b) => Ok(a.evaluate(ctx)? && b.evaluate(ctx)?),
            Expr::Or(a, b) => Ok(a.evaluate(ctx)? || b.evaluate(ctx)?),
            Expr::Cmp(c) => {
                let value = ctx
                    .resolve(&c.operand)
                    .ok_or_else(|| ExprError::UnknownReference(operand_name(&c.operand)))?;
                compare(&value, c.op, &c.literal)
            }
        }
    }
}

fn operand_name(op: &Operand) -> String {
    match op {
        Operand::Attribute(name) => name.clone(),
        Operand::Aggregate(a) => {
            let kind = match a.kind {
                AggregateKind::Min => "min",
                AggregateKind::Max => "max",
                AggregateKind::Final => "final",
            };
            format!("{kind}({})", a.signal)
        }
    }
}

fn compare(value: &ScalarValue, op: CmpOp, literal: &ScalarValue) -> Result<bool, ExprError> {
    if let (Some(a), Some(b)) = (value.as_real(), literal.as_real()) {
        return Ok(match op {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Eq => a == b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
        });
    }
    // Non-numeric values support equality only.
    match op {
        CmpOp::Eq => Ok(value == literal),
        _ => Err(ExprError::Unordered(value.data_type().to_string())),
    }
}

struct Parser<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Self { input, pos: 0 }
    }

    fn parse(mut self) -> Result<Expr, ExprError> {
        let expr = self.parse_or()?;
        self.skip_ws();
        if self.pos != self.input.len() {
            return Err(self.err("trailing input"));
        }
        Ok(expr)
    }

    fn parse_or(&mut self) -> Result<Expr, ExprError> {
        let mut left = self.parse_and()?;
        while self.eat_keyword("or") {
            let right = self.parse_and()?;
            left = Expr::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn parse_and(&mut self) -> Result<Expr, ExprError> {
        let mut left = self.parse_clause()?;
        while self.eat_keyword("and") {
            let right = self.parse_clause()?;
            left = Expr::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn parse_clause(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let ident = self.parse_ident()?;
        let operand = match ident.as_str() {
            kind @ ("min" | "max" | "final") if self.peek_char() == Some('(') => {
                self.pos += 1;
                let signal = self.parse_ident()?;
                self.skip_ws();
                if self.peek_char() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                let kind = match kind {
                    "min" => AggregateKind::Min,
                    "max" => AggregateKind::Max,
                    _ => AggregateKind::Final,
                };
                Operand::Aggregate(AggregateRef { kind, signal })
            }
            _ => Operand::Attribute(ident),
        };
        let op = self.parse_op()?;
        let literal = self.parse_literal()?;
        Ok(Expr::Cmp(Comparison {
            operand,
            op,
            literal,
        }))
    }

    fn parse_ident(&mut self) -> Result<String, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.input[self.pos..];
        let mut len = 0;
        for (i, c) in rest.char_indices() {
            let ok = if i == 0 {
                c.is_ascii_alphabetic() || c == '_'
            } else {
                c.is_ascii_alphanumeric() || c == '_' || c == '.'
            };
            if !ok {
                break;
            }
            len = i + c.len_utf8();
        }
        if len == 0 {
            return Err(self.err("expected identifier"));
        }
        self.pos = start + len;
        Ok(rest[..len].to_string())
    }

    fn parse_op(&mut self) -> Result<CmpOp, ExprError> {
        self.skip_ws();
        let rest = &self.input[self.pos..];
        let (op, len) = if rest.starts_with("<=") {
            (CmpOp::Le, 2)
        } else if rest.starts_with(">=") {
            (CmpOp::Ge, 2)
        } else if rest.starts_with("==") {
            (CmpOp::Eq, 2)
        } else if rest.starts_with('<') {
            (CmpOp::Lt, 1)
        } else if rest.starts_with('>') {
            (CmpOp::Gt, 1)
        } else if rest.starts_with('=') {
            (CmpOp::Eq, 1)
        } else {
            return Err(self.err("expected comparison operator"));
        };
        self.pos += len;
        Ok(op)
    }

    fn parse_literal(&mut self) -> Result<ScalarValue, ExprError> {
        self.skip_ws();
        let rest = &self.input[self.pos..];
        if let Some(quote) = rest.chars().next().filter(|c| *c == '"' || *c == '\'') {
            let body = &rest[1..];
            let end = body
                .find(quote)
                .ok_or_else(|| self.err("unterminated string literal"))?;
            self.pos += end + 2;
            return Ok(ScalarValue::String(body[..end].to_string()));
        }
        if rest.starts_with("true") && !continues_ident(rest, 4) {
            self.pos += 4;
            return Ok(ScalarValue::Boolean(true));
        }
        if rest.starts_with("false") && !continues_ident(rest, 5) {
            self.pos += 5;
            return Ok(ScalarValue::Boolean(false));
        }
        let mut len = 0;
        for (i, c) in rest.char_indices() {
            let ok = c.is_ascii_digit()
                || c == '.'
                || c == 'e'
                || c == 'E'
                || ((c == '+' || c == '-')
                    && (i == 0 || matches!(rest.as_bytes()[i - 1], b'e' | b'E')));
            if !ok {
                break;
            }
            len = i + 1;
        }
        if len == 0 {
            return Err(self.err("expected literal"));
        }
        let text = &rest[..len];
        self.pos += len;
        if !text.contains(['.', 'e', 'E']) {
            if let Ok(v) = text.parse::<i64>() {
                return Ok(ScalarValue::Integer(v));
            }
        }
        text.parse::<Real>()
            .map(ScalarValue::Real)
            .map_err(|_| self.err("malformed number"))
    }

    fn eat_keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let rest = &self.input[self.pos..];
        if rest.starts_with(word) && !continues_ident(rest, word.len()) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.input[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self
            .peek_char()
            .map(|c| c.is_ascii_whitespace())
            .unwrap_or(false)
        {
            self.pos += 1;
        }
    }

    fn err(&self, message: &str) -> ExprError {
        ExprError::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }
}

fn continues_ident(rest: &str, at: usize) -> bool {
    rest[at..]
        .chars()
        .next()
        .map(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    struct MapCtx(BTreeMap<String, ScalarValue>);

    impl EvalContext for MapCtx {
        fn resolve(&self, operand: &Operand) -> Option<ScalarValue> {
            match operand {
                Operand::Attribute(name) => self.0.get(name).cloned(),
                Operand::Aggregate(_) => None,
            }
        }
    }

    fn ctx(pairs: &[(&str, ScalarValue)]) -> MapCtx {
        MapCtx(
            pairs
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        )
    }

    #[test]
    fn parses_and_evaluates_conjunction() {
        let e = Expr::parse("voltage >= 0.9 and voltage <= 1.1").unwrap();
        let c = ctx(&[("voltage", ScalarValue::Real(1.0))]);
        assert!(e.evaluate(&c).unwrap());
        let c = ctx(&[("voltage", ScalarValue::Real(1.2))]);
        assert!(!e.evaluate(&c).unwrap());
    }

    #[test]
    fn and_binds_tighter_than_or() {
        // a = 1 or (a = 2 and b = 3)
        let e = Expr::parse("a = 1 or a = 2 and b = 3").unwrap();
        assert!(e
            .evaluate(&ctx(&[
                ("a", ScalarValue::Integer(1)),
                ("b", ScalarValue::Integer(0)),
            ]))
            .unwrap());
        assert!(!e
            .evaluate(&ctx(&[
                ("a", ScalarValue::Integer(2)),
                ("b", ScalarValue::Integer(0)),
            ]))
            .unwrap());
    }

    #[test]
    fn aggregates_and_dotted_names_parse() {
        let e = Expr::parse("min(grid.u_pcc) >= 0.15").unwrap();
        let ops = e.referenced_operands();
        assert_eq!(ops.len(), 1);
        assert!(matches!(
            ops.iter().next().unwrap(),
            Operand::Aggregate(AggregateRef {
                kind: AggregateKind::Min,
                ..
            })
        ));
    }

    #[test]
    fn string_and_bool_literals() {
        let e = Expr::parse("mode = 'islanded' or tripped = true").unwrap();
        let c = ctx(&[
            ("mode", ScalarValue::String("grid".into())),
            ("tripped", ScalarValue::Boolean(true)),
        ]);
        assert!(e.evaluate(&c).unwrap());
    }

    #[test]
    fn ordering_a_string_is_an_error() {
        let e = Expr::parse("mode < 'x'").unwrap();
        let c = ctx(&[("mode", ScalarValue::String("a".into()))]);
        assert!(matches!(e.evaluate(&c), Err(ExprError::Unordered(_))));
    }

    #[test]
    fn unknown_reference_is_reported() {
        let e = Expr::parse("missing = 1").unwrap();
        let c = ctx(&[]);
        assert_eq!(
            e.evaluate(&c),
            Err(ExprError::UnknownReference("missing".into()))
        );
    }

    #[test]
    fn rejects_trailing_garbage() {
        assert!(Expr::parse("a = 1 banana").is_err());
        assert!(Expr::parse("a ~ 1").is_err());
        assert!(Expr::parse("").is_err());
    }
}
