//! Signatures, terms over positional variables, and their evaluation.
//!
//! Variables are written `$0`, `$1`, ... and applications as s-expressions
//! `(op arg ...)`. Constants may be written bare (`zero`) or as `(zero)`.
//!
//! Assignments over a carrier of size `n` and `width` variables are indexed
//! in mixed radix `n` with variable 0 as the least-significant digit. Every
//! value vector in this crate uses that convention.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of operation symbols. Operations are referred to by their
/// position in this list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    ops: Vec<OpSymbol>,
}

fn valid_op_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new(ops: Vec<OpSymbol>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for op in &ops {
            if !valid_op_name(&op.name) {
                return Err(Error::InvalidSignature(format!(
                    "operation name `{}` must match [a-zA-Z][a-zA-Z0-9_]*",
                    op.name
                )));
            }
            if !seen.insert(op.name.as_str()) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate operation name `{}`",
                    op.name
                )));
            }
        }
        Ok(Signature { ops })
    }

    /// Convenience constructor from `(name, arity)` pairs.
    pub fn from_pairs(pairs: &[(&str, usize)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(name, arity)| OpSymbol {
                    name: name.to_string(),
                    arity,
                })
                .collect(),
        )
    }

    pub fn empty() -> Self {
        Signature { ops: Vec::new() }
    }

    pub fn ops(&self) -> &[OpSymbol] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn arity(&self, op: usize) -> usize {
        self.ops[op].arity
    }

    pub fn name(&self, op: usize) -> &str {
        &self.ops[op].name
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn has_constant(&self) -> bool {
        self.ops.iter().any(|o| o.arity == 0)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(|o| o.arity).max().unwrap_or(0)
    }
}

/// A term: a positional variable or an operation applied to subterms.
///
/// Subterm lists are shared, so cloning is cheap and witness terms built by
/// closure computations share structure with the terms they extend.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    App(usize, Arc<[Term]>),
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "${i}"),
            Term::App(op, args) => {
                write!(f, "(#{op}")?;
                for a in args.iter() {
                    write!(f, " {a:?}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(op: usize, args: Vec<Term>) -> Term {
        Term::App(op, args.into())
    }

    /// Builds an application after checking the arity against `sig`.
    pub fn app_checked(sig: &Signature, op: usize, args: Vec<Term>) -> Result<Term> {
        if op >= sig.len() {
            return Err(Error::Invalid(format!("operation index {op} out of range")));
        }
        if sig.arity(op) != args.len() {
            return Err(Error::ArityMismatch {
                name: sig.name(op).to_string(),
                expected: sig.arity(op),
                found: args.len(),
                offset: 0,
            });
        }
        Ok(Term::app(op, args))
    }

    /// One more than the largest variable index, or 0 for ground terms.
    pub fn min_width(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::App(_, args) => args.iter().map(Term::min_width).max().unwrap_or(0),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Checks every application against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(op, args) => {
                if *op >= sig.len() {
                    return Err(Error::Invalid(format!("operation index {op} out of range")));
                }
                if sig.arity(*op) != args.len() {
                    return Err(Error::ArityMismatch {
                        name: sig.name(*op).to_string(),
                        expected: sig.arity(*op),
                        found: args.len(),
                        offset: 0,
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    pub fn render(&self, sig: &Signature) -> String {
        let mut out = String::new();
        self.render_into(sig, &mut out);
        out
    }

    fn render_into(&self, sig: &Signature, out: &mut String) {
        match self {
            Term::Var(i) => {
                out.push('$');
                out.push_str(&i.to_string());
            }
            Term::App(op, args) if args.is_empty() => out.push_str(sig.name(*op)),
            Term::App(op, args) => {
                out.push('(');
                out.push_str(sig.name(*op));
                for a in args.iter() {
                    out.push(' ');
                    a.render_into(sig, out);
                }
                out.push(')');
            }
        }
    }
}

/// An equation `lhs = rhs` quantified over `width` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
    pub width: usize,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term, width: usize) -> Result<Self> {
        for t in [&lhs, &rhs] {
            let w = t.min_width();
            if w > width {
                return Err(Error::VariableOutOfRange {
                    index: w - 1,
                    width,
                });
            }
        }
        Ok(Identity { lhs, rhs, width })
    }

    /// `x = y` over two variables.
    pub fn trivializing() -> Self {
        Identity {
            lhs: Term::Var(0),
            rhs: Term::Var(1),
            width: 2,
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    fn ident(&mut self) -> Result<(usize, &'a str)> {
        let start = self.pos;
        while self.pos < self.bytes.len() {
            let c = self.bytes[self.pos];
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.err(start, "expected operation name"));
        }
        let name = &self.src[start..self.pos];
        if !name.as_bytes()[0].is_ascii_alphabetic() {
            return Err(self.err(start, format!("invalid operation name `{name}`")));
        }
        Ok((start, name))
    }

    fn resolve(&self, offset: usize, name: &str) -> Result<usize> {
        self.sig.lookup(name).ok_or_else(|| Error::UnknownOperation {
            name: name.to_string(),
            offset,
        })
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        let Some(&c) = self.bytes.get(self.pos) else {
            return Err(self.err(self.pos, "unexpected end of input"));
        };
        match c {
            b'$' => {
                let start = self.pos;
                self.pos += 1;
                let digits = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if digits == self.pos {
                    return Err(self.err(start, "expected digits after `$`"));
                }
                let index = self.src[digits..self.pos]
                    .parse()
                    .map_err(|_| self.err(start, "variable index too large"))?;
                Ok(Term::Var(index))
            }
            b'(' => {
                let open = self.pos;
                self.pos += 1;
                self.skip_ws();
                let (name_at, name) = self.ident()?;
                let op = self.resolve(name_at, name)?;
                let mut args = Vec::new();
                loop {
                    self.skip_ws();
                    match self.bytes.get(self.pos) {
                        None => return Err(self.err(open, "unclosed `(`")),
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => args.push(self.term()?),
                    }
                }
                let expected = self.sig.arity(op);
                if args.len() != expected {
                    return Err(Error::ArityMismatch {
                        name: name.to_string(),
                        expected,
                        found: args.len(),
                        offset: open,
                    });
                }
                Ok(Term::app(op, args))
            }
            b')' => Err(self.err(self.pos, "unexpected `)`")),
            _ => {
                let (name_at, name) = self.ident()?;
                let op = self.resolve(name_at, name)?;
                let expected = self.sig.arity(op);
                if expected != 0 {
                    return Err(Error::ArityMismatch {
                        name: name.to_string(),
                        expected,
                        found: 0,
                        offset: name_at,
                    });
                }
                Ok(Term::app(op, Vec::new()))
            }
        }
    }
}

/// Parses a single term; trailing non-whitespace input is an error.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    let mut p = Parser {
        src: text,
        bytes: text.as_bytes(),
        pos: 0,
        sig,
    };
    let t = p.term()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err(p.pos, "trailing input after term"));
    }
    Ok(t)
}

pub fn render_term(t: &Term, sig: &Signature) -> String {
    t.render(sig)
}

// ---------------------------------------------------------------------------
// Substitution and evaluation

/// Simultaneous substitution of `args[i]` for `$i`.
pub fn substitute(t: &Term, args: &[Term]) -> Result<Term> {
    match t {
        Term::Var(i) => args.get(*i).cloned().ok_or(Error::VariableOutOfRange {
            index: *i,
            width: args.len(),
        }),
        Term::App(op, sub) => {
            let new_args = sub
                .iter()
                .map(|a| substitute(a, args))
                .collect::<Result<Vec<_>>>()?;
            Ok(Term::app(*op, new_args))
        }
    }
}

/// Evaluates `t` in `alg` under `assignment` (`$i` ↦ `assignment[i]`).
pub fn eval_term(t: &Term, alg: &FiniteAlgebra, assignment: &[usize]) -> Result<usize> {
    if let Some(&bad) = assignment.iter().find(|&&a| a >= alg.size()) {
        return Err(Error::ElementOutOfRange {
            element: bad,
            size: alg.size(),
        });
    }
    eval_unchecked(t, alg, assignment)
}

fn eval_unchecked(t: &Term, alg: &FiniteAlgebra, assignment: &[usize]) -> Result<usize> {
    match t {
        Term::Var(i) => assignment.get(*i).copied().ok_or(Error::VariableOutOfRange {
            index: *i,
            width: assignment.len(),
        }),
        Term::App(op, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args.iter() {
                vals.push(eval_unchecked(a, alg, assignment)?);
            }
            Ok(alg.apply(*op, &vals))
        }
    }
}

/// Number of assignments of `width` variables over a carrier of `size`.
pub fn assignment_count(size: usize, width: usize) -> Option<usize> {
    size.checked_pow(u32::try_from(width).ok()?)
}

/// Decodes an assignment index (variable 0 least significant).
pub fn decode_assignment(mut index: usize, size: usize, width: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(width);
    for _ in 0..width {
        out.push(index % size);
        index /= size;
    }
    out
}

/// The i-th projection vector: `v[a] = a_i` over all assignments of `width`.
pub fn projection_vector(size: usize, width: usize, i: usize) -> Vec<usize> {
    let total = size.pow(width as u32);
    let stride = size.pow(i as u32);
    (0..total).map(|a| (a / stride) % size).collect()
}

/// The value vector of `t` over every assignment of `width` variables.
///
/// Computed bottom-up on whole vectors, so each subterm is evaluated once
/// per shared node visit rather than once per assignment.
pub fn term_function(t: &Term, alg: &FiniteAlgebra, width: usize) -> Result<Vec<usize>> {
    if t.min_width() > width {
        return Err(Error::VariableOutOfRange {
            index: t.min_width() - 1,
            width,
        });
    }
    let total = assignment_count(alg.size(), width).ok_or(Error::CapExceeded {
        what: "assignment space",
        cap: usize::MAX,
        found: 0,
    })?;
    let mut memo: HashMap<*const Term, Arc<Vec<usize>>> = HashMap::new();
    Ok(vector_of(t, alg, width, total, &mut memo).as_ref().clone())
}

fn vector_of(
    t: &Term,
    alg: &FiniteAlgebra,
    width: usize,
    total: usize,
    memo: &mut HashMap<*const Term, Arc<Vec<usize>>>,
) -> Arc<Vec<usize>> {
    // Subterms shared through an `Arc` slice have a stable address, so the
    // node address identifies repeated subterms within one call.
    let key = t as *const Term;
    if let Some(v) = memo.get(&key) {
        return Arc::clone(v);
    }
    let out = match t {
        Term::Var(i) => Arc::new(projection_vector(alg.size(), width, *i)),
        Term::App(op, args) => {
            let child: Vec<Arc<Vec<usize>>> = args
                .iter()
                .map(|a| vector_of(a, alg, width, total, memo))
                .collect();
            let mut out = Vec::with_capacity(total);
            let mut buf = vec![0; child.len()];
            for idx in 0..total {
                for (slot, c) in buf.iter_mut().zip(&child) {
                    *slot = c[idx];
                }
                out.push(alg.apply(*op, &buf));
            }
            Arc::new(out)
        }
    };
    memo.insert(key, Arc::clone(&out));
    out
}
