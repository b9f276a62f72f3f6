//! Finite algebras on carriers `{0, ..., n-1}` with total operation tables.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::{OpSymbol, Signature};

/// Upper bound on the number of entries in a single operation table.
pub const TABLE_ENTRY_CAP: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: String,
    sig: Signature,
    size: usize,
    tables: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationJson {
    pub name: String,
    pub arity: usize,
    pub table: Vec<usize>,
}

/// Wire format: `{"name", "size", "operations": [{"name", "arity", "table"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub name: String,
    pub size: usize,
    pub operations: Vec<OperationJson>,
}

fn table_len(size: usize, arity: usize) -> Option<usize> {
    size.checked_pow(u32::try_from(arity).ok()?)
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        sig: Signature,
        size: usize,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let name = name.into();
        if size == 0 {
            return Err(Error::InvalidAlgebra(format!(
                "`{name}`: empty carriers are not supported"
            )));
        }
        if tables.len() != sig.len() {
            return Err(Error::InvalidAlgebra(format!(
                "`{name}`: {} tables for {} operations",
                tables.len(),
                sig.len()
            )));
        }
        for (op, table) in sig.ops().iter().zip(&tables) {
            let expected = table_len(size, op.arity).ok_or(Error::CapExceeded {
                what: "operation table entries",
                cap: TABLE_ENTRY_CAP,
                found: usize::MAX,
            })?;
            if table.len() != expected {
                return Err(Error::InvalidAlgebra(format!(
                    "`{name}`: table of `{}` has {} entries, expected {expected}",
                    op.name,
                    table.len()
                )));
            }
            if let Some(&bad) = table.iter().find(|&&v| v >= size) {
                return Err(Error::InvalidAlgebra(format!(
                    "`{name}`: table of `{}` contains {bad} outside carrier of size {size}",
                    op.name
                )));
            }
        }
        Ok(FiniteAlgebra {
            name,
            sig,
            size,
            tables,
        })
    }

    /// Builds tables by calling `f(op, args)` on every argument tuple.
    pub fn from_fn(
        name: impl Into<String>,
        sig: Signature,
        size: usize,
        mut f: impl FnMut(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        let mut tables = Vec::with_capacity(sig.len());
        for (op, sym) in sig.ops().iter().enumerate() {
            let len = table_len(size, sym.arity)
                .filter(|&l| l <= TABLE_ENTRY_CAP)
                .ok_or(Error::CapExceeded {
                    what: "operation table entries",
                    cap: TABLE_ENTRY_CAP,
                    found: usize::MAX,
                })?;
            let mut args = vec![0; sym.arity];
            let mut table = Vec::with_capacity(len);
            for idx in 0..len {
                let mut rest = idx;
                for slot in args.iter_mut() {
                    *slot = rest % size;
                    rest /= size;
                }
                table.push(f(op, &args));
            }
            tables.push(table);
        }
        Self::new(name, sig, size, tables)
    }

    /// The one-element algebra over `sig`.
    pub fn trivial(sig: Signature) -> Self {
        Self::from_fn("trivial", sig, 1, |_, _| 0).expect("one-element tables are tiny")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.tables[op]
    }

    #[inline]
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        let mut idx = 0;
        for &a in args.iter().rev() {
            idx = idx * self.size + a;
        }
        self.tables[op][idx]
    }

    pub fn same_signature(&self, other: &FiniteAlgebra) -> Result<()> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch {
                left: self.name.clone(),
                right: other.name.clone(),
            })
        }
    }

    /// Direct product; the pair `(a, b)` is encoded as `a + |self| * b`.
    pub fn product(&self, other: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        self.same_signature(other)?;
        let size = self
            .size
            .checked_mul(other.size)
            .ok_or(Error::CapExceeded {
                what: "product carrier",
                cap: usize::MAX,
                found: 0,
            })?;
        let n = self.size;
        let mut left = Vec::new();
        let mut right = Vec::new();
        FiniteAlgebra::from_fn(
            format!("{}x{}", self.name, other.name),
            self.sig.clone(),
            size,
            |op, args| {
                left.clear();
                right.clear();
                for &a in args {
                    left.push(a % n);
                    right.push(a / n);
                }
                self.apply(op, &left) + n * other.apply(op, &right)
            },
        )
    }

    /// `self^d`; coordinate 0 is the least-significant digit of an element.
    pub fn power(&self, d: usize) -> Result<FiniteAlgebra> {
        if d == 0 {
            return Ok(FiniteAlgebra::trivial(self.sig.clone()).with_name(format!("{}^0", self.name)));
        }
        let mut acc = self.clone();
        for _ in 1..d {
            acc = acc.product(self)?;
        }
        Ok(acc.with_name(format!("{}^{d}", self.name)))
    }

    /// Materializes the subalgebra on `elements` (in the given order).
    ///
    /// Returns the subalgebra; its element `i` is `elements[i]` of `self`.
    pub fn restrict(&self, name: impl Into<String>, elements: &[usize]) -> Result<FiniteAlgebra> {
        let mut local: HashMap<usize, usize> = HashMap::with_capacity(elements.len());
        for (i, &e) in elements.iter().enumerate() {
            if e >= self.size {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    size: self.size,
                });
            }
            if local.insert(e, i).is_some() {
                return Err(Error::NotSubuniverse(format!("duplicate element {e}")));
            }
        }
        let mut ambient_args = Vec::new();
        let mut missing = None;
        let alg = FiniteAlgebra::from_fn(name, self.sig.clone(), elements.len().max(1), |op, args| {
            ambient_args.clear();
            ambient_args.extend(args.iter().map(|&a| elements[a]));
            let v = self.apply(op, &ambient_args);
            match local.get(&v) {
                Some(&l) => l,
                None => {
                    missing.get_or_insert(v);
                    0
                }
            }
        })?;
        if elements.is_empty() {
            return Err(Error::InvalidAlgebra("empty subuniverse".into()));
        }
        if let Some(v) = missing {
            return Err(Error::NotSubuniverse(format!(
                "element {v} produced by an operation is missing"
            )));
        }
        Ok(alg)
    }

    pub fn to_json(&self) -> AlgebraJson {
        AlgebraJson {
            name: self.name.clone(),
            size: self.size,
            operations: self
                .sig
                .ops()
                .iter()
                .zip(&self.tables)
                .map(|(op, table)| OperationJson {
                    name: op.name.clone(),
                    arity: op.arity,
                    table: table.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &AlgebraJson) -> Result<Self> {
        let sig = Signature::new(
            json.operations
                .iter()
                .map(|o| OpSymbol {
                    name: o.name.clone(),
                    arity: o.arity,
                })
                .collect(),
        )?;
        let tables = json.operations.iter().map(|o| o.table.clone()).collect();
        FiniteAlgebra::new(json.name.clone(), sig, json.size, tables)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("algebra json is always serializable")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: AlgebraJson = serde_json::from_str(text)?;
        Self::from_json(&json)
    }
}

// ---------------------------------------------------------------------------
// Built-in algebras

pub const BUILTIN_ALGEBRAS: &[&str] = &["lattice2", "n5", "m3", "z2xor", "set2"];

fn lattice_signature() -> Signature {
    Signature::from_pairs(&[("meet", 2), ("join", 2)]).expect("static signature")
}

/// A lattice from its order relation; `leq(a, b)` must be a lattice order.
fn lattice_from_order(name: &str, size: usize, leq: impl Fn(usize, usize) -> bool) -> FiniteAlgebra {
    let glb = |a: usize, b: usize| {
        (0..size)
            .filter(|&c| leq(c, a) && leq(c, b))
            .find(|&c| (0..size).all(|d| !(leq(d, a) && leq(d, b)) || leq(d, c)))
            .expect("lattice order has meets")
    };
    let lub = |a: usize, b: usize| {
        (0..size)
            .filter(|&c| leq(a, c) && leq(b, c))
            .find(|&c| (0..size).all(|d| !(leq(a, d) && leq(b, d)) || leq(c, d)))
            .expect("lattice order has joins")
    };
    FiniteAlgebra::from_fn(name, lattice_signature(), size, |op, args| {
        if op == 0 {
            glb(args[0], args[1])
        } else {
            lub(args[0], args[1])
        }
    })
    .expect("static lattice")
}

/// The two-element lattice `0 < 1`.
pub fn lattice2() -> FiniteAlgebra {
    lattice_from_order("lattice2", 2, |a, b| a <= b)
}

/// The pentagon: `0 < 1 < 2 < 4` and `0 < 3 < 4`, with `3` incomparable to `1, 2`.
pub fn n5() -> FiniteAlgebra {
    lattice_from_order("n5", 5, |a, b| {
        a == b || a == 0 || b == 4 || (a == 1 && b == 2)
    })
}

/// The diamond: bottom `0`, atoms `1, 2, 3`, top `4`.
pub fn m3() -> FiniteAlgebra {
    lattice_from_order("m3", 5, |a, b| a == b || a == 0 || b == 4)
}

/// `Z/2` with `xor` and the constant `zero`.
pub fn z2xor() -> FiniteAlgebra {
    let sig = Signature::from_pairs(&[("xor", 2), ("zero", 0)]).expect("static signature");
    FiniteAlgebra::from_fn("z2xor", sig, 2, |op, args| match op {
        0 => args[0] ^ args[1],
        _ => 0,
    })
    .expect("static algebra")
}

/// A bare two-element set.
pub fn set2() -> FiniteAlgebra {
    FiniteAlgebra::new("set2", Signature::empty(), 2, Vec::new()).expect("static algebra")
}

pub fn builtin(name: &str) -> Result<FiniteAlgebra> {
    match name {
        "lattice2" => Ok(lattice2()),
        "n5" => Ok(n5()),
        "m3" => Ok(m3()),
        "z2xor" => Ok(z2xor()),
        "set2" => Ok(set2()),
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}
