//! Real Dirichlet characters: the principal character and the quadratic
//! symbols (·/3), (·/5), (·/7), (·/13), (−4/·).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::gcd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CharKind {
    #[serde(rename = "principal")]
    Principal,
    #[serde(rename = "jacobi_top/3")]
    Jacobi3,
    #[serde(rename = "jacobi_top/5")]
    Jacobi5,
    #[serde(rename = "jacobi_top/7")]
    Jacobi7,
    #[serde(rename = "jacobi_top/13")]
    Jacobi13,
    #[serde(rename = "kronecker_-4")]
    KroneckerM4,
}

impl CharKind {
    pub const ALL: [CharKind; 6] = [
        CharKind::Principal,
        CharKind::Jacobi3,
        CharKind::KroneckerM4,
        CharKind::Jacobi5,
        CharKind::Jacobi7,
        CharKind::Jacobi13,
    ];

    pub fn conductor(self) -> u64 {
        match self {
            CharKind::Principal => 1,
            CharKind::Jacobi3 => 3,
            CharKind::KroneckerM4 => 4,
            CharKind::Jacobi5 => 5,
            CharKind::Jacobi7 => 7,
            CharKind::Jacobi13 => 13,
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            CharKind::Principal => "principal",
            CharKind::Jacobi3 => "jacobi_top/3",
            CharKind::Jacobi5 => "jacobi_top/5",
            CharKind::Jacobi7 => "jacobi_top/7",
            CharKind::Jacobi13 => "jacobi_top/13",
            CharKind::KroneckerM4 => "kronecker_-4",
        }
    }

    /// Accepts the serialized keys plus the shorthands `1`, `chi0`, `3`, `-4`, `(./5)`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().replace(' ', "");
        let k = match t.as_str() {
            "principal" | "trivial" | "chi0" | "1" => CharKind::Principal,
            "jacobi_top/3" | "3" | "(./3)" | "(p/3)" => CharKind::Jacobi3,
            "jacobi_top/5" | "5" | "(./5)" | "(p/5)" => CharKind::Jacobi5,
            "jacobi_top/7" | "7" | "(./7)" | "(p/7)" => CharKind::Jacobi7,
            "jacobi_top/13" | "13" | "(./13)" | "(p/13)" => CharKind::Jacobi13,
            "kronecker_-4" | "-4" | "(-4/.)" | "(-4/p)" => CharKind::KroneckerM4,
            _ => return Err(Error::Parse(format!("unknown character {s:?}"))),
        };
        Ok(k)
    }

    /// Value of the primitive character at n.
    fn primitive_value(self, n: i64) -> i8 {
        match self {
            CharKind::Principal => 1,
            CharKind::KroneckerM4 => match n.rem_euclid(4) {
                1 => 1,
                3 => -1,
                _ => 0,
            },
            k => jacobi(n, k.conductor() as i64),
        }
    }
}

/// Jacobi symbol (a/n) for odd positive n, by quadratic reciprocity.
pub fn jacobi(a: i64, n: i64) -> i8 {
    assert!(
        n > 0 && n % 2 == 1,
        "Jacobi symbol needs odd positive modulus"
    );
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut result = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// A real character modulo `modulus`, induced from a primitive kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirichletChar {
    modulus: u64,
    kind: CharKind,
}

impl DirichletChar {
    pub fn new(modulus: u64, kind: CharKind) -> Result<Self> {
        if modulus == 0 || !modulus.is_multiple_of(kind.conductor()) {
            return Err(Error::Parse(format!(
                "character {} needs a modulus divisible by {}, got {modulus}",
                kind.key(),
                kind.conductor()
            )));
        }
        Ok(DirichletChar { modulus, kind })
    }

    pub fn principal(modulus: u64) -> Self {
        DirichletChar {
            modulus,
            kind: CharKind::Principal,
        }
    }

    /// The primitive character of the given kind (modulus = conductor).
    pub fn primitive_of(kind: CharKind) -> Self {
        DirichletChar {
            modulus: kind.conductor(),
            kind,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn kind(&self) -> CharKind {
        self.kind
    }

    pub fn conductor(&self) -> u64 {
        self.kind.conductor()
    }

    pub fn is_primitive(&self) -> bool {
        self.modulus == self.conductor()
    }

    pub fn is_trivial(&self) -> bool {
        self.kind == CharKind::Principal
    }

    pub fn primitive(&self) -> Self {
        Self::primitive_of(self.kind)
    }

    pub fn lift(&self, modulus: u64) -> Result<Self> {
        Self::new(modulus, self.kind)
    }

    pub fn value(&self, n: i64) -> i8 {
        if gcd(n.unsigned_abs(), self.modulus) != 1 {
            return 0;
        }
        self.kind.primitive_value(n)
    }

    /// χ(−1).
    pub fn parity(&self) -> i8 {
        self.kind.primitive_value(-1)
    }

    /// Whether a·b agrees with `target` on every residue prime to the target's modulus.
    pub fn product_is(a: &Self, b: &Self, target: &Self) -> bool {
        let n = target.modulus as i64;
        (1..=n.max(1))
            .all(|m| gcd(m as u64, n as u64) != 1 || a.value(m) * b.value(m) == target.value(m))
    }

    /// Symbol used when rendering prime conditions, e.g. `(p/5)` or `(-4/p)`.
    pub fn symbol_at_p(&self) -> String {
        match self.kind {
            CharKind::Principal => "chi0(p)".into(),
            CharKind::KroneckerM4 => "(-4/p)".into(),
            k => format!("(p/{})", k.conductor()),
        }
    }
}

impl fmt::Display for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CharKind::Principal => write!(f, "chi0 mod {}", self.modulus),
            CharKind::KroneckerM4 => write!(f, "(-4/.) mod {}", self.modulus),
            k => write!(f, "(./{}) mod {}", k.conductor(), self.modulus),
        }
    }
}
