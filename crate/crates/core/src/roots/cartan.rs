//! Catalogue of irreducible reduced root systems with Bourbaki's simple roots.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{frac, int, zero_vec, QVector, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl CartanType {
    pub fn letter(self) -> char {
        match self {
            CartanType::A => 'A',
            CartanType::B => 'B',
            CartanType::C => 'C',
            CartanType::D => 'D',
            CartanType::E => 'E',
            CartanType::F => 'F',
            CartanType::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => CartanType::A,
            'B' => CartanType::B,
            'C' => CartanType::C,
            'D' => CartanType::D,
            'E' => CartanType::E,
            'F' => CartanType::F,
            'G' => CartanType::G,
            _ => return None,
        })
    }

    pub fn valid_rank(self, rank: usize) -> bool {
        match self {
            CartanType::A => rank >= 1,
            CartanType::B | CartanType::C => rank >= 2,
            CartanType::D => rank >= 3,
            CartanType::E => (6..=8).contains(&rank),
            CartanType::F => rank == 4,
            CartanType::G => rank == 2,
        }
    }
}

/// One irreducible factor, e.g. `B3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub kind: CartanType,
    pub rank: usize,
}

impl ComponentSpec {
    pub fn new(kind: CartanType, rank: usize) -> Result<Self> {
        if !kind.valid_rank(rank) {
            return Err(Error::InvalidRank {
                letter: kind.letter(),
                rank,
            });
        }
        Ok(Self { kind, rank })
    }

    /// Number of positive roots, from the classification.
    pub fn positive_root_count(self) -> usize {
        let n = self.rank;
        match self.kind {
            CartanType::A => n * (n + 1) / 2,
            CartanType::B | CartanType::C => n * n,
            CartanType::D => n * (n - 1),
            CartanType::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            CartanType::F => 24,
            CartanType::G => 6,
        }
    }

    /// Bourbaki's simple roots in their standard ambient coordinates.
    pub fn bourbaki_simple_roots(self) -> Vec<QVector> {
        let n = self.rank;
        let eps = |dim: usize, terms: &[(usize, Rational)]| {
            let mut v = zero_vec(dim);
            for (i, c) in terms {
                v[*i] += c;
            }
            v
        };
        let chain = |dim: usize, count: usize| -> Vec<QVector> {
            (0..count)
                .map(|i| eps(dim, &[(i, int(1)), (i + 1, int(-1))]))
                .collect()
        };
        match self.kind {
            CartanType::A => chain(n + 1, n),
            CartanType::B => {
                let mut r = chain(n, n - 1);
                r.push(eps(n, &[(n - 1, int(1))]));
                r
            }
            CartanType::C => {
                let mut r = chain(n, n - 1);
                r.push(eps(n, &[(n - 1, int(2))]));
                r
            }
            CartanType::D => {
                let mut r = chain(n, n - 1);
                r.push(eps(n, &[(n - 2, int(1)), (n - 1, int(1))]));
                r
            }
            CartanType::E => {
                let h = frac(1, 2);
                let mut r = vec![
                    eps(8, &[
                        (0, h.clone()),
                        (7, h.clone()),
                        (1, -h.clone()),
                        (2, -h.clone()),
                        (3, -h.clone()),
                        (4, -h.clone()),
                        (5, -h.clone()),
                        (6, -h),
                    ]),
                    eps(8, &[(0, int(1)), (1, int(1))]),
                ];
                for i in 0..6 {
                    r.push(eps(8, &[(i + 1, int(1)), (i, int(-1))]));
                }
                r.truncate(n);
                r
            }
            CartanType::F => {
                let h = frac(1, 2);
                vec![
                    eps(4, &[(1, int(1)), (2, int(-1))]),
                    eps(4, &[(2, int(1)), (3, int(-1))]),
                    eps(4, &[(3, int(1))]),
                    eps(4, &[(0, h.clone()), (1, -h.clone()), (2, -h.clone()), (3, -h)]),
                ]
            }
            CartanType::G => vec![
                eps(3, &[(0, int(1)), (1, int(-1))]),
                eps(3, &[(0, int(-2)), (1, int(1)), (2, int(1))]),
            ],
        }
    }
}

impl fmt::Display for ComponentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.rank)
    }
}

/// A possibly reducible system: a product of irreducible factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SystemSpec(pub Vec<ComponentSpec>);

impl SystemSpec {
    pub fn irreducible(kind: CartanType, rank: usize) -> Result<Self> {
        Ok(SystemSpec(vec![ComponentSpec::new(kind, rank)?]))
    }

    pub fn rank(&self) -> usize {
        self.0.iter().map(|c| c.rank).sum()
    }

    pub fn is_irreducible(&self) -> bool {
        self.0.len() == 1
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for SystemSpec {
    type Err = Error;

    /// Accepts factors like `A3` joined by `x`, `X`, `*`, `+` or `×`.
    fn from_str(s: &str) -> Result<Self> {
        let mut comps = Vec::new();
        let chars: Vec<(usize, char)> = s.char_indices().collect();
        let mut k = 0;
        let parse_err = |position: usize, message: String| Error::Parse { position, message };
        while k < chars.len() {
            let (pos, c) = chars[k];
            if c.is_whitespace() {
                k += 1;
                continue;
            }
            if !comps.is_empty() {
                if matches!(c, 'x' | 'X' | '*' | '+' | '×') {
                    k += 1;
                } else {
                    return Err(parse_err(pos, format!("expected separator, found {c:?}")));
                }
                while k < chars.len() && chars[k].1.is_whitespace() {
                    k += 1;
                }
            }
            let Some(&(pos, c)) = chars.get(k) else {
                return Err(parse_err(s.len(), "expected a root system type".into()));
            };
            if c.eq_ignore_ascii_case(&'B')
                && chars.get(k + 1).is_some_and(|&(_, d)| d.eq_ignore_ascii_case(&'C'))
            {
                return Err(Error::Unsupported(
                    "non-reduced systems of type BC are not supported".into(),
                ));
            }
            let kind = CartanType::from_letter(c)
                .ok_or_else(|| parse_err(pos, format!("unknown type letter {c:?}")))?;
            k += 1;
            let start = k;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            if start == k {
                let p = chars.get(k).map_or(s.len(), |x| x.0);
                return Err(parse_err(p, "expected a rank".into()));
            }
            let digits: String = chars[start..k].iter().map(|x| x.1).collect();
            let rank: usize = digits
                .parse()
                .map_err(|_| parse_err(chars[start].0, "rank out of range".into()))?;
            comps.push(ComponentSpec::new(kind, rank)?);
        }
        if comps.is_empty() {
            return Err(parse_err(0, "empty system specification".into()));
        }
        Ok(SystemSpec(comps))
    }
}

/// Every irreducible type with `rank <= max_rank`, in catalogue order.
pub fn irreducible_catalogue(max_rank: usize) -> Vec<SystemSpec> {
    use CartanType::*;
    let mut out = Vec::new();
    for rank in 1..=max_rank {
        for kind in [A, B, C, D, E, F, G] {
            if kind.valid_rank(rank) {
                out.push(SystemSpec(vec![ComponentSpec { kind, rank }]));
            }
        }
    }
    out
}

/// Irreducible systems plus all two-factor products with total rank
/// `<= max_rank` (unordered pairs).
pub fn catalogue_with_products(max_rank: usize) -> Vec<SystemSpec> {
    let irr: Vec<ComponentSpec> = irreducible_catalogue(max_rank)
        .into_iter()
        .map(|s| s.0[0])
        .collect();
    let mut out: Vec<SystemSpec> = irr.iter().map(|&c| SystemSpec(vec![c])).collect();
    for (i, a) in irr.iter().enumerate() {
        for b in &irr[i..] {
            if a.rank + b.rank <= max_rank {
                out.push(SystemSpec(vec![*a, *b]));
            }
        }
    }
    out
}
