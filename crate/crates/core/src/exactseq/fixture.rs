//! Residue-class group tables stored as text.
//!
//! One record per line, pipe separated:
//!
//! ```text
//! theory | residue | modulus | group | valid | citation
//! bo     | 3       | 8       | Z/2^(4n+3) | n>=0 | ...
//! ```
//!
//! The row stands for degree `modulus·n + residue` for every `n` allowed by
//! `valid` (`n>=k`, `n=k` or `k<=n<=l`). Group expressions are sums (`+` or
//! `⊕`) of `0`, `Z`, `Z^k`, `Z/q`, `Z/b^(e)` and `(Z/b)^(e)`, where `e` is an
//! affine expression in `n` such as `4n+3`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::FixtureError;
use crate::group::FgAbelianGroup;

/// `a·n + b`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Affine {
    pub a: i64,
    pub b: i64,
}

impl Affine {
    pub fn eval(&self, n: i64) -> i64 {
        self.a * n + self.b
    }
}

impl FromStr for Affine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Err("empty exponent".into());
        }
        let (mut a, mut b) = (0i64, 0i64);
        // split into signed terms
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, t.strip_prefix('+').unwrap_or(&t)),
            };
            if let Some(coef) = body.strip_suffix('n') {
                let c = if coef.is_empty() { 1 } else { coef.trim_end_matches('*').parse::<i64>().map_err(|e| format!("{t:?}: {e}"))? };
                a += sign * c;
            } else {
                b += sign * body.parse::<i64>().map_err(|e| format!("{t:?}: {e}"))?;
            }
        }
        Ok(Affine { a, b })
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, b) => write!(f, "{b}"),
            (a, 0) => write!(f, "{a}n"),
            (a, b) if b > 0 => write!(f, "{a}n+{b}"),
            (a, b) => write!(f, "{a}n{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Summand {
    /// `Z^e`
    Free(Affine),
    /// `Z/base^e`
    Cyclic { base: u64, exponent: Affine },
    /// `(Z/base)^copies`
    Elementary { base: u64, copies: Affine },
}

/// A symbolic group, evaluated at concrete `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupExpr {
    pub source: String,
    pub summands: Vec<Summand>,
}

impl GroupExpr {
    pub fn eval(&self, n: i64) -> Result<FgAbelianGroup, FixtureError> {
        let bad = |message: String| FixtureError::Expression { expr: self.source.clone(), message };
        let mut free = 0usize;
        let mut orders: Vec<BigInt> = Vec::new();
        for s in &self.summands {
            match s {
                Summand::Free(e) => {
                    let k = e.eval(n);
                    free += usize::try_from(k).map_err(|_| bad(format!("negative rank {k} at n={n}")))?;
                }
                Summand::Cyclic { base, exponent } => {
                    let k = exponent.eval(n);
                    let k = u32::try_from(k).map_err(|_| bad(format!("negative exponent {k} at n={n}")))?;
                    orders.push(BigInt::from(*base).pow(k));
                }
                Summand::Elementary { base, copies } => {
                    let k = copies.eval(n);
                    let k = usize::try_from(k).map_err(|_| bad(format!("negative multiplicity {k} at n={n}")))?;
                    orders.extend(std::iter::repeat_n(BigInt::from(*base), k));
                }
            }
        }
        Ok(FgAbelianGroup::from_cyclic_orders(free, &orders))
    }
}

impl FromStr for GroupExpr {
    type Err = FixtureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let source = s.trim().to_string();
        let bad = |message: &str| FixtureError::Expression { expr: source.clone(), message: message.to_string() };
        let mut summands = Vec::new();
        for raw in source.split(['+', '⊕']).map(str::trim) {
            // '+' also appears inside exponents like 2^(4n+3); re-join below
            summands.push(raw.to_string());
        }
        let mut parts: Vec<String> = Vec::new();
        for piece in summands {
            match parts.last_mut() {
                Some(last) if last.matches('(').count() > last.matches(')').count() => {
                    last.push('+');
                    last.push_str(&piece);
                }
                _ => parts.push(piece),
            }
        }
        let mut out = Vec::new();
        for part in parts {
            let part = part.replace(' ', "");
            if part == "0" {
                continue;
            }
            if part == "Z" {
                out.push(Summand::Free(Affine { a: 0, b: 1 }));
            } else if let Some(e) = part.strip_prefix("Z^") {
                out.push(Summand::Free(e.parse().map_err(|m: String| bad(&m))?));
            } else if let Some(rest) = part.strip_prefix("(Z/") {
                let (base, tail) = rest.split_once(')').ok_or_else(|| bad("unclosed (Z/"))?;
                let base = base.parse().map_err(|_| bad("bad base"))?;
                let copies = match tail.strip_prefix('^') {
                    Some(e) => e.parse().map_err(|m: String| bad(&m))?,
                    None if tail.is_empty() => Affine { a: 0, b: 1 },
                    None => return Err(bad("expected ^ after (Z/b)")),
                };
                out.push(Summand::Elementary { base, copies });
            } else if let Some(rest) = part.strip_prefix("Z/") {
                let (base, exponent) = match rest.split_once('^') {
                    Some((b, e)) => (b, e.parse().map_err(|m: String| bad(&m))?),
                    None => (rest, Affine { a: 0, b: 1 }),
                };
                let base = base.parse().map_err(|_| bad("bad modulus"))?;
                out.push(Summand::Cyclic { base, exponent });
            } else {
                return Err(bad("unrecognized summand"));
            }
        }
        Ok(GroupExpr { source, summands: out })
    }
}

/// Allowed values of the row parameter `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Validity {
    pub min: u64,
    pub max: Option<u64>,
}

impl Validity {
    pub fn contains(&self, n: u64) -> bool {
        n >= self.min && self.max.is_none_or(|m| n <= m)
    }
}

impl FromStr for Validity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let num = |x: &str| x.parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
        if let Some(k) = s.strip_prefix("n>=") {
            return Ok(Validity { min: num(k)?, max: None });
        }
        if let Some(k) = s.strip_prefix("n=") {
            let k = num(k)?;
            return Ok(Validity { min: k, max: Some(k) });
        }
        if let Some((lo, rest)) = s.split_once("<=n<=") {
            return Ok(Validity { min: num(lo)?, max: Some(num(rest)?) });
        }
        Err(format!("unrecognized validity {s:?}"))
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.max {
            None => write!(f, "n>={}", self.min),
            Some(m) if m == self.min => write!(f, "n={m}"),
            Some(m) => write!(f, "{}<=n<={m}", self.min),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureRow {
    pub theory: String,
    pub residue: u64,
    pub modulus: u64,
    pub group: GroupExpr,
    pub valid: Validity,
    pub citation: String,
    pub line: usize,
}

impl FixtureRow {
    /// Row parameter `n` for degree `m`, if the row covers it.
    pub fn parameter(&self, m: u64) -> Option<u64> {
        (m >= self.residue && (m - self.residue).is_multiple_of(self.modulus))
            .then(|| (m - self.residue) / self.modulus)
            .filter(|&n| self.valid.contains(n))
    }

    /// `8n+3`-style label of the residue class.
    pub fn class_label(&self) -> String {
        match self.residue {
            0 => format!("{}n", self.modulus),
            r => format!("{}n+{r}", self.modulus),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureTable {
    pub theory: String,
    pub rows: Vec<FixtureRow>,
}

impl FixtureTable {
    /// The unique row covering degree `m`, and its value there.
    pub fn lookup(&self, m: u64) -> Result<(FgAbelianGroup, &FixtureRow), FixtureError> {
        let hits: Vec<_> = self.rows.iter().filter_map(|r| r.parameter(m).map(|n| (n, r))).collect();
        match hits.as_slice() {
            [] => Err(FixtureError::Uncovered { table: self.theory.clone(), degree: m }),
            [(n, row)] => Ok((row.group.eval(*n as i64)?, row)),
            _ => Err(FixtureError::Ambiguous { table: self.theory.clone(), degree: m, count: hits.len() }),
        }
    }

    pub fn eval(&self, m: u64) -> Result<FgAbelianGroup, FixtureError> {
        self.lookup(m).map(|(g, _)| g)
    }
}

/// All tables of one or more fixture files, keyed by theory tag.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FixtureSet {
    pub tables: BTreeMap<String, FixtureTable>,
}

pub const FIXTURE_FILES: [(&str, &str); 4] = [
    ("bo_rp.tbl", include_str!("../../fixtures/bo_rp.tbl")),
    ("bo1_rp.tbl", include_str!("../../fixtures/bo1_rp.tbl")),
    ("hz_rp.tbl", include_str!("../../fixtures/hz_rp.tbl")),
    ("smash_printed.tbl", include_str!("../../fixtures/smash_printed.tbl")),
];

/// Environment variable naming a directory that replaces the built-in fixtures.
pub const FIXTURE_ENV: &str = "CKT_FIXTURES";

impl FixtureSet {
    pub fn parse(text: &str) -> Result<Self, FixtureError> {
        let mut set = FixtureSet::default();
        set.add(text)?;
        Ok(set)
    }

    /// Merges the records of one file.
    pub fn add(&mut self, text: &str) -> Result<(), FixtureError> {
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split_once('#').map_or(raw, |(b, _)| b).trim();
            if body.is_empty() {
                continue;
            }
            let fields: Vec<&str> = body.split('|').map(str::trim).collect();
            let parse_err = |message: String| FixtureError::Parse { line, message };
            let [theory, residue, modulus, group, valid, citation] = fields.as_slice() else {
                return Err(parse_err(format!("expected 6 fields, found {}", fields.len())));
            };
            let residue: u64 = residue.parse().map_err(|e| parse_err(format!("residue: {e}")))?;
            let modulus: u64 = modulus.parse().map_err(|e| parse_err(format!("modulus: {e}")))?;
            if modulus == 0 || residue >= modulus {
                return Err(parse_err(format!("residue {residue} is not a class mod {modulus}")));
            }
            if citation.is_empty() {
                return Err(parse_err("every row needs a citation".into()));
            }
            let row = FixtureRow {
                theory: theory.to_string(),
                residue,
                modulus,
                group: group.parse()?,
                valid: valid.parse().map_err(parse_err)?,
                citation: citation.to_string(),
                line,
            };
            self.tables
                .entry(row.theory.clone())
                .or_insert_with(|| FixtureTable { theory: row.theory.clone(), rows: Vec::new() })
                .rows
                .push(row);
        }
        Ok(())
    }

    pub fn embedded() -> Self {
        let mut set = FixtureSet::default();
        for (name, text) in FIXTURE_FILES {
            set.add(text).unwrap_or_else(|e| panic!("built-in fixture {name} is malformed: {e}"));
        }
        set
    }

    /// Reads the standard file names from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self, FixtureError> {
        let mut set = FixtureSet::default();
        for (name, _) in FIXTURE_FILES {
            let path = dir.join(name);
            let text = std::fs::read_to_string(&path).map_err(|source| FixtureError::Io { path: path.display().to_string(), source })?;
            set.add(&text)?;
        }
        Ok(set)
    }

    /// `dir` if given, else `$CKT_FIXTURES`, else the built-in files.
    pub fn load(dir: Option<&Path>) -> Result<Self, FixtureError> {
        match dir {
            Some(d) => Self::from_dir(d),
            None => match std::env::var_os(FIXTURE_ENV) {
                Some(d) => Self::from_dir(Path::new(&d)),
                None => Ok(Self::embedded()),
            },
        }
    }

    pub fn table(&self, theory: &str) -> Result<&FixtureTable, FixtureError> {
        self.tables.get(theory).ok_or_else(|| FixtureError::Uncovered { table: theory.to_string(), degree: 0 })
    }
}
