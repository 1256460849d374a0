use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::matrix::IntegerMatrix;
use crate::scalar::IntegerRing;
use crate::snf::{invariant_factors, smith_normal_form};

/// Canonical form of a finitely generated abelian group:
/// `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `1 < d_1 | d_2 | ... | d_k`.
///
/// Two groups are isomorphic exactly when their canonical forms are equal,
/// so `==` is the isomorphism test.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FgAbelianGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl FgAbelianGroup {
    /// Validates an already-canonical pair.
    pub fn new(free_rank: usize, invariant_factors: Vec<BigInt>) -> Result<Self, AlgebraError> {
        if let Some(d) = invariant_factors.iter().find(|d| **d <= BigInt::one()) {
            return Err(AlgebraError::InvariantFactors(format!("factor {d} is not > 1")));
        }
        if let Some(w) = invariant_factors.windows(2).find(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(AlgebraError::InvariantFactors(format!("{} does not divide {}", w[0], w[1])));
        }
        Ok(FgAbelianGroup { free_rank, invariant_factors })
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { free_rank: rank, invariant_factors: Vec::new() }
    }

    pub fn cyclic(order: impl Into<BigInt>) -> Self {
        Self::from_cyclic_orders(0, &[order.into()])
    }

    /// `(Z/p)^copies`
    pub fn elementary(p: u64, copies: usize) -> Self {
        if p <= 1 {
            return Self::trivial();
        }
        FgAbelianGroup { free_rank: 0, invariant_factors: vec![BigInt::from(p); copies] }
    }

    /// `Z/p^exponent`
    pub fn cyclic_prime_power(p: u64, exponent: u32) -> Self {
        Self::cyclic(BigInt::from(p).pow(exponent))
    }

    /// Canonicalizes an arbitrary direct sum of cyclic groups. Orders of 0
    /// stand for copies of Z, orders of ±1 are dropped.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let mut free = free_rank;
        let mut finite = Vec::new();
        for o in orders {
            if o.is_zero() {
                free += 1;
            } else if !o.abs().is_one() {
                finite.push(o.abs());
            }
        }
        let n = finite.len();
        let m = IntegerMatrix::diagonal(n, &finite);
        let factors = invariant_factors(&m).into_iter().filter(|d| !d.is_one()).collect();
        FgAbelianGroup { free_rank: free, invariant_factors: factors }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// `None` for infinite groups.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    /// Number of cyclic summands.
    pub fn minimal_generators(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    /// Largest invariant factor (1 for the trivial group, `None` if infinite).
    pub fn exponent(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one))
    }

    /// Dimension over F_p when the group is an F_p-vector space.
    pub fn fp_dimension(&self, p: u64) -> Option<usize> {
        let p = BigInt::from(p);
        (self.is_finite() && self.invariant_factors.iter().all(|d| *d == p)).then_some(self.invariant_factors.len())
    }

    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        let mut orders = self.invariant_factors.clone();
        orders.extend(other.invariant_factors.iter().cloned());
        Self::from_cyclic_orders(self.free_rank + other.free_rank, &orders)
    }

    pub fn sum_of<'a>(groups: impl IntoIterator<Item = &'a FgAbelianGroup>) -> FgAbelianGroup {
        let mut free = 0;
        let mut orders = Vec::new();
        for g in groups {
            free += g.free_rank;
            orders.extend(g.invariant_factors.iter().cloned());
        }
        Self::from_cyclic_orders(free, &orders)
    }

    /// Canonical JSON rendering `{"rank": r, "invariants": [...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("group serializes")
    }
}

pub fn groups_isomorphic(g: &FgAbelianGroup, h: &FgAbelianGroup) -> bool {
    g == h
}

impl fmt::Display for FgAbelianGroup {
    /// `0`, `Z`, `Z^2 ⊕ Z/2 ⊕ Z/4`, ...
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl fmt::Debug for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for FgAbelianGroup {
    type Err = AlgebraError;

    /// Accepts the text rendering, with either `⊕` or `+` as separator,
    /// in any order and with non-canonical orders (`Z/6` is fine).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::trivial());
        }
        let mut free = 0usize;
        let mut orders = Vec::new();
        for term in s.split(['⊕', '+']).map(str::trim) {
            let bad = || AlgebraError::InvalidArgument(format!("cannot parse group term {term:?}"));
            if term == "Z" {
                free += 1;
            } else if let Some(r) = term.strip_prefix("Z^") {
                free += r.parse::<usize>().map_err(|_| bad())?;
            } else if let Some(d) = term.strip_prefix("Z/") {
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d <= BigInt::zero() {
                    return Err(bad());
                }
                orders.push(d);
            } else if term != "0" {
                return Err(bad());
            }
        }
        Ok(Self::from_cyclic_orders(free, &orders))
    }
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    rank: usize,
    invariants: Vec<serde_json::Number>,
}

impl Serialize for FgAbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let invariants = self
            .invariant_factors
            .iter()
            .map(|d| serde_json::Number::from_str(&d.to_string()).expect("integers are valid JSON numbers"))
            .collect();
        GroupJson { rank: self.free_rank, invariants }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FgAbelianGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = GroupJson::deserialize(d)?;
        let factors = raw
            .invariants
            .iter()
            .map(|n| n.to_string().parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        FgAbelianGroup::new(raw.rank, factors).map_err(serde::de::Error::custom)
    }
}

/// `Z^generators / (row lattice of relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedGroup<T = BigInt> {
    generators: usize,
    relations: IntegerMatrix<T>,
}

impl<T: IntegerRing> PresentedGroup<T> {
    pub fn new(generators: usize, relations: IntegerMatrix<T>) -> Result<Self, AlgebraError> {
        if relations.cols() != generators {
            return Err(AlgebraError::Shape(format!("relations have {} columns but there are {generators} generators", relations.cols())));
        }
        Ok(PresentedGroup { generators, relations })
    }

    pub fn free(generators: usize) -> Self {
        PresentedGroup { generators, relations: IntegerMatrix::zeros(0, generators) }
    }

    /// `⊕ Z/orders[i]`, one generator each (0 means Z).
    pub fn from_orders(orders: &[T]) -> Self {
        let n = orders.len();
        let rows: Vec<Vec<T>> = orders
            .iter()
            .enumerate()
            .filter(|(_, o)| !o.is_zero())
            .map(|(i, o)| {
                let mut r = vec![T::zero(); n];
                r[i] = o.clone();
                r
            })
            .collect();
        PresentedGroup { generators: n, relations: IntegerMatrix::from_rows(n, rows).expect("rows have width n") }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntegerMatrix<T> {
        &self.relations
    }

    pub fn canonical(&self) -> FgAbelianGroup {
        cokernel_group(self.generators, &self.relations).expect("shape checked on construction")
    }

    pub fn direct_sum(parts: &[Self]) -> Self {
        let generators = parts.iter().map(|p| p.generators).sum();
        let blocks: Vec<_> = parts.iter().map(|p| p.relations.clone()).collect();
        PresentedGroup { generators, relations: IntegerMatrix::block_diag(&blocks) }
    }

    /// Re-expresses the group on its Smith basis: one generator per
    /// nontrivial cyclic summand.
    pub fn diagonalize(&self) -> Diagonalized<T> {
        let s = smith_normal_form(&self.relations);
        let n = self.generators;
        // Column k of the Smith basis carries order d_k (k < rank) or is free.
        let mut keep = Vec::new();
        let mut orders = Vec::new();
        for k in 0..n {
            let d = if k < s.rank { s.diagonal[(k, k)].clone() } else { T::zero() };
            if !d.is_unit() {
                keep.push(k);
                orders.push(d);
            }
        }
        Diagonalized {
            group: PresentedGroup::from_orders(&orders),
            to_new: s.right.select_cols(&keep),
            from_new: s.right_inverse.select_rows(&keep),
        }
    }

    /// Order of the class of `element` (given in generator coordinates);
    /// `None` when it has infinite order.
    pub fn element_order(&self, element: &[T]) -> Option<BigInt> {
        let d = self.diagonalize();
        let coords = d.to_new.left_apply(element);
        let mut order = BigInt::one();
        for (k, c) in coords.iter().enumerate() {
            let m = d.group.relations.iter_rows().find(|r| !r[k].is_zero()).map(|r| r[k].to_bigint());
            let c = c.to_bigint();
            match m {
                None if !c.is_zero() => return None,
                None => {}
                Some(m) => {
                    let g = c.gcd(&m);
                    order = order.lcm(&(m / g));
                }
            }
        }
        Some(order)
    }
}

/// A presented group rewritten on a diagonal presentation.
///
/// Old coordinates `w` map to new ones as `w · to_new`; new generator `k`
/// is the old element `from_new` row `k`.
#[derive(Clone, Debug)]
pub struct Diagonalized<T = BigInt> {
    pub group: PresentedGroup<T>,
    pub to_new: IntegerMatrix<T>,
    pub from_new: IntegerMatrix<T>,
}

/// Canonical form of `Z^generators / rowspace(relations)`.
pub fn cokernel_group<T: IntegerRing>(generators: usize, relations: &IntegerMatrix<T>) -> Result<FgAbelianGroup, AlgebraError> {
    if relations.cols() != generators {
        return Err(AlgebraError::Shape(format!("relations have {} columns but there are {generators} generators", relations.cols())));
    }
    let diag = invariant_factors(relations);
    let rank = diag.len();
    let factors = diag.into_iter().map(|d| d.to_bigint().abs()).filter(|d| !d.is_one()).collect();
    Ok(FgAbelianGroup { free_rank: generators - rank, invariant_factors: factors })
}
