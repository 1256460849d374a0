//! Graded modules over a one-variable polynomial ring `Z[v]`, and the
//! specific modules built from `lu_*(B Z/p)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::AlgebraError;
use crate::group::{cokernel_group, FgAbelianGroup, PresentedGroup};
use crate::map::AbelianGroupMap;
use crate::matrix::IntegerMatrix;

/// One term `coeff · v^v_power · g_generator` of a relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigInt,
    pub v_power: u32,
    pub generator: usize,
}

impl Term {
    pub fn new(coeff: impl Into<BigInt>, v_power: u32, generator: usize) -> Self {
        Term { coeff: coeff.into(), v_power, generator }
    }
}

/// Finitely many generators and relations of a graded `Z[v]`-module, all
/// materialized up to `truncation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModulePresentation {
    p: u64,
    ring_degree: i64,
    generator_degrees: Vec<i64>,
    relations: Vec<Vec<Term>>,
    truncation: i64,
}

/// A `v^k · g` basis element of a degree piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisElement {
    pub v_power: u32,
    pub generator: usize,
}

impl GradedModulePresentation {
    pub fn new(
        p: u64,
        ring_degree: i64,
        generator_degrees: Vec<i64>,
        relations: Vec<Vec<Term>>,
        truncation: i64,
    ) -> Result<Self, AlgebraError> {
        if ring_degree <= 0 {
            return Err(AlgebraError::InvalidArgument(format!("ring degree {ring_degree} must be positive")));
        }
        let m = GradedModulePresentation { p, ring_degree, generator_degrees, relations, truncation };
        for (r, rel) in m.relations.iter().enumerate() {
            let mut degree = None;
            for t in rel {
                let Some(&g) = m.generator_degrees.get(t.generator) else {
                    return Err(AlgebraError::InvalidArgument(format!("relation {r} uses unknown generator {}", t.generator)));
                };
                let d = g + m.ring_degree * t.v_power as i64;
                match degree {
                    None => degree = Some(d),
                    Some(e) if e != d => {
                        return Err(AlgebraError::Inhomogeneous(format!("relation {r} mixes degrees {e} and {d}")));
                    }
                    _ => {}
                }
            }
        }
        Ok(m)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn ring_degree(&self) -> i64 {
        self.ring_degree
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn generator_degrees(&self) -> &[i64] {
        &self.generator_degrees
    }

    pub fn relations(&self) -> &[Vec<Term>] {
        &self.relations
    }

    /// Degree of a relation (relations are homogeneous; empty ones have none).
    pub fn relation_degree(&self, r: usize) -> Option<i64> {
        self.relations[r].first().map(|t| self.term_degree(t))
    }

    fn term_degree(&self, t: &Term) -> i64 {
        self.generator_degrees[t.generator] + self.ring_degree * t.v_power as i64
    }

    /// Largest degree that can be realized without relations escaping the window.
    pub fn safe_degree(&self) -> i64 {
        self.truncation - self.ring_degree
    }

    fn check_window(&self, n: i64) -> Result<(), AlgebraError> {
        if n > self.safe_degree() {
            return Err(AlgebraError::OutOfWindow { degree: n, max: self.safe_degree() });
        }
        Ok(())
    }

    /// Z-basis `{v^k g : deg = n}`, ordered by generator.
    pub fn degree_basis(&self, n: i64) -> Vec<BasisElement> {
        self.generator_degrees
            .iter()
            .enumerate()
            .filter_map(|(g, &dg)| {
                let gap = n - dg;
                (gap >= 0 && gap % self.ring_degree == 0).then(|| BasisElement { v_power: (gap / self.ring_degree) as u32, generator: g })
            })
            .collect()
    }

    /// Degree-`n` piece as a presented abelian group on [`Self::degree_basis`].
    pub fn degree_presentation(&self, n: i64) -> Result<PresentedGroup, AlgebraError> {
        self.check_window(n)?;
        let basis = self.degree_basis(n);
        let index: BTreeMap<usize, usize> = basis.iter().enumerate().map(|(i, b)| (b.generator, i)).collect();
        let mut rows = Vec::new();
        for (r, rel) in self.relations.iter().enumerate() {
            let Some(e) = self.relation_degree(r) else { continue };
            let gap = n - e;
            if gap < 0 || gap % self.ring_degree != 0 {
                continue;
            }
            let mut row = vec![BigInt::zero(); basis.len()];
            for t in rel {
                // the shifted term lives in degree n, so its generator is in the basis
                row[index[&t.generator]] += &t.coeff;
            }
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
        PresentedGroup::new(basis.len(), IntegerMatrix::from_rows(basis.len(), rows)?)
    }

    /// Multiplication by `v` from degree `n` to degree `n + d`.
    pub fn v_multiplication(&self, n: i64) -> Result<AbelianGroupMap, AlgebraError> {
        let source = self.degree_presentation(n)?;
        let target = self.degree_presentation(n + self.ring_degree)?;
        let src_basis = self.degree_basis(n);
        let tgt_basis = self.degree_basis(n + self.ring_degree);
        AbelianGroupMap::new(source, target, v_matrix(&src_basis, &tgt_basis))
    }
}

/// Matrix of `v·` between two consecutive degree bases.
pub(crate) fn v_matrix(src: &[BasisElement], tgt: &[BasisElement]) -> IntegerMatrix<BigInt> {
    let mut m = IntegerMatrix::zeros(src.len(), tgt.len());
    for (i, b) in src.iter().enumerate() {
        let j = tgt.iter().position(|t| t.generator == b.generator).expect("v-image lies in the next degree");
        m[(i, j)] = BigInt::one();
    }
    m
}

/// Degree-`n` piece of `M`.
pub fn realize_degree(m: &GradedModulePresentation, n: i64) -> Result<FgAbelianGroup, AlgebraError> {
    let p = m.degree_presentation(n)?;
    cokernel_group(p.generators(), p.relations())
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

pub(crate) fn require_prime(p: u64) -> Result<(), AlgebraError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(AlgebraError::NotPrime(p))
    }
}

/// Degree of `v`: `2p - 2` (this is 2 for `p = 2`).
pub fn ring_degree(p: u64) -> i64 {
    2 * p as i64 - 2
}

/// `lu_*(B Z/p)` on generators `v_1, v_3, ...` up to degree `n_max`.
pub fn lu_bzp_presentation(p: u64, n_max: i64) -> Result<GradedModulePresentation, AlgebraError> {
    require_prime(p)?;
    if n_max < 1 {
        return Err(AlgebraError::InvalidArgument(format!("degree bound {n_max} leaves no generators")));
    }
    let d = ring_degree(p);
    let degrees: Vec<i64> = (1..=n_max).step_by(2).collect();
    let mut relations = Vec::new();
    for (g, &deg) in degrees.iter().enumerate() {
        if deg <= 2 * p as i64 - 3 {
            relations.push(vec![Term::new(p, 0, g)]);
        }
    }
    // v·v_{2i-1} - p·v_{2i-1+d}; index shift is d/2
    let step = (d / 2) as usize;
    for g in 0..degrees.len() {
        if g + step < degrees.len() {
            relations.push(vec![Term::new(1, 1, g), Term::new(-(p as i64), 0, g + step)]);
        }
    }
    GradedModulePresentation::new(p, d, degrees, relations, n_max)
}

/// Summand `Y_i` of `lu_*(B Z/p)`: generators `w_k` in degree `2k(p-1) + 2i - 1`,
/// relations `p·w_0` and `v·w_k - p·w_{k+1}`.
pub fn y_summand_presentation(p: u64, i: u64, n_max: i64) -> Result<GradedModulePresentation, AlgebraError> {
    require_prime(p)?;
    if i < 1 || i > p - 1 {
        return Err(AlgebraError::InvalidArgument(format!("summand index {i} outside 1..={}", p - 1)));
    }
    let d = ring_degree(p);
    let degrees: Vec<i64> = (0..).map(|k| k * d + 2 * i as i64 - 1).take_while(|&e| e <= n_max).collect();
    let mut relations = Vec::new();
    if !degrees.is_empty() {
        relations.push(vec![Term::new(p, 0, 0)]);
    }
    for k in 0..degrees.len().saturating_sub(1) {
        relations.push(vec![Term::new(1, 1, k), Term::new(-(p as i64), 0, k + 1)]);
    }
    GradedModulePresentation::new(p, d, degrees, relations, n_max)
}

/// `Z/p^{k+1}` when `n = 2k(p-1) + 2i - 1` with `1 <= i <= p-1`, else 0.
pub fn lu_closed_form(p: u64, n: i64) -> FgAbelianGroup {
    if n < 1 || n % 2 == 0 {
        return FgAbelianGroup::trivial();
    }
    let q = (n + 1) / 2 - 1;
    let k = q / (p as i64 - 1);
    FgAbelianGroup::cyclic_prime_power(p, k as u32 + 1)
}

/// `bu_n(B Z/p) = ⊕_{a=0}^{p-2} lu_{n-2a}`.
pub fn bu_bzp_group(p: u64, n: i64) -> FgAbelianGroup {
    let parts: Vec<_> = (0..p as i64 - 1).map(|a| lu_closed_form(p, n - 2 * a)).collect();
    FgAbelianGroup::sum_of(&parts)
}

/// `H_n(W_p; Z)`: Z in even degrees, 0 in odd.
pub fn w_p_homology(n: u64) -> FgAbelianGroup {
    if n.is_multiple_of(2) {
        FgAbelianGroup::free(1)
    } else {
        FgAbelianGroup::trivial()
    }
}

/// Degree-indexed groups over a closed window `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedGroup {
    lo: i64,
    hi: i64,
    groups: BTreeMap<i64, FgAbelianGroup>,
}

impl GradedGroup {
    pub fn from_fn(lo: i64, hi: i64, mut f: impl FnMut(i64) -> FgAbelianGroup) -> Result<Self, AlgebraError> {
        if lo > hi {
            return Err(AlgebraError::InvalidArgument(format!("empty window [{lo}, {hi}]")));
        }
        Ok(GradedGroup { lo, hi, groups: (lo..=hi).map(|n| (n, f(n))).collect() })
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn get(&self, n: i64) -> Result<&FgAbelianGroup, AlgebraError> {
        self.groups.get(&n).ok_or(AlgebraError::OutOfWindow { degree: n, max: self.hi })
    }

    /// `A[n]_j = A_{j+n}`.
    pub fn shift(&self, n: i64) -> Result<GradedGroup, AlgebraError> {
        let overflow = || AlgebraError::InvalidArgument(format!("shift by {n} overflows the degree range"));
        let lo = self.lo.checked_sub(n).ok_or_else(overflow)?;
        let hi = self.hi.checked_sub(n).ok_or_else(overflow)?;
        let groups = self.groups.iter().map(|(&j, g)| (j - n, g.clone())).collect();
        Ok(GradedGroup { lo, hi, groups })
    }

    /// Restriction to a sub-window.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<GradedGroup, AlgebraError> {
        if lo < self.lo || hi > self.hi {
            let degree = if lo < self.lo { lo } else { hi };
            return Err(AlgebraError::OutOfWindow { degree, max: self.hi });
        }
        GradedGroup::from_fn(lo, hi, |n| self.groups[&n].clone())
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &FgAbelianGroup)> {
        self.groups.iter().map(|(&n, g)| (n, g))
    }
}

/// Reduced part of `Z[t]/(t^2 + 2t, t^{r+1})` on the basis `t, t^2, ..., t^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedKuRing {
    r: usize,
}

impl TruncatedKuRing {
    pub fn new(r: usize) -> Result<Self, AlgebraError> {
        if r == 0 {
            return Err(AlgebraError::InvalidArgument("truncation must be at least 1".into()));
        }
        Ok(TruncatedKuRing { r })
    }

    pub fn truncation(&self) -> usize {
        self.r
    }

    /// Relations `t^{a+1} + 2t^a` for `a = 1..=r` (with `t^{r+1} = 0`).
    pub fn additive_presentation(&self) -> PresentedGroup {
        let r = self.r;
        let rows = (0..r)
            .map(|a| {
                let mut row = vec![BigInt::zero(); r];
                row[a] = BigInt::from(2);
                if a + 1 < r {
                    row[a + 1] = BigInt::one();
                }
                row
            })
            .collect();
        PresentedGroup::new(r, IntegerMatrix::from_rows(r, rows).expect("square")).expect("square")
    }

    pub fn additive_group(&self) -> FgAbelianGroup {
        self.additive_presentation().canonical()
    }

    /// Basis vector for `t^a`.
    pub fn power(&self, a: usize) -> Vec<BigInt> {
        let mut x = vec![BigInt::zero(); self.r];
        if (1..=self.r).contains(&a) {
            x[a - 1] = BigInt::one();
        }
        x
    }

    /// Product in the basis: `t^a · t^b = t^{a+b}`, zero past `t^r`.
    pub fn mul(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.r];
        for (a, xa) in x.iter().enumerate() {
            for (b, yb) in y.iter().enumerate() {
                let c = a + b + 1;
                if c < self.r {
                    out[c] += xa * yb;
                }
            }
        }
        out
    }

    /// Coordinate on the cyclic generator `t`: `t^a = (-2)^{a-1} t`, mod `2^r`.
    pub fn normal_form(&self, x: &[BigInt]) -> BigInt {
        let modulus = BigInt::one() << self.r;
        let mut acc = BigInt::zero();
        let mut w = BigInt::one();
        for c in x {
            acc += c * &w;
            w *= -2;
        }
        ((acc % &modulus) + &modulus) % modulus
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KuLemmaReport {
    pub r: usize,
    pub v: usize,
    pub reduced_group: FgAbelianGroup,
    pub smash_group: FgAbelianGroup,
    pub generator_order: BigInt,
    pub generated_by_t_tensor_t: bool,
    pub passed: bool,
}

/// Checks that `t ⊗ t` generates `Z/2^r ⊗ Z/2^v` for the truncated rings.
pub fn ku_lemma_check(r: usize, v: usize) -> Result<KuLemmaReport, AlgebraError> {
    let left = TruncatedKuRing::new(r)?;
    let right = TruncatedKuRing::new(v)?;
    let lp = left.additive_presentation();
    let rp = right.additive_presentation();
    // tensor presentation on t^a ⊗ t^b (index a * v + b)
    let mut rows = Vec::new();
    for rel in lp.relations().iter_rows() {
        for b in 0..v {
            let mut row = vec![BigInt::zero(); r * v];
            for (a, c) in rel.iter().enumerate() {
                row[a * v + b] = c.clone();
            }
            rows.push(row);
        }
    }
    for rel in rp.relations().iter_rows() {
        for a in 0..r {
            let mut row = vec![BigInt::zero(); r * v];
            for (b, c) in rel.iter().enumerate() {
                row[a * v + b] = c.clone();
            }
            rows.push(row);
        }
    }
    let smash = PresentedGroup::new(r * v, IntegerMatrix::from_rows(r * v, rows)?)?;
    let smash_group = smash.canonical();
    let mut t_t = vec![BigInt::zero(); r * v];
    t_t[0] = BigInt::one();
    let generator_order = smash.element_order(&t_t).unwrap_or_else(BigInt::zero);
    let reduced_group = left.additive_group();
    let generated =
        smash_group.invariant_factors().len() <= 1 && smash_group.is_finite() && Some(&generator_order) == smash_group.order().as_ref();
    let expected_reduced = FgAbelianGroup::cyclic(BigInt::one() << r);
    let expected_smash = FgAbelianGroup::cyclic(BigInt::one() << r.min(v));
    let passed = generated && reduced_group == expected_reduced && smash_group == expected_smash;
    Ok(KuLemmaReport { r, v, reduced_group, smash_group, generator_order, generated_by_t_tensor_t: generated, passed })
}
