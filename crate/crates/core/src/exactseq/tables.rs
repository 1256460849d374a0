//! Degree-wise group tables for `RP^∞` and `RP^∞ ∧ RP^∞`, and the ring `bo_*`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::Serialize;

use super::fixture::FixtureSet;
use crate::error::{AlgebraError, FixtureError};
use crate::group::{cokernel_group, FgAbelianGroup};
use crate::homological::KunnethEngine;
use crate::kmodules::bu_bzp_group;
use crate::matrix::IntegerMatrix;
use crate::steenrod::{x_count, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theory {
    Bo,
    Bo1,
    Hz,
    Bu,
}

impl Theory {
    pub fn tag(self) -> &'static str {
        match self {
            Theory::Bo => "bo",
            Theory::Bo1 => "bo1",
            Theory::Hz => "hz",
            Theory::Bu => "bu",
        }
    }

    /// Node label in a long exact sequence, e.g. `bo_3`.
    pub fn label(self, m: i64) -> String {
        format!("{}_{m}", self.tag())
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Groups of one space, degrees `0..=top`, negative degrees trivial.
///
/// Entries can be overridden one at a time, which is how the audits try out
/// alternative values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tables {
    pub space: Space,
    pub top: u64,
    groups: BTreeMap<Theory, Vec<FgAbelianGroup>>,
}

fn embedded() -> &'static FixtureSet {
    static SET: OnceLock<FixtureSet> = OnceLock::new();
    SET.get_or_init(FixtureSet::embedded)
}

impl Tables {
    /// `RP^∞`: bo, bo⟨1⟩ and H_Z from fixtures, bu computed.
    pub fn rp(fixtures: &FixtureSet, top: u64) -> Result<Self, FixtureError> {
        let mut groups = BTreeMap::new();
        for (theory, tag) in [(Theory::Bo, "bo"), (Theory::Bo1, "bo1"), (Theory::Hz, "hz")] {
            let table = fixtures.table(tag)?;
            groups.insert(theory, (0..=top).map(|m| table.eval(m)).collect::<Result<Vec<_>, _>>()?);
        }
        groups.insert(Theory::Bu, (0..=top).map(|m| bu_bzp_group(2, m as i64)).collect());
        Ok(Tables { space: Space::Rp, top, groups })
    }

    /// `RP^∞ ∧ RP^∞`: bo from the wedge formula over `rp`'s bo⟨1⟩, bu from the Künneth engine.
    pub fn smash(rp: &Tables, top: u64) -> Result<Self, AlgebraError> {
        if rp.top < top {
            return Err(AlgebraError::OutOfWindow { degree: top as i64, max: rp.top as i64 });
        }
        let engine = KunnethEngine::new(2, top as i64)?;
        let bo = (0..=top).map(|m| wedge_formula(rp.get(Theory::Bo1, m as i64), m)).collect();
        let bu = (0..=top).map(|m| engine.smash(m as i64)).collect::<Result<Vec<_>, _>>()?;
        let mut groups = BTreeMap::new();
        groups.insert(Theory::Bo, bo);
        groups.insert(Theory::Bu, bu);
        Ok(Tables { space: Space::Smash, top, groups })
    }

    pub fn has(&self, theory: Theory) -> bool {
        self.groups.contains_key(&theory)
    }

    /// Trivial below degree 0. Panics above `top` or for a theory not tabulated.
    pub fn get(&self, theory: Theory, m: i64) -> FgAbelianGroup {
        if m < 0 {
            return FgAbelianGroup::trivial();
        }
        let col = self.groups.get(&theory).unwrap_or_else(|| panic!("no {theory} column for {:?}", self.space));
        col.get(m as usize).cloned().unwrap_or_else(|| panic!("{theory}_{m} is above the table top {}", self.top))
    }

    pub fn set(&mut self, theory: Theory, m: u64, group: FgAbelianGroup) {
        assert!(m <= self.top, "{theory}_{m} is above the table top {}", self.top);
        self.groups.entry(theory).or_insert_with(|| vec![FgAbelianGroup::trivial(); self.top as usize + 1])[m as usize] = group;
    }

    /// Copy with one entry replaced.
    pub fn with(&self, theory: Theory, m: u64, group: FgAbelianGroup) -> Self {
        let mut t = self.clone();
        t.set(theory, m, group);
        t
    }
}

fn wedge_formula(bo1: FgAbelianGroup, m: u64) -> FgAbelianGroup {
    if m.is_multiple_of(2) {
        bo1.direct_sum(&FgAbelianGroup::elementary(2, x_count(m / 2) as usize))
    } else {
        bo1
    }
}

pub fn bo_rp_table(n: u64) -> FgAbelianGroup {
    embedded().table("bo").and_then(|t| t.eval(n)).expect("built-in bo table covers every degree")
}

pub fn bo1_rp_table(n: u64) -> FgAbelianGroup {
    embedded().table("bo1").and_then(|t| t.eval(n)).expect("built-in bo1 table covers every degree")
}

pub fn hz_rp_table(n: u64) -> FgAbelianGroup {
    embedded().table("hz").and_then(|t| t.eval(n)).expect("built-in hz table covers every degree")
}

/// `bo_m(RP^∞ ∧ RP^∞) = bo⟨1⟩_m(RP^∞) ⊕ (Z/2)^{X_{m/2}}`, the wedge term only for even `m`.
pub fn bo_smash_group(m: u64) -> FgAbelianGroup {
    wedge_formula(bo1_rp_table(m), m)
}

/// [`bo_smash_group`] over the bo⟨1⟩ table of `fixtures`.
pub fn bo_smash_group_with(fixtures: &FixtureSet, m: u64) -> Result<FgAbelianGroup, FixtureError> {
    Ok(wedge_formula(fixtures.table("bo1")?.eval(m)?, m))
}

/// `Z[η, α, β]/(2η, η³, ηα, α² − 4β)`, `|η| = 1`, `|α| = 4`, `|β| = 8`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoCoefficients {
    pub generators: Vec<(&'static str, u32)>,
    pub relations: Vec<&'static str>,
    /// Module-structure remarks on `bo_*(RP^∞)`. Recorded, not checked.
    pub notes: Vec<&'static str>,
}

impl Default for BoCoefficients {
    fn default() -> Self {
        Self::new()
    }
}

// exponents of η, α, β
type Mono = (u32, u32, u32);

impl BoCoefficients {
    pub fn new() -> Self {
        BoCoefficients {
            generators: vec![("eta", 1), ("alpha", 4), ("beta", 8)],
            relations: vec!["2 eta", "eta^3", "eta alpha", "alpha^2 - 4 beta"],
            notes: vec![
                "eta-multiplication is nontrivial from degree 8n+1 to 8n+2 and from 8n+2 to 8n+3",
                "alpha-multiplication has kernel of order 4 from degree 8n+3 to 8n+7",
                "alpha-multiplication is injective from degree 8n+7 to 8n+11",
                "beta-multiplication is injective",
            ],
        }
    }

    fn monomials(n: u32) -> Vec<Mono> {
        let mut out = Vec::new();
        for c in 0..=n / 8 {
            for b in 0..=(n - 8 * c) / 4 {
                out.push((n - 8 * c - 4 * b, b, c));
            }
        }
        out
    }

    /// The additive group `bo_n`, as the cokernel of the relations in degree `n`.
    pub fn degree_group(&self, n: u32) -> FgAbelianGroup {
        let basis = Self::monomials(n);
        let index: BTreeMap<Mono, usize> = basis.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut rel = |terms: &[(i64, Mono)]| {
            let mut row = vec![BigInt::from(0); basis.len()];
            for &(c, m) in terms {
                row[index[&m]] += c;
            }
            rows.push(row);
        };
        for &(a, b, c) in &basis {
            if a >= 1 {
                rel(&[(2, (a, b, c))]);
            }
            if a >= 3 {
                rel(&[(1, (a, b, c))]);
            }
            if a >= 1 && b >= 1 {
                rel(&[(1, (a, b, c))]);
            }
            if b >= 2 {
                rel(&[(1, (a, b, c)), (-4, (a, b - 2, c + 1))]);
            }
        }
        let m = IntegerMatrix::from_rows(basis.len(), rows).expect("relation rows have the basis width");
        cokernel_group(basis.len(), &m).expect("relation rows have the basis width")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(s: &str) -> FgAbelianGroup {
        s.parse().unwrap()
    }

    #[test]
    fn rp_rows() {
        assert_eq!(bo_rp_table(3), g("Z/8"));
        assert_eq!(bo_rp_table(11), g("Z/128"));
        assert_eq!(bo_rp_table(7), g("Z/16"));
        assert_eq!(bo1_rp_table(7), g("Z/8"));
        assert_eq!(bo1_rp_table(3), g("Z/4"));
        assert!(bo1_rp_table(1).is_trivial());
        assert_eq!(bo1_rp_table(9), g("Z/2"));
        assert_eq!(hz_rp_table(5), g("Z/2"));
        assert!(hz_rp_table(6).is_trivial());
    }

    #[test]
    fn smash_formula() {
        assert_eq!(bo_smash_group(4), g("Z/2 ⊕ Z/2"));
        assert_eq!(bo_smash_group(6), g("Z/2"));
        assert_eq!(bo_smash_group(10), g("Z/2 ⊕ Z/2 ⊕ Z/2"));
        assert_eq!(bo_smash_group(3), g("Z/4"));
        assert!(bo_smash_group(0).is_trivial() && bo_smash_group(1).is_trivial());
        assert_eq!(bo_smash_group(2), g("Z/2"));
    }

    #[test]
    fn coefficient_ring() {
        let bo = BoCoefficients::new();
        let expect = ["Z", "Z/2", "Z/2", "0", "Z", "0", "0", "0"];
        for n in 0..40u32 {
            assert_eq!(bo.degree_group(n), g(expect[(n % 8) as usize]), "degree {n}");
        }
        assert_eq!(bo.generators.iter().map(|g| g.1).collect::<Vec<_>>(), [1, 4, 8]);
    }

    #[test]
    fn overrides() {
        let t = Tables::rp(&FixtureSet::embedded(), 12).unwrap();
        assert_eq!(t.get(Theory::Bu, 3), g("Z/4"));
        assert!(t.get(Theory::Bo, -1).is_trivial());
        let u = t.with(Theory::Bo1, 3, g("Z/8"));
        assert_eq!(u.get(Theory::Bo1, 3), g("Z/8"));
        assert_eq!(t.get(Theory::Bo1, 3), g("Z/4"));
        let s = Tables::smash(&t, 12).unwrap();
        assert_eq!(s.get(Theory::Bu, 7), g("Z/8"));
        assert_eq!(s.get(Theory::Bo, 4), g("Z/2 ⊕ Z/2"));
        assert!(!s.has(Theory::Hz));
    }

    proptest! {
        #[test]
        fn wedge_part_is_x_count(n in 0u64..=60) {
            let extra = bo_smash_group(2 * n).fp_dimension(2).unwrap() - bo1_rp_table(2 * n).fp_dimension(2).unwrap();
            prop_assert_eq!(extra as u64, x_count(n));
        }

        #[test]
        fn printed_even_and_quiet_odd_rows_match(m in 0u64..=200) {
            let printed = FixtureSet::embedded().table("bo_smash").unwrap().eval(m).unwrap();
            if m % 8 != 3 && m % 8 != 7 {
                prop_assert_eq!(printed, bo_smash_group(m));
            } else {
                prop_assert_eq!(printed.order().unwrap(), bo_smash_group(m).order().unwrap() * 2);
            }
        }
    }

    #[test]
    fn smash_is_one_connected() {
        for m in 0..=1 {
            assert!(bo_smash_group(m).is_trivial());
        }
    }
}
