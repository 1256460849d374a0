//! Tensor products and Tor over `Z[v]`, degree by degree, and the Künneth
//! assembly for `bu_*(B Z/p ∧ B Z/p)`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::AlgebraError;
use crate::group::{cokernel_group, FgAbelianGroup, PresentedGroup};
use crate::kmodules::{
    bu_bzp_group, lu_bzp_presentation, lu_closed_form, realize_degree, require_prime, ring_degree, v_matrix, y_summand_presentation,
    GradedModulePresentation,
};
use crate::map::{kernel_of_map, AbelianGroupMap, RowLattice};
use crate::matrix::IntegerMatrix;
use crate::snf::invariant_factors;

fn same_ring(m: &GradedModulePresentation, n: &GradedModulePresentation) -> Result<(), AlgebraError> {
    if m.prime() != n.prime() || m.ring_degree() != n.ring_degree() {
        return Err(AlgebraError::RingMismatch(format!(
            "(p={}, deg v={}) vs (p={}, deg v={})",
            m.prime(),
            m.ring_degree(),
            n.prime(),
            n.ring_degree()
        )));
    }
    Ok(())
}

/// Degree-`n` piece of `M ⊗_{Z[v]} N` on the basis `v^k (g ⊗ h)`.
pub fn tensor_presentation(
    m: &GradedModulePresentation,
    n: &GradedModulePresentation,
    degree: i64,
) -> Result<PresentedGroup, AlgebraError> {
    same_ring(m, n)?;
    for x in [m, n] {
        if degree > x.safe_degree() {
            return Err(AlgebraError::OutOfWindow { degree, max: x.safe_degree() });
        }
    }
    let d = m.ring_degree();
    let fits = |e: i64| e <= degree && (degree - e) % d == 0;
    let mut index = HashMap::new();
    for (g, &dg) in m.generator_degrees().iter().enumerate() {
        for (h, &dh) in n.generator_degrees().iter().enumerate() {
            if fits(dg + dh) {
                let next = index.len();
                index.insert((g, h), next);
            }
        }
    }
    let width = index.len();
    let mut rows = Vec::new();
    let mut push = |entries: Vec<(usize, &BigInt)>| {
        let mut row = vec![BigInt::zero(); width];
        for (c, coeff) in entries {
            row[c] += coeff;
        }
        if row.iter().any(|c| !c.is_zero()) {
            rows.push(row);
        }
    };
    for (r, rel) in m.relations().iter().enumerate() {
        let Some(e) = m.relation_degree(r) else { continue };
        for (h, &dh) in n.generator_degrees().iter().enumerate() {
            if fits(e + dh) {
                push(rel.iter().map(|t| (index[&(t.generator, h)], &t.coeff)).collect());
            }
        }
    }
    for (r, rel) in n.relations().iter().enumerate() {
        let Some(e) = n.relation_degree(r) else { continue };
        for (g, &dg) in m.generator_degrees().iter().enumerate() {
            if fits(e + dg) {
                push(rel.iter().map(|t| (index[&(g, t.generator)], &t.coeff)).collect());
            }
        }
    }
    PresentedGroup::new(width, IntegerMatrix::from_rows(width, rows)?)
}

pub fn tensor_degree(m: &GradedModulePresentation, n: &GradedModulePresentation, degree: i64) -> Result<FgAbelianGroup, AlgebraError> {
    let p = tensor_presentation(m, n, degree)?;
    cokernel_group(p.generators(), p.relations())
}

/// Two-stage free resolution `0 → ⊕ Z[v]a_j → ⊕ Z[v]b_j → Y_i → 0` with
/// `d(a_j) = p b_j - v b_{j-1}` and `ε(b_j) = w_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YResolution {
    p: u64,
    i: u64,
    window: i64,
}

impl YResolution {
    /// Materializes every `a_j`, `b_j` of degree at most `window`.
    pub fn new(p: u64, i: u64, window: i64) -> Result<Self, AlgebraError> {
        require_prime(p)?;
        if i < 1 || i > p - 1 {
            return Err(AlgebraError::InvalidArgument(format!("summand index {i} outside 1..={}", p - 1)));
        }
        Ok(YResolution { p, i, window })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn summand(&self) -> u64 {
        self.i
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    /// Internal degree of `a_j` and `b_j`.
    pub fn generator_degree(&self, j: usize) -> i64 {
        j as i64 * ring_degree(self.p) + 2 * self.i as i64 - 1
    }

    /// Indices `j` with `deg a_j <= n`.
    fn generators_up_to(&self, n: i64) -> Vec<usize> {
        (0..).take_while(|&j| self.generator_degree(j) <= n.min(self.window)).collect()
    }

    fn free_basis(&self, n: i64) -> Vec<usize> {
        let d = ring_degree(self.p);
        self.generators_up_to(n).into_iter().filter(|&j| (n - self.generator_degree(j)) % d == 0).collect()
    }

    /// Realized `d` in degree `n` as a matrix over Z, rows `v^k a_j`, columns `v^k b_j`.
    pub fn differential(&self, n: i64) -> Result<IntegerMatrix<BigInt>, AlgebraError> {
        self.check(n)?;
        let basis = self.free_basis(n);
        let col = |j: usize| basis.iter().position(|&b| b == j);
        let mut m = IntegerMatrix::zeros(basis.len(), basis.len());
        for (r, &j) in basis.iter().enumerate() {
            m[(r, r)] = BigInt::from(self.p);
            if j > 0 {
                let c = col(j - 1).expect("b_{j-1} sits in the same degree after one v");
                m[(r, c)] = BigInt::from(-1);
            }
        }
        Ok(m)
    }

    fn check(&self, n: i64) -> Result<(), AlgebraError> {
        if n > self.window {
            return Err(AlgebraError::InsufficientWindow(format!(
                "degree {n} needs generators beyond the resolution window {}",
                self.window
            )));
        }
        Ok(())
    }

    /// `d` injective, `ε ∘ d = 0`, and `coker d ≅ (Y_i)_n`.
    pub fn is_exact_at(&self, n: i64) -> Result<bool, AlgebraError> {
        let dn = self.differential(n)?;
        let injective = invariant_factors(&dn).len() == dn.rows();
        let y = y_summand_presentation(self.p, self.i, n + ring_degree(self.p))?;
        let yn = y.degree_presentation(n)?;
        // the free basis b_j and the Y basis w_j are indexed identically
        let lattice = RowLattice::new(yn.relations());
        let augmented = dn.iter_rows().all(|row| lattice.contains(row));
        let cokernel = cokernel_group(dn.cols(), &dn)?;
        Ok(injective && augmented && cokernel == realize_degree(&y, n)?)
    }
}

/// `Tor_1` of `N` against `Y_i` in internal degree `n`, as the kernel of
/// `1 ⊗ d : ⊕_j N⟨a_j⟩ → ⊕_j N⟨b_j⟩`.
pub fn tor1_degree(r: &YResolution, n_module: &GradedModulePresentation, n: i64) -> Result<FgAbelianGroup, AlgebraError> {
    Ok(kernel_of_map(&tor1_map(r, n_module, n)?))
}

/// The degree-`n` slice of `1 ⊗ d`, written on Smith bases of each piece.
pub fn tor1_map(r: &YResolution, n_module: &GradedModulePresentation, n: i64) -> Result<AbelianGroupMap, AlgebraError> {
    if n_module.prime() != r.prime() || n_module.ring_degree() != ring_degree(r.prime()) {
        return Err(AlgebraError::RingMismatch(format!("module over p={} against resolution over p={}", n_module.prime(), r.prime())));
    }
    r.check(n)?;
    let needed = n - r.generator_degree(0);
    if needed > n_module.safe_degree() {
        return Err(AlgebraError::InsufficientWindow(format!(
            "degree {n} needs the module through degree {needed}, window ends at {}",
            n_module.safe_degree()
        )));
    }
    let js = r.generators_up_to(n);
    let p = BigInt::from(r.p);
    let pieces: Vec<_> =
        js.iter().map(|&j| n_module.degree_presentation(n - r.generator_degree(j)).map(|g| g.diagonalize())).collect::<Result<_, _>>()?;
    let offsets: Vec<usize> = pieces
        .iter()
        .scan(0, |acc, piece| {
            let o = *acc;
            *acc += piece.group.generators();
            Some(o)
        })
        .collect();
    let total: usize = pieces.iter().map(|piece| piece.group.generators()).sum();
    let mut images = IntegerMatrix::zeros(total, total);
    for (idx, &j) in js.iter().enumerate() {
        let piece = &pieces[idx];
        let own = &piece.from_new * &piece.to_new;
        for a in 0..own.rows() {
            for b in 0..own.cols() {
                images[(offsets[idx] + a, offsets[idx] + b)] = &own[(a, b)] * &p;
            }
        }
        if idx > 0 {
            let deg = n - r.generator_degree(j);
            let v = v_matrix(&n_module.degree_basis(deg), &n_module.degree_basis(deg + n_module.ring_degree()));
            let prev = &pieces[idx - 1];
            let block = &(&piece.from_new * &v) * &prev.to_new;
            for a in 0..block.rows() {
                for b in 0..block.cols() {
                    images[(offsets[idx] + a, offsets[idx - 1] + b)] = -block[(a, b)].clone();
                }
            }
        }
    }
    let groups: Vec<_> = pieces.iter().map(|piece| piece.group.clone()).collect();
    let sum = PresentedGroup::direct_sum(&groups);
    AbelianGroupMap::new(sum.clone(), sum, images)
}

/// `T_{i,n}`: `Z/p^{t+1}` for even `n >= 2i`, where `n - 2i + 1 = 2t(p-1) + 2j - 1`.
pub fn tor_closed_form(p: u64, i: u64, n: i64) -> FgAbelianGroup {
    if n % 2 != 0 || n < 2 * i as i64 - 1 {
        return FgAbelianGroup::trivial();
    }
    lu_closed_form(p, n - 2 * i as i64 + 1)
}

/// `#{(a, i, j) : 2a + 2i + 2j - 2 = n, 0 <= a <= p-2, i, j >= 1}`.
pub fn wedge_count(p: u64, n: i64) -> usize {
    if n < 2 || n % 2 != 0 {
        return 0;
    }
    let half = n / 2 + 1;
    (0..p as i64 - 1).map(|a| (half - a - 1).max(0) as usize).sum()
}

/// Cached degree-wise tensor and Tor pieces of `lu ∧ lu` up to `n_max`.
#[derive(Clone, Debug)]
pub struct KunnethEngine {
    p: u64,
    n_max: i64,
    tensor: Vec<FgAbelianGroup>,
    tor: Vec<Vec<FgAbelianGroup>>,
}

impl KunnethEngine {
    pub fn new(p: u64, n_max: i64) -> Result<Self, AlgebraError> {
        require_prime(p)?;
        if n_max < 0 {
            return Err(AlgebraError::InvalidArgument(format!("negative degree bound {n_max}")));
        }
        let lu = lu_bzp_presentation(p, (n_max + ring_degree(p)).max(1))?;
        let tensor = (0..=n_max).map(|n| tensor_degree(&lu, &lu, n)).collect::<Result<_, _>>()?;
        let mut tor = Vec::new();
        for i in 1..p {
            let res = YResolution::new(p, i, n_max)?;
            tor.push((0..=n_max).map(|n| tor1_degree(&res, &lu, n)).collect::<Result<_, _>>()?);
        }
        Ok(KunnethEngine { p, n_max, tensor, tor })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn max_degree(&self) -> i64 {
        self.n_max
    }

    fn lookup<'a>(&self, table: &'a [FgAbelianGroup], n: i64) -> Result<Option<&'a FgAbelianGroup>, AlgebraError> {
        if n > self.n_max {
            return Err(AlgebraError::OutOfWindow { degree: n, max: self.n_max });
        }
        Ok((n >= 0).then(|| &table[n as usize]))
    }

    /// `(lu ⊗ lu)_n`.
    pub fn lu_tensor(&self, n: i64) -> Result<FgAbelianGroup, AlgebraError> {
        Ok(self.lookup(&self.tensor, n)?.cloned().unwrap_or_default())
    }

    /// `T_{i,n}`, computed from the resolution.
    pub fn lu_tor(&self, i: u64, n: i64) -> Result<FgAbelianGroup, AlgebraError> {
        let table = self
            .tor
            .get((i as usize).wrapping_sub(1))
            .ok_or_else(|| AlgebraError::InvalidArgument(format!("summand index {i} outside 1..={}", self.p - 1)))?;
        Ok(self.lookup(table, n)?.cloned().unwrap_or_default())
    }

    /// Tensor part of `bu_n(smash)`, summed over the Adams summands.
    pub fn tensor_part(&self, n: i64) -> Result<FgAbelianGroup, AlgebraError> {
        let parts = (0..self.p as i64 - 1).map(|a| self.lu_tensor(n - 2 * a)).collect::<Result<Vec<_>, _>>()?;
        Ok(FgAbelianGroup::sum_of(&parts))
    }

    /// Tor part of `bu_n(smash)`: Tor at internal degree `n - 1`.
    pub fn tor_part(&self, n: i64) -> Result<FgAbelianGroup, AlgebraError> {
        let mut parts = Vec::new();
        for a in 0..self.p as i64 - 1 {
            for i in 1..self.p {
                parts.push(self.lu_tor(i, n - 2 * a - 1)?);
            }
        }
        Ok(FgAbelianGroup::sum_of(&parts))
    }

    /// `bu_n(B Z/p ∧ B Z/p)` from the Künneth sequence.
    pub fn smash(&self, n: i64) -> Result<FgAbelianGroup, AlgebraError> {
        let (t, s) = (self.tensor_part(n)?, self.tor_part(n)?);
        if !t.is_trivial() && !s.is_trivial() {
            return Err(AlgebraError::Extension(n));
        }
        Ok(t.direct_sum(&s))
    }

    /// `⊕_i bu_{n-2i}(B Z/p) ⊕ (Z/p)^{wedge count}`.
    pub fn decomposition(&self, n: i64) -> FgAbelianGroup {
        let mut parts: Vec<_> = (1..self.p as i64).map(|i| bu_bzp_group(self.p, n - 2 * i)).collect();
        parts.push(FgAbelianGroup::elementary(self.p, wedge_count(self.p, n)));
        FgAbelianGroup::sum_of(&parts)
    }
}

pub fn kunneth_smash_group(p: u64, n: i64) -> Result<FgAbelianGroup, AlgebraError> {
    KunnethEngine::new(p, n.max(0))?.smash(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KunnethRecord {
    pub degree: i64,
    pub tensor: FgAbelianGroup,
    pub tor: FgAbelianGroup,
    /// `None` when both parts are nonzero.
    pub assembled: Option<FgAbelianGroup>,
    pub cross_check: FgAbelianGroup,
    pub verdict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KunnethReport {
    pub p: u64,
    pub n_max: i64,
    pub records: Vec<KunnethRecord>,
}

impl KunnethReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.verdict)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

impl fmt::Display for KunnethReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bu_n(BZ/{0} ^ BZ/{0}), n <= {1}", self.p, self.n_max)?;
        writeln!(f, "{:>4}  {:<16} {:<16} {:<16} {:<16} ok", "n", "tensor", "tor", "assembled", "expected")?;
        for r in &self.records {
            let assembled = r.assembled.as_ref().map_or_else(|| "extension?".to_string(), |g| g.to_string());
            writeln!(
                f,
                "{:>4}  {:<16} {:<16} {:<16} {:<16} {}",
                r.degree,
                r.tensor.to_string(),
                r.tor.to_string(),
                assembled,
                r.cross_check.to_string(),
                if r.verdict { "yes" } else { "NO" }
            )?;
        }
        Ok(())
    }
}

/// Compares the Künneth answer with the decomposition in every degree up to `n_max`.
pub fn verify_smash_decomposition(p: u64, n_max: i64) -> Result<KunnethReport, AlgebraError> {
    let engine = KunnethEngine::new(p, n_max)?;
    let mut records = Vec::new();
    for n in 0..=n_max {
        let tensor = engine.tensor_part(n)?;
        let tor = engine.tor_part(n)?;
        let assembled = match engine.smash(n) {
            Ok(g) => Some(g),
            Err(AlgebraError::Extension(_)) => None,
            Err(e) => return Err(e),
        };
        let cross_check = engine.decomposition(n);
        let verdict = assembled.as_ref() == Some(&cross_check);
        records.push(KunnethRecord { degree: n, tensor, tor, assembled, cross_check, verdict });
    }
    Ok(KunnethReport { p, n_max, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    // 0 for an infinite group
    fn order_or_zero(g: &FgAbelianGroup) -> BigInt {
        g.order().unwrap_or_else(BigInt::zero)
    }
    use crate::kmodules::Term;
    use proptest::prelude::*;

    fn z(n: u64) -> FgAbelianGroup {
        FgAbelianGroup::cyclic(n)
    }

    #[test]
    fn tensor_examples() {
        let lu2 = lu_bzp_presentation(2, 12).unwrap();
        assert_eq!(tensor_degree(&lu2, &lu2, 6).unwrap(), FgAbelianGroup::elementary(2, 3));
        let lu3 = lu_bzp_presentation(3, 12).unwrap();
        assert_eq!(tensor_degree(&lu3, &lu3, 4).unwrap(), FgAbelianGroup::elementary(3, 2));
        for n in (1..=7).step_by(2) {
            assert!(tensor_degree(&lu2, &lu2, n).unwrap().is_trivial());
            assert!(tensor_degree(&lu3, &lu3, n).unwrap().is_trivial());
        }
    }

    #[test]
    fn tensor_rejects_mismatched_rings() {
        let a = lu_bzp_presentation(2, 10).unwrap();
        let b = lu_bzp_presentation(3, 10).unwrap();
        assert!(matches!(tensor_degree(&a, &b, 2), Err(AlgebraError::RingMismatch(_))));
    }

    #[test]
    fn tensor_with_the_ring_is_identity() {
        // Z[v] itself: one generator in degree 0, no relations
        let lu = lu_bzp_presentation(3, 30).unwrap();
        let ring = GradedModulePresentation::new(3, 4, vec![0], Vec::<Vec<Term>>::new(), 30).unwrap();
        for n in 0..=26 {
            assert_eq!(tensor_degree(&lu, &ring, n).unwrap(), realize_degree(&lu, n).unwrap());
        }
    }

    #[test]
    fn tor_examples() {
        let lu2 = lu_bzp_presentation(2, 20).unwrap();
        let r = YResolution::new(2, 1, 18).unwrap();
        assert_eq!(tor1_degree(&r, &lu2, 4).unwrap(), z(4));
        for n in (1..=17).step_by(2) {
            assert!(tor1_degree(&r, &lu2, n).unwrap().is_trivial());
        }
        let lu3 = lu_bzp_presentation(3, 20).unwrap();
        let r = YResolution::new(3, 2, 16).unwrap();
        assert_eq!(tor1_degree(&r, &lu3, 8).unwrap(), z(9));
        assert_eq!(tor_closed_form(2, 1, 4), z(4));
        assert_eq!(tor_closed_form(3, 2, 8), z(9));
        assert!(tor_closed_form(2, 1, 0).is_trivial());
    }

    #[test]
    fn tor_window_errors() {
        let lu2 = lu_bzp_presentation(2, 6).unwrap();
        let r = YResolution::new(2, 1, 30).unwrap();
        assert!(matches!(tor1_degree(&r, &lu2, 20), Err(AlgebraError::InsufficientWindow(_))));
        let lu2 = lu_bzp_presentation(2, 40).unwrap();
        let r = YResolution::new(2, 1, 4).unwrap();
        assert!(matches!(tor1_degree(&r, &lu2, 6), Err(AlgebraError::InsufficientWindow(_))));
        assert!(YResolution::new(3, 0, 4).is_err());
        assert!(YResolution::new(6, 1, 4).is_err());
    }

    #[test]
    fn resolutions_are_exact() {
        for p in [2u64, 3, 5] {
            for i in 1..p {
                let r = YResolution::new(p, i, 40).unwrap();
                for n in 0..=40 {
                    assert!(r.is_exact_at(n).unwrap(), "p={p} i={i} n={n}");
                }
            }
        }
    }

    #[test]
    fn smash_examples() {
        assert_eq!(kunneth_smash_group(2, 2).unwrap(), z(2));
        assert_eq!(kunneth_smash_group(2, 7).unwrap(), z(8));
        assert_eq!(kunneth_smash_group(3, 4).unwrap(), FgAbelianGroup::elementary(3, 3));
        assert!(kunneth_smash_group(2, 1).unwrap().is_trivial());
        assert!(kunneth_smash_group(2, 0).unwrap().is_trivial());
    }

    #[test]
    fn engine_window() {
        let e = KunnethEngine::new(2, 10).unwrap();
        assert!(matches!(e.smash(11), Err(AlgebraError::OutOfWindow { degree: 11, max: 10 })));
        assert!(e.lu_tor(2, 4).is_err());
        assert!(KunnethEngine::new(9, 4).is_err());
    }

    #[test]
    fn decomposition_reports() {
        let rep = verify_smash_decomposition(2, 0).unwrap();
        assert!(rep.passed());
        let rep = verify_smash_decomposition(2, 16).unwrap();
        assert!(rep.passed(), "{rep}");
        let json = rep.to_json();
        assert_eq!(json["records"][7]["assembled"], serde_json::json!({"rank": 0, "invariants": [8]}));
        assert!(rep.to_string().contains("Z/8"));
    }

    #[test]
    fn wedge_counts() {
        assert_eq!(wedge_count(2, 2), 1);
        assert_eq!(wedge_count(3, 4), 3);
        assert_eq!(wedge_count(3, 5), 0);
        // brute force
        for p in [2u64, 3, 5] {
            for n in 0..30 {
                let mut c = 0;
                for a in 0..=p as i64 - 2 {
                    for i in 1..=n {
                        for j in 1..=n {
                            if 2 * a + 2 * i + 2 * j - 2 == n {
                                c += 1;
                            }
                        }
                    }
                }
                assert_eq!(wedge_count(p, n), c);
            }
        }
    }

    #[test]
    fn even_degree_dimension_matches_wedge_count() {
        for p in [2u64, 3] {
            let e = KunnethEngine::new(p, 24).unwrap();
            for m in 0..=12 {
                assert_eq!(e.smash(2 * m).unwrap().fp_dimension(p), Some(wedge_count(p, 2 * m)), "p={p} 2m={}", 2 * m);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn tor_is_stable_under_window_growth(p in prop::sample::select(vec![2u64, 3]), n in 0i64..=20, extra in 1i64..=12) {
            let lu = lu_bzp_presentation(p, 40).unwrap();
            for i in 1..p {
                let small = YResolution::new(p, i, 20).unwrap();
                let big = YResolution::new(p, i, 20 + extra).unwrap();
                prop_assert_eq!(tor1_degree(&small, &lu, n).unwrap(), tor1_degree(&big, &lu, n).unwrap());
            }
        }

        #[test]
        fn order_equation(p in prop::sample::select(vec![2u64, 3]), n in 0i64..=20) {
            let e = KunnethEngine::new(p, 20).unwrap();
            let smash = e.smash(n).unwrap();
            let (t, s) = (e.tensor_part(n).unwrap(), e.tor_part(n).unwrap());
            prop_assert_eq!(order_or_zero(&smash), order_or_zero(&t) * order_or_zero(&s));
            prop_assert!(t.is_trivial() || n % 2 == 0);
            prop_assert!(s.is_trivial() || n % 2 == 1);
        }
    }
}
