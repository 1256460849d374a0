//! Mod-2 cohomology of `RP^∞` and `RP^∞ ∧ RP^∞` as modules over
//! `B = ⟨Sq¹, Sq²⟩` and `E = E(Sq¹, Q₁)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;

/// Dense matrix over F₂, row-vector convention (`x ↦ x·M`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix { rows, cols, data: vec![false; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.data[i * self.cols + j] = v;
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.data[i * self.cols + j] ^= true;
    }

    pub fn row(&self, i: usize) -> &[bool] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn from_rows(cols: usize, rows: &[Vec<bool>]) -> Self {
        let mut m = F2Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row width");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|b| !b)
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    for j in 0..other.cols {
                        if other.get(k, j) {
                            out.flip(i, j);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shapes must agree");
        F2Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect() }
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn vstack(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.cols, "column counts must agree");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        F2Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form and pivot columns.
    fn echelon(&self) -> (F2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else { continue };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            for i in 0..m.rows {
                if i != r && m.get(i, c) {
                    for j in 0..m.cols {
                        let v = m.get(r, j);
                        if v {
                            m.flip(i, j);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis of `{y : M·y = 0}` (column null space), one vector per row.
    pub fn null_space(&self) -> F2Matrix {
        let (e, pivots) = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = F2Matrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, true);
            for (r, &pc) in pivots.iter().enumerate() {
                if e.get(r, f) {
                    out.set(k, pc, true);
                }
            }
        }
        out
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let s: String = self.row(i).iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// `C(n, k)` mod 2 by Lucas: odd iff the bits of `k` are a subset of those of `n`.
pub fn binomial_is_odd(n: u32, k: u32) -> bool {
    k & !n == 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    /// `RP^∞`
    Rp,
    /// `RP^∞ ∧ RP^∞`
    Smash,
}

impl Space {
    fn arity(self) -> usize {
        match self {
            Space::Rp => 1,
            Space::Smash => 2,
        }
    }
}

/// `x^a` or `x^a y^b`, all exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Result<Self, AlgebraError> {
        if exponents.is_empty() || exponents.len() > 2 || exponents.contains(&0) {
            return Err(AlgebraError::InvalidArgument(format!("{exponents:?} is not a reduced monomial")));
        }
        Ok(Monomial { exponents })
    }

    pub fn x(a: u32) -> Self {
        Monomial::new(vec![a]).expect("positive exponent")
    }

    pub fn xy(a: u32, b: u32) -> Self {
        Monomial::new(vec![a, b]).expect("positive exponents")
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, &e) in ["x", "y"].iter().zip(&self.exponents) {
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

fn total_square(k: u32, m: &Monomial) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    let mut toggle = |mono: Monomial| {
        if let Some(pos) = out.iter().position(|o| *o == mono) {
            out.remove(pos);
        } else {
            out.push(mono);
        }
    };
    match m.exponents.as_slice() {
        [a] => {
            if binomial_is_odd(*a, k) {
                toggle(Monomial::x(a + k));
            }
        }
        [a, b] => {
            for j in 0..=k {
                if binomial_is_odd(*a, j) && binomial_is_odd(*b, k - j) {
                    toggle(Monomial::xy(a + j, b + k - j));
                }
            }
        }
        _ => unreachable!("monomials have one or two variables"),
    }
    out.sort();
    out
}

/// `Sq^k(m)` for `k ∈ {1, 2}` by the Cartan formula; terms sorted.
pub fn sq_action(k: u32, m: &Monomial) -> Result<Vec<Monomial>, AlgebraError> {
    if !(1..=2).contains(&k) {
        return Err(AlgebraError::InvalidArgument(format!("Sq^{k} is not among the generators Sq^1, Sq^2")));
    }
    Ok(total_square(k, m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subalgebra {
    B,
    E,
}

impl std::str::FromStr for Subalgebra {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "B" | "b" => Ok(Subalgebra::B),
            "E" | "e" => Ok(Subalgebra::E),
            _ => Err(AlgebraError::InvalidArgument(format!("unknown subalgebra {s:?}"))),
        }
    }
}

/// Reduced mod-2 cohomology of a space with its `Sq¹`, `Sq²` action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SteenrodModule {
    space: Space,
}

impl SteenrodModule {
    pub fn new(space: Space) -> Self {
        SteenrodModule { space }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Monomial basis of `H^n`, in increasing lexicographic order.
    pub fn basis(&self, n: i64) -> Vec<Monomial> {
        if n < self.space.arity() as i64 {
            return Vec::new();
        }
        let n = n as u32;
        match self.space {
            Space::Rp => vec![Monomial::x(n)],
            Space::Smash => (1..n).map(|a| Monomial::xy(a, n - a)).collect(),
        }
    }

    pub fn dim(&self, n: i64) -> usize {
        self.basis(n).len()
    }

    /// `Sq^k : H^n → H^{n+k}` for any `k ≥ 0`.
    pub fn square(&self, k: u32, n: i64) -> F2Matrix {
        let src = self.basis(n);
        let tgt = self.basis(n + k as i64);
        let mut m = F2Matrix::zeros(src.len(), tgt.len());
        for (i, mono) in src.iter().enumerate() {
            for term in total_square(k, mono) {
                let j = tgt.binary_search(&term).expect("Cartan terms stay in the basis");
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn sq1(&self, n: i64) -> F2Matrix {
        self.square(1, n)
    }

    pub fn sq2(&self, n: i64) -> F2Matrix {
        self.square(2, n)
    }

    /// `Q₁ = Sq¹Sq² + Sq²Sq¹ : H^n → H^{n+3}`.
    pub fn q1(&self, n: i64) -> F2Matrix {
        // operator composition Sq¹Sq² applies Sq² first
        self.sq2(n).mul(&self.sq1(n + 2)).add(&self.sq1(n).mul(&self.sq2(n + 1)))
    }

    /// Span of the positive-degree action landing in `H^i`.
    fn action_image(&self, alg: Subalgebra, i: i64) -> F2Matrix {
        let first = self.sq1(i - 1);
        let second = match alg {
            Subalgebra::B => self.sq2(i - 2),
            Subalgebra::E => self.q1(i - 3),
        };
        let cols = self.dim(i);
        // empty sources give 0-row matrices of the right width
        let first = if first.cols() == cols { first } else { F2Matrix::zeros(0, cols) };
        let second = if second.cols() == cols { second } else { F2Matrix::zeros(0, cols) };
        first.vstack(&second)
    }

    /// Basis (as rows) of `Hom_alg(H^i, Z/2)`: functionals vanishing on the action image.
    pub fn hom_basis(&self, alg: Subalgebra, i: i64) -> F2Matrix {
        self.action_image(alg, i).null_space()
    }

    pub fn hom_dim(&self, alg: Subalgebra, i: i64) -> usize {
        self.dim(i) - self.action_image(alg, i).rank()
    }
}

pub fn hom_dim(alg: Subalgebra, space: Space, i: i64) -> usize {
    SteenrodModule::new(space).hom_dim(alg, i)
}

/// `dim Hom_B(H^{2i}(smash))`: `(i-1)/2` for odd `i`, `1 + i/2` for even `i`.
pub fn hom_b_closed_form(i: i64) -> usize {
    if i % 2 == 1 {
        ((i - 1) / 2) as usize
    } else {
        (1 + i / 2) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomSequenceRecord {
    /// Cohomological degree (even).
    pub degree: i64,
    pub hom_b: usize,
    pub hom_e: usize,
    pub hom_b_lower: usize,
    pub phi_injective: bool,
    pub lambda_well_defined: bool,
    pub image_phi_is_kernel_lambda: bool,
    pub lambda_surjective: bool,
    pub closed_form_b: bool,
    pub closed_form_e: bool,
}

impl HomSequenceRecord {
    pub fn exact(&self) -> bool {
        self.phi_injective && self.lambda_well_defined && self.image_phi_is_kernel_lambda && self.lambda_surjective
    }

    pub fn passed(&self) -> bool {
        self.exact() && self.closed_form_b && self.closed_form_e
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomSequenceReport {
    pub i_max: i64,
    pub records: Vec<HomSequenceRecord>,
}

impl HomSequenceReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(HomSequenceRecord::passed)
    }

    pub fn failures(&self) -> Vec<&HomSequenceRecord> {
        self.records.iter().filter(|r| !r.passed()).collect()
    }
}

/// Checks `0 → Hom_B(H^i) → Hom_E(H^i) → Hom_B(H^{i-2}) → 0` on the smash for
/// every even `i ≤ i_max`, plus the closed dimension formulas where they apply.
pub fn verify_hom_sequence(i_max: i64) -> HomSequenceReport {
    let h = SteenrodModule::new(Space::Smash);
    let mut records = Vec::new();
    for i in (2..=i_max).step_by(2) {
        let hb = h.hom_basis(Subalgebra::B, i);
        let he = h.hom_basis(Subalgebra::E, i);
        let hb_lower = h.hom_basis(Subalgebra::B, i - 2);
        // φ̃ is the inclusion; injective iff the B-functionals are independent and lie in Hom_E
        let e_image = h.action_image(Subalgebra::E, i);
        let inside = e_image.rows() == 0 || e_image.mul(&hb.transpose()).is_zero();
        let phi_injective = hb.rank() == hb.rows() && inside;
        // λ̃(g) = g ∘ Sq² as a functional on H^{i-2}: coordinates Sq²·g
        let sq2 = h.sq2(i - 2);
        let lambda = if sq2.rows() == 0 { F2Matrix::zeros(he.rows(), 0) } else { he.mul(&sq2.transpose()) };
        let lower_image = h.action_image(Subalgebra::B, i - 2);
        let lambda_well_defined = lambda.cols() == 0 || lower_image.rows() == 0 || lower_image.mul(&lambda.transpose()).is_zero();
        let lambda_rank = lambda.rank();
        let lambda_on_b = if sq2.rows() == 0 { F2Matrix::zeros(hb.rows(), 0) } else { hb.mul(&sq2.transpose()) };
        let image_phi_is_kernel_lambda = lambda_on_b.is_zero() && hb.rows() == he.rows() - lambda_rank;
        let lambda_surjective = lambda_rank == hb_lower.rows();
        let half = i / 2;
        let applies = half >= 2;
        records.push(HomSequenceRecord {
            degree: i,
            hom_b: hb.rows(),
            hom_e: he.rows(),
            hom_b_lower: hb_lower.rows(),
            phi_injective,
            lambda_well_defined,
            image_phi_is_kernel_lambda,
            lambda_surjective,
            closed_form_b: !applies || hb.rows() == hom_b_closed_form(half),
            closed_form_e: !applies || he.rows() == half as usize,
        });
    }
    HomSequenceReport { i_max, records }
}

/// `#{(i, j) : i, j >= 1, 2i + 4j - 2 = 2n}` by enumeration.
pub fn x_count(n: u64) -> u64 {
    let mut count = 0;
    for j in 1.. {
        // 2i = 2n + 2 - 4j
        if 4 * j > 2 * n {
            break;
        }
        if 2 * n + 2 - 4 * j >= 2 {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn terms(v: &[(u32, u32)]) -> Vec<Monomial> {
        let mut t: Vec<_> = v.iter().map(|&(a, b)| Monomial::xy(a, b)).collect();
        t.sort();
        t
    }

    #[test]
    fn cartan_examples() {
        assert_eq!(sq_action(1, &Monomial::xy(1, 1)).unwrap(), terms(&[(2, 1), (1, 2)]));
        assert_eq!(sq_action(2, &Monomial::xy(2, 2)).unwrap(), terms(&[(4, 2), (2, 4)]));
        assert_eq!(sq_action(2, &Monomial::x(3)).unwrap(), vec![Monomial::x(5)]);
        assert!(sq_action(3, &Monomial::x(3)).is_err());
        assert!(Monomial::new(vec![0, 2]).is_err());
    }

    #[test]
    fn hom_dims_from_examples() {
        assert_eq!(hom_dim(Subalgebra::B, Space::Smash, 4), 2);
        assert_eq!(hom_dim(Subalgebra::B, Space::Smash, 6), 1);
        assert_eq!(hom_dim(Subalgebra::E, Space::Smash, 8), 4);
        assert_eq!(hom_dim(Subalgebra::B, Space::Smash, 3), 1);
        // RP: Hom_B(H^i) is the bottom class and the B-indecomposables
        assert_eq!(hom_dim(Subalgebra::B, Space::Rp, 1), 1);
        assert_eq!(hom_dim(Subalgebra::B, Space::Rp, 2), 0);
    }

    #[test]
    fn hom_sequence_small_degrees() {
        let rep = verify_hom_sequence(8);
        let r8 = rep.records.iter().find(|r| r.degree == 8).unwrap();
        assert_eq!((r8.hom_b, r8.hom_e, r8.hom_b_lower), (3, 4, 1));
        assert!(r8.passed());
        let r2 = &rep.records[0];
        assert_eq!((r2.hom_b, r2.hom_e, r2.hom_b_lower), (1, 1, 0));
        assert!(r2.passed());
        assert!(verify_hom_sequence(0).passed());
    }

    #[test]
    fn degree_four_is_not_exact() {
        // Hom_B(H^4) = Hom_E(H^4) = 2 and Hom_B(H^2) = 1, but g ∘ Sq² vanishes on xy
        let rep = verify_hom_sequence(4);
        let r4 = &rep.records[1];
        assert_eq!((r4.hom_b, r4.hom_e, r4.hom_b_lower), (2, 2, 1));
        assert!(r4.phi_injective && r4.image_phi_is_kernel_lambda);
        assert!(!r4.lambda_surjective);
    }

    #[test]
    fn x_counts() {
        assert_eq!(x_count(2), 1);
        assert_eq!(x_count(3), 1);
        assert_eq!(x_count(1), 0);
        assert_eq!(x_count(10), 5);
        assert_eq!(x_count(0), 0);
    }

    #[test]
    fn null_space_is_annihilated() {
        let m = F2Matrix::from_rows(4, &[vec![true, true, false, false], vec![false, true, true, false]]);
        let k = m.null_space();
        assert_eq!(k.rows(), 2);
        assert!(m.mul(&k.transpose()).is_zero());
    }

    proptest! {
        #[test]
        fn lucas_matches_pascal(n in 0u32..64, k in 0u32..64) {
            let mut row = vec![1u64];
            for _ in 0..n {
                let mut next = vec![1u64; row.len() + 1];
                for i in 1..row.len() {
                    next[i] = (row[i - 1] + row[i]) % 2;
                }
                row = next;
            }
            let pascal = row.get(k as usize).copied().unwrap_or(0) % 2 == 1;
            prop_assert_eq!(binomial_is_odd(n, k), pascal);
        }

        #[test]
        fn relations_hold_as_matrices(n in 0i64..=60, space in prop::sample::select(vec![Space::Rp, Space::Smash])) {
            let h = SteenrodModule::new(space);
            prop_assert!(h.sq1(n).mul(&h.sq1(n + 1)).is_zero());
            // Sq²Sq² = Sq¹Sq²Sq¹ (operators act right to left)
            let lhs = h.sq2(n).mul(&h.sq2(n + 2));
            let rhs = h.sq1(n).mul(&h.sq2(n + 1)).mul(&h.sq1(n + 3));
            prop_assert_eq!(lhs, rhs);
            prop_assert!(h.q1(n).mul(&h.q1(n + 3)).is_zero());
            prop_assert_eq!(h.sq1(n).mul(&h.q1(n + 1)), h.q1(n).mul(&h.sq1(n + 3)));
        }

        #[test]
        fn dimensions_add_up(half in 1i64..=30) {
            let i = 2 * half;
            let (b, e, lower) = (
                hom_dim(Subalgebra::B, Space::Smash, i),
                hom_dim(Subalgebra::E, Space::Smash, i),
                hom_dim(Subalgebra::B, Space::Smash, i - 2),
            );
            // degree 4 is the one place the sequence is not exact
            if i == 4 {
                prop_assert_eq!((b, e, lower), (2, 2, 1));
            } else {
                prop_assert_eq!(e, b + lower);
            }
        }

        #[test]
        fn x_count_formula(n in 0u64..=200) {
            let brute = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).filter(|&(i, j)| 2 * i - 1 + 4 * j - 1 == 2 * n).count() as u64;
            prop_assert_eq!(x_count(n), brute);
            prop_assert_eq!(x_count(n), n / 2);
        }
    }
}
