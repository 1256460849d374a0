//! The numbered acceptance checks, runnable from the library and the CLI.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::AuditError;
use crate::exactseq::audit::{bo1_les_consistency, bott_audit, RowStatus};
use crate::exactseq::fixture::FixtureSet;
use crate::exactseq::tables::{bo_smash_group, Tables, Theory};
use crate::group::FgAbelianGroup;
use crate::homological::{tor1_degree, tor_closed_form, verify_smash_decomposition, KunnethEngine, YResolution};
use crate::kmodules::{ku_lemma_check, lu_bzp_presentation, lu_closed_form, realize_degree};
use crate::steenrod::{hom_b_closed_form, hom_dim, verify_hom_sequence, x_count, Space, Subalgebra};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// First few failures, or a one-line summary.
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} criterion {:>2}: {} ({})", self.id, self.name, self.detail)
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "lu closed form vs engine"),
    (2, "Tor kernel vs closed form"),
    (3, "Kunneth order equation and parity"),
    (4, "smash decomposition of bu"),
    (5, "Hom dimensions and exactness over B and E"),
    (6, "wedge multiplicity count"),
    (7, "even-degree detection"),
    (8, "bo<1> sequences for RP^inf"),
    (9, "Bott audit of the smash table"),
    (10, "truncated ku smash"),
];

struct Tally {
    failures: Vec<String>,
    checks: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { failures: Vec::new(), checks: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, id: u8) -> CriterionResult {
        let name = CRITERIA[id as usize - 1].1;
        let passed = self.failures.is_empty();
        let detail = if passed {
            format!("{} checks", self.checks)
        } else {
            let shown: Vec<_> = self.failures.iter().take(4).cloned().collect();
            let more = self.failures.len().saturating_sub(4);
            let tail = if more > 0 { format!("; {more} more") } else { String::new() };
            format!("{} of {} checks failed: {}{tail}", self.failures.len(), self.checks, shown.join("; "))
        };
        CriterionResult { id, name, passed, detail }
    }
}

fn g(s: &str) -> FgAbelianGroup {
    s.parse().expect("literal group")
}

pub fn criterion_1() -> Result<CriterionResult, AuditError> {
    let mut t = Tally::new();
    for p in [2u64, 3, 5] {
        let lu = lu_bzp_presentation(p, 60 + 2 * p as i64)?;
        for n in 0..=60 {
            let engine = realize_degree(&lu, n)?;
            let closed = lu_closed_form(p, n);
            t.check(engine == closed, || format!("p={p} n={n}: engine {engine}, closed form {closed}"));
        }
    }
    let lu2 = lu_bzp_presentation(2, 12)?;
    let lu3 = lu_bzp_presentation(3, 16)?;
    for (got, want, what) in [
        (realize_degree(&lu2, 3)?, g("Z/4"), "bu_3(BZ/2)"),
        (realize_degree(&lu2, 7)?, g("Z/16"), "bu_7(BZ/2)"),
        (realize_degree(&lu3, 9)?, g("Z/27"), "lu_9(BZ/3)"),
    ] {
        t.check(got == want, || format!("{what} = {got}, expected {want}"));
    }
    Ok(t.finish(1))
}

pub fn criterion_2() -> Result<CriterionResult, AuditError> {
    let mut t = Tally::new();
    for p in [2u64, 3] {
        let lu = lu_bzp_presentation(p, 40 + 2 * p as i64)?;
        for i in 1..p {
            let res = YResolution::new(p, i, 40)?;
            for n in 0..=40 {
                let kernel = tor1_degree(&res, &lu, n)?;
                let closed = tor_closed_form(p, i, n);
                t.check(kernel == closed, || format!("p={p} i={i} n={n}: kernel {kernel}, closed form {closed}"));
            }
        }
    }
    Ok(t.finish(2))
}

pub fn criterion_3() -> Result<CriterionResult, AuditError> {
    let mut t = Tally::new();
    for p in [2u64, 3] {
        let engine = KunnethEngine::new(p, 40)?;
        for n in 0..=40 {
            let (tensor, tor) = (engine.tensor_part(n)?, engine.tor_part(n)?);
            let total = engine.smash(n)?;
            let lhs = total.order();
            let rhs = tensor.order().zip(tor.order()).map(|(a, b)| a * b);
            t.check(lhs.is_some() && lhs == rhs, || format!("p={p} n={n}: |{total}| != |{tensor}|·|{tor}|"));
            t.check(n % 2 == 0 || tensor.is_trivial(), || format!("p={p} n={n}: tensor part {tensor} in odd degree"));
            t.check(n % 2 == 1 || tor.is_trivial(), || format!("p={p} n={n}: Tor part {tor} in even degree"));
        }
    }
    Ok(t.finish(3))
}

pub fn criterion_4() -> Result<CriterionResult, AuditError> {
    let mut t = Tally::new();
    for p in [2u64, 3] {
        let rep = verify_smash_decomposition(p, 40)?;
        for r in &rep.records {
            t.check(r.verdict, || format!("p={p} n={}: assembled {:?}, expected {}", r.degree, r.assembled, r.cross_check));
        }
    }
    let seven = KunnethEngine::new(2, 7)?.smash(7)?;
    t.check(seven == g("Z/8"), || format!("bu_7 of the smash at p=2 is {seven}, expected Z/8"));
    Ok(t.finish(4))
}

pub fn criterion_5() -> Result<CriterionResult, AuditError> {
    let mut t = Tally::new();
    for i in 2..=30i64 {
        let b = hom_dim(Subalgebra::B, Space::Smash, 2 * i);
        let e = hom_dim(Subalgebra::E, Space::Smash, 2 * i);
        let want_b = if i % 2 == 1 { (i - 1) / 2 } else { 1 + i / 2 } as usize;
        t.check(b == want_b && b == hom_b_closed_form(i), || format!("Hom_B(H^{}) = {b}, expected {want_b}", 2 * i));
        t.check(e == i as usize, || format!("Hom_E(H^{}) = {e}, expected {i}", 2 * i));
    }
    let rep = verify_hom_sequence(60);
    for r in &rep.records {
        t.check(r.exact(), || {
            format!(
                "degree {}: {} -> {} -> {} not exact (injective {}, image = kernel {}, onto {})",
                r.degree, r.hom_b, r.hom_e, r.hom_b_lower, r.phi_injective, r.image_phi_is_kernel_lambda, r.lambda_surjective
            )
        });
    }
    Ok(t.finish(5))
}

pub fn criterion_6() -> Result<CriterionResult, AuditError> {
    let mut t = Tally::new();
    for n in 0..=100u64 {
        let pairs = (1..=n + 1).flat_map(|i| (1..=n + 1).map(move |j| (i, j))).filter(|&(i, j)| 2 * i + 4 * j - 2 == 2 * n).count() as u64;
        let formula = if n % 2 == 0 { n / 2 } else { (n - 1) / 2 };
        let x = x_count(n);
        t.check(x == pairs && x == formula, || format!("n={n}: x_count {x}, pairs {pairs}, formula {formula}"));
    }
    Ok(t.finish(6))
}

pub fn criterion_7() -> Result<CriterionResult, AuditError> {
    let mut t = Tally::new();
    let engine = KunnethEngine::new(2, 60)?;
    for i in 2..=30i64 {
        let group = engine.smash(2 * i)?;
        let dim = group.fp_dimension(2);
        let e = hom_dim(Subalgebra::E, Space::Smash, 2 * i);
        t.check(dim == Some(e), || format!("degree {}: dim {group} = {dim:?}, Hom_E = {e}", 2 * i));
    }
    Ok(t.finish(7))
}

pub fn criterion_8() -> Result<CriterionResult, AuditError> {
    criterion_8_with(&FixtureSet::embedded())
}

pub fn criterion_8_with(fixtures: &FixtureSet) -> Result<CriterionResult, AuditError> {
    let mut t = Tally::new();
    let tables = Tables::rp(fixtures, 58)?;
    let v = bo1_les_consistency(&tables, 50)?;
    for f in v.hz_failures.iter().chain(&v.bu_failures) {
        t.check(false, || f.clone());
    }
    t.check(v.passed(), || "fixture sequences infeasible".into());
    let bad = tables.with(Theory::Bo1, 3, g("Z/8"));
    let pert = bo1_les_consistency(&bad, 50)?;
    t.check(!pert.passed(), || "bo<1>_3 = Z/8 was not detected".into());
    Ok(t.finish(8))
}

pub fn criterion_9() -> Result<CriterionResult, AuditError> {
    let mut t = Tally::new();
    let fixtures = FixtureSet::embedded();
    let printed = fixtures.table("bo_smash")?;
    for m in 0..=50u64 {
        let value = printed.eval(m)?;
        let computed = bo_smash_group(m);
        match m % 8 {
            3 | 7 => t.check(value != computed, || format!("degree {m}: printed {value} unexpectedly agrees")),
            _ => t.check(value == computed, || format!("degree {m}: printed {value}, computed {computed}")),
        }
    }
    let rep = bott_audit(Space::Smash, 50)?;
    t.check(rep.baseline_feasible(), || format!("corrected values infeasible: {:?}", rep.baseline_failures));
    for r in &rep.rows {
        let odd_row = r.degree % 8 == 3 || r.degree % 8 == 7;
        let want = if odd_row { RowStatus::Infeasible } else { RowStatus::Confirmed };
        t.check(r.status == want, || format!("degree {}: {:?}", r.degree, r.status));
        if odd_row {
            let n = r.degree / 8;
            let e = if r.degree % 8 == 3 { 4 * n + 2 } else { 4 * n + 3 };
            let corrected = FgAbelianGroup::cyclic(BigInt::from(1) << e);
            t.check(r.computed == corrected, || format!("degree {}: corrected {} != Z/2^{e}", r.degree, r.computed));
        }
    }
    // the forced instance: |bo_3| <= |bo_2|·|bu_3|
    let smash = Tables::smash(&Tables::rp(&fixtures, 8)?, 8)?;
    let bound = smash.get(Theory::Bo, 2).order().zip(smash.get(Theory::Bu, 3).order()).map(|(a, b)| a * b);
    t.check(bound == Some(BigInt::from(4)), || format!("degree 3 bound is {bound:?}, expected 4"));
    Ok(t.finish(9))
}

pub fn criterion_10() -> Result<CriterionResult, AuditError> {
    let mut t = Tally::new();
    for r in 1..=10 {
        for v in 1..=10 {
            let rep = ku_lemma_check(r, v)?;
            t.check(rep.passed, || format!("r={r} v={v}: reduced {}, smash {}", rep.reduced_group, rep.smash_group));
        }
    }
    Ok(t.finish(10))
}

pub fn criterion(id: u8) -> Result<CriterionResult, AuditError> {
    match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        _ => Err(crate::error::AlgebraError::InvalidArgument(format!("no criterion {id}")).into()),
    }
}

pub fn run_all() -> Result<Vec<CriterionResult>, AuditError> {
    (1..=10).map(criterion).collect()
}
