//! Feasibility audits of the tables against the Bott sequence and the two
//! sequences defining bo⟨1⟩.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::fixture::FixtureSet;
use super::les::{alternating_order_check, image_order_solve, Feasibility, LongExactSequence};
use super::tables::{Tables, Theory};
use crate::error::{AlgebraError, AuditError, ExactSeqError};
use crate::group::FgAbelianGroup;
use crate::steenrod::Space;

/// Degrees above the reporting bound that are still put into a sequence, so
/// that every reported degree sits inside a zero-bounded segment.
pub const SEQUENCE_SLACK: u64 = 8;

fn push_group(seq: &mut LongExactSequence, map: &str, t: &Tables, theory: Theory, m: i64) {
    let label = theory.label(m);
    if m < 0 {
        seq.push_zero(label);
    } else {
        seq.push_via((!map.is_empty()).then_some(map), label, t.get(theory, m));
    }
}

/// `bo_{k-1} -η-> bo_k -c-> bu_k -∂-> bo_{k-2} -η-> ...` from `k = top` down to 0.
pub fn bott_sequence(t: &Tables, top: u64) -> LongExactSequence {
    let mut seq = LongExactSequence::new();
    for k in (0..=top as i64).rev() {
        push_group(&mut seq, "∂", t, Theory::Bo, k - 1);
        push_group(&mut seq, "η", t, Theory::Bo, k);
        push_group(&mut seq, "c", t, Theory::Bu, k);
    }
    seq.push_zero(Theory::Bo.label(-2));
    seq
}

/// `bo⟨1⟩_i → bo_i → H_i → bo⟨1⟩_{i-1} → ...`
pub fn bo1_sequence_hz(t: &Tables, top: u64) -> LongExactSequence {
    let mut seq = LongExactSequence::new();
    for i in (0..=top as i64).rev() {
        push_group(&mut seq, "∂", t, Theory::Bo1, i);
        push_group(&mut seq, "", t, Theory::Bo, i);
        push_group(&mut seq, "", t, Theory::Hz, i);
    }
    seq.push_zero(Theory::Bo1.label(-1));
    seq
}

/// `bo_{i-1} → bo⟨1⟩_i → bu_{i-2} → bo_{i-2} → ...`
pub fn bo1_sequence_bu(t: &Tables, top: u64) -> LongExactSequence {
    let mut seq = LongExactSequence::new();
    for i in (0..=top as i64).rev() {
        push_group(&mut seq, "∂", t, Theory::Bo, i - 1);
        push_group(&mut seq, "", t, Theory::Bo1, i);
        push_group(&mut seq, "", t, Theory::Bu, i - 2);
    }
    seq.push_zero(Theory::Bo.label(-2));
    seq
}

/// Every failed check on the sequence, as text. Empty means feasible.
pub fn segment_failures(seq: &LongExactSequence) -> Result<Vec<String>, ExactSeqError> {
    let mut out = Vec::new();
    for seg in seq.closed_segments() {
        for v in alternating_order_check(&seg)? {
            if !v.passed {
                out.push(format!("alternating order product {}/{} != 1 between {} and {}", v.numerator, v.denominator, v.first, v.last));
            }
        }
        if let Feasibility::Infeasible { label, reason, .. } = image_order_solve(&seg)? {
            out.push(format!("at {label}: {reason}"));
        }
    }
    if let Some(lead) = seq.leading_segment() {
        if let Feasibility::Infeasible { label, reason, .. } = image_order_solve(&lead)? {
            out.push(format!("at {label}: {reason}"));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    /// Printed value equals the computed one.
    Confirmed,
    /// Printed value differs and breaks exactness.
    Infeasible,
    /// Printed value differs but passes the order checks.
    DiffersFeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowFinding {
    pub degree: u64,
    pub class: String,
    pub printed: FgAbelianGroup,
    pub computed: FgAbelianGroup,
    pub status: RowStatus,
    pub citation: String,
    /// Failed checks with the printed value substituted.
    pub reasons: Vec<String>,
}

/// A printed entry that disagrees with another table for the same group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnConflict {
    pub degree: u64,
    pub class: String,
    pub printed: FgAbelianGroup,
    pub reference: FgAbelianGroup,
    pub citation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Erratum {
    pub class: String,
    pub degrees: Vec<u64>,
    pub printed: String,
    pub corrected: Vec<FgAbelianGroup>,
    pub corrected_feasible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub space: Space,
    pub n_max: u64,
    pub sequence_top: u64,
    /// Failed checks with the computed values; empty when they are consistent.
    pub baseline_failures: Vec<String>,
    pub rows: Vec<RowFinding>,
    pub column_conflicts: Vec<ColumnConflict>,
    pub errata: Vec<Erratum>,
}

impl AuditReport {
    pub fn baseline_feasible(&self) -> bool {
        self.baseline_failures.is_empty()
    }

    pub fn has_findings(&self) -> bool {
        !self.errata.is_empty() || !self.column_conflicts.is_empty()
    }

    pub fn infeasible_degrees(&self) -> Vec<u64> {
        self.rows.iter().filter(|r| r.status == RowStatus::Infeasible).map(|r| r.degree).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("audit report serializes")
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let space = match self.space {
            Space::Rp => "RP^inf",
            Space::Smash => "RP^inf ^ RP^inf",
        };
        writeln!(f, "Bott sequence audit for {space}, degrees 0..={} (sequence top {})", self.n_max, self.sequence_top)?;
        if self.baseline_feasible() {
            writeln!(f, "computed values: all segments feasible")?;
        } else {
            writeln!(f, "computed values: INFEASIBLE")?;
            for r in &self.baseline_failures {
                writeln!(f, "  {r}")?;
            }
        }
        if !self.rows.is_empty() {
            let strs: Vec<(String, String)> = self.rows.iter().map(|r| (r.printed.to_string(), r.computed.to_string())).collect();
            let w = strs.iter().flat_map(|(a, b)| [a.chars().count(), b.chars().count()]).max().unwrap_or(0).max(8);
            let pad = |s: &str| format!("{s}{}", " ".repeat(w - s.chars().count()));
            writeln!(f, "{:>6}  {:<8}  {}  {}  status", "degree", "row", pad("printed"), pad("computed"))?;
            for (r, (p, c)) in self.rows.iter().zip(&strs) {
                let status = match r.status {
                    RowStatus::Confirmed => "confirmed",
                    RowStatus::Infeasible => "infeasible",
                    RowStatus::DiffersFeasible => "differs",
                };
                writeln!(f, "{:>6}  {:<8}  {}  {}  {status}", r.degree, r.class, pad(p), pad(c))?;
            }
        }
        if !self.errata.is_empty() {
            writeln!(f, "\nerrata")?;
            for e in &self.errata {
                let corrected: Vec<String> = e.corrected.iter().map(|g| g.to_string()).collect();
                writeln!(
                    f,
                    "  row {}: printed {} is infeasible at degrees {:?}; corrected {} ({})",
                    e.class,
                    e.printed,
                    e.degrees,
                    corrected.join(", "),
                    if e.corrected_feasible { "feasible" } else { "still infeasible" }
                )?;
            }
        }
        if !self.column_conflicts.is_empty() {
            writeln!(f, "\nconflicting bo<1> column entries")?;
            for c in &self.column_conflicts {
                writeln!(f, "  degree {} (row {}): printed {}, bo<1> table {}", c.degree, c.class, c.printed, c.reference)?;
            }
        }
        Ok(())
    }
}

/// Bott-sequence audit with the built-in fixtures.
pub fn bott_audit(space: Space, n_max: u64) -> Result<AuditReport, AuditError> {
    bott_audit_with(space, n_max, &FixtureSet::embedded())
}

pub fn bott_audit_with(space: Space, n_max: u64, fixtures: &FixtureSet) -> Result<AuditReport, AuditError> {
    let top = n_max + SEQUENCE_SLACK;
    let rp = Tables::rp(fixtures, top)?;
    let base = match space {
        Space::Rp => rp.clone(),
        Space::Smash => Tables::smash(&rp, top)?,
    };
    let baseline_failures = segment_failures(&bott_sequence(&base, top))?;
    let mut report = AuditReport {
        space,
        n_max,
        sequence_top: top,
        baseline_failures,
        rows: Vec::new(),
        column_conflicts: Vec::new(),
        errata: Vec::new(),
    };
    if space == Space::Rp {
        return Ok(report);
    }

    let printed = fixtures.table("bo_smash")?;
    let column = fixtures.table("bo1_column")?;
    for m in 0..=n_max {
        let (value, row) = printed.lookup(m)?;
        let computed = base.get(Theory::Bo, m as i64);
        let (status, reasons) = if value == computed {
            (RowStatus::Confirmed, Vec::new())
        } else {
            let trial = base.with(Theory::Bo, m, value.clone());
            let reasons = segment_failures(&bott_sequence(&trial, top))?;
            let status = if reasons.is_empty() { RowStatus::DiffersFeasible } else { RowStatus::Infeasible };
            (status, reasons)
        };
        report.rows.push(RowFinding {
            degree: m,
            class: row.class_label(),
            printed: value,
            computed,
            status,
            citation: row.citation.clone(),
            reasons,
        });

        let (col, crow) = column.lookup(m)?;
        let reference = rp.get(Theory::Bo1, m as i64);
        if col != reference {
            report.column_conflicts.push(ColumnConflict {
                degree: m,
                class: crow.class_label(),
                printed: col,
                reference,
                citation: crow.citation.clone(),
            });
        }
    }

    // group infeasible rows by printed residue class
    let mut errata: Vec<Erratum> = Vec::new();
    for r in report.rows.iter().filter(|r| r.status == RowStatus::Infeasible) {
        let expr = printed.lookup(r.degree)?.1.group.source.clone();
        match errata.iter_mut().find(|e| e.class == r.class && e.printed == expr) {
            Some(e) => {
                e.degrees.push(r.degree);
                e.corrected.push(r.computed.clone());
            }
            None => errata.push(Erratum {
                class: r.class.clone(),
                degrees: vec![r.degree],
                printed: expr,
                corrected: vec![r.computed.clone()],
                corrected_feasible: report.baseline_failures.is_empty(),
            }),
        }
    }
    errata.sort_by_key(|e| e.degrees[0] % 8);
    report.errata = errata;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bo1Verdict {
    pub n_max: u64,
    /// Failures in `bo⟨1⟩ → bo → H_Z`.
    pub hz_failures: Vec<String>,
    /// Failures in `Σbo → bo⟨1⟩ → Σ²bu`.
    pub bu_failures: Vec<String>,
}

impl Bo1Verdict {
    pub fn passed(&self) -> bool {
        self.hz_failures.is_empty() && self.bu_failures.is_empty()
    }
}

/// Both defining sequences of bo⟨1⟩ for `RP^∞`, run through degree `n_max` (plus slack).
pub fn bo1_les_consistency(t: &Tables, n_max: u64) -> Result<Bo1Verdict, AuditError> {
    let top = n_max + SEQUENCE_SLACK;
    if t.top < top {
        return Err(AlgebraError::OutOfWindow { degree: top as i64, max: t.top as i64 }.into());
    }
    Ok(Bo1Verdict {
        n_max,
        hz_failures: segment_failures(&bo1_sequence_hz(t, top))?,
        bu_failures: segment_failures(&bo1_sequence_bu(t, top))?,
    })
}

/// `|A|` as a power of 2, for reports. `None` for infinite or non-2-groups.
pub fn log2_order(g: &FgAbelianGroup) -> Option<u64> {
    let o = g.order()?;
    let bits = o.bits();
    (o == BigInt::from(1) << (bits - 1)).then(|| bits - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbelianGroup {
        s.parse().unwrap()
    }

    fn rp(top: u64) -> Tables {
        Tables::rp(&FixtureSet::embedded(), top).unwrap()
    }

    #[test]
    fn rp_bott_sequence_is_feasible() {
        let r = bott_audit(Space::Rp, 24).unwrap();
        assert!(r.baseline_feasible(), "{:?}", r.baseline_failures);
        assert!(!r.has_findings());
    }

    #[test]
    fn smash_audit_flags_exactly_the_odd_rows() {
        let r = bott_audit(Space::Smash, 24).unwrap();
        assert!(r.baseline_feasible(), "{:?}", r.baseline_failures);
        assert_eq!(r.infeasible_degrees(), [3, 7, 11, 15, 19, 23]);
        let classes: Vec<_> = r.errata.iter().map(|e| e.class.as_str()).collect();
        assert_eq!(classes, ["8n+3", "8n+7"]);
        assert_eq!(r.errata[0].corrected[..2], [g("Z/4"), g("Z/64")]);
        assert_eq!(r.errata[1].corrected[..2], [g("Z/8"), g("Z/128")]);
        assert!(r.rows.iter().all(|x| x.status != RowStatus::DiffersFeasible));
        let conflicts: Vec<u64> = r.column_conflicts.iter().map(|c| c.degree).collect();
        assert_eq!(conflicts, [3, 7, 11, 15, 19, 23]);
    }

    #[test]
    fn vacuous_audit() {
        let r = bott_audit(Space::Smash, 0).unwrap();
        assert!(r.baseline_feasible() && !r.has_findings());
    }

    #[test]
    fn degree_three_bound() {
        // bo_2 -η-> bo_3 -c-> bu_3 -∂-> bo_1 = 0
        let t = Tables::smash(&rp(8), 8).unwrap();
        assert_eq!(t.get(Theory::Bu, 3), g("Z/2"));
        let mut s = LongExactSequence::new();
        s.push("bo_2", t.get(Theory::Bo, 2)).push("bo_3", g("Z/8")).push("bu_3", t.get(Theory::Bu, 3)).push_zero("bo_1");
        assert!(!image_order_solve(&s).unwrap().is_feasible());
        let mut s = LongExactSequence::new();
        s.push("bo_2", t.get(Theory::Bo, 2)).push("bo_3", g("Z/4")).push("bu_3", t.get(Theory::Bu, 3)).push_zero("bo_1");
        assert_eq!(
            image_order_solve(&s).unwrap(),
            Feasibility::Feasible { orders: vec![BigInt::from(2), BigInt::from(2), BigInt::from(1)] }
        );
    }

    #[test]
    fn bo1_sequences() {
        let t = rp(58);
        assert!(bo1_les_consistency(&t, 50).unwrap().passed());
        assert!(bo1_les_consistency(&rp(8), 0).unwrap().passed());
        let bad = t.with(Theory::Bo1, 3, g("Z/8"));
        let v = bo1_les_consistency(&bad, 50).unwrap();
        assert!(!v.passed());
        assert!(!v.bu_failures.is_empty());
    }

    #[test]
    fn printed_bottom_row_of_bo1_is_infeasible() {
        // the printed 8n row would give bo1_0 = Z/2
        let bad = rp(16).with(Theory::Bo1, 0, g("Z/2"));
        assert!(!bo1_les_consistency(&bad, 8).unwrap().hz_failures.is_empty());
    }

    #[test]
    fn too_short_tables() {
        assert!(bo1_les_consistency(&rp(10), 8).is_err());
    }

    #[test]
    fn orders_in_bits() {
        assert_eq!(log2_order(&g("Z/8 ⊕ Z/2")), Some(4));
        assert_eq!(log2_order(&g("Z/3")), None);
        assert_eq!(log2_order(&g("0")), Some(0));
    }
}
