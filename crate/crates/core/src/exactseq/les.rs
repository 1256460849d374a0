use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::ExactSeqError;
use crate::group::FgAbelianGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Node {
    pub label: String,
    pub group: FgAbelianGroup,
    pub known_zero: bool,
}

/// `A_0 → A_1 → ... → A_{k}`, asserted exact. `maps[k]` labels `A_k → A_{k+1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LongExactSequence {
    nodes: Vec<Node>,
    maps: Vec<Option<String>>,
}

impl LongExactSequence {
    pub fn new() -> Self {
        Self::default()
    }

    fn link(&mut self, map: Option<&str>) {
        if !self.nodes.is_empty() {
            self.maps.push(map.map(str::to_string));
        }
    }

    /// Appends a node reached by an unlabeled map.
    pub fn push(&mut self, label: impl Into<String>, group: FgAbelianGroup) -> &mut Self {
        self.push_via(None, label, group)
    }

    pub fn push_via(&mut self, map: Option<&str>, label: impl Into<String>, group: FgAbelianGroup) -> &mut Self {
        self.link(map);
        self.nodes.push(Node { label: label.into(), group, known_zero: false });
        self
    }

    /// Appends a node asserted to be zero.
    pub fn push_zero(&mut self, label: impl Into<String>) -> &mut Self {
        self.link(None);
        self.nodes.push(Node { label: label.into(), group: FgAbelianGroup::trivial(), known_zero: true });
        self
    }

    /// Marks node `k` as a designated zero; fails if its group is not trivial.
    pub fn designate_zero(&mut self, k: usize) -> Result<(), ExactSeqError> {
        let node = &mut self.nodes[k];
        if !node.group.is_trivial() {
            return Err(ExactSeqError::FalseZero { label: node.label.clone() });
        }
        node.known_zero = true;
        Ok(())
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn map_label(&self, k: usize) -> Option<&str> {
        self.maps.get(k).and_then(|m| m.as_deref())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Replaces the group at every node carrying `label`. Returns how many matched.
    pub fn substitute(&mut self, label: &str, group: &FgAbelianGroup) -> usize {
        let mut hits = 0;
        for node in self.nodes.iter_mut().filter(|n| n.label == label) {
            node.group = group.clone();
            node.known_zero = false;
            hits += 1;
        }
        hits
    }

    fn is_zero_at(&self, k: usize) -> bool {
        self.nodes[k].known_zero || self.nodes[k].group.is_trivial()
    }

    fn check_designations(&self) -> Result<(), ExactSeqError> {
        match self.nodes.iter().find(|n| n.known_zero && !n.group.is_trivial()) {
            Some(n) => Err(ExactSeqError::FalseZero { label: n.label.clone() }),
            None => Ok(()),
        }
    }

    fn slice(&self, start: usize, end: usize) -> LongExactSequence {
        LongExactSequence { nodes: self.nodes[start..=end].to_vec(), maps: self.maps[start..end].to_vec() }
    }

    /// Maximal pieces running from one zero node to the next (both inclusive).
    pub fn closed_segments(&self) -> Vec<LongExactSequence> {
        let zeros: Vec<usize> = (0..self.nodes.len()).filter(|&k| self.is_zero_at(k)).collect();
        zeros.windows(2).filter(|w| w[1] > w[0] + 1).map(|w| self.slice(w[0], w[1])).collect()
    }

    /// The part before the first zero, closed on the right (open on the left).
    pub fn leading_segment(&self) -> Option<LongExactSequence> {
        let first = (0..self.nodes.len()).find(|&k| self.is_zero_at(k))?;
        (first > 0).then(|| self.slice(0, first))
    }

    fn orders(&self) -> Result<Vec<BigInt>, ExactSeqError> {
        self.nodes.iter().map(|n| n.group.order().ok_or_else(|| ExactSeqError::InfiniteGroup { label: n.label.clone() })).collect()
    }
}

impl fmt::Display for LongExactSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, n) in self.nodes.iter().enumerate() {
            if k > 0 {
                match self.map_label(k - 1) {
                    Some(m) => write!(f, " -{m}-> ")?,
                    None => write!(f, " -> ")?,
                }
            }
            write!(f, "{}={}", n.label, n.group)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentVerdict {
    pub first: String,
    pub last: String,
    /// `∏ |A_k|^{(-1)^k}` as numerator over denominator.
    pub numerator: BigInt,
    pub denominator: BigInt,
    pub passed: bool,
}

/// Alternating order product over every maximal zero-bounded segment.
pub fn alternating_order_check(seq: &LongExactSequence) -> Result<Vec<SegmentVerdict>, ExactSeqError> {
    seq.check_designations()?;
    if seq.is_empty() || !seq.is_zero_at(0) || !seq.is_zero_at(seq.len() - 1) {
        return Err(ExactSeqError::OpenEnds);
    }
    let mut out = Vec::new();
    for seg in seq.closed_segments() {
        let orders = seg.orders()?;
        let (mut num, mut den) = (BigInt::one(), BigInt::one());
        for (k, o) in orders.iter().enumerate() {
            if k % 2 == 0 {
                num *= o;
            } else {
                den *= o;
            }
        }
        let passed = num == den;
        out.push(SegmentVerdict {
            first: seg.nodes[0].label.clone(),
            last: seg.nodes[seg.len() - 1].label.clone(),
            numerator: num,
            denominator: den,
            passed,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Feasibility {
    /// `orders[k] = |im(A_k → A_{k+1})|`.
    Feasible {
        orders: Vec<BigInt>,
    },
    Infeasible {
        position: usize,
        label: String,
        reason: String,
    },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

/// Propagates `|im f_k| = |A_k| / |im f_{k-1}|` from a zero end.
///
/// A sequence starting at zero is solved left to right; one that only ends at
/// zero is solved right to left. Either way the answer is unique.
pub fn image_order_solve(seq: &LongExactSequence) -> Result<Feasibility, ExactSeqError> {
    seq.check_designations()?;
    if seq.is_empty() {
        return Ok(Feasibility::Feasible { orders: Vec::new() });
    }
    let orders = seq.orders()?;
    let n = orders.len();
    let mut im = vec![BigInt::zero(); n - 1];
    let label = |k: usize| seq.nodes[k].label.clone();
    if seq.is_zero_at(0) {
        let mut incoming = BigInt::one();
        for k in 0..n {
            let (q, r) = orders[k].div_rem(&incoming);
            if !r.is_zero() {
                return Ok(Feasibility::Infeasible {
                    position: k,
                    label: label(k),
                    reason: format!("kernel of order {incoming} does not divide |{}| = {}", label(k), orders[k]),
                });
            }
            if k + 1 < n {
                if !orders[k + 1].is_multiple_of(&q) {
                    return Ok(Feasibility::Infeasible {
                        position: k,
                        label: label(k),
                        reason: format!("image of order {q} does not divide |{}| = {}", label(k + 1), orders[k + 1]),
                    });
                }
                im[k] = q.clone();
            }
            incoming = q;
        }
    } else if seq.is_zero_at(n - 1) {
        // |im f_{k-1}| = |A_k| / |im f_k|
        let mut outgoing = BigInt::one();
        for k in (0..n).rev() {
            let (q, r) = orders[k].div_rem(&outgoing);
            if !r.is_zero() {
                return Ok(Feasibility::Infeasible {
                    position: k,
                    label: label(k),
                    reason: format!("image of order {outgoing} does not divide |{}| = {}", label(k), orders[k]),
                });
            }
            if k > 0 {
                if !orders[k - 1].is_multiple_of(&q) {
                    return Ok(Feasibility::Infeasible {
                        position: k,
                        label: label(k),
                        reason: format!(
                            "|{}| / |im| = {} forces an image of order {q} from |{}| = {}",
                            label(k),
                            q,
                            label(k - 1),
                            orders[k - 1]
                        ),
                    });
                }
                im[k - 1] = q.clone();
            }
            outgoing = q;
        }
    } else {
        return Err(ExactSeqError::OpenEnds);
    }
    Ok(Feasibility::Feasible { orders: im })
}

/// Both checks on every closed segment, plus propagation on an open leading piece.
pub fn sequence_feasible(seq: &LongExactSequence) -> Result<bool, ExactSeqError> {
    let mut ok = true;
    for seg in seq.closed_segments() {
        ok &= alternating_order_check(&seg)?.iter().all(|v| v.passed);
        ok &= image_order_solve(&seg)?.is_feasible();
    }
    if let Some(lead) = seq.leading_segment() {
        ok &= image_order_solve(&lead)?.is_feasible();
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: u64) -> FgAbelianGroup {
        FgAbelianGroup::cyclic(n)
    }

    fn seq(groups: &[FgAbelianGroup]) -> LongExactSequence {
        let mut s = LongExactSequence::new();
        s.push_zero("0");
        for (k, g) in groups.iter().enumerate() {
            s.push(format!("A{k}"), g.clone());
        }
        s.push_zero("0'");
        s
    }

    #[test]
    fn alternating_products() {
        let v = alternating_order_check(&seq(&[z(2), z(4), z(2)])).unwrap();
        assert!(v.iter().all(|x| x.passed));
        let v = alternating_order_check(&seq(&[z(2), z(2), z(2)])).unwrap();
        assert!(!v[0].passed);
        let mut open = LongExactSequence::new();
        open.push("A", z(2)).push_zero("0");
        assert_eq!(alternating_order_check(&open), Err(ExactSeqError::OpenEnds));
        let mut inf = seq(&[FgAbelianGroup::free(1), FgAbelianGroup::free(1)]);
        assert!(matches!(alternating_order_check(&inf), Err(ExactSeqError::InfiniteGroup { .. })));
        inf.nodes[0].group = z(2);
        assert!(matches!(image_order_solve(&inf), Err(ExactSeqError::FalseZero { .. })));
    }

    #[test]
    fn image_orders() {
        let all_zero = seq(&vec![FgAbelianGroup::trivial(); 3]);
        assert_eq!(image_order_solve(&all_zero).unwrap(), Feasibility::Feasible { orders: vec![BigInt::one(); 4] });
        let ok = seq(&[z(2), z(4), z(2)]);
        let Feasibility::Feasible { orders } = image_order_solve(&ok).unwrap() else { panic!() };
        assert_eq!(orders, [1, 2, 2, 1].map(BigInt::from));
        assert!(!image_order_solve(&seq(&[z(2), z(2), z(2)])).unwrap().is_feasible());
    }

    #[test]
    fn right_anchored_segment() {
        // bo_2 -> bo_3 -> bu_3 -> 0 with |bo_2| = 2, |bu_3| = 2
        let mut s = LongExactSequence::new();
        s.push("bo_2", z(2)).push_via(Some("eta"), "bo_3", z(8)).push_via(Some("c"), "bu_3", z(2)).push_zero("bo_1");
        assert!(!image_order_solve(&s).unwrap().is_feasible());
        s.substitute("bo_3", &z(4));
        let Feasibility::Feasible { orders } = image_order_solve(&s).unwrap() else { panic!() };
        assert_eq!(orders[..2], [2, 2].map(BigInt::from));
        assert!(s.to_string().contains("-eta->"));
    }

    #[test]
    fn designations_are_checked() {
        let mut s = seq(&[z(2)]);
        assert!(s.designate_zero(1).is_err());
        assert_eq!(s.closed_segments().len(), 1);
        assert!(s.leading_segment().is_none());
    }

    proptest! {
        // |A_k| = i_{k-1}·i_k with i_{-1} = i_last = 1 is realized by 0 → Z/i → Z/i ⊕ Z/j → Z/j → ...
        #[test]
        fn chained_short_exact_sequences(images in prop::collection::vec(1u64..12, 1..8)) {
            let mut s = LongExactSequence::new();
            s.push_zero("0");
            let mut prev = 1u64;
            for (k, &i) in images.iter().chain(std::iter::once(&1)).enumerate() {
                s.push(format!("A{k}"), FgAbelianGroup::cyclic(prev).direct_sum(&FgAbelianGroup::cyclic(i)));
                prev = i;
            }
            s.push_zero("0'");
            prop_assert!(alternating_order_check(&s).unwrap().iter().all(|v| v.passed));
            prop_assert!(sequence_feasible(&s).unwrap());
            // when no interior node vanishes the propagation recovers the chosen image orders
            if images.iter().all(|&i| i > 1) {
                let Feasibility::Feasible { orders } = image_order_solve(&s).unwrap() else { panic!() };
                let mut want = vec![BigInt::one()];
                want.extend(images.iter().map(|&i| BigInt::from(i)));
                want.push(BigInt::one());
                prop_assert_eq!(orders, want);
            }
        }

        #[test]
        fn inflating_one_node_is_caught(images in prop::collection::vec(2u64..12, 2..8), at in 0usize..8, factor in 2u64..5) {
            let mut s = LongExactSequence::new();
            s.push_zero("0");
            let mut prev = 1u64;
            for (k, &i) in images.iter().chain(std::iter::once(&1)).enumerate() {
                let mut g = FgAbelianGroup::cyclic(prev).direct_sum(&FgAbelianGroup::cyclic(i));
                if k == at % (images.len() + 1) {
                    g = g.direct_sum(&FgAbelianGroup::cyclic(factor));
                }
                s.push(format!("A{k}"), g);
                prev = i;
            }
            s.push_zero("0'");
            prop_assert!(!sequence_feasible(&s).unwrap());
        }
    }
}
