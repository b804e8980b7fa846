use std::cmp::Ordering;

use crate::algebra::{Monomial, TermOrder};

/// How positions interact with monomials in a free-module order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PositionRule {
    /// Shifted degree, then monomial, then position (lower index is larger).
    #[default]
    TermOverPosition,
    /// Position first (lower index is larger), then monomial.
    PositionOverTerm,
}

/// Monomial order on a graded free module `⊕ S(-shifts[i])`.
///
/// With `split = Some(k)` positions `< k` form a block that dominates
/// everything in positions `>= k` (an elimination order). The lower block is
/// either ordered like the upper one or, if `schreyer` is set, by the order
/// induced from the given leading terms in the upper block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleOrder {
    pub mono: TermOrder,
    pub rule: PositionRule,
    pub shifts: Vec<i32>,
    pub split: Option<usize>,
    pub schreyer: Option<Vec<(usize, Monomial)>>,
}

impl ModuleOrder {
    pub fn top(mono: TermOrder, shifts: Vec<i32>) -> Self {
        ModuleOrder { mono, rule: PositionRule::TermOverPosition, shifts, split: None, schreyer: None }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    #[inline]
    pub fn degree(&self, pos: usize, m: &Monomial) -> i32 {
        m.degree() as i32 + self.shifts[pos]
    }

    fn plain(&self, p: usize, m: &Monomial, q: usize, n: &Monomial) -> Ordering {
        match self.rule {
            PositionRule::TermOverPosition => self
                .degree(p, m)
                .cmp(&self.degree(q, n))
                .then_with(|| self.mono.cmp(m, n))
                .then_with(|| q.cmp(&p)),
            PositionRule::PositionOverTerm => q.cmp(&p).then_with(|| self.mono.cmp(m, n)),
        }
    }

    #[inline]
    pub fn cmp(&self, p: usize, m: &Monomial, q: usize, n: &Monomial) -> Ordering {
        let Some(k) = self.split else {
            return self.plain(p, m, q, n);
        };
        match (p < k, q < k) {
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (true, true) => self.plain(p, m, q, n),
            (false, false) => match &self.schreyer {
                None => self.plain(p, m, q, n),
                Some(leads) => {
                    let (lp, lm) = &leads[p - k];
                    let (lq, ln) = &leads[q - k];
                    self.degree(p, m)
                        .cmp(&self.degree(q, n))
                        .then_with(|| self.plain(*lp, &m.mul(lm), *lq, &n.mul(ln)))
                        .then_with(|| q.cmp(&p))
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elimination_block_dominates() {
        let mut o = ModuleOrder::top(TermOrder::Grevlex, vec![0, 5, 0]);
        let one = Monomial::one(2);
        let big = Monomial::from_exponents(&[4, 4]);
        assert_eq!(o.cmp(1, &one, 0, &one), Ordering::Greater);
        o.split = Some(1);
        assert_eq!(o.cmp(0, &one, 1, &big), Ordering::Greater);
        assert_eq!(o.cmp(2, &big, 1, &one), Ordering::Greater);
    }

    #[test]
    fn schreyer_breaks_ties_by_lead() {
        let x = Monomial::var(2, 0);
        let y = Monomial::var(2, 1);
        let mut o = ModuleOrder::top(TermOrder::Grevlex, vec![0, 1, 1]);
        o.split = Some(1);
        o.schreyer = Some(vec![(0, y.clone()), (0, x.clone())]);
        // x*e1 ↦ xy, y*e2 ↦ xy: equal images, index tie-break prefers e1
        assert_eq!(o.cmp(1, &x, 2, &y), Ordering::Greater);
        // y*e1 ↦ y^2 < x^2 ↤ x*e2
        assert_eq!(o.cmp(1, &y, 2, &x), Ordering::Less);
    }
}
