//! Sequence model of prefix summation: a Rota-Baxter algebra of weight −1.
//!
//! Sequences live on a finite window `1..=M`; since an identity evaluated at
//! `m` only reads values up to `m`, the truncation loses nothing. Values are
//! exact rationals. Chain sets `Ω_a^m` (weakly increasing `a`-tuples in
//! `[1,m]`) connect the operator to counting: `P^a` applied to the all-ones
//! sequence, read at `m`, is `|Ω_a^m|`.

use std::fmt;

use num::{BigInt, BigRational, One, Zero};
use serde::Serialize;

use crate::closed_form::binomial;
use crate::error::Error;
use crate::term::{Combination, Tree};

/// A finite sequence of exact rationals indexed `1..=horizon`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteSequence {
    values: Vec<BigRational>,
}

impl FiniteSequence {
    pub fn new(values: Vec<BigRational>) -> Self {
        FiniteSequence { values }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self::new(
            values
                .iter()
                .map(|n| BigRational::from_integer(BigInt::from(*n)))
                .collect(),
        )
    }

    /// The constant all-ones sequence on `1..=horizon`.
    pub fn ones(horizon: usize) -> Self {
        Self::new(vec![BigRational::one(); horizon])
    }

    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Value at `m` (1-based).
    pub fn value_at(&self, m: usize) -> &BigRational {
        &self.values[m - 1]
    }

    pub fn pointwise_mul(&self, rhs: &FiniteSequence) -> Result<FiniteSequence, Error> {
        self.check_horizon(rhs)?;
        Ok(FiniteSequence::new(
            self.values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a * b)
                .collect(),
        ))
    }

    pub fn pointwise_add(&self, rhs: &FiniteSequence) -> Result<FiniteSequence, Error> {
        self.check_horizon(rhs)?;
        Ok(FiniteSequence::new(
            self.values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn scale(&self, q: &BigRational) -> FiniteSequence {
        FiniteSequence::new(self.values.iter().map(|v| v * q).collect())
    }

    fn check_horizon(&self, rhs: &FiniteSequence) -> Result<(), Error> {
        if self.horizon() != rhs.horizon() {
            return Err(Error::HorizonMismatch {
                left: self.horizon(),
                right: rhs.horizon(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for FiniteSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, v) in self.values.iter().enumerate() {
            if idx > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// `P(f)(m) = Σ_{n=1..m} f(n)`, same horizon.
pub fn prefix_sum(s: &FiniteSequence) -> FiniteSequence {
    let mut acc = BigRational::zero();
    FiniteSequence::new(
        s.values()
            .iter()
            .map(|v| {
                acc += v;
                acc.clone()
            })
            .collect(),
    )
}

fn iterate_p(s: &FiniteSequence, times: u32) -> FiniteSequence {
    let mut out = s.clone();
    for _ in 0..times {
        out = prefix_sum(&out);
    }
    out
}

/// Evaluate the operator named by `t` in this model:
/// `P^c(P^a(f) · P^b(g))` with `P` = prefix sum.
pub fn eval_tree_sum(
    t: Tree,
    f: &FiniteSequence,
    g: &FiniteSequence,
) -> Result<FiniteSequence, Error> {
    let product = iterate_p(f, t.a).pointwise_mul(&iterate_p(g, t.b))?;
    Ok(iterate_p(&product, t.c))
}

/// Check an identity `lhs = rhs` in this model for concrete `f`, `g`:
/// coefficients are specialized at λ = −1 and both sides compared at every
/// point of the horizon.
pub fn check_combination_sum(
    lhs: Tree,
    rhs: &Combination,
    f: &FiniteSequence,
    g: &FiniteSequence,
) -> Result<bool, Error> {
    let left = eval_tree_sum(lhs, f, g)?;
    let minus_one = -BigRational::one();
    let mut right = FiniteSequence::new(vec![BigRational::zero(); f.horizon()]);
    for (t, weight) in rhs.evaluate_lambda(&minus_one) {
        right = right.pointwise_add(&eval_tree_sum(t, f, g)?.scale(&weight))?;
    }
    Ok(left == right)
}

/// The weight −1 Rota-Baxter law on concrete inputs:
/// `P(f)P(g) = P(f·P(g)) + P(P(f)·g) − P(f·g)`, exactly at every point.
pub fn rb_law_holds_sum(f: &FiniteSequence, g: &FiniteSequence) -> Result<bool, Error> {
    let pf = prefix_sum(f);
    let pg = prefix_sum(g);
    let left = pf.pointwise_mul(&pg)?;
    let term1 = prefix_sum(&f.pointwise_mul(&pg)?);
    let term2 = prefix_sum(&pf.pointwise_mul(g)?);
    let term3 = prefix_sum(&f.pointwise_mul(g)?);
    let right = term1
        .pointwise_add(&term2)?
        .pointwise_add(&term3.scale(&-BigRational::one()))?;
    Ok(left == right)
}

/// The chain set `Ω_a^m` of weakly increasing `a`-tuples with entries in
/// `{1, …, m}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ChainSet {
    pub a: u32,
    pub m: u32,
}

impl ChainSet {
    pub fn new(a: u32, m: u32) -> Self {
        ChainSet { a, m }
    }

    /// Cardinality by explicit enumeration — the odometer visits every tuple
    /// once. Errors when more than `cap` tuples would be visited.
    pub fn enumerate_count(&self, cap: u64) -> Result<BigInt, Error> {
        let exceeded = Err(Error::EnumerationCapExceeded {
            a: self.a,
            m: self.m,
            cap,
        });
        if self.m == 0 {
            return Ok(BigInt::zero());
        }
        if self.a == 0 {
            return Ok(BigInt::one());
        }
        let mut tuple = vec![1u32; self.a as usize];
        let mut count: u64 = 1;
        loop {
            // advance the rightmost coordinate that can still grow, then
            // reset everything after it to keep the tuple weakly increasing
            let mut pos = self.a as usize;
            loop {
                if pos == 0 {
                    return Ok(BigInt::from(count));
                }
                if tuple[pos - 1] < self.m {
                    break;
                }
                pos -= 1;
            }
            let bumped = tuple[pos - 1] + 1;
            for slot in &mut tuple[pos - 1..] {
                *slot = bumped;
            }
            count += 1;
            if count > cap {
                return exceeded;
            }
        }
    }
}

/// `|Ω_a^m|` by enumeration (the oracle). The fast path is
/// [`chain_count_prefix_value`]; the two must agree.
pub fn chain_count(a: u32, m: u32, cap: u64) -> Result<BigInt, Error> {
    ChainSet::new(a, m).enumerate_count(cap)
}

/// `P^a` applied to the all-ones sequence, read at `m` — the operator-side
/// value of the chain count.
pub fn chain_count_prefix_value(a: u32, m: u32) -> BigInt {
    if m == 0 {
        return BigInt::zero();
    }
    let lifted = iterate_p(&FiniteSequence::ones(m as usize), a);
    lifted.value_at(m as usize).to_integer()
}

/// One row of the counting report: the enumerated cardinality, the
/// prefix-sum value, and the printed closed form `C(a+m, m) − 1`, with
/// agreement flags. Disagreement is a finding, not a failure.
#[derive(Clone, Debug, Serialize)]
pub struct CountRow {
    pub a: u32,
    pub m: u32,
    pub enumeration: String,
    pub prefix_sum: String,
    pub closed_form: String,
    pub enumeration_eq_prefix: bool,
    pub enumeration_eq_closed: bool,
}

/// Agreement table over the grid `1..=a_max × 1..=m_max`.
#[derive(Clone, Debug, Serialize)]
pub struct ChainCountReport {
    pub a_max: u32,
    pub m_max: u32,
    pub rows: Vec<CountRow>,
}

impl ChainCountReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("count report serialization cannot fail")
    }

    /// Rows where the printed closed form disagrees with enumeration.
    pub fn closed_form_disagreements(&self) -> Vec<(u32, u32)> {
        self.rows
            .iter()
            .filter(|r| !r.enumeration_eq_closed)
            .map(|r| (r.a, r.m))
            .collect()
    }
}

/// Tabulate enumeration vs prefix-sum vs printed closed form for every
/// `(a, m)` in the grid.
pub fn chain_count_formula_report(
    a_max: u32,
    m_max: u32,
    cap: u64,
) -> Result<ChainCountReport, Error> {
    let mut rows = Vec::new();
    for a in 1..=a_max {
        for m in 1..=m_max {
            let enumeration = chain_count(a, m, cap)?;
            let prefix = chain_count_prefix_value(a, m);
            let closed = binomial((a + m) as u64, m as u64) - BigInt::one();
            rows.push(CountRow {
                a,
                m,
                enumeration_eq_prefix: enumeration == prefix,
                enumeration_eq_closed: enumeration == closed,
                enumeration: enumeration.to_string(),
                prefix_sum: prefix.to_string(),
                closed_form: closed.to_string(),
            });
        }
    }
    Ok(ChainCountReport { a_max, m_max, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{generic_identity, Mode};
    use crate::rewrite::normal_form;

    const CAP: u64 = 1_000_000;

    #[test]
    fn prefix_sum_examples() {
        let ones = FiniteSequence::from_integers(&[1, 1, 1]);
        assert_eq!(prefix_sum(&ones), FiniteSequence::from_integers(&[1, 2, 3]));
        let ramp = FiniteSequence::from_integers(&[1, 2, 3]);
        assert_eq!(prefix_sum(&ramp), FiniteSequence::from_integers(&[1, 3, 6]));
        assert_eq!(
            prefix_sum(&prefix_sum(&ones)).value_at(3),
            &BigRational::from_integer(BigInt::from(6))
        );
    }

    #[test]
    fn eval_tree_examples() {
        let f = FiniteSequence::from_integers(&[2, -1, 3]);
        let g = FiniteSequence::from_integers(&[1, 4, 0]);
        assert_eq!(
            eval_tree_sum(Tree::new(0, 0, 0), &f, &g).unwrap(),
            f.pointwise_mul(&g).unwrap()
        );
        let ones = FiniteSequence::ones(3);
        assert_eq!(
            eval_tree_sum(Tree::new(1, 1, 0), &ones, &ones).unwrap(),
            FiniteSequence::from_integers(&[1, 4, 9])
        );
    }

    #[test]
    fn horizon_mismatch_is_rejected() {
        let f = FiniteSequence::ones(3);
        let g = FiniteSequence::ones(4);
        assert!(matches!(
            eval_tree_sum(Tree::new(1, 1, 0), &f, &g),
            Err(Error::HorizonMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn defining_identity_at_weight_minus_one() {
        let ones = FiniteSequence::ones(10);
        let rhs = generic_identity(1, 1, 0, Mode::Reconciled).unwrap();
        assert!(check_combination_sum(Tree::new(1, 1, 0), &rhs, &ones, &ones).unwrap());
    }

    #[test]
    fn normal_forms_hold_in_the_model() {
        let f = FiniteSequence::from_integers(&[3, -2, 5, 1, -1, 2, 0, 4, -3, 1, 2, 2, -5, 7]);
        let g = FiniteSequence::from_integers(&[1, 1, -4, 2, 6, -1, 3, 0, 2, -2, 1, 5, 1, -1]);
        for (a, b) in [(1u32, 2u32), (2, 2), (3, 2), (2, 3)] {
            let rhs = normal_form(Tree::new(a, b, 0)).unwrap();
            assert!(
                check_combination_sum(Tree::new(a, b, 0), &rhs, &f, &g).unwrap(),
                "failed at ({a},{b})"
            );
        }
    }

    #[test]
    fn published_defect_propagates_to_the_model() {
        let ones = FiniteSequence::ones(10);
        let rhs = generic_identity(2, 2, 0, Mode::AsPublished).unwrap();
        assert!(!check_combination_sum(Tree::new(2, 2, 0), &rhs, &ones, &ones).unwrap());
    }

    #[test]
    fn rb_law_spot_checks() {
        let f = FiniteSequence::from_integers(&[2, 0, -3, 1, 4]);
        let g = FiniteSequence::from_integers(&[-1, 5, 2, 2, -2]);
        assert!(rb_law_holds_sum(&f, &g).unwrap());
    }

    #[test]
    fn non_integer_rational_values_work_throughout() {
        let halves = FiniteSequence::new(
            (1..=12)
                .map(|k| BigRational::new(BigInt::from(k), BigInt::from(2)))
                .collect(),
        );
        let thirds = FiniteSequence::new(
            (1..=12)
                .map(|k| BigRational::new(BigInt::from(5 - k), BigInt::from(3)))
                .collect(),
        );
        assert!(rb_law_holds_sum(&halves, &thirds).unwrap());
        let rhs = normal_form(Tree::new(2, 2, 0)).unwrap();
        assert!(check_combination_sum(Tree::new(2, 2, 0), &rhs, &halves, &thirds).unwrap());
    }

    #[test]
    fn chain_count_examples() {
        for m in 1..=5 {
            assert_eq!(chain_count(1, m, CAP).unwrap(), BigInt::from(m));
        }
        assert_eq!(chain_count(2, 2, CAP).unwrap(), BigInt::from(3));
        assert_eq!(chain_count(2, 3, CAP).unwrap(), BigInt::from(6));
        assert_eq!(chain_count(2, 3, CAP).unwrap(), chain_count_prefix_value(2, 3));
    }

    #[test]
    fn chain_count_matches_prefix_sums() {
        for a in 1..=6 {
            for m in 1..=6 {
                assert_eq!(
                    chain_count(a, m, CAP).unwrap(),
                    chain_count_prefix_value(a, m),
                    "at ({a},{m})"
                );
            }
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        assert!(matches!(
            chain_count(8, 8, 10),
            Err(Error::EnumerationCapExceeded { .. })
        ));
    }

    #[test]
    fn count_report_flags_the_two_two_discrepancy() {
        let report = chain_count_formula_report(4, 4, CAP).unwrap();
        let row = report
            .rows
            .iter()
            .find(|r| r.a == 2 && r.m == 2)
            .expect("row (2,2) present");
        assert_eq!(row.enumeration, "3");
        assert_eq!(row.closed_form, "5");
        assert!(row.enumeration_eq_prefix);
        assert!(!row.enumeration_eq_closed);
        // a = 1 rows always agree: C(1+m, m) − 1 = m
        assert!(report
            .rows
            .iter()
            .filter(|r| r.a == 1)
            .all(|r| r.enumeration_eq_closed && r.enumeration_eq_prefix));
    }
}
