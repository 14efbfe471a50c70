//! Tree terms, coefficients in `ℤ[λ]`, and formal linear combinations.
//!
//! Everything here is a value: construction canonicalizes (sorted keys, no
//! stored zeros), after which nothing mutates. Two equal values therefore
//! always serialize to identical bytes, which the golden tests rely on.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num::{BigInt, BigRational, One, Zero};
use serde::Serialize;

/// The tree `T(a,b,c)`: `a` dots on the left leg, `b` dots on the right leg,
/// `c` dots on the neck. As an operator it reads `P^c(P^a(x) · P^b(y))`.
///
/// The derived order is lexicographic in `(a, b, c)`, which is the canonical
/// key order for combinations.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Tree {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl Tree {
    pub fn new(a: u32, b: u32, c: u32) -> Self {
        Tree { a, b, c }
    }

    /// A tree is in normal form when a leg is empty: `T(0,i,j)`, `T(i,0,j)`
    /// or `T(0,0,j)`. No move applies to such a tree.
    pub fn is_normal_form(&self) -> bool {
        self.a == 0 || self.b == 0
    }

    /// The same tree with `k` extra dots on the neck.
    pub fn with_neck_added(self, k: u32) -> Self {
        Tree {
            c: self.c + k,
            ..self
        }
    }

    /// Mirror image: legs swapped, neck untouched.
    pub fn mirrored(self) -> Self {
        Tree {
            a: self.b,
            b: self.a,
            c: self.c,
        }
    }

    /// Total number of dots on the tree.
    pub fn dots(&self) -> u64 {
        self.a as u64 + self.b as u64 + self.c as u64
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({},{},{})", self.a, self.b, self.c)
    }
}

/// A polynomial in the weight λ with arbitrary-precision integer
/// coefficients, stored sparsely as `(exponent, coefficient)` pairs in
/// ascending exponent order with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LambdaPoly {
    terms: Vec<(u32, BigInt)>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The monomial λ.
    pub fn lambda() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant(n: impl Into<BigInt>) -> Self {
        Self::monomial(0, n)
    }

    /// `coefficient · λ^exponent`.
    pub fn monomial(exponent: u32, coefficient: impl Into<BigInt>) -> Self {
        let coefficient = coefficient.into();
        if coefficient.is_zero() {
            return Self::zero();
        }
        LambdaPoly {
            terms: vec![(exponent, coefficient)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// One stored term, i.e. the polynomial is `n·λ^e`.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Sparse terms, ascending exponent.
    pub fn terms(&self) -> &[(u32, BigInt)] {
        &self.terms
    }

    /// Coefficient of λ^exponent (zero when absent).
    pub fn coefficient(&self, exponent: u32) -> BigInt {
        match self.terms.binary_search_by_key(&exponent, |(e, _)| *e) {
            Ok(idx) => self.terms[idx].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// Multiply by λ^k, i.e. shift every exponent up by `k`.
    pub fn times_lambda_power(&self, k: u32) -> Self {
        LambdaPoly {
            terms: self.terms.iter().map(|(e, n)| (e + k, n.clone())).collect(),
        }
    }

    /// Exact evaluation at λ = q.
    pub fn eval(&self, q: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        let mut power = BigRational::one();
        let mut at = 0u32;
        for (e, n) in &self.terms {
            for _ in at..*e {
                power *= q;
            }
            at = *e;
            acc += BigRational::from_integer(n.clone()) * &power;
        }
        acc
    }

    /// Sum of all integer coefficients (the value at λ = 1).
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.iter().map(|(_, n)| n).sum()
    }

    /// `[(exponent, coefficient-as-decimal-string)]` pairs for JSON output.
    /// Big integers are always rendered as strings, never native numbers.
    pub fn to_decimal_pairs(&self) -> Vec<(u32, String)> {
        self.terms
            .iter()
            .map(|(e, n)| (*e, n.to_string()))
            .collect()
    }

    fn add_ref(&self, rhs: &LambdaPoly) -> LambdaPoly {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut l, mut r) = (self.terms.iter().peekable(), rhs.terms.iter().peekable());
        loop {
            match (l.peek(), r.peek()) {
                (Some((le, _)), Some((re, _))) if le == re => {
                    let (e, ln) = l.next().unwrap();
                    let (_, rn) = r.next().unwrap();
                    let n = ln + rn;
                    if !n.is_zero() {
                        out.push((*e, n));
                    }
                }
                (Some((le, _)), Some((re, _))) => {
                    let (e, n) = if le < re { l.next() } else { r.next() }.unwrap();
                    out.push((*e, n.clone()));
                }
                (Some(_), None) => out.push(l.next().map(|(e, n)| (*e, n.clone())).unwrap()),
                (None, Some(_)) => out.push(r.next().map(|(e, n)| (*e, n.clone())).unwrap()),
                (None, None) => break,
            }
        }
        LambdaPoly { terms: out }
    }

    fn mul_ref(&self, rhs: &LambdaPoly) -> LambdaPoly {
        let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (le, ln) in &self.terms {
            for (re, rn) in &rhs.terms {
                let entry = acc.entry(le + re).or_insert_with(BigInt::zero);
                *entry += ln * rn;
            }
        }
        LambdaPoly {
            terms: acc.into_iter().filter(|(_, n)| !n.is_zero()).collect(),
        }
    }
}

impl Add for &LambdaPoly {
    type Output = LambdaPoly;
    fn add(self, rhs: &LambdaPoly) -> LambdaPoly {
        self.add_ref(rhs)
    }
}

impl Add for LambdaPoly {
    type Output = LambdaPoly;
    fn add(self, rhs: LambdaPoly) -> LambdaPoly {
        self.add_ref(&rhs)
    }
}

impl Mul for &LambdaPoly {
    type Output = LambdaPoly;
    fn mul(self, rhs: &LambdaPoly) -> LambdaPoly {
        self.mul_ref(rhs)
    }
}

impl Mul for LambdaPoly {
    type Output = LambdaPoly;
    fn mul(self, rhs: LambdaPoly) -> LambdaPoly {
        self.mul_ref(&rhs)
    }
}

impl Neg for &LambdaPoly {
    type Output = LambdaPoly;
    fn neg(self) -> LambdaPoly {
        LambdaPoly {
            terms: self.terms.iter().map(|(e, n)| (*e, -n)).collect(),
        }
    }
}

impl Neg for LambdaPoly {
    type Output = LambdaPoly;
    fn neg(self) -> LambdaPoly {
        -&self
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, n)) in self.terms.iter().enumerate() {
            let mag = n.magnitude().to_string();
            let sign = n.sign() == num::bigint::Sign::Minus;
            if idx == 0 {
                if sign {
                    write!(f, "-")?;
                }
            } else if sign {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag == "1" && *e > 0;
            if !unit_coeff {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "λ")?,
                _ => write!(f, "λ^{e}")?,
            }
        }
        Ok(())
    }
}

/// A finite formal sum of trees with `LambdaPoly` coefficients — the carrier
/// of every identity in this crate. Keys are kept in `(a,b,c)` lexicographic
/// order and zero coefficients are pruned, so iteration order and serialized
/// bytes do not depend on how the value was built.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Combination {
    terms: BTreeMap<Tree, LambdaPoly>,
}

#[derive(Serialize)]
struct TermEntry {
    tree: [u32; 3],
    coeff: Vec<(u32, String)>,
}

impl Combination {
    pub fn zero() -> Self {
        Combination {
            terms: BTreeMap::new(),
        }
    }

    /// The single tree `t` with coefficient 1.
    pub fn of_tree(t: Tree) -> Self {
        Self::singleton(t, LambdaPoly::one())
    }

    pub fn singleton(t: Tree, coefficient: LambdaPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(t, &coefficient);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of trees with a nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tree, &LambdaPoly)> {
        self.terms.iter()
    }

    pub fn trees(&self) -> impl Iterator<Item = &Tree> {
        self.terms.keys()
    }

    /// Coefficient of `t`, zero when absent.
    pub fn coefficient(&self, t: &Tree) -> LambdaPoly {
        self.terms.get(t).cloned().unwrap_or_else(LambdaPoly::zero)
    }

    /// Accumulate `p` onto the coefficient of `t`, pruning zeros.
    pub fn add_term(&mut self, t: Tree, p: &LambdaPoly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(p.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get().add_ref(p);
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    /// Every coefficient multiplied by `p` exactly.
    pub fn scale(&self, p: &LambdaPoly) -> Combination {
        if p.is_zero() {
            return Combination::zero();
        }
        Combination {
            terms: self
                .terms
                .iter()
                .map(|(t, q)| (*t, q.mul_ref(p)))
                .collect(),
        }
    }

    /// Specialize λ to the exact rational `q`; trees whose coefficient
    /// evaluates to zero are dropped.
    pub fn evaluate_lambda(&self, q: &BigRational) -> BTreeMap<Tree, BigRational> {
        self.terms
            .iter()
            .map(|(t, p)| (*t, p.eval(q)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    /// Mirror image: every key's legs swapped, coefficients untouched.
    pub fn mirrored(&self) -> Combination {
        self.terms
            .iter()
            .map(|(t, p)| (t.mirrored(), p.clone()))
            .collect()
    }

    /// Canonical JSON: an array of entries
    /// `{"tree":[a,b,c],"coeff":[[e,"n"],...]}` sorted by tree key, with
    /// coefficient terms in ascending exponent order and integers rendered
    /// as decimal strings.
    pub fn to_canonical_json(&self) -> String {
        let entries: Vec<TermEntry> = self
            .terms
            .iter()
            .map(|(t, p)| TermEntry {
                tree: [t.a, t.b, t.c],
                coeff: p.to_decimal_pairs(),
            })
            .collect();
        serde_json::to_string(&entries).expect("combination serialization cannot fail")
    }
}

impl Add for &Combination {
    type Output = Combination;
    fn add(self, rhs: &Combination) -> Combination {
        let mut out = self.clone();
        for (t, p) in rhs.iter() {
            out.add_term(*t, p);
        }
        out
    }
}

impl Add for Combination {
    type Output = Combination;
    fn add(self, rhs: Combination) -> Combination {
        &self + &rhs
    }
}

impl FromIterator<(Tree, LambdaPoly)> for Combination {
    fn from_iter<I: IntoIterator<Item = (Tree, LambdaPoly)>>(iter: I) -> Self {
        let mut out = Combination::zero();
        for (t, p) in iter {
            out.add_term(t, &p);
        }
        out
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (t, p)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if p.is_monomial() {
                let rendered = p.to_string();
                if rendered == "1" {
                    write!(f, "{t}")?;
                } else {
                    write!(f, "{rendered} {t}")?;
                }
            } else {
                write!(f, "({p}) {t}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn normal_form_predicate() {
        assert!(Tree::new(0, 3, 2).is_normal_form());
        assert!(!Tree::new(2, 1, 0).is_normal_form());
        assert!(Tree::new(0, 0, 5).is_normal_form());
    }

    #[test]
    fn add_merges_like_terms() {
        let t = Tree::new(1, 0, 1);
        let u = Combination::singleton(t, LambdaPoly::one());
        let v = Combination::singleton(t, LambdaPoly::lambda());
        let sum = &u + &v;
        assert_eq!(
            sum.coefficient(&t),
            &LambdaPoly::one() + &LambdaPoly::lambda()
        );
    }

    #[test]
    fn add_zero_is_identity() {
        let u = Combination::singleton(Tree::new(2, 1, 0), LambdaPoly::monomial(1, 3));
        assert_eq!(&u + &Combination::zero(), u);
    }

    #[test]
    fn add_cancellation_prunes_to_empty() {
        let t = Tree::new(0, 1, 1);
        let u = Combination::singleton(t, LambdaPoly::one());
        let v = Combination::singleton(t, LambdaPoly::constant(-1));
        assert!((&u + &v).is_zero());
    }

    #[test]
    fn scale_examples() {
        let u = Combination::of_tree(Tree::new(0, 0, 1));
        assert_eq!(
            u.scale(&LambdaPoly::lambda()),
            Combination::singleton(Tree::new(0, 0, 1), LambdaPoly::lambda())
        );
        assert!(u.scale(&LambdaPoly::zero()).is_zero());
        let v = Combination::singleton(Tree::new(0, 1, 2), LambdaPoly::constant(2));
        assert_eq!(
            v.scale(&LambdaPoly::monomial(2, 1)),
            Combination::singleton(Tree::new(0, 1, 2), LambdaPoly::monomial(2, 2))
        );
    }

    #[test]
    fn evaluate_lambda_examples() {
        let u = Combination::singleton(Tree::new(0, 0, 2), LambdaPoly::monomial(2, 1));
        let at = u.evaluate_lambda(&rat(-1));
        assert_eq!(at[&Tree::new(0, 0, 2)], rat(1));

        let v = Combination::singleton(Tree::new(1, 0, 1), LambdaPoly::lambda());
        assert!(v.evaluate_lambda(&rat(0)).is_empty());

        let w = Combination::singleton(
            Tree::new(0, 1, 2),
            &LambdaPoly::monomial(1, 2) + &LambdaPoly::one(),
        );
        assert_eq!(w.evaluate_lambda(&rat(1))[&Tree::new(0, 1, 2)], rat(3));
    }

    #[test]
    fn poly_display() {
        let p = &LambdaPoly::constant(3) + &LambdaPoly::monomial(2, 1);
        assert_eq!(p.to_string(), "3 + λ^2");
        assert_eq!(LambdaPoly::monomial(1, -2).to_string(), "-2λ");
        assert_eq!(LambdaPoly::zero().to_string(), "0");
    }

    fn small_poly() -> impl Strategy<Value = LambdaPoly> {
        proptest::collection::vec((0u32..6, -20i64..20), 0..6).prop_map(|pairs| {
            let mut p = LambdaPoly::zero();
            for (e, n) in pairs {
                p = &p + &LambdaPoly::monomial(e, n);
            }
            p
        })
    }

    fn small_tree() -> impl Strategy<Value = Tree> {
        (0u32..4, 0u32..4, 0u32..4).prop_map(|(a, b, c)| Tree::new(a, b, c))
    }

    fn small_combination() -> impl Strategy<Value = Combination> {
        proptest::collection::vec((small_tree(), small_poly()), 0..6)
            .prop_map(|entries| entries.into_iter().collect())
    }

    proptest! {
        #[test]
        fn poly_ring_laws(p in small_poly(), q in small_poly(), r in small_poly()) {
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        }

        #[test]
        fn combination_laws(u in small_combination(), v in small_combination(),
                            w in small_combination(), p in small_poly(), q in small_poly()) {
            prop_assert_eq!(&(&u + &v) + &w, &u + &(&v + &w));
            prop_assert_eq!(&u + &v, &v + &u);
            prop_assert_eq!((&u + &v).scale(&p), &u.scale(&p) + &v.scale(&p));
            prop_assert_eq!(u.scale(&(&p + &q)), &u.scale(&p) + &u.scale(&q));
        }

        #[test]
        fn canonical_bytes_ignore_construction_order(
            entries in proptest::collection::vec((small_tree(), small_poly()), 0..8),
            seed in proptest::prelude::any::<u64>(),
        ) {
            let forward: Combination = entries.iter().cloned().collect();
            let mut shuffled = entries.clone();
            // cheap deterministic shuffle driven by the seed
            let mut state = seed;
            for i in (1..shuffled.len()).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                shuffled.swap(i, j);
            }
            let backward: Combination = shuffled.into_iter().collect();
            prop_assert_eq!(forward.to_canonical_json(), backward.to_canonical_json());
        }
    }
}
