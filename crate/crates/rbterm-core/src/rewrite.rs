//! The three weighted moves and normalization to the empty-leg basis.
//!
//! On a tree with both legs nonempty the Rota-Baxter identity acts as three
//! moves, each appending one dot to the neck:
//!
//! 1. a left-leg dot moves up (weight 1): `T(a-1, b, c+1)`;
//! 2. a right-leg dot moves up (weight 1): `T(a, b-1, c+1)`;
//! 3. a left and a right dot merge and move up (weight λ): `T(a-1, b-1, c+1)`.
//!
//! Since moves only ever append to the neck, `c` is inert:
//! `NF(T(a,b,c)) = neck_shift(NF(T(a,b,0)), c)`. The memoized engine keys its
//! table by `(a, b)` alone and shifts on the way out. The naive oracle does
//! neither — it re-expands every branch independently, which is exponential
//! and exists precisely to check the engine.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num::{BigInt, Zero};

use crate::error::Error;
use crate::term::{Combination, LambdaPoly, Tree};

/// Size caps for the two expansion strategies. Coefficients grow like
/// multinomials, so the caps keep desk-scale runs bounded.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Cap on `a + b` for the memoized engine.
    pub max_ab: u32,
    /// Cap on `a + b` for the naive oracle.
    pub max_naive_ab: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_ab: 2000,
            max_naive_ab: 14,
        }
    }
}

/// One application of the Rota-Baxter identity:
/// `T(a,b,c) → T(a-1,b,c+1) + T(a,b-1,c+1) + λ·T(a-1,b-1,c+1)`.
///
/// Requires both legs nonempty; a tree already in normal form has no
/// applicable move and is rejected.
pub fn expand_step(t: Tree) -> Result<Combination, Error> {
    if t.is_normal_form() {
        return Err(Error::NoApplicableMove {
            a: t.a,
            b: t.b,
            c: t.c,
        });
    }
    let mut out = Combination::zero();
    out.add_term(Tree::new(t.a - 1, t.b, t.c + 1), &LambdaPoly::one());
    out.add_term(Tree::new(t.a, t.b - 1, t.c + 1), &LambdaPoly::one());
    out.add_term(Tree::new(t.a - 1, t.b - 1, t.c + 1), &LambdaPoly::lambda());
    Ok(out)
}

/// Add `k` dots to the neck of every tree; coefficients are untouched.
pub fn neck_shift(u: &Combination, k: u32) -> Combination {
    u.iter().map(|(t, p)| (t.with_neck_added(k), p.clone())).collect()
}

/// A memo cell: the normal form of `T(a,b,0)` as a sorted list of trees
/// with bare integer counts. Degree conservation fixes each λ-exponent to
/// `a + b − dots`, so the monomial exponent is never stored; the three-way
/// merges below then reduce to plain big-integer additions.
type Cell = Arc<Vec<(Tree, BigInt)>>;

/// Cells with `a + b` up to this stay in the shared table; larger cells are
/// computed by rolling three diagonals, which bounds live memory by the
/// diagonal size instead of the full `a × b` rectangle.
const PERSIST_MAX_SUM: u32 = 40;

/// Memoized normal-form engine.
///
/// The table stores normal forms of `T(a,b,0)` only, keyed by `(a,b)`;
/// callers get neck-shifted copies. Cells are kept for `a ≥ b` and mirrored
/// on demand — the move system is left-right symmetric, which the oracle
/// tests confirm. Shared access is synchronized, so one `Normalizer` may
/// serve many threads; results are identical to a single-threaded run.
pub struct Normalizer {
    limits: Limits,
    memo: RwLock<HashMap<(u32, u32), Cell>>,
}

impl Default for Normalizer {
    fn default() -> Self {
        Normalizer::new(Limits::default())
    }
}

impl Normalizer {
    pub fn new(limits: Limits) -> Self {
        Normalizer {
            limits,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// The normal form of `t`: a combination supported only on empty-leg
    /// trees, equal to exhaustive application of [`expand_step`].
    pub fn normal_form(&self, t: Tree) -> Result<Combination, Error> {
        if t.is_normal_form() {
            return Ok(Combination::of_tree(t));
        }
        let ab = t.a as u64 + t.b as u64;
        if ab > self.limits.max_ab as u64 {
            return Err(Error::CapExceeded {
                what: "normal_form",
                got: ab,
                limit: self.limits.max_ab as u64,
            });
        }
        let base = self.base_cell(t.a, t.b);
        let total = t.a as u64 + t.b as u64;
        Ok(base
            .iter()
            .map(|(tree, count)| {
                let exponent = (total - tree.dots()) as u32;
                (
                    tree.with_neck_added(t.c),
                    LambdaPoly::monomial(exponent, count.clone()),
                )
            })
            .collect())
    }

    fn base_cell(&self, a: u32, b: u32) -> Cell {
        let (hi, lo, mirrored) = if a >= b { (a, b, false) } else { (b, a, true) };
        let cell = if hi + lo <= PERSIST_MAX_SUM {
            self.persistent_cell(hi, lo)
        } else {
            self.rolled_cell(hi, lo)
        };
        if mirrored {
            Arc::new(mirror_cell(&cell))
        } else {
            cell
        }
    }

    fn persistent_cell(&self, hi: u32, lo: u32) -> Cell {
        let hit = self.memo.read().unwrap().get(&(hi, lo)).cloned();
        match hit {
            Some(cell) => cell,
            None => {
                let mut memo = self.memo.write().unwrap();
                Self::fill(&mut memo, hi, lo, hi + lo);
                memo[&(hi, lo)].clone()
            }
        }
    }

    /// Large targets: seed the persistent region, then roll diagonal by
    /// diagonal keeping only the last two alive.
    fn rolled_cell(&self, hi: u32, lo: u32) -> Cell {
        let mut diagonals: HashMap<(u32, u32), Cell> = HashMap::new();
        {
            let mut memo = self.memo.write().unwrap();
            Self::fill(&mut memo, hi, lo, PERSIST_MAX_SUM);
            for (&(i, j), cell) in memo.iter() {
                if i + j + 1 >= PERSIST_MAX_SUM && i <= hi && j <= lo {
                    diagonals.insert((i, j), cell.clone());
                }
            }
        }
        for s in (PERSIST_MAX_SUM + 1)..=(hi + lo) {
            let i_lo = s.saturating_sub(lo).max(s.div_ceil(2)).max(1);
            let i_hi = hi.min(s - 1);
            for i in i_lo..=i_hi {
                let j = s - i;
                let left = Self::predecessor(&diagonals, i - 1, j);
                let right = Self::predecessor(&diagonals, i, j - 1);
                let diagonal = Self::predecessor(&diagonals, i - 1, j - 1);
                let cell = merge_shifted(&left, &right, &diagonal);
                diagonals.insert((i, j), Arc::new(cell));
            }
            diagonals.retain(|&(i, j), _| i + j + 1 >= s);
        }
        diagonals.remove(&(hi, lo)).expect("target cell was rolled")
    }

    /// Bottom-up fill in order of increasing `a + b` (capped at `s_max`), so
    /// the three predecessor cells of every new cell already exist. Only the
    /// `i ≥ j` half is materialized.
    fn fill(memo: &mut HashMap<(u32, u32), Cell>, a: u32, b: u32, s_max: u32) {
        for s in 2..=(a + b).min(s_max) {
            let i_lo = s.saturating_sub(b).max(s.div_ceil(2)).max(1);
            let i_hi = a.min(s - 1);
            for i in i_lo..=i_hi {
                let j = s - i;
                if memo.contains_key(&(i, j)) {
                    continue;
                }
                let left = Self::predecessor(memo, i - 1, j);
                let right = Self::predecessor(memo, i, j - 1);
                let diagonal = Self::predecessor(memo, i - 1, j - 1);
                let cell = merge_shifted(&left, &right, &diagonal);
                memo.insert((i, j), Arc::new(cell));
            }
        }
    }

    /// Cell lookup during a fill: boundary trees are their own normal form,
    /// and `a < b` cells come from their mirror image.
    fn predecessor(memo: &HashMap<(u32, u32), Cell>, a: u32, b: u32) -> Cell {
        if a == 0 || b == 0 {
            return Arc::new(vec![(Tree::new(a, b, 0), BigInt::from(1))]);
        }
        if a >= b {
            memo[&(a, b)].clone()
        } else {
            Arc::new(mirror_cell(&memo[&(b, a)]))
        }
    }
}

fn mirror_cell(cell: &[(Tree, BigInt)]) -> Vec<(Tree, BigInt)> {
    let mut out: Vec<(Tree, BigInt)> = cell
        .iter()
        .map(|(t, n)| (t.mirrored(), n.clone()))
        .collect();
    out.sort_by_key(|(t, _)| *t);
    out
}

/// `shift₁(left) + shift₁(right) + λ·shift₁(diagonal)` on implied-exponent
/// cells: column keys get one neck dot, and the λ-weight of the diagonal is
/// absorbed by the implied exponent, so this is a three-way sorted merge
/// with integer additions.
fn merge_shifted(
    left: &[(Tree, BigInt)],
    right: &[(Tree, BigInt)],
    diagonal: &[(Tree, BigInt)],
) -> Vec<(Tree, BigInt)> {
    let mut out: Vec<(Tree, BigInt)> =
        Vec::with_capacity(left.len().max(right.len()) + diagonal.len());
    let mut streams = [left.iter().peekable(), right.iter().peekable(), diagonal.iter().peekable()];
    loop {
        let mut next: Option<Tree> = None;
        for stream in &mut streams {
            if let Some((t, _)) = stream.peek() {
                next = Some(match next {
                    Some(best) if best <= *t => best,
                    _ => *t,
                });
            }
        }
        let Some(key) = next else { break };
        let mut sum = BigInt::zero();
        for stream in &mut streams {
            while stream.peek().is_some_and(|(t, _)| *t == key) {
                sum += &stream.next().unwrap().1;
            }
        }
        if !sum.is_zero() {
            out.push((key.with_neck_added(1), sum));
        }
    }
    out
}

/// Normal form through a fresh one-shot memo table. Callers doing sweeps
/// should hold a shared [`Normalizer`] instead.
pub fn normal_form(t: Tree) -> Result<Combination, Error> {
    Normalizer::default().normal_form(t)
}

/// Replace-until-fixpoint with no memoization and no neck shortcut: every
/// branch is re-expanded independently, so the work grows exponentially in
/// `a + b`. This is the oracle the memoized engine is checked against, not
/// the workhorse.
pub fn normal_form_naive(t: Tree, limits: &Limits) -> Result<Combination, Error> {
    normal_form_naive_counted(t, limits).map(|(c, _)| c)
}

/// Naive expansion plus the number of rewrite applications it performed.
pub fn normal_form_naive_counted(t: Tree, limits: &Limits) -> Result<(Combination, u64), Error> {
    let ab = t.a as u64 + t.b as u64;
    if ab > limits.max_naive_ab as u64 {
        return Err(Error::CapExceeded {
            what: "normal_form_naive",
            got: ab,
            limit: limits.max_naive_ab as u64,
        });
    }
    let mut events = 0u64;
    let result = naive_rec(t, &mut events);
    Ok((result, events))
}

fn naive_rec(t: Tree, events: &mut u64) -> Combination {
    if t.is_normal_form() {
        return Combination::of_tree(t);
    }
    *events += 1;
    let mut acc = naive_rec(Tree::new(t.a - 1, t.b, t.c + 1), events);
    for (tree, p) in naive_rec(Tree::new(t.a, t.b - 1, t.c + 1), events).iter() {
        acc.add_term(*tree, p);
    }
    for (tree, p) in naive_rec(Tree::new(t.a - 1, t.b - 1, t.c + 1), events).iter() {
        acc.add_term(*tree, &p.times_lambda_power(1));
    }
    acc
}
