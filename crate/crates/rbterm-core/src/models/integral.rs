//! Polynomial model of integration from zero: a Rota-Baxter algebra of
//! weight 0.
//!
//! Rational-coefficient polynomials stand in for continuous functions — the
//! ring is closed under the operator, every computation is exact, and
//! agreement as polynomials certifies an identity for all arguments. The
//! simplex kernels `v_a(x,y)` live here too; they represent the iterated
//! operator as a single weighted integral, `P^{a+1}(f)(y) = ∫₀^y f(x)·v_a(x,y) dx`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Zero};

use crate::error::Error;
use crate::term::{Combination, Tree};

/// A univariate polynomial over exact rationals; `coeffs[k]` multiplies
/// `x^k` and trailing zeros are trimmed.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn x() -> Self {
        Self::monomial(1, BigRational::one())
    }

    pub fn constant(q: BigRational) -> Self {
        Self::new(vec![q])
    }

    pub fn monomial(power: usize, q: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); power + 1];
        coeffs[power] = q;
        Self::new(coeffs)
    }

    /// Integer coefficients in ascending power, e.g. `[2, 0, 1]` for `x² + 2`.
    pub fn from_integer_coeffs(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|n| BigRational::from_integer(BigInt::from(*n)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> BigRational {
        self.coeffs.get(power).cloned().unwrap_or_else(Zero::zero)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        RationalPolynomial {
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// The antiderivative vanishing at zero: `x^k ↦ x^{k+1}/(k+1)`.
    pub fn integrate_from_zero(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / BigRational::from_integer(BigInt::from(k as u64 + 1)));
        }
        Self::new(coeffs)
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RationalPolynomial::new(coeffs)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "x")?,
                1 => write!(f, "{c} x")?,
                _ if c.is_one() => write!(f, "x^{k}")?,
                _ => write!(f, "{c} x^{k}")?,
            }
        }
        Ok(())
    }
}

fn iterate_p(p: &RationalPolynomial, times: u32) -> RationalPolynomial {
    let mut out = p.clone();
    for _ in 0..times {
        out = out.integrate_from_zero();
    }
    out
}

/// Evaluate the operator named by `t` in this model:
/// `P^c(P^a(f) · P^b(g))` with `P` = integration from zero.
pub fn eval_tree_integral(
    t: Tree,
    f: &RationalPolynomial,
    g: &RationalPolynomial,
) -> RationalPolynomial {
    let product = &iterate_p(f, t.a) * &iterate_p(g, t.b);
    iterate_p(&product, t.c)
}

/// Check an identity `lhs = rhs` in this model for concrete `f`, `g`:
/// coefficients are specialized at λ = 0 and both sides compared exactly as
/// polynomials.
pub fn check_combination_integral(
    lhs: Tree,
    rhs: &Combination,
    f: &RationalPolynomial,
    g: &RationalPolynomial,
) -> bool {
    let left = eval_tree_integral(lhs, f, g);
    let mut right = RationalPolynomial::zero();
    for (t, weight) in rhs.evaluate_lambda(&BigRational::zero()) {
        right = &right + &eval_tree_integral(t, f, g).scale(&weight);
    }
    left == right
}

/// The volume `v_a(x,y)` of the order simplex `{x ≤ x₁ ≤ … ≤ x_a ≤ y}`,
/// represented as a polynomial in `x` whose coefficients are polynomials in
/// `y`. Built by the recursion `v_a(x,y) = ∫_x^y v_{a-1}(x',y) dx'` with
/// `v_0 = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplexKernel {
    /// `x_coeffs[k]` is the polynomial in `y` multiplying `x^k`.
    x_coeffs: Vec<RationalPolynomial>,
}

impl SimplexKernel {
    /// Coefficients by power of `x`; each entry is a polynomial in `y`.
    pub fn x_coefficients(&self) -> &[RationalPolynomial] {
        &self.x_coeffs
    }

    /// Largest `deg_x + deg_y` over all monomials.
    pub fn total_degree(&self) -> usize {
        self.x_coeffs
            .iter()
            .enumerate()
            .filter_map(|(k, p)| p.degree().map(|d| k + d))
            .max()
            .unwrap_or(0)
    }

    /// Substitute a concrete `y`, leaving a univariate polynomial in `x`.
    pub fn substitute_y(&self, y: &BigRational) -> RationalPolynomial {
        RationalPolynomial::new(self.x_coeffs.iter().map(|p| p.eval(y)).collect())
    }

    /// Substitute `x := y`, collapsing to a univariate polynomial in `y`.
    fn substitute_x_equals_y(&self) -> RationalPolynomial {
        let mut acc = RationalPolynomial::zero();
        for (k, p) in self.x_coeffs.iter().enumerate() {
            acc = &acc + &(p * &RationalPolynomial::monomial(k, BigRational::one()));
        }
        acc
    }

    fn trim(mut self) -> Self {
        while self.x_coeffs.last().is_some_and(RationalPolynomial::is_zero) {
            self.x_coeffs.pop();
        }
        self
    }
}

/// `v_a` by repeated exact integration over `x' ∈ [x, y]`; `v_0 = 1`.
pub fn simplex_volume(a: u32) -> SimplexKernel {
    let mut kernel = SimplexKernel {
        x_coeffs: vec![RationalPolynomial::one()],
    };
    for _ in 0..a {
        // antiderivative W of the kernel with respect to x
        let mut w = vec![RationalPolynomial::zero()];
        for (k, p) in kernel.x_coeffs.iter().enumerate() {
            let denom = BigRational::from_integer(BigInt::from(k as u64 + 1));
            w.push(p.scale(&denom.recip()));
        }
        let w = SimplexKernel { x_coeffs: w };
        // ∫_x^y = W(y,y) − W(x,y)
        let at_top = w.substitute_x_equals_y();
        let mut next = vec![RationalPolynomial::zero(); w.x_coeffs.len()];
        next[0] = &at_top - &w.x_coeffs[0];
        for (k, p) in w.x_coeffs.iter().enumerate().skip(1) {
            next[k] = -p;
        }
        kernel = SimplexKernel { x_coeffs: next }.trim();
    }
    kernel
}

/// Verify `P^{a+1}(f)(y) = ∫₀^y f(x)·v_a(x,y) dx` at every sample point.
///
/// Both sides are polynomials in `y` of degree `deg f + a + 1`, so agreement
/// at that many plus one distinct samples pins the identity; fewer samples
/// (or repeats) are rejected.
pub fn kernel_representation_check(
    a: u32,
    f: &RationalPolynomial,
    samples: &[BigRational],
) -> Result<bool, Error> {
    let degree = f.degree().unwrap_or(0) + a as usize + 1;
    let needed = degree + 1;
    if samples.len() < needed {
        return Err(Error::InsufficientSamples {
            needed,
            got: samples.len(),
        });
    }
    for (idx, s) in samples.iter().enumerate() {
        if samples[..idx].contains(s) {
            return Err(Error::DuplicateSample);
        }
    }
    let kernel = simplex_volume(a);
    let lifted = iterate_p(f, a + 1);
    Ok(samples.iter().all(|y| {
        let integrand = f * &kernel.substitute_y(y);
        let integral = integrand.integrate_from_zero().eval(y);
        integral == lifted.eval(y)
    }))
}

/// The weight-0 Rota-Baxter law on concrete inputs:
/// `P(f)P(g) = P(f·P(g)) + P(P(f)·g)`, exactly as polynomials.
pub fn rb_law_holds_integral(f: &RationalPolynomial, g: &RationalPolynomial) -> bool {
    let pf = f.integrate_from_zero();
    let pg = g.integrate_from_zero();
    let left = &pf * &pg;
    let right = &(f * &pg).integrate_from_zero() + &(&pf * g).integrate_from_zero();
    left == right
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::restricted_identity;
    use crate::term::LambdaPoly;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(
            RationalPolynomial::one().integrate_from_zero(),
            RationalPolynomial::x()
        );
        assert_eq!(
            RationalPolynomial::x().integrate_from_zero(),
            RationalPolynomial::monomial(2, ratio(1, 2))
        );
        assert_eq!(
            RationalPolynomial::from_integer_coeffs(&[0, 0, 3]).integrate_from_zero(),
            RationalPolynomial::monomial(3, rat(1))
        );
    }

    #[test]
    fn eval_tree_examples() {
        let f = RationalPolynomial::from_integer_coeffs(&[2, 1]);
        let g = RationalPolynomial::from_integer_coeffs(&[0, 0, 1]);
        assert_eq!(eval_tree_integral(Tree::new(0, 0, 0), &f, &g), &f * &g);

        let ones = RationalPolynomial::one();
        assert_eq!(
            eval_tree_integral(Tree::new(1, 1, 0), &ones, &ones),
            RationalPolynomial::monomial(2, rat(1))
        );
    }

    #[test]
    fn defining_identity_instance_at_weight_zero() {
        // P(1·P(1)) + P(P(1)·1) = x²/2 + x²/2 = x² = P(1)·P(1)
        let ones = RationalPolynomial::one();
        let rhs: Combination = [
            (Tree::new(0, 1, 1), LambdaPoly::one()),
            (Tree::new(1, 0, 1), LambdaPoly::one()),
        ]
        .into_iter()
        .collect();
        assert!(check_combination_integral(
            Tree::new(1, 1, 0),
            &rhs,
            &ones,
            &ones
        ));
    }

    #[test]
    fn dropped_term_breaks_the_check() {
        let ones = RationalPolynomial::one();
        let rhs = Combination::of_tree(Tree::new(0, 1, 1));
        assert!(!check_combination_integral(
            Tree::new(1, 1, 0),
            &rhs,
            &ones,
            &ones
        ));
    }

    #[test]
    fn restricted_identities_hold_in_the_model() {
        let ones = RationalPolynomial::one();
        assert!(check_combination_integral(
            Tree::new(2, 1, 0),
            &restricted_identity(2, 1, 0).unwrap(),
            &ones,
            &ones
        ));
        let f = RationalPolynomial::from_integer_coeffs(&[2, 1]);
        let g = RationalPolynomial::from_integer_coeffs(&[0, 0, 1]);
        assert!(check_combination_integral(
            Tree::new(3, 2, 0),
            &restricted_identity(3, 2, 0).unwrap(),
            &f,
            &g
        ));
    }

    #[test]
    fn simplex_volumes_are_powers_of_the_interval() {
        // v_a(x,y) = (y-x)^a / a!, confirmed for the first few a by the
        // recursion itself
        let v0 = simplex_volume(0);
        assert_eq!(v0.x_coefficients(), &[RationalPolynomial::one()]);

        let v1 = simplex_volume(1);
        // y − x
        assert_eq!(
            v1.x_coefficients(),
            &[
                RationalPolynomial::x(),
                RationalPolynomial::constant(rat(-1))
            ]
        );

        let v2 = simplex_volume(2);
        // (y−x)²/2 = y²/2 − xy + x²/2
        assert_eq!(
            v2.x_coefficients(),
            &[
                RationalPolynomial::monomial(2, ratio(1, 2)),
                RationalPolynomial::monomial(1, rat(-1)),
                RationalPolynomial::constant(ratio(1, 2)),
            ]
        );
    }

    #[test]
    fn simplex_volume_normalization() {
        // total degree a, and a!·v_a has integer coefficients
        let mut factorial = BigInt::from(1);
        for a in 0..=8u32 {
            if a > 0 {
                factorial *= BigInt::from(a);
            }
            let v = simplex_volume(a);
            assert_eq!(v.total_degree(), a as usize);
            let scale = BigRational::from_integer(factorial.clone());
            for p in v.x_coefficients() {
                for c in p.coeffs() {
                    assert!((c * &scale).is_integer(), "a = {a}");
                }
            }
        }
    }

    #[test]
    fn kernel_representation_small_cases() {
        // a=1, f=1: ∫₀^y (y−x) dx = y²/2 = P²(1)(y)
        let samples: Vec<BigRational> = (1..=12).map(rat).collect();
        assert!(kernel_representation_check(1, &RationalPolynomial::one(), &samples).unwrap());

        // a=0 reduces to the definition of P
        assert!(kernel_representation_check(0, &RationalPolynomial::x(), &samples[..3]).unwrap());

        // a=3, f=x² at mixed rational samples
        let mixed: Vec<BigRational> = vec![
            rat(1),
            rat(2),
            rat(3),
            ratio(1, 2),
            rat(5),
            rat(7),
            rat(11),
        ];
        assert!(kernel_representation_check(
            3,
            &RationalPolynomial::monomial(2, rat(1)),
            &mixed
        )
        .unwrap());
    }

    #[test]
    fn kernel_check_rejects_bad_samples() {
        let f = RationalPolynomial::monomial(3, rat(1));
        let few: Vec<BigRational> = (1..=3).map(rat).collect();
        assert!(matches!(
            kernel_representation_check(5, &f, &few),
            Err(Error::InsufficientSamples { .. })
        ));
        let dup: Vec<BigRational> = (1..=12).map(|k| rat(k / 2)).collect();
        assert!(matches!(
            kernel_representation_check(1, &RationalPolynomial::one(), &dup),
            Err(Error::DuplicateSample)
        ));
    }

    #[test]
    fn rb_law_spot_checks() {
        let f = RationalPolynomial::from_integer_coeffs(&[1, -2, 0, 3]);
        let g = RationalPolynomial::from_integer_coeffs(&[4, 0, -1]);
        assert!(rb_law_holds_integral(&f, &g));
        assert!(rb_law_holds_integral(&RationalPolynomial::zero(), &g));
        // degree 6 with fractional coefficients
        let f = RationalPolynomial::new(vec![
            ratio(1, 2),
            rat(0),
            ratio(-3, 7),
            rat(2),
            rat(0),
            rat(0),
            ratio(5, 3),
        ]);
        let g = RationalPolynomial::new(vec![
            rat(-4),
            ratio(1, 6),
            rat(0),
            rat(1),
            ratio(2, 5),
            rat(-1),
            rat(3),
        ]);
        assert!(rb_law_holds_integral(&f, &g));
    }
}
