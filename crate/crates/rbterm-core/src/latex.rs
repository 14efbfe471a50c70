//! LaTeX rendering of trees, coefficients, and whole identities.
//!
//! Trees render either as the bare symbol `T(a,b,c)` or, with operator
//! notation, as the expression they name: `T(2,0,1)` becomes
//! `P(P^{2}(x)y)`. The symbol carries both meanings, so the choice is the
//! caller's.

use crate::term::{Combination, LambdaPoly, Tree};

/// `T(a,b,c)` as a LaTeX symbol.
pub fn tree_symbol(t: Tree) -> String {
    format!("T({},{},{})", t.a, t.b, t.c)
}

fn apply_p(arg: &str, times: u32) -> String {
    match times {
        0 => arg.to_string(),
        1 => format!("P({arg})"),
        k => format!("P^{{{k}}}({arg})"),
    }
}

/// The operator expression `P^c(P^a(x)P^b(y))`, with unit powers flattened:
/// `T(1,1,0)` renders as `P(x)P(y)`.
pub fn tree_operator(t: Tree) -> String {
    let inner = format!("{}{}", apply_p("x", t.a), apply_p("y", t.b));
    apply_p(&inner, t.c)
}

fn lambda_monomial(exponent: u32, magnitude: &str) -> String {
    let power = match exponent {
        0 => String::new(),
        1 => "\\lambda".to_string(),
        e => format!("\\lambda^{{{e}}}"),
    };
    if magnitude == "1" && exponent > 0 {
        power
    } else {
        format!("{magnitude}{power}")
    }
}

/// Coefficient as LaTeX plus whether it needs parentheses before a tree.
fn poly_latex(p: &LambdaPoly) -> (String, bool) {
    if p.is_zero() {
        return ("0".to_string(), false);
    }
    let rendered: Vec<String> = p
        .terms()
        .iter()
        .map(|(e, n)| lambda_monomial(*e, &n.to_string()))
        .collect();
    let multi = rendered.len() > 1;
    (rendered.join(" + "), multi)
}

/// A combination as a LaTeX sum of weighted trees.
pub fn combination_latex(u: &Combination, operator_notation: bool) -> String {
    if u.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::with_capacity(u.len());
    for (t, p) in u.iter() {
        let tree = if operator_notation {
            tree_operator(*t)
        } else {
            tree_symbol(*t)
        };
        let (coeff, needs_parens) = poly_latex(p);
        let part = if coeff == "1" {
            tree
        } else if needs_parens {
            format!("\\left({coeff}\\right) {tree}")
        } else {
            format!("{coeff} {tree}")
        };
        parts.push(part);
    }
    parts.join(" + ")
}

/// A full identity `lhs = rhs`.
pub fn identity_latex(lhs: Tree, rhs: &Combination, operator_notation: bool) -> String {
    let left = if operator_notation {
        tree_operator(lhs)
    } else {
        tree_symbol(lhs)
    };
    format!("{left} = {}", combination_latex(rhs, operator_notation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::normal_form;

    #[test]
    fn operator_notation_flattens_unit_powers() {
        assert_eq!(tree_operator(Tree::new(1, 1, 0)), "P(x)P(y)");
        assert_eq!(tree_operator(Tree::new(2, 0, 1)), "P(P^{2}(x)y)");
        assert_eq!(tree_operator(Tree::new(0, 0, 2)), "P^{2}(xy)");
        assert_eq!(tree_operator(Tree::new(0, 1, 1)), "P(xP(y))");
    }

    #[test]
    fn worked_identity_renders_in_both_notations() {
        let nf = normal_form(Tree::new(2, 1, 0)).unwrap();
        assert_eq!(
            identity_latex(Tree::new(2, 1, 0), &nf, false),
            "T(2,1,0) = \\lambda T(0,0,2) + T(0,1,2) + \\lambda T(1,0,1) + T(1,0,2) + T(2,0,1)"
        );
        assert_eq!(
            identity_latex(Tree::new(2, 1, 0), &nf, true),
            "P^{2}(x)P(y) = \\lambda P^{2}(xy) + P^{2}(xP(y)) + \\lambda P(P(x)y) + \
             P^{2}(P(x)y) + P(P^{2}(x)y)"
        );
    }

    #[test]
    fn multi_term_coefficients_get_parentheses() {
        let p = &LambdaPoly::lambda() + &LambdaPoly::monomial(2, 1);
        let u = Combination::singleton(Tree::new(0, 1, 2), p);
        assert_eq!(
            combination_latex(&u, false),
            "\\left(\\lambda + \\lambda^{2}\\right) T(0,1,2)"
        );
    }
}
