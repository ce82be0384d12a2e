//! Named problems accepted wherever a problem file is expected.

use vecopt_core::{Expr, FeasibleSet, Problem};

pub const NAMES: [&str; 6] = ["ex41", "sin", "quadratic", "linear2", "remark41", "identity"];

fn x(i: usize) -> Expr {
    Expr::var(i)
}

/// `ex41`: `(-x^2, x)` on `[0, inf)`. `sin`: `sin x`. `quadratic`: `x^2`.
/// `linear2`: `x1 + x2`. `remark41`: `(x, x^2)`. `identity`: `x`.
pub fn builtin(name: &str) -> Option<Problem> {
    let p = match name {
        "ex41" => Problem::new(1, vec![-(x(0).powi(2)), x(0)], FeasibleSet::half_line(0.0)),
        "sin" => Problem::new(1, vec![x(0).sin()], FeasibleSet::Full),
        "quadratic" => Problem::new(1, vec![x(0).powi(2)], FeasibleSet::Full),
        "linear2" => Problem::new(2, vec![x(0) + x(1)], FeasibleSet::Full),
        "remark41" => Problem::new(1, vec![x(0), x(0).powi(2)], FeasibleSet::Full),
        "identity" => Problem::new(1, vec![x(0)], FeasibleSet::Full),
        _ => return None,
    };
    Some(p.expect("builtin problems are valid"))
}
