//! Four-function kernel method on the single-step graph.
//!
//! The even/odd generating functions `F_e, F_o, G_e, G_o` share the quartic
//! denominator `D(u, z)`. Its two small roots `+-s` (with `s^2 = S`) must
//! cancel from the numerators of `F_e` and `G_e`, which gives two linear
//! equations in the boundary series `f0` and `g0`. Every numerator that has
//! to vanish is even in `u`, so the work is done with `S` alone and all
//! arithmetic stays rational.

use std::fmt;

use crate::error::{Error, Result};
use crate::linsolve::{solve_pair, LinearEq};
use crate::series::{int, PowerSeries, Rational, UPoly};
use crate::walk::WalkParams;

/// Short-hand for `c * z^k` at a fixed order.
fn mono(c: Rational, k: usize, order: usize) -> PowerSeries {
    PowerSeries::monomial(c, k, order)
}

fn poly(terms: &[(Rational, usize)], order: usize) -> PowerSeries {
    terms.iter().fold(PowerSeries::zero(order), |acc, (c, k)| {
        &acc + &mono(c.clone(), *k, order)
    })
}

/// `W = sqrt((1 - z^2)(1 - z^2 (1 - 2 alpha)^2))`, the radical shared by all
/// closed forms of this pipeline.
pub fn compute_w(p: &WalkParams, order: usize) -> Result<PowerSeries> {
    let t = int(1) - int(2) * p.alpha();
    let t2 = &t * &t;
    let quartic = poly(&[(int(1), 0), (-(int(1) + &t2), 2), (t2, 4)], order);
    quartic.sqrt()
}

/// `S = (1 - sigma z^2 - W) / (2 alpha beta z^2)`, the square of the small
/// kernel root.
pub fn small_root_square(p: &WalkParams, order: usize) -> Result<PowerSeries> {
    let w = compute_w(p, order + 2)?;
    let num = &poly(&[(int(1), 0), (-p.sigma(), 2)], order + 2) - &w;
    let two_ab = int(2) * p.ab();
    Ok(num.shift_div(2)?.scale(&two_ab.recip()))
}

/// `D = -ab z^2 u^4 + (1 - sigma z^2) u^2 - ab z^2`, padded to `udeg`.
pub fn kernel_denominator(p: &WalkParams, udeg: usize, order: usize) -> UPoly {
    let ab = p.ab();
    UPoly::from_terms(
        &[
            (0, mono(-ab.clone(), 2, order)),
            (2, poly(&[(int(1), 0), (-p.sigma(), 2)], order)),
            (4, mono(-ab, 2, order)),
        ],
        udeg,
        order,
    )
}

/// `D * X = known + f0_part * f0 + g0_part * g0` for one of the four
/// generating functions.
#[derive(Clone, Debug)]
pub struct Numerator {
    pub known: UPoly,
    pub f0_part: UPoly,
    pub g0_part: UPoly,
}

impl Numerator {
    /// The full numerator once `f0` and `g0` are known.
    pub fn assemble(&self, f0: &PowerSeries, g0: &PowerSeries) -> UPoly {
        self.known
            .add(&self.f0_part.mul_series(f0))
            .add(&self.g0_part.mul_series(g0))
    }

    /// The linear equation obtained by substituting `u^2 := S`.
    fn at_small_root(&self, s: &PowerSeries) -> LinearEq {
        LinearEq::new(
            self.known.eval_even(s),
            self.f0_part.eval_even(s),
            self.g0_part.eval_even(s),
        )
    }
}

#[derive(Clone, Debug)]
pub struct QuadrantNumerators {
    pub fe: Numerator,
    pub fo: Numerator,
    pub ge: Numerator,
    pub go: Numerator,
}

/// The printed numerators of `D F_e, D F_o, D G_e, D G_o`, collected by
/// powers of `u` and simplified with `beta = 1 - alpha`.
pub fn quadrant_numerators(p: &WalkParams, udeg: usize, order: usize) -> QuadrantNumerators {
    let a = p.alpha().clone();
    let b = p.beta().clone();
    let ab = p.ab();
    let (a2, b2, b3) = (&a * &a, &b * &b, &b * &b * &b);
    let up = |terms: &[(usize, PowerSeries)]| UPoly::from_terms(terms, udeg, order);
    let m = |c: Rational, k: usize| mono(c, k, order);
    let none = || UPoly::zero(udeg, order);

    let fe = Numerator {
        known: up(&[(2, m(int(1), 0))]),
        f0_part: up(&[(0, m(-ab.clone(), 2))]),
        g0_part: up(&[(2, m(&a2 * &b, 3)), (4, m(&a * &b2, 3))]),
    };
    let fo = Numerator {
        known: up(&[(1, m(b.clone(), 1)), (3, m(a.clone(), 1))]),
        f0_part: up(&[
            (1, poly(&[(-b.clone(), 1), (b3, 3)], order)),
            (3, m(&a * &b2, 3)),
        ]),
        g0_part: up(&[(3, m(ab.clone(), 2))]),
    };
    let ge = Numerator {
        known: none(),
        f0_part: up(&[(2, m(&a * &b2, 3)), (4, m(&a2 * &b, 3))]),
        g0_part: up(&[(0, m(-ab.clone(), 2))]),
    };
    let go = Numerator {
        known: none(),
        f0_part: up(&[(3, m(ab.clone(), 2))]),
        g0_part: up(&[
            (1, poly(&[(-a.clone(), 1), (&a2 * &a, 3)], order)),
            (3, m(&a2 * &b, 3)),
        ]),
    };
    QuadrantNumerators { fe, fo, ge, go }
}

/// `f0` and `g0` to the requested order from the two small-root conditions.
pub fn solve_f0_g0_brute(p: &WalkParams, order: usize) -> Result<(PowerSeries, PowerSeries)> {
    // S loses two orders to its division by z^2, the normalized equations two more.
    let work = order + 2;
    let s = small_root_square(p, work)?;
    let nums = quadrant_numerators(p, 4, work);
    let (f0, g0) = solve_pair(&nums.fe.at_small_root(&s), &nums.ge.at_small_root(&s))?;
    Ok((f0.truncate(order), g0.truncate(order)))
}

/// State series `f_0 ..= f_max`, `g_0 ..= g_max` reconstructed forward from
/// the boundary values. All members are cut to the common final `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadrant {
    pub f: Vec<PowerSeries>,
    pub g: Vec<PowerSeries>,
    pub order: usize,
}

/// Runs the last-step recursions forwards. Each division by `z` costs one
/// order, so `f_k` and `g_k` are known to `order(f0) - k`.
pub fn quadrant_states_from_boundary(
    f0: &PowerSeries,
    g0: &PowerSeries,
    p: &WalkParams,
    max_index: usize,
) -> Result<Quadrant> {
    let order = f0.order().min(g0.order());
    assert!(
        max_index <= order,
        "max_index {max_index} exceeds series order {order}"
    );
    let a = p.alpha();
    let b = p.beta();
    let ab = p.ab();
    let (inv_a, inv_b) = (a.recip(), b.recip());
    let z = PowerSeries::var(order);
    let z2 = PowerSeries::monomial(int(1), 2, order);
    // (numerator / z) / coefficient, asserting exact cancellation.
    let step = |num: PowerSeries, inv: &Rational| -> Result<PowerSeries> {
        Ok(num.shift_div(1)?.scale(inv))
    };

    let mut f = vec![f0.truncate(order)];
    let mut g = vec![g0.truncate(order)];
    if max_index >= 1 {
        let one = PowerSeries::one(order);
        let f1 = &(&f[0] - &one) - &(&z2 * &f[0]).scale(&(b * b));
        f.push(step(f1, &inv_a)?);
        let g1 = &g[0] - &(&z2 * &g[0]).scale(&(a * a));
        g.push(step(g1, &inv_b)?);
    }
    if max_index >= 2 {
        let f2 = &(&f[1] - &(&z * &f[0]).scale(a)) - &(&z2 * &g[0]).scale(&ab);
        f.push(step(f2, &inv_b)?);
        let g2 = &(&g[1] - &(&z * &g[0]).scale(b)) - &(&z2 * &f[0]).scale(&ab);
        g.push(step(g2, &inv_a)?);
    }
    for i in 2..max_index {
        // f_i = beta z f_{i-1} + alpha z f_{i+1} for even i, roles swap for odd i;
        // the lower layer has the opposite pattern.
        let (fback, fnext, gback, gnext) = if i % 2 == 0 {
            (b, &inv_a, a, &inv_b)
        } else {
            (a, &inv_b, b, &inv_a)
        };
        let fi = &f[i] - &(&z * &f[i - 1]).scale(fback);
        let nf = step(fi, fnext)?;
        let gi = &g[i] - &(&z * &g[i - 1]).scale(gback);
        let ng = step(gi, gnext)?;
        f.push(nf);
        g.push(ng);
    }
    let common = order - max_index;
    Ok(Quadrant {
        f: f.iter().map(|s| s.truncate(common)).collect(),
        g: g.iter().map(|s| s.truncate(common)).collect(),
        order: common,
    })
}

/// Outcome of one identity check: the first failing `(u-degree, z-exponent)`
/// or `None` if it holds on the whole window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationCheck {
    pub name: &'static str,
    pub first_failure: Option<(usize, usize)>,
}

impl EquationCheck {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationReport {
    pub checks: Vec<EquationCheck>,
}

impl EquationReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(EquationCheck::holds)
    }
}

impl fmt::Display for EquationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match c.first_failure {
                None => writeln!(f, "  {:<8} ok", c.name)?,
                Some((u, k)) => writeln!(f, "  {:<8} FAIL at [u^{u} z^{k}]", c.name)?,
            }
        }
        Ok(())
    }
}

/// Assembles `F_e, F_o, G_e, G_o` from state series and checks the four
/// functional equations plus the four `D * X` numerator identities on the
/// window of `u`-degree `<= udeg`. Needs `udeg + 2` members per layer.
pub fn verify_functional_equations(
    fseq: &[PowerSeries],
    gseq: &[PowerSeries],
    p: &WalkParams,
    udeg: usize,
) -> EquationReport {
    assert!(
        fseq.len() >= udeg + 2 && gseq.len() >= udeg + 2,
        "need {} states per layer",
        udeg + 2
    );
    let order = fseq
        .iter()
        .chain(gseq)
        .map(PowerSeries::order)
        .min()
        .unwrap();
    let wide = udeg + 1;
    let parity = |seq: &[PowerSeries], even: bool| {
        let terms: Vec<_> = (0..=wide)
            .filter(|i| (i % 2 == 0) == even)
            .map(|i| (i, seq[i].truncate(order)))
            .collect();
        UPoly::from_terms(&terms, wide, order)
    };
    let (fe, fo) = (parity(fseq, true), parity(fseq, false));
    let (ge, go) = (parity(gseq, true), parity(gseq, false));
    let f0 = fseq[0].truncate(order);
    let g0 = gseq[0].truncate(order);

    let a = p.alpha();
    let b = p.beta();
    let ab = p.ab();
    let z = PowerSeries::var(order);
    let z2 = PowerSeries::monomial(int(1), 2, order);
    let constant_u = |s: PowerSeries| UPoly::from_terms(&[(0, s)], wide, order);
    let linear_u = |s: PowerSeries| UPoly::from_terms(&[(1, s)], wide, order);
    let both_sides = |x: &UPoly, up: &Rational, down: &Rational| -> UPoly {
        let raised = x.mul_u(1).mul_series(&z.scale(up));
        let lowered = x
            .div_u(1)
            .expect("odd part has no u^0 term")
            .mul_series(&z.scale(down));
        raised.add(&lowered)
    };

    let rhs_fe = both_sides(&fo, b, a).add(&constant_u(
        &PowerSeries::one(order) + &(&z2 * &f0).scale(&(b * b)),
    ));
    let fe_minus_f0 = fe.sub(&constant_u(f0.clone()));
    let rhs_fo = fe
        .mul_u(1)
        .mul_series(&z.scale(a))
        .add(
            &fe_minus_f0
                .div_u(1)
                .expect("constant term removed")
                .mul_series(&z.scale(b)),
        )
        .add(&linear_u((&z2 * &g0).scale(&ab)));
    let rhs_ge = both_sides(&go, a, b).add(&constant_u((&z2 * &g0).scale(&(a * a))));
    let ge_minus_g0 = ge.sub(&constant_u(g0.clone()));
    let rhs_go = ge
        .mul_u(1)
        .mul_series(&z.scale(b))
        .add(
            &ge_minus_g0
                .div_u(1)
                .expect("constant term removed")
                .mul_series(&z.scale(a)),
        )
        .add(&linear_u((&z2 * &f0).scale(&ab)));

    let d = kernel_denominator(p, wide, order);
    let nums = quadrant_numerators(p, wide, order);
    let checks = vec![
        EquationCheck {
            name: "F_e",
            first_failure: fe.first_difference(&rhs_fe),
        },
        EquationCheck {
            name: "F_o",
            first_failure: fo.first_difference(&rhs_fo),
        },
        EquationCheck {
            name: "G_e",
            first_failure: ge.first_difference(&rhs_ge),
        },
        EquationCheck {
            name: "G_o",
            first_failure: go.first_difference(&rhs_go),
        },
        EquationCheck {
            name: "D*F_e",
            first_failure: d.mul(&fe).first_difference(&nums.fe.assemble(&f0, &g0)),
        },
        EquationCheck {
            name: "D*F_o",
            first_failure: d.mul(&fo).first_difference(&nums.fo.assemble(&f0, &g0)),
        },
        EquationCheck {
            name: "D*G_e",
            first_failure: d.mul(&ge).first_difference(&nums.ge.assemble(&f0, &g0)),
        },
        EquationCheck {
            name: "D*G_o",
            first_failure: d.mul(&go).first_difference(&nums.go.assemble(&f0, &g0)),
        },
    ];
    EquationReport { checks }
}

/// Coefficientwise comparison of the printed radical closed forms for `f0`
/// and `g0` against the linear solve.
#[derive(Clone, Debug)]
pub struct BoundaryDiagnostic {
    pub alpha: Rational,
    pub order: usize,
    pub f0_solved: PowerSeries,
    pub g0_solved: PowerSeries,
    /// `Err` when the printed expression is not even a power series.
    pub f0_printed: std::result::Result<PowerSeries, Error>,
    pub g0_printed: std::result::Result<PowerSeries, Error>,
}

impl BoundaryDiagnostic {
    fn status(solved: &PowerSeries, printed: &std::result::Result<PowerSeries, Error>) -> String {
        match printed {
            Err(e) => format!("MISMATCH (printed form is not a power series: {e})"),
            Ok(s) => match solved.first_difference(s) {
                None => format!("MATCH to order {}", solved.order().min(s.order())),
                Some(k) => format!("MISMATCH at z^{k}"),
            },
        }
    }

    pub fn f0_status(&self) -> String {
        Self::status(&self.f0_solved, &self.f0_printed)
    }

    pub fn g0_status(&self) -> String {
        Self::status(&self.g0_solved, &self.g0_printed)
    }

    pub fn matches(&self) -> bool {
        self.f0_status().starts_with("MATCH") && self.g0_status().starts_with("MATCH")
    }
}

impl fmt::Display for BoundaryDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "printed boundary closed forms at alpha = {}", self.alpha)?;
        writeln!(
            f,
            "  {:>3}  {:>28}  {:>28}  {:>28}  {:>28}",
            "k", "f0 solved", "f0 printed", "g0 solved", "g0 printed"
        )?;
        let show = |s: &std::result::Result<PowerSeries, Error>, k: usize| match s {
            Ok(s) if k <= s.order() => s.coeff(k).to_string(),
            _ => "-".to_string(),
        };
        for k in 0..=self.order {
            writeln!(
                f,
                "  {:>3}  {:>28}  {:>28}  {:>28}  {:>28}",
                k,
                self.f0_solved.coeff(k).to_string(),
                show(&self.f0_printed, k),
                self.g0_solved.coeff(k).to_string(),
                show(&self.g0_printed, k),
            )?;
        }
        writeln!(f, "  f0: {}", self.f0_status())?;
        writeln!(f, "  g0: {}", self.g0_status())
    }
}

/// Evaluates the printed radical expressions for `f0` and `g0` as series,
/// reading the token `aW` in them as `alpha * W`.
pub fn diagnostic_printed_boundary(p: &WalkParams, order: usize) -> Result<BoundaryDiagnostic> {
    let (f0_solved, g0_solved) = solve_f0_g0_brute(p, order)?;
    let work = order + 7;
    let a = p.alpha().clone();
    let (a2, a3) = (&a * &a, &a * &a * &a);
    let w = compute_w(p, work)?;
    let pz = |terms: &[(Rational, usize)]| poly(terms, work);
    let wz2 = w.shift_mul(2).truncate(work);

    // -3z^4a^2 + a^2Wz^2 + 3z^2a^2 + 3z^4a - aWz^2 - 3z^2a - z^4 + Wz^2 + 2z^2 - 1 - W
    let x = &(&pz(&[
        (-int(3) * &a2, 4),
        (int(3) * &a2, 2),
        (int(3) * &a, 4),
        (-int(3) * &a, 2),
        (int(-1), 4),
        (int(2), 2),
        (int(-1), 0),
    ]) + &wz2.scale(&(&a2 - &a + int(1))))
        - &w;
    // 2z^2a^2 - 2z^2a + z^2 - 1 + W
    let y = &pz(&[(int(2) * &a2 - int(2) * &a + int(1), 2), (int(-1), 0)]) + &w;
    // -z^4a^2 + 2z^4a^3 + 1 - 3z^2a^2 - W + a^2Wz^2 - z^2 + 2z^2a
    let zf = &(&pz(&[
        (-a2.clone() + int(2) * &a3, 4),
        (int(1), 0),
        (-int(3) * &a2 - int(1) + int(2) * &a, 2),
    ]) - &w)
        + &wz2.scale(&a2);
    // (-1 + z)(z + 1)(-1 + z^2 - 3z^2a + 3z^2a^2)
    let common = &pz(&[(int(-1), 0), (int(1), 2)])
        * &pz(&[(int(-1), 0), (int(1) - int(3) * &a + int(3) * &a2, 2)]);
    let am1 = &a - int(1);
    let am1_2 = &am1 * &am1;

    let xi1 = &x * &y;
    let f0_printed = xi1
        .shift_div(4)
        .and_then(|n| n.div(&common.truncate(work - 4)))
        .map(|s| s.scale(&(int(4) * &a2 * &am1_2).recip()).truncate(order));
    let xi2 = &(&x * &zf) * &y;
    let g0_printed = xi2
        .shift_div(7)
        .and_then(|n| n.div(&common.truncate(work - 7)))
        .map(|s| {
            s.scale(&(int(8) * &am1_2 * &am1_2 * &a3).recip())
                .truncate(order)
        });

    Ok(BoundaryDiagnostic {
        alpha: a,
        order,
        f0_solved,
        g0_solved,
        f0_printed,
        g0_printed,
    })
}
