//! Cross-validation of every route against the Markov-chain evolution.

use std::fmt;

use num_traits::One;

use crate::asympt::{expected_end_exact, expected_end_half_closed};
use crate::double_kernel::{double_kernel_denominator, kernel_root_r2, DoubleKernel};
use crate::error::Result;
use crate::odd::odd_from_even;
use crate::quadrant::{
    diagnostic_printed_boundary, kernel_denominator, quadrant_states_from_boundary,
    small_root_square, solve_f0_g0_brute, verify_functional_equations,
};
use crate::series::{rat, PowerSeries, Rational};
use crate::vsubst::{
    closed_forms, substitution_map, transfer_coeff_with, transfer_series, TransferExponent,
};
use crate::walk::{
    evolve, evolve_double, expected_end_series, single_step, DoubleStateId, StateDist, StateId,
    WalkParams,
};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Order in double steps of every compared series.
    pub order: usize,
    /// Largest double-step index `j` of `F_j`, `G_j` compared.
    pub max_index: usize,
    /// Perturbs one reference coefficient so that the run must fail.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            order: 32,
            max_index: 8,
            inject_fault: false,
        }
    }
}

/// Result of one identity at one `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub alpha: Rational,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// Informational lines that do not decide the outcome.
    pub diagnostics: Vec<String>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            writeln!(
                f,
                "{mark} alpha={:<6} {:<40} {}",
                c.alpha.to_string(),
                c.name,
                c.detail
            )?;
        }
        for d in &self.diagnostics {
            writeln!(f, "note {d}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        writeln!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Collects checks for one `alpha`.
struct Recorder<'a> {
    alpha: Rational,
    report: &'a mut VerifyReport,
}

impl Recorder<'_> {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.report.checks.push(Check {
            name: name.into(),
            alpha: self.alpha.clone(),
            passed,
            detail: detail.into(),
        });
    }

    /// Compares labelled series pairs, reporting the first differing coefficient.
    fn series(&mut self, name: &str, pairs: &[(String, &PowerSeries, &PowerSeries)]) {
        let failure = pairs
            .iter()
            .find_map(|(label, a, b)| a.first_difference(b).map(|k| (label, k, a, b)));
        match failure {
            None => {
                let order = pairs
                    .iter()
                    .map(|(_, a, b)| a.order().min(b.order()))
                    .min()
                    .unwrap_or(0);
                self.push(
                    name,
                    true,
                    format!("{} series agree to order {order}", pairs.len()),
                );
            }
            Some((label, k, a, b)) => self.push(
                name,
                false,
                format!("{label} differs at z^{k}: {} vs {}", a.coeff(k), b.coeff(k)),
            ),
        }
    }
}

/// `[z^m] double = [z^(2m)] single` as a series of order `order`.
fn even_part(single: &PowerSeries, order: usize) -> PowerSeries {
    PowerSeries::from_coeffs((0..=order).map(|m| single.coeff(2 * m).clone()).collect())
}

/// Runs every identity at each `alpha`.
pub fn verify(alphas: &[WalkParams], opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for p in alphas {
        verify_one(p, opts, &mut report)?;
    }
    Ok(report)
}

fn verify_one(p: &WalkParams, opts: &VerifyOptions, report: &mut VerifyReport) -> Result<()> {
    let order = opts.order;
    let jmax = opts.max_index;
    let single_order = 2 * order;
    let mut rec = Recorder {
        alpha: p.alpha().clone(),
        report,
    };

    // Reference data from the chain.
    let singles = evolve(single_order + 1, p);
    let doubles = evolve_double(order, p);
    let dp_single = |s: StateId| {
        PowerSeries::from_coeffs(singles[..=single_order].iter().map(|d| d.get(s)).collect())
    };
    let dp_double =
        |s: DoubleStateId| PowerSeries::from_coeffs(doubles.iter().map(|d| d.get(s)).collect());
    let mut dp_f: Vec<_> = (0..=jmax).map(|j| dp_double(DoubleStateId::F(j))).collect();
    let dp_g: Vec<_> = (0..=jmax).map(|j| dp_double(DoubleStateId::G(j))).collect();
    let dp_q = dp_double(DoubleStateId::Q);
    if opts.inject_fault {
        let k = order.min(3);
        let bumped = dp_f[0].coeff(k) + rat(1, 1000);
        dp_f[0].set_coeff(k, bumped);
    }

    // Four-function kernel solve.
    let (f0, g0) = solve_f0_g0_brute(p, single_order)?;
    let (dp_f0, dp_g0) = (dp_single(StateId::Top(0)), dp_single(StateId::Bottom(0)));
    rec.series(
        "single-step boundary: solve vs chain",
        &[("f0".into(), &f0, &dp_f0), ("g0".into(), &g0, &dp_g0)],
    );
    let top = 2 * jmax + 1;
    let (wf0, wg0) = solve_f0_g0_brute(p, single_order + top)?;
    let quad = quadrant_states_from_boundary(&wf0, &wg0, p, top)?;
    let quad_f: Vec<_> = (0..=jmax)
        .map(|j| even_part(&quad.f[2 * j], order))
        .collect();
    let quad_g: Vec<_> = (0..=jmax)
        .map(|j| even_part(&quad.g[2 * j + 1], order))
        .collect();
    let mut pairs = Vec::new();
    for j in 0..=jmax {
        pairs.push((format!("F{j}"), &quad_f[j], &dp_f[j]));
        pairs.push((format!("G{j}"), &quad_g[j], &dp_g[j]));
    }
    rec.series("four-function solve + reconstruction", &pairs);

    // Functional equations on the chain's own series.
    let udeg = 8;
    let fseq: Vec<_> = (0..udeg + 2).map(|i| dp_single(StateId::Top(i))).collect();
    let gseq: Vec<_> = (0..udeg + 2)
        .map(|i| dp_single(StateId::Bottom(i)))
        .collect();
    let eqs = verify_functional_equations(&fseq, &gseq, p, udeg);
    let detail = match eqs.checks.iter().find(|c| c.first_failure.is_some()) {
        None => format!("{} identities hold to u^{udeg}", eqs.checks.len()),
        Some(c) => {
            let (u, z) = c.first_failure.unwrap();
            format!("{} fails at u^{u} z^{z}", c.name)
        }
    };
    rec.push("functional equations", eqs.all_hold(), detail);

    // Double-step kernel.
    let dk = DoubleKernel::new(p, order)?;
    let k_f: Vec<_> = (0..=jmax).map(|j| dk.f(j)).collect::<Result<_>>()?;
    let k_g: Vec<_> = (0..=jmax).map(|j| dk.g(j)).collect::<Result<_>>()?;
    let k_q = dk.q();
    let mut pairs = vec![("Q".to_string(), &k_q, &dp_q)];
    for j in 0..=jmax {
        pairs.push((format!("F{j}"), &k_f[j], &dp_f[j]));
        pairs.push((format!("G{j}"), &k_g[j], &dp_g[j]));
    }
    rec.series("double-step kernel + root powers", &pairs);

    // Closed forms in v, transferred to z.
    let cf = closed_forms(p);
    let c_f: Vec<_> = (0..=jmax)
        .map(|j| transfer_series(&cf.coeff_f(j), order, p))
        .collect();
    let c_g: Vec<_> = (0..=jmax)
        .map(|j| transfer_series(&cf.coeff_g(j), order, p))
        .collect();
    let c_q = transfer_series(&cf.q(), order, p);
    let mut pairs = vec![("Q".to_string(), &c_q, &dp_q)];
    for j in 0..=jmax {
        pairs.push((format!("F{j}"), &c_f[j], &dp_f[j]));
        pairs.push((format!("G{j}"), &c_g[j], &dp_g[j]));
    }
    rec.series("closed forms + coefficient transfer", &pairs);

    // Kernel identities.
    let s = small_root_square(p, order)?;
    let d_at_s = kernel_denominator(p, 4, order).eval_even(&s);
    rec.push(
        "four-function kernel at small root",
        d_at_s.is_zero(),
        match d_at_s.valuation() {
            None => format!("vanishes to order {order}"),
            Some(k) => format!("nonzero at z^{k}"),
        },
    );
    let r2 = kernel_root_r2(p, order)?;
    let k_at_r2 = double_kernel_denominator(p, order).eval(&r2);
    rec.push(
        "double-step kernel at r2",
        k_at_r2.is_zero(),
        match k_at_r2.valuation() {
            None => format!("vanishes to order {order}"),
            Some(k) => format!("nonzero at z^{k}"),
        },
    );
    let long = 2 * order;
    let composed = kernel_root_r2(p, long)?.compose(&substitution_map(p).to_series(long))?;
    let v = PowerSeries::var(long);
    rec.series("r2(z(v)) = v", &[("r2(z(v))".into(), &composed, &v)]);

    // Transfer exponent.
    let at_zero = transfer_coeff_with(&cf.f0, 0, p, TransferExponent::Derived);
    let printed = transfer_coeff_with(&cf.f0, 0, p, TransferExponent::Printed);
    rec.push(
        "transfer exponent N-1 gives f0(0) = 1",
        at_zero.is_one() && printed == p.ab(),
        format!("N-1: {at_zero}, N: {printed}"),
    );

    // Expected end.
    let ee_dp = expected_end_series(order, p);
    let ee_closed = expected_end_exact(order, p);
    let mut pairs = vec![("v closed form".to_string(), &ee_closed, &ee_dp)];
    let half = if *p.alpha() == rat(1, 2) {
        Some(expected_end_half_closed(order)?)
    } else {
        None
    };
    if let Some(h) = &half {
        pairs.push(("z closed form".to_string(), h, &ee_dp));
    }
    rec.series("expected end", &pairs);

    // Odd steps and double steps against single steps.
    let mut odd_fail = None;
    let mut sources: Vec<StateDist> = singles
        .iter()
        .filter(|d| d.step() % 2 == 0)
        .cloned()
        .collect();
    sources.extend((0..=single_order).map(|i| {
        StateDist::point(
            if i % 2 == 0 {
                StateId::Top(i)
            } else {
                StateId::Bottom(i)
            },
            0,
        )
    }));
    sources.push(StateDist::point(StateId::ExtraQ, 0));
    for d in &sources {
        if !odd_from_even(d, p)?.same_masses(&single_step(d, p)) {
            odd_fail = Some(d.step());
            break;
        }
    }
    rec.push(
        "odd step from even step",
        odd_fail.is_none(),
        match odd_fail {
            None => format!("{} distributions", sources.len()),
            Some(step) => format!("differs from one step at step {step}"),
        },
    );
    let squared = doubles
        .iter()
        .enumerate()
        .find(|(m, d)| !d.to_single().same_masses(&singles[2 * m]));
    rec.push(
        "double step = two single steps",
        squared.is_none(),
        match squared {
            None => format!("{} double steps", doubles.len() - 1),
            Some((m, _)) => format!("differs at double step {m}"),
        },
    );
    let stochastic = singles.iter().all(|d| d.is_valid() && d.total().is_one());
    rec.push(
        "stochasticity",
        stochastic,
        format!("{} steps", singles.len() - 1),
    );

    match diagnostic_printed_boundary(p, order) {
        Ok(d) => rec.report.diagnostics.push(format!(
            "alpha={} printed radical forms: f0 {}, g0 {}",
            p.alpha(),
            d.f0_status(),
            d.g0_status()
        )),
        Err(e) => rec.report.diagnostics.push(format!(
            "alpha={} printed radical forms: MISMATCH ({e})",
            p.alpha()
        )),
    }
    Ok(())
}
