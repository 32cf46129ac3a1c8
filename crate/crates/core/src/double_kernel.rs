//! Kernel method on the double-step chain.
//!
//! Two steps at a time the alternation of `alpha` and `beta` evens out and
//! the two layer generating functions `F(u)`, `G(u)` share a quadratic kernel
//! with roots `r2` (small, a power series) and `r1 = 1 / r2`. The Laurent
//! object `r1` is never formed: every relation containing it is multiplied
//! through by `r2` first.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linsolve::{solve_pair, LinearEq};
use crate::series::{int, PowerSeries, UPoly};
use crate::walk::WalkParams;

/// The small kernel root `r2(z)`, with `r2(0) = 0` and leading term `ab z`.
pub fn kernel_root_r2(p: &WalkParams, order: usize) -> Result<PowerSeries> {
    let t = int(1) - int(2) * p.alpha();
    let work = order + 1;
    // (1 - z)(1 - (1 - 2 alpha)^2 z), equal to the printed radicand.
    let disc = &PowerSeries::from_poly(&[int(1), int(-1)], work)
        * &PowerSeries::from_poly(&[int(1), -(&t * &t)], work);
    let num = &PowerSeries::from_poly(&[int(1), -p.sigma()], work) - &disc.sqrt()?;
    let q = num.shift_div(1)?;
    if !q.coeff(0).is_zero() {
        return Err(Error::InexactCancellation {
            index: 1,
            value: q.coeff(0).clone(),
        });
    }
    Ok(q.scale(&(int(2) * p.ab()).recip()))
}

/// The printed kernel
/// `u - 2uz a^2 - z ab u^2 + z^2 a^3 b u^2 - z ab + z^2 a^3 b + z^2 u a^4 - z u b^2 + z^2 u b^2 a^2`
/// as a quadratic in `u`.
pub fn double_kernel_denominator(p: &WalkParams, order: usize) -> UPoly {
    let a = p.alpha();
    let b = p.beta();
    let ab = p.ab();
    let a2 = a * a;
    let outer = PowerSeries::from_poly(&[int(0), -ab.clone(), &a2 * &ab], order);
    let middle = PowerSeries::from_poly(
        &[int(1), -(int(2) * &a2 + b * b), &a2 * &a2 + &a2 * b * b],
        order,
    );
    UPoly::new(vec![outer.clone(), middle, outer])
}

/// `z ab (-1 + z a^2)`, the leading factor of the kernel.
pub fn kernel_lead(p: &WalkParams, order: usize) -> PowerSeries {
    let ab = p.ab();
    PowerSeries::from_poly(&[int(0), -ab.clone(), &ab * p.alpha() * p.alpha()], order)
}

/// `1 - z alpha^2`
fn one_minus_za2(p: &WalkParams, order: usize) -> PowerSeries {
    PowerSeries::from_poly(&[int(1), -(p.alpha() * p.alpha())], order)
}

/// Boundary series of the double-step chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleBoundary {
    pub f0: PowerSeries,
    pub g0: PowerSeries,
    /// Generating function of the extra state `Q`.
    pub fq: PowerSeries,
}

/// The two `u = 0` relations, multiplied through by `r2`:
///
/// ```text
/// z ab (1 - z a^2) f0 = r2 ((1 - z a^2) + z^2 a b^2 (a + b r2) g0)
/// (1 - z a^2) g0      = r2 ((1 - z a^2) f0 - z ab g0)
/// ```
fn boundary_equations(p: &WalkParams, r2: &PowerSeries) -> (LinearEq, LinearEq) {
    let order = r2.order();
    let ab = p.ab();
    let b = p.beta();
    let lin = one_minus_za2(p, order);
    let z = PowerSeries::var(order);
    let a_plus_br2 = &PowerSeries::constant(p.alpha().clone(), order) + &r2.scale(b);
    let g_coeff =
        (&(&PowerSeries::monomial(int(1), 2, order) * &a_plus_br2) * r2).scale(&(&ab * b));
    let first = LinearEq::new(-&(r2 * &lin), (&z * &lin).scale(&ab), -&g_coeff);
    let second = LinearEq::new(
        PowerSeries::zero(order),
        -&(r2 * &lin),
        &lin - &(&z * r2).scale(&ab),
    );
    (first, second)
}

/// Solves the `u = 0` relations for `f0`, `g0` and derives `fQ`.
pub fn solve_f0_g0_double(p: &WalkParams, order: usize) -> Result<DoubleBoundary> {
    let r2 = kernel_root_r2(p, order + 1)?;
    let (e1, e2) = boundary_equations(p, &r2);
    let (f0, g0) = solve_pair(&e1, &e2)?;
    let (f0, g0) = (f0.truncate(order), g0.truncate(order));
    let fq = (&PowerSeries::var(order) * &g0)
        .scale(&p.ab())
        .div(&one_minus_za2(p, order))?;
    Ok(DoubleBoundary { f0, g0, fq })
}

/// Residuals of the two `u = 0` relations for candidate boundary series.
pub fn boundary_residuals(
    p: &WalkParams,
    r2: &PowerSeries,
    f0: &PowerSeries,
    g0: &PowerSeries,
) -> (PowerSeries, PowerSeries) {
    let (e1, e2) = boundary_equations(p, r2);
    (e1.residual(f0, g0), e2.residual(f0, g0))
}

/// `[u^j] F` from powers of `r2`:
///
/// ```text
/// [u^j] F = r2^(j+1) N / (z ab (1 - z a^2)) + [j >= 1] r2^j z b^2 g0 / (1 - z a^2)
/// ```
///
/// with `N = (1 - z a^2) + z^2 a b^2 (a + b r2) g0`. The result is one order
/// shorter than the inputs because of an exact division by `z`.
pub fn state_coeff_f(
    j: usize,
    b: &DoubleBoundary,
    r2: &PowerSeries,
    p: &WalkParams,
) -> Result<PowerSeries> {
    let order = b.f0.order().min(b.g0.order()).min(r2.order());
    let (g0, r2) = (b.g0.truncate(order), r2.truncate(order));
    let beta = p.beta();
    let ab = p.ab();
    let lin = one_minus_za2(p, order);
    let bracket = &lin
        + &(&(&PowerSeries::monomial(int(1), 2, order)
            * &(&PowerSeries::constant(p.alpha().clone(), order) + &r2.scale(beta)))
            * &g0)
            .scale(&(&ab * beta));
    let rj = r2.pow(j);
    let first = (&(&rj * &r2) * &bracket).shift_div(1)?.scale(&ab.recip());
    let lin = lin.truncate(order - 1);
    if j == 0 {
        // The u-linear part of the numerator only reaches u^1 and above.
        return first.div(&lin);
    }
    let second = (&(&rj * &g0) * &PowerSeries::var(order)).scale(&(beta * beta));
    (&first + &second.truncate(order - 1)).div(&lin)
}

/// `[u^j] G = ((1 - z a^2) f0 + z ab g0) r2^(j+1) / (1 - z a^2)`.
pub fn state_coeff_g(
    j: usize,
    b: &DoubleBoundary,
    r2: &PowerSeries,
    p: &WalkParams,
) -> Result<PowerSeries> {
    let order = b.f0.order().min(b.g0.order()).min(r2.order());
    let (f0, g0, r2) = (
        b.f0.truncate(order),
        b.g0.truncate(order),
        r2.truncate(order),
    );
    let lin = one_minus_za2(p, order);
    let head = &(&lin * &f0) + &(&PowerSeries::var(order) * &g0).scale(&p.ab());
    (&head * &r2.pow(j + 1)).div(&lin)
}

/// All double-step data for one `alpha` at a fixed output order.
#[derive(Clone, Debug)]
pub struct DoubleKernel {
    pub params: WalkParams,
    pub order: usize,
    pub r2: PowerSeries,
    pub boundary: DoubleBoundary,
}

impl DoubleKernel {
    pub fn new(p: &WalkParams, order: usize) -> Result<Self> {
        let boundary = solve_f0_g0_double(p, order + 1)?;
        let r2 = kernel_root_r2(p, order + 1)?;
        Ok(Self {
            params: p.clone(),
            order,
            r2,
            boundary,
        })
    }

    /// Probability generating function of `Top(2j)` in double steps.
    pub fn f(&self, j: usize) -> Result<PowerSeries> {
        Ok(state_coeff_f(j, &self.boundary, &self.r2, &self.params)?.truncate(self.order))
    }

    /// Probability generating function of `Bottom(2j + 1)` in double steps.
    pub fn g(&self, j: usize) -> Result<PowerSeries> {
        Ok(state_coeff_g(j, &self.boundary, &self.r2, &self.params)?.truncate(self.order))
    }

    pub fn q(&self) -> PowerSeries {
        self.boundary.fq.truncate(self.order)
    }
}

/// `[z^m] double == [z^(2m)] single` for every `m` both series know.
pub fn even_part_matches(double: &PowerSeries, single: &PowerSeries) -> bool {
    let m_max = double.order().min(single.order() / 2);
    (0..=m_max).all(|m| double.coeff(m) == single.coeff(2 * m))
}

/// Compares the double-step `F_j`, `G_j` with the single-step `f_{2j}`,
/// `g_{2j+1}` produced by the four-function pipeline.
pub fn crosscheck_four_function(j: usize, p: &WalkParams, order: usize) -> Result<bool> {
    let dk = DoubleKernel::new(p, order)?;
    let max_index = 2 * j + 1;
    let (f0, g0) = crate::quadrant::solve_f0_g0_brute(p, 2 * order + max_index)?;
    let quad = crate::quadrant::quadrant_states_from_boundary(&f0, &g0, p, max_index)?;
    Ok(even_part_matches(&dk.f(j)?, &quad.f[2 * j])
        && even_part_matches(&dk.g(j)?, &quad.g[2 * j + 1]))
}
