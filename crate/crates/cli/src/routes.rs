use knodel_core::double_kernel::DoubleKernel;
use knodel_core::odd::single_series_from_double;
use knodel_core::quadrant::{quadrant_states_from_boundary, solve_f0_g0_brute, Quadrant};
use knodel_core::series::{int, PowerSeries};
use knodel_core::vsubst::{closed_forms, transfer_series};
use knodel_core::walk::{double_state_series, state_series, DoubleStateId, StateId, WalkParams};
use knodel_core::Result;

use crate::args::Method;

/// Single-step series `f_0 ..= f_max`, `g_0 ..= g_max` to `order`.
fn quadrant(p: &WalkParams, max_index: usize, order: usize) -> Result<Quadrant> {
    let (f0, g0) = solve_f0_g0_brute(p, order + max_index)?;
    quadrant_states_from_boundary(&f0, &g0, p, max_index)
}

fn even_part(single: &PowerSeries, order: usize) -> PowerSeries {
    PowerSeries::from_coeffs((0..=order).map(|m| single.coeff(2 * m).clone()).collect())
}

/// Double-step generating functions from one method, built lazily.
struct DoubleSource<'a> {
    method: Method,
    p: &'a WalkParams,
    order: usize,
    kernel: Option<DoubleKernel>,
}

impl<'a> DoubleSource<'a> {
    fn new(method: Method, p: &'a WalkParams, order: usize) -> Self {
        Self {
            method,
            p,
            order,
            kernel: None,
        }
    }

    fn series(&mut self, target: DoubleStateId) -> Result<PowerSeries> {
        let (p, order) = (self.p, self.order);
        match self.method {
            Method::Dp => Ok(double_state_series(target, order, p)),
            Method::Kernel2 => match target {
                DoubleStateId::Q => {
                    // Q = z ab G_0 / (1 - z a^2)
                    let g0 = self.series(DoubleStateId::G(0))?;
                    let lin = PowerSeries::from_poly(&[int(1), -(p.alpha() * p.alpha())], order);
                    (&PowerSeries::var(order) * &g0).scale(&p.ab()).div(&lin)
                }
                _ => {
                    let i = target.to_single();
                    let idx = target.index();
                    let quad = quadrant(p, idx, 2 * order)?;
                    let single = match i {
                        StateId::Top(_) => &quad.f[idx],
                        _ => &quad.g[idx],
                    };
                    Ok(even_part(single, order))
                }
            },
            Method::Kernel3 => {
                if self.kernel.is_none() {
                    self.kernel = Some(DoubleKernel::new(p, order)?);
                }
                let dk = self.kernel.as_ref().unwrap();
                match target {
                    DoubleStateId::F(j) => dk.f(j),
                    DoubleStateId::G(j) => dk.g(j),
                    DoubleStateId::Q => Ok(dk.q()),
                }
            }
            Method::Closed => {
                let cf = closed_forms(p);
                let h = match target {
                    DoubleStateId::F(j) => cf.coeff_f(j),
                    DoubleStateId::G(j) => cf.coeff_g(j),
                    DoubleStateId::Q => cf.q(),
                };
                Ok(transfer_series(&h, order, p))
            }
        }
    }
}

/// Generating function of `target` in double steps, to `order`.
pub fn double_series(
    method: Method,
    target: DoubleStateId,
    order: usize,
    p: &WalkParams,
) -> Result<PowerSeries> {
    DoubleSource::new(method, p, order).series(target)
}

/// Generating function of `target` in single steps, to `steps`.
///
/// Methods working in double steps reach odd times through the last-step
/// relations.
pub fn single_series(
    method: Method,
    target: StateId,
    steps: usize,
    p: &WalkParams,
) -> Result<PowerSeries> {
    match (method, target) {
        (Method::Dp, _) => Ok(state_series(target, steps, p)),
        (Method::Kernel2, StateId::Top(i) | StateId::Bottom(i)) => {
            let quad = quadrant(p, i, steps)?;
            Ok(match target {
                StateId::Top(_) => quad.f[i].clone(),
                _ => quad.g[i].clone(),
            })
        }
        _ => {
            let mut source = DoubleSource::new(method, p, steps / 2);
            let mut failure = None;
            let s = single_series_from_double(target, steps, p, |d| match source.series(d) {
                Ok(s) => s,
                Err(e) => {
                    failure.get_or_insert(e);
                    PowerSeries::zero(steps / 2)
                }
            });
            match failure {
                Some(e) => Err(e),
                None => Ok(s),
            }
        }
    }
}
