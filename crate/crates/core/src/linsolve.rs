//! 2x2 linear systems over the power-series ring.

use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// `constant + f * x + g * y = 0` with unknown series `x`, `y`.
#[derive(Clone, Debug)]
pub struct LinearEq {
    pub constant: PowerSeries,
    pub f: PowerSeries,
    pub g: PowerSeries,
}

impl LinearEq {
    pub fn new(constant: PowerSeries, f: PowerSeries, g: PowerSeries) -> Self {
        Self { constant, f, g }
    }

    /// Residual `constant + f x + g y` for candidate solutions.
    pub fn residual(&self, x: &PowerSeries, y: &PowerSeries) -> PowerSeries {
        &(&self.constant + &(&self.f * x)) + &(&self.g * y)
    }

    /// Divides the whole equation by the largest common power of `z`.
    fn normalized(&self) -> Result<Self> {
        let v = [&self.constant, &self.f, &self.g]
            .iter()
            .filter_map(|s| s.valuation())
            .min()
            .ok_or(Error::SingularSystem)?;
        Ok(Self {
            constant: self.constant.shift_div(v)?,
            f: self.f.shift_div(v)?,
            g: self.g.shift_div(v)?,
        })
    }
}

/// Solves two equations by Cramer's rule after stripping common powers of
/// `z`. Each stripped power costs one order of the result.
pub fn solve_pair(first: &LinearEq, second: &LinearEq) -> Result<(PowerSeries, PowerSeries)> {
    let e1 = first.normalized()?;
    let e2 = second.normalized()?;
    let det = &(&e1.f * &e2.g) - &(&e2.f * &e1.g);
    if det.coeff(0) == &crate::series::int(0) {
        return Err(Error::SingularSystem);
    }
    let x = (&(&e2.constant * &e1.g) - &(&e1.constant * &e2.g)).div(&det)?;
    let y = (&(&e2.f * &e1.constant) - &(&e1.f * &e2.constant)).div(&det)?;
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{int, rat};

    #[test]
    fn solves_constant_system() {
        // 1 + 2x + y = 0, -3 + x - y = 0  =>  x = 2/3, y = -7/3
        let c = |v| PowerSeries::constant(v, 3);
        let e1 = LinearEq::new(c(int(1)), c(int(2)), c(int(1)));
        let e2 = LinearEq::new(c(int(-3)), c(int(1)), c(int(-1)));
        let (x, y) = solve_pair(&e1, &e2).unwrap();
        assert_eq!(x, c(rat(2, 3)));
        assert_eq!(y, c(rat(-7, 3)));
        assert!(e1.residual(&x, &y).is_zero());
    }

    #[test]
    fn strips_common_powers_of_z() {
        // z^2 (-1 + x) = 0 and y - z x = 0
        let z2 = PowerSeries::monomial(int(1), 2, 6);
        let e1 = LinearEq::new(-&z2, z2.clone(), PowerSeries::zero(6));
        let e2 = LinearEq::new(
            PowerSeries::zero(6),
            -&PowerSeries::var(6),
            PowerSeries::one(6),
        );
        let (x, y) = solve_pair(&e1, &e2).unwrap();
        assert_eq!(x.order(), 4);
        assert_eq!(x, PowerSeries::one(4));
        assert_eq!(y, PowerSeries::var(4));
    }

    #[test]
    fn detects_singular_system() {
        let one = PowerSeries::one(3);
        let e = LinearEq::new(one.clone(), one.clone(), one.clone());
        assert_eq!(solve_pair(&e, &e).unwrap_err(), Error::SingularSystem);
        let zero = LinearEq::new(
            PowerSeries::zero(3),
            PowerSeries::zero(3),
            PowerSeries::zero(3),
        );
        assert_eq!(solve_pair(&e, &zero).unwrap_err(), Error::SingularSystem);
    }
}
