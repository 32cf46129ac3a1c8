//! Closed forms under the substitution `z = v / ((alpha + beta v)(beta + alpha v))`.
//!
//! After the substitution the kernel root `r2` becomes `v` itself and every
//! generating function of the double-step chain is rational in `v`. Going
//! back to `z`-coefficients uses the residue computation
//!
//! ```text
//! [z^N] H = [v^N] ab (1 - v^2) (alpha + beta v)^(N-1) (beta + alpha v)^(N-1) H(v)
//! ```
//!
//! which follows from `dz = ab (1 - v^2) / D(v)^2 dv` with
//! `D(v) = (alpha + beta v)(beta + alpha v)`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::{int, Poly, PowerSeries, Rational};
use crate::walk::WalkParams;

/// Ratio of two polynomials in `v` with `den(0) != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFnV {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFnV {
    /// Panics if `den(0) = 0`: such a function has no power-series expansion.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(
            !den.coeff(0).is_zero(),
            "denominator must not vanish at v = 0"
        );
        Self { num, den }
    }

    pub fn poly(num: Poly) -> Self {
        Self::new(num, Poly::constant(int(1)))
    }

    pub fn to_series(&self, order: usize) -> PowerSeries {
        self.num
            .to_series(order)
            .div(&self.den.to_series(order))
            .expect("nonzero constant term checked at construction")
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    /// Value at a rational point; `None` at a pole.
    pub fn eval(&self, v: &Rational) -> Option<Rational> {
        let d = self.den.eval(v);
        (!d.is_zero()).then(|| self.num.eval(v) / d)
    }
}

/// Generating function in `u` and `v` of the shape
/// `(sum_k num_k(v) u^k) / (den(v) (1 - u v))`.
#[derive(Clone, Debug)]
pub struct BivariateV {
    pub num: Vec<Poly>,
    pub den: Poly,
}

impl BivariateV {
    /// `[u^j]` by expanding `1 / (1 - uv)` as a geometric series.
    pub fn coeff_u(&self, j: usize) -> RationalFnV {
        let num = self
            .num
            .iter()
            .enumerate()
            .take_while(|(k, _)| *k <= j)
            .fold(Poly::constant(int(0)), |acc, (k, nk)| {
                acc.add(&nk.mul(&Poly::monomial(int(1), j - k)))
            });
        RationalFnV::new(num, self.den.clone())
    }
}

/// `z(v) = v / (ab + (alpha^2 + beta^2) v + ab v^2)`.
pub fn substitution_map(p: &WalkParams) -> RationalFnV {
    RationalFnV::new(Poly::monomial(int(1), 1), sub_denominator(p))
}

/// `D(v) = (alpha + beta v)(beta + alpha v)`.
fn sub_denominator(p: &WalkParams) -> Poly {
    Poly::linear(p.alpha().clone(), p.beta().clone())
        .mul(&Poly::linear(p.beta().clone(), p.alpha().clone()))
}

/// The closed forms of the double-step chain at a fixed `alpha`.
#[derive(Clone, Debug)]
pub struct ClosedForms {
    params: WalkParams,
    pub f0: RationalFnV,
    pub g0: RationalFnV,
    pub f: BivariateV,
    pub g: BivariateV,
    pub expected_end: RationalFnV,
}

pub fn closed_forms(p: &WalkParams) -> ClosedForms {
    let a = p.alpha().clone();
    let b = p.beta().clone();
    let ab = p.ab();
    let v = |k| Poly::monomial(int(1), k);
    let lin = |c0: &Rational, c1: &Rational| Poly::linear(c0.clone(), c1.clone());
    // ab (1 - v^3) = ab (1 - v)(1 + v + v^2)
    let den = Poly::new(vec![ab.clone(), int(0), int(0), -ab.clone()]);
    let a_vb = lin(&a, &b);
    let va_b = lin(&b, &a);
    // alpha + beta v + alpha v^2
    let mid = Poly::new(vec![a.clone(), b.clone(), a.clone()]);
    let g_num = v(1).mul(&mid).mul(&va_b);

    let f0 = RationalFnV::new(va_b.mul(&a_vb), den.clone());
    let g0 = RationalFnV::new(g_num.clone(), den.clone());
    let f = BivariateV {
        num: vec![a_vb.mul(&va_b), Poly::monomial(b.clone(), 3).mul(&va_b)],
        den: den.clone(),
    };
    let g = BivariateV {
        num: vec![g_num],
        den,
    };

    // v (v alpha + beta)(3 v^2 beta + 3 alpha + 3 v beta + v alpha + alpha v^2 + alpha v^3)
    let ee_inner = Poly::new(vec![
        int(3) * &a,
        int(3) * &b + &a,
        int(3) * &b + &a,
        a.clone(),
    ]);
    let one_minus_v = Poly::linear(int(1), int(-1));
    let ee_den = one_minus_v
        .pow(3)
        .mul(&Poly::new(vec![int(1), int(1), int(1)]))
        .scale(&ab);
    let expected_end = RationalFnV::new(v(1).mul(&va_b).mul(&ee_inner), ee_den);

    ClosedForms {
        params: p.clone(),
        f0,
        g0,
        f,
        g,
        expected_end,
    }
}

impl ClosedForms {
    /// `[u^j] F`, read off the bivariate form. Equals `f0` at `j = 0`.
    pub fn coeff_f(&self, j: usize) -> RationalFnV {
        self.f.coeff_u(j)
    }

    /// `[u^j] G = v^(j+1) (alpha + beta v + alpha v^2)(alpha v + beta) / (ab (1 - v^3))`.
    pub fn coeff_g(&self, j: usize) -> RationalFnV {
        self.g.coeff_u(j)
    }

    /// The per-index formula as printed,
    /// `v^j (a + vb)(va + b) / (ab (1 - v^3)) + v^(j+1) / (a (1 - v^3))`.
    /// It does not agree with the bivariate form; kept for regression tests.
    pub fn coeff_f_printed(&self, j: usize) -> RationalFnV {
        let a = self.params.alpha();
        let b = self.params.beta();
        let first = Poly::linear(a.clone(), b.clone())
            .mul(&Poly::linear(b.clone(), a.clone()))
            .mul(&Poly::monomial(int(1), j));
        // v^(j+1) / (a (1 - v^3)) = b v^(j+1) / (ab (1 - v^3))
        let second = Poly::monomial(b.clone(), j + 1);
        RationalFnV::new(first.add(&second), self.f0.den.clone())
    }

    /// Generating function of the extra state, `z ab g0 / (1 - z alpha^2)`
    /// rewritten in `v`.
    pub fn q(&self) -> RationalFnV {
        let p = &self.params;
        let d = sub_denominator(p);
        // z ab / (1 - z a^2) = v ab / (D(v) - a^2 v)
        let lead = RationalFnV::new(
            Poly::monomial(p.ab(), 1),
            d.sub(&Poly::monomial(p.alpha() * p.alpha(), 1)),
        );
        lead.mul(&self.g0)
    }
}

/// Which power of `D(v)` the coefficient transfer uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferExponent {
    /// `D(v)^(N-1)`, which follows from the change of variables.
    Derived,
    /// `D(v)^N`, as printed. Fails already at `N = 0`.
    Printed,
}

/// `[z^N] H(z)` for `H` given in terms of `v`.
pub fn transfer_coeff(h: &RationalFnV, n: usize, p: &WalkParams) -> Rational {
    transfer_coeff_with(h, n, p, TransferExponent::Derived)
}

pub fn transfer_coeff_with(
    h: &RationalFnV,
    n: usize,
    p: &WalkParams,
    exponent: TransferExponent,
) -> Rational {
    let hs = h.to_series(n);
    let d = sub_denominator(p);
    let power = match (exponent, n) {
        (TransferExponent::Derived, 0) => d.to_series(n).recip().expect("D(0) = ab is nonzero"),
        (TransferExponent::Derived, _) => d.pow(n - 1).to_series(n),
        (TransferExponent::Printed, _) => d.pow(n).to_series(n),
    };
    kernel_weight(p, n, &hs, &power)
}

/// `[v^N] ab (1 - v^2) D^e H`, given `D^e` and `H` as series.
fn kernel_weight(p: &WalkParams, n: usize, h: &PowerSeries, power: &PowerSeries) -> Rational {
    let jac = PowerSeries::from_poly(&[p.ab(), int(0), -p.ab()], n);
    let prod = &(&jac * power) * h;
    prod.coeff(n).clone()
}

/// `z`-series of `H` to the given order, coefficient by coefficient.
pub fn transfer_series(h: &RationalFnV, order: usize, p: &WalkParams) -> PowerSeries {
    let hs = h.to_series(order);
    let d = sub_denominator(p);
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(h.eval(&int(0)).expect("den(0) != 0"));
    let mut power = Poly::constant(int(1));
    for n in 1..=order {
        coeffs.push(kernel_weight(p, n, &hs.truncate(n), &power.to_series(n)));
        power = power.mul(&d);
    }
    PowerSeries::from_coeffs(coeffs)
}

/// `v(z)`, the compositional inverse of the substitution map.
pub fn v_of_z(p: &WalkParams, order: usize) -> Result<PowerSeries> {
    if order == 0 {
        return Err(Error::NotRevertible);
    }
    substitution_map(p).to_series(order).revert()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;
    use crate::walk::{double_state_series, DoubleStateId};

    fn params(n: i64, d: i64) -> WalkParams {
        WalkParams::new(rat(n, d)).unwrap()
    }

    #[test]
    fn substitution_map_leading_term() {
        let p = params(1, 3);
        let z = substitution_map(&p).to_series(4);
        assert_eq!(z.coeff(0), &int(0));
        assert_eq!(z.coeff(1), &p.ab().recip());
    }

    #[test]
    fn f0_at_half_simplifies() {
        let p = params(1, 2);
        let cf = closed_forms(&p);
        // (1 + v)^2 / (1 - v^3)
        let simple = RationalFnV::new(
            Poly::new(vec![int(1), int(2), int(1)]),
            Poly::new(vec![int(1), int(0), int(0), int(-1)]),
        );
        assert_eq!(cf.f0.to_series(20), simple.to_series(20));
        assert_eq!(cf.f0.eval(&int(0)), Some(int(1)));
    }

    #[test]
    fn coefficient_forms_reduce_at_j_zero() {
        let cf = closed_forms(&params(2, 5));
        assert_eq!(cf.coeff_g(0).to_series(16), cf.g0.to_series(16));
        assert_eq!(cf.coeff_f(0).to_series(16), cf.f0.to_series(16));
    }

    #[test]
    fn transfer_low_coefficients() {
        let p = params(1, 2);
        let cf = closed_forms(&p);
        assert_eq!(transfer_coeff(&cf.f0, 0, &p), int(1));
        assert_eq!(transfer_coeff(&cf.f0, 1, &p), rat(1, 2));
        assert_eq!(transfer_coeff(&cf.f0, 2, &p), rat(5, 16));
        assert_eq!(
            transfer_coeff_with(&cf.f0, 0, &p, TransferExponent::Printed),
            p.ab()
        );
    }

    #[test]
    fn transfer_series_matches_dp() {
        let p = params(1, 3);
        let cf = closed_forms(&p);
        let order = 16;
        assert_eq!(
            transfer_series(&cf.g0, order, &p),
            double_state_series(DoubleStateId::G(0), order, &p)
        );
        assert_eq!(
            transfer_series(&cf.coeff_g(3), order, &p),
            double_state_series(DoubleStateId::G(3), order, &p)
        );
        assert_eq!(
            transfer_series(&cf.coeff_f(2), order, &p),
            double_state_series(DoubleStateId::F(2), order, &p)
        );
        assert_eq!(
            transfer_series(&cf.q(), order, &p),
            double_state_series(DoubleStateId::Q, order, &p)
        );
        for n in [0, 5, 11] {
            assert_eq!(
                &transfer_coeff(&cf.coeff_f(1), n, &p),
                double_state_series(DoubleStateId::F(1), n, &p).coeff(n)
            );
        }
    }

    #[test]
    fn printed_per_index_f_disagrees_with_bivariate_form() {
        let p = params(1, 3);
        let cf = closed_forms(&p);
        for j in 0..=5 {
            assert_ne!(
                cf.coeff_f_printed(j).to_series(12),
                cf.coeff_f(j).to_series(12)
            );
        }
    }

    #[test]
    fn v_of_z_at_half() {
        let p = params(1, 2);
        let v = v_of_z(&p, 8).unwrap();
        assert_eq!(&v.coeffs()[..3], &[int(0), rat(1, 4), rat(1, 8)]);
        let z = substitution_map(&p).to_series(8);
        assert_eq!(z.compose(&v).unwrap(), PowerSeries::var(8));
    }
}
