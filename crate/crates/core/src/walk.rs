//! Exact probability evolution on the two-layer walk graph and on its
//! double-step contraction. This is the ground truth every generating
//! function in the crate is checked against.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::{PowerSeries, Rational};

/// Up-step probability `alpha` and its complement `beta = 1 - alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkParams {
    alpha: Rational,
    beta: Rational,
}

impl WalkParams {
    /// Rejects `alpha` outside the open interval `(0, 1)`; every closed form
    /// divides by `alpha * beta`.
    pub fn new(alpha: Rational) -> Result<Self> {
        if !alpha.is_positive() || alpha >= Rational::one() {
            return Err(Error::InvalidAlpha(alpha));
        }
        let beta = Rational::one() - &alpha;
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// `alpha * beta`
    pub fn ab(&self) -> Rational {
        &self.alpha * &self.beta
    }

    /// `alpha^2 + beta^2 = 1 - 2 alpha beta`
    pub fn sigma(&self) -> Rational {
        &self.alpha * &self.alpha + &self.beta * &self.beta
    }
}

/// A state of the single-step graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateId {
    Top(usize),
    Bottom(usize),
    /// Extra state attached to the upper layer.
    ExtraP,
    /// Extra state attached to the lower layer.
    ExtraQ,
}

impl StateId {
    /// Whether the state can hold mass after an even number of single steps.
    pub fn is_even_class(self) -> bool {
        match self {
            StateId::Top(i) => i % 2 == 0,
            StateId::Bottom(i) => i % 2 == 1,
            StateId::ExtraP => false,
            StateId::ExtraQ => true,
        }
    }

    /// The double-step state this corresponds to, if it lies in the even class.
    pub fn to_double(self) -> Option<DoubleStateId> {
        match self {
            StateId::Top(i) if i % 2 == 0 => Some(DoubleStateId::F(i / 2)),
            StateId::Bottom(i) if i % 2 == 1 => Some(DoubleStateId::G(i / 2)),
            StateId::ExtraQ => Some(DoubleStateId::Q),
            _ => None,
        }
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateId::Top(i) => write!(f, "top:{i}"),
            StateId::Bottom(i) => write!(f, "bottom:{i}"),
            StateId::ExtraP => write!(f, "P"),
            StateId::ExtraQ => write!(f, "Q"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseStateError(pub String);

impl fmt::Display for ParseStateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "malformed state `{}` (expected top:N, bottom:N, P or Q)",
            self.0
        )
    }
}

impl std::error::Error for ParseStateError {}

impl FromStr for StateId {
    type Err = ParseStateError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let err = || ParseStateError(s.to_string());
        match s {
            "P" | "p" => return Ok(StateId::ExtraP),
            "Q" | "q" => return Ok(StateId::ExtraQ),
            _ => {}
        }
        let (layer, index) = s.split_once(':').ok_or_else(err)?;
        let index: usize = index.parse().map_err(|_| err())?;
        match layer {
            "top" => Ok(StateId::Top(index)),
            "bottom" => Ok(StateId::Bottom(index)),
            _ => Err(err()),
        }
    }
}

/// Exact distribution over the single-step graph after `step` steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateDist {
    top: Vec<Rational>,
    bottom: Vec<Rational>,
    extra_p: Rational,
    extra_q: Rational,
    step: usize,
}

impl StateDist {
    /// Point mass at `Top(0)` at time 0.
    pub fn origin() -> Self {
        Self::point(StateId::Top(0), 0)
    }

    pub fn point(state: StateId, step: usize) -> Self {
        let mut d = Self::empty(step);
        d.set(state, Rational::one());
        d
    }

    fn empty(step: usize) -> Self {
        Self {
            top: Vec::new(),
            bottom: Vec::new(),
            extra_p: Rational::zero(),
            extra_q: Rational::zero(),
            step,
        }
    }

    /// Builds a distribution from explicit masses. No validation beyond the
    /// type; use [`StateDist::is_valid`] when the input is untrusted.
    pub fn from_masses(masses: &[(StateId, Rational)], step: usize) -> Self {
        let mut d = Self::empty(step);
        for (s, m) in masses {
            let cur = d.get(*s);
            d.set(*s, cur + m);
        }
        d
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn get(&self, state: StateId) -> Rational {
        let pick = |v: &Vec<Rational>, i: usize| v.get(i).cloned().unwrap_or_else(Rational::zero);
        match state {
            StateId::Top(i) => pick(&self.top, i),
            StateId::Bottom(i) => pick(&self.bottom, i),
            StateId::ExtraP => self.extra_p.clone(),
            StateId::ExtraQ => self.extra_q.clone(),
        }
    }

    fn set(&mut self, state: StateId, value: Rational) {
        fn put(v: &mut Vec<Rational>, i: usize, value: Rational) {
            if v.len() <= i {
                v.resize(i + 1, Rational::zero());
            }
            v[i] = value;
        }
        match state {
            StateId::Top(i) => put(&mut self.top, i, value),
            StateId::Bottom(i) => put(&mut self.bottom, i, value),
            StateId::ExtraP => self.extra_p = value,
            StateId::ExtraQ => self.extra_q = value,
        }
    }

    fn add(&mut self, state: StateId, mass: Rational) {
        let cur = self.get(state);
        self.set(state, cur + mass);
    }

    /// States with nonzero mass, in a fixed order.
    pub fn support(&self) -> Vec<(StateId, Rational)> {
        let mut out = Vec::new();
        for (i, m) in self.top.iter().enumerate() {
            if !m.is_zero() {
                out.push((StateId::Top(i), m.clone()));
            }
        }
        for (i, m) in self.bottom.iter().enumerate() {
            if !m.is_zero() {
                out.push((StateId::Bottom(i), m.clone()));
            }
        }
        if !self.extra_p.is_zero() {
            out.push((StateId::ExtraP, self.extra_p.clone()));
        }
        if !self.extra_q.is_zero() {
            out.push((StateId::ExtraQ, self.extra_q.clone()));
        }
        out
    }

    pub fn total(&self) -> Rational {
        self.support().into_iter().map(|(_, m)| m).sum()
    }

    /// Mass sums to one, no negative entries, indices bounded by the step count.
    pub fn is_valid(&self) -> bool {
        let support = self.support();
        support.iter().all(|(_, m)| m.is_positive())
            && self.total().is_one()
            && support.iter().all(|(s, _)| match s {
                StateId::Top(i) | StateId::Bottom(i) => *i <= self.step,
                _ => true,
            })
    }

    /// Support lies in the class reachable after an even number of steps.
    pub fn is_even_class(&self) -> bool {
        self.support().iter().all(|(s, _)| s.is_even_class())
    }

    /// Equality of masses, ignoring trailing zero padding.
    pub fn same_masses(&self, other: &Self) -> bool {
        self.step == other.step && self.support() == other.support()
    }
}

/// One transition of the single-step chain.
pub fn single_step(d: &StateDist, p: &WalkParams) -> StateDist {
    let (a, b) = (p.alpha(), p.beta());
    let mut out = StateDist::empty(d.step + 1);
    for (state, m) in d.support() {
        let ma = &m * a;
        let mb = &m * b;
        match state {
            StateId::Top(0) => {
                out.add(StateId::Top(1), ma);
                out.add(StateId::ExtraP, mb);
            }
            StateId::Top(i) if i % 2 == 1 => {
                out.add(StateId::Top(i - 1), ma);
                out.add(StateId::Top(i + 1), mb);
            }
            StateId::Top(i) => {
                out.add(StateId::Top(i - 1), mb);
                out.add(StateId::Top(i + 1), ma);
            }
            StateId::Bottom(0) => {
                out.add(StateId::ExtraQ, ma);
                out.add(StateId::Bottom(1), mb);
            }
            StateId::Bottom(i) if i % 2 == 1 => {
                out.add(StateId::Bottom(i - 1), mb);
                out.add(StateId::Bottom(i + 1), ma);
            }
            StateId::Bottom(i) => {
                out.add(StateId::Bottom(i - 1), ma);
                out.add(StateId::Bottom(i + 1), mb);
            }
            StateId::ExtraP => {
                out.add(StateId::Top(0), mb);
                out.add(StateId::Bottom(1), ma);
            }
            StateId::ExtraQ => {
                out.add(StateId::Top(1), mb);
                out.add(StateId::Bottom(0), ma);
            }
        }
    }
    out
}

/// Distributions after `0 ..= max_steps` single steps from the origin.
pub fn evolve(max_steps: usize, p: &WalkParams) -> Vec<StateDist> {
    let mut out = Vec::with_capacity(max_steps + 1);
    let mut d = StateDist::origin();
    for _ in 0..max_steps {
        let next = single_step(&d, p);
        out.push(d);
        d = next;
    }
    out.push(d);
    out
}

/// Series whose `z^n` coefficient is the probability of occupying `target`
/// after `n` single steps from `Top(0)`.
pub fn state_series(target: StateId, max_steps: usize, p: &WalkParams) -> PowerSeries {
    PowerSeries::from_coeffs(evolve(max_steps, p).iter().map(|d| d.get(target)).collect())
}

/// A state of the double-step chain. `F(n)` is `Top(2n)`, `G(n)` is
/// `Bottom(2n + 1)` and `Q` is the lower extra state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DoubleStateId {
    F(usize),
    G(usize),
    Q,
}

impl DoubleStateId {
    pub fn to_single(self) -> StateId {
        match self {
            DoubleStateId::F(n) => StateId::Top(2 * n),
            DoubleStateId::G(n) => StateId::Bottom(2 * n + 1),
            DoubleStateId::Q => StateId::ExtraQ,
        }
    }

    /// Position on the half-line used by the expected end. `Q` counts as 0.
    pub fn index(self) -> usize {
        match self {
            DoubleStateId::F(n) => 2 * n,
            DoubleStateId::G(n) => 2 * n + 1,
            DoubleStateId::Q => 0,
        }
    }
}

/// Exact distribution over the double-step chain after `step` double steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleDist {
    f: Vec<Rational>,
    g: Vec<Rational>,
    q: Rational,
    step: usize,
}

impl DoubleDist {
    pub fn origin() -> Self {
        Self::point(DoubleStateId::F(0), 0)
    }

    pub fn point(state: DoubleStateId, step: usize) -> Self {
        let mut d = Self {
            f: Vec::new(),
            g: Vec::new(),
            q: Rational::zero(),
            step,
        };
        d.add(state, Rational::one());
        d
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn get(&self, state: DoubleStateId) -> Rational {
        let pick = |v: &Vec<Rational>, i: usize| v.get(i).cloned().unwrap_or_else(Rational::zero);
        match state {
            DoubleStateId::F(n) => pick(&self.f, n),
            DoubleStateId::G(n) => pick(&self.g, n),
            DoubleStateId::Q => self.q.clone(),
        }
    }

    fn add(&mut self, state: DoubleStateId, mass: Rational) {
        fn bump(v: &mut Vec<Rational>, i: usize, mass: Rational) {
            if v.len() <= i {
                v.resize(i + 1, Rational::zero());
            }
            v[i] += mass;
        }
        match state {
            DoubleStateId::F(n) => bump(&mut self.f, n, mass),
            DoubleStateId::G(n) => bump(&mut self.g, n, mass),
            DoubleStateId::Q => self.q += mass,
        }
    }

    pub fn support(&self) -> Vec<(DoubleStateId, Rational)> {
        let f = self
            .f
            .iter()
            .enumerate()
            .map(|(n, m)| (DoubleStateId::F(n), m));
        let g = self
            .g
            .iter()
            .enumerate()
            .map(|(n, m)| (DoubleStateId::G(n), m));
        f.chain(g)
            .chain(std::iter::once((DoubleStateId::Q, &self.q)))
            .filter(|(_, m)| !m.is_zero())
            .map(|(s, m)| (s, m.clone()))
            .collect()
    }

    pub fn total(&self) -> Rational {
        self.support().into_iter().map(|(_, m)| m).sum()
    }

    /// The same distribution viewed on the single-step graph at time `2 * step`.
    pub fn to_single(&self) -> StateDist {
        let masses: Vec<_> = self
            .support()
            .into_iter()
            .map(|(s, m)| (s.to_single(), m))
            .collect();
        StateDist::from_masses(&masses, 2 * self.step)
    }

    /// Mean position on the half-line.
    pub fn expected_index(&self) -> Rational {
        self.support()
            .into_iter()
            .map(|(s, m)| m * Rational::from_integer(s.index().into()))
            .sum()
    }
}

/// One transition of the double-step chain.
pub fn double_step(d: &DoubleDist, p: &WalkParams) -> DoubleDist {
    use DoubleStateId::{F, G, Q};
    let ab = p.ab();
    let stay = p.sigma();
    let aa = p.alpha() * p.alpha();
    let bb = p.beta() * p.beta();
    let mut out = DoubleDist {
        f: Vec::new(),
        g: Vec::new(),
        q: Rational::zero(),
        step: d.step + 1,
    };
    for (state, m) in d.support() {
        let side = &m * &ab;
        match state {
            F(0) => {
                out.add(F(1), side.clone());
                out.add(G(0), side);
                out.add(F(0), &m * &stay);
            }
            F(n) => {
                out.add(F(n - 1), side.clone());
                out.add(F(n + 1), side);
                out.add(F(n), &m * &stay);
            }
            G(0) => {
                out.add(Q, side.clone());
                out.add(G(1), side);
                out.add(G(0), &m * &stay);
            }
            G(n) => {
                out.add(G(n - 1), side.clone());
                out.add(G(n + 1), side);
                out.add(G(n), &m * &stay);
            }
            Q => {
                out.add(F(0), side.clone());
                out.add(F(1), &m * &bb);
                out.add(G(0), side);
                out.add(Q, &m * &aa);
            }
        }
    }
    out
}

/// Distributions after `0 ..= max_double_steps` double steps from `F(0)`.
pub fn evolve_double(max_double_steps: usize, p: &WalkParams) -> Vec<DoubleDist> {
    let mut out = Vec::with_capacity(max_double_steps + 1);
    let mut d = DoubleDist::origin();
    for _ in 0..max_double_steps {
        let next = double_step(&d, p);
        out.push(d);
        d = next;
    }
    out.push(d);
    out
}

pub fn double_state_series(
    target: DoubleStateId,
    max_double_steps: usize,
    p: &WalkParams,
) -> PowerSeries {
    PowerSeries::from_coeffs(
        evolve_double(max_double_steps, p)
            .iter()
            .map(|d| d.get(target))
            .collect(),
    )
}

/// Expected position after `m` double steps, as the `z^m` coefficient.
pub fn expected_end_series(max_double_steps: usize, p: &WalkParams) -> PowerSeries {
    PowerSeries::from_coeffs(
        evolve_double(max_double_steps, p)
            .iter()
            .map(DoubleDist::expected_index)
            .collect(),
    )
}

/// Floating-point expected position after each of `0 ..= max_double_steps`
/// double steps. Used where exact rationals become too large to carry.
pub fn expected_end_float(max_double_steps: usize, alpha: f64) -> Vec<f64> {
    let beta = 1.0 - alpha;
    let (ab, stay, aa, bb) = (
        alpha * beta,
        alpha * alpha + beta * beta,
        alpha * alpha,
        beta * beta,
    );
    let width = max_double_steps + 2;
    let mut f = vec![0.0f64; width];
    let mut g = vec![0.0f64; width];
    let mut q = 0.0f64;
    f[0] = 1.0;
    let mut nf = vec![0.0f64; width];
    let mut ng = vec![0.0f64; width];
    let mut out = Vec::with_capacity(max_double_steps + 1);
    for m in 0..=max_double_steps {
        let reach = (m + 1).min(width);
        let e: f64 = (0..reach)
            .map(|n| (2 * n) as f64 * f[n] + (2 * n + 1) as f64 * g[n])
            .sum();
        out.push(e);
        if m == max_double_steps {
            break;
        }
        nf[..=reach.min(width - 1)].fill(0.0);
        ng[..=reach.min(width - 1)].fill(0.0);
        let mut nq = aa * q;
        nf[0] += ab * q;
        nf[1] += bb * q;
        ng[0] += ab * q;
        for n in 0..reach {
            let (fm, gm) = (f[n], g[n]);
            nf[n] += stay * fm;
            nf[n + 1] += ab * fm;
            ng[n] += stay * gm;
            ng[n + 1] += ab * gm;
            if n == 0 {
                ng[0] += ab * fm;
                nq += ab * gm;
            } else {
                nf[n - 1] += ab * fm;
                ng[n - 1] += ab * gm;
            }
        }
        std::mem::swap(&mut f, &mut nf);
        std::mem::swap(&mut g, &mut ng);
        q = nq;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{int, rat};

    fn params(n: i64, d: i64) -> WalkParams {
        WalkParams::new(rat(n, d)).unwrap()
    }

    #[test]
    fn rejects_degenerate_alpha() {
        assert_eq!(WalkParams::new(int(0)), Err(Error::InvalidAlpha(int(0))));
        assert_eq!(WalkParams::new(int(1)), Err(Error::InvalidAlpha(int(1))));
        assert!(WalkParams::new(rat(3, 2)).is_err());
        assert_eq!(params(1, 3).beta(), &rat(2, 3));
    }

    #[test]
    fn single_step_from_origin() {
        let d = single_step(&StateDist::origin(), &params(1, 3));
        assert_eq!(
            d.support(),
            vec![(StateId::Top(1), rat(1, 3)), (StateId::ExtraP, rat(2, 3))]
        );
        assert!(d.is_valid());
    }

    #[test]
    fn single_step_from_extra_q() {
        let p = params(2, 7);
        let d = single_step(&StateDist::point(StateId::ExtraQ, 0), &p);
        assert_eq!(d.get(StateId::Top(1)), rat(5, 7));
        assert_eq!(d.get(StateId::Bottom(0)), rat(2, 7));
        assert_eq!(d.total(), int(1));
    }

    #[test]
    fn double_step_from_origin_half() {
        let p = params(1, 2);
        let d = double_step(&DoubleDist::origin(), &p);
        assert_eq!(
            d.support(),
            vec![
                (DoubleStateId::F(0), rat(1, 2)),
                (DoubleStateId::F(1), rat(1, 4)),
                (DoubleStateId::G(0), rat(1, 4)),
            ]
        );
        let d2 = double_step(&d, &p);
        assert_eq!(
            d2.support(),
            vec![
                (DoubleStateId::F(0), rat(5, 16)),
                (DoubleStateId::F(1), rat(1, 4)),
                (DoubleStateId::F(2), rat(1, 16)),
                (DoubleStateId::G(0), rat(1, 4)),
                (DoubleStateId::G(1), rat(1, 16)),
                (DoubleStateId::Q, rat(1, 16)),
            ]
        );
    }

    #[test]
    fn double_step_from_q() {
        let p = params(1, 3);
        let d = double_step(&DoubleDist::point(DoubleStateId::Q, 0), &p);
        assert_eq!(d.get(DoubleStateId::F(0)), rat(2, 9));
        assert_eq!(d.get(DoubleStateId::F(1)), rat(4, 9));
        assert_eq!(d.get(DoubleStateId::G(0)), rat(2, 9));
        assert_eq!(d.get(DoubleStateId::Q), rat(1, 9));
        assert_eq!(d.total(), int(1));
    }

    #[test]
    fn state_series_low_coefficients() {
        for (n, d) in [(1, 2), (1, 3), (2, 5), (1, 7)] {
            let p = params(n, d);
            let a = p.alpha().clone();
            let f0 = state_series(StateId::Top(0), 4, &p);
            assert_eq!(f0.coeff(0), &int(1));
            assert_eq!(f0.coeff(2), &(int(2) * &a * &a - int(2) * &a + int(1)));
            let g0 = state_series(StateId::Bottom(0), 4, &p);
            assert_eq!(g0.coeff(3), &(&a * p.beta() * p.beta()));
            let pp = state_series(StateId::ExtraP, 2, &p);
            assert_eq!(pp.coeff(1), p.beta());
        }
    }

    #[test]
    fn double_state_series_low_coefficients() {
        let half = params(1, 2);
        let f0 = double_state_series(DoubleStateId::F(0), 2, &half);
        assert_eq!(f0.coeffs(), &[int(1), rat(1, 2), rat(5, 16)]);
        let p = params(2, 5);
        assert_eq!(
            double_state_series(DoubleStateId::G(0), 1, &p).coeff(1),
            &p.ab()
        );
        assert_eq!(
            double_state_series(DoubleStateId::Q, 2, &p).coeff(2),
            &(p.ab() * p.ab())
        );
    }

    #[test]
    fn expected_end_low_coefficients() {
        let e = expected_end_series(2, &params(1, 2));
        assert_eq!(e.coeffs(), &[int(0), rat(3, 4), rat(19, 16)]);
        let e = expected_end_series(1, &params(1, 3));
        assert_eq!(e.coeff(1), &rat(2, 3));
    }

    #[test]
    fn float_sweep_matches_exact() {
        let exact = expected_end_series(20, &params(1, 3));
        let float = expected_end_float(20, 1.0 / 3.0);
        for (e, f) in exact.coeffs().iter().zip(&float) {
            assert!((crate::series::to_f64(e) - f).abs() < 1e-12);
        }
    }

    #[test]
    fn parse_states() {
        assert_eq!("top:4".parse::<StateId>().unwrap(), StateId::Top(4));
        assert_eq!("bottom:3".parse::<StateId>().unwrap(), StateId::Bottom(3));
        assert_eq!("P".parse::<StateId>().unwrap(), StateId::ExtraP);
        assert_eq!("Q".parse::<StateId>().unwrap(), StateId::ExtraQ);
        assert!("middle:1".parse::<StateId>().is_err());
        assert!("top:-1".parse::<StateId>().is_err());
        assert!("top".parse::<StateId>().is_err());
    }
}
