//! Odd-step probabilities from even-step ones by conditioning on the last step.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::{PowerSeries, Rational};
use crate::walk::{DoubleStateId, StateDist, StateId, WalkParams};

/// The distribution one step after an even-class distribution:
///
/// ```text
/// Top(2j+1)       = a Top(2j) + b Top(2j+2)   (+ b Q when j = 0)
/// Bottom(2j), j>0 = a Bottom(2j-1) + b Bottom(2j+1)
/// Bottom(0)       = a Q + b Bottom(1)
/// P               = b Top(0)
/// ```
pub fn odd_from_even(d: &StateDist, p: &WalkParams) -> Result<StateDist> {
    if !d.is_even_class() {
        return Err(Error::ParityViolation);
    }
    let max = d
        .support()
        .iter()
        .filter_map(|(s, _)| match s {
            StateId::Top(i) | StateId::Bottom(i) => Some(*i),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let masses: Vec<_> = odd_targets(max + 1)
        .into_iter()
        .map(|s| (s, odd_mass(s, |e| d.get(e), p)))
        .filter(|(_, m)| !m.is_zero())
        .collect();
    Ok(StateDist::from_masses(&masses, d.step() + 1))
}

/// Odd-class states with index up to `max`.
fn odd_targets(max: usize) -> Vec<StateId> {
    let mut out: Vec<_> = (0..=max).filter(|i| i % 2 == 1).map(StateId::Top).collect();
    out.extend((0..=max).filter(|i| i % 2 == 0).map(StateId::Bottom));
    out.push(StateId::ExtraP);
    out
}

/// Mass of an odd-class `target` one step after an even-class state lookup.
fn odd_mass(target: StateId, even: impl Fn(StateId) -> Rational, p: &WalkParams) -> Rational {
    let (a, b) = (p.alpha(), p.beta());
    match target {
        StateId::Top(i) => {
            let j = i / 2;
            let mut m = a * even(StateId::Top(2 * j)) + b * even(StateId::Top(2 * j + 2));
            if j == 0 {
                m += b * even(StateId::ExtraQ);
            }
            m
        }
        StateId::Bottom(0) => a * even(StateId::ExtraQ) + b * even(StateId::Bottom(1)),
        StateId::Bottom(i) => a * even(StateId::Bottom(i - 1)) + b * even(StateId::Bottom(i + 1)),
        StateId::ExtraP => b * even(StateId::Top(0)),
        StateId::ExtraQ => unreachable!("Q is in the even class"),
    }
}

/// Single-step series of any state, built from double-step series.
///
/// Even-class targets read their double-step series at even times; odd-class
/// targets combine neighbouring double-step series through the last-step
/// relations. `double` must supply series of order at least `max_steps / 2`.
pub fn single_series_from_double(
    target: StateId,
    max_steps: usize,
    p: &WalkParams,
    mut double: impl FnMut(DoubleStateId) -> PowerSeries,
) -> PowerSeries {
    let mut coeffs = vec![Rational::zero(); max_steps + 1];
    if let Some(ds) = target.to_double() {
        let s = double(ds);
        for m in 0..=max_steps / 2 {
            coeffs[2 * m] = s.coeff(m).clone();
        }
        return PowerSeries::from_coeffs(coeffs);
    }
    if max_steps == 0 {
        return PowerSeries::from_coeffs(coeffs);
    }
    let last = (max_steps - 1) / 2;
    let mut cache = std::collections::BTreeMap::new();
    let mut fetch = |s: StateId| -> PowerSeries {
        cache
            .entry(s)
            .or_insert_with(|| double(s.to_double().expect("even-class source")))
            .clone()
    };
    let sources: Vec<StateId> = match target {
        StateId::Top(i) => {
            let j = i / 2;
            let mut v = vec![StateId::Top(2 * j), StateId::Top(2 * j + 2)];
            if j == 0 {
                v.push(StateId::ExtraQ);
            }
            v
        }
        StateId::Bottom(0) => vec![StateId::ExtraQ, StateId::Bottom(1)],
        StateId::Bottom(i) => vec![StateId::Bottom(i - 1), StateId::Bottom(i + 1)],
        StateId::ExtraP => vec![StateId::Top(0)],
        StateId::ExtraQ => unreachable!(),
    };
    let series: Vec<(StateId, PowerSeries)> = sources.into_iter().map(|s| (s, fetch(s))).collect();
    for m in 0..=last {
        let lookup = |s: StateId| {
            series
                .iter()
                .find(|(id, _)| *id == s)
                .map(|(_, ser)| ser.coeff(m).clone())
                .unwrap_or_else(Rational::zero)
        };
        coeffs[2 * m + 1] = odd_mass(target, lookup, p);
    }
    PowerSeries::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;
    use crate::walk::{double_state_series, single_step, state_series};

    fn params(n: i64, d: i64) -> WalkParams {
        WalkParams::new(rat(n, d)).unwrap()
    }

    #[test]
    fn origin_steps_once() {
        let p = params(1, 3);
        let d = odd_from_even(&StateDist::origin(), &p).unwrap();
        assert_eq!(
            d.support(),
            vec![(StateId::Top(1), rat(1, 3)), (StateId::ExtraP, rat(2, 3))]
        );
    }

    #[test]
    fn second_double_step_example() {
        let p = params(1, 2);
        let even = StateDist::from_masses(
            &[
                (StateId::Top(0), rat(1, 2)),
                (StateId::Top(2), rat(1, 4)),
                (StateId::Bottom(1), rat(1, 4)),
            ],
            2,
        );
        let odd = odd_from_even(&even, &p).unwrap();
        assert_eq!(odd.get(StateId::Top(1)), rat(3, 8));
        assert_eq!(odd.get(StateId::Top(3)), rat(1, 8));
        assert_eq!(odd.get(StateId::Bottom(0)), rat(1, 8));
        assert_eq!(odd.get(StateId::Bottom(2)), rat(1, 8));
        assert_eq!(odd.get(StateId::ExtraP), rat(1, 4));
        assert_eq!(odd.total(), rat(1, 1));
        assert!(odd.same_masses(&single_step(&even, &p)));
    }

    #[test]
    fn rejects_odd_class_input() {
        let d = StateDist::point(StateId::ExtraP, 1);
        assert_eq!(
            odd_from_even(&d, &params(1, 2)),
            Err(Error::ParityViolation)
        );
    }

    #[test]
    fn series_from_double_matches_single_dp() {
        let p = params(2, 7);
        let steps = 15;
        for target in [
            StateId::Top(0),
            StateId::Top(1),
            StateId::Top(3),
            StateId::Bottom(0),
            StateId::Bottom(2),
            StateId::Bottom(3),
            StateId::ExtraP,
            StateId::ExtraQ,
        ] {
            let built = single_series_from_double(target, steps, &p, |s| {
                double_state_series(s, steps / 2, &p)
            });
            assert_eq!(built, state_series(target, steps, &p), "{target}");
        }
    }
}
