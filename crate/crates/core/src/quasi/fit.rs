//! Fitting quasipolynomials to exact data.
//!
//! Two models are supported. The constituent model fixes a period `p` and
//! interpolates each residue class separately. The coefficient model gives
//! each coefficient its own period, which needs far fewer data points when
//! only the low-order coefficients vary with `n`.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linalg::{solve, Solve};
use crate::poly::Polynomial;
use crate::quasi::Quasipolynomial;
use crate::scalar::{from_i64, Field};

fn classes<T: Field>(values: &BTreeMap<i64, T>, period: usize) -> Vec<Vec<(i64, T)>> {
    let mut out = vec![Vec::new(); period];
    for (&n, v) in values {
        out[n.rem_euclid(period as i64) as usize].push((n, v.clone()));
    }
    out
}

fn check_all<T: Field>(qp: &Quasipolynomial<T>, values: &BTreeMap<i64, T>) -> Result<()> {
    for (&n, v) in values {
        let got = qp.evaluate(n);
        if &got != v {
            return Err(Error::InconsistentData {
                n,
                expected: got.to_string(),
                actual: v.to_string(),
            });
        }
    }
    Ok(())
}

/// Interpolates one constituent per residue class mod `period` from the
/// first `degree + 1` points of the class, then checks every remaining
/// point.
pub fn fit_quasipolynomial<T: Field>(
    values: &BTreeMap<i64, T>,
    degree: usize,
    period: usize,
) -> Result<Quasipolynomial<T>> {
    assert!(period >= 1, "period must be positive");
    let need = degree + 1;
    let mut constituents = Vec::with_capacity(period);
    for (residue, pts) in classes(values, period).into_iter().enumerate() {
        if pts.len() < need {
            return Err(Error::InsufficientData {
                residue,
                have: pts.len(),
                need,
            });
        }
        let basis: Vec<(T, T)> = pts[..need].iter().map(|(n, v)| (from_i64(*n), v.clone())).collect();
        constituents.push(Polynomial::interpolate(&basis));
    }
    let qp = Quasipolynomial::new(constituents);
    check_all(&qp, values)?;
    Ok(qp)
}

/// Candidate periods: divisors of `bound` ascending, then the other
/// integers up to `bound`.
pub fn period_candidates(bound: usize) -> Vec<usize> {
    let (mut divs, rest): (Vec<usize>, Vec<usize>) = (1..=bound).partition(|p| bound.is_multiple_of(*p));
    divs.extend(rest);
    divs
}

/// Smallest period (in candidate order) whose constituent fit reproduces
/// all data. A candidate is only accepted when every residue class has at
/// least one point beyond the `degree + 1` used for interpolation.
pub fn minimal_period<T: Field>(values: &BTreeMap<i64, T>, degree: usize, bound: usize) -> Result<usize> {
    for p in period_candidates(bound) {
        let need = degree + 2;
        if let Some((residue, pts)) = classes(values, p).iter().enumerate().find(|(_, c)| c.len() < need) {
            return Err(Error::InsufficientData {
                residue,
                have: pts.len(),
                need,
            });
        }
        match fit_quasipolynomial(values, degree, p) {
            Ok(_) => return Ok(p),
            Err(Error::InconsistentData { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoPeriodFound { bound })
}

fn slot_offsets(periods: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    periods
        .iter()
        .map(|p| {
            let o = acc;
            acc += p;
            o
        })
        .collect()
}

/// Fits `Σ_i c_i(n) n^(D-i)` where coefficient `i` has period `periods[i]`.
///
/// Returns the fit as a quasipolynomial of period `lcm(periods)` and the
/// number of data points beyond those needed to determine it.
pub fn fit_with_coefficient_periods<T: Field>(
    values: &BTreeMap<i64, T>,
    degree: usize,
    periods: &[usize],
) -> Result<(Quasipolynomial<T>, usize)> {
    assert_eq!(periods.len(), degree + 1, "one period per coefficient");
    let offsets = slot_offsets(periods);
    let unknowns: usize = periods.iter().sum();
    let ns: Vec<i64> = values.keys().copied().collect();
    let mut rows = Vec::with_capacity(ns.len());
    let mut rhs = Vec::with_capacity(ns.len());
    for &n in &ns {
        let mut row = vec![T::zero(); unknowns];
        let x: T = from_i64(n);
        let mut power = T::one();
        for i in (0..=degree).rev() {
            let slot = offsets[i] + n.rem_euclid(periods[i] as i64) as usize;
            row[slot] = power.clone();
            power = power * x.clone();
        }
        rows.push(row);
        rhs.push(values[&n].clone());
    }
    let (x, redundant) = match solve(&rows, &rhs) {
        Solve::Unique { x, redundant } => (x, redundant),
        Solve::Underdetermined { rank } => {
            return Err(Error::InsufficientData {
                residue: 0,
                have: rank,
                need: unknowns,
            })
        }
        Solve::Inconsistent { .. } => {
            // Report the first point a least-data fit gets wrong.
            return Err(inconsistency_witness(values, degree, periods, &rows, &rhs));
        }
    };
    let period = periods.iter().fold(1usize, |a, p| a.lcm(p));
    let qp = Quasipolynomial::from_fn(period, |r| {
        Polynomial::new(
            (0..=degree)
                .map(|k| {
                    let i = degree - k;
                    x[offsets[i] + r % periods[i]].clone()
                })
                .collect(),
        )
    });
    Ok((qp, redundant))
}

fn inconsistency_witness<T: Field>(
    values: &BTreeMap<i64, T>,
    degree: usize,
    periods: &[usize],
    rows: &[Vec<T>],
    rhs: &[T],
) -> Error {
    let ns: Vec<i64> = values.keys().copied().collect();
    for k in 1..=rows.len() {
        if let Solve::Unique { x, .. } = solve(&rows[..k], &rhs[..k]) {
            let offsets = slot_offsets(periods);
            for (j, &n) in ns.iter().enumerate().skip(k) {
                let xn: T = from_i64(n);
                let mut got = T::zero();
                let mut power = T::one();
                for i in (0..=degree).rev() {
                    got = got + x[offsets[i] + n.rem_euclid(periods[i] as i64) as usize].clone() * power.clone();
                    power = power * xn.clone();
                }
                if got != rhs[j] {
                    return Error::InconsistentData {
                        n,
                        expected: got.to_string(),
                        actual: rhs[j].to_string(),
                    };
                }
            }
        }
    }
    Error::InconsistentSystem("coefficient-period model does not fit the data".into())
}

/// A coefficient-period model in which the top `constant_terms`
/// coefficients are residue-independent and the rest share one period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailModel {
    pub constant_terms: usize,
    pub tail_period: usize,
}

impl TailModel {
    pub fn periods(&self, degree: usize) -> Vec<usize> {
        (0..=degree)
            .map(|i| if i < self.constant_terms { 1 } else { self.tail_period })
            .collect()
    }

    pub fn unknowns(&self, degree: usize) -> usize {
        self.periods(degree).iter().sum()
    }

    /// All models with tail period dividing `bound`, fewest unknowns first.
    pub fn candidates(degree: usize, bound: usize) -> Vec<TailModel> {
        let mut out: Vec<TailModel> = (1..=bound)
            .filter(|p| bound.is_multiple_of(*p))
            .flat_map(|p| {
                let ks: Vec<usize> = if p == 1 {
                    vec![degree + 1]
                } else {
                    (0..=degree).collect()
                };
                ks.into_iter().map(move |k| TailModel {
                    constant_terms: k,
                    tail_period: p,
                })
            })
            .collect();
        out.sort_by_key(|m| (m.unknowns(degree), m.tail_period));
        out
    }

    /// The first candidate, fewest unknowns first, that fits with at least
    /// `min_validation` spare data points.
    pub fn search<T: Field>(
        values: &BTreeMap<i64, T>,
        degree: usize,
        bound: usize,
        min_validation: usize,
    ) -> Result<(TailModel, Quasipolynomial<T>)> {
        let mut last_insufficient = None;
        for model in Self::candidates(degree, bound) {
            if values.len() < model.unknowns(degree) + min_validation {
                last_insufficient.get_or_insert(Error::InsufficientData {
                    residue: 0,
                    have: values.len(),
                    need: model.unknowns(degree) + min_validation,
                });
                continue;
            }
            match fit_with_coefficient_periods(values, degree, &model.periods(degree)) {
                Ok((qp, redundant)) if redundant >= min_validation => return Ok((model, qp)),
                Ok(_)
                | Err(Error::InsufficientData { .. })
                | Err(Error::InconsistentData { .. })
                | Err(Error::InconsistentSystem(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(last_insufficient.unwrap_or(Error::NoPeriodFound { bound }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;
    use crate::{Poly, QuasiPoly, Rational};

    fn sample(qp: &QuasiPoly, ns: impl Iterator<Item = i64>) -> BTreeMap<i64, Rational> {
        ns.map(|n| (n, qp.evaluate(n))).collect()
    }

    fn rider12_q2() -> QuasiPoly {
        let base = Poly::from_descending(vec![frac(1, 2), frac(-5, 24), frac(0, 1), frac(-11, 48), frac(0, 1)]);
        let wobble = Poly::monomial(frac(1, 16), 1);
        QuasiPoly::new(vec![&base + &wobble, &base - &wobble])
    }

    #[test]
    fn constant_sequence() {
        let data: BTreeMap<i64, Rational> = (0..5).map(|n| (n, frac(7, 1))).collect();
        let qp = fit_quasipolynomial(&data, 0, 1).unwrap();
        assert_eq!(qp.constituent(0), &Poly::constant(frac(7, 1)));
    }

    #[test]
    fn recovers_period_two() {
        let truth = rider12_q2();
        let data = sample(&truth, 0..20);
        assert_eq!(fit_quasipolynomial(&data, 4, 2).unwrap(), truth);
        assert_eq!(minimal_period(&data, 4, 6).unwrap(), 2);
        assert!(matches!(
            fit_quasipolynomial(&data, 4, 1),
            Err(Error::InconsistentData { .. })
        ));
        let refit = fit_quasipolynomial(&data, 4, 4).unwrap();
        assert_eq!(refit, truth.with_period(4));
    }

    #[test]
    fn insufficient_data_names_the_class() {
        let data = sample(&rider12_q2(), 0..9);
        match fit_quasipolynomial(&data, 4, 2) {
            Err(Error::InsufficientData { residue, have, need }) => {
                assert_eq!((residue, have, need), (1, 4, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn candidate_order() {
        assert_eq!(period_candidates(6), vec![1, 2, 3, 6, 4, 5]);
        assert_eq!(period_candidates(1), vec![1]);
    }

    #[test]
    fn coefficient_periods_need_fewer_points() {
        let truth = rider12_q2();
        let data = sample(&truth, 0..8);
        let (qp, redundant) = fit_with_coefficient_periods(&data, 4, &[1, 1, 1, 2, 1]).unwrap();
        assert_eq!(qp, truth);
        assert_eq!(redundant, 2);
        let (model, qp) = TailModel::search(&data, 4, 2, 1).unwrap();
        assert_eq!(qp.reduced(), truth);
        assert_eq!(model.tail_period, 2);
        assert!(matches!(
            fit_with_coefficient_periods(&data, 4, &[1, 1, 1, 1, 1]),
            Err(Error::InconsistentData { .. })
        ));
    }
}
