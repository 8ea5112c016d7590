//! JSON form of a rational quasipolynomial:
//! `{ "period": p, "degree": D, "constituents": [[c_D, …, c_0], …] }` with
//! every coefficient written as a `"num/den"` string.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{parse_rational, rational_to_string};
use crate::QuasiPoly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiPolyJson {
    pub period: usize,
    pub degree: usize,
    pub constituents: Vec<Vec<String>>,
}

impl From<&QuasiPoly> for QuasiPolyJson {
    fn from(qp: &QuasiPoly) -> Self {
        let degree = qp.degree();
        QuasiPolyJson {
            period: qp.period(),
            degree,
            constituents: qp
                .constituents()
                .iter()
                .map(|c| c.descending(degree).iter().map(rational_to_string).collect())
                .collect(),
        }
    }
}

impl TryFrom<&QuasiPolyJson> for QuasiPoly {
    type Error = Error;

    fn try_from(j: &QuasiPolyJson) -> Result<QuasiPoly> {
        if j.period == 0 || j.constituents.len() != j.period {
            return Err(Error::Parse(format!(
                "period {} but {} constituents",
                j.period,
                j.constituents.len()
            )));
        }
        let mut polys = Vec::with_capacity(j.period);
        for row in &j.constituents {
            if row.len() != j.degree + 1 {
                return Err(Error::Parse(format!(
                    "constituent has {} coefficients, degree {} needs {}",
                    row.len(),
                    j.degree,
                    j.degree + 1
                )));
            }
            let coeffs = row
                .iter()
                .map(|s| parse_rational(s).ok_or_else(|| Error::Parse(format!("bad rational `{s}`"))))
                .collect::<Result<Vec<_>>>()?;
            polys.push(Polynomial::from_descending(coeffs));
        }
        let qp = QuasiPoly::new(polys);
        if qp.degree() != j.degree && !qp.constituents().iter().all(Polynomial::is_zero) {
            return Err(Error::Parse(format!(
                "declared degree {} but no constituent reaches it",
                j.degree
            )));
        }
        Ok(qp)
    }
}

pub fn to_json(qp: &QuasiPoly) -> String {
    serde_json::to_string(&QuasiPolyJson::from(qp)).expect("plain data serializes")
}

pub fn from_json(text: &str) -> Result<QuasiPoly> {
    let j: QuasiPolyJson = serde_json::from_str(text)?;
    QuasiPoly::try_from(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;
    use crate::Poly;
    use proptest::prelude::*;

    #[test]
    fn layout() {
        let qp = QuasiPoly::new(vec![
            Poly::from_descending(vec![frac(1, 2), frac(0, 1), frac(7, 1)]),
            Poly::from_descending(vec![frac(1, 2), frac(-1, 3), frac(0, 1)]),
        ]);
        let text = to_json(&qp);
        assert_eq!(
            text,
            r#"{"period":2,"degree":2,"constituents":[["1/2","0/1","7/1"],["1/2","-1/3","0/1"]]}"#
        );
        assert_eq!(from_json(&text).unwrap(), qp);
    }

    #[test]
    fn rejects_malformed() {
        assert!(from_json(r#"{"period":2,"degree":0,"constituents":[["1/1"]]}"#).is_err());
        assert!(from_json(r#"{"period":1,"degree":1,"constituents":[["1/0","1"]]}"#).is_err());
        assert!(from_json(r#"{"period":1,"degree":2,"constituents":[["0","1","1"]]}"#).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(
            rows in (1usize..4, 0usize..5).prop_flat_map(|(p, d)| {
                proptest::collection::vec(
                    proptest::collection::vec((-50i64..50, 1i64..20), d + 1),
                    p,
                )
            })
        ) {
            let qp = QuasiPoly::new(
                rows.iter()
                    .map(|r| Poly::from_descending(r.iter().map(|&(a, b)| frac(a, b)).collect()))
                    .collect(),
            );
            prop_assert_eq!(from_json(&to_json(&qp)).unwrap(), qp);
        }
    }
}
