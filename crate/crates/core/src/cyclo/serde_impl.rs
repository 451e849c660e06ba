use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{CycloField, CycloNumber, Rational};
use crate::error::{Error, Result};

/// Wire form `{"N": 24, "terms": [[power, "num", "den"], ...]}`.
///
/// Terms are monomials `(num/den) * zeta_N^power` and need not be reduced; the
/// reader reduces them. The writer emits the reduced power-basis terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycloJson {
    #[serde(rename = "N")]
    pub order: u32,
    pub terms: Vec<(i64, String, String)>,
}

impl From<&CycloNumber> for CycloJson {
    fn from(a: &CycloNumber) -> Self {
        CycloJson {
            order: a.order(),
            terms: a
                .terms()
                .into_iter()
                .map(|(k, c)| (k as i64, c.numer().to_string(), c.denom().to_string()))
                .collect(),
        }
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::Parse(format!("'{s}' is not an integer")))
}

impl TryFrom<&CycloJson> for CycloNumber {
    type Error = Error;

    fn try_from(j: &CycloJson) -> Result<CycloNumber> {
        let field = CycloField::get(j.order)?;
        let mut terms = Vec::with_capacity(j.terms.len());
        for (k, n, d) in &j.terms {
            let den = parse_int(d)?;
            if num_traits::Zero::is_zero(&den) {
                return Err(Error::Parse(format!("zero denominator in term for power {k}")));
            }
            terms.push((*k, Rational::new(parse_int(n)?, den)));
        }
        Ok(CycloNumber::from_terms(&field, &terms))
    }
}

impl Serialize for CycloNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CycloJson::deserialize(d)?;
        CycloNumber::try_from(&j).map_err(serde::de::Error::custom)
    }
}
