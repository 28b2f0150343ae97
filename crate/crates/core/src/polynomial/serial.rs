use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{format_rational, parse_rational};
use crate::{Poly, Rational};

use super::{Algebraic, Polynomial};
use crate::UniPoly;

/// One serialized term: exponent tuple, numerator, denominator.
pub type PolyTerm = (Vec<u32>, String, String);

/// JSON form of a polynomial; terms are in ascending exponent order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub nvars: usize,
    pub terms: Vec<PolyTerm>,
}

impl From<&Poly> for PolyRecord {
    fn from(p: &Poly) -> Self {
        let terms = p
            .terms()
            .map(|(e, c)| {
                (
                    e[..p.nvars()].to_vec(),
                    c.numer().to_string(),
                    c.denom().to_string(),
                )
            })
            .collect();
        Self { nvars: p.nvars(), terms }
    }
}

impl TryFrom<&PolyRecord> for Poly {
    type Error = String;

    fn try_from(r: &PolyRecord) -> Result<Self, String> {
        if !(1..=3).contains(&r.nvars) {
            return Err(format!("invalid nvars {}", r.nvars));
        }
        let mut terms = Vec::with_capacity(r.terms.len());
        for (exps, n, d) in &r.terms {
            if exps.len() != r.nvars {
                return Err(format!("exponent tuple of length {} for nvars {}", exps.len(), r.nvars));
            }
            let mut e = [0u32; 3];
            e[..exps.len()].copy_from_slice(exps);
            let c: Rational = parse_rational(&format!("{n}/{d}"))
                .ok_or_else(|| format!("bad coefficient {n}/{d}"))?;
            terms.push((e, c));
        }
        Ok(Polynomial::from_terms(r.nvars, terms))
    }
}

impl Serialize for Polynomial<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PolyRecord::deserialize(d)?;
        Poly::try_from(&r).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AlgebraicRecord {
    Rational(String),
    Interval { poly: Vec<String>, lo: String, hi: String },
}

impl Serialize for Algebraic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = match self {
            Algebraic::Rational(q) => AlgebraicRecord::Rational(format_rational(q)),
            Algebraic::Interval { poly, lo, hi, .. } => AlgebraicRecord::Interval {
                poly: poly.poly.coeffs().iter().map(format_rational).collect(),
                lo: format_rational(lo),
                hi: format_rational(hi),
            },
        };
        r.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Algebraic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let parse = |x: &str| parse_rational(x).ok_or_else(|| D::Error::custom(format!("bad rational {x}")));
        match AlgebraicRecord::deserialize(d)? {
            AlgebraicRecord::Rational(q) => Ok(Algebraic::Rational(parse(&q)?)),
            AlgebraicRecord::Interval { poly, lo, hi } => {
                let coeffs = poly.iter().map(|c| parse(c)).collect::<Result<Vec<_>, _>>()?;
                Algebraic::try_interval(UniPoly::new(coeffs), parse(&lo)?, parse(&hi)?)
                    .ok_or_else(|| D::Error::custom("not an isolating interval"))
            }
        }
    }
}

/// Rational as a `"num/den"` string (`"num"` for integers).
pub fn rational_string(q: &Rational) -> String {
    format_rational(q)
}

/// `#[serde(with = "...")]` adapter storing a rational as a string.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        use serde::de::Error as _;
        let x = String::deserialize(d)?;
        parse_rational(&x).ok_or_else(|| D::Error::custom(format!("bad rational {x}")))
    }
}

/// Like [`rational_serde`] for optional values (`null` when absent).
pub mod opt_rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        q.as_ref().map(format_rational).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        use serde::de::Error as _;
        Option::<String>::deserialize(d)?
            .map(|x| parse_rational(&x).ok_or_else(|| D::Error::custom(format!("bad rational {x}"))))
            .transpose()
    }
}
