//! File formats: product files, obstruction databases and CSV output.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cheb::WeightedProduct;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::robinson::ObstructionRecord;
use crate::roots::RatInterval;
use crate::scalar::{format_rational, parse_rational};

type IntPoly = Poly<BigInt>;

/// Serde adapter storing a big integer as a decimal string.
pub mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter storing a rational as "p/q".
pub mod rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::scalar::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational '{s}'")))
    }
}

/// One factor of a product file; weight given as `alpha` or `exponent`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorJson {
    pub coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ProductJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    interval: RatInterval,
    obstruction: IntPoly,
    factors: Vec<FactorJson>,
}

/// A product together with the interval and obstruction it is certified on.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductFile {
    pub name: Option<String>,
    pub interval: RatInterval,
    pub obstruction: IntPoly,
    pub product: WeightedProduct,
}

fn parse_coeffs(coeffs: &[String]) -> Result<IntPoly> {
    let c = coeffs
        .iter()
        .enumerate()
        .map(|(k, s)| s.trim().parse::<BigInt>().map_err(|_| Error::parse(k, format!("bad coefficient '{s}'"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(c))
}

impl ProductFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ProductJson = serde_json::from_str(text)?;
        let mut alphas = Vec::new();
        let mut exps = Vec::new();
        for (k, f) in raw.factors.iter().enumerate() {
            let p = parse_coeffs(&f.coeffs)?;
            match (&f.alpha, &f.exponent) {
                (Some(a), None) => {
                    let a = parse_rational(a).ok_or_else(|| Error::parse(k, format!("bad alpha '{a}'")))?;
                    alphas.push((p, a));
                }
                (None, Some(e)) => {
                    let e = e.trim().parse::<BigInt>().map_err(|_| Error::parse(k, format!("bad exponent '{e}'")))?;
                    exps.push((p, e));
                }
                _ => return Err(Error::parse(k, "factor needs exactly one of alpha, exponent")),
            }
        }
        let product = match (alphas.is_empty(), exps.is_empty()) {
            (false, true) => WeightedProduct::new(alphas)?,
            (true, false) => WeightedProduct::from_exponents(exps)?,
            _ => return Err(Error::precondition("mixed alpha and exponent weights")),
        };
        Ok(ProductFile { name: raw.name, interval: raw.interval, obstruction: raw.obstruction, product })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// JSON with `alpha` weights.
    pub fn to_json(&self) -> String {
        let raw = ProductJson {
            name: self.name.clone(),
            interval: self.interval.clone(),
            obstruction: self.obstruction.clone(),
            factors: self
                .product
                .factors()
                .iter()
                .map(|(f, a)| FactorJson {
                    coeffs: f.coeffs().iter().map(|c| c.to_string()).collect(),
                    alpha: Some(format_rational(a)),
                    exponent: None,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("serialisable")
    }
}

/// Reads a JSONL obstruction database, skipping blank lines.
pub fn read_db(path: impl AsRef<Path>) -> Result<Vec<ObstructionRecord>> {
    parse_db(BufReader::new(fs::File::open(path)?))
}

pub fn parse_db(reader: impl BufRead) -> Result<Vec<ObstructionRecord>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(ObstructionRecord::from_json_line(&line)?);
        }
    }
    Ok(out)
}

pub fn write_db(mut w: impl Write, records: &[ObstructionRecord]) -> Result<()> {
    for r in records {
        writeln!(w, "{}", r.to_json_line())?;
    }
    Ok(())
}

/// Decimal with `sig` significant digits, rounded down (`up = false`) or up.
pub fn format_directed(q: &BigRational, sig: usize, up: bool) -> String {
    use num_integer::Integer;
    use num_traits::{Signed, Zero};
    if q.is_zero() {
        return "0".into();
    }
    let neg = q.is_negative();
    let a = q.abs();
    // exponent e with 10^e <= a < 10^(e+1)
    let ten = BigInt::from(10);
    let mut e: i64 = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let pow = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            BigRational::new(BigInt::from(1), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while pow(e) > a {
        e -= 1;
    }
    while pow(e + 1) <= a {
        e += 1;
    }
    let shift = sig as i64 - 1 - e;
    let scaled = &a * pow(shift);
    let (fl, rem) = scaled.numer().div_mod_floor(scaled.denom());
    let away = up != neg;
    let digits = if away && !rem.is_zero() { fl + 1 } else { fl };
    let value = BigRational::from_integer(digits) / pow(shift);
    let s = decimal_string(&value, shift.max(0) as usize);
    if neg {
        format!("-{s}")
    } else {
        s
    }
}

fn decimal_string(v: &BigRational, places: usize) -> String {
    let scaled = v * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let n = scaled.to_integer().to_string();
    if places == 0 {
        return n;
    }
    let n = format!("{n:0>width$}", width = places + 1);
    let (int, frac) = n.split_at(n.len() - places);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        int.to_string()
    } else {
        format!("{int}.{frac}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::rat;

    #[test]
    fn product_file_forms() {
        let text = r#"{"interval":{"lo":"0","hi":"1"},"obstruction":{"coeffs":["-1","2"]},
            "factors":[{"coeffs":["0","1"],"alpha":"1/2"},{"coeffs":["-1","1"],"alpha":"1/2"}]}"#;
        let p = ProductFile::from_json(text).unwrap();
        assert_eq!(p.product.alphas(), vec![rat(1, 2), rat(1, 2)]);
        let back = ProductFile::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        let exp = text.replace(r#""alpha":"1/2""#, r#""exponent":"3""#);
        assert_eq!(ProductFile::from_json(&exp).unwrap().product, p.product);
        let mixed = text.replacen(r#""alpha":"1/2""#, r#""exponent":"3""#, 1);
        assert!(ProductFile::from_json(&mixed).is_err());
    }

    #[test]
    fn decimal_interval_is_exact() {
        let text = r#"{"interval":{"lo":"1/4","hi":"0.303"},"obstruction":{"coeffs":["-1","4"]},
            "factors":[{"coeffs":["0","1"],"exponent":"1"}]}"#;
        let p = ProductFile::from_json(text).unwrap();
        assert_eq!(p.interval.hi, rat(303, 1000));
    }

    #[test]
    fn directed_decimals() {
        assert_eq!(format_directed(&rat(2, 3), 3, false), "0.666");
        assert_eq!(format_directed(&rat(2, 3), 3, true), "0.667");
        assert_eq!(format_directed(&rat(-2, 3), 3, false), "-0.667");
        assert_eq!(format_directed(&rat(5, 1), 10, true), "5");
        assert_eq!(format_directed(&rat(1234567, 1000), 4, true), "1235");
        assert_eq!(format_directed(&rat(1, 8), 10, false), "0.125");
    }
}
