//! The shipped tables, embedded at compile time.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use crate::bounds::{alpha_curve, cover_min_gap, reflected_cover, EnvelopeData};
use crate::cheb::{certify_attainment, CertifiedProduct};
use crate::error::Result;
use crate::io::{parse_db, ProductFile};
use crate::obstruction::ObstructionValue;
use crate::poly::Poly;
use crate::robinson::ObstructionRecord;
use crate::roots::RatInterval;
use crate::scalar::parse_rational;

type IntPoly = Poly<BigInt>;

pub const TABLE1_48: &str = include_str!("../../../fixtures/table1_48.json");
pub const TABLE3: &str = include_str!("../../../fixtures/table3.json");
pub const TABLE4: &str = include_str!("../../../fixtures/table4.json");

pub const TABLE2: [&str; 10] = [
    include_str!("../../../fixtures/table2_p01.json"),
    include_str!("../../../fixtures/table2_p02.json"),
    include_str!("../../../fixtures/table2_p03.json"),
    include_str!("../../../fixtures/table2_p04.json"),
    include_str!("../../../fixtures/table2_p05.json"),
    include_str!("../../../fixtures/table2_p06.json"),
    include_str!("../../../fixtures/table2_p07.json"),
    include_str!("../../../fixtures/table2_p08.json"),
    include_str!("../../../fixtures/table2_p09.json"),
    include_str!("../../../fixtures/table2_p10.json"),
];
pub const TABLE5_QUARTER: &str = include_str!("../../../fixtures/table5_quarter.json");
pub const TABLE5_THIRD: &str = include_str!("../../../fixtures/table5_third.json");
pub const DEGREE_670320: &str = include_str!("../../../fixtures/degree_670320.json");
pub const WITNESS_R: &str = include_str!("../../../fixtures/witness_r.json");
/// Desk sweep: degree <= 4, lead <= 9, box `[-1/2, 2]`, `t = 0.5773502691`.
pub const DESK_DB: &str = include_str!("../../../fixtures/desk_d4_a9.jsonl");

#[derive(Deserialize)]
struct Rows<T> {
    rows: Vec<T>,
}

#[derive(Deserialize)]
struct ObstructionRowJson {
    coeffs: Vec<String>,
    interval: RatInterval,
}

/// A row of the table of obstruction polynomials with value above 1/2.
#[derive(Clone, Debug)]
pub struct ObstructionRow {
    pub poly: IntPoly,
    /// Published (rounded) root range.
    pub interval: RatInterval,
}

#[derive(Deserialize)]
struct SpanRowJson {
    coeffs: Vec<String>,
    span: String,
}

/// A polynomial with its published root span.
#[derive(Clone, Debug)]
pub struct SpanRow {
    pub poly: IntPoly,
    pub span: BigRational,
}

#[derive(Deserialize)]
struct ThresholdRowJson {
    row: usize,
    base: String,
    root_index: u32,
    span: String,
}

/// A published threshold `t_i` with its cover bound `l_i^+`.
#[derive(Clone, Debug)]
pub struct ThresholdRow {
    pub row: usize,
    pub t: ObstructionValue,
    pub span: BigRational,
}

fn rational(s: &str) -> BigRational {
    parse_rational(s).expect("fixture rational")
}

fn poly(coeffs: &[String]) -> IntPoly {
    Poly::new(coeffs.iter().map(|c| c.parse().expect("fixture integer")).collect())
}

pub fn table1_48() -> Vec<ObstructionRow> {
    serde_json::from_str::<Rows<ObstructionRowJson>>(TABLE1_48)
        .expect("fixture")
        .rows
        .into_iter()
        .map(|r| ObstructionRow { poly: poly(&r.coeffs), interval: r.interval })
        .collect()
}

pub fn table3() -> Vec<SpanRow> {
    serde_json::from_str::<Rows<SpanRowJson>>(TABLE3)
        .expect("fixture")
        .rows
        .into_iter()
        .map(|r| SpanRow { poly: poly(&r.coeffs), span: rational(&r.span) })
        .collect()
}

pub fn table4() -> Vec<ThresholdRow> {
    serde_json::from_str::<Rows<ThresholdRowJson>>(TABLE4)
        .expect("fixture")
        .rows
        .into_iter()
        .map(|r| ThresholdRow {
            row: r.row,
            t: ObstructionValue::new(r.base.parse().expect("fixture integer"), r.root_index).expect("fixture value"),
            span: rational(&r.span),
        })
        .collect()
}

pub fn table2() -> Result<Vec<ProductFile>> {
    TABLE2.iter().map(|s| ProductFile::from_json(s)).collect()
}

pub fn table5() -> Result<Vec<ProductFile>> {
    [TABLE5_QUARTER, TABLE5_THIRD].iter().map(|s| ProductFile::from_json(s)).collect()
}

pub fn degree_670320() -> Result<ProductFile> {
    ProductFile::from_json(DEGREE_670320)
}

pub fn witness_r() -> Result<ProductFile> {
    ProductFile::from_json(WITNESS_R)
}

pub fn desk_db() -> Result<Vec<ObstructionRecord>> {
    parse_db(DESK_DB.as_bytes())
}

/// Records for the table of obstruction polynomials above 1/2.
pub fn table1_48_records() -> Result<Vec<ObstructionRecord>> {
    table1_48().into_iter().map(|r| ObstructionRecord::new(r.poly, 64)).collect()
}

/// The products of the table for `L-(1/2)`, certified.
pub fn table2_certified() -> Result<Vec<CertifiedProduct>> {
    table2()?.iter().map(|p| certify_attainment(&p.product, &p.interval, &p.obstruction)).collect()
}

/// Envelope inputs from the shipped tables: the obstruction records, the
/// certified products, the reflected lower cover at `t = 1/2` and the
/// `P_alpha` curve.
pub fn shipped_envelope_data(alpha_steps: u32) -> Result<EnvelopeData> {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut products = table2_certified()?;
    let cover = reflected_cover(&products)?;
    let gap = cover_min_gap(&cover, &half)?;
    for p in table5()? {
        products.push(certify_attainment(&p.product, &p.interval, &p.obstruction)?);
    }
    Ok(EnvelopeData {
        records: table1_48_records()?,
        products,
        lminus_covers: vec![(half, gap.value)],
        alpha_curve: alpha_curve(alpha_steps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        assert_eq!(table1_48().len(), 22);
        assert_eq!(table3().len(), 9);
        assert_eq!(table4().len(), 60);
        assert_eq!(table2().unwrap().len(), 10);
        assert_eq!(table5().unwrap().len(), 2);
        let big = degree_670320().unwrap();
        let (e, n) = big.product.integer_exponents();
        assert_eq!(e.len(), 8);
        let deg: BigInt = big.product.factors().iter().zip(&e).map(|((f, _), e)| e * BigInt::from(f.degree())).sum();
        assert_eq!(deg, BigInt::from(670320));
        assert_eq!(n, BigInt::from(670320));
        witness_r().unwrap();
    }
}
