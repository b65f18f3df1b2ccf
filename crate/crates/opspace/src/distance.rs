//! Pair tokens for `opspace distance` and the CSV rendering of the results.

use serde::Serialize;

use opspace_core::norms::{diverging_pair, CbEstimate, SpaceKind};

use crate::error::{CliError, Result};
use crate::report::DistanceRow;

/// Slack allowed when comparing a witness lower bound with its closed form.
pub const CLOSED_FORM_SLACK: f64 = 1e-6;

/// Values of `--k` and `--m` that parametrized tokens refer to.
#[derive(Debug, Clone, Copy, Default)]
pub struct PairParams {
    pub k: Option<usize>,
    pub m: Option<usize>,
}

fn need(v: Option<usize>, flag: &str, token: &str) -> Result<usize> {
    v.ok_or_else(|| CliError::Usage(format!("space {token} needs --{flag}")))
}

/// `Cn`, `Rn`, `Phin`, `Hk` (uses `--k`), `Hm` (`H_n^{m+1}`, uses `--m`),
/// `HR` (`∩_{j≤m+1} H_n^j`), `HL` (`∩_{j≥n-k} H_n^j`), an explicit level
/// `H3`, or an explicit intersection `H1+H3`.
pub fn parse_space(token: &str, n: usize, params: PairParams) -> Result<SpaceKind> {
    let kind = match token {
        "Cn" | "C" => SpaceKind::Column,
        "Rn" | "R" => SpaceKind::Row,
        "Phin" | "Phi" => SpaceKind::Phi,
        "Hk" => SpaceKind::Hnk(need(params.k, "k", token)?),
        "Hm" => SpaceKind::Hnk(need(params.m, "m", token)? + 1),
        "HR" => SpaceKind::right_type(need(params.m, "m", token)?),
        "HL" => SpaceKind::left_type(n, need(params.k, "k", token)?),
        _ => {
            let levels = token
                .split('+')
                .map(|part| {
                    part.strip_prefix('H')
                        .and_then(|d| d.parse::<usize>().ok())
                        .ok_or_else(|| CliError::Usage(format!("unknown space `{token}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            match levels.as_slice() {
                [k] => SpaceKind::Hnk(*k),
                _ => SpaceKind::Intersection(levels),
            }
        }
    };
    kind.components(n)?;
    Ok(kind)
}

/// Parses `A:B`.
pub fn parse_pair(pair: &str, n: usize, params: PairParams) -> Result<(SpaceKind, SpaceKind)> {
    let (a, b) = pair
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("pair `{pair}` is not of the form A:B")))?;
    Ok((parse_space(a, n, params)?, parse_space(b, n, params)?))
}

pub fn row(a: &SpaceKind, b: &SpaceKind, n: usize, est: &CbEstimate, diverging: bool) -> DistanceRow {
    let (la, lb) = (a.label(n), b.label(n));
    DistanceRow {
        pair: format!("{la}:{lb}"),
        a: la,
        b: lb,
        n,
        forward_lower: est.forward_lower,
        inverse_lower: est.inverse_lower,
        product_lower: est.product_lower,
        closed_form: est.closed_form,
        diverging,
        witness: est.witness_description.clone(),
    }
}

pub fn row_for_pair(a: &SpaceKind, b: &SpaceKind, n: usize, est: &CbEstimate) -> Result<DistanceRow> {
    Ok(row(a, b, n, est, diverging_pair(a, b, n)?))
}

pub fn within_closed_form(r: &DistanceRow) -> bool {
    r.closed_form.is_none_or(|c| r.product_lower <= c + CLOSED_FORM_SLACK)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    pair: &'a str,
    n: usize,
    forward_lower: f64,
    inverse_lower: f64,
    product_lower: f64,
    closed_form: Option<f64>,
    diverging: bool,
}

pub fn to_csv(rows: &[DistanceRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(CsvRow {
            pair: &r.pair,
            n: r.n,
            forward_lower: r.forward_lower,
            inverse_lower: r.inverse_lower,
            product_lower: r.product_lower,
            closed_form: r.closed_form,
            diverging: r.diverging,
        })?;
    }
    w.into_inner().map_err(|e| CliError::Usage(format!("csv buffer: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens() {
        let p = PairParams { k: Some(2), m: Some(1) };
        assert_eq!(parse_pair("Rn:Cn", 5, p).unwrap(), (SpaceKind::Row, SpaceKind::Column));
        assert_eq!(parse_space("Hm", 5, p).unwrap(), SpaceKind::Hnk(2));
        assert_eq!(parse_space("H4", 5, p).unwrap(), SpaceKind::Hnk(4));
        assert_eq!(parse_space("H1+H3", 5, p).unwrap(), SpaceKind::Intersection(vec![1, 3]));
        assert_eq!(parse_space("HR", 5, p).unwrap(), SpaceKind::Intersection(vec![1, 2]));
        assert_eq!(parse_space("HL", 5, p).unwrap(), SpaceKind::Intersection(vec![3, 4, 5]));
        assert!(parse_space("H9", 5, p).is_err());
        assert!(parse_space("Hk", 5, PairParams::default()).is_err());
        assert!(parse_pair("Rn", 5, p).is_err());
        assert!(parse_space("Q", 5, p).is_err());
    }
}
