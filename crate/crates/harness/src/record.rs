//! Run records and their CSV form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

pub const SCHEMA_LINE: &str = "#schema=runrecord/v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: String,
    pub family: String,
    /// `key=value` pairs joined by `;`, in key order.
    pub params: String,
    pub seed: u64,
    pub status: String,
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
    pub learned: u64,
    pub wall_ms: f64,
}

impl RunRecord {
    pub fn solved(&self) -> bool {
        self.status == "SAT" || self.status == "UNSAT"
    }

    pub fn param_map(&self) -> BTreeMap<String, String> {
        self.params
            .split(';')
            .filter_map(|kv| kv.split_once('='))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }
}

pub fn encode_params(params: &BTreeMap<String, String>) -> String {
    params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

/// Compares strings with embedded integers by numeric value, so `n=8`
/// sorts before `n=16`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let da = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let db = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let (na, nb) = (trim_zeros(&a[..da]), trim_zeros(&b[..db]));
                let ord = na.len().cmp(&nb.len()).then_with(|| na.cmp(nb));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[da..];
                b = &b[db..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn trim_zeros(d: &[u8]) -> &[u8] {
    let k = d.iter().take_while(|&&c| c == b'0').count();
    &d[k.min(d.len().saturating_sub(1))..]
}

pub fn sort_records(records: &mut [RunRecord]) {
    records.sort_by(|a, b| {
        a.family
            .cmp(&b.family)
            .then_with(|| natural_cmp(&a.params, &b.params))
            .then_with(|| a.config.cmp(&b.config))
            .then_with(|| a.seed.cmp(&b.seed))
    });
}

pub fn write_records<W: Write>(mut out: W, records: &[RunRecord]) -> Result<()> {
    writeln!(out, "{SCHEMA_LINE}")?;
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: BufRead>(mut input: R) -> Result<Vec<RunRecord>> {
    let mut first = String::new();
    input.read_line(&mut first)?;
    if first.trim_end() != SCHEMA_LINE {
        bail!("not a run-record file: expected `{SCHEMA_LINE}`, found `{}`", first.trim_end());
    }
    let mut rd = csv::Reader::from_reader(input);
    rd.deserialize()
        .enumerate()
        .map(|(i, r)| r.with_context(|| format!("record {}", i + 1)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(params: &str, config: &str, seed: u64) -> RunRecord {
        RunRecord {
            config: config.into(),
            family: "ladder".into(),
            params: params.into(),
            seed,
            status: "SAT".into(),
            decisions: 3,
            propagations: 9,
            conflicts: 1,
            restarts: 0,
            learned: 1,
            wall_ms: 0.25,
        }
    }

    #[test]
    fn natural_order() {
        assert_eq!(natural_cmp("n=8", "n=16"), Ordering::Less);
        assert_eq!(natural_cmp("n=016", "n=16"), Ordering::Equal);
        assert_eq!(natural_cmp("a=2;n=8", "a=10;n=4"), Ordering::Less);
        assert_eq!(natural_cmp("n=8", "n=8;x=1"), Ordering::Less);
    }

    #[test]
    fn csv_round_trip_and_order() {
        let mut rs = vec![rec("n=16", "C-T-ND-RD", 0), rec("n=8", "C-T-ND-RD", 1), rec("n=8", "C-T-ND-RD", 0)];
        sort_records(&mut rs);
        assert_eq!(rs[0].seed, 0);
        assert_eq!(rs[2].params, "n=16");
        let mut buf = Vec::new();
        write_records(&mut buf, &rs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("#schema=runrecord/v1\nconfig,family,params,seed,status,"));
        assert_eq!(read_records(&buf[..]).unwrap(), rs);
        assert!(read_records(&b"config\n"[..]).is_err());
    }

    #[test]
    fn params_parse_back() {
        let m = rec("degree=4;n=8", "x", 0).param_map();
        assert_eq!(m["n"], "8");
        assert_eq!(encode_params(&m), "degree=4;n=8");
    }
}
