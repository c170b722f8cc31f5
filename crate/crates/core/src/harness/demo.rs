//! Small computed tables for the `demo` command.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graded::{fmt_rational, Rational};
use crate::lie::{dexp_direct, dexp_formula, SquareMatrix};
use crate::rr::verify_rr;
use crate::series::{series, SeriesName};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topic {
    ToddTable,
    HrrTable,
    Dexp,
}

impl Topic {
    pub const ALL: [Topic; 3] = [Topic::ToddTable, Topic::HrrTable, Topic::Dexp];

    pub fn name(self) -> &'static str {
        match self {
            Topic::ToddTable => "todd-table",
            Topic::HrrTable => "hrr-table",
            Topic::Dexp => "dexp",
        }
    }
}

impl FromStr for Topic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Topic> {
        Topic::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| {
            let names: Vec<_> = Topic::ALL.iter().map(|t| t.name()).collect();
            Error::invalid(format!("unknown demo topic {s:?}, expected one of {}", names.join(", ")))
        })
    }
}

/// A demo result in both output forms.
#[derive(Clone, Debug, PartialEq)]
pub struct DemoOutput {
    pub text: String,
    pub json: Value,
}

struct Params {
    map: BTreeMap<String, String>,
}

impl Params {
    fn parse(items: &[String], allowed: &[&str]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for it in items {
            let (k, v) = it.split_once('=').ok_or_else(|| Error::invalid(format!("parameter {it:?} is not key=value")))?;
            if !allowed.contains(&k) {
                return Err(Error::invalid(format!("unknown parameter {k:?}, expected one of {}", allowed.join(", "))));
            }
            map.insert(k.to_string(), v.to_string());
        }
        Ok(Params { map })
    }

    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::invalid(format!("bad value {v:?} for {key}"))),
        }
    }

    fn text<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.map.get(key).map_or(default, String::as_str)
    }
}

/// Parses `E23 + 1/2*E13` as an `n × n` matrix.
fn parse_units(text: &str, n: usize) -> Result<SquareMatrix> {
    let bad = || Error::parse(format!("bad matrix {text:?}, expected a sum like E23 + 1/2*E13"));
    let mut out = SquareMatrix::zero(n);
    let spaced = text.replace('-', "+-");
    for term in spaced.split('+').map(str::trim).filter(|t| !t.is_empty()) {
        let (neg, term) = term.strip_prefix('-').map_or((false, term), |t| (true, t.trim()));
        let (c, unit) = match term.split_once('*') {
            Some((c, u)) => (c.trim().parse::<Rational>().map_err(|_| bad())?, u.trim()),
            None => (Rational::from_integer(1.into()), term),
        };
        let digits = unit.strip_prefix('E').ok_or_else(bad)?.as_bytes();
        if digits.len() != 2 {
            return Err(bad());
        }
        let (i, j) = ((digits[0] as char).to_digit(10).ok_or_else(bad)?, (digits[1] as char).to_digit(10).ok_or_else(bad)?);
        let (i, j) = (i as usize, j as usize);
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::invalid(format!("E{i}{j} outside {n}×{n} matrices")));
        }
        let v = out.get(i - 1, j - 1) + if neg { -c } else { c };
        out.set(i - 1, j - 1, v);
    }
    Ok(out)
}

/// Runs a demo. `params` are `key=value` strings.
pub fn demo(topic: Topic, params: &[String]) -> Result<DemoOutput> {
    match topic {
        Topic::ToddTable => {
            let p = Params::parse(params, &["N", "series"])?;
            let n: usize = p.get("N", 6)?;
            if n > 40 {
                return Err(Error::invalid("N must be at most 40"));
            }
            let name: SeriesName = p.text("series", "todd").parse()?;
            let anchor = match name {
                SeriesName::Todd => "z/(1−e^{−z})",
                SeriesName::InvTodd => "(1−e^{−z})/z",
                SeriesName::DufloDen => "z/(e^z−1)",
            };
            let coeffs: Vec<String> = series(name, n).coeffs().iter().map(fmt_rational).collect();
            let mut text = format!("coefficients of {anchor} through z^{n}\n");
            for (k, c) in coeffs.iter().enumerate() {
                writeln!(text, "  z^{k}: {c}").unwrap();
            }
            Ok(DemoOutput { text, json: json!({"topic": topic.name(), "anchor": anchor, "order": n, "coefficients": coeffs}) })
        }
        Topic::HrrTable => {
            let p = Params::parse(params, &["n", "kmax"])?;
            let n: usize = p.get("n", 2)?;
            let kmax: i64 = p.get("kmax", 6)?;
            if !(1..=8).contains(&n) || !(0..=50).contains(&kmax) {
                return Err(Error::invalid("need 1 ≤ n ≤ 8 and 0 ≤ kmax ≤ 50"));
            }
            let rows: Vec<_> = (-kmax..=kmax).map(|k| verify_rr(n, k, &Rational::from_integer(1.into()))).collect();
            let anchor = "∫ ch(O(k)) td(T_Pⁿ) against the binomial χ(Pⁿ, O(k))";
            let mut text = format!("{anchor}, n = {n}\n{:>4} {:>10} {:>10}  match\n", "k", "χ_HRR", "χ_binom");
            for r in &rows {
                writeln!(text, "{:>4} {:>10} {:>10}  {}", r.k, fmt_rational(&r.chi_hrr), fmt_rational(&r.chi_binomial), r.matches)
                    .unwrap();
            }
            Ok(DemoOutput { text, json: json!({"topic": topic.name(), "anchor": anchor, "n": n, "rows": rows}) })
        }
        Topic::Dexp => {
            let p = Params::parse(params, &["n", "z", "w"])?;
            let n: usize = p.get("n", 3)?;
            if !(1..=9).contains(&n) {
                return Err(Error::invalid("n must lie in 1..=9"));
            }
            let z = parse_units(p.text("z", "E12"), n)?;
            let w = parse_units(p.text("w", "E23"), n)?;
            let direct = dexp_direct(&z, &w)?;
            let formula = dexp_formula(&z, &w)?;
            let anchor = "d/dt exp(Z+tW) at t = 0 against exp(Z)·(1 − e^{−ad Z})/ad Z applied to W";
            let text = format!("{anchor}\n  Z = {z}\n  W = {w}\n  direct  = {direct}\n  formula = {formula}\n  agree: {}\n", direct == formula);
            let json = json!({
                "topic": topic.name(), "anchor": anchor, "z": z.to_string(), "w": w.to_string(),
                "direct": direct.to_string(), "formula": formula.to_string(), "agree": direct == formula,
            });
            Ok(DemoOutput { text, json })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn todd_table() {
        let out = demo(Topic::ToddTable, &["N=6".into()]).unwrap();
        assert_eq!(out.json["coefficients"], json!(["1", "1/2", "1/12", "0", "-1/720", "0", "1/30240"]));
    }

    #[test]
    fn hrr_table_p1() {
        let out = demo(Topic::HrrTable, &["n=1".into(), "kmax=3".into()]).unwrap();
        for row in out.json["rows"].as_array().unwrap() {
            let k = row["k"].as_i64().unwrap();
            assert_eq!(row["chi_hrr"], json!((k + 1).to_string()));
        }
    }

    #[test]
    fn dexp_heisenberg() {
        let out = demo(Topic::Dexp, &[]).unwrap();
        let want = parse_units("E23 + 1/2*E13", 3).unwrap();
        assert_eq!(out.json["direct"], json!(want.to_string()));
        assert_eq!(out.json["agree"], json!(true));
    }

    #[test]
    fn bad_input() {
        assert!("nope".parse::<Topic>().is_err());
        assert!(demo(Topic::ToddTable, &["M=3".into()]).is_err());
        assert!(demo(Topic::Dexp, &["z=E44".into()]).is_err());
        assert!(demo(Topic::Dexp, &["z=E11".into()]).is_err());
    }
}
