//! JSON and TSV emission for result objects.

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

/// Objects that render as a TSV header plus data rows.
pub trait Tabular {
    fn header() -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize without error")
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn to_tsv<T: Tabular>(value: &T) -> String {
    let mut out = T::header().join("\t");
    out.push('\n');
    for row in value.rows() {
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}

pub fn emit<T: Serialize + Tabular>(value: &T, format: Format) -> String {
    match format {
        Format::Json => to_json(value),
        Format::Tsv => to_tsv(value),
    }
}

/// Big integers as decimal strings, so JSON readers never lose precision.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use num_bigint::BigUint;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|x| x.to_str_radix(10)))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
            Vec::<String>::deserialize(d)?
                .into_iter()
                .map(|t| t.parse().map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

impl Tabular for crate::constructions::BoundReport {
    fn header() -> Vec<&'static str> {
        vec!["n", "k", "s", "cover", "clique", "hm", "a_bounds", "max_nontrivial", "matching_bound"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let a = self.a_bounds.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        vec![vec![
            self.n.to_string(),
            self.k.to_string(),
            self.s.to_string(),
            self.cover_bound.to_string(),
            self.clique_bound.to_string(),
            self.hm_bound.to_string(),
            if a.is_empty() { "-".into() } else { a },
            self.max_nontrivial.to_string(),
            self.matching_bound.to_string(),
        ]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{bound_report, BoundReport};

    #[test]
    fn bound_report_tsv_row() {
        let tsv = to_tsv(&bound_report(10, 3, 2).unwrap());
        let mut lines = tsv.lines();
        assert_eq!(lines.next().unwrap().split('\t').next(), Some("n"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("10\t3\t2\t64\t56\t55\t60"), "{row}");
    }

    #[test]
    fn bound_report_json_round_trip() {
        let r = bound_report(200, 4, 30).unwrap();
        let back: BoundReport = from_json(&to_json(&r)).unwrap();
        assert_eq!(back, r);
    }
}
