use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{rational, ExactRational};

/// One marked value on the ψ′ line.
#[derive(Clone, Debug, Serialize)]
pub struct DiagramEntry {
    #[serde(serialize_with = "as_fraction")]
    pub value: ExactRational,
    pub decimal: String,
    pub groups: Vec<&'static str>,
    /// Attained by a group, as opposed to only approached.
    pub attained: bool,
    /// Family whose values accumulate here, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_of: Option<&'static str>,
}

fn as_fraction<S: serde::Serializer>(v: &ExactRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn entry(num: u64, den: u64, groups: &[&'static str], attained: bool, limit_of: Option<&'static str>) -> DiagramEntry {
    let value = rational(num, den).expect("nonzero denominator");
    DiagramEntry { decimal: value.to_decimal(6), value, groups: groups.to_vec(), attained, limit_of }
}

/// Marked ψ′ values in increasing order.
pub fn diagram_data() -> Vec<DiagramEntry> {
    vec![
        entry(211, 1617, &["A5"], true, None),
        entry(31, 77, &["A4"], true, None),
        entry(25, 61, &["C3 x C3"], true, None),
        entry(125, 301, &["C3 : Q8"], true, None),
        entry(3, 7, &["D12"], true, Some("C5 rx C(2^k)")),
        entry(79, 183, &["D18"], true, None),
        entry(391, 903, &["C5 rx C8"], true, None),
        entry(25, 57, &["Q16"], true, None),
        entry(19, 43, &["D8", "C7 rx C2"], true, None),
        entry(103, 231, &["C5 rx C4"], true, None),
        entry(31, 63, &["C5 rx C2"], true, None),
        entry(1, 2, &[], false, Some("C(2^(k-1)) x C2 and M(2^k)")),
        entry(23, 43, &["C4 x C2"], true, None),
        entry(4, 7, &[], false, Some("C3 rx C(2^k)")),
        entry(13, 21, &["S3"], true, None),
        entry(27, 43, &["Q8"], true, None),
        entry(7, 11, &["C2 x C2"], true, None),
        entry(1, 1, &["cyclic groups"], true, None),
    ]
}

pub fn diagram_json() -> Result<String> {
    serde_json::to_string_pretty(&diagram_data()).map_err(|e| Error::Resource(format!("json: {e}")))
}

pub fn write_diagram_csv(w: impl Write) -> Result<()> {
    let err = |e: csv::Error| Error::Resource(format!("csv: {e}"));
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["value", "decimal", "groups", "attained", "limitOf"]).map_err(err)?;
    for e in diagram_data() {
        out.write_record([
            e.value.to_string(),
            e.decimal.clone(),
            e.groups.join("; "),
            e.attained.to_string(),
            e.limit_of.unwrap_or("").to_string(),
        ])
        .map_err(err)?;
    }
    out.flush().map_err(|e| Error::Resource(format!("csv: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;
    use crate::psi::{psi_prime, psi_prime_closed_form, psi_prime_pstar, ClosedForm};

    #[test]
    fn strictly_increasing() {
        let d = diagram_data();
        assert!(d.windows(2).all(|w| w[0].value < w[1].value));
        assert_eq!(d.len(), 18);
    }

    #[test]
    fn attained_values_match_groups() {
        let c = |n| cyclic(n).unwrap();
        let checks = [
            (alt(5).unwrap(), (211, 1617)),
            (alt(4).unwrap(), (31, 77)),
            (elementary_abelian(3, 2).unwrap(), (25, 61)),
            (metacyclic(12, 2, 11, 6).unwrap(), (125, 301)),
            (dihedral(12).unwrap(), (3, 7)),
            (dihedral(18).unwrap(), (79, 183)),
            (rtimes_iota(&c(5), 8).unwrap(), (391, 903)),
            (generalized_quaternion(16).unwrap(), (25, 57)),
            (dihedral(14).unwrap(), (19, 43)),
            (rtimes_iota(&c(5), 4).unwrap(), (103, 231)),
            (dihedral(10).unwrap(), (31, 63)),
            (c(4).direct_product(&c(2)).unwrap(), (23, 43)),
            (generalized_quaternion(8).unwrap(), (27, 43)),
        ];
        for (g, (a, b)) in checks {
            assert_eq!(psi_prime(&g), rational(a, b).unwrap(), "{:?}", g.name());
        }
        assert_eq!(diagram_data()[15].decimal, "0.627907");
    }

    #[test]
    fn limits_are_approached_from_above() {
        let half = rational(1, 2).unwrap();
        let four_sevenths = rational(4, 7).unwrap();
        let three_sevenths = rational(3, 7).unwrap();
        for k in 2..12 {
            assert!(psi_prime_closed_form(ClosedForm::KleinCyclic(k)).unwrap() > half);
            assert!(psi_prime_pstar(3, 1, k).unwrap() > four_sevenths);
            assert!(psi_prime_pstar(5, 1, k).unwrap() > three_sevenths);
        }
        let far = psi_prime_closed_form(ClosedForm::KleinCyclic(40)).unwrap();
        assert!((far.to_f64() - 0.5).abs() < 1e-9);
    }
}
