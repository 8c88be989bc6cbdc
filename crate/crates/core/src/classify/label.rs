use std::fmt;

use serde::Serialize;

use crate::constructions::*;
use crate::error::Result;
use crate::group::{is_isomorphic, FiniteGroup, SubgroupSet};
use crate::numeric::{gcd, prime_divisors, rational, ExactRational};
use crate::psi::psi_prime;

/// ψ′(D8).
pub fn d8_value() -> ExactRational {
    rational(19, 43).expect("nonzero")
}

/// ψ′(A4).
pub fn a4_value() -> ExactRational {
    rational(31, 77).expect("nonzero")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Tag {
    #[serde(rename = "CYCLIC")]
    Cyclic,
    #[serde(rename = "KLEIN_CYCLIC_x_Cm")]
    KleinCyclic,
    #[serde(rename = "M2K_x_Cm")]
    M2k,
    #[serde(rename = "Q8_x_Cm")]
    Q8,
    #[serde(rename = "C3_RTIMES_2K_x_Cm")]
    C3Rtimes2k,
    #[serde(rename = "C5_RTIMES_C2_x_Cm")]
    C5RtimesC2,
    #[serde(rename = "C5_RTIMES_C4_x_Cm")]
    C5RtimesC4,
    #[serde(rename = "D8_x_Cm")]
    D8,
    #[serde(rename = "D14_x_Cm")]
    D14,
    #[serde(rename = "Q16_x_Cm")]
    Q16,
    #[serde(rename = "C3xC3_x_Cm")]
    C3xC3,
    #[serde(rename = "C3_RTIMES_Q8_x_Cm")]
    C3RtimesQ8,
    #[serde(rename = "D12_x_Cm")]
    D12,
    #[serde(rename = "D18_x_Cm")]
    D18,
    #[serde(rename = "C5_RTIMES_2K_x_Cm")]
    C5Rtimes2k,
    #[serde(rename = "A4_x_Cm")]
    A4,
    #[serde(rename = "NONE")]
    None,
}

impl Tag {
    pub const ALL: [Tag; 17] = [
        Tag::Cyclic,
        Tag::KleinCyclic,
        Tag::M2k,
        Tag::Q8,
        Tag::C3Rtimes2k,
        Tag::C5RtimesC2,
        Tag::C5RtimesC4,
        Tag::D8,
        Tag::D14,
        Tag::Q16,
        Tag::C3xC3,
        Tag::C3RtimesQ8,
        Tag::D12,
        Tag::D18,
        Tag::C5Rtimes2k,
        Tag::A4,
        Tag::None,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Cyclic => "CYCLIC",
            Tag::KleinCyclic => "KLEIN_CYCLIC_x_Cm",
            Tag::M2k => "M2K_x_Cm",
            Tag::Q8 => "Q8_x_Cm",
            Tag::C3Rtimes2k => "C3_RTIMES_2K_x_Cm",
            Tag::C5RtimesC2 => "C5_RTIMES_C2_x_Cm",
            Tag::C5RtimesC4 => "C5_RTIMES_C4_x_Cm",
            Tag::D8 => "D8_x_Cm",
            Tag::D14 => "D14_x_Cm",
            Tag::Q16 => "Q16_x_Cm",
            Tag::C3xC3 => "C3xC3_x_Cm",
            Tag::C3RtimesQ8 => "C3_RTIMES_Q8_x_Cm",
            Tag::D12 => "D12_x_Cm",
            Tag::D18 => "D18_x_Cm",
            Tag::C5Rtimes2k => "C5_RTIMES_2K_x_Cm",
            Tag::A4 => "A4_x_Cm",
            Tag::None => "NONE",
        }
    }

    /// Families with ψ′ above 19/43.
    pub fn is_theorem_a(self) -> bool {
        matches!(
            self,
            Tag::Cyclic | Tag::KleinCyclic | Tag::M2k | Tag::Q8 | Tag::C3Rtimes2k | Tag::C5RtimesC2 | Tag::C5RtimesC4
        )
    }

    /// Families with ψ′ exactly 19/43.
    pub fn is_theorem_b(self) -> bool {
        matches!(self, Tag::D8 | Tag::D14)
    }

    /// Families with ψ′ strictly between 31/77 and 19/43.
    pub fn is_interval(self) -> bool {
        matches!(self, Tag::Q16 | Tag::C3xC3 | Tag::C3RtimesQ8 | Tag::D12 | Tag::D18 | Tag::C5Rtimes2k)
    }

    /// The cofactor `m` must be coprime to this number.
    pub fn coprime_to(self) -> u64 {
        match self {
            Tag::Cyclic | Tag::None => 1,
            Tag::KleinCyclic | Tag::M2k | Tag::Q8 | Tag::D8 | Tag::Q16 => 2,
            Tag::C3Rtimes2k | Tag::C3RtimesQ8 | Tag::D12 | Tag::D18 | Tag::A4 => 6,
            Tag::C3xC3 => 3,
            Tag::C5RtimesC2 | Tag::C5RtimesC4 | Tag::C5Rtimes2k => 10,
            Tag::D14 => 14,
        }
    }

    /// Whether every member has a modular subgroup lattice, when the family settles it.
    pub fn expected_modular(self) -> Option<bool> {
        match self {
            t if t.is_theorem_a() => Some(true),
            Tag::D14 => Some(true),
            Tag::D8 | Tag::A4 => Some(false),
            Tag::C3xC3 => Some(true),
            _ => None,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClassLabel {
    pub tag: Tag,
    /// Exponent of the 2-power parameter for the `2^k` families.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub m: u64,
}

impl ClassLabel {
    pub fn none() -> Self {
        ClassLabel { tag: Tag::None, k: None, m: 1 }
    }

    pub fn new(tag: Tag, k: Option<u32>, m: u64) -> Self {
        ClassLabel { tag, k, m }
    }

    pub fn is_none(&self) -> bool {
        self.tag == Tag::None
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag)?;
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        if self.tag != Tag::None {
            write!(f, " m={}", self.m)?;
        }
        Ok(())
    }
}

/// `G = core × C_m` with `C_m` the product of the central cyclic Sylow subgroups.
#[derive(Clone, Debug)]
pub struct CofactorSplit {
    pub m: u64,
    pub core: FiniteGroup,
}

pub fn split_cofactor(g: &FiniteGroup) -> CofactorSplit {
    let n = g.order() as u64;
    let center = g.center();
    let mut m = 1u64;
    let mut rest = Vec::new();
    for p in prime_divisors(n) {
        let syl = g.sylow_subgroup(p);
        let cyclic = syl.iter().any(|x| g.order_of(x) as usize == syl.size());
        if cyclic && syl.is_subset(&center) {
            m *= syl.size() as u64;
        } else {
            rest.push(p);
        }
    }
    let core = if rest.is_empty() {
        FiniteGroup::trivial()
    } else {
        let h = SubgroupSet::from_elements(g, g.pi_elements(&rest)).expect("a central Sylow complement is a subgroup");
        h.to_group(g).0
    };
    CofactorSplit { m, core }
}

fn two_power(n: usize) -> Option<u32> {
    n.is_power_of_two().then(|| n.trailing_zeros())
}

/// Every family model whose order equals `order`.
fn models(order: usize) -> Result<Vec<(Tag, Option<u32>, FiniteGroup)>> {
    let mut out = Vec::new();
    if let Some(k) = two_power(order) {
        if k >= 2 {
            out.push((Tag::KleinCyclic, Some(k), cyclic(order / 2)?.direct_product(&cyclic(2)?)?));
        }
        if k >= 4 {
            out.push((Tag::M2k, Some(k), modular_group(2, k)?));
        }
        if k == 3 {
            out.push((Tag::Q8, None, generalized_quaternion(8)?));
            out.push((Tag::D8, None, dihedral(8)?));
        }
        if k == 4 {
            out.push((Tag::Q16, None, generalized_quaternion(16)?));
        }
    }
    if order.is_multiple_of(3) {
        if let Some(k) = two_power(order / 3).filter(|&k| k >= 1) {
            out.push((Tag::C3Rtimes2k, Some(k), rtimes_iota(&cyclic(3)?, 1 << k)?));
        }
    }
    if order.is_multiple_of(5) {
        match two_power(order / 5) {
            Some(1) => out.push((Tag::C5RtimesC2, None, dihedral(10)?)),
            Some(2) => out.push((Tag::C5RtimesC4, None, rtimes_iota(&cyclic(5)?, 4)?)),
            Some(k) if k >= 3 => out.push((Tag::C5Rtimes2k, Some(k), rtimes_iota(&cyclic(5)?, 1 << k)?)),
            _ => {}
        }
    }
    match order {
        9 => out.push((Tag::C3xC3, None, elementary_abelian(3, 2)?)),
        12 => {
            out.push((Tag::D12, None, dihedral(12)?));
            out.push((Tag::A4, None, alt(4)?));
        }
        14 => out.push((Tag::D14, None, dihedral(14)?)),
        18 => out.push((Tag::D18, None, dihedral(18)?)),
        24 => out.push((Tag::C3RtimesQ8, None, metacyclic(12, 2, 11, 6)?)),
        _ => {}
    }
    Ok(out)
}

/// All family labels whose model matches the core; more than one breaks disjointness.
pub fn family_matches(g: &FiniteGroup) -> Result<Vec<ClassLabel>> {
    let split = split_cofactor(g);
    if split.core.order() == 1 {
        return Ok(vec![ClassLabel::new(Tag::Cyclic, None, split.m)]);
    }
    let mut out = Vec::new();
    for (tag, k, model) in models(split.core.order())? {
        if gcd(split.m, tag.coprime_to()) == 1 && is_isomorphic(&split.core, &model) {
            out.push(ClassLabel::new(tag, k, split.m));
        }
    }
    Ok(out)
}

/// The unique matching family, ignoring ψ′.
pub fn family_label(g: &FiniteGroup) -> Result<ClassLabel> {
    let m = family_matches(g)?;
    Ok(if m.len() == 1 { m[0] } else { ClassLabel::none() })
}

fn filtered(g: &FiniteGroup, keep: impl Fn(Tag) -> bool) -> Result<ClassLabel> {
    let l = family_label(g)?;
    Ok(if keep(l.tag) { l } else { ClassLabel::none() })
}

/// Family of a group with ψ′ > 19/43.
pub fn theorem_a_label(g: &FiniteGroup) -> Result<ClassLabel> {
    if psi_prime(g) <= d8_value() {
        return Ok(ClassLabel::none());
    }
    filtered(g, Tag::is_theorem_a)
}

/// Family of a group with ψ′ = 19/43.
pub fn theorem_b_label(g: &FiniteGroup) -> Result<ClassLabel> {
    if psi_prime(g) != d8_value() {
        return Ok(ClassLabel::none());
    }
    filtered(g, Tag::is_theorem_b)
}

/// Family of a group with 31/77 < ψ′ < 19/43.
pub fn interval_label(g: &FiniteGroup) -> Result<ClassLabel> {
    let v = psi_prime(g);
    if v <= a4_value() || v >= d8_value() {
        return Ok(ClassLabel::none());
    }
    filtered(g, Tag::is_interval)
}

/// `A4 × C_m` for non-supersoluble groups with ψ′ = 31/77.
pub fn boundary_label(g: &FiniteGroup) -> Result<ClassLabel> {
    if psi_prime(g) != a4_value() || g.is_supersoluble() {
        return Ok(ClassLabel::none());
    }
    filtered(g, |t| t == Tag::A4)
}

/// Builds `model(tag, k) × C_m`.
pub fn family_instance(label: ClassLabel) -> Result<FiniteGroup> {
    use crate::error::Error;
    let k = label.k.unwrap_or(0);
    let core = match label.tag {
        Tag::Cyclic => cyclic(1)?,
        Tag::KleinCyclic if k >= 2 => cyclic(1 << (k - 1))?.direct_product(&cyclic(2)?)?,
        Tag::M2k => modular_group(2, k)?,
        Tag::Q8 => generalized_quaternion(8)?,
        Tag::C3Rtimes2k if k >= 1 => rtimes_iota(&cyclic(3)?, 1 << k)?,
        Tag::C5RtimesC2 => dihedral(10)?,
        Tag::C5RtimesC4 => rtimes_iota(&cyclic(5)?, 4)?,
        Tag::D8 => dihedral(8)?,
        Tag::D14 => dihedral(14)?,
        Tag::Q16 => generalized_quaternion(16)?,
        Tag::C3xC3 => elementary_abelian(3, 2)?,
        Tag::C3RtimesQ8 => metacyclic(12, 2, 11, 6)?,
        Tag::D12 => dihedral(12)?,
        Tag::D18 => dihedral(18)?,
        Tag::C5Rtimes2k if k >= 3 => rtimes_iota(&cyclic(5)?, 1 << k)?,
        Tag::A4 => alt(4)?,
        _ => return Err(Error::Domain(format!("no model for {label}"))),
    };
    if gcd(label.m, label.tag.coprime_to()) != 1 || gcd(label.m, core.order() as u64) != 1 {
        return Err(Error::Domain(format!("cofactor in {label} violates the coprimality condition")));
    }
    if label.m == 1 {
        return Ok(core);
    }
    core.direct_product(&cyclic(label.m as usize)?)
}

/// Every labeled family instance of order at most `max_order`, for the given tags.
pub fn instances_up_to(max_order: usize, tags: &[Tag]) -> Vec<ClassLabel> {
    let mut out = Vec::new();
    for &tag in tags {
        let ks: Vec<Option<u32>> = match tag {
            Tag::KleinCyclic => (2..20).map(Some).collect(),
            Tag::M2k => (4..20).map(Some).collect(),
            Tag::C3Rtimes2k => (1..20).map(Some).collect(),
            Tag::C5Rtimes2k => (3..20).map(Some).collect(),
            Tag::Cyclic | Tag::None => continue,
            _ => vec![None],
        };
        for k in ks {
            let base = match family_instance(ClassLabel::new(tag, k, 1)) {
                Ok(g) => g.order(),
                Err(_) => continue,
            };
            if base > max_order {
                break;
            }
            for m in 1..=max_order / base {
                if gcd(m as u64, tag.coprime_to()) == 1 && gcd(m as u64, base as u64) == 1 {
                    out.push(ClassLabel::new(tag, k, m as u64));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::psi_prime;

    fn label(tag: Tag, k: Option<u32>, m: u64) -> ClassLabel {
        ClassLabel::new(tag, k, m)
    }

    #[test]
    fn theorem_a_examples() {
        let g = build(FamilySpec::times(Family::Quaternion { order: 8 }, 15)).unwrap();
        assert_eq!(theorem_a_label(&g).unwrap(), label(Tag::Q8, None, 15));
        let g = rtimes_iota(&cyclic(3).unwrap(), 8).unwrap();
        assert_eq!(theorem_a_label(&g).unwrap(), label(Tag::C3Rtimes2k, Some(3), 1));
        assert!(theorem_a_label(&dihedral(8).unwrap()).unwrap().is_none());
        assert_eq!(theorem_a_label(&cyclic(12).unwrap()).unwrap(), label(Tag::Cyclic, None, 12));
        assert_eq!(theorem_a_label(&sym(3).unwrap()).unwrap(), label(Tag::C3Rtimes2k, Some(1), 1));
    }

    #[test]
    fn theorem_b_examples() {
        let g = dihedral(8).unwrap().direct_product(&cyclic(3).unwrap()).unwrap();
        assert_eq!(theorem_b_label(&g).unwrap(), label(Tag::D8, None, 3));
        assert_eq!(theorem_b_label(&dihedral(14).unwrap()).unwrap(), label(Tag::D14, None, 1));
        assert!(theorem_b_label(&cyclic(8).unwrap()).unwrap().is_none());
        assert_eq!(Tag::D8.expected_modular(), Some(false));
        assert_eq!(Tag::D14.expected_modular(), Some(true));
    }

    #[test]
    fn interval_examples() {
        let q16 = generalized_quaternion(16).unwrap();
        assert_eq!(interval_label(&q16).unwrap(), label(Tag::Q16, None, 1));
        assert_eq!(psi_prime(&q16), rational(25, 57).unwrap());
        let dic = metacyclic(12, 2, 11, 6).unwrap();
        assert_eq!(interval_label(&dic).unwrap(), label(Tag::C3RtimesQ8, None, 1));
        assert_eq!(psi_prime(&dic), rational(125, 301).unwrap());
        let d18 = dihedral(18).unwrap();
        assert_eq!(interval_label(&d18).unwrap(), label(Tag::D18, None, 1));
        assert_eq!(psi_prime(&d18), rational(79, 183).unwrap());
        let g = elementary_abelian(3, 2).unwrap().direct_product(&cyclic(2).unwrap()).unwrap();
        assert_eq!(interval_label(&g).unwrap(), label(Tag::C3xC3, None, 2));
    }

    #[test]
    fn boundary_and_cofactor() {
        assert_eq!(boundary_label(&alt(4).unwrap()).unwrap(), label(Tag::A4, None, 1));
        let s = split_cofactor(&cyclic(2).unwrap().direct_product(&cyclic(10).unwrap()).unwrap());
        assert_eq!((s.m, s.core.order()), (5, 4));
        let s = split_cofactor(&rtimes_iota(&cyclic(3).unwrap(), 4).unwrap());
        assert_eq!((s.m, s.core.order()), (1, 12));
    }

    #[test]
    fn instances_respect_coprimality() {
        let all = instances_up_to(24, &[Tag::D8, Tag::D14]);
        assert_eq!(all, vec![label(Tag::D8, None, 1), label(Tag::D8, None, 3), label(Tag::D14, None, 1)]);
        for l in instances_up_to(60, &Tag::ALL) {
            let g = family_instance(l).unwrap();
            assert_eq!(family_label(&g).unwrap(), l, "{l}");
        }
        assert!(family_instance(label(Tag::D8, None, 2)).is_err());
    }
}
