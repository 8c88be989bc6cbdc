//! Family labels for the ψ′ classification and catalog-wide verification campaigns.

mod diagram;
mod label;
mod properties;
mod report;

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::lattice::is_modular_lattice_with;
use crate::limits::Limits;
use crate::numeric::{ExactRational, Nat};
use crate::psi::{psi, psi_prime};
use crate::smallgroups::{all_groups_up_to, canonize_checked, catalog_with, known_name, CatalogEntry, CATALOG_SCOPE};

pub use diagram::{diagram_data, diagram_json, write_diagram_csv, DiagramEntry};
pub use label::{
    a4_value, boundary_label, d8_value, family_instance, family_label, family_matches, instances_up_to, interval_label,
    split_cofactor, theorem_a_label, theorem_b_label, ClassLabel, CofactorSplit, Tag,
};
pub use report::{Campaign, Fraction, Params, Record, VerificationReport};

/// Everything a campaign needs to know about one catalog group.
#[derive(Clone, Debug)]
pub struct GroupFacts {
    pub entry: CatalogEntry,
    pub psi: Nat,
    pub psi_prime: ExactRational,
    pub modular: bool,
    pub matches: Vec<ClassLabel>,
}

impl GroupFacts {
    pub fn compute(entry: CatalogEntry, limits: &Limits) -> Result<Self> {
        let g = &entry.group;
        Ok(GroupFacts {
            psi: psi(g),
            psi_prime: psi_prime(g),
            modular: is_modular_lattice_with(g, limits)?.is_modular,
            matches: label::family_matches(g)?,
            entry,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.entry.group
    }

    pub fn family(&self) -> ClassLabel {
        if self.matches.len() == 1 {
            self.matches[0]
        } else {
            ClassLabel::none()
        }
    }

    fn label_where(&self, keep: impl Fn(Tag) -> bool) -> ClassLabel {
        let l = self.family();
        if keep(l.tag) {
            l
        } else {
            ClassLabel::none()
        }
    }

    pub fn theorem_a(&self) -> ClassLabel {
        if self.psi_prime > d8_value() {
            self.label_where(Tag::is_theorem_a)
        } else {
            ClassLabel::none()
        }
    }

    pub fn theorem_b(&self) -> ClassLabel {
        if self.psi_prime == d8_value() {
            self.label_where(Tag::is_theorem_b)
        } else {
            ClassLabel::none()
        }
    }

    pub fn interval(&self) -> ClassLabel {
        if self.psi_prime > a4_value() && self.psi_prime < d8_value() {
            self.label_where(Tag::is_interval)
        } else {
            ClassLabel::none()
        }
    }

    pub fn boundary(&self) -> ClassLabel {
        if self.psi_prime == a4_value() && !self.group().is_supersoluble() {
            self.label_where(|t| t == Tag::A4)
        } else {
            ClassLabel::none()
        }
    }

    /// Facts for a group outside the catalog, named from the registry when possible.
    pub fn from_group(g: &FiniteGroup, limits: &Limits) -> Result<Self> {
        let canon = canonize_checked(g)?;
        let key = canon.key();
        let name =
            known_name(g, &key).or_else(|| g.name().map(str::to_string)).unwrap_or_else(|| format!("G{}", g.order()));
        let entry =
            CatalogEntry { group: canon.to_group().with_name(name.clone()), name, key, source: "expression".into() };
        GroupFacts::compute(entry, limits)
    }

    /// The label of whichever ψ′ window the group falls in.
    pub fn label(&self) -> ClassLabel {
        [self.theorem_a(), self.theorem_b(), self.interval(), self.boundary()]
            .into_iter()
            .find(|l| !l.is_none())
            .unwrap_or_else(ClassLabel::none)
    }

    pub fn record(&self, label: ClassLabel) -> Record {
        Record {
            order: self.entry.group.order(),
            canonical_key: self.entry.key.clone(),
            name: self.entry.name.clone(),
            psi: self.psi.to_string(),
            psi_prime: Fraction::from(&self.psi_prime),
            modular: self.modular,
            label: label.tag,
            params: Params { k: label.k, m: label.m },
        }
    }

    fn describe(&self) -> String {
        format!("{} (order {}, psi' = {})", self.entry.name, self.entry.group.order(), self.psi_prime)
    }
}

/// Runs `f` on a pool sized by `limits.workers`, or on the global pool.
fn in_pool<T: Send>(limits: &Limits, f: impl FnOnce() -> T + Send) -> Result<T> {
    match limits.workers {
        Some(k) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Resource(format!("thread pool: {e}")))?
            .install(f)),
        None => Ok(f()),
    }
}

/// Facts for every catalog group of order at most `max_order`, sorted by order then key.
pub fn catalog_facts(max_order: usize, limits: &Limits) -> Result<Vec<GroupFacts>> {
    if max_order > CATALOG_SCOPE {
        return Err(Error::Domain(format!("max order {max_order} is outside the catalog scope 1..={CATALOG_SCOPE}")));
    }
    let entries: Vec<CatalogEntry> = if *limits == Limits::default() {
        all_groups_up_to(max_order)?.into_values().flat_map(|c| c.entries).collect()
    } else {
        let mut v = Vec::new();
        for n in 1..=max_order {
            v.extend(catalog_with(n, limits, None)?.entries);
        }
        v
    };
    let facts: Vec<Result<GroupFacts>> =
        in_pool(limits, || entries.into_par_iter().map(|e| GroupFacts::compute(e, limits)).collect())?;
    let mut facts = facts.into_iter().collect::<Result<Vec<_>>>()?;
    facts.sort_by(|a, b| (a.entry.group.order(), &a.entry.key).cmp(&(b.entry.group.order(), &b.entry.key)));
    Ok(facts)
}

fn disjointness(f: &GroupFacts, out: &mut Vec<String>) {
    if f.matches.len() > 1 {
        let tags: Vec<String> = f.matches.iter().map(ToString::to_string).collect();
        out.push(format!("{} matches several families: {}", f.describe(), tags.join(", ")));
    }
    let labels = [f.theorem_a(), f.theorem_b(), f.interval()];
    if labels.iter().filter(|l| !l.is_none()).count() > 1 {
        out.push(format!("{} carries more than one classification label", f.describe()));
    }
}

/// Checks that family instances built from the parametrized models satisfy `check`.
fn instance_checks(
    max_order: usize,
    tags: &[Tag],
    limits: &Limits,
    check: impl Fn(&ClassLabel, &FiniteGroup, &ExactRational, bool) -> Option<String>,
) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for l in instances_up_to(max_order, tags) {
        let g = family_instance(l)?;
        let got = family_label(&g)?;
        if got != l {
            out.push(format!("instance {l} is labeled {got}"));
        }
        let modular = is_modular_lattice_with(&g, limits)?.is_modular;
        if let Some(v) = check(&l, &g, &psi_prime(&g), modular) {
            out.push(v);
        }
    }
    Ok(out)
}

fn theorem_a(facts: &[GroupFacts], max_order: usize, limits: &Limits) -> Result<(Vec<Record>, Vec<String>)> {
    let mut v = Vec::new();
    let mut records = Vec::new();
    for f in facts {
        disjointness(f, &mut v);
        let l = f.theorem_a();
        if f.psi_prime > d8_value() {
            if l.is_none() {
                v.push(format!("{} exceeds 19/43 but matches no listed family", f.describe()));
            }
            if !f.modular {
                v.push(format!("{} exceeds 19/43 but its subgroup lattice is not modular", f.describe()));
            }
        }
        records.push(f.record(l));
    }
    let tags: Vec<Tag> = Tag::ALL.into_iter().filter(|t| t.is_theorem_a()).collect();
    v.extend(instance_checks(max_order, &tags, limits, |l, _, value, modular| {
        if *value <= d8_value() {
            Some(format!("instance {l} has psi' = {value}, not above 19/43"))
        } else if !modular {
            Some(format!("instance {l} is not an M-group"))
        } else {
            None
        }
    })?);
    Ok((records, v))
}

fn theorem_b(facts: &[GroupFacts], max_order: usize, limits: &Limits) -> Result<(Vec<Record>, Vec<String>)> {
    let mut v = Vec::new();
    let mut records = Vec::new();
    for f in facts {
        disjointness(f, &mut v);
        let l = f.theorem_b();
        if f.psi_prime == d8_value() {
            if l.is_none() {
                v.push(format!("{} attains 19/43 but is neither D8 x C_m nor D14 x C_m", f.describe()));
            } else if l.tag.expected_modular() != Some(f.modular) {
                v.push(format!("{} has modularity {} contrary to its family", f.describe(), f.modular));
            }
        }
        records.push(f.record(l));
    }
    v.extend(instance_checks(max_order, &[Tag::D8, Tag::D14], limits, |l, _, value, modular| {
        if *value != d8_value() {
            Some(format!("instance {l} has psi' = {value}, not 19/43"))
        } else if l.tag.expected_modular() != Some(modular) {
            Some(format!("instance {l} has modularity {modular}"))
        } else {
            None
        }
    })?);
    Ok((records, v))
}

fn has_normal_cyclic_sylow(g: &FiniteGroup, p: u64) -> bool {
    let syl = g.sylow_subgroup(p);
    g.is_normal(&syl) && syl.iter().any(|x| g.order_of(x) as usize == syl.size())
}

fn interval(facts: &[GroupFacts], max_order: usize, limits: &Limits) -> Result<(Vec<Record>, Vec<String>)> {
    let mut v = Vec::new();
    let mut records = Vec::new();
    for f in facts {
        disjointness(f, &mut v);
        let g = f.group();
        let n = g.order() as u64;
        let value = &f.psi_prime;
        let mut l = f.interval();
        if *value > a4_value() && *value < d8_value() && l.is_none() {
            v.push(format!("{} lies strictly between 31/77 and 19/43 but is not listed", f.describe()));
        }
        let prime_power = crate::numeric::prime_power(n);
        let is_p_group = |p: u64| matches!(prime_power, Some((q, _)) if q == p);
        if n > 1 && *value > a4_value() && !is_p_group(2) && !is_p_group(3) {
            let primes = crate::numeric::prime_divisors(n);
            let largest = *primes.last().expect("n > 1");
            let ok = (n.is_multiple_of(2) && has_normal_cyclic_sylow(g, 2)) || has_normal_cyclic_sylow(g, largest);
            if !ok {
                v.push(format!(
                    "{} exceeds 31/77 without a normal cyclic Sylow 2- or {largest}-subgroup",
                    f.describe()
                ));
            }
        }
        if let Some((p, _)) = prime_power {
            if p != 2 && !g.is_cyclic() && *value > d8_value() {
                v.push(format!("{} is a non-cyclic {p}-group above 19/43", f.describe()));
            }
        }
        if *value == a4_value() && !g.is_supersoluble() {
            l = f.boundary();
            if l.is_none() {
                v.push(format!("{} is non-supersoluble at 31/77 but not A4 x C_m", f.describe()));
            }
        }
        records.push(f.record(l));
    }
    let tags: Vec<Tag> = Tag::ALL.into_iter().filter(|t| t.is_interval()).collect();
    v.extend(instance_checks(max_order, &tags, limits, |l, _, value, _| {
        (*value <= a4_value() || *value >= d8_value())
            .then(|| format!("instance {l} has psi' = {value}, outside (31/77, 19/43)"))
    })?);
    v.extend(instance_checks(max_order, &[Tag::A4], limits, |l, g, value, _| {
        (*value != a4_value() || g.is_supersoluble())
            .then(|| format!("instance {l} is not a non-supersoluble group at 31/77"))
    })?);
    Ok((records, v))
}

pub fn run_campaign(campaign: Campaign, max_order: usize, limits: &Limits) -> Result<VerificationReport> {
    let start = Instant::now();
    let facts = catalog_facts(max_order, limits)?;
    let (records, violations) = match campaign {
        Campaign::TheoremA => theorem_a(&facts, max_order, limits)?,
        Campaign::TheoremB => theorem_b(&facts, max_order, limits)?,
        Campaign::Interval => interval(&facts, max_order, limits)?,
        Campaign::Properties => {
            let records = facts.iter().map(|f| f.record(f.family())).collect();
            (records, properties::run(&facts, limits)?)
        }
    };
    Ok(VerificationReport {
        campaign,
        max_order,
        generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        success: violations.is_empty(),
        records,
        violations,
        wall_time: start.elapsed(),
    })
}

/// Record for one group, labeled by the ψ′ window it falls in.
pub fn classify_group(g: &FiniteGroup, limits: &Limits) -> Result<Record> {
    let f = GroupFacts::from_group(g, limits)?;
    Ok(f.record(f.label()))
}

/// Every catalog group above 19/43 is a listed M-group, and every listed instance lies above 19/43.
pub fn verify_theorem_a(max_order: usize) -> Result<VerificationReport> {
    run_campaign(Campaign::TheoremA, max_order, &Limits::default())
}

/// The catalog groups at exactly 19/43 are the D8 and D14 families.
pub fn verify_theorem_b(max_order: usize) -> Result<VerificationReport> {
    run_campaign(Campaign::TheoremB, max_order, &Limits::default())
}

/// Groups strictly between 31/77 and 19/43, and the structural claims around that window.
pub fn verify_interval(max_order: usize) -> Result<VerificationReport> {
    run_campaign(Campaign::Interval, max_order, &Limits::default())
}

/// Bound lemmas and structural invariants over the catalog.
pub fn verify_properties(max_order: usize) -> Result<VerificationReport> {
    run_campaign(Campaign::Properties, max_order, &Limits::default())
}
