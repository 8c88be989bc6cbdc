use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::constructions::{
    central_product_d8_c4, cyclic, five_group, generalized_quaternion, modular_group, semidihedral, sl23, sym,
    FiveGroup,
};
use crate::error::{Error, Result};
use crate::group::{automorphisms, homomorphisms, is_isomorphic, ActionSpec, FiniteGroup};
use crate::limits::Limits;

use super::canon::canonize;
use super::enumerate::enumerate_order;
use super::names::known_name;

/// Largest order the constructive route is known to cover completely.
pub const CATALOG_SCOPE: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Filling Cayley tables.
    Exhaustive,
    /// Direct and semidirect products of smaller groups plus non-split extras.
    Constructive,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub key: String,
    /// Canonical table, carrying `name`.
    pub group: FiniteGroup,
    /// How the group was first obtained.
    pub source: String,
}

/// All groups of one order, sorted by canonical key.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub order: usize,
    pub method: Method,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn by_name(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn cache() -> &'static Mutex<HashMap<(usize, Method), Catalog>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, Method), Catalog>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn catalog(n: usize) -> Result<Catalog> {
    catalog_with(n, &Limits::default(), None)
}

/// Groups of order `n`. Without an explicit method, orders up to
/// `limits.exhaustive_cap` are enumerated and larger ones constructed.
pub fn catalog_with(n: usize, limits: &Limits, method: Option<Method>) -> Result<Catalog> {
    if n == 0 {
        return Err(Error::Domain("order must be positive".into()));
    }
    let method = method.unwrap_or(if n <= limits.exhaustive_cap { Method::Exhaustive } else { Method::Constructive });
    if method == Method::Constructive && n > CATALOG_SCOPE {
        return Err(Error::Domain(format!("order {n} is outside the catalog scope 1..={CATALOG_SCOPE}")));
    }
    if let Some(c) = cache().lock().expect("catalog cache").get(&(n, method)) {
        return Ok(c.clone());
    }
    let raw: Vec<(FiniteGroup, String)> = match method {
        Method::Exhaustive => {
            enumerate_order(n, limits)?.groups.into_iter().map(|c| (c.to_group(), "exhaustive".to_string())).collect()
        }
        Method::Constructive => constructive(n, limits)?,
    };
    let mut entries: Vec<CatalogEntry> = raw
        .into_iter()
        .map(|(g, source)| {
            let c = canonize(&g);
            let key = c.key();
            let name = known_name(&g, &key).unwrap_or_default();
            CatalogEntry { name, key, group: c.to_group(), source }
        })
        .collect();
    entries.sort_by(|a, b| a.key.cmp(&b.key));
    for (i, e) in entries.iter_mut().enumerate() {
        if e.name.is_empty() {
            e.name = format!("G{n}#{}", i + 1);
        }
        e.group = e.group.clone().with_name(e.name.clone());
    }
    let cat = Catalog { order: n, method, entries };
    cache().lock().expect("catalog cache").insert((n, method), cat.clone());
    Ok(cat)
}

/// Catalogs for every order `1..=max`.
pub fn all_groups_up_to(max: usize) -> Result<BTreeMap<usize, Catalog>> {
    (1..=max).map(|n| catalog(n).map(|c| (n, c))).collect()
}

/// `Aut(A)` as a permutation group, identity first.
fn automorphism_group(a: &FiniteGroup) -> Result<(FiniteGroup, Vec<Vec<usize>>)> {
    let auts = automorphisms(a);
    let index: HashMap<&[usize], usize> = auts.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let g = FiniteGroup::from_fn(auts.len(), |i, j| {
        let comp: Vec<usize> = auts[j].iter().map(|&x| auts[i][x]).collect();
        index[comp.as_slice()]
    })?;
    Ok((g, auts))
}

/// Cheap isomorphism invariant used to bucket candidates.
fn fingerprint(g: &FiniteGroup) -> (Vec<u32>, usize, usize) {
    let mut orders = g.element_orders().to_vec();
    orders.sort_unstable();
    (orders, g.center().size(), g.derived_subgroup().size())
}

fn extras(n: usize) -> Result<Vec<(FiniteGroup, &'static str)>> {
    let mut out = vec![(cyclic(n)?, "cyclic")];
    match n {
        8 => out.push((generalized_quaternion(8)?, "quaternion")),
        16 => {
            out.push((generalized_quaternion(16)?, "quaternion"));
            out.push((semidihedral(16)?, "semidihedral"));
            out.push((modular_group(2, 4)?, "modular"));
            out.push((central_product_d8_c4()?, "central product"));
        }
        24 => {
            out.push((sym(4)?, "symmetric"));
            out.push((sl23()?, "SL(2,3)"));
            out.push((five_group(FiveGroup::C2TimesA4)?, "C2 x A4"));
        }
        _ => {}
    }
    Ok(out)
}

fn divisors(n: usize) -> impl Iterator<Item = usize> {
    (2..n).filter(move |d| n.is_multiple_of(*d))
}

fn constructive(n: usize, limits: &Limits) -> Result<Vec<(FiniteGroup, String)>> {
    let mut buckets: HashMap<(Vec<u32>, usize, usize), Vec<usize>> = HashMap::new();
    let mut kept: Vec<(FiniteGroup, String)> = Vec::new();
    let mut offer = |g: FiniteGroup, source: String| {
        let fp = fingerprint(&g);
        let slot = buckets.entry(fp).or_default();
        if slot.iter().any(|&i| is_isomorphic(&kept[i].0, &g)) {
            return;
        }
        slot.push(kept.len());
        kept.push((g, source));
    };
    for (g, what) in extras(n)? {
        offer(g, what.to_string());
    }
    for a_order in divisors(n) {
        let b_order = n / a_order;
        let a_cat = catalog_with(a_order, limits, None)?;
        let b_cat = catalog_with(b_order, limits, None)?;
        for a in &a_cat.entries {
            let (aut, auts) = automorphism_group(&a.group)?;
            for b in &b_cat.entries {
                for hom in homomorphisms(&b.group, &aut) {
                    let images = hom.iter().map(|&h| auts[h].clone()).collect();
                    let spec = ActionSpec { actor: b.group.clone(), target: a.group.clone(), images };
                    let g = FiniteGroup::semidirect_product_with(&spec, limits)?;
                    let kind = if hom.iter().all(|&h| h == 0) { "x" } else { ":" };
                    offer(g, format!("{} {kind} {}", a.name, b.name));
                }
            }
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aut_group_shapes() {
        let (g, _) = automorphism_group(&cyclic(8).unwrap()).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.exponent(), 2);
        let (g, _) = automorphism_group(&crate::constructions::elementary_abelian(2, 2).unwrap()).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
    }

    #[test]
    fn constructive_matches_exhaustive_below_thirteen() {
        for n in 1..=12 {
            let e = catalog_with(n, &Limits::default(), Some(Method::Exhaustive)).unwrap();
            let c = catalog_with(n, &Limits::default(), Some(Method::Constructive)).unwrap();
            let ek: Vec<&str> = e.entries.iter().map(|x| x.key.as_str()).collect();
            let ck: Vec<&str> = c.entries.iter().map(|x| x.key.as_str()).collect();
            assert_eq!(ek, ck, "order {n}");
        }
    }

    #[test]
    fn counts_above_the_exhaustive_cap() {
        for (n, k) in [(15, 1), (16, 14), (18, 5), (20, 5), (21, 2), (24, 15)] {
            let c = catalog(n).unwrap();
            assert_eq!(c.len(), k, "order {n}");
            assert!(c.entries.iter().all(|e| !e.name.starts_with('G')), "unnamed group at order {n}");
        }
        let mut names: Vec<String> = catalog(18).unwrap().entries.into_iter().map(|e| e.name).collect();
        names.sort();
        assert_eq!(names, ["C18", "C3 x C6", "D18", "E(3,2) rx C2", "S3 x C3"]);
    }

    #[test]
    fn out_of_scope() {
        assert!(matches!(catalog(25), Err(Error::Domain(_))));
        assert!(catalog(0).is_err());
    }
}
