//! Small groups up to isomorphism: canonical tables, exhaustive enumeration and catalogs.

mod canon;
mod catalog;
mod enumerate;
mod names;

pub use canon::{canonize, canonize_checked, canonize_with, CanonicalTable, CANON_WORK_CAP};
pub use catalog::{all_groups_up_to, catalog, catalog_with, Catalog, CatalogEntry, Method, CATALOG_SCOPE};
pub use enumerate::{enumerate_order, Enumeration};
pub use names::{abelian_invariants, abelian_name, known_name, registry};
