//! Application specs, catalogs and plans shipped with the crate.

use std::fmt;
use std::str::FromStr;

use super::spec::AppSpec;
use crate::catalog::Catalog;
use crate::testplan::TestPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Three small entities; fast enough for exhaustive tests.
    Desk,
    /// Six tabbed entities behind 95 top-bar actions.
    ErpLike,
    /// One invoice entity matching the sample report fixture.
    InvoiceDemo,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Desk, Preset::ErpLike, Preset::InvoiceDemo];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Desk => "desk",
            Preset::ErpLike => "erp-like",
            Preset::InvoiceDemo => "invoice-demo",
        }
    }

    pub fn spec_toml(self) -> &'static str {
        match self {
            Preset::Desk => include_str!("../../presets/desk.toml"),
            Preset::ErpLike => include_str!("../../presets/erp-like.toml"),
            Preset::InvoiceDemo => include_str!("../../presets/invoice-demo.toml"),
        }
    }

    pub fn catalog_text(self) -> &'static str {
        match self {
            Preset::Desk => include_str!("../../presets/desk.catalog"),
            Preset::ErpLike => include_str!("../../presets/erp-like.catalog"),
            Preset::InvoiceDemo => include_str!("../../presets/invoice-demo.catalog"),
        }
    }

    /// Test plan shipped with the preset, as CSV with an area column.
    pub fn plan_text(self) -> Option<&'static str> {
        match self {
            Preset::Desk => None,
            Preset::ErpLike => Some(include_str!("../../presets/erp-like-plan.csv")),
            Preset::InvoiceDemo => Some(include_str!("../../presets/invoice-demo-plan.csv")),
        }
    }

    pub fn plan(self) -> Option<TestPlan> {
        self.plan_text().map(|t| TestPlan::parse_csv(t, None).expect("shipped plan parses"))
    }

    pub fn spec(self) -> AppSpec {
        AppSpec::from_toml_str(self.spec_toml()).expect("shipped preset is valid")
    }

    pub fn catalog(self) -> Catalog {
        Catalog::parse(self.catalog_text()).expect("shipped catalog parses")
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset {s:?} (expected desk, erp-like or invoice-demo)"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_load() {
        for p in Preset::ALL {
            let spec = p.spec();
            assert!(spec.validate().is_ok(), "{p}");
            assert!(!p.catalog().default_values().is_empty());
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert_eq!(Preset::ErpLike.catalog().len(), 35);
    }

    #[test]
    fn erp_like_shape() {
        let spec = Preset::ErpLike.spec();
        assert_eq!(spec.global_menu_actions, 95);
        let names: Vec<_> = spec.entity_types.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["Projects", "Orders", "Invoices", "Tickets", "Modules", "Offers"]);
        let lens: Vec<_> = spec.entity_types.iter().map(|e| e.min_save_sequence_len()).collect();
        assert_eq!(lens.iter().min(), Some(&8));
        assert_eq!(lens.iter().max(), Some(&38));
        let fields: usize = spec.entity_types.iter().map(|e| e.fields.len()).sum();
        // roughly twenty fields per entity
        assert!((18..=22).contains(&(fields / spec.entity_types.len())));
    }
}
