//! Required-item enumeration from identifier text alone.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use trustcat::catalog::{Catalog, ProtectionLevel};
use trustcat::id::{CatalogId, Dimension};

use super::id_gen::dimension_code;

pub fn required(
    catalog: &Catalog,
    levels: &BTreeMap<Dimension, ProtectionLevel>,
    interception_addressed: bool,
) -> BTreeSet<CatalogId> {
    let level_of = |code: &str| {
        levels
            .iter()
            .find(|(d, _)| dimension_code(**d) == code)
            .map(|(_, l)| *l)
            .expect("level for every assessed dimension")
    };
    catalog
        .items()
        .filter(|item| {
            let text = item.id.to_string();
            let parts: Vec<&str> = text.split('-').collect();
            match parts[0] {
                "PF" | "AT" => true,
                _ if parts[1] == "P" => true,
                dim => {
                    level_of(dim) != ProtectionLevel::Low
                        || (dim == "S"
                            && parts[1] == "R"
                            && parts[2] == "FS"
                            && interception_addressed)
                }
            }
        })
        .map(|item| item.id)
        .collect()
}

pub fn random_levels(rng: &mut ChaCha8Rng) -> BTreeMap<Dimension, ProtectionLevel> {
    let all = [
        ProtectionLevel::Low,
        ProtectionLevel::Medium,
        ProtectionLevel::High,
    ];
    Dimension::ASSESSED
        .into_iter()
        .map(|d| {
            let choices: &[ProtectionLevel] = if d == Dimension::Reliability {
                &all[1..]
            } else {
                &all
            };
            (d, choices[rng.gen_range(0..choices.len())])
        })
        .collect()
}

pub fn uniform(level: ProtectionLevel) -> BTreeMap<Dimension, ProtectionLevel> {
    Dimension::ASSESSED
        .into_iter()
        .map(|d| {
            (
                d,
                if d == Dimension::Reliability && level == ProtectionLevel::Low {
                    ProtectionLevel::Medium
                } else {
                    level
                },
            )
        })
        .collect()
}
