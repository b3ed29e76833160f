//! Random valid identifiers, assembled as text from their components.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use trustcat::id::Dimension;

/// Components of a generated identifier, as plain strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parts {
    pub dimension: &'static str,
    pub category: Option<&'static str>,
    pub area: Option<&'static str>,
    pub aspect: Option<&'static str>,
    pub number: Option<u8>,
}

impl Parts {
    pub fn render(&self) -> String {
        let mut s = self.dimension.to_owned();
        for p in [self.category, self.area, self.aspect]
            .into_iter()
            .flatten()
        {
            s.push('-');
            s.push_str(p);
        }
        if let Some(n) = self.number {
            s.push_str(&format!("-{n:02}"));
        }
        s
    }
}

const AREAS: &[(&str, &[&str])] = &[
    ("PF", &["FA", "ST"]),
    ("FN", &["FN", "CD"]),
    ("AC", &["TD", "IE"]),
    ("TR", &["UA", "EX", "AU", "CD"]),
    ("RE", &["SC", "RO", "IM", "UE", "CD"]),
    ("S", &["FS", "IA", "CD"]),
    ("DP", &["PD", "BI", "CD"]),
];

fn areas(dim: &str) -> &'static [&'static str] {
    AREAS
        .iter()
        .find(|(d, _)| *d == dim)
        .map(|(_, a)| *a)
        .unwrap()
}

pub fn random_parts(rng: &mut ChaCha8Rng) -> Parts {
    let dims = ["PF", "FN", "AC", "TR", "RE", "S", "DP", "AT"];
    let dimension = *dims.choose(rng).unwrap();
    let none = Parts {
        dimension,
        category: None,
        area: None,
        aspect: None,
        number: None,
    };
    match dimension {
        "AT" => none,
        "PF" => Parts {
            category: Some("T"),
            area: Some(areas("PF").choose(rng).unwrap()),
            number: Some(rng.gen_range(1..=99)),
            ..none
        },
        d => match rng.gen_range(0..4) {
            0 => Parts {
                category: Some("P"),
                ..none
            },
            1 => Parts {
                category: Some("S"),
                ..none
            },
            _ => {
                let aspect = *["RI", "CR", "ME", "OA"].choose(rng).unwrap();
                let number = if aspect == "OA" && rng.gen_bool(0.5) {
                    None
                } else {
                    Some(rng.gen_range(1..=99))
                };
                Parts {
                    category: Some("R"),
                    area: Some(areas(d).choose(rng).unwrap()),
                    aspect: Some(aspect),
                    number,
                    ..none
                }
            }
        },
    }
}

pub fn dimension_code(d: Dimension) -> &'static str {
    match d {
        Dimension::Profile => "PF",
        Dimension::Fairness => "FN",
        Dimension::AutonomyControl => "AC",
        Dimension::Transparency => "TR",
        Dimension::Reliability => "RE",
        Dimension::SafetySecurity => "S",
        Dimension::DataProtection => "DP",
        Dimension::CrossDimensional => "AT",
    }
}
