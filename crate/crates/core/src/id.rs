//! Catalog item identifiers.
//!
//! Every catalog entry is addressed by a hyphen-joined identifier such as
//! `FN-R-CD-CR-01`: the chapter code, the category letter, an optional area
//! code, an optional aspect and an optional two-digit number. Parsing is
//! case-insensitive and tolerates surrounding brackets; formatting always
//! produces the canonical uppercase form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Chapter code of the catalog, in chapter order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dimension {
    /// AI profile (questionnaire, not a dimension of trustworthiness).
    Profile,
    Fairness,
    AutonomyControl,
    Transparency,
    Reliability,
    SafetySecurity,
    DataProtection,
    /// Cross-dimensional assessment.
    CrossDimensional,
}

impl Dimension {
    pub const ALL: [Dimension; 8] = [
        Dimension::Profile,
        Dimension::Fairness,
        Dimension::AutonomyControl,
        Dimension::Transparency,
        Dimension::Reliability,
        Dimension::SafetySecurity,
        Dimension::DataProtection,
        Dimension::CrossDimensional,
    ];

    /// The six dimensions of trustworthiness that carry protection levels.
    pub const ASSESSED: [Dimension; 6] = [
        Dimension::Fairness,
        Dimension::AutonomyControl,
        Dimension::Transparency,
        Dimension::Reliability,
        Dimension::SafetySecurity,
        Dimension::DataProtection,
    ];

    pub fn code(self) -> &'static str {
        match self {
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

    pub fn from_code(code: &str) -> Option<Dimension> {
        Dimension::ALL.into_iter().find(|d| d.code() == code)
    }

    /// Area (or topic) codes valid for this chapter, in declaration order.
    pub fn area_codes(self) -> &'static [AreaCode] {
        use AreaCode::*;
        match self {
            Dimension::Profile => &[FA, ST],
            Dimension::Fairness => &[FN, CD],
            Dimension::AutonomyControl => &[TD, IE],
            Dimension::Transparency => &[UA, EX, AU, CD],
            Dimension::Reliability => &[SC, RO, IM, UE, CD],
            Dimension::SafetySecurity => &[FS, IA, CD],
            Dimension::DataProtection => &[PD, BI, CD],
            Dimension::CrossDimensional => &[],
        }
    }

    fn area_rank(self, area: AreaCode) -> usize {
        self.area_codes()
            .iter()
            .position(|a| *a == area)
            .unwrap_or(usize::MAX)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Dimension {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let up = s.trim().to_ascii_uppercase();
        Dimension::from_code(&up).ok_or(IdError::UnknownDimension(up))
    }
}

impl Serialize for Dimension {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for Dimension {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Two-letter risk-area or profile-topic code.
#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AreaCode {
    FA,
    ST,
    FN,
    CD,
    TD,
    IE,
    UA,
    EX,
    AU,
    SC,
    RO,
    IM,
    UE,
    FS,
    IA,
    PD,
    BI,
}

impl AreaCode {
    const ALL: [AreaCode; 17] = [
        AreaCode::FA,
        AreaCode::ST,
        AreaCode::FN,
        AreaCode::CD,
        AreaCode::TD,
        AreaCode::IE,
        AreaCode::UA,
        AreaCode::EX,
        AreaCode::AU,
        AreaCode::SC,
        AreaCode::RO,
        AreaCode::IM,
        AreaCode::UE,
        AreaCode::FS,
        AreaCode::IA,
        AreaCode::PD,
        AreaCode::BI,
    ];

    pub fn code(self) -> &'static str {
        match self {
            AreaCode::FA => "FA",
            AreaCode::ST => "ST",
            AreaCode::FN => "FN",
            AreaCode::CD => "CD",
            AreaCode::TD => "TD",
            AreaCode::IE => "IE",
            AreaCode::UA => "UA",
            AreaCode::EX => "EX",
            AreaCode::AU => "AU",
            AreaCode::SC => "SC",
            AreaCode::RO => "RO",
            AreaCode::IM => "IM",
            AreaCode::UE => "UE",
            AreaCode::FS => "FS",
            AreaCode::IA => "IA",
            AreaCode::PD => "PD",
            AreaCode::BI => "BI",
        }
    }

    pub fn from_code(code: &str) -> Option<AreaCode> {
        AreaCode::ALL.into_iter().find(|a| a.code() == code)
    }
}

impl fmt::Display for AreaCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Topic,
    Protection,
    RiskArea,
    Summary,
    CrossDimensional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Aspect {
    RiskAnalysis,
    Criterion,
    Measure,
    OverallAssessment,
}

impl Aspect {
    pub const ALL: [Aspect; 4] = [
        Aspect::RiskAnalysis,
        Aspect::Criterion,
        Aspect::Measure,
        Aspect::OverallAssessment,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Aspect::RiskAnalysis => "RI",
            Aspect::Criterion => "CR",
            Aspect::Measure => "ME",
            Aspect::OverallAssessment => "OA",
        }
    }

    pub fn from_code(code: &str) -> Option<Aspect> {
        Aspect::ALL.into_iter().find(|a| a.code() == code)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdError {
    #[error("empty identifier")]
    Empty,
    #[error("unknown dimension code `{0}`")]
    UnknownDimension(String),
    #[error("area code `{code}` is not defined for dimension {dimension}")]
    UnknownAreaCode { dimension: Dimension, code: String },
    #[error("malformed item number `{0}` (expected two digits, 01-99)")]
    MalformedNumber(String),
    #[error("identifier structure violation: {0}")]
    StructureViolation(String),
}

/// Parsed catalog identifier.
///
/// Fields are only reachable through accessors so that every value in
/// circulation satisfies the composition rules checked by [`CatalogId::new`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CatalogId {
    dimension: Dimension,
    category: Category,
    area: Option<AreaCode>,
    aspect: Option<Aspect>,
    number: Option<u8>,
}

impl CatalogId {
    pub fn new(
        dimension: Dimension,
        category: Category,
        area: Option<AreaCode>,
        aspect: Option<Aspect>,
        number: Option<u8>,
    ) -> Result<CatalogId, IdError> {
        let violation = |msg: &str| Err(IdError::StructureViolation(msg.to_owned()));
        if let Some(n) = number {
            if !(1..=99).contains(&n) {
                return Err(IdError::MalformedNumber(n.to_string()));
            }
        }
        if let Some(a) = area {
            if !dimension.area_codes().contains(&a) {
                return Err(IdError::UnknownAreaCode {
                    dimension,
                    code: a.code().to_owned(),
                });
            }
        }
        match (dimension, category) {
            (Dimension::CrossDimensional, Category::CrossDimensional) => {
                if area.is_some() || aspect.is_some() || number.is_some() {
                    return violation("AT carries no further components");
                }
            }
            (Dimension::CrossDimensional, _) | (_, Category::CrossDimensional) => {
                return violation("only AT is cross-dimensional");
            }
            (Dimension::Profile, Category::Topic) => {
                if area.is_none() || number.is_none() || aspect.is_some() {
                    return violation("profile topics need a topic code and a number");
                }
            }
            (Dimension::Profile, _) | (_, Category::Topic) => {
                return violation("topic category is reserved for the AI profile");
            }
            (_, Category::Protection | Category::Summary) => {
                if area.is_some() || aspect.is_some() || number.is_some() {
                    return violation("protection and summary items carry no further components");
                }
            }
            (_, Category::RiskArea) => match (area, aspect) {
                (None, _) => return violation("risk-area items need an area code"),
                (Some(_), None) => return violation("risk-area items need an aspect"),
                (Some(_), Some(Aspect::OverallAssessment)) => {}
                (Some(_), Some(_)) if number.is_none() => {
                    return violation("RI, CR and ME items need a number");
                }
                _ => {}
            },
        }
        Ok(CatalogId {
            dimension,
            category,
            area,
            aspect,
            number,
        })
    }

    pub fn cross_dimensional() -> CatalogId {
        CatalogId {
            dimension: Dimension::CrossDimensional,
            category: Category::CrossDimensional,
            area: None,
            aspect: None,
            number: None,
        }
    }

    pub fn protection(dimension: Dimension) -> Result<CatalogId, IdError> {
        CatalogId::new(dimension, Category::Protection, None, None, None)
    }

    pub fn summary(dimension: Dimension) -> Result<CatalogId, IdError> {
        CatalogId::new(dimension, Category::Summary, None, None, None)
    }

    pub fn risk_area(
        dimension: Dimension,
        area: AreaCode,
        aspect: Aspect,
        number: Option<u8>,
    ) -> Result<CatalogId, IdError> {
        CatalogId::new(
            dimension,
            Category::RiskArea,
            Some(area),
            Some(aspect),
            number,
        )
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn category(&self) -> Category {
        self.category
    }

    pub fn area(&self) -> Option<AreaCode> {
        self.area
    }

    pub fn aspect(&self) -> Option<Aspect> {
        self.aspect
    }

    pub fn number(&self) -> Option<u8> {
        self.number
    }

    /// True if this id lives in the given risk area of the given dimension.
    pub fn in_risk_area(&self, dimension: Dimension, area: AreaCode) -> bool {
        self.category == Category::RiskArea
            && self.dimension == dimension
            && self.area == Some(area)
    }
}

/// Parse an identifier, accepting surrounding whitespace, square brackets
/// and any letter case.
pub fn parse_id(text: &str) -> Result<CatalogId, IdError> {
    let trimmed = text.trim();
    let inner = match trimmed.strip_prefix('[') {
        Some(rest) => rest
            .strip_suffix(']')
            .ok_or_else(|| IdError::StructureViolation("unbalanced bracket".into()))?,
        None => trimmed,
    };
    let normalized = inner.trim().to_ascii_uppercase();
    if normalized.is_empty() {
        return Err(IdError::Empty);
    }
    let parts: Vec<&str> = normalized.split('-').collect();
    let dimension = Dimension::from_code(parts[0])
        .ok_or_else(|| IdError::UnknownDimension(parts[0].to_owned()))?;
    if dimension == Dimension::CrossDimensional {
        if parts.len() != 1 {
            return Err(IdError::StructureViolation(
                "AT carries no further components".into(),
            ));
        }
        return Ok(CatalogId::cross_dimensional());
    }
    let category = match parts.get(1).copied() {
        Some("T") => Category::Topic,
        Some("P") => Category::Protection,
        Some("R") => Category::RiskArea,
        Some("S") => Category::Summary,
        Some(other) => {
            return Err(IdError::StructureViolation(format!(
                "unknown category `{other}`"
            )))
        }
        None => return Err(IdError::StructureViolation("missing category".into())),
    };
    let max_parts = match category {
        Category::Topic => 4,
        Category::RiskArea => 5,
        _ => 2,
    };
    if parts.len() > max_parts {
        return Err(IdError::StructureViolation("trailing components".into()));
    }
    let area = match parts.get(2) {
        Some(code) => Some(
            AreaCode::from_code(code)
                .filter(|a| dimension.area_codes().contains(a))
                .ok_or_else(|| IdError::UnknownAreaCode {
                    dimension,
                    code: (*code).to_owned(),
                })?,
        ),
        None => None,
    };
    let (aspect, number_part) = match category {
        Category::Topic => (None, parts.get(3).copied()),
        Category::RiskArea => {
            let aspect = match parts.get(3) {
                Some(code) => Some(Aspect::from_code(code).ok_or_else(|| {
                    IdError::StructureViolation(format!("unknown aspect `{code}`"))
                })?),
                None => None,
            };
            (aspect, parts.get(4).copied())
        }
        _ => (None, None),
    };
    let number = number_part.map(parse_number).transpose()?;
    CatalogId::new(dimension, category, area, aspect, number)
}

fn parse_number(text: &str) -> Result<u8, IdError> {
    let malformed = || IdError::MalformedNumber(text.to_owned());
    if text.len() != 2 || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    match text.parse::<u8>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(malformed()),
    }
}

/// Canonical rendering, e.g. `DP-R-PD-OA-02`.
pub fn format_id(id: &CatalogId) -> String {
    id.to_string()
}

/// Report ordering: chapter, category, area (declaration order), aspect, number.
pub fn order_ids(a: &CatalogId, b: &CatalogId) -> Ordering {
    a.cmp(b)
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.dimension.code())?;
        let letter = match self.category {
            Category::CrossDimensional => return Ok(()),
            Category::Topic => "T",
            Category::Protection => "P",
            Category::RiskArea => "R",
            Category::Summary => "S",
        };
        write!(f, "-{letter}")?;
        if let Some(area) = self.area {
            write!(f, "-{area}")?;
        }
        if let Some(aspect) = self.aspect {
            write!(f, "-{}", aspect.code())?;
        }
        if let Some(n) = self.number {
            write!(f, "-{n:02}")?;
        }
        Ok(())
    }
}

impl FromStr for CatalogId {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_id(s)
    }
}

impl Ord for CatalogId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dimension
            .cmp(&other.dimension)
            .then(self.category.cmp(&other.category))
            .then_with(|| {
                let rank = |id: &CatalogId| id.area.map(|a| id.dimension.area_rank(a));
                rank(self).cmp(&rank(other))
            })
            .then(self.aspect.cmp(&other.aspect))
            .then(self.number.cmp(&other.number))
    }
}

impl PartialOrd for CatalogId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for CatalogId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CatalogId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_id(&s).map_err(serde::de::Error::custom)
    }
}

/// A risk area within a dimension, written `FN-R-CD`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RiskAreaRef {
    dimension: Dimension,
    area: AreaCode,
}

impl RiskAreaRef {
    pub fn new(dimension: Dimension, area: AreaCode) -> Result<RiskAreaRef, IdError> {
        if !Dimension::ASSESSED.contains(&dimension) || !dimension.area_codes().contains(&area) {
            return Err(IdError::UnknownAreaCode {
                dimension,
                code: area.code().to_owned(),
            });
        }
        Ok(RiskAreaRef { dimension, area })
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn area(&self) -> AreaCode {
        self.area
    }

    pub fn contains(&self, id: &CatalogId) -> bool {
        id.in_risk_area(self.dimension, self.area)
    }
}

impl fmt::Display for RiskAreaRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-R-{}", self.dimension, self.area)
    }
}

impl FromStr for RiskAreaRef {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let up = s.trim().to_ascii_uppercase();
        let parts: Vec<&str> = up.split('-').collect();
        if parts.len() != 3 || parts[1] != "R" {
            return Err(IdError::StructureViolation(format!(
                "risk area reference `{up}` must look like `FN-R-CD`"
            )));
        }
        let dimension = Dimension::from_code(parts[0])
            .ok_or_else(|| IdError::UnknownDimension(parts[0].to_owned()))?;
        let area = AreaCode::from_code(parts[2]).ok_or_else(|| IdError::UnknownAreaCode {
            dimension,
            code: parts[2].to_owned(),
        })?;
        RiskAreaRef::new(dimension, area)
    }
}

impl Ord for RiskAreaRef {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dimension.cmp(&other.dimension).then_with(|| {
            self.dimension
                .area_rank(self.area)
                .cmp(&other.dimension.area_rank(other.area))
        })
    }
}

impl PartialOrd for RiskAreaRef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for RiskAreaRef {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RiskAreaRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
