//! The machine-readable assessment catalog.
//!
//! The catalog ships as a JSON data file (`data/catalog.json`) that is
//! embedded in the library; [`load_catalog`] reads any file in the same
//! format so that a corrected transcription can be swapped in without a
//! rebuild.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::id::{parse_id, AreaCode, Aspect, CatalogId, Category, Dimension, RiskAreaRef};

/// The catalog transcription bundled with the engine.
pub const SHIPPED_CATALOG: &str = include_str!("../data/catalog.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RequirementType {
    /// Documentation.
    Do,
    /// Test report.
    Te,
    /// Process description.
    Pr,
}

impl RequirementType {
    pub fn code(self) -> &'static str {
        match self {
            RequirementType::Do => "Do",
            RequirementType::Te => "Te",
            RequirementType::Pr => "Pr",
        }
    }

    pub fn from_code(s: &str) -> Option<RequirementType> {
        match s {
            "Do" => Some(RequirementType::Do),
            "Te" => Some(RequirementType::Te),
            "Pr" => Some(RequirementType::Pr),
            _ => None,
        }
    }
}

impl fmt::Display for RequirementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl Serialize for RequirementType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for RequirementType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        RequirementType::from_code(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown requirement type `{s}`")))
    }
}

/// One evidence requirement of an item. Conditional requirements (printed in
/// parentheses in the catalog text) only apply when the situation they
/// describe arises; they are written with a `?` suffix in the data file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Requirement {
    pub kind: RequirementType,
    pub conditional: bool,
}

impl Serialize for Requirement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.conditional {
            s.collect_str(&format_args!("{}?", self.kind))
        } else {
            s.serialize_str(self.kind.code())
        }
    }
}

impl<'de> Deserialize<'de> for Requirement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let (code, conditional) = match s.strip_suffix('?') {
            Some(code) => (code, true),
            None => (s.as_str(), false),
        };
        let kind = RequirementType::from_code(code)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown requirement type `{s}`")))?;
        Ok(Requirement { kind, conditional })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LifecycleCategory {
    Data,
    AiComponent,
    Embedding,
    Operation,
    Unassigned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemKind {
    ProfileQuestion,
    ProtectionAnalysis,
    RiskAnalysis,
    Criterion,
    Measure,
    OverallAssessment,
    Summary,
    CrossDimensional,
}

impl ItemKind {
    /// The kind an identifier's shape implies.
    pub fn expected_for(id: &CatalogId) -> ItemKind {
        match id.category() {
            Category::Topic => ItemKind::ProfileQuestion,
            Category::Protection => ItemKind::ProtectionAnalysis,
            Category::Summary => ItemKind::Summary,
            Category::CrossDimensional => ItemKind::CrossDimensional,
            Category::RiskArea => match id.aspect() {
                Some(Aspect::RiskAnalysis) => ItemKind::RiskAnalysis,
                Some(Aspect::Criterion) => ItemKind::Criterion,
                Some(Aspect::Measure) => ItemKind::Measure,
                Some(Aspect::OverallAssessment) | None => ItemKind::OverallAssessment,
            },
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ItemKind::ProfileQuestion => "profile question",
            ItemKind::ProtectionAnalysis => "protection requirements analysis",
            ItemKind::RiskAnalysis => "risk analysis",
            ItemKind::Criterion => "criterion",
            ItemKind::Measure => "measure",
            ItemKind::OverallAssessment => "overall assessment",
            ItemKind::Summary => "summary",
            ItemKind::CrossDimensional => "cross-dimensional assessment",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogItem {
    pub id: CatalogId,
    /// Label as printed in the source text when it differs from `id`
    /// (the source reuses one measure number twice).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed_label: Option<String>,
    pub kind: ItemKind,
    pub title: String,
    #[serde(default)]
    pub requirements: Vec<Requirement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifecycle: Option<LifecycleCategory>,
    #[serde(default)]
    pub refs: Vec<CatalogId>,
    pub body: String,
}

impl CatalogItem {
    /// Requirement types that must be evidenced unconditionally.
    pub fn mandatory_requirements(&self) -> impl Iterator<Item = RequirementType> + '_ {
        self.requirements
            .iter()
            .filter(|r| !r.conditional)
            .map(|r| r.kind)
    }

    pub fn conditional_requirements(&self) -> impl Iterator<Item = RequirementType> + '_ {
        self.requirements
            .iter()
            .filter(|r| r.conditional)
            .map(|r| r.kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtectionLevel {
    Low,
    Medium,
    High,
}

impl ProtectionLevel {
    pub const ALL: [ProtectionLevel; 3] = [
        ProtectionLevel::Low,
        ProtectionLevel::Medium,
        ProtectionLevel::High,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtectionLevel::Low => "low",
            ProtectionLevel::Medium => "medium",
            ProtectionLevel::High => "high",
        }
    }

    /// Medium and high levels require the dimension's risk areas to be examined.
    pub fn requires_examination(self) -> bool {
        self != ProtectionLevel::Low
    }

    /// Levels an assessor may choose for a dimension. Reliability can never
    /// be low: every AI application must function reliably to some degree.
    pub fn allowed_for(dimension: Dimension) -> &'static [ProtectionLevel] {
        if dimension == Dimension::Reliability {
            &[ProtectionLevel::Medium, ProtectionLevel::High]
        } else {
            &ProtectionLevel::ALL
        }
    }
}

impl fmt::Display for ProtectionLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ProtectionLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "low" => Ok(ProtectionLevel::Low),
            "medium" => Ok(ProtectionLevel::Medium),
            "high" => Ok(ProtectionLevel::High),
            other => Err(format!("unknown protection level `{other}`")),
        }
    }
}

/// Qualitative damage descriptions per protection level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtectionTable {
    pub levels: BTreeMap<ProtectionLevel, String>,
}

impl ProtectionTable {
    pub fn allowed_levels(&self) -> impl Iterator<Item = ProtectionLevel> + '_ {
        self.levels.keys().copied()
    }
}

impl Serialize for AreaCode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for AreaCode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        AreaCode::from_code(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown area code `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskAreaSpec {
    pub code: AreaCode,
    pub name: String,
    pub items: Vec<CatalogItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionSpec {
    pub code: Dimension,
    pub name: String,
    pub description: String,
    pub protection: ProtectionTable,
    pub protection_item: CatalogItem,
    pub risk_areas: Vec<RiskAreaSpec>,
    pub summary: CatalogItem,
}

impl DimensionSpec {
    pub fn risk_area(&self, area: AreaCode) -> Option<&RiskAreaSpec> {
        self.risk_areas.iter().find(|a| a.code == area)
    }

    /// Protection item, risk-area items and summary, in document order.
    pub fn items(&self) -> impl Iterator<Item = &CatalogItem> {
        std::iter::once(&self.protection_item)
            .chain(self.risk_areas.iter().flat_map(|a| a.items.iter()))
            .chain(std::iter::once(&self.summary))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    pub version: String,
    pub profile: Vec<CatalogItem>,
    pub dimensions: Vec<DimensionSpec>,
    pub at: CatalogItem,
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("catalog schema error: {0}")]
    Schema(String),
    #[error("catalog read error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("catalog item `{0}` not found")]
pub struct NotFound(pub String);

impl Catalog {
    pub fn shipped() -> Catalog {
        from_json_str(SHIPPED_CATALOG).expect("bundled catalog is well-formed")
    }

    /// Every item in document order: profile, then each dimension, then AT.
    pub fn items(&self) -> impl Iterator<Item = &CatalogItem> {
        self.profile
            .iter()
            .chain(self.dimensions.iter().flat_map(|d| d.items()))
            .chain(std::iter::once(&self.at))
    }

    pub fn dimension(&self, dimension: Dimension) -> Option<&DimensionSpec> {
        self.dimensions.iter().find(|d| d.code == dimension)
    }

    pub fn risk_area(&self, area: RiskAreaRef) -> Option<&RiskAreaSpec> {
        self.dimension(area.dimension())?.risk_area(area.area())
    }

    pub fn lookup(&self, id: &CatalogId) -> Result<&CatalogItem, NotFound> {
        lookup(self, id)
    }

    /// Look an item up by its textual id; unparseable text is reported as
    /// not found.
    pub fn find(&self, text: &str) -> Result<&CatalogItem, NotFound> {
        let id = parse_id(text).map_err(|_| NotFound(text.trim().to_owned()))?;
        lookup(self, &id)
    }

    /// Map from id to item; the first occurrence wins when ids repeat.
    pub fn index(&self) -> HashMap<CatalogId, &CatalogItem> {
        let mut map = HashMap::new();
        for item in self.items() {
            map.entry(item.id).or_insert(item);
        }
        map
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("catalog serializes");
        out.push('\n');
        out
    }
}

pub fn lookup<'c>(catalog: &'c Catalog, id: &CatalogId) -> Result<&'c CatalogItem, NotFound> {
    catalog
        .items()
        .find(|item| item.id == *id)
        .ok_or_else(|| NotFound(id.to_string()))
}

pub fn load_catalog<R: Read>(mut source: R) -> Result<Catalog, CatalogError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    from_json_str(&text)
}

pub fn from_json_str(text: &str) -> Result<Catalog, CatalogError> {
    serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category as C;
        match e.classify() {
            C::Data => CatalogError::Schema(e.to_string()),
            C::Io | C::Syntax | C::Eof => CatalogError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            },
        }
    })
}

/// A structural problem in a catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogDefect {
    DuplicateId(CatalogId),
    DanglingCrossRef {
        from: CatalogId,
        to: CatalogId,
    },
    SelfReference(CatalogId),
    KindMismatch {
        id: CatalogId,
        declared: ItemKind,
        expected: ItemKind,
    },
    MisplacedItem {
        id: CatalogId,
        expected_location: String,
    },
    MissingRequirementTypes(CatalogId),
    MissingLifecycle(CatalogId),
    IncompleteRiskArea {
        area: String,
        missing: ItemKind,
    },
    NonContiguousNumbering {
        id: CatalogId,
        expected: u8,
    },
    ProtectionLevels {
        dimension: Dimension,
    },
    RiskAreaSet {
        dimension: Dimension,
    },
    DimensionSet,
}

impl CatalogDefect {
    pub fn rule(&self) -> &'static str {
        match self {
            CatalogDefect::DuplicateId(_) => "DuplicateId",
            CatalogDefect::DanglingCrossRef { .. } => "DanglingCrossRef",
            CatalogDefect::SelfReference(_) => "SelfReference",
            CatalogDefect::KindMismatch { .. } => "KindMismatch",
            CatalogDefect::MisplacedItem { .. } => "MisplacedItem",
            CatalogDefect::MissingRequirementTypes(_) => "MissingRequirementTypes",
            CatalogDefect::MissingLifecycle(_) => "MissingLifecycle",
            CatalogDefect::IncompleteRiskArea { .. } => "IncompleteRiskArea",
            CatalogDefect::NonContiguousNumbering { .. } => "NonContiguousNumbering",
            CatalogDefect::ProtectionLevels { .. } => "ProtectionLevels",
            CatalogDefect::RiskAreaSet { .. } => "RiskAreaSet",
            CatalogDefect::DimensionSet => "DimensionSet",
        }
    }

    /// The offending id or area, rendered canonically.
    pub fn subject(&self) -> String {
        match self {
            CatalogDefect::DuplicateId(id)
            | CatalogDefect::SelfReference(id)
            | CatalogDefect::MissingRequirementTypes(id)
            | CatalogDefect::MissingLifecycle(id)
            | CatalogDefect::DanglingCrossRef { from: id, .. }
            | CatalogDefect::KindMismatch { id, .. }
            | CatalogDefect::MisplacedItem { id, .. }
            | CatalogDefect::NonContiguousNumbering { id, .. } => id.to_string(),
            CatalogDefect::IncompleteRiskArea { area, .. } => area.clone(),
            CatalogDefect::ProtectionLevels { dimension }
            | CatalogDefect::RiskAreaSet { dimension } => dimension.to_string(),
            CatalogDefect::DimensionSet => "catalog".to_owned(),
        }
    }
}

impl fmt::Display for CatalogDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: ", self.rule(), self.subject())?;
        match self {
            CatalogDefect::DuplicateId(_) => write!(f, "id appears more than once"),
            CatalogDefect::DanglingCrossRef { to, .. } => write!(f, "cites missing item {to}"),
            CatalogDefect::SelfReference(_) => write!(f, "cites itself"),
            CatalogDefect::KindMismatch {
                declared, expected, ..
            } => write!(
                f,
                "declared as {} but the id denotes a {}",
                declared.label(),
                expected.label()
            ),
            CatalogDefect::MisplacedItem {
                expected_location, ..
            } => write!(f, "item belongs in {expected_location}"),
            CatalogDefect::MissingRequirementTypes(_) => {
                write!(f, "measure lists no requirement types")
            }
            CatalogDefect::MissingLifecycle(_) => write!(f, "measure has no lifecycle category"),
            CatalogDefect::IncompleteRiskArea { missing, .. } => {
                write!(f, "risk area has no {} item", missing.label())
            }
            CatalogDefect::NonContiguousNumbering { expected, .. } => {
                write!(f, "expected number {expected:02} at this position")
            }
            CatalogDefect::ProtectionLevels { .. } => {
                write!(f, "protection table does not match the allowed levels")
            }
            CatalogDefect::RiskAreaSet { .. } => {
                write!(
                    f,
                    "risk areas differ from the dimension's defined area codes"
                )
            }
            CatalogDefect::DimensionSet => write!(
                f,
                "dimensions must be FN, AC, TR, RE, S, DP in chapter order"
            ),
        }
    }
}

/// Check every structural invariant of the catalog. An empty result means
/// the catalog is sound.
pub fn validate_catalog(catalog: &Catalog) -> Vec<CatalogDefect> {
    let mut defects = Vec::new();

    let dims: Vec<Dimension> = catalog.dimensions.iter().map(|d| d.code).collect();
    if dims != Dimension::ASSESSED {
        defects.push(CatalogDefect::DimensionSet);
    }

    let mut seen = HashSet::new();
    for item in catalog.items() {
        if !seen.insert(item.id) {
            defects.push(CatalogDefect::DuplicateId(item.id));
        }
    }

    for item in catalog.items() {
        let expected = ItemKind::expected_for(&item.id);
        if item.kind != expected {
            defects.push(CatalogDefect::KindMismatch {
                id: item.id,
                declared: item.kind,
                expected,
            });
        }
        if item.kind == ItemKind::Measure {
            if item.requirements.is_empty() {
                defects.push(CatalogDefect::MissingRequirementTypes(item.id));
            }
            if item.lifecycle.is_none() {
                defects.push(CatalogDefect::MissingLifecycle(item.id));
            }
        }
        for r in &item.refs {
            if *r == item.id {
                defects.push(CatalogDefect::SelfReference(item.id));
            } else if !seen.contains(r) {
                defects.push(CatalogDefect::DanglingCrossRef {
                    from: item.id,
                    to: *r,
                });
            }
        }
    }

    for item in &catalog.profile {
        if item.id.dimension() != Dimension::Profile {
            defects.push(CatalogDefect::MisplacedItem {
                id: item.id,
                expected_location: "a dimension".into(),
            });
        }
    }
    if catalog.at.id != CatalogId::cross_dimensional() {
        defects.push(CatalogDefect::MisplacedItem {
            id: catalog.at.id,
            expected_location: "a dimension".into(),
        });
    }

    for dim in &catalog.dimensions {
        validate_dimension(dim, &mut defects);
    }
    defects
}

fn validate_dimension(dim: &DimensionSpec, defects: &mut Vec<CatalogDefect>) {
    let allowed: Vec<ProtectionLevel> = dim.protection.allowed_levels().collect();
    if allowed != ProtectionLevel::allowed_for(dim.code) {
        defects.push(CatalogDefect::ProtectionLevels {
            dimension: dim.code,
        });
    }
    let codes: Vec<AreaCode> = dim.risk_areas.iter().map(|a| a.code).collect();
    if codes != dim.code.area_codes() {
        defects.push(CatalogDefect::RiskAreaSet {
            dimension: dim.code,
        });
    }
    let expect_at = |item: &CatalogItem, wanted: Option<CatalogId>, defects: &mut Vec<_>| {
        if Some(item.id) != wanted {
            defects.push(CatalogDefect::MisplacedItem {
                id: item.id,
                expected_location: wanted
                    .map(|w| format!("slot {w}"))
                    .unwrap_or_else(|| "another dimension".into()),
            });
        }
    };
    expect_at(
        &dim.protection_item,
        CatalogId::protection(dim.code).ok(),
        defects,
    );
    expect_at(&dim.summary, CatalogId::summary(dim.code).ok(), defects);

    for area in &dim.risk_areas {
        let label = format!("{}-R-{}", dim.code, area.code);
        for item in &area.items {
            if !item.id.in_risk_area(dim.code, area.code) {
                defects.push(CatalogDefect::MisplacedItem {
                    id: item.id,
                    expected_location: format!("risk area {}", item_area_label(&item.id)),
                });
            }
        }
        for kind in [
            ItemKind::RiskAnalysis,
            ItemKind::Criterion,
            ItemKind::OverallAssessment,
        ] {
            if !area.items.iter().any(|i| i.kind == kind) {
                defects.push(CatalogDefect::IncompleteRiskArea {
                    area: label.clone(),
                    missing: kind,
                });
            }
        }
        for aspect in Aspect::ALL {
            let numbered: Vec<&CatalogItem> = area
                .items
                .iter()
                .filter(|i| i.id.aspect() == Some(aspect))
                .collect();
            if aspect == Aspect::OverallAssessment
                && numbered.len() == 1
                && numbered[0].id.number().is_none()
            {
                continue;
            }
            for (pos, item) in numbered.iter().enumerate() {
                let expected = (pos + 1) as u8;
                if item.id.number() != Some(expected) {
                    defects.push(CatalogDefect::NonContiguousNumbering {
                        id: item.id,
                        expected,
                    });
                    break;
                }
            }
        }
    }
}

fn item_area_label(id: &CatalogId) -> String {
    match id.area() {
        Some(a) => format!("{}-R-{}", id.dimension(), a),
        None => id.dimension().to_string(),
    }
}
