//! Scenario model: validated domain types, the on-disk document schema,
//! and the validation pass that turns one into the other.
//!
//! Scenario files are TOML with every unit spelled out in the field name
//! (`…_mbps`, `…_keur`, `…_months`). Parsing is strict where serde allows
//! it; `validate` then applies defaults, checks every cross-reference and
//! produces an immutable [`Scenario`]. Validation is idempotent: the
//! resolved scenario serializes back to a document that validates to an
//! identical value, and that resolved document is what the content digest
//! hashes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::catalog;
use crate::error::{Error, Result};
use crate::money::Money;
use crate::reliability::PathModel;
use crate::units::{
    Area, Availability, ContentionRatio, DataRate, RedundancyFraction, SpectralEfficiency,
    SubscriberDensity,
};

// ---------------------------------------------------------------------------
// Validated domain types
// ---------------------------------------------------------------------------

/// Global deployment parameters: the zone, the demand and the tariff frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioParams {
    pub service_area: Area,
    pub penetration: SubscriberDensity,
    pub site_count: u32,
    pub per_site_uplink: DataRate,
    pub per_site_downlink: DataRate,
    pub arpu_monthly: Money,
    pub amortization_months: u32,
}

impl ScenarioParams {
    /// Total backhaul demand `sites × (uplink + downlink)`.
    pub fn total_demand(&self) -> DataRate {
        crate::dimensioning::backhaul_demand(
            self.site_count,
            self.per_site_uplink,
            self.per_site_downlink,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PlatformKind {
    UnmannedSolarPlane,
    UnmannedAirship,
}

impl PlatformKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlatformKind::UnmannedSolarPlane => "unmanned_solar_plane",
            PlatformKind::UnmannedAirship => "unmanned_airship",
        }
    }

    fn parse(text: &str, field: &str) -> Result<PlatformKind> {
        match text {
            "unmanned_solar_plane" => Ok(PlatformKind::UnmannedSolarPlane),
            "unmanned_airship" => Ok(PlatformKind::UnmannedAirship),
            other => Err(Error::validation(field, format!("unknown platform kind '{other}'"))),
        }
    }
}

impl fmt::Display for PlatformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One aerial platform class: cell layout, capacity derating and costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlatformSpec {
    pub kind: PlatformKind,
    pub layout_cells: u32,
    pub redundancy: RedundancyFraction,
    pub covered_area: Area,
    pub per_cell_clear_air: DataRate,
    /// Total fronthaul capacity anchored at discrete availability targets;
    /// capacity is non-increasing as the target rises.
    pub derating: BTreeMap<Availability, DataRate>,
    pub gateway_capacity: Option<DataRate>,
    pub development_cost: Money,
    pub capex_per_unit: Money,
    pub opex_per_unit_year: Money,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CostPhase {
    Capex,
    OpexAnnual,
}

impl CostPhase {
    pub fn as_str(&self) -> &'static str {
        match self {
            CostPhase::Capex => "capex",
            CostPhase::OpexAnnual => "opex_annual",
        }
    }

    fn parse(text: &str, field: &str) -> Result<CostPhase> {
        match text {
            "capex" => Ok(CostPhase::Capex),
            "opex_annual" => Ok(CostPhase::OpexAnnual),
            other => Err(Error::validation(field, format!("unknown cost phase '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SiteClass {
    CellSite,
    AggregationSite,
    Platform,
    BackboneFee,
    SpaceSegmentLease,
}

impl SiteClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SiteClass::CellSite => "cell_site",
            SiteClass::AggregationSite => "aggregation_site",
            SiteClass::Platform => "platform",
            SiteClass::BackboneFee => "backbone_fee",
            SiteClass::SpaceSegmentLease => "space_segment_lease",
        }
    }

    fn parse(text: &str, field: &str) -> Result<SiteClass> {
        match text {
            "cell_site" => Ok(SiteClass::CellSite),
            "aggregation_site" => Ok(SiteClass::AggregationSite),
            "platform" => Ok(SiteClass::Platform),
            "backbone_fee" => Ok(SiteClass::BackboneFee),
            "space_segment_lease" => Ok(SiteClass::SpaceSegmentLease),
            other => Err(Error::validation(field, format!("unknown site class '{other}'"))),
        }
    }
}

impl fmt::Display for SiteClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One catalog line; the extended cost is `unit_cost × quantity`, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostItem {
    pub label: String,
    pub phase: CostPhase,
    pub site_class: SiteClass,
    pub unit_cost: Money,
    pub quantity: u32,
}

impl CostItem {
    pub fn extended_cost(&self) -> Money {
        self.unit_cost.scale(self.quantity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OfferTier {
    AerialOnly,
    AerialWithFailover,
    CompleteHighAvailability,
}

impl OfferTier {
    pub fn as_str(&self) -> &'static str {
        match self {
            OfferTier::AerialOnly => "aerial_only",
            OfferTier::AerialWithFailover => "aerial_with_failover",
            OfferTier::CompleteHighAvailability => "complete_high_availability",
        }
    }

    fn parse(text: &str, field: &str) -> Result<OfferTier> {
        match text {
            "aerial_only" => Ok(OfferTier::AerialOnly),
            "aerial_with_failover" => Ok(OfferTier::AerialWithFailover),
            "complete_high_availability" => Ok(OfferTier::CompleteHighAvailability),
            other => Err(Error::validation(field, format!("unknown offer tier '{other}'"))),
        }
    }
}

impl fmt::Display for OfferTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A wholesale backhaul product sold per link per month.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WholesaleOffer {
    pub id: String,
    pub tier: OfferTier,
    pub link_rate: DataRate,
    pub monthly_price: Money,
}

/// Per-year wholesale link demand, offer id → link count.
/// Years are contiguous from 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DemandSchedule {
    years: Vec<BTreeMap<String, u64>>,
}

impl DemandSchedule {
    pub fn from_years(years: Vec<BTreeMap<String, u64>>) -> DemandSchedule {
        DemandSchedule { years }
    }

    pub fn year_count(&self) -> u32 {
        self.years.len() as u32
    }

    pub fn year(&self, year: u32) -> Option<&BTreeMap<String, u64>> {
        self.years.get(year as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BTreeMap<String, u64>)> {
        self.years.iter().enumerate().map(|(i, m)| (i as u32, m))
    }
}

/// Satellite space/ground segment parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatelliteConfig {
    pub spectral_efficiency: SpectralEfficiency,
    pub transponder_bandwidth_mhz: u32,
    pub link_availability: Availability,
    pub cost_catalog: Vec<CostItem>,
    /// Optional yearly space-segment lease per MHz, added on top of the
    /// catalog's operating costs when non-zero.
    pub annual_lease_per_mhz: Money,
}

/// Aerial platforms operated directly by the network operator.
#[derive(Debug, Clone, PartialEq)]
pub struct HapDirectConfig {
    pub platform_id: String,
    pub fronthaul_availability: Availability,
    pub ground_capex: Money,
    pub ground_opex_annual: Money,
    pub include_development_cost: bool,
    /// Force a fleet size instead of auto-sizing to the minimum feasible
    /// count; assessment fails as infeasible when the forced count is short.
    pub platform_count: Option<u32>,
    /// Learning-curve rate applied to successive platform units (1 = none).
    pub learning_rate: f64,
}

/// Wholesale model: a platform operator sells backhaul links to the
/// network operator.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratedConfig {
    pub platform_id: String,
    pub offer_ids: Vec<String>,
    pub demand: DemandSchedule,
    pub contention: ContentionRatio,
    /// Per-cell rate offered at `availability_class`.
    pub cell_rate_at_class: DataRate,
    pub availability_class: Availability,
    pub mno_ground_capex: Money,
    pub platform_count: u32,
    pub include_development_cost: bool,
    pub learning_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ArchitectureConfig {
    Satellite(SatelliteConfig),
    HapDirect(HapDirectConfig),
    Integrated(IntegratedConfig),
}

impl ArchitectureConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            ArchitectureConfig::Satellite(_) => "satellite",
            ArchitectureConfig::HapDirect(_) => "hap_direct",
            ArchitectureConfig::Integrated(_) => "integrated",
        }
    }
}

/// Assessment settings that are data, not flags.
#[derive(Debug, Clone, PartialEq)]
pub struct AssessmentSettings {
    pub discount_rate: f64,
    pub horizon_years: Option<u32>,
}

impl Default for AssessmentSettings {
    fn default() -> Self {
        AssessmentSettings {
            discount_rate: 0.0,
            horizon_years: None,
        }
    }
}

/// A fully resolved, immutable scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub params: ScenarioParams,
    pub platforms: BTreeMap<String, PlatformSpec>,
    pub offers: Vec<WholesaleOffer>,
    pub architectures: BTreeMap<String, ArchitectureConfig>,
    pub path_models: BTreeMap<String, PathModel>,
    pub components: BTreeMap<String, Availability>,
    pub assessment: AssessmentSettings,
}

impl Scenario {
    pub fn platform(&self, id: &str) -> Result<&PlatformSpec> {
        self.platforms.get(id).ok_or_else(|| Error::UnknownReference {
            kind: "platform",
            id: id.to_string(),
        })
    }

    pub fn offer(&self, id: &str) -> Result<&WholesaleOffer> {
        self.offers
            .iter()
            .find(|o| o.id == id)
            .ok_or_else(|| Error::UnknownReference {
                kind: "offer",
                id: id.to_string(),
            })
    }

    pub fn architecture(&self, id: &str) -> Result<&ArchitectureConfig> {
        self.architectures.get(id).ok_or_else(|| Error::UnknownReference {
            kind: "architecture",
            id: id.to_string(),
        })
    }

    /// SHA-256 of the canonical (resolved, sorted-key, whitespace-free)
    /// form of this scenario. Cosmetic edits to the source file do not
    /// change it.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_value(self.to_document()).expect("document serializes");
        let bytes = serde_json::to_string(&canonical).expect("canonical form serializes");
        let mut hasher = Sha256::new();
        hasher.update(bytes.as_bytes());
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }
}

// ---------------------------------------------------------------------------
// Document schema (serde layer)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioSectionDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub platforms: BTreeMap<String, PlatformDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub offers: Vec<OfferDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub architectures: BTreeMap<String, ArchitectureDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub path_models: BTreeMap<String, PathNodeDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub components: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assessment: Option<AssessmentDoc>,
}

impl ScenarioDocument {
    pub fn from_toml_str(text: &str) -> Result<ScenarioDocument> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<ScenarioDocument> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSectionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub service_area_km2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penetration_per_km2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub site_count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_site_uplink_mbps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_site_downlink_mbps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arpu_eur: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amortization_months: Option<u32>,
    /// Optional declared total; validation cross-checks it against
    /// `site_count × (uplink + downlink)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_backhaul_demand_mbps: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlatformDoc {
    pub kind: String,
    pub layout_cells: u32,
    pub redundancy_fraction: f64,
    pub covered_area_km2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_cell_clear_air_mbps: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub derating: Vec<DeratingEntryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gateway_capacity_mbps: Option<f64>,
    pub development_cost_meur: f64,
    pub capex_per_unit_meur: f64,
    pub opex_per_unit_year_meur: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeratingEntryDoc {
    pub availability: f64,
    pub fronthaul_mbps: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OfferDoc {
    pub id: String,
    pub tier: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_rate_mbps: Option<f64>,
    pub monthly_price_eur: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ArchitectureDoc {
    Satellite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        spectral_efficiency_bps_hz: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        transponder_bandwidth_mhz: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        link_availability: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        annual_lease_per_mhz_eur: Option<f64>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        cost_catalog: Vec<CostItemDoc>,
    },
    HapDirect {
        platform: String,
        fronthaul_availability: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ground_capex_meur: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ground_opex_annual_meur: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        include_development_cost: Option<bool>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        platform_count: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        learning_rate: Option<f64>,
    },
    Integrated {
        platform: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        offers: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        demand: Vec<DemandYearDoc>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        contention_ratio: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cell_rate_mbps: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        availability_class: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mno_ground_capex_meur: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        platform_count: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        include_development_cost: Option<bool>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        learning_rate: Option<f64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostItemDoc {
    pub label: String,
    pub phase: String,
    pub site_class: String,
    pub unit_cost_keur: f64,
    pub quantity: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemandYearDoc {
    pub year: u32,
    pub links: BTreeMap<String, u64>,
}

/// A reliability path model as written in scenario files: either a leaf
/// with a label and an availability, or a series/parallel group.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum PathNodeDoc {
    Leaf { label: String, availability: f64 },
    Series { series: Vec<PathNodeDoc> },
    Parallel { parallel: Vec<PathNodeDoc> },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessmentDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discount_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon_years: Option<u32>,
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Validate a parsed scenario document: fill defaults, check every
/// invariant and cross-reference, and return the resolved scenario.
pub fn validate(doc: &ScenarioDocument) -> Result<Scenario> {
    let params = validate_params(doc.scenario.as_ref().unwrap_or(&ScenarioSectionDoc::default()))?;

    let mut platforms = BTreeMap::new();
    for (id, platform_doc) in &doc.platforms {
        platforms.insert(id.clone(), validate_platform(id, platform_doc)?);
    }

    let mut offers = Vec::with_capacity(doc.offers.len());
    for offer_doc in &doc.offers {
        let field = format!("offers.{}", offer_doc.id);
        if offer_doc.id.is_empty() {
            return Err(Error::validation("offers.id", "must not be empty"));
        }
        if offers.iter().any(|o: &WholesaleOffer| o.id == offer_doc.id) {
            return Err(Error::validation(&field, "duplicate offer id"));
        }
        let link_rate = match offer_doc.link_rate_mbps {
            Some(v) => DataRate::from_mbps_f64(v, &format!("{field}.link_rate_mbps"))?,
            None => catalog::DEFAULT_OFFER_LINK_RATE,
        };
        if link_rate == DataRate::ZERO {
            return Err(Error::validation(
                format!("{field}.link_rate_mbps"),
                "must be strictly positive",
            ));
        }
        let monthly_price =
            Money::from_eur_f64(offer_doc.monthly_price_eur, &format!("{field}.monthly_price_eur"))?;
        if monthly_price <= Money::ZERO {
            return Err(Error::validation(
                format!("{field}.monthly_price_eur"),
                "must be strictly positive",
            ));
        }
        offers.push(WholesaleOffer {
            id: offer_doc.id.clone(),
            tier: OfferTier::parse(&offer_doc.tier, &format!("{field}.tier"))?,
            link_rate,
            monthly_price,
        });
    }

    let mut architectures = BTreeMap::new();
    for (id, arch_doc) in &doc.architectures {
        architectures.insert(id.clone(), validate_architecture(id, arch_doc, &platforms, &offers)?);
    }

    let mut path_models = BTreeMap::new();
    for (id, node) in &doc.path_models {
        path_models.insert(id.clone(), validate_path_node(node, &format!("path_models.{id}"))?);
    }

    let mut components = BTreeMap::new();
    for (label, fraction) in &doc.components {
        components.insert(
            label.clone(),
            Availability::from_fraction_f64(*fraction, &format!("components.{label}"))?,
        );
    }

    let assessment = match &doc.assessment {
        Some(a) => {
            if let Some(rate) = a.discount_rate {
                if !rate.is_finite() || rate <= -1.0 {
                    return Err(Error::validation(
                        "assessment.discount_rate",
                        "must be a finite number above -1",
                    ));
                }
            }
            if a.horizon_years == Some(0) {
                return Err(Error::validation("assessment.horizon_years", "must be at least 1"));
            }
            AssessmentSettings {
                discount_rate: a.discount_rate.unwrap_or(0.0),
                horizon_years: a.horizon_years,
            }
        }
        None => AssessmentSettings::default(),
    };

    Ok(Scenario {
        params,
        platforms,
        offers,
        architectures,
        path_models,
        components,
        assessment,
    })
}

fn validate_params(section: &ScenarioSectionDoc) -> Result<ScenarioParams> {
    let defaults = catalog::default_params();
    let service_area = match section.service_area_km2 {
        Some(v) => Area::from_km2_f64(v, "scenario.service_area_km2")?,
        None => defaults.service_area,
    };
    let penetration = match section.penetration_per_km2 {
        Some(v) => SubscriberDensity::from_per_km2_f64(v, "scenario.penetration_per_km2")?,
        None => defaults.penetration,
    };
    let site_count = section.site_count.unwrap_or(defaults.site_count);
    if site_count == 0 {
        return Err(Error::validation("scenario.site_count", "must be at least 1"));
    }
    let per_site_uplink = match section.per_site_uplink_mbps {
        Some(v) => DataRate::from_mbps_f64(v, "scenario.per_site_uplink_mbps")?,
        None => defaults.per_site_uplink,
    };
    let per_site_downlink = match section.per_site_downlink_mbps {
        Some(v) => DataRate::from_mbps_f64(v, "scenario.per_site_downlink_mbps")?,
        None => defaults.per_site_downlink,
    };
    let arpu_monthly = match section.arpu_eur {
        Some(v) => Money::from_eur_f64(v, "scenario.arpu_eur")?,
        None => defaults.arpu_monthly,
    };
    if arpu_monthly.is_negative() {
        return Err(Error::validation("scenario.arpu_eur", "must be non-negative"));
    }
    let amortization_months = section.amortization_months.unwrap_or(defaults.amortization_months);
    if amortization_months == 0 {
        return Err(Error::validation(
            "scenario.amortization_months",
            "must be at least 1",
        ));
    }

    let params = ScenarioParams {
        service_area,
        penetration,
        site_count,
        per_site_uplink,
        per_site_downlink,
        arpu_monthly,
        amortization_months,
    };

    if let Some(declared) = section.total_backhaul_demand_mbps {
        let declared = DataRate::from_mbps_f64(declared, "scenario.total_backhaul_demand_mbps")?;
        let computed = params.total_demand();
        if declared != computed {
            return Err(Error::validation(
                "scenario.total_backhaul_demand_mbps",
                format!(
                    "declared {declared} does not equal site_count × (uplink + downlink) = {computed}"
                ),
            ));
        }
    }

    Ok(params)
}

fn validate_platform(id: &str, doc: &PlatformDoc) -> Result<PlatformSpec> {
    let field = |name: &str| format!("platforms.{id}.{name}");
    if doc.layout_cells == 0 {
        return Err(Error::validation(field("layout_cells"), "must be at least 1"));
    }
    let redundancy = RedundancyFraction::from_f64(doc.redundancy_fraction, &field("redundancy_fraction"))?;
    let covered_area = Area::from_km2_f64(doc.covered_area_km2, &field("covered_area_km2"))?;
    let per_cell_clear_air = match doc.per_cell_clear_air_mbps {
        Some(v) => DataRate::from_mbps_f64(v, &field("per_cell_clear_air_mbps"))?,
        None => catalog::DEFAULT_PER_CELL_CLEAR_AIR,
    };

    let ceiling = per_cell_clear_air.scale(doc.layout_cells as u64);
    let mut derating = BTreeMap::new();
    let mut previous: Option<(Availability, DataRate)> = None;
    for entry in &doc.derating {
        let availability = Availability::from_fraction_f64(entry.availability, &field("derating.availability"))?;
        let rate = DataRate::from_mbps_f64(entry.fronthaul_mbps, &field("derating.fronthaul_mbps"))?;
        if rate > ceiling {
            return Err(Error::validation(
                field("derating.fronthaul_mbps"),
                format!("{rate} exceeds layout ceiling {ceiling}"),
            ));
        }
        if derating.insert(availability, rate).is_some() {
            return Err(Error::validation(
                field("derating.availability"),
                format!("duplicate anchor {availability}"),
            ));
        }
        previous = Some((availability, rate));
    }
    let _ = previous;
    // Capacity must not increase as the availability target rises.
    let mut last: Option<(Availability, DataRate)> = None;
    for (&availability, &rate) in &derating {
        if let Some((_, last_rate)) = last {
            if rate > last_rate {
                return Err(Error::validation(
                    field("derating"),
                    format!("capacity increases at anchor {availability}; must be non-increasing"),
                ));
            }
        }
        last = Some((availability, rate));
    }

    let gateway_capacity = match doc.gateway_capacity_mbps {
        Some(v) => Some(DataRate::from_mbps_f64(v, &field("gateway_capacity_mbps"))?),
        None => None,
    };

    let development_cost = Money::from_meur_f64(doc.development_cost_meur, &field("development_cost_meur"))?;
    let capex_per_unit = Money::from_meur_f64(doc.capex_per_unit_meur, &field("capex_per_unit_meur"))?;
    let opex_per_unit_year =
        Money::from_meur_f64(doc.opex_per_unit_year_meur, &field("opex_per_unit_year_meur"))?;
    for (name, value) in [
        ("development_cost_meur", development_cost),
        ("capex_per_unit_meur", capex_per_unit),
        ("opex_per_unit_year_meur", opex_per_unit_year),
    ] {
        if value.is_negative() {
            return Err(Error::validation(field(name), "must be non-negative"));
        }
    }

    Ok(PlatformSpec {
        kind: PlatformKind::parse(&doc.kind, &field("kind"))?,
        layout_cells: doc.layout_cells,
        redundancy,
        covered_area,
        per_cell_clear_air,
        derating,
        gateway_capacity,
        development_cost,
        capex_per_unit,
        opex_per_unit_year,
    })
}

fn validate_architecture(
    id: &str,
    doc: &ArchitectureDoc,
    platforms: &BTreeMap<String, PlatformSpec>,
    offers: &[WholesaleOffer],
) -> Result<ArchitectureConfig> {
    let field = |name: &str| format!("architectures.{id}.{name}");
    match doc {
        ArchitectureDoc::Satellite {
            spectral_efficiency_bps_hz,
            transponder_bandwidth_mhz,
            link_availability,
            annual_lease_per_mhz_eur,
            cost_catalog,
        } => {
            let spectral_efficiency = match spectral_efficiency_bps_hz {
                Some(v) => SpectralEfficiency::from_f64(*v, &field("spectral_efficiency_bps_hz"))?,
                None => catalog::DEFAULT_SPECTRAL_EFFICIENCY,
            };
            let transponder_bandwidth_mhz =
                transponder_bandwidth_mhz.unwrap_or(catalog::DEFAULT_TRANSPONDER_BANDWIDTH_MHZ);
            if transponder_bandwidth_mhz == 0 {
                return Err(Error::validation(
                    field("transponder_bandwidth_mhz"),
                    "must be strictly positive",
                ));
            }
            let link_availability = match link_availability {
                Some(v) => Availability::from_fraction_f64(*v, &field("link_availability"))?,
                None => catalog::DEFAULT_SATELLITE_AVAILABILITY,
            };
            let annual_lease_per_mhz = match annual_lease_per_mhz_eur {
                Some(v) => Money::from_eur_f64(*v, &field("annual_lease_per_mhz_eur"))?,
                None => Money::ZERO,
            };
            if annual_lease_per_mhz.is_negative() {
                return Err(Error::validation(
                    field("annual_lease_per_mhz_eur"),
                    "must be non-negative",
                ));
            }
            let mut catalog_items = Vec::with_capacity(cost_catalog.len());
            for (index, item) in cost_catalog.iter().enumerate() {
                catalog_items.push(validate_cost_item(item, &field(&format!("cost_catalog[{index}]")))?);
            }
            Ok(ArchitectureConfig::Satellite(SatelliteConfig {
                spectral_efficiency,
                transponder_bandwidth_mhz,
                link_availability,
                cost_catalog: catalog_items,
                annual_lease_per_mhz,
            }))
        }
        ArchitectureDoc::HapDirect {
            platform,
            fronthaul_availability,
            ground_capex_meur,
            ground_opex_annual_meur,
            include_development_cost,
            platform_count,
            learning_rate,
        } => {
            if !platforms.contains_key(platform) {
                return Err(Error::UnknownReference {
                    kind: "platform",
                    id: platform.clone(),
                });
            }
            if platform_count == &Some(0) {
                return Err(Error::validation(field("platform_count"), "must be at least 1"));
            }
            let ground_capex = Money::from_meur_f64(
                ground_capex_meur.unwrap_or(0.0),
                &field("ground_capex_meur"),
            )?;
            let ground_opex_annual = Money::from_meur_f64(
                ground_opex_annual_meur.unwrap_or(0.0),
                &field("ground_opex_annual_meur"),
            )?;
            if ground_capex.is_negative() || ground_opex_annual.is_negative() {
                return Err(Error::validation(field("ground costs"), "must be non-negative"));
            }
            Ok(ArchitectureConfig::HapDirect(HapDirectConfig {
                platform_id: platform.clone(),
                fronthaul_availability: Availability::from_fraction_f64(
                    *fronthaul_availability,
                    &field("fronthaul_availability"),
                )?,
                ground_capex,
                ground_opex_annual,
                include_development_cost: include_development_cost.unwrap_or(false),
                platform_count: *platform_count,
                learning_rate: validate_learning_rate(*learning_rate, &field("learning_rate"))?,
            }))
        }
        ArchitectureDoc::Integrated {
            platform,
            offers: offer_ids,
            demand,
            contention_ratio,
            cell_rate_mbps,
            availability_class,
            mno_ground_capex_meur,
            platform_count,
            include_development_cost,
            learning_rate,
        } => {
            if !platforms.contains_key(platform) {
                return Err(Error::UnknownReference {
                    kind: "platform",
                    id: platform.clone(),
                });
            }
            if offer_ids.is_empty() {
                return Err(Error::validation(field("offers"), "must reference at least one offer"));
            }
            let mut link_rate: Option<DataRate> = None;
            for offer_id in offer_ids {
                let offer = offers.iter().find(|o| &o.id == offer_id).ok_or_else(|| {
                    Error::UnknownReference {
                        kind: "offer",
                        id: offer_id.clone(),
                    }
                })?;
                match link_rate {
                    None => link_rate = Some(offer.link_rate),
                    Some(rate) if rate != offer.link_rate => {
                        return Err(Error::validation(
                            field("offers"),
                            "all referenced offers must share one link rate",
                        ));
                    }
                    Some(_) => {}
                }
            }

            let mut years: Vec<BTreeMap<String, u64>> = Vec::with_capacity(demand.len());
            for (index, year_doc) in demand.iter().enumerate() {
                if year_doc.year as usize != index {
                    return Err(Error::validation(
                        field("demand"),
                        format!("years must be contiguous from 0; found year {} at position {index}", year_doc.year),
                    ));
                }
                for offer_id in year_doc.links.keys() {
                    if !offer_ids.contains(offer_id) {
                        return Err(Error::UnknownReference {
                            kind: "offer",
                            id: offer_id.clone(),
                        });
                    }
                }
                years.push(year_doc.links.clone());
            }
            if years.is_empty() {
                return Err(Error::validation(field("demand"), "must cover at least year 0"));
            }

            let contention = match contention_ratio {
                Some(v) => ContentionRatio::from_f64(*v, &field("contention_ratio"))?,
                None => catalog::DEFAULT_CONTENTION,
            };
            let cell_rate_at_class = match cell_rate_mbps {
                Some(v) => DataRate::from_mbps_f64(*v, &field("cell_rate_mbps"))?,
                None => catalog::DEFAULT_CELL_RATE_AT_CLASS,
            };
            let availability_class = match availability_class {
                Some(v) => Availability::from_fraction_f64(*v, &field("availability_class"))?,
                None => catalog::DEFAULT_AVAILABILITY_CLASS,
            };
            let mno_ground_capex = Money::from_meur_f64(
                mno_ground_capex_meur.unwrap_or(0.0),
                &field("mno_ground_capex_meur"),
            )?;
            if mno_ground_capex.is_negative() {
                return Err(Error::validation(field("mno_ground_capex_meur"), "must be non-negative"));
            }
            let platform_count = platform_count.unwrap_or(1);
            if platform_count == 0 {
                return Err(Error::validation(field("platform_count"), "must be at least 1"));
            }
            Ok(ArchitectureConfig::Integrated(IntegratedConfig {
                platform_id: platform.clone(),
                offer_ids: offer_ids.clone(),
                demand: DemandSchedule::from_years(years),
                contention,
                cell_rate_at_class,
                availability_class,
                mno_ground_capex,
                platform_count,
                include_development_cost: include_development_cost.unwrap_or(true),
                learning_rate: validate_learning_rate(*learning_rate, &field("learning_rate"))?,
            }))
        }
    }
}

fn validate_learning_rate(rate: Option<f64>, field: &str) -> Result<f64> {
    let rate = rate.unwrap_or(1.0);
    if !rate.is_finite() || rate <= 0.0 || rate > 1.0 {
        return Err(Error::validation(field, "must lie in (0, 1]"));
    }
    Ok(rate)
}

fn validate_cost_item(doc: &CostItemDoc, field: &str) -> Result<CostItem> {
    let unit_cost = Money::from_keur_f64(doc.unit_cost_keur, &format!("{field}.unit_cost_keur"))?;
    if unit_cost.is_negative() {
        return Err(Error::validation(
            format!("{field}.unit_cost_keur"),
            "must be non-negative",
        ));
    }
    Ok(CostItem {
        label: doc.label.clone(),
        phase: CostPhase::parse(&doc.phase, &format!("{field}.phase"))?,
        site_class: SiteClass::parse(&doc.site_class, &format!("{field}.site_class"))?,
        unit_cost,
        quantity: doc.quantity,
    })
}

fn validate_path_node(doc: &PathNodeDoc, field: &str) -> Result<PathModel> {
    match doc {
        PathNodeDoc::Leaf { label, availability } => Ok(PathModel::leaf(
            label.clone(),
            Availability::from_fraction_f64(*availability, &format!("{field}.availability"))?,
        )),
        PathNodeDoc::Series { series } => {
            if series.is_empty() {
                return Err(Error::validation(field, "series group must not be empty"));
            }
            let children = series
                .iter()
                .enumerate()
                .map(|(i, child)| validate_path_node(child, &format!("{field}.series[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(PathModel::series(children))
        }
        PathNodeDoc::Parallel { parallel } => {
            if parallel.is_empty() {
                return Err(Error::validation(field, "parallel group must not be empty"));
            }
            let children = parallel
                .iter()
                .enumerate()
                .map(|(i, child)| validate_path_node(child, &format!("{field}.parallel[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(PathModel::parallel(children))
        }
    }
}

// ---------------------------------------------------------------------------
// Back to document form (canonical resolved view)
// ---------------------------------------------------------------------------

impl Scenario {
    /// Serialize the resolved scenario back into document form with every
    /// default materialized. `validate(to_document(s)) == s`.
    pub fn to_document(&self) -> ScenarioDocument {
        ScenarioDocument {
            scenario: Some(ScenarioSectionDoc {
                service_area_km2: Some(self.params.service_area.km2_f64()),
                penetration_per_km2: Some(self.params.penetration.e4() as f64 / 10_000.0),
                site_count: Some(self.params.site_count),
                per_site_uplink_mbps: Some(self.params.per_site_uplink.mbps_f64()),
                per_site_downlink_mbps: Some(self.params.per_site_downlink.mbps_f64()),
                arpu_eur: Some(self.params.arpu_monthly.cents() as f64 / 100.0),
                amortization_months: Some(self.params.amortization_months),
                total_backhaul_demand_mbps: Some(self.params.total_demand().mbps_f64()),
            }),
            platforms: self
                .platforms
                .iter()
                .map(|(id, p)| {
                    (
                        id.clone(),
                        PlatformDoc {
                            kind: p.kind.as_str().to_string(),
                            layout_cells: p.layout_cells,
                            redundancy_fraction: p.redundancy.e4() as f64 / 10_000.0,
                            covered_area_km2: p.covered_area.km2_f64(),
                            per_cell_clear_air_mbps: Some(p.per_cell_clear_air.mbps_f64()),
                            derating: p
                                .derating
                                .iter()
                                .map(|(a, r)| DeratingEntryDoc {
                                    availability: a.fraction_f64(),
                                    fronthaul_mbps: r.mbps_f64(),
                                })
                                .collect(),
                            gateway_capacity_mbps: p.gateway_capacity.map(DataRate::mbps_f64),
                            development_cost_meur: p.development_cost.cents() as f64 / 1.0e8,
                            capex_per_unit_meur: p.capex_per_unit.cents() as f64 / 1.0e8,
                            opex_per_unit_year_meur: p.opex_per_unit_year.cents() as f64 / 1.0e8,
                        },
                    )
                })
                .collect(),
            offers: self
                .offers
                .iter()
                .map(|o| OfferDoc {
                    id: o.id.clone(),
                    tier: o.tier.as_str().to_string(),
                    link_rate_mbps: Some(o.link_rate.mbps_f64()),
                    monthly_price_eur: o.monthly_price.cents() as f64 / 100.0,
                })
                .collect(),
            architectures: self
                .architectures
                .iter()
                .map(|(id, arch)| (id.clone(), architecture_to_doc(arch)))
                .collect(),
            path_models: self
                .path_models
                .iter()
                .map(|(id, model)| (id.clone(), path_model_to_doc(model)))
                .collect(),
            components: self
                .components
                .iter()
                .map(|(label, a)| (label.clone(), a.fraction_f64()))
                .collect(),
            assessment: Some(AssessmentDoc {
                discount_rate: Some(self.assessment.discount_rate),
                horizon_years: self.assessment.horizon_years,
            }),
        }
    }
}

fn architecture_to_doc(arch: &ArchitectureConfig) -> ArchitectureDoc {
    match arch {
        ArchitectureConfig::Satellite(c) => ArchitectureDoc::Satellite {
            spectral_efficiency_bps_hz: Some(c.spectral_efficiency.e4() as f64 / 10_000.0),
            transponder_bandwidth_mhz: Some(c.transponder_bandwidth_mhz),
            link_availability: Some(c.link_availability.fraction_f64()),
            annual_lease_per_mhz_eur: Some(c.annual_lease_per_mhz.cents() as f64 / 100.0),
            cost_catalog: c
                .cost_catalog
                .iter()
                .map(|item| CostItemDoc {
                    label: item.label.clone(),
                    phase: item.phase.as_str().to_string(),
                    site_class: item.site_class.as_str().to_string(),
                    unit_cost_keur: item.unit_cost.cents() as f64 / 100_000.0,
                    quantity: item.quantity,
                })
                .collect(),
        },
        ArchitectureConfig::HapDirect(c) => ArchitectureDoc::HapDirect {
            platform: c.platform_id.clone(),
            fronthaul_availability: c.fronthaul_availability.fraction_f64(),
            ground_capex_meur: Some(c.ground_capex.cents() as f64 / 1.0e8),
            ground_opex_annual_meur: Some(c.ground_opex_annual.cents() as f64 / 1.0e8),
            include_development_cost: Some(c.include_development_cost),
            platform_count: c.platform_count,
            learning_rate: Some(c.learning_rate),
        },
        ArchitectureConfig::Integrated(c) => ArchitectureDoc::Integrated {
            platform: c.platform_id.clone(),
            offers: c.offer_ids.clone(),
            demand: c
                .demand
                .iter()
                .map(|(year, links)| DemandYearDoc {
                    year,
                    links: links.clone(),
                })
                .collect(),
            contention_ratio: Some(c.contention.hundredths() as f64 / 100.0),
            cell_rate_mbps: Some(c.cell_rate_at_class.mbps_f64()),
            availability_class: Some(c.availability_class.fraction_f64()),
            mno_ground_capex_meur: Some(c.mno_ground_capex.cents() as f64 / 1.0e8),
            platform_count: Some(c.platform_count),
            include_development_cost: Some(c.include_development_cost),
            learning_rate: Some(c.learning_rate),
        },
    }
}

fn path_model_to_doc(model: &PathModel) -> PathNodeDoc {
    match model {
        PathModel::Leaf { label, availability } => PathNodeDoc::Leaf {
            label: label.clone(),
            availability: availability.fraction_f64(),
        },
        PathModel::Series(children) => PathNodeDoc::Series {
            series: children.iter().map(path_model_to_doc).collect(),
        },
        PathModel::Parallel(children) => PathNodeDoc::Parallel {
            parallel: children.iter().map(path_model_to_doc).collect(),
        },
    }
}

/// Load and validate a scenario file.
pub fn load(path: &Path) -> Result<Scenario> {
    validate(&ScenarioDocument::from_path(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_doc(extra: &str) -> ScenarioDocument {
        let text = format!("[scenario]\n{extra}\n");
        ScenarioDocument::from_toml_str(&text).unwrap()
    }

    #[test]
    fn empty_document_resolves_to_the_bundled_defaults() {
        let scenario = validate(&ScenarioDocument::default()).unwrap();
        assert_eq!(scenario.params, catalog::default_params());
        assert_eq!(scenario.params.total_demand(), DataRate::from_mbps(756));
    }

    #[test]
    fn zero_amortization_is_rejected() {
        let doc = minimal_doc("amortization_months = 0");
        let err = validate(&doc).unwrap_err();
        assert!(err.to_string().contains("amortization_months"), "{err}");
    }

    #[test]
    fn declared_demand_cross_check_fails_on_mismatch() {
        // 108 × (3 + 5) = 864 Mb/s, not the declared 756.
        let doc = minimal_doc(
            "per_site_uplink_mbps = 3\nper_site_downlink_mbps = 5\ntotal_backhaul_demand_mbps = 756",
        );
        let err = validate(&doc).unwrap_err();
        assert!(err.to_string().contains("total_backhaul_demand_mbps"), "{err}");
    }

    #[test]
    fn declared_demand_cross_check_passes_when_consistent() {
        let doc = minimal_doc("total_backhaul_demand_mbps = 756");
        assert!(validate(&doc).is_ok());
    }

    #[test]
    fn dangling_platform_reference_is_reported() {
        let text = r#"
[architectures.hap]
type = "hap_direct"
platform = "missing"
fronthaul_availability = 0.99
"#;
        let doc = ScenarioDocument::from_toml_str(text).unwrap();
        match validate(&doc).unwrap_err() {
            Error::UnknownReference { kind, id } => {
                assert_eq!(kind, "platform");
                assert_eq!(id, "missing");
            }
            other => panic!("expected unknown reference, got {other}"),
        }
    }

    #[test]
    fn demand_years_must_be_contiguous() {
        let text = r#"
[platforms.p]
kind = "unmanned_solar_plane"
layout_cells = 19
redundancy_fraction = 0.05
covered_area_km2 = 2734
development_cost_meur = 50
capex_per_unit_meur = 4
opex_per_unit_year_meur = 1

[[offers]]
id = "basic"
tier = "aerial_only"
monthly_price_eur = 250

[architectures.int]
type = "integrated"
platform = "p"
offers = ["basic"]
demand = [{ year = 0, links = { basic = 10 } }, { year = 2, links = { basic = 12 } }]
"#;
        let doc = ScenarioDocument::from_toml_str(text).unwrap();
        let err = validate(&doc).unwrap_err();
        assert!(err.to_string().contains("contiguous"), "{err}");
    }

    #[test]
    fn mixed_offer_link_rates_are_rejected() {
        let text = r#"
[platforms.p]
kind = "unmanned_solar_plane"
layout_cells = 19
redundancy_fraction = 0.05
covered_area_km2 = 2734
development_cost_meur = 50
capex_per_unit_meur = 4
opex_per_unit_year_meur = 1

[[offers]]
id = "a"
tier = "aerial_only"
link_rate_mbps = 10
monthly_price_eur = 250

[[offers]]
id = "b"
tier = "aerial_only"
link_rate_mbps = 20
monthly_price_eur = 400

[architectures.int]
type = "integrated"
platform = "p"
offers = ["a", "b"]
demand = [{ year = 0, links = { a = 1, b = 1 } }]
"#;
        let doc = ScenarioDocument::from_toml_str(text).unwrap();
        let err = validate(&doc).unwrap_err();
        assert!(err.to_string().contains("share one link rate"), "{err}");
    }

    #[test]
    fn derating_must_be_non_increasing_in_availability() {
        let text = r#"
[platforms.p]
kind = "unmanned_solar_plane"
layout_cells = 19
redundancy_fraction = 0.05
covered_area_km2 = 2734
development_cost_meur = 50
capex_per_unit_meur = 4
opex_per_unit_year_meur = 1
derating = [
  { availability = 0.99, fronthaul_mbps = 360 },
  { availability = 0.999, fronthaul_mbps = 2160 },
]
"#;
        let doc = ScenarioDocument::from_toml_str(text).unwrap();
        let err = validate(&doc).unwrap_err();
        assert!(err.to_string().contains("non-increasing"), "{err}");
    }

    #[test]
    fn validation_is_idempotent_over_the_resolved_document() {
        let scenario = validate(&ScenarioDocument::default()).unwrap();
        let revalidated = validate(&scenario.to_document()).unwrap();
        assert_eq!(scenario, revalidated);
        assert_eq!(scenario.digest(), revalidated.digest());
    }

    #[test]
    fn digest_ignores_cosmetic_edits() {
        let a = validate(&minimal_doc("site_count = 108")).unwrap();
        let b = validate(&minimal_doc("# a comment\nsite_count   =    108")).unwrap();
        assert_eq!(a.digest(), b.digest());
        let c = validate(&minimal_doc("site_count = 109")).unwrap();
        assert_ne!(a.digest(), c.digest());
    }
}
