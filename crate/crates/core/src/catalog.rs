//! Bundled reference parameters: the rural deployment defaults, the two
//! aerial platform classes, the satellite cost breakdown and the
//! wholesale offer set.
//!
//! Everything here is plain data. Scenario files may override any of it;
//! these values are what an empty scenario resolves to, and what the
//! bundled `scenarios/default.toml` spells out explicitly.

use std::collections::BTreeMap;

use crate::money::Money;
use crate::scenario::{
    CostItem, CostPhase, DemandSchedule, PlatformKind, PlatformSpec, ScenarioParams, SiteClass,
    WholesaleOffer,
};
use crate::units::{
    Area, Availability, ContentionRatio, DataRate, RedundancyFraction, SpectralEfficiency,
    SubscriberDensity,
};

/// Clear-air capacity of one platform cell.
pub const DEFAULT_PER_CELL_CLEAR_AIR: DataRate = DataRate::from_mbps(120);
/// Leased satellite transponder channel width.
pub const DEFAULT_TRANSPONDER_BANDWIDTH_MHZ: u32 = 72;
/// Satellite link availability target (0.9996).
pub const DEFAULT_SATELLITE_AVAILABILITY: Availability = Availability::const_from_ppb(999_600_000);
/// Calibrated satellite spectral efficiency: 756 Mb/s over 385 MHz,
/// stored to four decimals.
pub const DEFAULT_SPECTRAL_EFFICIENCY: SpectralEfficiency = SpectralEfficiency::from_e4(19_636);
/// Wholesale oversubscription between sold and provisioned capacity.
pub const DEFAULT_CONTENTION: ContentionRatio = ContentionRatio::from_hundredths(400);
/// Per-cell rate offered at the wholesale availability class.
pub const DEFAULT_CELL_RATE_AT_CLASS: DataRate = DataRate::from_mbps(80);
/// Availability class of the wholesale cell configuration (0.99).
pub const DEFAULT_AVAILABILITY_CLASS: Availability = Availability::const_from_ppb(990_000_000);
/// Rate of one wholesale backhaul link.
pub const DEFAULT_OFFER_LINK_RATE: DataRate = DataRate::from_mbps(10);
/// Reference contention used when quoting areal throughput density.
pub const REFERENCE_DENSITY_CONTENTION: ContentionRatio = ContentionRatio::from_hundredths(400);

/// Default deployment frame: 1800 km² at 10 subscribers/km², 108 sites
/// with 2 Mb/s up / 5 Mb/s down each, a 3.5 € monthly ARPU and five-year
/// amortization.
pub fn default_params() -> ScenarioParams {
    ScenarioParams {
        service_area: Area::from_km2(1800),
        penetration: SubscriberDensity::from_per_km2(10),
        site_count: 108,
        per_site_uplink: DataRate::from_mbps(2),
        per_site_downlink: DataRate::from_mbps(5),
        arpu_monthly: Money::from_cents(350),
        amortization_months: 60,
    }
}

/// Unmanned solar plane: 19-cell layout with 5% redundancy, 2734 km²
/// coverage, 960 Mb/s gateway. Fronthaul holds clear-air capacity at a
/// 99% target and falls to 360 Mb/s at 99.9%.
pub fn solar_plane() -> PlatformSpec {
    let mut derating = BTreeMap::new();
    derating.insert(DEFAULT_AVAILABILITY_CLASS, DataRate::from_mbps(2160));
    derating.insert(availability(999_000_000), DataRate::from_mbps(360));
    PlatformSpec {
        kind: PlatformKind::UnmannedSolarPlane,
        layout_cells: 19,
        redundancy: RedundancyFraction::from_e4(500),
        covered_area: Area::from_km2(2734),
        per_cell_clear_air: DEFAULT_PER_CELL_CLEAR_AIR,
        derating,
        gateway_capacity: Some(DataRate::from_mbps(960)),
        development_cost: Money::from_meur(50),
        capex_per_unit: Money::from_meur(4),
        opex_per_unit_year: Money::from_meur(1),
    }
}

/// Unmanned airship: 121-cell layout with 20% redundancy, 2827 km²
/// coverage. The gateway capacity of this class is not published, so it
/// is left absent; checks that need it report it as unknown.
pub fn airship() -> PlatformSpec {
    let mut derating = BTreeMap::new();
    derating.insert(DEFAULT_AVAILABILITY_CLASS, DataRate::from_mbps(11_640));
    derating.insert(availability(999_000_000), DataRate::from_mbps(1_940));
    PlatformSpec {
        kind: PlatformKind::UnmannedAirship,
        layout_cells: 121,
        redundancy: RedundancyFraction::from_e4(2_000),
        covered_area: Area::from_km2(2827),
        per_cell_clear_air: DEFAULT_PER_CELL_CLEAR_AIR,
        derating,
        gateway_capacity: None,
        development_cost: Money::from_meur(225),
        capex_per_unit: Money::from_meur(30),
        opex_per_unit_year: Money::from_meur(4),
    }
}

/// Satellite ground-segment cost catalog for 108 cell sites plus one
/// aggregation site. The 50 k€ per-site capex splits across antenna,
/// frequency transposition and amplifier+modem; the 920 k€ aggregation
/// site splits antenna vs the rest. Operating cost is carried per cell
/// site and covers the leased space-segment share.
pub fn satellite_cost_catalog() -> Vec<CostItem> {
    vec![
        CostItem {
            label: "cell site antenna (3.80 m)".to_string(),
            phase: CostPhase::Capex,
            site_class: SiteClass::CellSite,
            unit_cost: Money::from_keur(17),
            quantity: 108,
        },
        CostItem {
            label: "cell site frequency transposition".to_string(),
            phase: CostPhase::Capex,
            site_class: SiteClass::CellSite,
            unit_cost: Money::from_keur(17),
            quantity: 108,
        },
        CostItem {
            label: "cell site amplifier and modem".to_string(),
            phase: CostPhase::Capex,
            site_class: SiteClass::CellSite,
            unit_cost: Money::from_keur(16),
            quantity: 108,
        },
        CostItem {
            label: "aggregation site antenna (11 m)".to_string(),
            phase: CostPhase::Capex,
            site_class: SiteClass::AggregationSite,
            unit_cost: Money::from_keur(430),
            quantity: 1,
        },
        CostItem {
            label: "aggregation site amplifiers, modems and transposition".to_string(),
            phase: CostPhase::Capex,
            site_class: SiteClass::AggregationSite,
            unit_cost: Money::from_keur(490),
            quantity: 1,
        },
        CostItem {
            label: "cell site operation incl. space-segment share".to_string(),
            phase: CostPhase::OpexAnnual,
            site_class: SiteClass::SpaceSegmentLease,
            unit_cost: Money::from_keur(105),
            quantity: 108,
        },
    ]
}

/// The three wholesale backhaul products at 10 Mb/s.
pub fn reference_offers() -> Vec<WholesaleOffer> {
    vec![
        WholesaleOffer {
            id: "aerial".to_string(),
            tier: crate::scenario::OfferTier::AerialOnly,
            link_rate: DEFAULT_OFFER_LINK_RATE,
            monthly_price: Money::from_eur(250),
        },
        WholesaleOffer {
            id: "aerial-ha".to_string(),
            tier: crate::scenario::OfferTier::AerialWithFailover,
            link_rate: DEFAULT_OFFER_LINK_RATE,
            monthly_price: Money::from_eur(1000),
        },
        WholesaleOffer {
            id: "complete-ha".to_string(),
            tier: crate::scenario::OfferTier::CompleteHighAvailability,
            link_rate: DEFAULT_OFFER_LINK_RATE,
            monthly_price: Money::from_eur(2000),
        },
    ]
}

/// Ten-year wholesale demand. Years 0/3/6/9 are the published sample
/// points; the years between are linear interpolations rounded half-up.
pub fn reference_demand() -> DemandSchedule {
    let rows: [(u64, u64, u64); 10] = [
        (192, 86, 86),
        (183, 115, 86),
        (173, 143, 86),
        (164, 172, 86),
        (159, 201, 86),
        (153, 231, 86),
        (148, 260, 86),
        (175, 260, 86),
        (203, 260, 86),
        (230, 260, 86),
    ];
    let years = rows
        .iter()
        .map(|&(aerial, aerial_ha, complete_ha)| {
            let mut links = BTreeMap::new();
            links.insert("aerial".to_string(), aerial);
            links.insert("aerial-ha".to_string(), aerial_ha);
            links.insert("complete-ha".to_string(), complete_ha);
            links
        })
        .collect();
    DemandSchedule::from_years(years)
}

fn availability(ppb: u64) -> Availability {
    Availability::from_ppb(ppb).expect("catalog availability in range")
}
