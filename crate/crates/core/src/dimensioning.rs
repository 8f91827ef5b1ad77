//! Capacity and coverage dimensioning for all three architectures:
//! subscriber counts, backhaul demand, satellite spectrum, platform cell
//! and fronthaul capacity under availability derating, fleet sizing and
//! sellable wholesale link capacity.
//!
//! Every function here is pure and exact over the fixed-point unit types.

use crate::error::{Error, Result};
use crate::scenario::{PlatformSpec, ScenarioParams};
use crate::units::{
    div_round_half_up, Area, Availability, BandwidthMhz, ContentionRatio, DataRate,
    RedundancyFraction, SpectralEfficiency, SubscriberDensity, ThroughputDensity,
};

/// Expected subscribers: `round-half-up(area × penetration)`.
pub fn subscribers(area: Area, penetration: SubscriberDensity) -> u64 {
    let product = area.hundredths_km2() as i128 * penetration.e4() as i128;
    div_round_half_up(product, 100 * 10_000) as u64
}

/// Total backhaul demand: `sites × (uplink + downlink)`.
pub fn backhaul_demand(sites: u32, uplink: DataRate, downlink: DataRate) -> DataRate {
    (uplink + downlink).scale(sites as u64)
}

/// Space-segment dimensioning result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumPlan {
    /// Bandwidth needed on the space segment, at 0.1 MHz resolution.
    pub required_bandwidth: BandwidthMhz,
    /// Whole transponders covering the required bandwidth.
    pub transponder_count: u32,
    pub transponder_bandwidth_mhz: u32,
}

/// Bandwidth demanded of the space segment: `demand / efficiency` rounded
/// half-up to 0.1 MHz, then whole transponders by ceiling division.
pub fn satellite_spectrum(
    demand: DataRate,
    efficiency: SpectralEfficiency,
    transponder_bandwidth_mhz: u32,
) -> SpectrumPlan {
    debug_assert!(transponder_bandwidth_mhz > 0);
    // kb/s over (b/s/Hz) gives kHz; ×100 moves to tenths of MHz and
    // absorbs the 10^4 efficiency scale.
    let tenths = div_round_half_up(demand.kbps() as i128 * 100, efficiency.e4() as i128) as u64;
    let transponder_tenths = transponder_bandwidth_mhz as u64 * 10;
    let transponder_count = tenths.div_ceil(transponder_tenths) as u32;
    SpectrumPlan {
        required_bandwidth: BandwidthMhz::from_tenths(tenths),
        transponder_count,
        transponder_bandwidth_mhz,
    }
}

/// Usable cells once layout redundancy is set aside:
/// `round-half-up(layout × (1 − redundancy))`.
pub fn available_cells(layout_cells: u32, redundancy: RedundancyFraction) -> u32 {
    let kept = (10_000 - redundancy.e4()) as i128;
    div_round_half_up(layout_cells as i128 * kept, 10_000) as u32
}

/// Aggregate clear-air fronthaul throughput of `cells` cells.
pub fn clear_air_fronthaul(cells: u32, per_cell: DataRate) -> DataRate {
    per_cell.scale(cells as u64)
}

/// What to look up in a platform's derating table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AvailabilityTarget {
    /// Clear-air conditions: the full capacity of the available cells.
    ClearAir,
    /// A committed availability target.
    At(Availability),
}

/// Total fronthaul capacity of one platform at the requested target.
///
/// Exact anchors are returned as stored. A target strictly between two
/// anchors conservatively takes the next-higher anchor's capacity. A
/// target above the highest anchor is out of range.
pub fn derated_fronthaul(platform: &PlatformSpec, target: AvailabilityTarget) -> Result<DataRate> {
    match target {
        AvailabilityTarget::ClearAir => Ok(clear_air_fronthaul(
            available_cells(platform.layout_cells, platform.redundancy),
            platform.per_cell_clear_air,
        )),
        AvailabilityTarget::At(requested) => {
            if let Some(&rate) = platform.derating.get(&requested) {
                return Ok(rate);
            }
            match platform.derating.range(requested..).next() {
                Some((_, &rate)) => Ok(rate),
                None => {
                    let highest = platform
                        .derating
                        .keys()
                        .next_back()
                        .map(|a| a.to_string())
                        .unwrap_or_else(|| "none".to_string());
                    Err(Error::OutOfRange {
                        requested: requested.to_string(),
                        highest,
                    })
                }
            }
        }
    }
}

/// Average throughput per surface unit: `fronthaul / (area × contention)`
/// rounded half-up to 0.01 Mb/s/km².
pub fn throughput_density(
    fronthaul: DataRate,
    area: Area,
    contention: ContentionRatio,
) -> ThroughputDensity {
    // kb/s → Mb/s costs 10^3; two fractional output digits add 10^2;
    // the area and contention scales add 10^2 each.
    let numerator = fronthaul.kbps() as i128 * 100 * 100 * 100;
    let denominator = 1000 * area.hundredths_km2() as i128 * contention.hundredths() as i128;
    ThroughputDensity::from_hundredths(div_round_half_up(numerator, denominator) as u64)
}

/// Which constraint forces the fleet size (or breaks feasibility).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingConstraint {
    None,
    Coverage,
    Fronthaul,
    Gateway,
}

impl BindingConstraint {
    pub fn as_str(&self) -> &'static str {
        match self {
            BindingConstraint::None => "none",
            BindingConstraint::Coverage => "coverage",
            BindingConstraint::Fronthaul => "fronthaul",
            BindingConstraint::Gateway => "gateway",
        }
    }
}

/// Feasibility of serving a scenario with a platform class.
///
/// The three flags describe a single platform; `platforms_required` is
/// the minimum fleet size meeting both coverage and fronthaul, splitting
/// demand evenly across platforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub coverage_ok: bool,
    pub fronthaul_ok: bool,
    /// `None` when the platform's gateway capacity is unpublished.
    pub gateway_ok: Option<bool>,
    pub platforms_required: u32,
    pub binding_constraint: BindingConstraint,
}

/// Size the minimal fleet of `platform` covering the scenario's area and
/// backhaul demand at the requested availability.
pub fn fleet_feasibility(
    scenario: &ScenarioParams,
    platform: &PlatformSpec,
    availability: Availability,
) -> Result<FeasibilityReport> {
    let demand = scenario.total_demand();
    let derated = derated_fronthaul(platform, AvailabilityTarget::At(availability))?;

    let coverage_needed = (scenario.service_area.hundredths_km2() as u128)
        .div_ceil(platform.covered_area.hundredths_km2() as u128) as u64;
    let fronthaul_needed = if demand == DataRate::ZERO {
        1
    } else if derated == DataRate::ZERO {
        return Err(Error::validation(
            "derating",
            format!("derated fronthaul is zero at {availability}; demand cannot be met"),
        ));
    } else {
        (demand.kbps() as u128).div_ceil(derated.kbps() as u128) as u64
    };

    let required = coverage_needed.max(fronthaul_needed).max(1);
    let required =
        u32::try_from(required).map_err(|_| Error::validation("fleet", "required fleet size overflows"))?;

    let coverage_ok = coverage_needed <= 1;
    let fronthaul_ok = fronthaul_needed <= 1;
    let gateway_ok = platform.gateway_capacity.map(|gateway| gateway >= demand);

    let binding_constraint = if required > 1 {
        // The constraint still violated one platform short of the minimum.
        if (required as u64 - 1).saturating_mul(derated.kbps()) < demand.kbps() {
            BindingConstraint::Fronthaul
        } else {
            BindingConstraint::Coverage
        }
    } else if gateway_ok == Some(false) {
        BindingConstraint::Gateway
    } else {
        BindingConstraint::None
    };

    Ok(FeasibilityReport {
        coverage_ok,
        fronthaul_ok,
        gateway_ok,
        platforms_required: required,
        binding_constraint,
    })
}

/// Maximum wholesale links of `link_rate` sellable from `cells` cells at
/// `cell_rate`, oversubscribed by `contention`:
/// `floor(cells × cell_rate × contention / link_rate)`.
pub fn sellable_links(
    cells: u32,
    cell_rate: DataRate,
    contention: ContentionRatio,
    link_rate: DataRate,
) -> u64 {
    assert!(link_rate > DataRate::ZERO, "link rate must be positive");
    let numerator = cells as u128 * cell_rate.kbps() as u128 * contention.hundredths() as u128;
    (numerator / (100 * link_rate.kbps() as u128)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn subscriber_count_from_area_and_penetration() {
        let ten = SubscriberDensity::from_per_km2(10);
        assert_eq!(subscribers(Area::from_km2(1800), ten), 18_000);
        assert_eq!(subscribers(Area::from_km2(1800), SubscriberDensity::from_e4(0)), 0);
        assert_eq!(subscribers(Area::from_km2(2734), ten), 27_340);
        // Half-up at the grid: 10.55 km² × 10/km² = 105.5 → 106.
        assert_eq!(subscribers(Area::from_hundredths_km2(1055), ten), 106);
    }

    #[test]
    fn demand_is_sites_times_site_rates() {
        let (ul, dl) = (DataRate::from_mbps(2), DataRate::from_mbps(5));
        assert_eq!(backhaul_demand(108, ul, dl), DataRate::from_mbps(756));
        assert_eq!(backhaul_demand(1, ul, dl), DataRate::from_mbps(7));
        assert_eq!(backhaul_demand(108, DataRate::ZERO, DataRate::ZERO), DataRate::ZERO);
    }

    #[test]
    fn spectrum_for_the_default_scenario_is_385_mhz_on_6_transponders() {
        let plan = satellite_spectrum(
            DataRate::from_mbps(756),
            catalog::DEFAULT_SPECTRAL_EFFICIENCY,
            72,
        );
        assert_eq!(plan.required_bandwidth, BandwidthMhz::from_tenths(3850));
        assert_eq!(plan.transponder_count, 6);
    }

    #[test]
    fn spectrum_edge_cases() {
        let one = satellite_spectrum(DataRate::from_mbps(72), SpectralEfficiency::from_e4(10_000), 72);
        assert_eq!(one.required_bandwidth, BandwidthMhz::from_tenths(720));
        assert_eq!(one.transponder_count, 1);

        let two = satellite_spectrum(DataRate::from_mbps(756), SpectralEfficiency::from_e4(20_000), 72);
        assert_eq!(two.required_bandwidth, BandwidthMhz::from_tenths(3780));
        assert_eq!(two.transponder_count, 6);
    }

    #[test]
    fn available_cells_round_half_up() {
        assert_eq!(available_cells(19, RedundancyFraction::from_e4(500)), 18);
        assert_eq!(available_cells(121, RedundancyFraction::from_e4(2000)), 97);
        assert_eq!(available_cells(19, RedundancyFraction::from_e4(0)), 19);
    }

    #[test]
    fn clear_air_totals_for_both_platforms() {
        let per_cell = DataRate::from_mbps(120);
        assert_eq!(clear_air_fronthaul(18, per_cell), DataRate::from_mbps(2160));
        assert_eq!(clear_air_fronthaul(97, per_cell), DataRate::from_mbps(11_640));
        assert_eq!(clear_air_fronthaul(0, per_cell), DataRate::ZERO);
    }

    #[test]
    fn derating_lookup_exact_and_clear_air() {
        let plane = catalog::solar_plane();
        let airship = catalog::airship();
        let at = |f| AvailabilityTarget::At(Availability::from_fraction_f64(f, "t").unwrap());
        assert_eq!(derated_fronthaul(&plane, at(0.999)).unwrap(), DataRate::from_mbps(360));
        assert_eq!(derated_fronthaul(&airship, at(0.999)).unwrap(), DataRate::from_mbps(1940));
        assert_eq!(
            derated_fronthaul(&plane, AvailabilityTarget::ClearAir).unwrap(),
            DataRate::from_mbps(2160)
        );
    }

    #[test]
    fn derating_between_anchors_takes_the_next_higher_anchor() {
        let plane = catalog::solar_plane();
        let at = |f| AvailabilityTarget::At(Availability::from_fraction_f64(f, "t").unwrap());
        // 0.995 sits between the 0.99 and 0.999 anchors: conservative 360.
        assert_eq!(derated_fronthaul(&plane, at(0.995)).unwrap(), DataRate::from_mbps(360));
        // Above the highest anchor there is no committed capacity.
        assert!(matches!(
            derated_fronthaul(&plane, at(0.9999)),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn throughput_density_at_reference_contention() {
        let four = ContentionRatio::from_hundredths(400);
        assert_eq!(
            throughput_density(DataRate::from_mbps(2160), Area::from_km2(2734), four),
            ThroughputDensity::from_hundredths(20)
        );
        assert_eq!(
            throughput_density(DataRate::from_mbps(11_640), Area::from_km2(2827), four),
            ThroughputDensity::from_hundredths(103)
        );
        assert_eq!(
            throughput_density(
                DataRate::from_mbps(2160),
                Area::from_km2(2734),
                ContentionRatio::from_hundredths(100)
            ),
            ThroughputDensity::from_hundredths(79)
        );
    }

    #[test]
    fn fleet_sizing_for_the_default_scenario() {
        let params = catalog::default_params();
        let plane = catalog::solar_plane();
        let airship = catalog::airship();
        let a = |f| Availability::from_fraction_f64(f, "a").unwrap();

        let plane_99 = fleet_feasibility(&params, &plane, a(0.99)).unwrap();
        assert!(plane_99.coverage_ok && plane_99.fronthaul_ok);
        assert_eq!(plane_99.gateway_ok, Some(true));
        assert_eq!(plane_99.platforms_required, 1);
        assert_eq!(plane_99.binding_constraint, BindingConstraint::None);

        let plane_999 = fleet_feasibility(&params, &plane, a(0.999)).unwrap();
        assert!(plane_999.coverage_ok);
        assert!(!plane_999.fronthaul_ok); // 360 < 756 on one platform
        assert_eq!(plane_999.platforms_required, 3); // ceil(756 / 360)
        assert_eq!(plane_999.binding_constraint, BindingConstraint::Fronthaul);

        let airship_999 = fleet_feasibility(&params, &airship, a(0.999)).unwrap();
        assert!(airship_999.coverage_ok && airship_999.fronthaul_ok);
        assert_eq!(airship_999.gateway_ok, None);
        assert_eq!(airship_999.platforms_required, 1);
    }

    #[test]
    fn sellable_links_floor_division() {
        let eighty = DataRate::from_mbps(80);
        let ten = DataRate::from_mbps(10);
        assert_eq!(sellable_links(18, eighty, ContentionRatio::from_hundredths(400), ten), 576);
        assert_eq!(sellable_links(18, eighty, ContentionRatio::from_hundredths(100), ten), 144);
        assert_eq!(sellable_links(0, eighty, ContentionRatio::from_hundredths(400), ten), 0);
    }
}
