//! Cost rollups, amortization, per-subscriber cost, NPV/IRR,
//! learning-curve fleet costing, the wholesale demand/income/utilization
//! forecast and the end-to-end architecture assessment.

use std::collections::BTreeMap;

use crate::dimensioning::{
    self, AvailabilityTarget, FeasibilityReport, SpectrumPlan,
};
use crate::error::{Error, Result};
use crate::money::Money;
use crate::scenario::{
    ArchitectureConfig, CostItem, CostPhase, HapDirectConfig, IntegratedConfig, OfferTier,
    PlatformSpec, SatelliteConfig, Scenario, SiteClass, WholesaleOffer,
};
use crate::units::{
    div_round_half_up, Availability, DataRate, Percent, ThroughputDensity,
};

// ---------------------------------------------------------------------------
// Cost rollups
// ---------------------------------------------------------------------------

/// Exact capex/opex totals per site class.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassTotals {
    pub capex: Money,
    pub opex_annual: Money,
}

/// Exact cost rollup; totals equal the sum over `by_site_class`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CostRollup {
    pub capex_total: Money,
    pub opex_annual_total: Money,
    pub by_site_class: BTreeMap<SiteClass, ClassTotals>,
    pub items: Vec<CostItem>,
}

/// Sum a cost catalog, exactly, per phase and site class.
pub fn rollup(items: &[CostItem]) -> CostRollup {
    let mut result = CostRollup {
        items: items.to_vec(),
        ..CostRollup::default()
    };
    for item in items {
        let extended = item.extended_cost();
        let class = result.by_site_class.entry(item.site_class).or_default();
        match item.phase {
            CostPhase::Capex => {
                class.capex += extended;
                result.capex_total += extended;
            }
            CostPhase::OpexAnnual => {
                class.opex_annual += extended;
                result.opex_annual_total += extended;
            }
        }
    }
    result
}

// ---------------------------------------------------------------------------
// Amortization and per-subscriber cost
// ---------------------------------------------------------------------------

/// Monthly share of a capital cost amortized over `months`, half-up.
pub fn amortized_monthly(capex: Money, months: u32) -> Money {
    assert!(months >= 1, "amortization needs at least one month");
    capex.div_round(months as i64)
}

/// Monthly cost per subscriber:
/// `(amortized capex + opex / 12) / subscribers`, half-up to a cent.
pub fn per_subscriber_monthly(
    capex: Money,
    opex_annual: Money,
    months: u32,
    subscribers: u64,
) -> Result<Money> {
    if subscribers == 0 {
        return Err(Error::validation(
            "subscribers",
            "per-subscriber cost is undefined for zero subscribers",
        ));
    }
    let monthly = amortized_monthly(capex, months) + opex_annual.div_round(12);
    Ok(monthly.div_round(subscribers as i64))
}

// ---------------------------------------------------------------------------
// Discounted cash flows
// ---------------------------------------------------------------------------

/// One dated cash movement; negative amounts are outflows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CashFlow {
    pub period: u32,
    pub amount: Money,
}

/// A cash-flow series with strictly increasing periods starting at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CashFlowSeries {
    flows: Vec<CashFlow>,
}

impl CashFlowSeries {
    pub fn new(flows: Vec<CashFlow>) -> Result<CashFlowSeries> {
        if flows.is_empty() {
            return Err(Error::validation("cash_flows", "series must not be empty"));
        }
        if flows[0].period != 0 {
            return Err(Error::validation("cash_flows", "first period must be 0"));
        }
        for pair in flows.windows(2) {
            if pair[1].period <= pair[0].period {
                return Err(Error::validation(
                    "cash_flows",
                    "periods must be strictly increasing",
                ));
            }
        }
        Ok(CashFlowSeries { flows })
    }

    /// Yearly amounts in period order, periods 0..n-1.
    pub fn from_amounts(amounts: &[Money]) -> Result<CashFlowSeries> {
        CashFlowSeries::new(
            amounts
                .iter()
                .enumerate()
                .map(|(period, &amount)| CashFlow {
                    period: period as u32,
                    amount,
                })
                .collect(),
        )
    }

    pub fn flows(&self) -> &[CashFlow] {
        &self.flows
    }

    fn has_sign_change(&self) -> bool {
        let any_positive = self.flows.iter().any(|f| f.amount > Money::ZERO);
        let any_negative = self.flows.iter().any(|f| f.amount < Money::ZERO);
        any_positive && any_negative
    }

    fn npv_f64_cents(&self, rate: f64) -> f64 {
        self.flows
            .iter()
            .map(|flow| flow.amount.cents() as f64 / (1.0 + rate).powi(flow.period as i32))
            .sum()
    }
}

/// Net present value `Σ amount_t / (1+r)^t`, rounded half-up to a cent.
pub fn npv(flows: &CashFlowSeries, discount_rate: f64) -> Result<Money> {
    if !discount_rate.is_finite() || discount_rate <= -1.0 {
        return Err(Error::validation(
            "discount_rate",
            "must be a finite number above -1",
        ));
    }
    let cents = flows.npv_f64_cents(discount_rate);
    Ok(Money::from_cents((cents + 0.5).floor() as i64))
}

/// IRR result; `multiple_roots` warns that the NPV curve crossed zero
/// more than once and the root nearest zero was returned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrrOutcome {
    pub rate: f64,
    pub multiple_roots: bool,
}

const IRR_LOW: f64 = -0.99;
const IRR_HIGH: f64 = 10.0;
const IRR_SCAN_STEPS: u32 = 1200;

/// Internal rate of return: the discount rate in (-0.99, 10.0) where the
/// NPV crosses zero, found by a bracket scan plus bisection. Series with
/// one sign change have a unique root; series with several candidate
/// roots return the one nearest zero, flagged.
pub fn irr(flows: &CashFlowSeries) -> Result<IrrOutcome> {
    if !flows.has_sign_change() {
        return Err(Error::NoSignChange);
    }

    let mut roots: Vec<f64> = Vec::new();
    let step = (IRR_HIGH - IRR_LOW) / IRR_SCAN_STEPS as f64;
    let mut previous_rate = IRR_LOW;
    let mut previous_npv = flows.npv_f64_cents(previous_rate);
    for i in 1..=IRR_SCAN_STEPS {
        let rate = IRR_LOW + step * i as f64;
        let value = flows.npv_f64_cents(rate);
        if previous_npv == 0.0 {
            push_root(&mut roots, previous_rate);
        } else if previous_npv * value < 0.0 {
            push_root(&mut roots, bisect(flows, previous_rate, rate));
        }
        previous_rate = rate;
        previous_npv = value;
    }
    if previous_npv == 0.0 {
        push_root(&mut roots, previous_rate);
    }

    match roots.len() {
        0 => Err(Error::NoRootInRange),
        count => {
            let nearest = roots
                .iter()
                .copied()
                .min_by(|a, b| a.abs().partial_cmp(&b.abs()).expect("finite rates"))
                .expect("at least one root");
            Ok(IrrOutcome {
                rate: nearest,
                multiple_roots: count > 1,
            })
        }
    }
}

fn push_root(roots: &mut Vec<f64>, root: f64) {
    // The scan can re-detect the same root at a bracket edge.
    if roots.iter().all(|r| (r - root).abs() > 1e-7) {
        roots.push(root);
    }
}

fn bisect(flows: &CashFlowSeries, mut low: f64, mut high: f64) -> f64 {
    let mut low_value = flows.npv_f64_cents(low);
    for _ in 0..200 {
        let mid = 0.5 * (low + high);
        let mid_value = flows.npv_f64_cents(mid);
        // Stop well inside a tenth of a cent so the rounded NPV is zero.
        if mid_value.abs() < 0.1 && (high - low) < 1e-12 {
            return mid;
        }
        if low_value * mid_value <= 0.0 {
            high = mid;
        } else {
            low = mid;
            low_value = mid_value;
        }
    }
    0.5 * (low + high)
}

// ---------------------------------------------------------------------------
// Learning-curve costing
// ---------------------------------------------------------------------------

/// Cost of the n-th produced unit under a learning effect:
/// `first_unit × n^(log2 rate)`, half-up to a cent. A rate of 0.8 means
/// every doubling of cumulative units cuts the unit cost by 20%.
pub fn learning_unit_cost(first_unit: Money, unit_index: u64, learning_rate: f64) -> Money {
    assert!(unit_index >= 1, "unit index starts at 1");
    assert!(
        learning_rate > 0.0 && learning_rate <= 1.0,
        "learning rate must lie in (0, 1]"
    );
    if unit_index == 1 || learning_rate == 1.0 {
        return first_unit;
    }
    let factor = (unit_index as f64).powf(learning_rate.log2());
    first_unit.scale_f64_round(factor)
}

/// Acquisition cost of a fleet of `count` units under the learning effect.
pub fn fleet_acquisition_cost(first_unit: Money, count: u32, learning_rate: f64) -> Money {
    (1..=count as u64)
        .map(|index| learning_unit_cost(first_unit, index, learning_rate))
        .sum()
}

// ---------------------------------------------------------------------------
// Wholesale forecast
// ---------------------------------------------------------------------------

/// Yearly wholesale income `12 × Σ links × monthly price`, exact.
pub fn wholesale_income(
    row_demand: &BTreeMap<String, u64>,
    offers: &[WholesaleOffer],
) -> Result<Money> {
    let mut total = Money::ZERO;
    for (offer_id, &links) in row_demand {
        let offer = offers
            .iter()
            .find(|o| &o.id == offer_id)
            .ok_or_else(|| Error::UnknownReference {
                kind: "offer",
                id: offer_id.clone(),
            })?;
        total += offer
            .monthly_price
            .scale(u32::try_from(links).map_err(|_| {
                Error::validation("demand", format!("link count {links} too large"))
            })?)
            .scale(12);
    }
    Ok(total)
}

/// Sold share of the sellable link capacity, half-up to 0.1%.
pub fn utilization(row_demand: &BTreeMap<String, u64>, sellable: u64) -> Result<Percent> {
    assert!(sellable >= 1, "sellable capacity must be positive");
    let total: u64 = row_demand.values().sum();
    if total > sellable {
        return Err(Error::CapacityExceeded {
            year: None,
            demanded: total,
            sellable,
        });
    }
    let tenths = div_round_half_up(total as i128 * 1000, sellable as i128) as u32;
    Ok(Percent::from_tenths(tenths))
}

/// One forecast year: demand per offer, utilization and income.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForecastRow {
    pub year: u32,
    pub links_by_offer: BTreeMap<String, u64>,
    pub total_links: u64,
    pub utilization: Percent,
    pub income_annual: Money,
}

/// Build forecast rows for years `0..years`, bounded by the schedule.
pub fn forecast(
    config: &IntegratedConfig,
    offers: &[WholesaleOffer],
    sellable: u64,
    years: u32,
) -> Result<Vec<ForecastRow>> {
    if years == 0 {
        return Err(Error::validation("years", "must be at least 1"));
    }
    if years > config.demand.year_count() {
        return Err(Error::validation(
            "years",
            format!(
                "demand schedule covers {} years; {years} requested",
                config.demand.year_count()
            ),
        ));
    }
    let mut rows = Vec::with_capacity(years as usize);
    for year in 0..years {
        let links = config
            .demand
            .year(year)
            .expect("years bounded by the schedule");
        let used = utilization(links, sellable).map_err(|err| match err {
            Error::CapacityExceeded {
                demanded, sellable, ..
            } => Error::CapacityExceeded {
                year: Some(year),
                demanded,
                sellable,
            },
            other => other,
        })?;
        rows.push(ForecastRow {
            year,
            links_by_offer: links.clone(),
            total_links: links.values().sum(),
            utilization: used,
            income_annual: wholesale_income(links, offers)?,
        });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Assessment
// ---------------------------------------------------------------------------

/// Platform dimensioning summary carried in assessment reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlatformSummary {
    pub id: String,
    pub kind: &'static str,
    pub layout_cells: u32,
    pub available_cells: u32,
    pub covered_area: crate::units::Area,
    pub clear_air_fronthaul: DataRate,
    /// Capacity at the availability the architecture commits to.
    pub derated_fronthaul: DataRate,
    pub gateway_capacity: Option<DataRate>,
    /// Clear-air areal throughput at the reference 4:1 contention.
    pub throughput_density: ThroughputDensity,
}

fn platform_summary(id: &str, platform: &PlatformSpec, derated: DataRate) -> PlatformSummary {
    let cells = dimensioning::available_cells(platform.layout_cells, platform.redundancy);
    let clear_air = dimensioning::clear_air_fronthaul(cells, platform.per_cell_clear_air);
    PlatformSummary {
        id: id.to_string(),
        kind: platform.kind.as_str(),
        layout_cells: platform.layout_cells,
        available_cells: cells,
        covered_area: platform.covered_area,
        clear_air_fronthaul: clear_air,
        derated_fronthaul: derated,
        gateway_capacity: platform.gateway_capacity,
        throughput_density: dimensioning::throughput_density(
            clear_air,
            platform.covered_area,
            crate::catalog::REFERENCE_DENSITY_CONTENTION,
        ),
    }
}

/// Everything one architecture assessment produces. A pure function of
/// the scenario: identical inputs give identical reports.
#[derive(Debug, Clone, PartialEq)]
pub struct AssessmentReport {
    pub architecture_id: String,
    pub architecture_kind: &'static str,
    pub subscribers: u64,
    pub total_demand: DataRate,
    pub committed_availability: Availability,
    pub spectrum: Option<SpectrumPlan>,
    pub platform: Option<PlatformSummary>,
    pub feasibility: Option<FeasibilityReport>,
    pub platforms_used: Option<u32>,
    pub costs: CostRollup,
    pub per_subscriber_monthly: Money,
    pub arpu_monthly: Money,
    pub above_arpu: bool,
    pub sellable_links: Option<u64>,
    pub forecast: Option<Vec<ForecastRow>>,
    pub operator_npv: Option<Money>,
    pub operator_irr: Option<f64>,
    pub operator_flows: Option<CashFlowSeries>,
    pub horizon_years: u32,
    pub discount_rate: f64,
    pub notes: Vec<String>,
}

/// Assess one architecture end to end: dimensioning, feasibility, cost
/// rollup, per-subscriber cost against ARPU and, for the wholesale
/// model, the forecast and the operator's discounted cash flow.
pub fn assess(
    scenario: &Scenario,
    architecture_id: &str,
    horizon_years: Option<u32>,
    discount_rate: f64,
) -> Result<AssessmentReport> {
    let architecture = scenario.architecture(architecture_id)?;
    match architecture {
        ArchitectureConfig::Satellite(config) => {
            assess_satellite(scenario, architecture_id, config, discount_rate)
        }
        ArchitectureConfig::HapDirect(config) => {
            assess_hap_direct(scenario, architecture_id, config, discount_rate)
        }
        ArchitectureConfig::Integrated(config) => {
            assess_integrated(scenario, architecture_id, config, horizon_years, discount_rate)
        }
    }
}

fn assess_satellite(
    scenario: &Scenario,
    id: &str,
    config: &SatelliteConfig,
    discount_rate: f64,
) -> Result<AssessmentReport> {
    let params = &scenario.params;
    let demand = params.total_demand();
    let spectrum = dimensioning::satellite_spectrum(
        demand,
        config.spectral_efficiency,
        config.transponder_bandwidth_mhz,
    );

    let mut items = config.cost_catalog.clone();
    if config.annual_lease_per_mhz > Money::ZERO {
        let lease_total = config
            .annual_lease_per_mhz
            .mul_rational(spectrum.required_bandwidth.tenths() as i64, 10);
        items.push(CostItem {
            label: format!("space segment lease ({})", spectrum.required_bandwidth),
            phase: CostPhase::OpexAnnual,
            site_class: SiteClass::SpaceSegmentLease,
            unit_cost: lease_total,
            quantity: 1,
        });
    }
    let costs = rollup(&items);

    let subscribers = dimensioning::subscribers(params.service_area, params.penetration);
    let per_subscriber = per_subscriber_monthly(
        costs.capex_total,
        costs.opex_annual_total,
        params.amortization_months,
        subscribers,
    )?;

    Ok(AssessmentReport {
        architecture_id: id.to_string(),
        architecture_kind: "satellite",
        subscribers,
        total_demand: demand,
        committed_availability: config.link_availability,
        spectrum: Some(spectrum),
        platform: None,
        feasibility: None,
        platforms_used: None,
        above_arpu: per_subscriber > params.arpu_monthly,
        per_subscriber_monthly: per_subscriber,
        arpu_monthly: params.arpu_monthly,
        costs,
        sellable_links: None,
        forecast: None,
        operator_npv: None,
        operator_irr: None,
        operator_flows: None,
        horizon_years: 1,
        discount_rate,
        notes: vec!["coverage provided by the leased space segment".to_string()],
    })
}

fn assess_hap_direct(
    scenario: &Scenario,
    id: &str,
    config: &HapDirectConfig,
    discount_rate: f64,
) -> Result<AssessmentReport> {
    let params = &scenario.params;
    let platform = scenario.platform(&config.platform_id)?;
    let feasibility = dimensioning::fleet_feasibility(params, platform, config.fronthaul_availability)?;

    let platforms_used = match config.platform_count {
        Some(forced) if forced < feasibility.platforms_required => {
            return Err(Error::Infeasible {
                architecture: id.to_string(),
                detail: format!(
                    "{forced} platform(s) forced but {} required; binding constraint: {}",
                    feasibility.platforms_required,
                    feasibility.binding_constraint.as_str()
                ),
                report: Some(feasibility),
            });
        }
        Some(forced) => forced,
        None => feasibility.platforms_required,
    };

    let fleet_capex = fleet_acquisition_cost(platform.capex_per_unit, platforms_used, config.learning_rate);
    let mut items = vec![
        CostItem {
            label: format!("aerial platform acquisition ({platforms_used} unit(s))"),
            phase: CostPhase::Capex,
            site_class: SiteClass::Platform,
            unit_cost: fleet_capex,
            quantity: 1,
        },
        CostItem {
            label: "platform operation".to_string(),
            phase: CostPhase::OpexAnnual,
            site_class: SiteClass::Platform,
            unit_cost: platform.opex_per_unit_year,
            quantity: platforms_used,
        },
        CostItem {
            label: "ground segment (CPE, collection point, backbone interconnect)".to_string(),
            phase: CostPhase::Capex,
            site_class: SiteClass::AggregationSite,
            unit_cost: config.ground_capex,
            quantity: 1,
        },
        CostItem {
            label: "ground segment operation and backbone fees".to_string(),
            phase: CostPhase::OpexAnnual,
            site_class: SiteClass::AggregationSite,
            unit_cost: config.ground_opex_annual,
            quantity: 1,
        },
    ];
    let mut notes = Vec::new();
    if config.include_development_cost {
        items.push(CostItem {
            label: "platform development".to_string(),
            phase: CostPhase::Capex,
            site_class: SiteClass::Platform,
            unit_cost: platform.development_cost,
            quantity: 1,
        });
    } else {
        notes.push("platform development cost excluded".to_string());
    }
    let costs = rollup(&items);

    let subscribers = dimensioning::subscribers(params.service_area, params.penetration);
    let per_subscriber = per_subscriber_monthly(
        costs.capex_total,
        costs.opex_annual_total,
        params.amortization_months,
        subscribers,
    )?;

    let derated = dimensioning::derated_fronthaul(
        platform,
        AvailabilityTarget::At(config.fronthaul_availability),
    )?;

    Ok(AssessmentReport {
        architecture_id: id.to_string(),
        architecture_kind: "hap_direct",
        subscribers,
        total_demand: params.total_demand(),
        committed_availability: config.fronthaul_availability,
        spectrum: None,
        platform: Some(platform_summary(&config.platform_id, platform, derated)),
        feasibility: Some(feasibility),
        platforms_used: Some(platforms_used),
        above_arpu: per_subscriber > params.arpu_monthly,
        per_subscriber_monthly: per_subscriber,
        arpu_monthly: params.arpu_monthly,
        costs,
        sellable_links: None,
        forecast: None,
        operator_npv: None,
        operator_irr: None,
        operator_flows: None,
        horizon_years: 1,
        discount_rate,
        notes,
    })
}

fn assess_integrated(
    scenario: &Scenario,
    id: &str,
    config: &IntegratedConfig,
    horizon_years: Option<u32>,
    discount_rate: f64,
) -> Result<AssessmentReport> {
    let params = &scenario.params;
    let platform = scenario.platform(&config.platform_id)?;
    let offers: Vec<WholesaleOffer> = config
        .offer_ids
        .iter()
        .map(|offer_id| scenario.offer(offer_id).cloned())
        .collect::<Result<_>>()?;
    let link_rate = offers
        .first()
        .map(|o| o.link_rate)
        .ok_or_else(|| Error::MissingParameter("wholesale offers".to_string()))?;

    let cells = dimensioning::available_cells(platform.layout_cells, platform.redundancy);
    let sellable_per_platform =
        dimensioning::sellable_links(cells, config.cell_rate_at_class, config.contention, link_rate);
    let sellable = sellable_per_platform
        .checked_mul(config.platform_count as u64)
        .expect("sellable link count overflow");

    let horizon = horizon_years.unwrap_or_else(|| config.demand.year_count());
    let rows = forecast(config, &offers, sellable, horizon)?;

    // Buyer side: simple aerial links for every cell site plus the
    // lightweight ground equipment, amortized like any other capex.
    let aerial_offer = offers
        .iter()
        .find(|o| o.tier == OfferTier::AerialOnly)
        .ok_or_else(|| Error::MissingParameter("an aerial_only offer".to_string()))?;
    let items = vec![
        CostItem {
            label: "CPE and collection equipment".to_string(),
            phase: CostPhase::Capex,
            site_class: SiteClass::CellSite,
            unit_cost: config.mno_ground_capex,
            quantity: 1,
        },
        CostItem {
            label: format!("wholesale aerial links ({} per site-year)", aerial_offer.monthly_price),
            phase: CostPhase::OpexAnnual,
            site_class: SiteClass::BackboneFee,
            unit_cost: aerial_offer.monthly_price.scale(12),
            quantity: params.site_count,
        },
    ];
    let costs = rollup(&items);

    let subscribers = dimensioning::subscribers(params.service_area, params.penetration);
    let per_subscriber = per_subscriber_monthly(
        costs.capex_total,
        costs.opex_annual_total,
        params.amortization_months,
        subscribers,
    )?;

    // Seller side: platform development and acquisition up front, then
    // yearly wholesale income net of platform operation.
    let fleet_capex =
        fleet_acquisition_cost(platform.capex_per_unit, config.platform_count, config.learning_rate);
    let development = if config.include_development_cost {
        platform.development_cost
    } else {
        Money::ZERO
    };
    let yearly_opex = platform.opex_per_unit_year.scale(config.platform_count);
    let amounts: Vec<Money> = rows
        .iter()
        .map(|row| {
            let net = row.income_annual - yearly_opex;
            if row.year == 0 {
                net - fleet_capex - development
            } else {
                net
            }
        })
        .collect();
    let flows = CashFlowSeries::from_amounts(&amounts)?;
    let operator_npv = npv(&flows, discount_rate)?;
    let mut notes = Vec::new();
    let operator_irr = match irr(&flows) {
        Ok(outcome) => {
            if outcome.multiple_roots {
                notes.push("operator IRR: several NPV roots; nearest zero reported".to_string());
            }
            Some(outcome.rate)
        }
        Err(err) => {
            notes.push(format!("operator IRR undefined: {err}"));
            None
        }
    };
    if !config.include_development_cost {
        notes.push("platform development cost excluded from operator flows".to_string());
    }

    let feasibility = dimensioning::fleet_feasibility(params, platform, config.availability_class)?;
    let derated =
        dimensioning::derated_fronthaul(platform, AvailabilityTarget::At(config.availability_class))?;

    Ok(AssessmentReport {
        architecture_id: id.to_string(),
        architecture_kind: "integrated",
        subscribers,
        total_demand: params.total_demand(),
        committed_availability: config.availability_class,
        spectrum: None,
        platform: Some(platform_summary(&config.platform_id, platform, derated)),
        feasibility: Some(feasibility),
        platforms_used: Some(config.platform_count),
        above_arpu: per_subscriber > params.arpu_monthly,
        per_subscriber_monthly: per_subscriber,
        arpu_monthly: params.arpu_monthly,
        costs,
        sellable_links: Some(sellable),
        forecast: Some(rows),
        operator_npv: Some(operator_npv),
        operator_irr,
        operator_flows: Some(flows),
        horizon_years: horizon,
        discount_rate,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scenario::{validate, ScenarioDocument};

    fn meur(value: i64) -> Money {
        Money::from_meur(value)
    }

    #[test]
    fn rollup_reproduces_the_published_satellite_totals() {
        let result = rollup(&catalog::satellite_cost_catalog());
        assert_eq!(result.capex_total, Money::from_cents(632_000_000));
        assert_eq!(result.opex_annual_total, Money::from_cents(1_134_000_000));
        assert_eq!(result.opex_annual_total.to_string(), "11.3 M€");

        let cell_sites = &result.by_site_class[&SiteClass::CellSite];
        assert_eq!(cell_sites.capex, Money::from_keur(50).scale(108));

        assert_eq!(rollup(&[]), CostRollup::default());
    }

    #[test]
    fn rollup_totals_match_by_class_sums() {
        let result = rollup(&catalog::satellite_cost_catalog());
        let capex: Money = result.by_site_class.values().map(|c| c.capex).sum();
        let opex: Money = result.by_site_class.values().map(|c| c.opex_annual).sum();
        assert_eq!(capex, result.capex_total);
        assert_eq!(opex, result.opex_annual_total);
    }

    #[test]
    fn amortization_examples() {
        assert_eq!(amortized_monthly(meur(47).div_round(10), 60).cents(), 7_833_333);
        assert_eq!(amortized_monthly(Money::ZERO, 60), Money::ZERO);
        assert_eq!(
            amortized_monthly(Money::from_cents(632_000_000), 60).cents(),
            10_533_333
        );
    }

    #[test]
    fn per_subscriber_cost_examples() {
        // 4.7 M€ capex, 1.1 M€ yearly opex, 60 months, 18000 subscribers.
        let direct = per_subscriber_monthly(
            Money::from_cents(470_000_000),
            Money::from_cents(110_000_000),
            60,
            18_000,
        )
        .unwrap();
        assert_eq!(direct.cents(), 944);

        // 0.7 M€ capex plus 108 yearly link fees at 250 €/month.
        let wholesale = per_subscriber_monthly(
            Money::from_cents(70_000_000),
            Money::from_eur(250).scale(12).scale(108),
            60,
            18_000,
        )
        .unwrap();
        assert_eq!(wholesale.cents(), 215);

        assert_eq!(
            per_subscriber_monthly(Money::ZERO, Money::ZERO, 60, 18_000).unwrap(),
            Money::ZERO
        );
        assert!(per_subscriber_monthly(meur(1), Money::ZERO, 60, 0).is_err());
    }

    #[test]
    fn npv_examples() {
        let flows = CashFlowSeries::from_amounts(&[Money::from_eur(-100), Money::from_eur(110)]).unwrap();
        assert_eq!(npv(&flows, 0.0).unwrap(), Money::from_eur(10));
        assert_eq!(npv(&flows, 0.10).unwrap(), Money::ZERO);
        assert!(npv(&flows, -1.0).is_err());
    }

    #[test]
    fn irr_examples() {
        let flows = CashFlowSeries::from_amounts(&[Money::from_eur(-100), Money::from_eur(110)]).unwrap();
        let outcome = irr(&flows).unwrap();
        assert!((outcome.rate - 0.10).abs() < 1e-9, "{}", outcome.rate);
        assert!(!outcome.multiple_roots);

        let two = CashFlowSeries::from_amounts(&[
            Money::from_eur(-100),
            Money::from_eur(50),
            Money::from_eur(60),
        ])
        .unwrap();
        let outcome = irr(&two).unwrap();
        assert!((outcome.rate - 0.0639).abs() < 5e-4, "{}", outcome.rate);

        let none = CashFlowSeries::from_amounts(&[Money::from_eur(100), Money::from_eur(110)]).unwrap();
        assert!(matches!(irr(&none), Err(Error::NoSignChange)));
    }

    #[test]
    fn npv_at_irr_rounds_to_zero() {
        let flows = CashFlowSeries::from_amounts(&[
            Money::from_eur(-1000),
            Money::from_eur(300),
            Money::from_eur(400),
            Money::from_eur(500),
        ])
        .unwrap();
        let outcome = irr(&flows).unwrap();
        assert_eq!(npv(&flows, outcome.rate).unwrap(), Money::ZERO);
    }

    #[test]
    fn learning_curve_examples() {
        assert_eq!(learning_unit_cost(meur(4), 1, 0.8), meur(4));
        assert_eq!(learning_unit_cost(meur(4), 2, 0.8).cents(), 320_000_000);
        assert_eq!(learning_unit_cost(meur(4), 4, 0.8).cents(), 256_000_000);

        assert_eq!(fleet_acquisition_cost(meur(4), 1, 0.8), meur(4));
        assert_eq!(fleet_acquisition_cost(meur(4), 2, 0.8).cents(), 720_000_000);
        assert_eq!(fleet_acquisition_cost(meur(4), 3, 1.0), meur(12));
    }

    #[test]
    fn wholesale_income_examples() {
        let offers = catalog::reference_offers();
        let demand = catalog::reference_demand();
        let year0 = wholesale_income(demand.year(0).unwrap(), &offers).unwrap();
        assert_eq!(year0.cents(), 367_200_000); // 3.672 M€
        assert_eq!(year0.to_string(), "3.7 M€");

        let year9 = wholesale_income(demand.year(9).unwrap(), &offers).unwrap();
        assert_eq!(year9.cents(), 587_400_000); // 5.874 M€
        assert_eq!(year9.to_string(), "5.9 M€");

        assert_eq!(wholesale_income(&BTreeMap::new(), &offers).unwrap(), Money::ZERO);
    }

    #[test]
    fn utilization_examples() {
        let demand = catalog::reference_demand();
        assert_eq!(utilization(demand.year(0).unwrap(), 576).unwrap(), Percent::from_tenths(632));
        assert_eq!(utilization(demand.year(6).unwrap(), 576).unwrap(), Percent::from_tenths(858));
        assert_eq!(utilization(demand.year(9).unwrap(), 576).unwrap(), Percent::from_tenths(1000));

        let mut over = BTreeMap::new();
        over.insert("aerial".to_string(), 600u64);
        assert!(matches!(
            utilization(&over, 576),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    fn bundled_scenario() -> Scenario {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/default.toml");
        crate::scenario::load(std::path::Path::new(path)).expect("bundled scenario validates")
    }

    #[test]
    fn assess_satellite_matches_the_published_rollup() {
        let scenario = bundled_scenario();
        let report = assess(&scenario, "sat", None, 0.0).unwrap();
        assert_eq!(report.costs.capex_total.cents(), 632_000_000);
        assert_eq!(report.costs.opex_annual_total.cents(), 1_134_000_000);
        assert!(report.above_arpu);
        let spectrum = report.spectrum.unwrap();
        assert_eq!(spectrum.required_bandwidth.tenths(), 3850);
        assert_eq!(spectrum.transponder_count, 6);
    }

    #[test]
    fn assess_hap_direct_matches_the_published_totals() {
        let scenario = bundled_scenario();
        let report = assess(&scenario, "hap-2a", None, 0.0).unwrap();
        assert_eq!(report.costs.capex_total.cents(), 470_000_000);
        assert_eq!(report.costs.opex_annual_total.cents(), 110_000_000);
        assert_eq!(report.per_subscriber_monthly.cents(), 944);
        assert!(report.above_arpu);
        assert_eq!(report.platforms_used, Some(1));

        let report_2b = assess(&scenario, "hap-2b", None, 0.0).unwrap();
        assert_eq!(report_2b.costs.capex_total.cents(), 3_090_000_000);
        assert_eq!(report_2b.costs.opex_annual_total.cents(), 410_000_000);
    }

    #[test]
    fn forced_single_platform_at_three_nines_is_infeasible() {
        let scenario = bundled_scenario();
        let err = assess(&scenario, "hap-plane-999", None, 0.0).unwrap_err();
        match err {
            Error::Infeasible { report, detail, .. } => {
                let report = report.unwrap();
                assert!(!report.fronthaul_ok);
                assert_eq!(report.platforms_required, 3);
                assert!(detail.contains("fronthaul"), "{detail}");
            }
            other => panic!("expected infeasible, got {other}"),
        }
    }

    #[test]
    fn assess_integrated_reproduces_the_wholesale_forecast() {
        let scenario = bundled_scenario();
        let report = assess(&scenario, "integrated", None, 0.0).unwrap();
        assert_eq!(report.sellable_links, Some(576));
        assert_eq!(report.per_subscriber_monthly.cents(), 215);
        assert!(!report.above_arpu);
        let rows = report.forecast.as_ref().unwrap();
        assert_eq!(rows.len(), 10);
        assert_eq!(rows[0].income_annual.cents(), 367_200_000);
        assert_eq!(rows[3].income_annual.cents(), 462_000_000);
        assert_eq!(rows[6].income_annual.cents(), 562_800_000);
        assert_eq!(rows[9].income_annual.cents(), 587_400_000);
        assert_eq!(rows[9].utilization, Percent::from_tenths(1000));

        // Operator flows at zero discount equal the plain sum: total
        // income minus ten years of operation minus development and
        // one platform unit.
        let flows = report.operator_flows.as_ref().unwrap();
        let exact: Money = flows.flows().iter().map(|f| f.amount).sum();
        assert_eq!(report.operator_npv, Some(exact));
    }

    #[test]
    fn assessment_is_deterministic() {
        let scenario = bundled_scenario();
        let first = assess(&scenario, "integrated", None, 0.0).unwrap();
        let second = assess(&scenario, "integrated", None, 0.0).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn empty_scenario_document_assesses_nothing() {
        let scenario = validate(&ScenarioDocument::default()).unwrap();
        assert!(matches!(
            assess(&scenario, "sat", None, 0.0),
            Err(Error::UnknownReference { .. })
        ));
    }
}
