//! Property suites over the dimensioning, reliability and economics
//! invariants. Every property asserted here is a mathematical guarantee
//! of the implementation (no statistical flakiness), so the suite is
//! stable under proptest's random exploration.

use std::collections::BTreeMap;

use proptest::prelude::*;

use backhaul_core::dimensioning::{
    available_cells, derated_fronthaul, fleet_feasibility, satellite_spectrum, sellable_links,
    AvailabilityTarget,
};
use backhaul_core::economics::{
    amortized_monthly, fleet_acquisition_cost, irr, learning_unit_cost, npv, per_subscriber_monthly,
    rollup, wholesale_income, CashFlowSeries,
};
use backhaul_core::money::Money;
use backhaul_core::reliability::{path_availability, simulate_availability, PathModel};
use backhaul_core::scenario::{
    CostItem, CostPhase, PlatformKind, PlatformSpec, ScenarioParams, SiteClass, WholesaleOffer,
};
use backhaul_core::units::{
    Area, Availability, ContentionRatio, DataRate, RedundancyFraction, SpectralEfficiency,
    SubscriberDensity,
};

fn availability(ppb: u64) -> Availability {
    Availability::from_ppb(ppb).unwrap()
}

// --- money -----------------------------------------------------------------

proptest! {
    #[test]
    fn money_display_round_trip_loses_at_most_one_display_unit(cents in -10_000_000_000_000i64..10_000_000_000_000i64) {
        let money = Money::from_cents(cents);
        let reparsed = Money::parse_display(&money.to_string()).unwrap();
        let unit = if cents.unsigned_abs() >= 100_000_000 {
            10_000_000
        } else if cents.unsigned_abs() >= 100_000 {
            10_000
        } else {
            10
        };
        prop_assert!((reparsed.cents() - cents).abs() <= unit);
    }
}

// --- dimensioning ----------------------------------------------------------

proptest! {
    #[test]
    fn spectrum_transponders_cover_the_required_bandwidth(
        demand_kbps in 0u64..2_000_000_000,
        efficiency_e4 in 1u32..1_000_000,
        transponder_mhz in 1u32..1_000,
    ) {
        let plan = satellite_spectrum(
            DataRate::from_kbps(demand_kbps),
            SpectralEfficiency::from_e4(efficiency_e4),
            transponder_mhz,
        );
        let covered = plan.transponder_count as u64 * transponder_mhz as u64 * 10;
        prop_assert!(covered >= plan.required_bandwidth.tenths());
        // Minimality: one transponder fewer would not cover.
        if plan.transponder_count > 0 {
            let short = (plan.transponder_count as u64 - 1) * transponder_mhz as u64 * 10;
            prop_assert!(short < plan.required_bandwidth.tenths());
        }
    }

    #[test]
    fn available_cells_never_exceed_the_layout(
        layout in 1u32..100_000,
        redundancy_e4 in 0u32..10_000,
    ) {
        let cells = available_cells(layout, RedundancyFraction::from_e4(redundancy_e4));
        prop_assert!(cells <= layout);
        if redundancy_e4 == 0 {
            prop_assert_eq!(cells, layout);
        }
    }

    #[test]
    fn derated_fronthaul_is_non_increasing_in_availability(
        first_ppb in 0u64..999_999_999,
        second_ppb in 0u64..999_999_999,
        anchors in prop::collection::btree_map(
            0u64..999_999_999,
            0u64..100_000_000u64,
            1..5,
        ),
    ) {
        // Build a platform whose derating table is the sorted anchor set
        // with capacities forced non-increasing.
        let mut capacities: Vec<u64> = anchors.values().copied().collect();
        capacities.sort_unstable_by(|a, b| b.cmp(a));
        let derating: BTreeMap<Availability, DataRate> = anchors
            .keys()
            .zip(capacities)
            .map(|(&ppb, kbps)| (availability(ppb), DataRate::from_kbps(kbps)))
            .collect();
        let platform = PlatformSpec {
            kind: PlatformKind::UnmannedSolarPlane,
            layout_cells: 1000,
            redundancy: RedundancyFraction::from_e4(0),
            covered_area: Area::from_km2(1000),
            per_cell_clear_air: DataRate::from_kbps(100_000),
            derating,
            gateway_capacity: None,
            development_cost: Money::ZERO,
            capex_per_unit: Money::ZERO,
            opex_per_unit_year: Money::ZERO,
        };
        let (low, high) = if first_ppb <= second_ppb {
            (first_ppb, second_ppb)
        } else {
            (second_ppb, first_ppb)
        };
        let low_rate = derated_fronthaul(&platform, AvailabilityTarget::At(availability(low)));
        let high_rate = derated_fronthaul(&platform, AvailabilityTarget::At(availability(high)));
        match (low_rate, high_rate) {
            (Ok(low_rate), Ok(high_rate)) => prop_assert!(low_rate >= high_rate),
            // Once the easier target is already out of range, the harder
            // one must be too.
            (Err(_), ok_or_err) => prop_assert!(ok_or_err.is_err()),
            (Ok(_), Err(_)) => {}
        }
    }

    #[test]
    fn fleet_size_is_minimal(
        service_km2 in 1u64..20_000,
        covered_km2 in 1u64..5_000,
        sites in 1u32..200,
        site_rate_mbps in 0u64..10,
        derated_mbps in 1u64..2_000,
    ) {
        let params = ScenarioParams {
            service_area: Area::from_km2(service_km2),
            penetration: SubscriberDensity::from_per_km2(10),
            site_count: sites,
            per_site_uplink: DataRate::from_mbps(site_rate_mbps),
            per_site_downlink: DataRate::from_mbps(site_rate_mbps),
            arpu_monthly: Money::from_cents(350),
            amortization_months: 60,
        };
        let anchor = availability(990_000_000);
        let mut derating = BTreeMap::new();
        derating.insert(anchor, DataRate::from_mbps(derated_mbps));
        let platform = PlatformSpec {
            kind: PlatformKind::UnmannedAirship,
            layout_cells: 100,
            redundancy: RedundancyFraction::from_e4(0),
            covered_area: Area::from_km2(covered_km2),
            per_cell_clear_air: DataRate::from_mbps(1_000_000),
            derating,
            gateway_capacity: None,
            development_cost: Money::ZERO,
            capex_per_unit: Money::ZERO,
            opex_per_unit_year: Money::ZERO,
        };
        let report = fleet_feasibility(&params, &platform, anchor).unwrap();
        let demand = params.total_demand().kbps();
        let satisfies = |count: u64| {
            count * platform.covered_area.hundredths_km2() >= params.service_area.hundredths_km2()
                && count * derated_mbps * 1000 >= demand
        };
        prop_assert!(satisfies(report.platforms_required as u64));
        for count in 1..report.platforms_required {
            prop_assert!(!satisfies(count as u64));
        }
    }

    #[test]
    fn sellable_links_scale_linearly_in_cells(
        cells in 0u32..10_000,
        cell_rate_mbps in 1u64..1_000,
        contention_hundredths in 100u32..10_000,
        link_rate_mbps in 1u64..1_000,
    ) {
        let cell_rate = DataRate::from_mbps(cell_rate_mbps);
        let link_rate = DataRate::from_mbps(link_rate_mbps);
        let contention = ContentionRatio::from_hundredths(contention_hundredths);
        let single = sellable_links(cells, cell_rate, contention, link_rate);
        let double = sellable_links(cells * 2, cell_rate, contention, link_rate);
        prop_assert!(double >= 2 * single);
        prop_assert!(double <= 2 * single + 1);
    }
}

// --- reliability -----------------------------------------------------------

fn path_model_strategy() -> impl Strategy<Value = PathModel> {
    let leaf = (0u64..=999_999_999).prop_map(|ppb| PathModel::leaf("link", availability(ppb)));
    leaf.prop_recursive(3, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..4).prop_map(PathModel::series),
            prop::collection::vec(inner, 1..4).prop_map(PathModel::parallel),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn series_bounded_by_min_and_parallel_by_max(model in path_model_strategy()) {
        check_bounds(&model);
    }
}

fn check_bounds(model: &PathModel) {
    match model {
        PathModel::Leaf { .. } => {}
        PathModel::Series(children) => {
            let own = path_availability(model);
            let min = children.iter().map(path_availability).min().unwrap();
            assert!(own <= min, "series {own} above weakest child {min}");
            children.iter().for_each(check_bounds);
        }
        PathModel::Parallel(children) => {
            let own = path_availability(model);
            let max = children.iter().map(path_availability).max().unwrap();
            assert!(own >= max, "parallel {own} below strongest child {max}");
            children.iter().for_each(check_bounds);
        }
    }
}

proptest! {
    #[test]
    fn failover_never_trails_the_simple_offer(
        aerial in 0u64..999_999_999,
        mno in 0u64..999_999_999,
        operator in 0u64..999_999_999,
    ) {
        use backhaul_core::reliability::offer_delivered_availability;
        use backhaul_core::scenario::OfferTier;
        let mut components = BTreeMap::new();
        components.insert("aerial".to_string(), availability(aerial));
        components.insert("mno".to_string(), availability(mno));
        components.insert("operator".to_string(), availability(operator));
        let simple = offer_delivered_availability(OfferTier::AerialOnly, &components).unwrap();
        let failover = offer_delivered_availability(OfferTier::AerialWithFailover, &components).unwrap();
        prop_assert!(failover >= simple);
    }

    #[test]
    fn simulation_is_reproducible_for_any_model_and_seed(
        model in path_model_strategy(),
        seed in any::<u64>(),
    ) {
        let first = simulate_availability(&model, 512, seed);
        let second = simulate_availability(&model, 512, seed);
        prop_assert_eq!(first, second);
    }
}

// --- economics --------------------------------------------------------------

fn cost_item_strategy() -> impl Strategy<Value = CostItem> {
    (
        0i64..10_000_000,
        0u32..1_000,
        prop_oneof![Just(CostPhase::Capex), Just(CostPhase::OpexAnnual)],
        prop_oneof![
            Just(SiteClass::CellSite),
            Just(SiteClass::AggregationSite),
            Just(SiteClass::Platform),
            Just(SiteClass::BackboneFee),
            Just(SiteClass::SpaceSegmentLease),
        ],
    )
        .prop_map(|(cents, quantity, phase, site_class)| CostItem {
            label: "item".to_string(),
            phase,
            site_class,
            unit_cost: Money::from_cents(cents),
            quantity,
        })
}

proptest! {
    #[test]
    fn rollup_is_permutation_invariant_and_additive(
        items in prop::collection::vec(cost_item_strategy(), 0..20),
        split_at in 0usize..20,
    ) {
        let shuffled = {
            let mut reversed = items.clone();
            reversed.reverse();
            reversed
        };
        let forward = rollup(&items);
        let backward = rollup(&shuffled);
        prop_assert_eq!(forward.capex_total, backward.capex_total);
        prop_assert_eq!(forward.opex_annual_total, backward.opex_annual_total);
        prop_assert_eq!(&forward.by_site_class, &backward.by_site_class);

        let at = split_at.min(items.len());
        let (head, tail) = items.split_at(at);
        let head_rollup = rollup(head);
        let tail_rollup = rollup(tail);
        prop_assert_eq!(
            forward.capex_total,
            head_rollup.capex_total + tail_rollup.capex_total
        );
        prop_assert_eq!(
            forward.opex_annual_total,
            head_rollup.opex_annual_total + tail_rollup.opex_annual_total
        );
    }

    #[test]
    fn per_subscriber_cost_is_monotone(
        capex_cents in 0i64..10_000_000_000,
        opex_cents in 0i64..10_000_000_000,
        months in 1u32..240,
        subscribers in 1u64..1_000_000,
        extra_subscribers in 1u64..1_000_000,
        extra_cost_cents in 1i64..10_000_000_000,
    ) {
        let capex = Money::from_cents(capex_cents);
        let opex = Money::from_cents(opex_cents);
        let base = per_subscriber_monthly(capex, opex, months, subscribers).unwrap();

        // Weakly decreasing in subscribers at cent precision, strictly
        // whenever the exact change is at least one cent.
        let more_subs = per_subscriber_monthly(capex, opex, months, subscribers + extra_subscribers).unwrap();
        prop_assert!(more_subs <= base);
        let monthly = (amortized_monthly(capex, months) + opex.div_round(12)).cents() as i128;
        let exact_gap = monthly * extra_subscribers as i128 * 100;
        let grid = (subscribers + extra_subscribers) as i128 * subscribers as i128;
        if exact_gap >= 2 * grid {
            prop_assert!(more_subs < base);
        }

        // Weakly increasing in capex and opex, strictly when visible.
        let more_capex = per_subscriber_monthly(capex + Money::from_cents(extra_cost_cents), opex, months, subscribers).unwrap();
        prop_assert!(more_capex >= base);
        let more_opex = per_subscriber_monthly(capex, opex + Money::from_cents(extra_cost_cents), months, subscribers).unwrap();
        prop_assert!(more_opex >= base);
        if extra_cost_cents as i128 >= 2 * months as i128 * subscribers as i128 {
            prop_assert!(more_capex > base);
        }
    }

    #[test]
    fn npv_at_zero_rate_is_the_exact_sum(
        amounts in prop::collection::vec(-1_000_000_000i64..1_000_000_000, 1..12),
    ) {
        let money: Vec<Money> = amounts.iter().map(|&c| Money::from_cents(c)).collect();
        let flows = CashFlowSeries::from_amounts(&money).unwrap();
        let exact: Money = money.iter().copied().sum();
        prop_assert_eq!(npv(&flows, 0.0).unwrap(), exact);
    }

    #[test]
    fn npv_at_the_irr_rounds_to_zero(
        outflow_eur in 1i64..1_000_000,
        inflows in prop::collection::vec(1u32..1_000, 1..8),
    ) {
        // One initial outflow, then positive inflows scaled so their sum
        // lies within [1.01, 5] times the outflow: a single sign change
        // with the unique root inside (-0.99, 10).
        let inflow_total: u64 = inflows.iter().map(|&w| w as u64).sum();
        let target_total = outflow_eur as f64 * 2.5;
        let mut amounts = vec![Money::from_eur(-outflow_eur)];
        for &weight in &inflows {
            let share = weight as f64 / inflow_total as f64 * target_total;
            amounts.push(Money::from_cents((share * 100.0).round() as i64 + 1));
        }
        let flows = CashFlowSeries::from_amounts(&amounts).unwrap();
        let outcome = irr(&flows).unwrap();
        prop_assert!(!outcome.multiple_roots);
        prop_assert!(outcome.rate > -0.99 && outcome.rate < 10.0);
        prop_assert_eq!(npv(&flows, outcome.rate).unwrap(), Money::ZERO);
    }

    #[test]
    fn learning_curve_doubling_ratio_is_the_learning_rate(
        first_unit_cents in 1i64..100_000_000_000,
        unit in 1u64..100_000,
        rate_percent in 50u32..=100,
    ) {
        let rate = rate_percent as f64 / 100.0;
        let first_unit = Money::from_cents(first_unit_cents);
        let at_n = learning_unit_cost(first_unit, unit, rate);
        let at_2n = learning_unit_cost(first_unit, unit * 2, rate);
        let expected = (at_n.cents() as f64 * rate).round() as i64;
        prop_assert!(
            (at_2n.cents() - expected).abs() <= 1,
            "cost({}) = {}, rate × cost({}) = {}",
            unit * 2,
            at_2n.cents(),
            unit,
            expected
        );
    }

    #[test]
    fn fleet_cost_is_cumulative(
        first_unit_cents in 1i64..10_000_000_000,
        count in 1u32..20,
        rate_percent in 50u32..=100,
    ) {
        let rate = rate_percent as f64 / 100.0;
        let first_unit = Money::from_cents(first_unit_cents);
        let fleet = fleet_acquisition_cost(first_unit, count, rate);
        let explicit: Money = (1..=count as u64)
            .map(|i| learning_unit_cost(first_unit, i, rate))
            .sum();
        prop_assert_eq!(fleet, explicit);
        prop_assert!(fleet >= learning_unit_cost(first_unit, count as u64, rate).scale(count));
    }

    #[test]
    fn wholesale_income_is_linear_in_demand(
        counts_a in prop::collection::vec(0u64..1_000, 3),
        counts_b in prop::collection::vec(0u64..1_000, 3),
        factor in 1u32..10,
    ) {
        let offers: Vec<WholesaleOffer> = backhaul_core::catalog::reference_offers();
        let ids: Vec<&str> = offers.iter().map(|o| o.id.as_str()).collect();
        let demand = |counts: &[u64]| -> BTreeMap<String, u64> {
            ids.iter().zip(counts).map(|(id, &n)| (id.to_string(), n)).collect()
        };
        let a = demand(&counts_a);
        let b = demand(&counts_b);
        let sum = demand(
            &counts_a
                .iter()
                .zip(&counts_b)
                .map(|(x, y)| x + y)
                .collect::<Vec<_>>(),
        );
        let scaled = demand(&counts_a.iter().map(|x| x * factor as u64).collect::<Vec<_>>());

        let income_a = wholesale_income(&a, &offers).unwrap();
        let income_b = wholesale_income(&b, &offers).unwrap();
        prop_assert_eq!(wholesale_income(&sum, &offers).unwrap(), income_a + income_b);
        prop_assert_eq!(wholesale_income(&scaled, &offers).unwrap(), income_a.scale(factor));
    }
}
