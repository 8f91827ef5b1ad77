//! Availability algebra over series/parallel link compositions, downtime
//! conversion, per-offer delivered availability and a reproducible Monte
//! Carlo cross-check.
//!
//! Arithmetic is fixed point at nine fractional digits; every composition
//! step rounds half-up on that grid and the final result is reported at
//! six digits. Component failures are modeled as independent.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scenario::OfferTier;
use crate::units::{div_round_half_up, Availability, DowntimeHours};

/// Component labels expected by the offer-tier topologies.
pub const COMPONENT_AERIAL: &str = "aerial";
pub const COMPONENT_MNO_BACKHAUL: &str = "mno";
pub const COMPONENT_OPERATOR_BACKHAUL: &str = "operator";

const HOURS_PER_YEAR: u64 = 8760;

/// A series/parallel composition of links, each leaf carrying its own
/// long-run availability.
#[derive(Debug, Clone, PartialEq)]
pub enum PathModel {
    Leaf { label: String, availability: Availability },
    Series(Vec<PathModel>),
    Parallel(Vec<PathModel>),
}

impl PathModel {
    pub fn leaf(label: impl Into<String>, availability: Availability) -> PathModel {
        PathModel::Leaf {
            label: label.into(),
            availability,
        }
    }

    /// Series group; must hold at least one child.
    pub fn series(children: Vec<PathModel>) -> PathModel {
        debug_assert!(!children.is_empty());
        PathModel::Series(children)
    }

    /// Parallel group; must hold at least one child.
    pub fn parallel(children: Vec<PathModel>) -> PathModel {
        debug_assert!(!children.is_empty());
        PathModel::Parallel(children)
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            PathModel::Leaf { .. } => 1,
            PathModel::Series(children) | PathModel::Parallel(children) => {
                children.iter().map(PathModel::leaf_count).sum()
            }
        }
    }
}

/// End-to-end availability of a path model, at reporting precision
/// (six fractional digits): series multiply availabilities, parallel
/// branches multiply unavailabilities.
pub fn path_availability(model: &PathModel) -> Availability {
    Availability::from_ppb(availability_ppb(model))
        .expect("compositions of availabilities below 1 stay below 1")
        .round_to_micro()
}

/// Internal nine-digit evaluation. Parallel groups clamp the residual
/// unavailability at one part per billion so the result stays below 1.
fn availability_ppb(model: &PathModel) -> u64 {
    const SCALE: i128 = Availability::SCALE as i128;
    match model {
        PathModel::Leaf { availability, .. } => availability.ppb(),
        // Folds start at the exact identity 1.0; a group always holds at
        // least one child, so the result lands strictly below 1.
        PathModel::Series(children) => children.iter().fold(Availability::SCALE, |acc, child| {
            div_round_half_up(acc as i128 * availability_ppb(child) as i128, SCALE) as u64
        }),
        PathModel::Parallel(children) => {
            let residual = children.iter().fold(Availability::SCALE, |acc, child| {
                let child_unavailable = Availability::SCALE - availability_ppb(child);
                div_round_half_up(acc as i128 * child_unavailable as i128, SCALE) as u64
            });
            Availability::SCALE - residual.max(1)
        }
    }
}

/// Yearly downtime `(1 − a) × 8760 h`, rounded half-up to 0.01 h.
pub fn downtime_per_year(availability: Availability) -> DowntimeHours {
    let hundredths = div_round_half_up(
        availability.complement_ppb() as i128 * HOURS_PER_YEAR as i128 * 100,
        Availability::SCALE as i128,
    ) as u64;
    DowntimeHours::from_hundredths(hundredths)
}

/// Canonical link topology of a wholesale offer tier, over the named
/// component availabilities:
///
/// * `aerial_only` — aerial link in series with the buyer's backhaul;
/// * `aerial_with_failover` — aerial link in series with the buyer's
///   backhaul paralleled by the seller's own backhaul;
/// * `complete_high_availability` — aerial link in series with the
///   seller's backhaul.
pub fn offer_path_model(
    tier: OfferTier,
    components: &BTreeMap<String, Availability>,
) -> Result<PathModel> {
    let component = |label: &str| -> Result<PathModel> {
        components
            .get(label)
            .map(|&a| PathModel::leaf(label, a))
            .ok_or_else(|| Error::MissingParameter(format!("component availability '{label}'")))
    };
    Ok(match tier {
        OfferTier::AerialOnly => PathModel::series(vec![
            component(COMPONENT_AERIAL)?,
            component(COMPONENT_MNO_BACKHAUL)?,
        ]),
        OfferTier::AerialWithFailover => PathModel::series(vec![
            component(COMPONENT_AERIAL)?,
            PathModel::parallel(vec![
                component(COMPONENT_MNO_BACKHAUL)?,
                component(COMPONENT_OPERATOR_BACKHAUL)?,
            ]),
        ]),
        OfferTier::CompleteHighAvailability => PathModel::series(vec![
            component(COMPONENT_AERIAL)?,
            component(COMPONENT_OPERATOR_BACKHAUL)?,
        ]),
    })
}

/// Availability delivered by an offer tier over the given components.
pub fn offer_delivered_availability(
    tier: OfferTier,
    components: &BTreeMap<String, Availability>,
) -> Result<Availability> {
    Ok(path_availability(&offer_path_model(tier, components)?))
}

/// SplitMix64: the fixed pseudo-random generator of the simulation.
///
/// state' = state + 0x9E3779B97F4A7C15; output mixes the new state with
/// xor-shifts and the multipliers 0xBF58476D1CE4E5B9 / 0x94D049BB133111EB.
/// The algorithm is pinned so identical (model, trials, seed) inputs give
/// identical results on every platform and in every implementation.
#[derive(Debug, Clone)]
struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Outcome of a Monte Carlo availability estimation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationResult {
    /// Fraction of trials in which the path was up, on the nine-digit
    /// grid (capped at 0.999999999 when every trial succeeded).
    pub estimate: Availability,
    /// Half-width of the 95% normal-approximation confidence interval.
    pub ci_half_width: f64,
    pub trials: u64,
    pub up_trials: u64,
}

/// Estimate the path availability by simulation.
///
/// Each trial draws every leaf exactly once, depth-first in model order,
/// up with probability equal to its availability; groups do not
/// short-circuit, so the draw sequence depends only on (model shape,
/// trials, seed) and results are bit-reproducible.
pub fn simulate_availability(model: &PathModel, trials: u64, seed: u64) -> SimulationResult {
    assert!(trials >= 1, "at least one trial");
    let mut rng = SplitMix64::new(seed);
    let mut up_trials = 0u64;
    for _ in 0..trials {
        if trial_up(model, &mut rng) {
            up_trials += 1;
        }
    }
    let estimate_ppb = div_round_half_up(
        up_trials as i128 * Availability::SCALE as i128,
        trials as i128,
    ) as u64;
    let estimate = Availability::from_ppb(estimate_ppb.min(Availability::SCALE - 1))
        .expect("clamped estimate is below 1");
    let p = up_trials as f64 / trials as f64;
    let ci_half_width = 1.96 * (p * (1.0 - p) / trials as f64).sqrt();
    SimulationResult {
        estimate,
        ci_half_width,
        trials,
        up_trials,
    }
}

fn trial_up(model: &PathModel, rng: &mut SplitMix64) -> bool {
    match model {
        PathModel::Leaf { availability, .. } => {
            rng.next_u64() % Availability::SCALE < availability.ppb()
        }
        PathModel::Series(children) => {
            let mut up = true;
            for child in children {
                up &= trial_up(child, rng);
            }
            up
        }
        PathModel::Parallel(children) => {
            let mut up = false;
            for child in children {
                up |= trial_up(child, rng);
            }
            up
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(fraction: f64) -> Availability {
        Availability::from_fraction_f64(fraction, "test").unwrap()
    }

    #[test]
    fn series_multiplies_availabilities() {
        let model = PathModel::series(vec![PathModel::leaf("x", a(0.99)), PathModel::leaf("y", a(0.9996))]);
        assert_eq!(path_availability(&model), a(0.989604));
    }

    #[test]
    fn parallel_multiplies_unavailabilities() {
        let model = PathModel::parallel(vec![PathModel::leaf("x", a(0.99)), PathModel::leaf("y", a(0.99))]);
        assert_eq!(path_availability(&model), a(0.9999));
    }

    #[test]
    fn single_leaf_passes_through() {
        assert_eq!(path_availability(&PathModel::leaf("sat", a(0.9996))), a(0.9996));
    }

    #[test]
    fn deep_parallel_stays_below_one() {
        let leaves = (0..8).map(|i| PathModel::leaf(format!("l{i}"), a(0.9999))).collect();
        let model = PathModel::parallel(leaves);
        let result = path_availability(&model);
        assert!(result < Availability::MAX);
        assert!(result >= a(0.9999));
    }

    #[test]
    fn downtime_examples() {
        assert_eq!(downtime_per_year(a(0.9996)), DowntimeHours::from_hundredths(350));
        assert_eq!(downtime_per_year(a(0.99)), DowntimeHours::from_hundredths(8760));
        assert_eq!(downtime_per_year(a(0.9999)), DowntimeHours::from_hundredths(88));
    }

    #[test]
    fn offer_tiers_compose_the_documented_topologies() {
        let mut components = BTreeMap::new();
        components.insert(COMPONENT_AERIAL.to_string(), a(0.99));
        components.insert(COMPONENT_MNO_BACKHAUL.to_string(), a(0.999));
        components.insert(COMPONENT_OPERATOR_BACKHAUL.to_string(), a(0.999));

        let simple = offer_delivered_availability(OfferTier::AerialOnly, &components).unwrap();
        assert_eq!(simple, a(0.98901));

        let failover = offer_delivered_availability(OfferTier::AerialWithFailover, &components).unwrap();
        assert_eq!(failover, a(0.989999)); // 0.99 × (1 − 0.001²)

        assert!(failover >= simple);
    }

    #[test]
    fn missing_component_is_named() {
        let mut components = BTreeMap::new();
        components.insert(COMPONENT_AERIAL.to_string(), a(0.99));
        let err = offer_delivered_availability(OfferTier::AerialOnly, &components).unwrap_err();
        assert!(err.to_string().contains("mno"), "{err}");
    }

    #[test]
    fn simulation_is_reproducible_and_close_to_analytic() {
        let model = PathModel::parallel(vec![PathModel::leaf("x", a(0.99)), PathModel::leaf("y", a(0.99))]);
        let first = simulate_availability(&model, 100_000, 42);
        let second = simulate_availability(&model, 100_000, 42);
        assert_eq!(first, second);

        // Within 3 standard errors of the analytic 0.9999.
        let p = 0.9999f64;
        let standard_error = (p * (1.0 - p) / 100_000.0).sqrt();
        let delta = (first.estimate.fraction_f64() - p).abs();
        assert!(delta <= 3.0 * standard_error, "delta {delta}, se {standard_error}");
    }

    #[test]
    fn simulation_of_a_single_leaf_tracks_its_availability() {
        let model = PathModel::leaf("sat", a(0.99));
        let result = simulate_availability(&model, 100_000, 42);
        let standard_error = (0.99f64 * 0.01 / 100_000.0).sqrt();
        let delta = (result.estimate.fraction_f64() - 0.99).abs();
        assert!(delta <= 3.0 * standard_error, "delta {delta}, se {standard_error}");
    }

    #[test]
    fn series_is_bounded_by_its_weakest_leaf() {
        let model = PathModel::series(vec![
            PathModel::leaf("good", a(0.9999)),
            PathModel::leaf("bad", a(0.0001)),
        ]);
        let analytic = path_availability(&model);
        assert!(analytic <= a(0.0001));
        let result = simulate_availability(&model, 100_000, 7);
        assert!(result.estimate.fraction_f64() < 0.001);
    }

    #[test]
    fn different_seeds_draw_different_streams() {
        let model = PathModel::leaf("x", a(0.5));
        let one = simulate_availability(&model, 1000, 1);
        let two = simulate_availability(&model, 1000, 2);
        assert_ne!(one.up_trials, two.up_trials);
    }
}
