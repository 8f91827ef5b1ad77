//! Deterministic techno-economic dimensioning and assessment engine for
//! rural mobile backhaul.
//!
//! Given a declarative scenario file, the engine dimensions three
//! backhaul architectures — leased satellite capacity, directly operated
//! high-altitude platforms, and an integrated terrestrial-aerial-satellite
//! wholesale model — and computes feasibility, CAPEX/OPEX rollups,
//! per-subscriber cost against ARPU, link availability, and multi-year
//! wholesale income forecasts with NPV/IRR.

pub mod catalog;
pub mod dimensioning;
pub mod economics;
pub mod error;
pub mod money;
pub mod reliability;
pub mod report;
pub mod scenario;
pub mod units;

pub use error::{Error, Result};
pub use money::Money;
pub use scenario::Scenario;
pub use units::{Area, Availability, DataRate};
