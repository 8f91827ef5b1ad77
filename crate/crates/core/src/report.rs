//! Report assembly and emission: architecture comparison, the report
//! envelope, and rendering of every command's result as a human table,
//! a structured JSON document or flat CSV.
//!
//! Machine formats carry both the display value at table precision and
//! the exact cent/kb figure. Output is byte-deterministic: identical
//! scenario bytes produce identical report bytes.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::economics::{assess, AssessmentReport, ForecastRow};
use crate::error::{Error, Result};
use crate::money::Money;
use crate::reliability::{
    downtime_per_year, offer_delivered_availability, path_availability, simulate_availability,
    SimulationResult,
};
use crate::scenario::{OfferTier, Scenario};
use crate::units::{Availability, DataRate, DowntimeHours};

/// Identification block carried by every report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportEnvelope {
    pub tool_version: String,
    pub command: String,
    /// Content hash of the canonicalized scenario.
    pub scenario_digest: String,
}

impl ReportEnvelope {
    pub fn new(command: &str, scenario: &Scenario) -> ReportEnvelope {
        ReportEnvelope {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            scenario_digest: scenario.digest(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Structured,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(text: &str) -> Result<OutputFormat> {
        match text {
            "table" => Ok(OutputFormat::Table),
            "structured" => Ok(OutputFormat::Structured),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::validation(
                "format",
                format!("unknown format '{other}' (expected table, structured or csv)"),
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// Comparison
// ---------------------------------------------------------------------------

/// One architecture line of a comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub architecture_id: String,
    pub kind: Option<&'static str>,
    pub feasible: bool,
    pub capex_total: Option<Money>,
    pub opex_annual_total: Option<Money>,
    pub per_subscriber_monthly: Option<Money>,
    pub above_arpu: Option<bool>,
    pub notes: String,
}

/// Comparison of several architectures, one row each in request order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
    pub arpu_monthly: Money,
}

/// Assess every requested architecture; a failing row is reported in
/// place, not fatal.
pub fn compare(
    scenario: &Scenario,
    architecture_ids: &[String],
    horizon_years: Option<u32>,
    discount_rate: f64,
) -> ComparisonTable {
    let rows = architecture_ids
        .iter()
        .map(|id| match assess(scenario, id, horizon_years, discount_rate) {
            Ok(report) => {
                let mut notes = Vec::new();
                if let Some(used) = report.platforms_used {
                    if used > 1 {
                        notes.push(format!("{used} platforms"));
                    }
                }
                if report.above_arpu {
                    notes.push("above ARPU".to_string());
                }
                ComparisonRow {
                    architecture_id: id.clone(),
                    kind: Some(report.architecture_kind),
                    feasible: true,
                    capex_total: Some(report.costs.capex_total),
                    opex_annual_total: Some(report.costs.opex_annual_total),
                    per_subscriber_monthly: Some(report.per_subscriber_monthly),
                    above_arpu: Some(report.above_arpu),
                    notes: notes.join("; "),
                }
            }
            Err(err) => ComparisonRow {
                architecture_id: id.clone(),
                kind: None,
                feasible: false,
                capex_total: None,
                opex_annual_total: None,
                per_subscriber_monthly: None,
                above_arpu: None,
                notes: err.to_string(),
            },
        })
        .collect();
    ComparisonTable {
        rows,
        arpu_monthly: scenario.params.arpu_monthly,
    }
}

// ---------------------------------------------------------------------------
// Availability analysis
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct ModelAvailability {
    pub id: String,
    pub analytic: Availability,
    pub downtime_per_year: DowntimeHours,
    pub simulated: Option<SimulationResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TierAvailability {
    pub tier: OfferTier,
    pub delivered: Availability,
    pub downtime_per_year: DowntimeHours,
}

/// Availability of the scenario's path models and, when component
/// availabilities are declared, of the three offer tiers.
#[derive(Debug, Clone, PartialEq)]
pub struct AvailabilityReport {
    pub models: Vec<ModelAvailability>,
    pub tiers: Vec<TierAvailability>,
    pub trials: u64,
    pub seed: u64,
}

pub fn availability_report(
    scenario: &Scenario,
    model_id: Option<&str>,
    trials: u64,
    seed: u64,
) -> Result<AvailabilityReport> {
    if let Some(id) = model_id {
        if !scenario.path_models.contains_key(id) {
            return Err(Error::UnknownReference {
                kind: "path model",
                id: id.to_string(),
            });
        }
    }
    let models = scenario
        .path_models
        .iter()
        .filter(|(id, _)| model_id.is_none_or(|wanted| wanted == id.as_str()))
        .map(|(id, model)| {
            let analytic = path_availability(model);
            ModelAvailability {
                id: id.clone(),
                analytic,
                downtime_per_year: downtime_per_year(analytic),
                simulated: (trials > 0).then(|| simulate_availability(model, trials, seed)),
            }
        })
        .collect();

    let tiers = if scenario.components.is_empty() {
        Vec::new()
    } else {
        let mut tiers = Vec::new();
        for tier in [
            OfferTier::AerialOnly,
            OfferTier::AerialWithFailover,
            OfferTier::CompleteHighAvailability,
        ] {
            let delivered = offer_delivered_availability(tier, &scenario.components)?;
            tiers.push(TierAvailability {
                tier,
                delivered,
                downtime_per_year: downtime_per_year(delivered),
            });
        }
        tiers
    };

    Ok(AvailabilityReport {
        models,
        tiers,
        trials,
        seed,
    })
}

// ---------------------------------------------------------------------------
// Shared building blocks
// ---------------------------------------------------------------------------

fn money_json(money: Money) -> Value {
    json!({ "cents": money.cents(), "display": money.to_string() })
}

fn rate_json(rate: DataRate) -> Value {
    json!({ "kbps": rate.kbps(), "display": rate.to_string() })
}

fn yes_no(value: bool) -> &'static str {
    if value {
        "yes"
    } else {
        "no"
    }
}

/// Render rows as aligned columns with a two-space gutter.
fn aligned(rows: &[Vec<String>]) -> String {
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0usize; columns];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            line.push_str(cell);
            if i + 1 < row.len() {
                let pad = widths[i].saturating_sub(cell.chars().count()) + 2;
                line.extend(std::iter::repeat_n(' ', pad));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn header_lines(envelope: &ReportEnvelope, title: &str) -> String {
    let mut out = String::new();
    out.push_str(title);
    out.push('\n');
    out.extend(std::iter::repeat_n('=', title.chars().count()));
    out.push('\n');
    out.push_str(&aligned(&[
        vec!["tool version".to_string(), envelope.tool_version.clone()],
        vec!["command".to_string(), envelope.command.clone()],
        vec!["scenario digest".to_string(), envelope.scenario_digest.clone()],
    ]));
    out.push('\n');
    out
}

fn csv_string(records: Vec<Vec<String>>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for record in records {
        writer.write_record(&record).expect("csv record");
    }
    String::from_utf8(writer.into_inner().expect("csv buffer")).expect("csv utf8")
}

fn envelope_json(envelope: &ReportEnvelope, body: Value) -> String {
    let document = json!({
        "tool_version": envelope.tool_version,
        "command": envelope.command,
        "scenario_digest": envelope.scenario_digest,
        "body": body,
    });
    let mut text = serde_json::to_string_pretty(&document).expect("report serializes");
    text.push('\n');
    text
}

// ---------------------------------------------------------------------------
// Assessment rendering
// ---------------------------------------------------------------------------

pub fn render_assessment(
    envelope: &ReportEnvelope,
    scenario: &Scenario,
    report: &AssessmentReport,
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::Table => assessment_table(envelope, scenario, report),
        OutputFormat::Structured => envelope_json(envelope, assessment_json(scenario, report)),
        OutputFormat::Csv => assessment_csv(report),
    }
}

fn assessment_table(
    envelope: &ReportEnvelope,
    scenario: &Scenario,
    report: &AssessmentReport,
) -> String {
    let params = &scenario.params;
    let mut out = header_lines(
        envelope,
        &format!(
            "architecture assessment: {} ({})",
            report.architecture_id, report.architecture_kind
        ),
    );

    out.push_str("scenario\n");
    out.push_str(&indent(&aligned(&[
        vec!["service area".into(), params.service_area.to_string()],
        vec!["subscriber density".into(), params.penetration.to_string()],
        vec!["subscribers".into(), report.subscribers.to_string()],
        vec!["sites to interconnect".into(), params.site_count.to_string()],
        vec!["per-site uplink".into(), params.per_site_uplink.to_string()],
        vec!["per-site downlink".into(), params.per_site_downlink.to_string()],
        vec!["total backhaul demand".into(), report.total_demand.to_string()],
        vec!["arpu (monthly)".into(), params.arpu_monthly.to_string()],
        vec![
            "amortization".into(),
            format!("{} months", params.amortization_months),
        ],
    ])));

    if let Some(spectrum) = &report.spectrum {
        out.push('\n');
        out.push_str("spectrum\n");
        out.push_str(&indent(&aligned(&[
            vec![
                "committed link availability".into(),
                report.committed_availability.to_string(),
            ],
            vec![
                "required bandwidth".into(),
                spectrum.required_bandwidth.to_string(),
            ],
            vec![
                "transponders".into(),
                format!(
                    "{} × {} MHz",
                    spectrum.transponder_count, spectrum.transponder_bandwidth_mhz
                ),
            ],
        ])));
    }

    if let Some(platform) = &report.platform {
        out.push('\n');
        out.push_str("platform\n");
        let mut rows = vec![
            vec![
                "platform".into(),
                format!("{} ({})", platform.id, platform.kind),
            ],
            vec![
                "cell layout".into(),
                format!("{} cells", platform.layout_cells),
            ],
            vec!["available cells".into(), platform.available_cells.to_string()],
            vec!["covered area".into(), platform.covered_area.to_string()],
            vec![
                "clear-air fronthaul".into(),
                platform.clear_air_fronthaul.to_string(),
            ],
            vec![
                format!("fronthaul at {}", report.committed_availability),
                platform.derated_fronthaul.to_string(),
            ],
            vec![
                "gateway capacity".into(),
                platform
                    .gateway_capacity
                    .map(|g| g.to_string())
                    .unwrap_or_else(|| "unknown".to_string()),
            ],
            vec![
                "throughput density".into(),
                format!("{} (clear air, 4:1 contention)", platform.throughput_density),
            ],
        ];
        if let Some(used) = report.platforms_used {
            rows.push(vec!["platforms used".into(), used.to_string()]);
        }
        out.push_str(&indent(&aligned(&rows)));
    }

    if let Some(feasibility) = &report.feasibility {
        out.push('\n');
        out.push_str("feasibility\n");
        out.push_str(&indent(&aligned(&[
            vec![
                "coverage (single platform)".into(),
                yes_no(feasibility.coverage_ok).into(),
            ],
            vec![
                "fronthaul (single platform)".into(),
                yes_no(feasibility.fronthaul_ok).into(),
            ],
            vec![
                "gateway".into(),
                feasibility
                    .gateway_ok
                    .map(|ok| yes_no(ok).to_string())
                    .unwrap_or_else(|| "unknown".to_string()),
            ],
            vec![
                "platforms required".into(),
                feasibility.platforms_required.to_string(),
            ],
            vec![
                "binding constraint".into(),
                feasibility.binding_constraint.as_str().into(),
            ],
        ])));
    }

    out.push('\n');
    out.push_str("costs\n");
    let mut cost_rows = vec![vec![
        "site class".to_string(),
        "capex".to_string(),
        "opex / year".to_string(),
    ]];
    for (class, totals) in &report.costs.by_site_class {
        cost_rows.push(vec![
            class.as_str().to_string(),
            totals.capex.to_string(),
            totals.opex_annual.to_string(),
        ]);
    }
    cost_rows.push(vec![
        "total".to_string(),
        report.costs.capex_total.to_string(),
        report.costs.opex_annual_total.to_string(),
    ]);
    out.push_str(&indent(&aligned(&cost_rows)));

    out.push('\n');
    out.push_str("economics\n");
    out.push_str(&indent(&aligned(&[
        vec![
            "per-subscriber cost (monthly)".into(),
            report.per_subscriber_monthly.to_string(),
        ],
        vec!["arpu (monthly)".into(), report.arpu_monthly.to_string()],
        vec![
            "cost vs arpu".into(),
            if report.above_arpu { "above".into() } else { "at or below".into() },
        ],
    ])));

    if let Some(rows) = &report.forecast {
        out.push('\n');
        out.push_str("wholesale forecast\n");
        if let Some(sellable) = report.sellable_links {
            out.push_str(&indent(&aligned(&[vec![
                "sellable links".into(),
                sellable.to_string(),
            ]])));
        }
        out.push_str(&indent(&forecast_rows_table(rows)));
        let mut operator_rows = Vec::new();
        if let Some(npv) = report.operator_npv {
            operator_rows.push(vec![
                format!("operator npv (r = {})", report.discount_rate),
                npv.to_string(),
            ]);
        }
        match report.operator_irr {
            Some(rate) => operator_rows.push(vec![
                "operator irr".into(),
                format!("{:.2}%", rate * 100.0),
            ]),
            None => operator_rows.push(vec!["operator irr".into(), "undefined".into()]),
        }
        out.push_str(&indent(&aligned(&operator_rows)));
    }

    if !report.notes.is_empty() {
        out.push('\n');
        out.push_str("notes\n");
        for note in &report.notes {
            out.push_str(&format!("  - {note}\n"));
        }
    }

    out
}

fn forecast_rows_table(rows: &[ForecastRow]) -> String {
    let offer_ids: Vec<&String> = rows
        .first()
        .map(|row| row.links_by_offer.keys().collect())
        .unwrap_or_default();
    let mut table = Vec::with_capacity(rows.len() + 1);
    let mut header = vec!["year".to_string()];
    header.extend(offer_ids.iter().map(|id| id.to_string()));
    header.extend([
        "total".to_string(),
        "capacity %".to_string(),
        "income / year".to_string(),
    ]);
    table.push(header);
    for row in rows {
        let mut line = vec![row.year.to_string()];
        for id in &offer_ids {
            line.push(
                row.links_by_offer
                    .get(*id)
                    .map(|n| n.to_string())
                    .unwrap_or_else(|| "0".to_string()),
            );
        }
        line.extend([
            row.total_links.to_string(),
            row.utilization.to_string(),
            row.income_annual.to_string(),
        ]);
        table.push(line);
    }
    aligned(&table)
}

fn assessment_json(scenario: &Scenario, report: &AssessmentReport) -> Value {
    let params = &scenario.params;
    let mut body = serde_json::Map::new();
    body.insert(
        "architecture".to_string(),
        json!({ "id": report.architecture_id, "kind": report.architecture_kind }),
    );
    body.insert(
        "scenario".to_string(),
        json!({
            "service_area_km2_hundredths": params.service_area.hundredths_km2(),
            "service_area_display": params.service_area.to_string(),
            "site_count": params.site_count,
            "subscribers": report.subscribers,
            "total_demand": rate_json(report.total_demand),
            "arpu_monthly": money_json(params.arpu_monthly),
            "amortization_months": params.amortization_months,
        }),
    );
    body.insert(
        "committed_availability".to_string(),
        json!(report.committed_availability.to_string()),
    );
    if let Some(spectrum) = &report.spectrum {
        body.insert(
            "spectrum".to_string(),
            json!({
                "required_bandwidth_mhz_tenths": spectrum.required_bandwidth.tenths(),
                "required_bandwidth_display": spectrum.required_bandwidth.to_string(),
                "transponder_count": spectrum.transponder_count,
                "transponder_bandwidth_mhz": spectrum.transponder_bandwidth_mhz,
            }),
        );
    }
    if let Some(platform) = &report.platform {
        body.insert(
            "platform".to_string(),
            json!({
                "id": platform.id,
                "kind": platform.kind,
                "layout_cells": platform.layout_cells,
                "available_cells": platform.available_cells,
                "covered_area_display": platform.covered_area.to_string(),
                "clear_air_fronthaul": rate_json(platform.clear_air_fronthaul),
                "derated_fronthaul": rate_json(platform.derated_fronthaul),
                "gateway_capacity": platform.gateway_capacity.map(rate_json),
                "throughput_density_hundredths": platform.throughput_density.hundredths(),
                "throughput_density_display": platform.throughput_density.to_string(),
            }),
        );
    }
    if let Some(feasibility) = &report.feasibility {
        body.insert(
            "feasibility".to_string(),
            json!({
                "coverage_ok": feasibility.coverage_ok,
                "fronthaul_ok": feasibility.fronthaul_ok,
                "gateway_ok": feasibility.gateway_ok,
                "platforms_required": feasibility.platforms_required,
                "binding_constraint": feasibility.binding_constraint.as_str(),
            }),
        );
    }
    if let Some(used) = report.platforms_used {
        body.insert("platforms_used".to_string(), json!(used));
    }
    let by_class: BTreeMap<String, Value> = report
        .costs
        .by_site_class
        .iter()
        .map(|(class, totals)| {
            (
                class.as_str().to_string(),
                json!({
                    "capex": money_json(totals.capex),
                    "opex_annual": money_json(totals.opex_annual),
                }),
            )
        })
        .collect();
    body.insert(
        "costs".to_string(),
        json!({
            "capex_total": money_json(report.costs.capex_total),
            "opex_annual_total": money_json(report.costs.opex_annual_total),
            "by_site_class": by_class,
            "items": report.costs.items.iter().map(|item| json!({
                "label": item.label,
                "phase": item.phase.as_str(),
                "site_class": item.site_class.as_str(),
                "unit_cost": money_json(item.unit_cost),
                "quantity": item.quantity,
                "extended_cost": money_json(item.extended_cost()),
            })).collect::<Vec<_>>(),
        }),
    );
    body.insert(
        "per_subscriber_monthly".to_string(),
        money_json(report.per_subscriber_monthly),
    );
    body.insert("arpu_monthly".to_string(), money_json(report.arpu_monthly));
    body.insert("above_arpu".to_string(), json!(report.above_arpu));
    if let Some(sellable) = report.sellable_links {
        body.insert("sellable_links".to_string(), json!(sellable));
    }
    if let Some(rows) = &report.forecast {
        body.insert(
            "forecast".to_string(),
            Value::Array(rows.iter().map(forecast_row_json).collect()),
        );
    }
    if report.operator_npv.is_some() || report.operator_flows.is_some() {
        body.insert(
            "operator".to_string(),
            json!({
                "npv": report.operator_npv.map(money_json),
                "irr": report.operator_irr,
                "discount_rate": report.discount_rate,
                "flows": report.operator_flows.as_ref().map(|flows| {
                    flows.flows().iter().map(|flow| json!({
                        "period": flow.period,
                        "amount": money_json(flow.amount),
                    })).collect::<Vec<_>>()
                }),
            }),
        );
    }
    body.insert("horizon_years".to_string(), json!(report.horizon_years));
    body.insert("notes".to_string(), json!(report.notes));
    Value::Object(body)
}

fn forecast_row_json(row: &ForecastRow) -> Value {
    json!({
        "year": row.year,
        "links_by_offer": row.links_by_offer,
        "total_links": row.total_links,
        "utilization_percent_tenths": row.utilization.tenths(),
        "utilization_display": row.utilization.to_string(),
        "income_annual": money_json(row.income_annual),
    })
}

fn assessment_csv(report: &AssessmentReport) -> String {
    let mut records = vec![vec![
        "metric".to_string(),
        "display".to_string(),
        "exact".to_string(),
    ]];
    let mut push = |metric: &str, display: String, exact: String| {
        records.push(vec![metric.to_string(), display, exact]);
    };
    push("architecture", report.architecture_id.clone(), String::new());
    push("kind", report.architecture_kind.to_string(), String::new());
    push(
        "subscribers",
        report.subscribers.to_string(),
        report.subscribers.to_string(),
    );
    push(
        "total_demand",
        report.total_demand.to_string(),
        report.total_demand.kbps().to_string(),
    );
    push(
        "committed_availability",
        report.committed_availability.to_string(),
        report.committed_availability.ppb().to_string(),
    );
    if let Some(spectrum) = &report.spectrum {
        push(
            "required_bandwidth",
            spectrum.required_bandwidth.to_string(),
            spectrum.required_bandwidth.tenths().to_string(),
        );
        push(
            "transponder_count",
            spectrum.transponder_count.to_string(),
            spectrum.transponder_count.to_string(),
        );
    }
    if let Some(platform) = &report.platform {
        push(
            "available_cells",
            platform.available_cells.to_string(),
            platform.available_cells.to_string(),
        );
        push(
            "clear_air_fronthaul",
            platform.clear_air_fronthaul.to_string(),
            platform.clear_air_fronthaul.kbps().to_string(),
        );
        push(
            "derated_fronthaul",
            platform.derated_fronthaul.to_string(),
            platform.derated_fronthaul.kbps().to_string(),
        );
        push(
            "throughput_density",
            platform.throughput_density.to_string(),
            platform.throughput_density.hundredths().to_string(),
        );
    }
    if let Some(feasibility) = &report.feasibility {
        push(
            "platforms_required",
            feasibility.platforms_required.to_string(),
            feasibility.platforms_required.to_string(),
        );
        push(
            "binding_constraint",
            feasibility.binding_constraint.as_str().to_string(),
            String::new(),
        );
    }
    if let Some(used) = report.platforms_used {
        push("platforms_used", used.to_string(), used.to_string());
    }
    push(
        "capex_total",
        report.costs.capex_total.to_string(),
        report.costs.capex_total.cents().to_string(),
    );
    push(
        "opex_annual_total",
        report.costs.opex_annual_total.to_string(),
        report.costs.opex_annual_total.cents().to_string(),
    );
    push(
        "per_subscriber_monthly",
        report.per_subscriber_monthly.to_string(),
        report.per_subscriber_monthly.cents().to_string(),
    );
    push(
        "arpu_monthly",
        report.arpu_monthly.to_string(),
        report.arpu_monthly.cents().to_string(),
    );
    push("above_arpu", yes_no(report.above_arpu).to_string(), String::new());
    if let Some(sellable) = report.sellable_links {
        push("sellable_links", sellable.to_string(), sellable.to_string());
    }
    if let Some(npv) = report.operator_npv {
        push("operator_npv", npv.to_string(), npv.cents().to_string());
    }
    if let Some(rate) = report.operator_irr {
        push("operator_irr", format!("{:.2}%", rate * 100.0), rate.to_string());
    }
    csv_string(records)
}

// ---------------------------------------------------------------------------
// Comparison rendering
// ---------------------------------------------------------------------------

pub fn render_comparison(
    envelope: &ReportEnvelope,
    table: &ComparisonTable,
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::Table => {
            let mut out = header_lines(envelope, "architecture comparison");
            let mut rows = vec![vec![
                "architecture".to_string(),
                "kind".to_string(),
                "feasible".to_string(),
                "capex".to_string(),
                "opex / year".to_string(),
                "€ / subscriber / month".to_string(),
                "notes".to_string(),
            ]];
            for row in &table.rows {
                rows.push(vec![
                    row.architecture_id.clone(),
                    row.kind.unwrap_or("-").to_string(),
                    yes_no(row.feasible).to_string(),
                    option_display(row.capex_total),
                    option_display(row.opex_annual_total),
                    option_display(row.per_subscriber_monthly),
                    row.notes.clone(),
                ]);
            }
            out.push_str(&aligned(&rows));
            out.push('\n');
            out.push_str(&format!("arpu (monthly): {}\n", table.arpu_monthly));
            out
        }
        OutputFormat::Structured => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "architecture": row.architecture_id,
                        "kind": row.kind,
                        "feasible": row.feasible,
                        "capex_total": row.capex_total.map(money_json),
                        "opex_annual_total": row.opex_annual_total.map(money_json),
                        "per_subscriber_monthly": row.per_subscriber_monthly.map(money_json),
                        "above_arpu": row.above_arpu,
                        "notes": row.notes,
                    })
                })
                .collect();
            envelope_json(
                envelope,
                json!({ "rows": rows, "arpu_monthly": money_json(table.arpu_monthly) }),
            )
        }
        OutputFormat::Csv => {
            let mut records = vec![vec![
                "architecture".to_string(),
                "kind".to_string(),
                "feasible".to_string(),
                "capex_display".to_string(),
                "capex_cents".to_string(),
                "opex_display".to_string(),
                "opex_cents".to_string(),
                "per_subscriber_display".to_string(),
                "per_subscriber_cents".to_string(),
                "above_arpu".to_string(),
                "notes".to_string(),
            ]];
            for row in &table.rows {
                records.push(vec![
                    row.architecture_id.clone(),
                    row.kind.unwrap_or("").to_string(),
                    yes_no(row.feasible).to_string(),
                    option_display(row.capex_total),
                    option_cents(row.capex_total),
                    option_display(row.opex_annual_total),
                    option_cents(row.opex_annual_total),
                    option_display(row.per_subscriber_monthly),
                    option_cents(row.per_subscriber_monthly),
                    row.above_arpu.map(yes_no).unwrap_or("").to_string(),
                    row.notes.clone(),
                ]);
            }
            csv_string(records)
        }
    }
}

fn option_display(money: Option<Money>) -> String {
    money.map(|m| m.to_string()).unwrap_or_else(|| "-".to_string())
}

fn option_cents(money: Option<Money>) -> String {
    money.map(|m| m.cents().to_string()).unwrap_or_default()
}

// ---------------------------------------------------------------------------
// Forecast rendering
// ---------------------------------------------------------------------------

pub fn render_forecast(
    envelope: &ReportEnvelope,
    architecture_id: &str,
    sellable_links: u64,
    rows: &[ForecastRow],
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::Table => {
            let mut out = header_lines(
                envelope,
                &format!("wholesale demand and income forecast: {architecture_id}"),
            );
            out.push_str(&aligned(&[vec![
                "sellable links".to_string(),
                sellable_links.to_string(),
            ]]));
            out.push('\n');
            out.push_str(&forecast_rows_table(rows));
            out
        }
        OutputFormat::Structured => envelope_json(
            envelope,
            json!({
                "architecture": architecture_id,
                "sellable_links": sellable_links,
                "rows": rows.iter().map(forecast_row_json).collect::<Vec<_>>(),
            }),
        ),
        OutputFormat::Csv => {
            let offer_ids: Vec<String> = rows
                .first()
                .map(|row| row.links_by_offer.keys().cloned().collect())
                .unwrap_or_default();
            let mut header = vec!["year".to_string()];
            header.extend(offer_ids.iter().map(|id| format!("links_{id}")));
            header.extend([
                "total_links".to_string(),
                "utilization_percent".to_string(),
                "income_display".to_string(),
                "income_cents".to_string(),
            ]);
            let mut records = vec![header];
            for row in rows {
                let mut record = vec![row.year.to_string()];
                for id in &offer_ids {
                    record.push(
                        row.links_by_offer
                            .get(id)
                            .copied()
                            .unwrap_or(0)
                            .to_string(),
                    );
                }
                record.extend([
                    row.total_links.to_string(),
                    row.utilization.to_string(),
                    row.income_annual.to_string(),
                    row.income_annual.cents().to_string(),
                ]);
                records.push(record);
            }
            csv_string(records)
        }
    }
}

// ---------------------------------------------------------------------------
// Availability rendering
// ---------------------------------------------------------------------------

pub fn render_availability(
    envelope: &ReportEnvelope,
    report: &AvailabilityReport,
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::Table => {
            let mut out = header_lines(envelope, "availability analysis");
            if !report.models.is_empty() {
                out.push_str("path models\n");
                let mut rows = vec![vec![
                    "model".to_string(),
                    "analytic".to_string(),
                    "downtime / year".to_string(),
                    "simulated".to_string(),
                    "ci95 ±".to_string(),
                ]];
                for model in &report.models {
                    let (simulated, ci) = match &model.simulated {
                        Some(result) => (
                            format!(
                                "{} ({} trials, seed {})",
                                result.estimate, result.trials, report.seed
                            ),
                            format!("{:.6}", result.ci_half_width),
                        ),
                        None => ("-".to_string(), "-".to_string()),
                    };
                    rows.push(vec![
                        model.id.clone(),
                        model.analytic.to_string(),
                        model.downtime_per_year.to_string(),
                        simulated,
                        ci,
                    ]);
                }
                out.push_str(&indent(&aligned(&rows)));
            }
            if !report.tiers.is_empty() {
                out.push('\n');
                out.push_str("offer tiers\n");
                let mut rows = vec![vec![
                    "tier".to_string(),
                    "delivered availability".to_string(),
                    "downtime / year".to_string(),
                ]];
                for tier in &report.tiers {
                    rows.push(vec![
                        tier.tier.as_str().to_string(),
                        tier.delivered.to_string(),
                        tier.downtime_per_year.to_string(),
                    ]);
                }
                out.push_str(&indent(&aligned(&rows)));
            }
            out
        }
        OutputFormat::Structured => {
            let models: Vec<Value> = report
                .models
                .iter()
                .map(|model| {
                    json!({
                        "id": model.id,
                        "analytic": model.analytic.to_string(),
                        "analytic_ppb": model.analytic.ppb(),
                        "downtime_hours_per_year": model.downtime_per_year.to_string(),
                        "simulated": model.simulated.map(|result| json!({
                            "estimate": result.estimate.to_string(),
                            "estimate_ppb": result.estimate.ppb(),
                            "ci95_half_width": result.ci_half_width,
                            "trials": result.trials,
                            "up_trials": result.up_trials,
                        })),
                    })
                })
                .collect();
            let tiers: Vec<Value> = report
                .tiers
                .iter()
                .map(|tier| {
                    json!({
                        "tier": tier.tier.as_str(),
                        "delivered": tier.delivered.to_string(),
                        "delivered_ppb": tier.delivered.ppb(),
                        "downtime_hours_per_year": tier.downtime_per_year.to_string(),
                    })
                })
                .collect();
            envelope_json(
                envelope,
                json!({
                    "models": models,
                    "tiers": tiers,
                    "trials": report.trials,
                    "seed": report.seed,
                }),
            )
        }
        OutputFormat::Csv => {
            let mut records = vec![vec![
                "subject".to_string(),
                "id".to_string(),
                "availability".to_string(),
                "availability_ppb".to_string(),
                "downtime_hours_per_year".to_string(),
                "simulated_estimate".to_string(),
                "trials".to_string(),
            ]];
            for model in &report.models {
                records.push(vec![
                    "path_model".to_string(),
                    model.id.clone(),
                    model.analytic.to_string(),
                    model.analytic.ppb().to_string(),
                    model.downtime_per_year.to_string(),
                    model
                        .simulated
                        .map(|r| r.estimate.to_string())
                        .unwrap_or_default(),
                    model
                        .simulated
                        .map(|r| r.trials.to_string())
                        .unwrap_or_default(),
                ]);
            }
            for tier in &report.tiers {
                records.push(vec![
                    "offer_tier".to_string(),
                    tier.tier.as_str().to_string(),
                    tier.delivered.to_string(),
                    tier.delivered.ppb().to_string(),
                    tier.downtime_per_year.to_string(),
                    String::new(),
                    String::new(),
                ]);
            }
            csv_string(records)
        }
    }
}

fn indent(text: &str) -> String {
    text.lines()
        .map(|line| {
            if line.is_empty() {
                String::new()
            } else {
                format!("  {line}\n")
            }
        })
        .collect::<Vec<_>>()
        .join("")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{validate, ScenarioDocument};

    fn bundled_scenario() -> Scenario {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/default.toml");
        crate::scenario::load(std::path::Path::new(path)).expect("bundled scenario validates")
    }

    #[test]
    fn structured_output_is_byte_deterministic() {
        let scenario = bundled_scenario();
        let envelope = ReportEnvelope::new("assess", &scenario);
        let report = assess(&scenario, "integrated", None, 0.0).unwrap();
        let first = render_assessment(&envelope, &scenario, &report, OutputFormat::Structured);
        let second = render_assessment(&envelope, &scenario, &report, OutputFormat::Structured);
        assert_eq!(first, second);
        assert!(first.contains("\"scenario_digest\""));
    }

    #[test]
    fn human_and_machine_formats_agree_on_display_values() {
        let scenario = bundled_scenario();
        let envelope = ReportEnvelope::new("assess", &scenario);
        let report = assess(&scenario, "sat", None, 0.0).unwrap();
        let table = render_assessment(&envelope, &scenario, &report, OutputFormat::Table);
        let json = render_assessment(&envelope, &scenario, &report, OutputFormat::Structured);
        let csv = render_assessment(&envelope, &scenario, &report, OutputFormat::Csv);
        for output in [&table, &json, &csv] {
            assert!(output.contains("385.0 MHz"), "missing bandwidth in {output}");
            assert!(output.contains("11.3 M€"), "missing opex in {output}");
        }
        assert!(json.contains("\"cents\": 632000000"));
        assert!(csv.contains("632000000"));
    }

    #[test]
    fn comparison_reports_failing_rows_without_aborting() {
        let scenario = bundled_scenario();
        let table = compare(
            &scenario,
            &["hap-2a".to_string(), "hap-plane-999".to_string(), "nope".to_string()],
            None,
            0.0,
        );
        assert_eq!(table.rows.len(), 3);
        assert!(table.rows[0].feasible);
        assert!(!table.rows[1].feasible);
        assert!(table.rows[1].notes.contains("infeasible"));
        assert!(!table.rows[2].feasible);
        assert!(table.rows[2].notes.contains("unknown architecture"));
    }

    #[test]
    fn comparing_the_same_architecture_twice_gives_identical_rows() {
        let scenario = bundled_scenario();
        let table = compare(&scenario, &["sat".to_string(), "sat".to_string()], None, 0.0);
        assert_eq!(table.rows[0], {
            let mut row = table.rows[1].clone();
            row.architecture_id = "sat".to_string();
            row
        });
    }

    #[test]
    fn availability_report_covers_models_and_tiers() {
        let scenario = bundled_scenario();
        let report = availability_report(&scenario, None, 10_000, 42).unwrap();
        assert!(!report.models.is_empty());
        assert_eq!(report.tiers.len(), 3);
        // Failover dominates the simple link for identical components.
        let simple = report.tiers.iter().find(|t| t.tier == OfferTier::AerialOnly).unwrap();
        let failover = report
            .tiers
            .iter()
            .find(|t| t.tier == OfferTier::AerialWithFailover)
            .unwrap();
        assert!(failover.delivered >= simple.delivered);
    }

    #[test]
    fn unknown_path_model_is_reported() {
        let scenario = validate(&ScenarioDocument::default()).unwrap();
        assert!(matches!(
            availability_report(&scenario, Some("nope"), 0, 0),
            Err(Error::UnknownReference { .. })
        ));
    }
}
