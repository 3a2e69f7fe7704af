use std::path::Path;

use ubb_core::ecc::{calibrate_uniform_scenario, greedy_order, speedup_curve, DEFAULT_MAX_RTT_RATIO};
use ubb_core::service::{compression_gain, feasibility, movar_requirement, ServiceKind};
use ubb_core::throughput::{throughput_table, ubb_trap_headroom};
use ubb_core::topology::{access_shares, parse_order, sort_by_traffic};
use ubb_core::zipf::{hit_ratio, CachePolicy};
use ubb_core::{HarmonicTable, LossRatio, NodeEccConfig, NodeId, Seconds, ZipfCatalog};

use crate::error::{CliError, Result};
use crate::output::{CsvDoc, Precision};
use crate::scenario::{CacheSection, OrderSource, Scenario};

/// Rendered CSV plus diagnostics destined for standard error.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub csv: String,
    pub warnings: Vec<String>,
}

impl From<String> for Output {
    fn from(csv: String) -> Self {
        Self {
            csv,
            warnings: Vec::new(),
        }
    }
}

/// Measured LTE radio-link utilization for large TCP downlink flows, in percent.
pub const LTE_UTILIZATION_MEAN_PCT: f64 = 34.6;
pub const LTE_UTILIZATION_MEDIAN_PCT: f64 = 19.8;

pub const DEFAULT_RTT_GRID_MS: [f64; 20] = [
    0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0, 6.5, 7.0, 7.5, 8.0, 8.5, 9.0, 9.5, 10.0,
];
pub const DEFAULT_PLR_GRID_PCT: [f64; 13] = [
    0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.40, 0.50, 0.60, 0.70, 0.80, 0.90, 1.00,
];

pub struct TableArgs<'a> {
    pub rtt_ms: &'a [f64],
    pub plr_pct: &'a [f64],
    pub mss_bytes: f64,
    pub c: f64,
    pub decimals: usize,
}

/// Loss/latency bound over an RTT x PLR grid, Mbit/s by default.
pub fn throughput_table_csv(args: &TableArgs<'_>, precision: Precision) -> Result<Output> {
    let rtts: Vec<Seconds> = args.rtt_ms.iter().map(|&ms| Seconds::from_millis(ms)).collect();
    let plrs = args
        .plr_pct
        .iter()
        .map(|&p| LossRatio::from_percent(p))
        .collect::<ubb_core::Result<Vec<_>>>()?;
    let table = throughput_table(&rtts, &plrs, args.mss_bytes, args.c)?;

    let mut doc = CsvDoc::new("throughput-table", None);
    let mut header = vec![String::from("plr_pct")];
    header.extend(args.rtt_ms.iter().map(|ms| format!("{ms:?}")));
    doc.record(&header)?;
    for (pct, row) in args.plr_pct.iter().zip(&table) {
        let mut fields = vec![format!("{pct:?}")];
        fields.extend(row.iter().map(|r| match precision {
            Precision::Table => format!("{:.*}", args.decimals, r.mbps()),
            Precision::Full => format!("{}", r.bps()),
        }));
        doc.record(&fields)?;
    }
    doc.comment(&format!(
        "cells: loss/latency throughput bound in {}; mss={} bytes c={}; rows plr %, columns rtt ms",
        match precision {
            Precision::Table => "Mbit/s",
            Precision::Full => "bit/s",
        },
        args.mss_bytes,
        args.c
    ))?;
    Ok(doc.finish()?.into())
}

fn require<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Validation(format!("scenario is missing {what}")))
}

/// Uniform cache hit ratio from the scenario's `[cache]` section.
pub fn scenario_hit_ratio(cache: &CacheSection) -> Result<f64> {
    if let Some(hr) = cache.hit_ratio {
        if cache.items.is_some()
            || cache.alpha.is_some()
            || cache.stored_fraction.is_some()
            || cache.stored_items.is_some()
        {
            return Err(CliError::Validation(
                "[cache] takes either hit_ratio or a Zipf catalog, not both".into(),
            ));
        }
        if !(0.0..=1.0).contains(&hr) {
            return Err(CliError::Validation(format!("[cache] hit_ratio {hr} not in [0, 1]")));
        }
        return Ok(hr);
    }
    let catalog = ZipfCatalog::new(
        require(cache.items, "[cache] items")?,
        require(cache.alpha, "[cache] alpha")?,
    )?;
    let policy = match (cache.stored_fraction, cache.stored_items) {
        (Some(f), None) => CachePolicy::from_fraction(f, &catalog)?,
        (None, Some(k)) => CachePolicy::new(k, &catalog)?,
        _ => {
            return Err(CliError::Validation(
                "[cache] needs exactly one of stored_fraction or stored_items".into(),
            ))
        }
    };
    Ok(hit_ratio(&catalog, &policy))
}

/// Network speed-up as edge caches are rolled out along the placement order.
pub fn nsu_curve_csv(scenario: &Scenario, equipped_override: Option<usize>, precision: Precision) -> Result<Output> {
    let ecc_cfg = require(scenario.file.ecc.as_ref(), "an [ecc] section")?;
    let cache = require(scenario.file.cache.as_ref(), "a [cache] section")?;
    let traffic = access_shares(&scenario.topology, &scenario.traffic)?;
    let hr = scenario_hit_ratio(cache)?;

    let rtt_with = Seconds::from_millis(ecc_cfg.rtt_with_ms);
    let max_ratio = ecc_cfg.max_ratio.unwrap_or(DEFAULT_MAX_RTT_RATIO);
    let (rtt_without, calibrated) = match (ecc_cfg.rtt_without_ms, ecc_cfg.calibrate_target) {
        (Some(ms), None) => (Seconds::from_millis(ms), None),
        (None, Some(target)) => {
            if !ecc_cfg.nodes.is_empty() {
                return Err(CliError::Validation(
                    "calibrate_target sets every node alike; remove [[ecc.node]] overrides".into(),
                ));
            }
            let ratio = calibrate_uniform_scenario(target, hr, max_ratio)?;
            (Seconds::from_secs(rtt_with.secs() * ratio), Some((target, ratio)))
        }
        _ => {
            return Err(CliError::Validation(
                "[ecc] needs exactly one of rtt_without_ms or calibrate_target".into(),
            ))
        }
    };
    let loss = match (ecc_cfg.plr_without_pct, ecc_cfg.plr_with_pct) {
        (None, None) => None,
        (Some(a), Some(b)) => Some((LossRatio::from_percent(a)?, LossRatio::from_percent(b)?)),
        _ => {
            return Err(CliError::Validation(
                "[ecc] loss override needs both plr_without_pct and plr_with_pct".into(),
            ))
        }
    };

    let mut configs = Vec::with_capacity(traffic.len());
    for node in &traffic {
        let o = ecc_cfg.nodes.iter().find(|n| n.id == node.node_id.0);
        let mut cfg = NodeEccConfig::new(
            node.node_id,
            o.and_then(|o| o.rtt_without_ms)
                .map_or(rtt_without, Seconds::from_millis),
            o.and_then(|o| o.rtt_with_ms).map_or(rtt_with, Seconds::from_millis),
            o.and_then(|o| o.hit_ratio).unwrap_or(hr),
        )?;
        if let Some((without, with)) = loss {
            cfg = cfg.with_loss(without, with)?;
        }
        configs.push(cfg);
    }
    for n in &ecc_cfg.nodes {
        if n.id == 0 || n.id > traffic.len() {
            return Err(ubb_core::Error::UnknownNode(n.id).into());
        }
    }

    let greedy = greedy_order(&traffic, &configs)?;
    let order: Vec<NodeId> = match ecc_cfg.order {
        OrderSource::Traffic => sort_by_traffic(&traffic),
        OrderSource::Greedy => greedy.clone(),
        OrderSource::File => {
            let f = require(ecc_cfg.order_file.as_deref(), "[ecc] order_file")?;
            let f = scenario.resolve(f);
            let text = std::fs::read_to_string(&f)
                .map_err(|e| CliError::Io(format!("cannot read order file {}: {e}", f.display())))?;
            parse_order(&text, scenario.topology.n_access)?
        }
    };
    let curve = speedup_curve(&traffic, &configs, &order)?;

    let k_max = equipped_override.or(ecc_cfg.equipped).unwrap_or(order.len());
    if k_max > order.len() {
        return Err(CliError::Validation(format!(
            "equipped {k_max} exceeds {} access nodes",
            order.len()
        )));
    }

    let mut doc = CsvDoc::new("nsu-curve", Some(&scenario.hash));
    doc.record(["k", "node_id", "node_speedup", "network_speedup"])?;
    for &(k, nsu) in &curve.points[..=k_max] {
        let (id, su) = match k {
            0 => (String::new(), String::new()),
            _ => {
                let (id, su) = curve.steps[k - 1];
                (id.to_string(), precision.ratio(su))
            }
        };
        doc.record([k.to_string(), id, su, precision.ratio(nsu)])?;
    }
    doc.comment(&format!("endpoint_nsu={}", curve.points[k_max].1))?;
    doc.comment(&format!("full_deployment_nsu={}", curve.endpoint()))?;
    doc.comment(&format!("hit_ratio={hr}"))?;
    if let Some((target, ratio)) = calibrated {
        doc.comment(&format!("calibrated target_nsu={target} rtt_ratio={ratio}"))?;
    }
    doc.comment(&format!(
        "order={} greedy_order_differs={}",
        match ecc_cfg.order {
            OrderSource::Traffic => "traffic",
            OrderSource::Greedy => "greedy",
            OrderSource::File => "file",
        },
        order != greedy
    ))?;
    Ok(doc.finish()?.into())
}

/// Required rate versus access bit-rate for each scenario path.
pub fn trap_report_csv(scenario: &Scenario, threshold: Option<f64>, precision: Precision) -> Result<Output> {
    if scenario.paths.is_empty() {
        return Err(CliError::Validation("scenario defines no [[path]] entries".into()));
    }
    let threshold = threshold.unwrap_or(scenario.file.trap.threshold);
    let mut doc = CsvDoc::new("trap-report", Some(&scenario.hash));
    doc.record([
        "path".to_string(),
        precision.rate_column("access"),
        "flows".to_string(),
        precision.rate_column("required"),
        "headroom".to_string(),
        "trapped".to_string(),
        "waste_band".to_string(),
        "utilization".to_string(),
    ])?;
    for p in &scenario.paths {
        let flows = vec![p.metrics; p.flows];
        let a = ubb_trap_headroom(p.metrics.bit_rate(), &flows, threshold)?;
        doc.record([
            p.name.clone(),
            precision.rate(p.metrics.bit_rate()),
            p.flows.to_string(),
            precision.rate(a.required_rate),
            precision.ratio(a.headroom),
            a.trapped.to_string(),
            a.band.to_string(),
            precision.ratio(a.utilization()),
        ])?;
    }
    doc.comment(&format!("trap_threshold={threshold}"))?;
    doc.comment(&format!(
        "reference: measured LTE large-flow bandwidth utilization r_a={LTE_UTILIZATION_MEAN_PCT}% (mean) r_m={LTE_UTILIZATION_MEDIAN_PCT}% (median)"
    ))?;
    Ok(doc.finish()?.into())
}

/// Service x path feasibility matrix.
pub fn feasibility_csv(scenario: &Scenario, precision: Precision) -> Result<Output> {
    if scenario.paths.is_empty() {
        return Err(CliError::Validation("scenario defines no [[path]] entries".into()));
    }
    let mut warnings = Vec::new();
    let movar = movar_requirement(&scenario.movar)?;
    let factor = scenario.file.services.compression_factor;
    let services = scenario.services();

    let mut doc = CsvDoc::new("feasibility", Some(&scenario.hash));
    doc.record([
        "service".to_string(),
        "path".to_string(),
        precision.rate_column("required"),
        precision.rate_column("bound"),
        precision.rate_column("estimate"),
        "feasible".to_string(),
        "binding".to_string(),
        "rtt_needed_ms".to_string(),
        precision.rate_column("movar_gross"),
        precision.rate_column("movar_net_min"),
        precision.rate_column("movar_net_max"),
    ])?;
    let mut any_movar = false;
    for &service in &services {
        let mut service = service.clone();
        if let Some(f) = factor {
            if service.live {
                warnings.push(format!(
                    "{}: live stream, compression factor {f} not applied (compression delay)",
                    service.name
                ));
            } else {
                service.required_throughput = compression_gain(service.required_throughput, f)?;
            }
        }
        let is_movar = service.kind == ServiceKind::Movar;
        any_movar |= is_movar;
        for p in &scenario.paths {
            let f = feasibility(&service, &p.metrics)?;
            let movar_cols = if is_movar {
                [
                    precision.rate(movar.gross_rate),
                    precision.rate(movar.net_rate_min),
                    precision.rate(movar.net_rate_max),
                ]
            } else {
                Default::default()
            };
            let [g, lo, hi] = movar_cols;
            doc.record([
                service.name.clone(),
                p.name.clone(),
                precision.rate(service.required_throughput),
                precision.rate(f.estimate.mathis_term),
                precision.rate(f.estimate.throughput),
                f.feasible.to_string(),
                f.binding.to_string(),
                precision.millis(f.rtt_needed.millis()),
                g,
                lo,
                hi,
            ])?;
        }
    }
    if any_movar {
        if let Some(note) = movar.discrepancy_note() {
            doc.comment(&format!("movar_discrepancy: {note}"))?;
        }
    }
    Ok(Output {
        csv: doc.finish()?,
        warnings,
    })
}

/// Every catalog row as CSV.
pub fn catalog_csv(catalog: &[ubb_core::ServiceProfile], hash: Option<&str>) -> Result<Output> {
    let mut doc = CsvDoc::new("feasibility --catalog", hash);
    doc.record([
        "name",
        "kind",
        "throughput_mbps",
        "range_min_mbps",
        "range_max_mbps",
        "live",
        "max_rtt_ms",
        "max_time_of_use_min",
        "notes",
    ])?;
    for s in catalog {
        let (lo, hi) = s
            .throughput_range
            .map(|(lo, hi)| (lo.mbps().to_string(), hi.mbps().to_string()))
            .unwrap_or_default();
        doc.record([
            s.name.clone(),
            match s.kind {
                ServiceKind::Video => "video".into(),
                ServiceKind::Movar => "movar".into(),
            },
            format!("{:.1}", s.required_throughput.mbps()),
            lo,
            hi,
            s.live.to_string(),
            s.max_rtt.map(|r| r.millis().to_string()).unwrap_or_default(),
            s.max_time_of_use_min.map(|m| m.to_string()).unwrap_or_default(),
            s.notes.clone(),
        ])?;
    }
    Ok(doc.finish()?.into())
}

pub struct HitRatioArgs {
    pub alpha: f64,
    pub items: usize,
    pub step: f64,
    pub target: f64,
}

/// Hit ratio over a grid of stored fractions.
pub fn hit_ratio_csv(args: &HitRatioArgs, precision: Precision) -> Result<Output> {
    let catalog = ZipfCatalog::new(args.items, args.alpha)?;
    if !(args.step > 0.0 && args.step <= 1.0) {
        return Err(CliError::Validation(format!("step {} not in (0, 1]", args.step)));
    }
    let n_steps = (1.0 / args.step).round();
    if (n_steps * args.step - 1.0).abs() > 1e-9 {
        return Err(CliError::Validation(format!("step {} does not divide 1", args.step)));
    }
    let n_steps = n_steps as usize;
    let table = HarmonicTable::new(catalog);
    let min_k = table.min_items_for(args.target)?;

    let mut doc = CsvDoc::new("hit-ratio", None);
    doc.record(["stored_fraction", "stored_items", "hit_ratio", "reaches_target"])?;
    for i in 0..=n_steps {
        let fraction = i as f64 / n_steps as f64;
        let k = CachePolicy::from_fraction(fraction, &catalog)?.stored_items();
        let hr = table.hit_ratio(k);
        doc.record([
            format!("{fraction}"),
            k.to_string(),
            precision.ratio(hr),
            (hr >= args.target).to_string(),
        ])?;
    }
    doc.comment(&format!(
        "items={} alpha={} target={} min_fraction={} min_stored_items={min_k}",
        args.items,
        args.alpha,
        args.target,
        min_k as f64 / args.items as f64
    ))?;
    Ok(doc.finish()?.into())
}

pub fn load_scenario(path: Option<&Path>, command: &str) -> Result<Scenario> {
    let path = path.ok_or_else(|| CliError::Validation(format!("{command} requires --scenario <file>")))?;
    Scenario::load(path)
}
