//! Report files: CSV tables and JSON documents, each with a parser.
//!
//! A report may start with a timestamp. In CSV it is a first line
//! `# generated_at_unix=<secs>`; in JSON a top-level `generated_at_unix`
//! field. Passing `None` as the stamp omits it, which makes reports
//! byte-identical across runs with the same seed.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::channel::Symbol;
use crate::csit::SLOTS;
use crate::dof::DofEstimate;
use crate::error::ReportError;
use crate::scheme::SchemeId;
use crate::sim::SimulationTrace;

const STAMP_PREFIX: &str = "# generated_at_unix=";

pub fn now_stamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[derive(Serialize, Deserialize)]
struct Stamped<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generated_at_unix: Option<u64>,
    #[serde(flatten)]
    body: T,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(body: &T, stamp: Option<u64>) -> Result<String, ReportError> {
    let mut s = serde_json::to_string_pretty(&Stamped {
        generated_at_unix: stamp,
        body,
    })?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<(Option<u64>, T), ReportError> {
    let st: Stamped<T> = serde_json::from_str(s)?;
    Ok((st.generated_at_unix, st.body))
}

pub fn to_csv<T: Serialize>(rows: &[T], stamp: Option<u64>) -> Result<String, ReportError> {
    let mut out = String::new();
    if let Some(ts) = stamp {
        out.push_str(&format!("{STAMP_PREFIX}{ts}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| ReportError::Format(e.to_string()))?;
    out.push_str(&String::from_utf8(bytes).map_err(|e| ReportError::Format(e.to_string()))?);
    Ok(out)
}

pub fn from_csv<T: DeserializeOwned>(s: &str) -> Result<(Option<u64>, Vec<T>), ReportError> {
    let (stamp, body) = match s.strip_prefix(STAMP_PREFIX) {
        Some(rest) => {
            let (line, body) = rest.split_once('\n').unwrap_or((rest, ""));
            let ts = line
                .trim()
                .parse()
                .map_err(|_| ReportError::Format(format!("bad timestamp line `{line}`")))?;
            (Some(ts), body)
        }
        None => (None, s),
    };
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let rows = r.deserialize().collect::<Result<Vec<T>, _>>()?;
    Ok((stamp, rows))
}

/// One row of a rate-sweep table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scheme: SchemeId,
    #[serde(rename = "P")]
    pub power: f64,
    #[serde(rename = "log2P")]
    pub log2_power: f64,
    pub sum_rate: f64,
    pub trials: u64,
    pub skipped: u64,
}

pub fn sweep_rows(est: &DofEstimate) -> Vec<SweepRow> {
    est.points
        .iter()
        .map(|p| SweepRow {
            scheme: est.scheme,
            power: p.power,
            log2_power: p.power.log2(),
            sum_rate: p.sum_rate,
            trials: p.trials,
            skipped: p.skipped,
        })
        .collect()
}

/// Long-form trace line: `section,name,re,im`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub section: String,
    pub name: String,
    pub re: f64,
    pub im: f64,
}

pub fn trace_rows(trace: &SimulationTrace) -> Vec<TraceRow> {
    let mut rows = Vec::new();
    let mut push = |section: &str, name: String, re: f64, im: f64| {
        rows.push(TraceRow {
            section: section.to_string(),
            name,
            re,
            im,
        })
    };
    for t in 0..SLOTS {
        for i in 0..2 {
            for j in 0..2 {
                let h = trace.channel.coef(i, j, t);
                push(
                    "channel",
                    format!("h{}{}({})", i + 1, j + 1, t + 1),
                    h.re,
                    h.im,
                );
            }
        }
    }
    for s in Symbol::ALL {
        let v = trace.symbols.get(s);
        push("symbol", s.name().to_string(), v.re, v.im);
    }
    for t in 0..SLOTS {
        for i in 0..2 {
            for j in 0..2 {
                let f = trace.plan.coef(i, j, t);
                push(
                    "plan",
                    format!("f{}{}({})", i + 1, j + 1, t + 1),
                    f.re,
                    f.im,
                );
            }
        }
    }
    for t in 0..SLOTS {
        for j in 0..2 {
            let x = trace.transmit.x[t][j];
            push("transmit", format!("X{}({})", j + 1, t + 1), x.re, x.im);
        }
    }
    for t in 0..SLOTS {
        for i in 0..2 {
            let n = trace.received.noise[i][t];
            push("noise", format!("N{}({})", i + 1, t + 1), n.re, n.im);
            let y = trace.received.y[i][t];
            push("received", format!("Y{}({})", i + 1, t + 1), y.re, y.im);
        }
    }
    for s in Symbol::ALL {
        if let Some(v) = trace.decoded.get(s) {
            push("recovered", s.name().to_string(), v.re, v.im);
        }
    }
    if let Some(r) = trace.decoded.residual {
        push("metric", "residual".to_string(), r, 0.0);
    }
    push(
        "metric",
        "relative_error".to_string(),
        trace.relative_error,
        0.0,
    );
    rows
}
