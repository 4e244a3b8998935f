//! Flow export in the `Source [amount] Target` text format read by
//! sankey/alluvial diagram tools.

use std::fmt::Write as _;

use super::{AnalyticsError, AverageClassProfile};

#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    pub source: String,
    pub amount: f64,
    pub target: String,
}

impl Flow {
    pub fn new(source: impl Into<String>, amount: f64, target: impl Into<String>) -> Self {
        Self {
            source: source.into(),
            amount,
            target: target.into(),
        }
    }
}

/// Nearest integer, halves rounded up.
pub fn round_half_up(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}

fn clean_name(name: &str) -> String {
    name.replace('[', "(")
        .replace(']', ")")
        .replace(['\n', '\r'], " ")
}

/// One line per flow, amounts rounded; flows that round to zero are omitted.
pub fn export_alluvial(flows: &[Flow]) -> String {
    let mut out = String::new();
    for f in flows {
        let amount = round_half_up(f.amount);
        if amount == 0 {
            continue;
        }
        writeln!(
            out,
            "{} [{}] {}",
            clean_name(&f.source),
            amount,
            clean_name(&f.target)
        )
        .expect("writing to a String");
    }
    out
}

/// Parses the text format back into flows. Blank lines and lines starting
/// with `//` are ignored.
pub fn parse_alluvial(text: &str) -> Result<Vec<Flow>, AnalyticsError> {
    let mut flows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        let err = |message: &str| AnalyticsError::Parse {
            line: i + 1,
            message: format!("{message}: {line:?}"),
        };
        let open = line.find(" [").ok_or_else(|| err("missing ' ['"))?;
        let rest = &line[open + 2..];
        let close = rest.find("] ").ok_or_else(|| err("missing '] '"))?;
        let amount: f64 = rest[..close]
            .trim()
            .parse()
            .map_err(|_| err("amount is not a number"))?;
        let source = line[..open].trim();
        let target = rest[close + 2..].trim();
        if source.is_empty() || target.is_empty() {
            return Err(err("empty node name"));
        }
        flows.push(Flow::new(source, amount, target));
    }
    Ok(flows)
}

/// Flows from one source node to the rank nodes of an average-class profile.
pub fn profile_flows(profile: &AverageClassProfile, source: &str, target_prefix: &str) -> Vec<Flow> {
    profile
        .rank_averages
        .iter()
        .enumerate()
        .map(|(i, &a)| Flow::new(source, a, format!("{target_prefix}{}", i + 1)))
        .collect()
}
