// Copyright 2026 The qvote Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Human-readable rendering of report documents.

use qvote_core::report::{format_probability, RunReport, ScanReport, VerifyReport};

pub fn render_run_report(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "scenario: n={} actions=[{}]\n",
        report.n,
        report.actions.join(" ")
    ));
    out.push_str(&format!("attack:   {}\n", report.attack));
    out.push_str(&format!("expected tally: s = {}\n", report.expected_tally));
    out.push_str(&format!("mode: {}\n\n", report.mode));

    out.push_str("tally distribution:\n");
    for line in &report.tally {
        out.push_str(&format!(
            "  s = {:<2}  probability {}\n",
            line.s,
            format_probability(line.probability)
        ));
    }
    out.push_str("ballot test:\n");
    out.push_str(&format!(
        "  pass probability       {}\n",
        format_probability(report.pass_probability)
    ));
    out.push_str(&format!(
        "  detection probability  {}\n",
        format_probability(report.detection_probability)
    ));
    if !report.per_party.is_empty() {
        out.push_str("per-party failure probabilities:\n");
        for party in &report.per_party {
            out.push_str(&format!(
                "  {:<12} {}\n",
                party.party,
                format_probability(party.failure_probability)
            ));
        }
    }

    if let Some(mc) = &report.monte_carlo {
        out.push_str(&format!(
            "\nmonte-carlo (shots={}, seed={}):\n",
            mc.shots, mc.seed
        ));
        for line in &mc.tally_frequencies {
            out.push_str(&format!(
                "  tally s = {:<2} count {:<6} frequency {}\n",
                line.s,
                line.count,
                format_probability(line.frequency)
            ));
        }
        out.push_str(&format!(
            "  ballot failures: {} (frequency {})\n",
            mc.failures,
            format_probability(mc.failure_frequency)
        ));
        for party in &mc.per_party {
            out.push_str(&format!(
                "  {:<12} failures {:<6} frequency {}\n",
                party.party,
                party.failures,
                format_probability(party.frequency)
            ));
        }
    }
    out
}

pub fn render_scan_report(report: &ScanReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "scan: attack={} n={} s={} events={}\n",
        report.attack,
        report.n,
        report.s,
        report.rows.len()
    ));
    out.push_str(&format!("{:<6} {:<22} event\n", "index", "detection"));
    for row in &report.rows {
        out.push_str(&format!(
            "{:<6} {:<22} {}\n",
            row.index,
            format_probability(row.detection_probability),
            row.event
        ));
    }
    out.push_str(&format!(
        "max: index {}, detection {}, event `{}`\n",
        report.max_index,
        format_probability(report.max_probability),
        report.max_event
    ));
    out
}

/// One row per event; event tokens contain no commas.
pub fn scan_csv(report: &ScanReport) -> String {
    let mut out = String::from("index,event,detection_probability\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{}\n",
            row.index,
            row.event,
            format_probability(row.detection_probability)
        ));
    }
    out
}

pub fn render_verify_report(report: &VerifyReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "verify {}: {} checks={} failures={}\n",
        report.suite, report.parameters, report.checks, report.failures
    ));
    for line in &report.details {
        out.push_str(&format!("  {line}\n"));
    }
    out.push_str(if report.passed { "result: pass\n" } else { "result: FAIL\n" });
    out
}
