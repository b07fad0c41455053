//! Per-run statistics record, as JSON or text.

use std::fmt::Write as _;

use serde::Serialize;

use crate::dist::{Backend, TerminationLog};
use crate::model::Model;
use crate::search::{RejectionCounts, SearchResult, Strategy, Verdict, WorkerStats};

/// Echo of the options a run was started with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfigEcho {
    pub model: String,
    pub strategy: Strategy,
    pub por: bool,
    pub symmetry: bool,
    pub workers: usize,
    /// Absent for a centralized run.
    pub backend: Option<Backend>,
    pub seed: u64,
    pub max_states: usize,
    pub unsafe_no_c2: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleComparison {
    pub oracle_states: u64,
    pub oracle_verdict: Verdict,
    pub agrees: bool,
    /// Stored states over oracle states.
    pub reduction_ratio: f64,
}

impl OracleComparison {
    pub fn new(
        result: &SearchResult,
        oracle_states: u64,
        oracle_verdict: Verdict,
    ) -> OracleComparison {
        OracleComparison {
            oracle_states,
            oracle_verdict,
            agrees: result.verdict == oracle_verdict,
            reduction_ratio: result.states_stored as f64 / oracle_states.max(1) as f64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub verdict: Verdict,
    /// Transition labels such as `P[0].acquire`.
    pub trace: Option<Vec<String>>,
    pub states_stored: u64,
    pub transitions_fired: u64,
    pub max_frontier_depth: u64,
    pub fully_expanded: u64,
    pub rejections: RejectionCounts,
    pub per_worker: Vec<WorkerStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub termination: Option<TerminationLog>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleComparison>,
    pub wall_time_ms: u64,
    pub config: ConfigEcho,
}

impl Report {
    pub fn new(m: &Model, result: &SearchResult, config: ConfigEcho, wall_time_ms: u64) -> Report {
        Report {
            verdict: result.verdict,
            trace: result
                .trace
                .as_ref()
                .map(|t| t.iter().map(|&t| m.label(t)).collect()),
            states_stored: result.states_stored,
            transitions_fired: result.transitions_fired,
            max_frontier_depth: result.max_frontier_depth,
            fully_expanded: result.fully_expanded_count,
            rejections: result.rejections,
            per_worker: result.per_worker.clone(),
            termination: None,
            oracle: None,
            wall_time_ms,
            config,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let mode = match c.backend {
            Some(b) => format!("{} workers, {:?} backend, seed {}", c.workers, b, c.seed),
            None => "centralized".to_string(),
        };
        let _ = writeln!(
            out,
            "model {}: {:?}{}{}, {}",
            c.model,
            c.strategy,
            if c.por { " +por" } else { "" },
            if c.symmetry { " +symmetry" } else { "" },
            mode
        );
        let _ = writeln!(out, "verdict: {:?}", self.verdict);
        let _ = writeln!(
            out,
            "statesStored={} transitionsFired={} maxFrontierDepth={} fullyExpanded={}",
            self.states_stored,
            self.transitions_fired,
            self.max_frontier_depth,
            self.fully_expanded
        );
        if c.por {
            let r = &self.rejections;
            let _ = writeln!(
                out,
                "rejected candidates: C1={} C2*={} C3={}",
                r.c1, r.c2_star, r.c3
            );
        }
        if c.backend.is_some() {
            for w in &self.per_worker {
                let _ = writeln!(
                    out,
                    "  worker {}: stored={} sent={} recv={} maxDepth={} fullyExpanded={}",
                    w.id, w.states_stored, w.sent, w.recv, w.max_depth, w.fully_expanded
                );
            }
        }
        if let Some(trace) = &self.trace {
            let _ = writeln!(out, "trace ({} steps):", trace.len());
            for (i, step) in trace.iter().enumerate() {
                let _ = writeln!(out, "  {:>3}. {}", i + 1, step);
            }
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(
                out,
                "oracle: {} states, {:?} ({}), reduction ratio {:.4}",
                o.oracle_states,
                o.oracle_verdict,
                if o.agrees { "agrees" } else { "DISAGREES" },
                o.reduction_ratio
            );
        }
        let _ = writeln!(out, "time: {} ms", self.wall_time_ms);
        out
    }
}
