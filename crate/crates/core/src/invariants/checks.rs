use super::sweep::SweepResult;
use crate::distfield::QuotientMap;
use crate::error::CheckError;
use crate::levelset::{Band, Census, RegionCheck, TopoReport, Window};
use serde::{Deserialize, Serialize};

/// Outcome of one clause. Clauses with `asserted == false` are reported
/// but never fail the check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseResult {
    pub clause: String,
    pub asserted: bool,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub ok: bool,
    pub clauses: Vec<ClauseResult>,
}

impl CheckReport {
    pub fn from_clauses(clauses: Vec<ClauseResult>) -> CheckReport {
        CheckReport { ok: clauses.iter().all(|c| c.pass || !c.asserted), clauses }
    }

    pub fn clause(&self, name: &str) -> Option<&ClauseResult> {
        self.clauses.iter().find(|c| c.clause == name)
    }

    pub fn first_failure(&self) -> Option<&ClauseResult> {
        self.clauses.iter().find(|c| c.asserted && !c.pass)
    }
}

fn clause(name: &str, failures: Vec<String>, ok_detail: String) -> ClauseResult {
    let pass = failures.is_empty();
    let detail = if pass { ok_detail } else { failures.join("; ") };
    ClauseResult { clause: name.to_string(), asserted: true, pass, detail }
}

fn counts(r: &TopoReport) -> String {
    format!("t={} #c={} #cc={} #e={}", r.t, r.n_components, r.n_complement, r.n_ends)
}

/// Checks every structure clause against a sweep.
pub fn check_main(s: &SweepResult) -> CheckReport {
    let n = s.n_modal;
    let reps: Vec<&TopoReport> = s.t_f_intervals.iter().map(|iv| &iv.representative).collect();
    let off: Vec<&TopoReport> = s.reports.iter().filter(|r| !s.in_interval(r.t)).collect();
    let mut out = Vec::new();

    let bad = |keep: &dyn Fn(&TopoReport) -> bool, rs: &[&TopoReport]| -> Vec<String> {
        rs.iter().filter(|r| !keep(r)).map(|r| counts(r)).collect()
    };
    let all: Vec<&TopoReport> = s.reports.iter().chain(reps.iter().copied()).collect();
    out.push(clause("(1)", bad(&|r| r.n_ends == 2 * n, &all), format!("#e = {} = 2n at {} levels", 2 * n, all.len())));
    out.push(clause("(2a)", bad(&|r| r.n_components == n, &off), format!("#c = {n} at {} generic levels", off.len())));
    out.push(clause("(2b)", bad(&|r| r.n_complement == n + 1, &off), format!("#cc = {} at {} generic levels", n + 1, off.len())));
    out.push(clause(
        "(2c)",
        bad(&|r| r.per_component.iter().all(|c| c.line_like), &off),
        "every generic component is a line".into(),
    ));
    out.push(clause("(3a)", bad(&|r| r.n_components < n, &reps), format!("{} exceptional brackets drop below n", reps.len())));
    out.push(clause(
        "(3b)",
        bad(&|r| r.n_complement + r.n_components == 2 * n + 1, &reps),
        "#cc = 2n + 1 - #c at every exceptional bracket".into(),
    ));
    let shapes: Vec<String> = s
        .t_f_intervals
        .iter()
        .map(|iv| {
            let r = &iv.representative;
            let desc: Vec<String> = r
                .per_component
                .iter()
                .map(|c| format!("{}{}", c.ends, if c.has_branch { "b" } else { "" }))
                .collect();
            format!("[{}, {}]: ends {}", iv.lo, iv.hi, desc.join(","))
        })
        .collect();
    let finite = reps.iter().all(|r| r.per_component.iter().all(|c| !c.bounded && c.ends >= 2));
    out.push(ClauseResult {
        clause: "(3c)".into(),
        asserted: false,
        pass: finite,
        detail: if shapes.is_empty() { "no exceptional levels".into() } else { shapes.join("; ") },
    });
    let k = s.t_f_intervals.len();
    out.push(ClauseResult {
        clause: "card".into(),
        asserted: true,
        pass: k < n.max(1),
        detail: format!("{k} exceptional brackets, n - 1 = {}", n.saturating_sub(1)),
    });
    CheckReport::from_clauses(out)
}

/// `#c + #cc = #e + 1`.
pub fn check_euler(r: &TopoReport) -> bool {
    r.n_components + r.n_complement == r.n_ends + 1
}

/// The boundary-ends identity for every complement region of `f^{-1}(t)`.
pub fn check_region_boundaries(map: &QuotientMap, t: f64, windows: &[Window]) -> Result<Vec<RegionCheck>, CheckError> {
    let census = Census::new(map, windows.to_vec())?;
    let band = Band::level(t);
    if !census.report(band).stabilized {
        return Err(CheckError::NotStabilized(t));
    }
    Ok(census.region_boundaries(band))
}
