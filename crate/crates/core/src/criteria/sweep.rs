//! Staged sweeps over `(q, n)` grids with JSON-lines checkpointing.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{condition_qn, special_sieve, test_theorem, total_sieve, SieveConstant, Tri, Verdict};
use crate::boundscan::mn_bound;
use crate::error::Result;
use crate::intnt::{prime_powers_in, DEFAULT_BUDGET};

/// Choice of `p0` for the special sieve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum P0Policy {
    Fixed(u64),
    /// 71 if `q^n > 10^100`, 53 if `q^n > 10^30`, else 23.
    BySize,
}

impl P0Policy {
    pub fn p0(self, q: u64, n: u64) -> u64 {
        match self {
            P0Policy::Fixed(p) => p,
            P0Policy::BySize => {
                let l = n as f64 * (q as f64).log10();
                if l > 100.0 {
                    71
                } else if l > 30.0 {
                    53
                } else {
                    23
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Stage {
    TestTheorem { t: f64 },
    SpecialSieve { p0: P0Policy },
    TotalSieve { constant: SieveConstant },
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::TestTheorem { .. } => "test_theorem",
            Stage::SpecialSieve { .. } => "special_sieve",
            Stage::TotalSieve { .. } => "total_sieve",
        }
    }
}

/// Upper end of the `q` range per `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum QBound {
    /// The three-branch bound `M_n`.
    Mn,
    Fixed(f64),
}

/// Whether `q = bound` is part of the grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperBound {
    #[default]
    Closed,
    Open,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    pub n_min: u64,
    pub n_max: u64,
    pub q_min: u64,
    pub q_bound: QBound,
    pub upper: UpperBound,
    pub stages: Vec<Stage>,
    pub budget: u64,
    pub checkpoint: Option<PathBuf>,
}

impl SweepConfig {
    /// Stages test_theorem(t = 8), special_sieve(sized p0), total_sieve.
    pub fn standard(n_min: u64, n_max: u64) -> Self {
        SweepConfig {
            n_min,
            n_max,
            q_min: 5,
            q_bound: QBound::Mn,
            upper: UpperBound::Closed,
            stages: vec![
                Stage::TestTheorem { t: 8.0 },
                Stage::SpecialSieve { p0: P0Policy::BySize },
                Stage::TotalSieve { constant: SieveConstant::ThirtySix },
            ],
            budget: DEFAULT_BUDGET,
            checkpoint: None,
        }
    }

    /// Exclusive upper end of `q` for this `n`.
    pub fn q_end(&self, n: u64) -> u64 {
        let b = match self.q_bound {
            QBound::Mn => mn_bound(n).to_f64().unwrap_or(f64::MAX),
            QBound::Fixed(b) => b,
        };
        let b = b.min(u64::MAX as f64 / 2.0);
        match self.upper {
            UpperBound::Closed => b.floor() as u64 + 1,
            UpperBound::Open => b.ceil() as u64,
        }
    }

    /// Grid cells in sweep order: `n` ascending, then `q` ascending.
    pub fn cells(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for n in self.n_min..=self.n_max {
            let end = self.q_end(n);
            if end <= self.q_min {
                continue;
            }
            for q in prime_powers_in(self.q_min, end, 1, 0) {
                if condition_qn(q, n) {
                    out.push((q, n));
                }
            }
        }
        out
    }
}

/// One checkpoint line: the deciding stage, or the last stage tried.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub q: u64,
    pub n: u64,
    pub stage: String,
    pub verdict: Verdict,
    pub delta: Option<String>,
    #[serde(rename = "Delta")]
    pub big_delta: Option<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StageCount {
    pub stage: String,
    pub cleared: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct NSummary {
    pub n: u64,
    pub cells: u64,
    pub cleared: Vec<u64>,
    pub survivors: u64,
    pub indeterminate: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SieveReport {
    pub cells: u64,
    pub stages: Vec<StageCount>,
    /// Cells not proven by any stage (NotProven at the last stage).
    pub survivors: Vec<(u64, u64)>,
    pub indeterminate: Vec<(u64, u64)>,
    pub per_n: Vec<NSummary>,
}

impl SieveReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,cells");
        for st in &self.stages {
            s.push_str(&format!(",cleared_{}", st.stage));
        }
        s.push_str(",survivors,indeterminate\n");
        for r in &self.per_n {
            s.push_str(&format!("{},{}", r.n, r.cells));
            for c in &r.cleared {
                s.push_str(&format!(",{c}"));
            }
            s.push_str(&format!(",{},{}\n", r.survivors, r.indeterminate));
        }
        s
    }
}

fn run_cell(q: u64, n: u64, stages: &[Stage], budget: u64) -> CellRecord {
    let start = Instant::now();
    let mut rec = CellRecord {
        q,
        n,
        stage: String::new(),
        verdict: Verdict::NotProven,
        delta: None,
        big_delta: None,
        elapsed_ms: 0,
    };
    for st in stages {
        rec.stage = st.name().into();
        let (v, d, bd) = match *st {
            Stage::TestTheorem { t } => {
                let v = match test_theorem(q, n, t) {
                    Tri::True => Verdict::Proven,
                    Tri::False => Verdict::NotProven,
                    Tri::Borderline => Verdict::Indeterminate,
                };
                (v, None, None)
            }
            Stage::SpecialSieve { p0 } => {
                let o = special_sieve(q, n, p0.p0(q, n));
                (o.verdict, o.delta, o.big_delta)
            }
            Stage::TotalSieve { constant } => {
                let o = total_sieve(q, n, constant, budget);
                (o.verdict, o.delta, o.big_delta)
            }
        };
        rec.verdict = v;
        rec.delta = d.map(|x| x.to_string());
        rec.big_delta = bd.map(|x| x.to_string());
        if v == Verdict::Proven {
            break;
        }
    }
    rec.elapsed_ms = start.elapsed().as_millis() as u64;
    rec
}

/// Records from an existing checkpoint, keyed by `(q, n)`.
pub fn load_checkpoint(path: &Path) -> Result<HashMap<(u64, u64), CellRecord>> {
    let mut out = HashMap::new();
    if !path.exists() {
        return Ok(out);
    }
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        // a torn final line from an interrupted run is skipped
        if let Ok(r) = serde_json::from_str::<CellRecord>(&line) {
            out.insert((r.q, r.n), r);
        }
    }
    Ok(out)
}

/// Run the staged pipeline on every grid cell. Cells already present in
/// the checkpoint are not recomputed.
pub fn sweep(cfg: &SweepConfig) -> Result<SieveReport> {
    let cells = cfg.cells();
    let mut done = match &cfg.checkpoint {
        Some(p) => load_checkpoint(p)?,
        None => HashMap::new(),
    };
    let mut writer = match &cfg.checkpoint {
        Some(p) => Some(OpenOptions::new().create(true).append(true).open(p)?),
        None => None,
    };
    let todo: Vec<(u64, u64)> = cells.iter().copied().filter(|c| !done.contains_key(c)).collect();
    for chunk in todo.chunks(4096) {
        let recs: Vec<CellRecord> = chunk.par_iter().map(|&(q, n)| run_cell(q, n, &cfg.stages, cfg.budget)).collect();
        for r in recs {
            if let Some(w) = writer.as_mut() {
                writeln!(w, "{}", serde_json::to_string(&r)?)?;
            }
            done.insert((r.q, r.n), r);
        }
        if let Some(w) = writer.as_mut() {
            w.flush()?;
        }
    }
    let names: Vec<&str> = cfg.stages.iter().map(|s| s.name()).collect();
    let mut rep = SieveReport {
        stages: names.iter().map(|s| StageCount { stage: s.to_string(), cleared: 0 }).collect(),
        ..Default::default()
    };
    let last = names.last().copied().unwrap_or("");
    for &(q, n) in &cells {
        let r = &done[&(q, n)];
        rep.cells += 1;
        if rep.per_n.last().map(|s| s.n) != Some(n) {
            rep.per_n.push(NSummary { n, cleared: vec![0; names.len()], ..Default::default() });
        }
        let ns = rep.per_n.last_mut().unwrap();
        ns.cells += 1;
        match r.verdict {
            Verdict::Proven => {
                if let Some(i) = names.iter().position(|s| *s == r.stage) {
                    rep.stages[i].cleared += 1;
                    ns.cleared[i] += 1;
                }
            }
            Verdict::Indeterminate if r.stage == last => {
                rep.indeterminate.push((q, n));
                ns.indeterminate += 1;
            }
            _ => {
                rep.survivors.push((q, n));
                ns.survivors += 1;
            }
        }
    }
    Ok(rep)
}
