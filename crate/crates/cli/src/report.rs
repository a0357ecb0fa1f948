//! Run reports and the guarantee each command checks against its oracle.

use num_rational::Ratio;
use serde::Serialize;
use streampath::matching::ApproxParams;

pub type Q = Ratio<i128>;

/// One algorithm run. Serialized through `serde_json::Value`, whose maps
/// are ordered by key, so identical runs print identical bytes.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub algorithm: &'static str,
    pub instance: String,
    pub n: usize,
    pub edges: usize,
    pub epsilon: String,
    pub k: usize,
    /// `edges`, `cost` or `weight`.
    pub objective: &'static str,
    pub output: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paths: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tour: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<u64>,
    /// `output / oracle` as a reduced fraction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<String>,
    /// The ratio the algorithm guarantees, as a reduced fraction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guarantee: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guarantee_holds: Option<bool>,
    pub engine_passes: Vec<usize>,
    pub pass_limit: usize,
    pub passes_used: usize,
    pub words_peak: u64,
    pub words_budget: u64,
    pub budget_exceeded: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

/// Which bound applies, and in which direction.
#[derive(Clone, Copy, Debug)]
pub enum Guarantee {
    /// `output ≥ 2/3·(1−ε)·ρ`.
    PathCover,
    /// `cost ≤ (4/3 + ε + 1/n)·T*`.
    Tsp12,
    /// `weight ≥ (7n − 9)/(12n)·(1−ε)·C*`.
    MaxTsp,
}

impl Guarantee {
    pub fn bound(self, params: &ApproxParams, n: usize) -> Q {
        let eps = Q::new(
            *params.epsilon().numer() as i128,
            *params.epsilon().denom() as i128,
        );
        let one = Q::from_integer(1);
        let n = n as i128;
        match self {
            Guarantee::PathCover => Q::new(2, 3) * (one - eps),
            Guarantee::Tsp12 => Q::new(4, 3) + eps + Q::new(1, n),
            Guarantee::MaxTsp => Q::new(7 * n - 9, 12 * n) * (one - eps),
        }
    }

    /// Fills in the oracle fields: ratio, bound and verdict. An optimum of
    /// zero (an edgeless path-cover instance) counts as ratio 1.
    pub fn apply(self, report: &mut RunReport, params: &ApproxParams, optimum: u64) {
        let ratio = if optimum == 0 {
            Q::from_integer(1)
        } else {
            Q::new(report.output as i128, optimum as i128)
        };
        let bound = self.bound(params, report.n);
        let holds = match self {
            Guarantee::PathCover | Guarantee::MaxTsp => ratio >= bound,
            Guarantee::Tsp12 => ratio <= bound,
        };
        report.oracle = Some(optimum);
        report.ratio = Some(ratio.to_string());
        report.guarantee = Some(bound.to_string());
        report.guarantee_holds = Some(holds);
    }
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&value).expect("value prints")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} on {} (n = {}, {} edges, epsilon = {}, k = {})\n{}: {}\n",
            self.algorithm,
            self.instance,
            self.n,
            self.edges,
            self.epsilon,
            self.k,
            self.objective,
            self.output
        );
        if let Some(paths) = &self.paths {
            out += &format!("paths: {paths:?}\n");
        }
        if let Some(tour) = &self.tour {
            out += &format!("tour: {tour:?}\n");
        }
        if let (Some(o), Some(r), Some(g), Some(h)) = (
            self.oracle,
            &self.ratio,
            &self.guarantee,
            self.guarantee_holds,
        ) {
            out += &format!(
                "optimum: {o}\nratio: {r}\nguarantee: {g} ({})\n",
                if h { "holds" } else { "VIOLATED" }
            );
        }
        out += &format!(
            "passes: {} (per run {:?}, limit {} per run)\nwords: peak {} of budget {}{}\n",
            self.passes_used,
            self.engine_passes,
            self.pass_limit,
            self.words_peak,
            self.words_budget,
            if self.budget_exceeded {
                " (exceeded)"
            } else {
                ""
            }
        );
        if let Some(ms) = self.elapsed_ms {
            out += &format!("elapsed: {ms} ms\n");
        }
        out
    }
}
