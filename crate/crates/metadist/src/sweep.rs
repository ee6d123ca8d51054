//! Parameter sweeps behind the `canonical`, `bandwidth` and `thz` commands.

use sha2::{Digest, Sha256};

use metadist_core::canonical::{
    r2_multi_interferer, r2_single_interferer, BandwidthSearch, BandwidthSolver, CanonicalModel, CanonicalParams,
    InterfererMode, QosSpec, ReliabilityOrder,
};
use metadist_core::mdcore::{InnerLayer, MdEstimate, MdQuery};
use metadist_core::thz::{r2_scenario1, r2_scenario2, AbsorptionTable, ThresholdPath, ThzModel, ThzParams};

use crate::error::{CliError, CliResult};
use crate::parallel::par_nested_md_estimate;
use crate::record::{Column, Format, RunRecord};

/// Link targets at or above this are refused for Monte Carlo without `force`.
pub const EXTREME_P1: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    MonteCarlo,
    Both,
}

impl Method {
    fn closed(self) -> bool {
        self != Method::MonteCarlo
    }

    fn mc(self) -> bool {
        self != Method::ClosedForm
    }
}

impl std::str::FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "closed_form" | "closed-form" | "closed" => Ok(Method::ClosedForm),
            "monte_carlo" | "monte-carlo" | "mc" => Ok(Method::MonteCarlo),
            "both" => Ok(Method::Both),
            _ => Err(CliError::Usage(format!(
                "unknown method `{s}` (expected closed_form, monte_carlo or both)"
            ))),
        }
    }
}

/// The swept quantity. `Target` is the reliability target of the bandwidth
/// search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    P1,
    P2,
    Q,
    W,
    Bw,
    Target,
}

impl Axis {
    pub fn column_name(self) -> &'static str {
        match self {
            Axis::P1 => "p1",
            Axis::P2 => "p2",
            Axis::Q => "q",
            Axis::W => "W",
            Axis::Bw => "BW",
            Axis::Target => "target",
        }
    }

    fn unit(self) -> &'static str {
        match self {
            Axis::W | Axis::Bw => "Hz",
            _ => "1",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p1" => Ok(Axis::P1),
            "p2" => Ok(Axis::P2),
            "q" => Ok(Axis::Q),
            "w" => Ok(Axis::W),
            "bw" => Ok(Axis::Bw),
            "target" | "r" => Ok(Axis::Target),
            _ => Err(CliError::Usage(format!("unknown axis `{s}`"))),
        }
    }
}

/// Fixed inputs of a canonical-model sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalFixed {
    pub intensity: f64,
    pub alpha: f64,
    pub zeta: f64,
    pub qos: QosSpec,
    pub p1: f64,
    pub p2: f64,
    /// Interferer mode of the Monte Carlo column.
    pub mode: InterfererMode,
    pub n_points: usize,
}

/// Fixed inputs of a required-bandwidth search.
#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthFixed {
    pub canonical: CanonicalFixed,
    pub w_lo: f64,
    pub w_hi: f64,
    pub mc_samples: usize,
}

/// Fixed inputs of a THz sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ThzFixed {
    pub params: ThzParams,
    pub table: AbsorptionTable,
    pub scenario: u8,
    pub p1: f64,
    pub p2: f64,
    pub path: ThresholdPath,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Fixed {
    Canonical(CanonicalFixed),
    Bandwidth(BandwidthFixed),
    Thz(ThzFixed),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub method: Method,
    pub axis: Axis,
    pub grid: Vec<f64>,
    pub fixed: Fixed,
    pub seed: u64,
    /// `(N₀, N₁, N₂)` for the nested Monte Carlo columns.
    pub trials: Vec<u64>,
    /// Allows Monte Carlo at extreme link targets.
    pub force: bool,
    pub out: Option<std::path::PathBuf>,
    pub format: Format,
}

/// A finished sweep and the notices raised while running it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub record: RunRecord,
    pub notices: Vec<String>,
}

impl SweepSpec {
    /// sha256 over everything that determines the numbers; the output
    /// location is left out.
    pub fn hash(&self) -> String {
        let text = format!(
            "{:?}|{:?}|{:?}|{:?}|{}|{:?}|{}",
            self.method, self.axis, self.grid, self.fixed, self.seed, self.trials, self.force
        );
        format!("{:x}", Sha256::digest(text.as_bytes()))
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.grid.is_empty() {
            return Err(CliError::Usage("the sweep grid is empty".into()));
        }
        if let Some(v) = self.grid.iter().find(|v| !v.is_finite()) {
            return Err(CliError::Usage(format!("grid value {v} is not finite")));
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Usage("grid must be strictly ascending".into()));
        }
        if self.method.mc()
            && !matches!(self.fixed, Fixed::Bandwidth(_))
            && (self.trials.len() != 3 || self.trials.contains(&0)) {
            return Err(CliError::Usage("--trials needs three positive counts N0,N1,N2".into()));
        }
        let allowed: &[Axis] = match &self.fixed {
            Fixed::Canonical(_) => &[Axis::P1, Axis::P2, Axis::Q, Axis::W],
            Fixed::Bandwidth(_) => &[Axis::Target],
            Fixed::Thz(_) => &[Axis::P1, Axis::P2, Axis::Bw],
        };
        if !allowed.contains(&self.axis) {
            return Err(CliError::Usage(format!(
                "axis `{}` is not available here (use one of {})",
                self.axis.column_name(),
                allowed.iter().map(|a| a.column_name()).collect::<Vec<_>>().join(", ")
            )));
        }
        match &self.fixed {
            Fixed::Canonical(c) => {
                if self.axis == Axis::W && !matches!(c.qos, QosSpec::Link { .. }) {
                    return Err(CliError::Usage("a W sweep needs --l and --tth instead of --q".into()));
                }
                // every grid point must build a valid model
                for &v in &self.grid {
                    let (params, p1, p2) = canonical_point(c, self.axis, v)?;
                    r2_single_interferer(p1, p2, params.q(), params.alpha(), params.zeta())?;
                }
            }
            Fixed::Bandwidth(b) => {
                if !matches!(b.canonical.qos, QosSpec::Link { .. }) {
                    return Err(CliError::Usage("the bandwidth search needs --l and --tth, not --q".into()));
                }
                if !(b.w_lo > 0.0 && b.w_lo < b.w_hi) {
                    return Err(CliError::Usage("need 0 < w-min < w-max".into()));
                }
                if b.mc_samples == 0 {
                    return Err(CliError::Usage("mc-samples must be positive".into()));
                }
                canonical_params(&b.canonical)?;
                if self.grid.iter().any(|&t| !(t > 0.0 && t < 1.0)) {
                    return Err(CliError::Usage("target reliabilities must lie in (0, 1)".into()));
                }
            }
            Fixed::Thz(t) => {
                if !matches!(t.scenario, 1 | 2) {
                    return Err(CliError::Usage("--scenario must be 1 or 2".into()));
                }
                t.params.validate()?;
                for &v in &self.grid {
                    let (params, p1, p2) = thz_point(t, self.axis, v);
                    check_unit("p1", p1)?;
                    check_unit("p2", p2)?;
                    if self.axis == Axis::Bw && !(v > 0.0) {
                        return Err(CliError::Usage("bandwidths must be positive".into()));
                    }
                    params.validate()?;
                    t.table.require_covers(params.f_low, params.f_high)?;
                }
            }
        }
        Ok(())
    }

    /// Runs the sweep.
    pub fn run(&self) -> CliResult<SweepOutput> {
        self.validate()?;
        let mut notices = Vec::new();
        let columns = match &self.fixed {
            Fixed::Canonical(c) => self.run_canonical(c, &mut notices)?,
            Fixed::Bandwidth(b) => self.run_bandwidth(b, &mut notices)?,
            Fixed::Thz(t) => self.run_thz(t, &mut notices)?,
        };
        let mut all = vec![Column::full(self.axis.column_name(), self.axis.unit(), self.grid.clone())];
        all.extend(columns);
        Ok(SweepOutput {
            record: RunRecord::new(self.hash(), self.seed, all)?,
            notices,
        })
    }

    // false when Monte Carlo is skipped at an extreme target
    fn mc_allowed(&self, p1: f64, notices: &mut Vec<String>) -> CliResult<bool> {
        if p1 < EXTREME_P1 || self.force {
            return Ok(true);
        }
        let guidance = format!(
            "Monte Carlo at p1 = {p1} needs very many trials; use the closed form, or pass --force to run it anyway"
        );
        if self.method == Method::MonteCarlo {
            return Err(CliError::Usage(guidance));
        }
        notices.push(format!("Monte Carlo column omitted: {guidance}"));
        Ok(false)
    }

    fn query(&self, q: f64, p1: f64, p2: f64) -> CliResult<MdQuery> {
        Ok(MdQuery::new(q, vec![p1, p2], self.trials.clone())?.with_inner(InnerLayer::Sampled))
    }

    fn run_canonical(&self, c: &CanonicalFixed, notices: &mut Vec<String>) -> CliResult<Vec<Column>> {
        let n = self.grid.len();
        let mut single = Vec::with_capacity(n);
        let mut multi = Vec::with_capacity(n);
        let mut mc = Vec::with_capacity(n);
        let mut se = Vec::with_capacity(n);
        for &v in &self.grid {
            let (params, p1, p2) = canonical_point(c, self.axis, v)?;
            let (q, a, z) = (params.q(), params.alpha(), params.zeta());
            if self.method.closed() {
                single.push(r2_single_interferer(p1, p2, q, a, z)?);
                multi.push(r2_multi_interferer(p1, p2, q, a, z)?);
            }
            if self.method.mc() {
                let est = if self.mc_allowed(p1, notices)? {
                    let model = CanonicalModel::second_order(params);
                    Some(par_nested_md_estimate(&model, &self.query(q, p1, p2)?, self.seed)?)
                } else {
                    None
                };
                push_estimate(est, &mut mc, &mut se);
            }
        }
        let mut cols = Vec::new();
        if self.method.closed() {
            cols.push(Column::full("R_closed_single", "1", single));
            cols.push(Column::full("R_closed_multi", "1", multi));
        }
        if self.method.mc() {
            cols.push(Column::new("R_mc", "1", mc));
            cols.push(Column::new("stderr", "1", se));
        }
        Ok(cols)
    }

    fn run_bandwidth(&self, b: &BandwidthFixed, notices: &mut Vec<String>) -> CliResult<Vec<Column>> {
        let c = &b.canonical;
        let params = canonical_params(c)?;
        let search = BandwidthSearch {
            mc_samples: b.mc_samples,
            ..BandwidthSearch::new(b.w_lo, b.w_hi, self.seed)
        };
        let solver = BandwidthSolver::new(&params, c.p1, c.p2, &search, self.method.mc())?;
        let mut orders = Vec::new();
        if self.method.mc() {
            orders.push((ReliabilityOrder::Zeroth, "W_order0"));
            orders.push((ReliabilityOrder::First, "W_order1"));
        }
        if self.method.closed() {
            orders.push((ReliabilityOrder::Second, "W_order2"));
        }
        let mut cols = Vec::new();
        for (order, name) in orders {
            let mut values = Vec::with_capacity(self.grid.len());
            for &target in &self.grid {
                match solver.required_bandwidth(target, order, &search) {
                    Ok(w) => values.push(Some(w)),
                    Err(metadist_core::Error::Search(msg)) => {
                        notices.push(format!("{name} at target {target}: {msg}"));
                        values.push(None);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            cols.push(Column::new(name, "Hz", values));
        }
        Ok(cols)
    }

    fn run_thz(&self, t: &ThzFixed, notices: &mut Vec<String>) -> CliResult<Vec<Column>> {
        let n = self.grid.len();
        let mut numeric = Vec::with_capacity(n);
        let mut mc = Vec::with_capacity(n);
        let mut se = Vec::with_capacity(n);
        for &v in &self.grid {
            let (params, p1, p2) = thz_point(t, self.axis, v);
            if self.method.closed() {
                numeric.push(match t.scenario {
                    1 => r2_scenario1(p1, p2, &params, &t.table, t.path)?,
                    _ => r2_scenario2(p1, p2, &params, &t.table, t.path)?,
                });
            }
            if self.method.mc() {
                let est = if self.mc_allowed(p1, notices)? {
                    let model = ThzModel::new(&params, &t.table)?;
                    Some(par_nested_md_estimate(&model, &self.query(params.q(), p1, p2)?, self.seed)?)
                } else {
                    None
                };
                push_estimate(est, &mut mc, &mut se);
            }
        }
        let mut cols = Vec::new();
        if self.method.closed() {
            let name = if t.scenario == 1 { "R_closed" } else { "R_numeric" };
            if self.axis == Axis::Bw {
                // first maximum, as in the bandwidth sweep of the core crate
                let best = numeric
                    .iter()
                    .enumerate()
                    .fold(0, |b, (i, &r)| if r > numeric[b] { i } else { b });
                cols.push(Column::full(name, "1", numeric));
                cols.push(Column::full("argmax", "1", (0..n).map(|i| f64::from(u8::from(i == best))).collect()));
            } else {
                cols.push(Column::full(name, "1", numeric));
            }
        }
        if self.method.mc() {
            cols.push(Column::new("R_mc", "1", mc));
            cols.push(Column::new("stderr", "1", se));
        }
        Ok(cols)
    }
}

fn push_estimate(est: Option<MdEstimate>, values: &mut Vec<Option<f64>>, stderr: &mut Vec<Option<f64>>) {
    values.push(est.as_ref().map(|e| e.value));
    stderr.push(est.map(|e| e.stderr));
}

fn check_unit(name: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} = {v} must lie strictly inside (0, 1)")))
    }
}

pub fn canonical_params(c: &CanonicalFixed) -> CliResult<CanonicalParams> {
    Ok(CanonicalParams::new(c.intensity, c.alpha, c.zeta, c.qos, c.mode)?.with_n_points(c.n_points)?)
}

fn canonical_point(c: &CanonicalFixed, axis: Axis, v: f64) -> CliResult<(CanonicalParams, f64, f64)> {
    let params = canonical_params(c)?;
    Ok(match axis {
        Axis::P1 => (params, v, c.p2),
        Axis::P2 => (params, c.p1, v),
        Axis::Q => (
            CanonicalParams::new(c.intensity, c.alpha, c.zeta, QosSpec::Direct(v), c.mode)?.with_n_points(c.n_points)?,
            c.p1,
            c.p2,
        ),
        _ => (params.with_bandwidth(v)?, c.p1, c.p2),
    })
}

fn thz_point(t: &ThzFixed, axis: Axis, v: f64) -> (ThzParams, f64, f64) {
    match axis {
        Axis::P1 => (t.params, v, t.p2),
        Axis::P2 => (t.params, t.p1, v),
        _ => (t.params.with_band(t.params.f_low, t.params.f_low + v), t.p1, t.p2),
    }
}

/// `start:step:stop` (inclusive, tolerant to rounding) or a comma list.
pub fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let num = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|e| CliError::Usage(format!("grid value `{x}`: {e}")))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, step, b] => {
            let (a, step, b) = (num(a)?, num(step)?, num(b)?);
            if !(step > 0.0) || !(b >= a) {
                return Err(CliError::Usage(format!("grid `{s}` needs step > 0 and stop >= start")));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| a + i as f64 * step).collect())
        }
        [_] => s.split(',').map(num).collect(),
        _ => Err(CliError::Usage(format!("cannot read grid `{s}`"))),
    }
}

pub fn parse_trials(s: &str) -> CliResult<Vec<u64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|e| CliError::Usage(format!("trial count `{x}`: {e}")))
        })
        .collect()
}
