use rand::Rng;
use rand_distr::Distribution;
#[allow(unused_imports)] // method resolution without std
use num_traits::Float;

use super::{geometric_gain, AbsorptionTable, CarrierDistribution, ThzParams};
use crate::error::{Error, Result};
use crate::mdcore::{nested_md_estimate, LayeredModel, MdEstimate, MdQuery};
use crate::specfun::marcum_q1;
use crate::stochgeom::{sample_nearest_distance, RicianPower};

/// The THz model as a layered Monte Carlo model: nearest-BS distance (layer
/// 2), carrier frequency (layer 1) and Rician fading (layer 0).
#[derive(Debug, Clone)]
pub struct ThzModel<'a> {
    params: ThzParams,
    table: &'a AbsorptionTable,
    carrier: CarrierDistribution,
    fading: RicianPower,
    c1: f64,
    fixed_radius: Option<f64>,
}

/// Realized distance, carrier and SNR.
#[derive(Debug, Clone, Copy, Default)]
pub struct ThzState {
    pub r: f64,
    pub f: f64,
    /// `c₁ f² r² e^{k(f) r}`: the fading power at which SNR equals 1.
    pub path_loss: f64,
    pub snr: f64,
}

impl<'a> ThzModel<'a> {
    pub fn new(params: &ThzParams, table: &'a AbsorptionTable) -> Result<Self> {
        params.validate()?;
        table.require_covers(params.f_low, params.f_high)?;
        Ok(Self {
            params: *params,
            table,
            carrier: params.carrier()?,
            fading: RicianPower::new(params.rician_k)?,
            c1: params.c1(),
            fixed_radius: None,
        })
    }

    /// Pins the distance layer to `r` instead of sampling it.
    pub fn with_fixed_radius(mut self, r: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::Config("fixed radius must be finite and non-negative".into()));
        }
        self.fixed_radius = Some(r);
        Ok(self)
    }
}

impl LayeredModel for ThzModel<'_> {
    type State = ThzState;

    fn layers(&self) -> usize {
        3
    }

    fn new_state(&self) -> ThzState {
        ThzState::default()
    }

    fn sample_layer<R: Rng + ?Sized>(&self, layer: usize, s: &mut ThzState, rng: &mut R) {
        match layer {
            0 => {
                let h = self.fading.sample(rng);
                s.snr = if s.path_loss > 0.0 {
                    h / s.path_loss
                } else {
                    f64::INFINITY
                };
            }
            1 => {
                s.f = self.carrier.sample(rng);
                let g = geometric_gain(s.f, s.r, self.table.k_unchecked(s.f));
                s.path_loss = self.c1 * g * g;
            }
            _ => {
                s.r = match self.fixed_radius {
                    Some(r) => r,
                    None => sample_nearest_distance(self.params.intensity, rng),
                };
            }
        }
    }

    fn qos(&self, s: &ThzState) -> f64 {
        s.snr
    }

    /// Rician ccdf `Q₁(√(2K), √(2(K+1) q c₁ f² r² e^{kr}))`.
    fn conditional_success(&self, s: &ThzState, q: f64) -> Option<f64> {
        let b = (2.0 * (self.params.rician_k + 1.0) * q * s.path_loss).sqrt();
        if !b.is_finite() {
            return Some(0.0);
        }
        marcum_q1(self.params.marcum_a(), b).ok()
    }
}

/// Second-order reliability of the THz model by nested Monte Carlo; the QoS
/// threshold is taken from `query`.
pub fn run_thz_mc(params: &ThzParams, table: &AbsorptionTable, query: &MdQuery, seed: u64) -> Result<MdEstimate> {
    if query.order() != 2 {
        return Err(Error::Config("the THz model needs a second-order query".into()));
    }
    nested_md_estimate(&ThzModel::new(params, table)?, query, seed)
}
