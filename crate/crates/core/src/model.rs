//! Rare-event models: which sum exceeds which threshold.

use crate::compound::CompoundModel;
use crate::distributions::JumpLaw;
use crate::error::{Error, Result};

/// Fixed-dimension model: d i.i.d. jumps, event {x_1 + ... + x_d > γ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedSumModel {
    pub law: JumpLaw,
    pub d: usize,
    pub gamma: f64,
}

impl FixedSumModel {
    pub fn new(law: JumpLaw, d: usize, gamma: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension d must be at least 1".into()));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "threshold gamma must be positive and finite, got {gamma}"
            )));
        }
        if d as f64 * law.support_max() <= gamma {
            return Err(Error::InvalidParameter(format!(
                "event is empty: {d} jumps bounded by {} cannot exceed {gamma}",
                law.support_max()
            )));
        }
        Ok(FixedSumModel { law, d, gamma })
    }

    #[inline]
    pub fn sum(&self, x: &[f64]) -> f64 {
        x.iter().sum()
    }

    #[inline]
    pub fn event(&self, x: &[f64]) -> bool {
        self.sum(x) > self.gamma
    }

    /// ln Π f(x_i).
    pub fn ln_joint_density(&self, x: &[f64]) -> f64 {
        x.iter().map(|&xi| self.law.ln_density(xi)).sum()
    }
}

/// Either of the two shipped model variants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RareEventModel {
    FixedSum(FixedSumModel),
    Compound(CompoundModel),
}

impl RareEventModel {
    pub fn gamma(&self) -> f64 {
        match self {
            RareEventModel::FixedSum(m) => m.gamma,
            RareEventModel::Compound(m) => m.gamma,
        }
    }

    pub fn law(&self) -> JumpLaw {
        match self {
            RareEventModel::FixedSum(m) => m.law,
            RareEventModel::Compound(m) => m.jump_law,
        }
    }
}
