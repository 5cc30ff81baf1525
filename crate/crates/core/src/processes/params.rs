use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::saigo::SaigoParams;

/// Process family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Classical,
    /// Time-fractional.
    Tfpp,
    /// Space-fractional.
    Sfpp,
    /// Space-time-fractional.
    Stfpp,
    /// Saigo space-time-fractional.
    Sstfpp,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Classical,
        Variant::Tfpp,
        Variant::Sfpp,
        Variant::Stfpp,
        Variant::Sstfpp,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Classical => "classical",
            Variant::Tfpp => "tfpp",
            Variant::Sfpp => "sfpp",
            Variant::Stfpp => "stfpp",
            Variant::Sstfpp => "sstfpp",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParams(format!("unknown variant '{s}'")))
    }
}

/// Parameters `(λ, α, ν, β, γ)` of a process together with its variant.
///
/// Constraints: `λ > 0`, `0 < α, ν ≤ 1`, `β < 0`. The variant pins the
/// remaining relations: classical `α = ν = 1, β = −1`; TFPP `ν = 1,
/// β = −α`; SFPP `α = 1, β = −1`; STFPP `β = −α`; SSTFPP general, with
/// `1+γ−β > 0` and `1+γ+α > 0` so every `C_k` factor is defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalParams {
    pub variant: Variant,
    pub lambda: f64,
    pub alpha: f64,
    pub nu: f64,
    pub beta: f64,
    pub gamma_p: f64,
}

impl FractionalParams {
    pub fn new(variant: Variant, lambda: f64, alpha: f64, nu: f64, beta: f64, gamma_p: f64) -> Result<Self> {
        let p = FractionalParams {
            variant,
            lambda,
            alpha,
            nu,
            beta,
            gamma_p,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn classical(lambda: f64) -> Result<Self> {
        Self::new(Variant::Classical, lambda, 1.0, 1.0, -1.0, 0.0)
    }

    pub fn tfpp(lambda: f64, alpha: f64) -> Result<Self> {
        Self::new(Variant::Tfpp, lambda, alpha, 1.0, -alpha, 0.0)
    }

    pub fn sfpp(lambda: f64, nu: f64) -> Result<Self> {
        Self::new(Variant::Sfpp, lambda, 1.0, nu, -1.0, 0.0)
    }

    pub fn stfpp(lambda: f64, alpha: f64, nu: f64) -> Result<Self> {
        Self::new(Variant::Stfpp, lambda, alpha, nu, -alpha, 0.0)
    }

    pub fn sstfpp(lambda: f64, alpha: f64, beta: f64, gamma_p: f64, nu: f64) -> Result<Self> {
        Self::new(Variant::Sstfpp, lambda, alpha, nu, beta, gamma_p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        let values = [self.lambda, self.alpha, self.nu, self.beta, self.gamma_p];
        if values.iter().any(|v| !v.is_finite()) {
            return bad("parameters must be finite".into());
        }
        if !(self.lambda > 0.0) {
            return bad(format!("lambda must be positive, got {}", self.lambda));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return bad(format!("nu must lie in (0, 1], got {}", self.nu));
        }
        if !(self.beta < 0.0) {
            return bad(format!("beta must be negative, got {}", self.beta));
        }
        let v = self.variant;
        let rl = self.beta == -self.alpha;
        match v {
            Variant::Classical if !(self.alpha == 1.0 && self.nu == 1.0 && rl) => {
                bad("classical process needs alpha = nu = 1, beta = -1".into())
            }
            Variant::Tfpp if !(self.nu == 1.0 && rl) => bad("tfpp needs nu = 1, beta = -alpha".into()),
            Variant::Sfpp if !(self.alpha == 1.0 && rl) => bad("sfpp needs alpha = 1, beta = -1".into()),
            Variant::Stfpp if !rl => bad("stfpp needs beta = -alpha".into()),
            Variant::Sstfpp if !(1.0 + self.gamma_p - self.beta > 0.0 && 1.0 + self.gamma_p + self.alpha > 0.0) => {
                bad(format!(
                    "sstfpp needs 1+gamma-beta > 0 and 1+gamma+alpha > 0 (gamma = {}, beta = {})",
                    self.gamma_p, self.beta
                ))
            }
            _ => Ok(()),
        }
    }

    /// Saigo parameters `(α, β, γ)` of the time operator.
    pub fn saigo(&self) -> SaigoParams {
        SaigoParams {
            alpha: self.alpha,
            beta: self.beta,
            gamma_p: self.gamma_p,
        }
    }

    /// `true` when the time operator is Riemann-Liouville (`β = −α`).
    pub fn is_riemann_liouville(&self) -> bool {
        self.beta == -self.alpha
    }

    /// The series argument `λ^ν t^{−β}`.
    pub fn series_argument(&self, t: f64) -> f64 {
        self.lambda.powf(self.nu) * t.powf(-self.beta)
    }
}
