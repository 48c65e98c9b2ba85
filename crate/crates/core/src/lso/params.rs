use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::geometry::{FRAC_BITS, MAX_DIM};

/// Which family a parameter set describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Classic,
    Gap,
}

/// How fine the ε-quadtree grid is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Resolution {
    /// The grid the accuracy guarantee asks for.
    #[default]
    Theorem,
    /// The theorem grid, but with at most `2^k` cells per axis.
    MaxLambda(u32),
    /// [`Resolution::MaxLambda`] with [`desk_lambda`] for the dimension.
    DeskScale,
}

/// Largest `λ` used by [`Resolution::DeskScale`]: grids of at most 1024,
/// 64, 16 and 8 cells per axis in dimensions 1, 2, 3 and higher.
pub fn desk_lambda(d: usize) -> u32 {
    match d {
        1 => 10,
        2 => 6,
        3 => 4,
        _ => 3,
    }
}

/// Parameters of a family: accuracy `eps`, gap constant `gamma`, the grid of
/// `side = 2^lambda` cells per axis, the gap scale `alpha` and the `big_d + 1`
/// diagonal shifts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LsoParams {
    pub kind: FamilyKind,
    pub eps: f64,
    /// `None` for classic families.
    pub gamma: Option<f64>,
    pub d: usize,
    pub lambda: u32,
    /// `λ` before any [`Resolution`] cap.
    pub theorem_lambda: u32,
    pub side: usize,
    pub alpha: usize,
    pub big_d: usize,
}

/// Denominator of the classic threshold `2^-λ ≤ ε / denominator`.
pub fn classic_denominator(d: usize) -> f64 {
    4.0 * (d as f64 + 1.0) * (d as f64).sqrt()
}

fn check_common(eps: f64, d: usize) -> Result<()> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::Dimension(d));
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(param(format!("eps must be in (0, 1/2], got {eps}")));
    }
    Ok(())
}

/// Smallest `λ ≥ 1` with `2^-λ < bound` (strict) or `≤ bound`.
fn min_lambda(bound: f64, strict: bool) -> u32 {
    let mut lambda = 1;
    loop {
        let e = 0.5f64.powi(lambda as i32);
        if (strict && e < bound) || (!strict && e <= bound) {
            return lambda;
        }
        lambda += 1;
    }
}

fn gap_alpha(gamma: f64, side: usize, d: usize) -> usize {
    let a = (gamma * side as f64 / (2.0 * (d * d) as f64)).floor() as usize;
    a.clamp(1, side)
}

impl LsoParams {
    /// Gap family: `λ` minimal with `2^-λ < ε/(4d²)`,
    /// `α = max(1, ⌊γƐ/(2d²)⌋)`.
    ///
    /// `gamma` may be anything in `(0, 1/2]`; values below `eps` are allowed.
    pub fn gap(eps: f64, gamma: f64, d: usize) -> Result<Self> {
        check_common(eps, d)?;
        if !(gamma > 0.0 && gamma <= 0.5) {
            return Err(param(format!("gamma must be in (0, 1/2], got {gamma}")));
        }
        let lambda = min_lambda(eps / (4.0 * (d * d) as f64), true);
        Self::assemble(FamilyKind::Gap, eps, Some(gamma), d, lambda, lambda)
    }

    /// Classic family: `λ` minimal with `2^-λ ≤ ε/(4(d+1)√d)`.
    pub fn classic(eps: f64, d: usize) -> Result<Self> {
        Self::classic_with_denominator(eps, d, classic_denominator(d))
    }

    pub fn classic_with_denominator(eps: f64, d: usize, denominator: f64) -> Result<Self> {
        check_common(eps, d)?;
        if !(denominator >= 1.0) {
            return Err(param(format!("threshold denominator {denominator} below 1")));
        }
        let lambda = min_lambda(eps / denominator, false);
        Self::assemble(FamilyKind::Classic, eps, None, d, lambda, lambda)
    }

    fn assemble(
        kind: FamilyKind,
        eps: f64,
        gamma: Option<f64>,
        d: usize,
        lambda: u32,
        theorem_lambda: u32,
    ) -> Result<Self> {
        if lambda == 0 || lambda > FRAC_BITS {
            return Err(param(format!("lambda {lambda} out of range")));
        }
        let side = 1usize
            .checked_shl(lambda)
            .filter(|_| (lambda as usize) * d <= 40)
            .ok_or_else(|| Error::TooLarge(format!("grid of 2^{lambda} cells per axis in d = {d}")))?;
        let alpha = match gamma {
            Some(g) => gap_alpha(g, side, d),
            None => 1,
        };
        Ok(Self {
            kind,
            eps,
            gamma,
            d,
            lambda,
            theorem_lambda,
            side,
            alpha,
            big_d: 2 * d.div_ceil(2),
        })
    }

    /// The same family at a coarser grid.
    pub fn with_resolution(&self, res: Resolution) -> Result<Self> {
        let cap = match res {
            Resolution::Theorem => return Ok(self.clone()),
            Resolution::MaxLambda(k) => k,
            Resolution::DeskScale => desk_lambda(self.d),
        };
        if cap == 0 {
            return Err(param("lambda cap must be positive"));
        }
        let lambda = self.theorem_lambda.min(cap);
        Self::assemble(self.kind, self.eps, self.gamma, self.d, lambda, self.theorem_lambda)
    }

    /// Rebuilds parameters read back from storage, checking they are coherent.
    pub fn from_stored(
        kind: FamilyKind,
        eps: f64,
        gamma: Option<f64>,
        d: usize,
        lambda: u32,
        theorem_lambda: u32,
    ) -> Result<Self> {
        check_common(eps, d)?;
        if lambda > theorem_lambda {
            return Err(param("lambda above the theorem value"));
        }
        Self::assemble(kind, eps, gamma, d, lambda, theorem_lambda)
    }

    /// Number of shifts, `D + 1`.
    pub fn shift_count(&self) -> usize {
        self.big_d + 1
    }

    /// The rounded accuracy `ε' = 2^-λ`.
    pub fn eps_prime(&self) -> f64 {
        0.5f64.powi(self.lambda as i32)
    }

    /// Shift `i` at `frac_bits` bits: every coordinate is `⌊i·2^W/(D+1)⌋`.
    pub fn shift(&self, i: usize, frac_bits: u32) -> Vec<u64> {
        vec![shift_word(i, self.big_d, frac_bits); self.d]
    }
}

pub(crate) fn shift_word(i: usize, big_d: usize, frac_bits: u32) -> u64 {
    ((i as u128) << frac_bits).checked_div(big_d as u128 + 1).unwrap_or(0) as u64
}
