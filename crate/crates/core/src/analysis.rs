//! Optimal input composition, quantum advantage over the hybrid scheme,
//! asymptotic estimates and the loss rate at which the bound falls to the
//! shot-noise limit.
//!
//! The coherent⊗squeezed comparison scheme always uses `|α|² = sinh²r`, so
//! both schemes carry `sinh²r` photons per input mode.

use crate::error::{Error, Result};
use crate::gaussian::{check_loss, check_non_negative, check_param, InputFamily, InterferometerConfig};
use crate::qfi::{hl, qfi_lossless_general, qfi_lossy_cs, qfi_lossy_svac, snl, total_photon_number};
use crate::scalar::Real;
use crate::table::SweepTable;
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

/// Bisection stops once the bracket is narrower than this.
pub const THRESHOLD_WIDTH: f64 = 1e-10;

/// Input scheme compared in the loss analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Squeezed vacuum in both modes.
    SvacPair,
    /// Coherent state in mode `a` (`|α|² = sinh²r`), squeezed vacuum in mode `b`.
    CoherentSqueezed,
}

impl Scheme {
    pub fn tag(self) -> &'static str {
        match self {
            Scheme::SvacPair => "svac-pair",
            Scheme::CoherentSqueezed => "coherent-squeezed",
        }
    }

    pub fn family(self) -> InputFamily {
        match self {
            Scheme::SvacPair => InputFamily::DsvPair,
            Scheme::CoherentSqueezed => InputFamily::CoherentSqueezed,
        }
    }

    /// Coherent amplitude used by the scheme at squeezing `r`.
    pub fn alpha_mag<T: Real>(self, r: T) -> T {
        match self {
            Scheme::SvacPair => T::zero(),
            Scheme::CoherentSqueezed => r.sinh(),
        }
    }

    pub fn config<T: Real>(self, r: T, g: T, loss: T) -> Result<InterferometerConfig<T>> {
        InterferometerConfig::new(self.alpha_mag(r), T::zero(), r, g, T::zero(), loss)
    }

    /// Closed-form QFI of the scheme.
    pub fn qfi<T: Real>(self, r: T, g: T, loss: T) -> Result<T> {
        match self {
            Scheme::SvacPair => qfi_lossy_svac(r, g, loss),
            Scheme::CoherentSqueezed => qfi_lossy_cs(r.sinh(), r, g, loss),
        }
    }

    /// Lossless photon number after the amplifier; equal for both schemes.
    pub fn photons<T: Real>(self, r: T, g: T) -> Result<T> {
        Ok(total_photon_number(&Scheme::SvacPair.config(r, g, T::zero())?))
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownScheme(pub String);

impl fmt::Display for UnknownScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown scheme '{}' (expected svac-pair or coherent-squeezed)", self.0)
    }
}

impl std::error::Error for UnknownScheme {}

impl FromStr for Scheme {
    type Err = UnknownScheme;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "svac-pair" => Ok(Scheme::SvacPair),
            "coherent-squeezed" => Ok(Scheme::CoherentSqueezed),
            other => Err(UnknownScheme(other.to_string())),
        }
    }
}

/// Large-gain, large-squeezing approximations with `G = sinh²g`, `S = sinh²r`
/// and `k = |α|²/S`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticEstimate<T> {
    pub big_g: T,
    pub big_s: T,
    pub k: T,
    pub delta: T,
    /// `4GS(1 + 2k cos²δ)`.
    pub n_approx: T,
    /// `32G²S²(1 + 4k cos²δ)`.
    pub f_approx: T,
}

pub fn asymptotic_estimates<T: Real>(g: T, r: T, k: T, delta: T) -> Result<AsymptoticEstimate<T>> {
    check_non_negative("g", g)?;
    check_non_negative("r", r)?;
    check_non_negative("k", k)?;
    check_param("delta", delta, true, "must be finite")?;
    let l = |x: f64| T::lit(x);
    let (big_g, big_s) = (g.sinh() * g.sinh(), r.sinh() * r.sinh());
    let x = k * delta.cos() * delta.cos();
    Ok(AsymptoticEstimate {
        big_g,
        big_s,
        k,
        delta,
        n_approx: l(4.0) * big_g * big_s * (T::one() + l(2.0) * x),
        f_approx: l(32.0) * big_g * big_g * big_s * big_s * (T::one() + l(4.0) * x),
    })
}

/// One point of the fixed-photon-number sweep over `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioPoint<T> {
    pub k: T,
    pub r: T,
    pub alpha_mag: T,
    pub qfi: T,
    pub photons: T,
    /// `F / N²`.
    pub figure_of_merit: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioSearch<T> {
    pub k_star: T,
    /// Sorted by `k`, ascending.
    pub points: Vec<RatioPoint<T>>,
}

/// The `k` grid: zero followed by `grid_size − 1` log-spaced values in `[1e-3, 10]`.
pub fn ratio_grid<T: Real>(grid_size: usize) -> Vec<T> {
    let n = grid_size.saturating_sub(1);
    let (lo, hi) = (T::lit(1e-3).ln(), T::lit(10.0).ln());
    std::iter::once(T::zero())
        .chain((0..n).map(|i| {
            let t = if n > 1 { T::lit(i as f64) / T::lit((n - 1) as f64) } else { T::zero() };
            (lo + (hi - lo) * t).exp()
        }))
        .collect()
}

/// Searches the displacement/squeezing split at fixed input photon number
/// `n_in = 2(|α|² + sinh²r)` and `δ = 0`, scoring exact `F/N²`.
pub fn optimal_ratio_search<T: Real>(g: T, n_in: T, grid_size: usize) -> Result<RatioSearch<T>> {
    check_non_negative("g", g)?;
    check_param("n_in", n_in, n_in > T::zero(), "must be positive")?;
    if grid_size < 3 {
        return Err(Error::InvalidParameter { name: "grid_size", value: grid_size as f64, reason: "must be at least 3" });
    }
    let points = ratio_grid::<T>(grid_size)
        .into_par_iter()
        .map(|k| {
            let s = n_in / (T::lit(2.0) * (T::one() + k));
            let r = s.sqrt().asinh();
            let alpha_mag = (k * s).sqrt();
            let qfi = qfi_lossless_general(alpha_mag, T::zero(), r, g)?;
            let photons = total_photon_number(&InterferometerConfig::new(alpha_mag, T::zero(), r, g, T::zero(), T::zero())?);
            Ok(RatioPoint { k, r, alpha_mag, qfi, photons, figure_of_merit: qfi / (photons * photons) })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = points
        .iter()
        .fold(&points[0], |best, p| if p.figure_of_merit > best.figure_of_merit { p } else { best });
    Ok(RatioSearch { k_star: best.k, points })
}

/// `A_Q = F_{S⊗S} / F_{C⊗S} − 1` at loss `L`.
pub fn quantum_advantage<T: Real>(r: T, g: T, loss: T) -> Result<T> {
    check_param("r", r, r > T::zero(), "must be positive")?;
    check_param("g", g, g > T::zero(), "must be positive")?;
    check_loss(loss)?;
    check_param("loss", loss, loss < T::one(), "must be below 1")?;
    let pure = Scheme::SvacPair.qfi(r, g, loss)?;
    let hybrid = Scheme::CoherentSqueezed.qfi(r, g, loss)?;
    if hybrid == T::zero() {
        return Err(Error::DegenerateDenominator { which: "coherent-squeezed QFI" });
    }
    Ok(pure / hybrid - T::one())
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdvantageCurve<T> {
    /// `(L, A_Q)` in grid order.
    pub points: Vec<(T, T)>,
}

impl<T: Real> AdvantageCurve<T> {
    pub fn sign_changes(&self) -> usize {
        self.points.windows(2).filter(|w| (w[0].1 > T::zero()) != (w[1].1 > T::zero())).count()
    }
}

pub fn advantage_curve<T: Real>(r: T, g: T, l_grid: &[T]) -> Result<AdvantageCurve<T>> {
    let points = l_grid
        .par_iter()
        .map(|&l| Ok((l, quantum_advantage(r, g, l)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(AdvantageCurve { points })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdResult<T> {
    /// Loss rate where the QFI meets the shot-noise limit.
    pub l_star: T,
    pub bracket_width: T,
    pub evaluations: usize,
}

/// Bisects `QFI(L) = N` on `[0, 1]`, with `N` the lossless photon number.
pub fn loss_threshold<T: Real>(r: T, g: T, scheme: Scheme) -> Result<ThresholdResult<T>> {
    check_param("r", r, r > T::zero(), "must be positive")?;
    check_param("g", g, g > T::zero(), "must be positive")?;
    let n = snl(scheme.photons(r, g)?);
    let above = |l: T| -> Result<bool> { Ok(scheme.qfi(r, g, l)? > n) };
    let f0 = scheme.qfi(r, g, T::zero())?;
    if f0 <= n {
        return Err(Error::NoCrossing { qfi_at_zero: f0.to_f64_lossy(), photons: n.to_f64_lossy() });
    }
    let (mut lo, mut hi) = (T::zero(), T::one());
    let mut evaluations = 1;
    let half = T::lit(0.5);
    while hi - lo >= T::lit(THRESHOLD_WIDTH) {
        let mid = (lo + hi) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        evaluations += 1;
        if above(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdResult { l_star: (lo + hi) * half, bracket_width: hi - lo, evaluations })
}

/// Evenly spaced grid of `steps` points from `lo` to `hi` inclusive.
pub fn linspace<T: Real>(lo: T, hi: T, steps: usize) -> Vec<T> {
    match steps {
        0 => vec![],
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| if i == steps - 1 { hi } else { lo + (hi - lo) * T::lit(i as f64) / T::lit((steps - 1) as f64) })
            .collect(),
    }
}

/// Columns `L, qfi, snl, hl`, with benchmarks fixed at the lossless `N`.
pub fn scan_loss<T: Real>(r: T, g: T, l_grid: &[T], scheme: Scheme) -> Result<SweepTable> {
    for &l in l_grid {
        check_loss(l)?;
    }
    let n = scheme.photons(r, g)?;
    let qfis = l_grid.par_iter().map(|&l| scheme.qfi(r, g, l)).collect::<Result<Vec<_>>>()?;
    let mut table = SweepTable::new(["L", "qfi", "snl", "hl"])
        .with_meta("scheme", scheme)
        .with_meta("r", r.to_f64_lossy())
        .with_meta("g", g.to_f64_lossy())
        .with_meta("alpha", scheme.alpha_mag(r).to_f64_lossy())
        .with_meta("photons", n.to_f64_lossy());
    for (&l, &f) in l_grid.iter().zip(&qfis) {
        let row = [l, f, snl(n), hl(n)].map(|x| x.to_f64_lossy());
        table
            .push_row(row.to_vec())
            .map_err(|_| Error::InvalidState("finite table entries"))?;
    }
    Ok(table)
}

/// Indices `i` where the sign of `values[i] − level` differs from `values[i+1] − level`.
pub fn crossings(values: &[f64], level: impl Fn(usize) -> f64) -> Vec<usize> {
    (0..values.len().saturating_sub(1))
        .filter(|&i| (values[i] > level(i)) != (values[i + 1] > level(i + 1)))
        .collect()
}
