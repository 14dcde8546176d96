//! Hybrid one-dimensional chaotic maps and the quantizer that turns their
//! orbits into integer keystreams.
//!
//! Two maps are provided:
//!
//! * the logistic-tent map on `[0, 1)`:
//!   `x < 0.5`: `(r x (1 - x) + (4 - r) x / 2) mod 1`,
//!   `x >= 0.5`: `(r x (1 - x) + (4 - r) (1 - x) / 2) mod 1`, with `r` in `(0, 4]`;
//! * the logistic-sine-cosine map on `[-1, 1]`:
//!   `cos(pi (4 r x (1 - x) + (1 - r) sin(pi x) - 0.5))`, with `r` in `[0, 1]`.
//!
//! All arithmetic is IEEE-754 binary64. Orbits are emitted starting at the
//! first iterate after the seed, with no warm-up discard.

use crate::error::{Error, Result};

/// Scale applied to every iterate before rounding to an integer.
pub const QUANTIZE_SCALE: f64 = 1e14;

/// Control parameters of the two maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams {
    r_lt: f64,
    r_lsc: f64,
}

impl MapParams {
    pub const DEFAULT_R_LT: f64 = 3.99;
    pub const DEFAULT_R_LSC: f64 = 0.5;

    pub fn new(r_lt: f64, r_lsc: f64) -> Result<Self> {
        check_r_lt(r_lt)?;
        check_r_lsc(r_lsc)?;
        Ok(MapParams { r_lt, r_lsc })
    }

    pub fn r_lt(&self) -> f64 {
        self.r_lt
    }

    pub fn r_lsc(&self) -> f64 {
        self.r_lsc
    }
}

impl Default for MapParams {
    fn default() -> Self {
        MapParams {
            r_lt: Self::DEFAULT_R_LT,
            r_lsc: Self::DEFAULT_R_LSC,
        }
    }
}

fn check_r_lt(r: f64) -> Result<()> {
    if r > 0.0 && r <= 4.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "logistic-tent r must lie in (0, 4], got {r}"
        )))
    }
}

fn check_r_lsc(r: f64) -> Result<()> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "logistic-sine-cosine r must lie in [0, 1], got {r}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    LogisticTent,
    LogisticSineCosine,
}

#[inline]
fn lt_step_unchecked(x: f64, r: f64) -> f64 {
    let tent = if x < 0.5 {
        (4.0 - r) * x / 2.0
    } else {
        (4.0 - r) * (1.0 - x) / 2.0
    };
    let v = r * x * (1.0 - x) + tent;
    v - v.floor()
}

#[inline]
fn lsc_step_unchecked(x: f64, r: f64) -> f64 {
    use std::f64::consts::PI;
    (PI * (4.0 * r * x * (1.0 - x) + (1.0 - r) * (PI * x).sin() - 0.5)).cos()
}

/// One iterate of the logistic-tent map.
pub fn lt_step(x: f64, r: f64) -> Result<f64> {
    check_r_lt(r)?;
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Parameter(format!(
            "logistic-tent state must lie in [0, 1), got {x}"
        )));
    }
    Ok(lt_step_unchecked(x, r))
}

/// One iterate of the logistic-sine-cosine map. Total in `x`.
pub fn lsc_step(x: f64, r: f64) -> Result<f64> {
    check_r_lsc(r)?;
    if !x.is_finite() {
        return Err(Error::Parameter(format!(
            "logistic-sine-cosine state must be finite, got {x}"
        )));
    }
    Ok(lsc_step_unchecked(x, r))
}

/// A finite orbit `x_1 ..= x_n` of one of the maps, together with its seed.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaoticSequence {
    seed: f64,
    kind: MapKind,
    values: Vec<f64>,
}

impl ChaoticSequence {
    pub fn seed(&self) -> f64 {
        self.seed
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Iterates `kind` from `x0` and returns the `n` iterates that follow it.
pub fn generate(x0: f64, r: f64, n: usize, kind: MapKind) -> Result<ChaoticSequence> {
    if n == 0 {
        return Err(Error::Parameter(
            "sequence length must be at least 1".into(),
        ));
    }
    let step: fn(f64, f64) -> f64 = match kind {
        MapKind::LogisticTent => {
            // validates r and x0 once; the loop then stays in [0, 1)
            lt_step(x0, r)?;
            lt_step_unchecked
        }
        MapKind::LogisticSineCosine => {
            lsc_step(x0, r)?;
            lsc_step_unchecked
        }
    };
    let mut values = Vec::with_capacity(n);
    let mut x = x0;
    for _ in 0..n {
        x = step(x, r);
        values.push(x);
    }
    Ok(ChaoticSequence {
        seed: x0,
        kind,
        values,
    })
}

/// `round(x * 10^14)` (half away from zero), reduced with a non-negative
/// remainder modulo `modulus`.
#[inline]
pub fn quantize_value(x: f64, modulus: u32) -> u32 {
    debug_assert!(modulus >= 2);
    // |x| <= 1 keeps the rounded value below 2^53, so the cast is exact
    let scaled = (x * QUANTIZE_SCALE).round() as i64;
    scaled.rem_euclid(i64::from(modulus)) as u32
}

/// Quantizes every iterate of `seq` into `[0, modulus)`.
pub fn quantize(seq: &ChaoticSequence, modulus: u32) -> Result<Vec<u32>> {
    if modulus < 2 {
        return Err(Error::Parameter(format!(
            "quantization modulus must be at least 2, got {modulus}"
        )));
    }
    Ok(seq
        .values
        .iter()
        .map(|&x| quantize_value(x, modulus))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn lt_step_examples() {
        assert_eq!(lt_step(0.25, 4.0).unwrap(), 0.75);
        assert_eq!(lt_step(0.0, 2.7).unwrap(), 0.0);
        assert!((lt_step(0.3, 3.5).unwrap() - 0.81).abs() < 1e-12);
        assert_eq!(lt_step(0.5, 4.0).unwrap(), 0.0);
    }

    #[test]
    fn lt_step_domain() {
        assert!(lt_step(1.0, 3.9).is_err());
        assert!(lt_step(-0.1, 3.9).is_err());
        assert!(lt_step(0.2, 0.0).is_err());
        assert!(lt_step(0.2, 4.000001).is_err());
        assert!(lt_step(0.2, f64::NAN).is_err());
    }

    #[test]
    fn lsc_step_examples() {
        assert!(lsc_step(0.0, 0.3).unwrap().abs() < 1e-15);
        assert!((lsc_step(0.25, 1.0).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(lsc_step(0.5, 0.0).unwrap().abs() < 1e-15);
        assert!(lsc_step(0.5, 1.5).is_err());
        assert!(lsc_step(0.5, -0.1).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(MapParams::new(4.0, 0.0).is_ok());
        assert!(MapParams::new(4.0, 1.0).is_ok());
        assert!(MapParams::new(0.0, 0.5).is_err());
        assert!(MapParams::new(5.0, 0.5).is_err());
        assert!(MapParams::new(3.99, 1.01).is_err());
        let d = MapParams::default();
        assert_eq!((d.r_lt(), d.r_lsc()), (3.99, 0.5));
    }

    #[test]
    fn generate_examples() {
        let s = generate(0.0, 3.9, 5, MapKind::LogisticTent).unwrap();
        assert_eq!(s.values(), &[0.0; 5]);
        assert_eq!(s.seed(), 0.0);

        let s = generate(0.25, 4.0, 2, MapKind::LogisticTent).unwrap();
        assert_eq!(s.values(), &[0.75, 0.75]);

        let s = generate(0.25, 1.0, 1, MapKind::LogisticSineCosine).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.values()[0] - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn generate_rejects_empty_and_bad_seed() {
        assert!(generate(0.1, 3.9, 0, MapKind::LogisticTent).is_err());
        assert!(generate(1.5, 3.9, 4, MapKind::LogisticTent).is_err());
        assert!(generate(0.1, 2.0, 4, MapKind::LogisticSineCosine).is_err());
    }

    #[test]
    fn seed_is_not_emitted() {
        let s = generate(0.1, 3.99, 3, MapKind::LogisticTent).unwrap();
        assert_eq!(s.values()[0], lt_step(0.1, 3.99).unwrap());
    }

    #[test]
    fn quantize_examples() {
        assert_eq!(quantize_value(0.5, 3), 2);
        assert_eq!(quantize_value(0.5, 256), 0);
        assert_eq!(quantize_value(0.0, 256), 0);
        assert_eq!(quantize_value(-0.5, 256), 0);
        assert_eq!(quantize_value(-3e-14, 256), 253);
    }

    #[test]
    fn quantize_rejects_small_modulus() {
        let s = generate(0.1, 3.99, 3, MapKind::LogisticTent).unwrap();
        assert!(quantize(&s, 1).is_err());
    }

    #[test]
    fn generate_is_deterministic() {
        let a = generate(0.123, 3.99, 4096, MapKind::LogisticTent).unwrap();
        let b = generate(0.123, 3.99, 4096, MapKind::LogisticTent).unwrap();
        assert!(a
            .values()
            .iter()
            .zip(b.values())
            .all(|(x, y)| x.to_bits() == y.to_bits()));
        let a = generate(0.123, 0.5, 4096, MapKind::LogisticSineCosine).unwrap();
        let b = generate(0.123, 0.5, 4096, MapKind::LogisticSineCosine).unwrap();
        assert!(a
            .values()
            .iter()
            .zip(b.values())
            .all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn orbit_sensitivity_to_seed() {
        let n = 65536;
        let x0 = 0.1234567;
        let a = generate(x0, 3.99, n, MapKind::LogisticTent).unwrap();
        let b = generate(x0 + 1e-10, 3.99, n, MapKind::LogisticTent).unwrap();
        let qa = quantize(&a, 256).unwrap();
        let qb = quantize(&b, 256).unwrap();
        let tail = n - 100;
        let differing = qa[100..]
            .iter()
            .zip(&qb[100..])
            .filter(|(x, y)| x != y)
            .count();
        assert!(
            differing as f64 >= 0.99 * tail as f64,
            "only {differing} of {tail} positions differ"
        );
    }

    #[test]
    fn range_containment_million_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1_000_000 {
            let x: f64 = rng.gen_range(0.0..1.0);
            let r_lt: f64 = rng.gen_range(f64::EPSILON..=4.0);
            let y = lt_step(x, r_lt).unwrap();
            assert!((0.0..1.0).contains(&y), "lt_step({x}, {r_lt}) = {y}");

            let x: f64 = rng.gen_range(-1.0..=1.0);
            let r_lsc: f64 = rng.gen_range(0.0..=1.0);
            let y = lsc_step(x, r_lsc).unwrap();
            assert!((-1.0..=1.0).contains(&y), "lsc_step({x}, {r_lsc}) = {y}");
        }
    }

    proptest! {
        #[test]
        fn quantize_stays_in_range(x in -1.0f64..=1.0, modulus in 2u32..=1024) {
            let v = quantize_value(x, modulus);
            prop_assert!(v < modulus);
        }

        #[test]
        fn sequences_stay_in_range(x0 in 0.0f64..1.0, r_lt in 0.01f64..=4.0, r_lsc in 0.0f64..=1.0) {
            let lt = generate(x0, r_lt, 256, MapKind::LogisticTent).unwrap();
            prop_assert!(lt.values().iter().all(|v| (0.0..1.0).contains(v)));
            let lsc = generate(x0, r_lsc, 256, MapKind::LogisticSineCosine).unwrap();
            prop_assert!(lsc.values().iter().all(|v| (-1.0..=1.0).contains(v)));
        }
    }
}
