//! Network instances: geometry, free-space channel gains and power budgets.
//!
//! Everything inside the solvers is in linear watts; dBm only appears in
//! [`SystemParams`] and at the report boundary.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Speed of light used for the carrier wavelength (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.998e8;

/// Users closer than this to any BS are re-drawn (m).
pub const MIN_LINK_DISTANCE_M: f64 = 1.0;

/// A point in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Physical parameters shared by every trial of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub bandwidth_hz: f64,
    pub carrier_hz: f64,
    pub noise_psd_dbm_hz: f64,
    pub max_power_dbm: f64,
    pub area_side_m: f64,
}

impl Default for SystemParams {
    /// 1 MHz at 1800 MHz, -174 dBm/Hz noise, 23 dBm users, 2500 m square.
    fn default() -> Self {
        Self {
            bandwidth_hz: 1e6,
            carrier_hz: 1.8e9,
            noise_psd_dbm_hz: -174.0,
            max_power_dbm: 23.0,
            area_side_m: 2500.0,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let positive =
            [("bandwidth_hz", self.bandwidth_hz), ("carrier_hz", self.carrier_hz), ("area_side_m", self.area_side_m)];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {value}")));
            }
        }
        if !self.noise_psd_dbm_hz.is_finite() || !self.max_power_dbm.is_finite() {
            return Err(Error::InvalidArgument("dBm quantities must be finite".into()));
        }
        let noise = self.noise_w();
        if !(noise > 0.0 && noise.is_finite()) {
            return Err(Error::InvalidArgument(format!("noise power {noise} W is not positive")));
        }
        Ok(())
    }

    /// Per-BS noise power σ² in watts.
    pub fn noise_w(&self) -> f64 {
        noise_power(self.noise_psd_dbm_hz, self.bandwidth_hz)
    }

    /// Per-user power cap in watts.
    pub fn max_power_w(&self) -> f64 {
        dbm_to_watts(self.max_power_dbm)
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * (watts * 1e3).log10()
}

/// Thermal noise power over `bandwidth_hz` for a PSD given in dBm/Hz.
pub fn noise_power(psd_dbm_hz: f64, bandwidth_hz: f64) -> f64 {
    dbm_to_watts(psd_dbm_hz + 10.0 * bandwidth_hz.log10())
}

/// Free-space amplitude gain `λ / (4π d)`.
pub fn free_space_gain(distance_m: f64, carrier_hz: f64) -> Result<f64> {
    if distance_m.is_nan() || distance_m <= 0.0 {
        return Err(Error::InvalidArgument(format!("free-space gain needs a positive distance, got {distance_m}")));
    }
    Ok(SPEED_OF_LIGHT / carrier_hz / (4.0 * std::f64::consts::PI * distance_m))
}

/// A fully specified uplink network. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkInstance {
    pub bs_positions: Vec<Point>,
    pub user_positions: Vec<Point>,
    /// Per-user power cap (W).
    pub max_power_w: Vec<f64>,
    /// |h_{u,b}|², indexed (user, BS).
    pub gain2: Array2<f64>,
    /// Per-BS noise power σ²_b (W).
    pub noise_w: Vec<f64>,
    pub bandwidth_hz: f64,
}

impl NetworkInstance {
    /// Builds an instance from explicit positions using the free-space model.
    ///
    /// Every user gets the same power cap and every BS the same noise power.
    pub fn from_positions(params: &SystemParams, bs_positions: Vec<Point>, user_positions: Vec<Point>) -> Result<Self> {
        params.validate()?;
        if bs_positions.is_empty() {
            return Err(Error::InvalidArgument("an instance needs at least one BS".into()));
        }
        let mut gain2 = Array2::zeros((user_positions.len(), bs_positions.len()));
        for (u, up) in user_positions.iter().enumerate() {
            for (b, bp) in bs_positions.iter().enumerate() {
                let distance = up.distance(bp);
                if distance <= 0.0 {
                    return Err(Error::CoLocated { user: u, bs: b, distance });
                }
                let h = free_space_gain(distance, params.carrier_hz)?;
                gain2[[u, b]] = h * h;
            }
        }
        Ok(Self {
            max_power_w: vec![params.max_power_w(); user_positions.len()],
            noise_w: vec![params.noise_w(); bs_positions.len()],
            bandwidth_hz: params.bandwidth_hz,
            bs_positions,
            user_positions,
            gain2,
        })
    }

    pub fn n_bs(&self) -> usize {
        self.bs_positions.len()
    }

    pub fn n_users(&self) -> usize {
        self.user_positions.len()
    }
}

/// Draws BS and user positions uniformly on the square and derives the gains.
///
/// BSs are drawn first, then users; a user closer than
/// [`MIN_LINK_DISTANCE_M`] to any BS has its position re-drawn.
pub fn generate_network(params: &SystemParams, n_bs: usize, n_users: usize, seed: u64) -> Result<NetworkInstance> {
    params.validate()?;
    if n_bs == 0 || n_users == 0 {
        return Err(Error::InvalidArgument(format!(
            "need at least one BS and one user, got n_bs={n_bs} n_users={n_users}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = params.area_side_m;
    let draw = |rng: &mut ChaCha8Rng| Point::new(rng.random_range(0.0..side), rng.random_range(0.0..side));

    let bs: Vec<Point> = (0..n_bs).map(|_| draw(&mut rng)).collect();
    let mut users = Vec::with_capacity(n_users);
    for _ in 0..n_users {
        let p = loop {
            let p = draw(&mut rng);
            if bs.iter().all(|b| p.distance(b) >= MIN_LINK_DISTANCE_M) {
                break p;
            }
        };
        users.push(p);
    }
    NetworkInstance::from_positions(params, bs, users)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn dbm_conversion() {
        assert_eq!(dbm_to_watts(0.0), 1e-3);
        assert!(rel(dbm_to_watts(23.0), 0.199_526_231_5) < 1e-9);
        assert!(rel(dbm_to_watts(23.0), 0.19953) < 1e-4);
        assert!(rel(dbm_to_watts(30.0), 1.0) < 1e-15);
        for x in [-174.0, -30.0, 0.0, 23.0, 47.5] {
            assert!((watts_to_dbm(dbm_to_watts(x)) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn thermal_noise() {
        assert!(rel(noise_power(-174.0, 1e6), 3.981e-15) < 1e-3);
        assert!(rel(noise_power(-174.0, 1.0), 3.981e-21) < 1e-3);
        assert!(rel(noise_power(0.0, 1.0), 1e-3) < 1e-15);
    }

    #[test]
    fn free_space() {
        assert!(rel(free_space_gain(1000.0, 1.8e9).unwrap(), 1.326e-5) < 1e-3);
        assert!(rel(free_space_gain(1.0, 1.8e9).unwrap(), 1.326e-2) < 1e-3);
        let near = free_space_gain(40.0, 2.4e9).unwrap();
        let far = free_space_gain(80.0, 2.4e9).unwrap();
        assert!(rel(far, near / 2.0) < 1e-15);
        assert!(free_space_gain(0.0, 1.8e9).is_err());
    }

    #[test]
    fn generation_is_seeded() {
        let p = SystemParams::default();
        let a = generate_network(&p, 6, 30, 11).unwrap();
        let b = generate_network(&p, 6, 30, 11).unwrap();
        let c = generate_network(&p, 6, 30, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.gain2.dim(), (30, 6));
        assert!(a.gain2.iter().all(|&g| g > 0.0 && g < 1.0));
        for pt in a.bs_positions.iter().chain(&a.user_positions) {
            assert!((0.0..=p.area_side_m).contains(&pt.x) && (0.0..=p.area_side_m).contains(&pt.y));
        }
    }

    #[test]
    fn gain_decreases_with_distance() {
        let inst = generate_network(&SystemParams::default(), 4, 20, 3).unwrap();
        let mut pairs: Vec<(f64, f64)> = Vec::new();
        for (u, up) in inst.user_positions.iter().enumerate() {
            for (b, bp) in inst.bs_positions.iter().enumerate() {
                pairs.push((up.distance(bp), inst.gain2[[u, b]]));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pairs.windows(2) {
            if w[1].0 > w[0].0 {
                assert!(w[1].1 < w[0].1);
            }
        }
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let p = SystemParams::default();
        assert!(generate_network(&p, 0, 3, 1).is_err());
        assert!(generate_network(&p, 3, 0, 1).is_err());
        let bad = SystemParams { bandwidth_hz: 0.0, ..p };
        assert!(generate_network(&bad, 1, 1, 1).is_err());
        let err = NetworkInstance::from_positions(&p, vec![Point::new(1.0, 1.0)], vec![Point::new(1.0, 1.0)]);
        assert!(matches!(err, Err(Error::CoLocated { .. })));
    }
}
