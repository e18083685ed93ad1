//! Energy heuristics carried in the ant's `Heuristic Inf.` field.
//!
//! A heuristic value `h` lives in the half-open interval `(0, 1]`. It is
//! produced either from the battery state of charge or from the estimated
//! lifetime relative to a target lifetime, and it modulates the pheromone
//! deposit and evaporation coefficients.

/// Smallest representable heuristic, one step of the 16-bit wire field.
pub const H_EPSILON: f64 = 1.0 / 65535.0;

/// A value in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HeuristicValue(f64);

impl HeuristicValue {
    pub const ONE: HeuristicValue = HeuristicValue(1.0);
    pub const MIN: HeuristicValue = HeuristicValue(H_EPSILON);

    /// Clamps into `[H_EPSILON, 1]`. NaN maps to the neutral value 1.
    pub fn new(h: f64) -> Self {
        if h.is_nan() {
            return Self::ONE;
        }
        HeuristicValue(h.clamp(H_EPSILON, 1.0))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// 16-bit fixed point, `raw / 65535`, never zero.
    pub fn quantize(self) -> u16 {
        let raw = libm::round(self.0 * 65535.0);
        raw.clamp(1.0, 65535.0) as u16
    }

    /// `None` for the malformed raw value 0.
    pub fn dequantize(raw: u16) -> Option<Self> {
        if raw == 0 {
            None
        } else {
            Some(HeuristicValue(raw as f64 / 65535.0))
        }
    }
}

impl Default for HeuristicValue {
    fn default() -> Self {
        Self::ONE
    }
}

/// Which quantity a node advertises in its ants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeuristicKind {
    /// Plain ADHOP: always 1.
    #[default]
    None,
    /// State of charge.
    Battery,
    /// Estimated lifetime over remaining target lifetime.
    Lifetime,
}

/// State of charge, clamped away from zero.
pub fn battery_charge_h(b_now: f64, e_batt_0: f64) -> HeuristicValue {
    debug_assert!(e_batt_0 > 0.0);
    HeuristicValue::new(b_now / e_batt_0)
}

/// Average discharge rate since start, in J/s. `None` before any time has
/// elapsed.
pub fn discharge_rate(e_batt_0: f64, e_batt_i: f64, t_i: f64) -> Option<f64> {
    if t_i > 0.0 {
        Some((e_batt_0 - e_batt_i) / t_i)
    } else {
        None
    }
}

/// Remaining charge over discharge rate, in seconds. Infinite when the node
/// has not consumed anything.
pub fn estimated_lifetime(b_i: f64, d_i: f64) -> f64 {
    if b_i <= 0.0 {
        0.0
    } else if d_i <= 0.0 {
        f64::INFINITY
    } else {
        b_i / d_i
    }
}

/// Estimated lifetime normalised by the time left until the target lifetime.
pub fn lifetime_h(l_hat: f64, l_target: f64, t_now: f64) -> HeuristicValue {
    debug_assert!(l_target > 0.0);
    let remaining = l_target - t_now;
    if remaining <= 0.0 || l_hat.is_infinite() {
        return HeuristicValue::ONE;
    }
    HeuristicValue::new(libm::fmin(1.0, l_hat / remaining))
}

/// Per-node lifetime estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeEstimator {
    pub e_batt_0: f64,
    pub l_target: f64,
}

impl LifetimeEstimator {
    pub fn new(e_batt_0: f64, l_target: f64) -> Self {
        Self { e_batt_0, l_target }
    }

    /// Falls back to 1 until a rate can be estimated.
    pub fn heuristic(&self, b_now: f64, t_now: f64) -> HeuristicValue {
        match discharge_rate(self.e_batt_0, b_now, t_now) {
            None => HeuristicValue::ONE,
            Some(d) => lifetime_h(estimated_lifetime(b_now, d), self.l_target, t_now),
        }
    }
}

/// How `h` bends the deposit and evaporation coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulation {
    pub phi_base: f64,
    pub rho_base: f64,
    /// Evaporation relief for high `h`, in `[0, 1)`. Zero is neutral.
    pub kappa: f64,
}

impl Modulation {
    pub fn phi_eff(&self, h: HeuristicValue) -> f64 {
        phi_eff(h, self.phi_base)
    }

    pub fn rho_eff(&self, h: HeuristicValue) -> f64 {
        rho_eff(h, self.rho_base, self.kappa)
    }
}

/// Deposit coefficient, increasing in `h`.
pub fn phi_eff(h: HeuristicValue, phi_base: f64) -> f64 {
    (phi_base * h.get()).clamp(0.0, 1.0)
}

/// Evaporation coefficient, decreasing in `h` when `kappa > 0`.
pub fn rho_eff(h: HeuristicValue, rho_base: f64, kappa: f64) -> f64 {
    (rho_base * (1.0 - kappa * h.get())).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1.0)
    }

    #[test]
    fn battery_heuristic_examples() {
        assert_eq!(battery_charge_h(32.4, 32.4).get(), 1.0);
        // 4.5 mWh of 9 mWh
        assert!(close(battery_charge_h(4.5, 9.0).get(), 0.5));
        assert_eq!(battery_charge_h(0.0, 9.0).get(), H_EPSILON);
    }

    #[test]
    fn discharge_rate_examples() {
        assert!(close(discharge_rate(32.4, 29.16, 300.0).unwrap(), 0.0108));
        assert_eq!(discharge_rate(32.4, 32.4, 10.0), Some(0.0));
        assert_eq!(discharge_rate(32.4, 30.0, 0.0), None);
    }

    #[test]
    fn lifetime_examples() {
        assert!(close(estimated_lifetime(16.2, 0.0108), 1500.0));
        assert!(estimated_lifetime(16.2, 0.0).is_infinite());
        assert_eq!(estimated_lifetime(0.0, 0.01), 0.0);

        assert!(close(lifetime_h(450.0, 900.0, 300.0).get(), 0.75));
        assert_eq!(lifetime_h(600.0, 900.0, 300.0).get(), 1.0);
        assert_eq!(lifetime_h(f64::INFINITY, 900.0, 300.0).get(), 1.0);
        assert_eq!(lifetime_h(10.0, 900.0, 900.0).get(), 1.0);
        assert_eq!(lifetime_h(0.0, 900.0, 10.0).get(), H_EPSILON);
    }

    #[test]
    fn estimator_without_elapsed_time_is_neutral() {
        let est = LifetimeEstimator::new(32.4, 900.0);
        assert_eq!(est.heuristic(32.4, 0.0), HeuristicValue::ONE);
        // 10 % used in 300 s -> 2700 s of life left, well beyond target
        assert_eq!(est.heuristic(29.16, 300.0), HeuristicValue::ONE);
    }

    #[test]
    fn modulation_examples() {
        let m = Modulation {
            phi_base: 0.5,
            rho_base: 0.1,
            kappa: 0.5,
        };
        assert!(close(m.phi_eff(HeuristicValue::ONE), 0.5));
        assert!(close(m.rho_eff(HeuristicValue::ONE), 0.05));
        assert!(m.phi_eff(HeuristicValue::MIN) < 1e-4);
        assert!((m.rho_eff(HeuristicValue::MIN) - 0.1).abs() < 1e-5);
        let plain = Modulation { kappa: 0.0, ..m };
        assert_eq!(plain.phi_eff(HeuristicValue::ONE), 0.5);
        assert_eq!(plain.rho_eff(HeuristicValue::ONE), 0.1);
    }

    #[test]
    fn heterogeneous_batteries() {
        // 1000 mAh at 30 % against 200 mAh at 50 %, both at 3 V
        let big = crate::energy::battery_energy_joules(1000.0, 3.0);
        let small = crate::energy::battery_energy_joules(200.0, 3.0);
        let (b_big, b_small) = (0.3 * big, 0.5 * small);
        assert!(b_big > b_small);
        assert!(battery_charge_h(b_big, big) < battery_charge_h(b_small, small));

        // Same drain rate: lifetime follows absolute charge.
        let (t, rate) = (100.0, 1.0);
        let target = 1e5;
        let l_big = lifetime_h(estimated_lifetime(b_big, rate), target, t);
        let l_small = lifetime_h(estimated_lifetime(b_small, rate), target, t);
        assert!(l_big > l_small);
    }

    proptest! {
        #[test]
        fn quantization_error_bounded(h in H_EPSILON..=1.0f64) {
            let v = HeuristicValue::new(h);
            let back = HeuristicValue::dequantize(v.quantize()).unwrap();
            prop_assert!((v.get() - back.get()).abs() <= 1.0 / 65535.0);
        }

        #[test]
        fn modulation_is_monotone(a in H_EPSILON..=1.0f64, b in H_EPSILON..=1.0f64) {
            prop_assume!(b - a > 1e-9);
            let m = Modulation { phi_base: 0.5, rho_base: 0.1, kappa: 0.5 };
            let (ha, hb) = (HeuristicValue::new(a), HeuristicValue::new(b));
            prop_assert!(m.phi_eff(ha) < m.phi_eff(hb));
            prop_assert!(m.rho_eff(ha) > m.rho_eff(hb));
        }
    }
}
