//! Mass mobility: straight-line travel with random heading perturbations at
//! exponentially distributed intervals, reflecting at the area borders.

use core::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};

use crate::config::MobilityParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Motion {
    pub x: f64,
    pub y: f64,
    /// Radians, counter-clockwise from the +x axis.
    pub heading: f64,
    pub speed: f64,
    /// Seconds until the next direction change.
    pub until_turn: f64,
}

impl Motion {
    pub fn new<R: Rng>(x: f64, y: f64, p: &MobilityParams, rng: &mut R) -> Self {
        let heading = rng.random_range(0.0..2.0 * PI);
        let mut m = Motion {
            x,
            y,
            heading,
            speed: 0.0,
            until_turn: 0.0,
        };
        m.speed = draw_speed(p.v_max, rng);
        m.until_turn = draw_interval(p.mean_interval, rng);
        m
    }

    pub fn position(&self) -> (f64, f64) {
        (self.x, self.y)
    }
}

fn draw_speed<R: Rng>(v_max: f64, rng: &mut R) -> f64 {
    if v_max <= 0.0 {
        return 0.0;
    }
    // uniform on (0, v_max]
    v_max * (1.0 - rng.random::<f64>())
}

fn draw_interval<R: Rng>(mean: f64, rng: &mut R) -> f64 {
    Exp::new(1.0 / mean).map(|d| d.sample(rng)).unwrap_or(mean)
}

/// Moves straight for `dt` seconds, reflecting off the borders of the
/// `[0, area]²` square.
pub fn advance(m: &mut Motion, dt: f64, area: f64) {
    m.x += m.speed * dt * libm::cos(m.heading);
    m.y += m.speed * dt * libm::sin(m.heading);
    let (x, flip_x) = reflect(m.x, area);
    let (y, flip_y) = reflect(m.y, area);
    m.x = x;
    m.y = y;
    if flip_x {
        m.heading = PI - m.heading;
    }
    if flip_y {
        m.heading = -m.heading;
    }
    m.heading = wrap_angle(m.heading);
}

fn wrap_angle(a: f64) -> f64 {
    let r = libm::fmod(a, 2.0 * PI);
    if r < 0.0 {
        r + 2.0 * PI
    } else {
        r
    }
}

fn reflect(v: f64, area: f64) -> (f64, bool) {
    let mut v = v;
    let mut flips = 0;
    while v < 0.0 || v > area {
        v = if v < 0.0 { -v } else { 2.0 * area - v };
        flips += 1;
    }
    (v.clamp(0.0, area), flips % 2 == 1)
}

/// One update of `dt` seconds, applying every direction change that falls
/// inside it.
pub fn mobility_step<R: Rng>(m: &mut Motion, dt: f64, p: &MobilityParams, area: f64, rng: &mut R) {
    let mut left = dt;
    while m.until_turn <= left {
        let seg = m.until_turn.max(0.0);
        advance(m, seg, area);
        left -= seg;
        let turn = Normal::new(0.0, p.turn_stddev_deg.to_radians())
            .map(|d| d.sample(rng))
            .unwrap_or(0.0);
        m.heading = wrap_angle(m.heading + turn);
        m.speed = draw_speed(p.v_max, rng);
        m.until_turn = draw_interval(p.mean_interval, rng);
    }
    advance(m, left, area);
    m.until_turn -= left;
}
