//! Smooth compactly supported bumps built from the `exp(-1/t)` transition.

use crate::lacunary::FrequencyInterval;

/// Which bump a [`SmoothBump`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BumpKind {
    /// Even, 1 on `[-1, 1]`, 0 outside `[-2, 2]`.
    Transition,
    /// `sqrt(rho(xi) - rho(2 xi))`, supported in `+-[1/2, 2]`.
    Phi,
    /// `rho(xi / 2N) - rho(2 xi)`: 1 on `+-[1, 2N]`, 0 outside `+-[1/2, 4N]`.
    Witness { n: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothBump {
    kind: BumpKind,
}

#[inline]
fn h(t: f64) -> f64 {
    if t > 0.0 {
        libm::exp(-1.0 / t)
    } else {
        0.0
    }
}

/// `h(t) / (h(t) + h(1 - t))`: 0 for `t <= 0`, 1 for `t >= 1`.
pub fn transition(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = h(t);
        a / (a + h(1.0 - t))
    }
}

/// The plateau function `rho`.
pub fn rho(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 1.0 {
        1.0
    } else if ax >= 2.0 {
        0.0
    } else {
        transition(2.0 - ax)
    }
}

impl SmoothBump {
    pub fn kind(&self) -> BumpKind {
        self.kind
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            BumpKind::Transition => rho(x),
            BumpKind::Phi => libm::sqrt((rho(x) - rho(2.0 * x)).max(0.0)),
            BumpKind::Witness { n } => (rho(x / (2.0 * n)) - rho(2.0 * x)).max(0.0),
        }
    }

    /// Positive half of the support (the bump is even).
    pub fn support(&self) -> FrequencyInterval {
        let (a, b) = match self.kind {
            BumpKind::Transition => (-2.0, 2.0),
            BumpKind::Phi => (0.5, 2.0),
            BumpKind::Witness { n } => (0.5, 4.0 * n),
        };
        FrequencyInterval::new(a, b).expect("static support")
    }

    /// Positive half of the plateau, if any.
    pub fn plateau(&self) -> Option<(f64, f64)> {
        match self.kind {
            BumpKind::Transition => Some((-1.0, 1.0)),
            BumpKind::Phi => Some((1.0, 1.0)),
            BumpKind::Witness { n } => Some((1.0, 2.0 * n)),
        }
    }

    pub fn is_even(&self) -> bool {
        true
    }
}

pub fn make_transition() -> SmoothBump {
    SmoothBump { kind: BumpKind::Transition }
}

pub fn make_phi_partition() -> SmoothBump {
    SmoothBump { kind: BumpKind::Phi }
}

/// Spectrum profile of the witness `g_N`.
pub fn make_witness_symbol(n: f64) -> SmoothBump {
    SmoothBump { kind: BumpKind::Witness { n } }
}
