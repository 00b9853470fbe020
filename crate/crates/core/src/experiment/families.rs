//! Manufactured solutions and their data `f = -u'' + gamma u`.

use crate::basis::BasisKind;
use crate::error::{invalid, Error, Result};
use crate::laguerre::Differentiable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `exp(-x) (sin 2x + eta)`
    ExpOsc,
    /// `(x + eta) (1 + x)^{-h}`
    AlgebraicPlain,
    /// `(sin 2x + eta) (1 + x)^{-h}`
    AlgebraicOsc,
    /// `exp(-x) (sin 2x + cos 2x)`
    ExpOscRobin,
    /// `(sin 2x + cos 2x) (h + x)^{-h}`
    AlgebraicOscRobin,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::ExpOsc, Family::AlgebraicPlain, Family::AlgebraicOsc, Family::ExpOscRobin, Family::AlgebraicOscRobin];

    pub fn name(self) -> &'static str {
        match self {
            Family::ExpOsc => "exp-osc",
            Family::AlgebraicPlain => "algebraic-plain",
            Family::AlgebraicOsc => "algebraic-osc",
            Family::ExpOscRobin => "exp-osc-robin",
            Family::AlgebraicOscRobin => "algebraic-osc-robin",
        }
    }

    pub fn is_algebraic(self) -> bool {
        matches!(self, Family::AlgebraicPlain | Family::AlgebraicOsc | Family::AlgebraicOscRobin)
    }

    /// The problem kind the family was designed for.
    pub fn natural_kind(self) -> BasisKind {
        match self {
            Family::ExpOscRobin | Family::AlgebraicOscRobin => BasisKind::Robin,
            _ => BasisKind::Dirichlet,
        }
    }

    /// Whether the family's formula contains the free constant `eta`.
    pub fn uses_eta(self) -> bool {
        matches!(self, Family::ExpOsc | Family::AlgebraicPlain | Family::AlgebraicOsc)
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == key || f.name().replace('-', "") == key)
            .ok_or_else(|| invalid(format!("unknown solution family `{s}`")))
    }
}

/// A member of a family with its parameters fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Manufactured {
    pub family: Family,
    pub h: f64,
    pub eta: f64,
}

impl Manufactured {
    pub fn new(family: Family, h: f64, eta: f64) -> Result<Self> {
        if family.is_algebraic() && (!(h > 1.0) || !h.is_finite()) {
            return Err(invalid(format!("algebraic families need a finite h > 1, got {h}")));
        }
        if !eta.is_finite() {
            return Err(invalid("eta must be finite"));
        }
        Ok(Self { family, h, eta })
    }

    /// `[u, u', u'']` at `x`.
    pub fn jet(&self, x: f64) -> [f64; 3] {
        let (s, c) = (2.0 * x).sin_cos();
        // u = g p with an oscillating or linear g and a decaying p
        let (g, dg, ddg) = match self.family {
            Family::ExpOsc | Family::AlgebraicOsc => (s + self.eta, 2.0 * c, -4.0 * s),
            Family::AlgebraicPlain => (x + self.eta, 1.0, 0.0),
            Family::ExpOscRobin | Family::AlgebraicOscRobin => (s + c, 2.0 * (c - s), -4.0 * (s + c)),
        };
        let (p, dp, ddp) = match self.family {
            Family::ExpOsc | Family::ExpOscRobin => {
                let e = (-x).exp();
                (e, -e, e)
            }
            Family::AlgebraicPlain | Family::AlgebraicOsc | Family::AlgebraicOscRobin => {
                let a = if self.family == Family::AlgebraicOscRobin { self.h } else { 1.0 };
                let h = self.h;
                let p = (a + x).powf(-h);
                let r = 1.0 / (a + x);
                (p, -h * p * r, h * (h + 1.0) * p * r * r)
            }
        };
        [g * p, dg * p + g * dp, ddg * p + 2.0 * dg * dp + g * ddp]
    }

    pub fn rhs(&self, gamma: f64, x: f64) -> f64 {
        let [u, _, upp] = self.jet(x);
        -upp + gamma * u
    }

    /// `u(0)` for Dirichlet, `-u'(0) + mu u(0)` for Robin.
    pub fn boundary_datum(&self, kind: BasisKind, mu: f64) -> f64 {
        let [u, du, _] = self.jet(0.0);
        match kind {
            BasisKind::Dirichlet => u,
            BasisKind::Robin => -du + mu * u,
        }
    }
}

impl Differentiable for Manufactured {
    fn max_order(&self) -> usize {
        2
    }

    fn derivative(&self, order: usize, x: f64) -> f64 {
        self.jet(x)[order]
    }
}

/// `f` at each sample and the boundary datum for `kind`.
pub fn manufactured_rhs(u: &Manufactured, kind: BasisKind, gamma: f64, mu: f64, samples: &[f64]) -> (Vec<f64>, f64) {
    let f = samples.iter().map(|&x| u.rhs(gamma, x)).collect();
    (f, u.boundary_datum(kind, mu))
}
