//! Scenario files: grid + material + loads + initial data + boundary
//! specification + time stepping, the unit of CLI execution.
//!
//! Loads and boundary time functions are closed-form expression strings in
//! `x` and `t` (see [`crate::expr`]); manufactured-solution scenarios built
//! programmatically carry closures instead, which cannot be serialized.

use crate::constitutive::Material1D;
use crate::error::{Error, Result};
use crate::expr::{parse_expr, CompiledExpr};
use crate::kinematics::Grid1D;
use serde::de::Error as DeError;
use serde::ser::Error as SerError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::sync::Arc;

/// A scalar function of `(x, t)`: either a parsed expression (serializable)
/// or a built-in closure (programmatic scenarios).
#[derive(Clone)]
pub enum XtFn {
    Expr(CompiledExpr),
    Builtin(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl XtFn {
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        match self {
            XtFn::Expr(e) => e.eval(x, t),
            XtFn::Builtin(f) => f(x, t),
        }
    }

    pub fn from_expr(src: &str) -> Result<Self> {
        Ok(XtFn::Expr(parse_expr(src)?))
    }

    pub fn from_closure(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        XtFn::Builtin(Arc::new(f))
    }

    pub fn zero() -> Self {
        XtFn::from_closure(|_, _| 0.0)
    }
}

impl fmt::Debug for XtFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XtFn::Expr(e) => write!(f, "XtFn::Expr({e})"),
            XtFn::Builtin(_) => write!(f, "XtFn::Builtin(..)"),
        }
    }
}

impl Serialize for XtFn {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            XtFn::Expr(e) => serializer.serialize_str(e.source()),
            XtFn::Builtin(_) => Err(S::Error::custom(
                "built-in closures cannot be serialized; use expression strings",
            )),
        }
    }
}

impl<'de> Deserialize<'de> for XtFn {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let src = String::deserialize(deserializer)?;
        XtFn::from_expr(&src).map_err(|e| D::Error::custom(format!("{e}")))
    }
}

/// Body force, free charge and heat supply, all functions of `(x, t)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Loads {
    pub f: XtFn,
    pub g: XtFn,
    pub h: XtFn,
}

impl Loads {
    pub fn zero() -> Self {
        Loads {
            f: XtFn::zero(),
            g: XtFn::zero(),
            h: XtFn::zero(),
        }
    }
}

/// Initial nodal data, given as functions of `x`. `eta0` is optional: when
/// absent, the solver derives it from the constitutive law at t = 0 with
/// `theta_dot(0) = 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InitialSpec {
    pub u0: XtFn,
    pub v0: XtFn,
    pub theta0: XtFn,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta0: Option<XtFn>,
}

impl InitialSpec {
    pub fn zero() -> Self {
        InitialSpec {
            u0: XtFn::zero(),
            v0: XtFn::zero(),
            theta0: XtFn::zero(),
            eta0: None,
        }
    }
}

/// One member of a conjugate boundary pair: either the field value is
/// prescribed (essential) or its conjugate traction is (natural).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PairCondition {
    Essential { value: XtFn },
    Natural { value: XtFn },
}

impl PairCondition {
    pub fn essential(f: XtFn) -> Self {
        PairCondition::Essential { value: f }
    }

    pub fn natural(f: XtFn) -> Self {
        PairCondition::Natural { value: f }
    }

    pub fn is_essential(&self) -> bool {
        matches!(self, PairCondition::Essential { .. })
    }

    pub fn value(&self) -> &XtFn {
        match self {
            PairCondition::Essential { value } | PairCondition::Natural { value } => value,
        }
    }
}

/// The five conjugate pairs at one endpoint:
/// `{u | P}`, `{Du | R}`, `{theta | q}`, `{phi | Lambda}`, `{Dphi | H}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndpointBc {
    pub u: PairCondition,
    pub du: PairCondition,
    pub theta: PairCondition,
    pub phi: PairCondition,
    pub dphi: PairCondition,
}

impl EndpointBc {
    /// All-essential, homogeneous.
    pub fn clamped_zero() -> Self {
        EndpointBc {
            u: PairCondition::essential(XtFn::zero()),
            du: PairCondition::essential(XtFn::zero()),
            theta: PairCondition::essential(XtFn::zero()),
            phi: PairCondition::essential(XtFn::zero()),
            dphi: PairCondition::essential(XtFn::zero()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub left: EndpointBc,
    pub right: EndpointBc,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TimeParams {
    pub t_final: f64,
    pub dt: f64,
}

/// The full problem description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub grid: Grid1D,
    pub material: Material1D,
    pub loads: Loads,
    pub initial: InitialSpec,
    pub boundary: BoundarySpec,
    pub time: TimeParams,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        Grid1D::new(self.grid.n_nodes, self.grid.x0, self.grid.x1)?;
        self.material.validate()?;
        if !(self.time.dt > 0.0) {
            return Err(Error::Scenario("dt must be positive".into()));
        }
        if self.time.t_final < self.time.dt {
            return Err(Error::Scenario("t_final must be at least dt".into()));
        }
        Ok(())
    }

    /// Number of time steps; the history has `n_steps + 1` samples.
    pub fn n_steps(&self) -> usize {
        (self.time.t_final / self.time.dt + 1e-9).floor() as usize
    }

    /// Same problem with the grid spacing and the time step halved.
    pub fn refined(&self) -> Scenario {
        let mut s = self.clone();
        s.grid = self.grid.refined();
        s.time.dt = self.time.dt / 2.0;
        s
    }

    pub fn from_json_str(s: &str) -> Result<Scenario> {
        let sc: Scenario = serde_json::from_str(s)?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)?;
        Scenario::from_json_str(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    pub(crate) const SAMPLE: &str = r#"{
        "grid": {"n_nodes": 21, "x0": 0.0, "x1": 1.0},
        "material": {"rho": 1.0, "T0": 1.0, "c": -1.0, "beta": 1.0, "gamma": 0.5,
                     "a11": 1.0, "a17": 0.3, "a14": 0.2, "a22": 0.1, "a23": 0.15,
                     "a33": 1.0, "a77": 0.2, "a47": 0.1, "k": 1.0},
        "loads": {"f": "sin(pi*x)*cos(t)", "g": "0", "h": "x*t"},
        "initial": {"u0": "x*(1-x)", "v0": "0", "theta0": "cos(pi*x)"},
        "boundary": {
            "left": {
                "u": {"kind": "essential", "value": "0"},
                "du": {"kind": "natural", "value": "0"},
                "theta": {"kind": "essential", "value": "0"},
                "phi": {"kind": "essential", "value": "0"},
                "dphi": {"kind": "natural", "value": "0"}
            },
            "right": {
                "u": {"kind": "natural", "value": "0.1*t"},
                "du": {"kind": "essential", "value": "0"},
                "theta": {"kind": "natural", "value": "0"},
                "phi": {"kind": "natural", "value": "0"},
                "dphi": {"kind": "essential", "value": "0"}
            }
        },
        "time": {"t_final": 1.0, "dt": 0.05}
    }"#;

    #[test]
    fn parse_and_evaluate() {
        let sc = Scenario::from_json_str(SAMPLE).unwrap();
        assert_eq!(sc.grid.n_nodes, 21);
        assert_eq!(sc.n_steps(), 20);
        assert_abs_diff_eq!(sc.loads.f.eval(0.5, 0.0), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sc.initial.u0.eval(0.25, 0.0), 0.1875);
        assert!(sc.initial.eta0.is_none());
        assert!(sc.boundary.left.u.is_essential());
        assert!(!sc.boundary.right.u.is_essential());
        assert_abs_diff_eq!(sc.boundary.right.u.value().eval(1.0, 2.0), 0.2);
    }

    /// Round-trip: JSON -> model -> JSON -> model, semantically identical.
    #[test]
    fn json_round_trip_is_semantically_identical() {
        let sc = Scenario::from_json_str(SAMPLE).unwrap();
        let text = sc.to_json_string().unwrap();
        let sc2 = Scenario::from_json_str(&text).unwrap();
        assert_eq!(sc.grid, sc2.grid);
        assert_eq!(sc.material, sc2.material);
        assert_eq!(sc.time.dt, sc2.time.dt);
        assert_eq!(sc.time.t_final, sc2.time.t_final);
        for (x, t) in [(0.0, 0.0), (0.3, 0.7), (1.0, 1.0)] {
            assert_eq!(sc.loads.f.eval(x, t), sc2.loads.f.eval(x, t));
            assert_eq!(sc.loads.h.eval(x, t), sc2.loads.h.eval(x, t));
            assert_eq!(sc.initial.theta0.eval(x, 0.0), sc2.initial.theta0.eval(x, 0.0));
        }
        assert_eq!(
            sc.boundary.left.u.is_essential(),
            sc2.boundary.left.u.is_essential()
        );
    }

    #[test]
    fn bad_expression_is_a_parse_error() {
        let text = SAMPLE.replace("x*t", "x*+t");
        let err = Scenario::from_json_str(&text).unwrap_err();
        assert!(matches!(err, Error::Json(_)), "got {err:?}");
    }

    #[test]
    fn builtin_closures_refuse_serialization() {
        let mut sc = Scenario::from_json_str(SAMPLE).unwrap();
        sc.loads.f = XtFn::from_closure(|x, t| x + t);
        assert!(sc.to_json_string().is_err());
    }

    #[test]
    fn validation_rejects_bad_time() {
        let text = SAMPLE.replace("\"dt\": 0.05", "\"dt\": -0.05");
        assert!(Scenario::from_json_str(&text).is_err());
    }
}
