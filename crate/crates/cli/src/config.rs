//! Scenario configuration: `key = value` lines under `[system]`, `[drive]`,
//! `[run]` and `[sweep]`, `#` comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use lzsim_core::aia::AiaOptions;
use lzsim_core::analysis::sweep::{Axis, Engine, Horizon, InitialState, Observable, Parameter, Scenario, SweepSpec};
use lzsim_core::propagator::{Scheme, DEFAULT_SAMPLES};
use lzsim_core::{Arity, DriveProtocol, SystemSpec};

use crate::error::CliError;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_CYCLES: u32 = 100;
pub const DEFAULT_OUTPUT: &str = "lz-sim-out";

/// Every accepted key, by section, in serialization order.
pub const KEYS: [(&str, &[&str]); 4] = [
    ("system", &["arity", "Omega", "V0"]),
    ("drive", &["kind", "v", "Delta0", "delta", "omega"]),
    (
        "run",
        &[
            "initial_state",
            "engine",
            "observable",
            "tolerance",
            "samples",
            "scheme",
            "stokes",
            "t_start",
            "t_end",
            "cycles",
            "phase",
            "output",
        ],
    ),
    ("sweep", &["axis1", "axis2"]),
];

/// Section owning `key`, if the key exists.
pub fn section_of(key: &str) -> Option<&'static str> {
    KEYS.iter().find(|(_, keys)| keys.contains(&key)).map(|(s, _)| *s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialChoice {
    Gg,
    S,
    Rr,
    Adiabatic1,
    Adiabatic2,
    Adiabatic3,
    G,
    R,
    AdiabaticMinus,
    AdiabaticPlus,
}

impl InitialChoice {
    const ALL: [InitialChoice; 10] = [
        InitialChoice::Gg,
        InitialChoice::S,
        InitialChoice::Rr,
        InitialChoice::Adiabatic1,
        InitialChoice::Adiabatic2,
        InitialChoice::Adiabatic3,
        InitialChoice::G,
        InitialChoice::R,
        InitialChoice::AdiabaticMinus,
        InitialChoice::AdiabaticPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InitialChoice::Gg => "gg",
            InitialChoice::S => "s",
            InitialChoice::Rr => "rr",
            InitialChoice::Adiabatic1 => "adiabatic1",
            InitialChoice::Adiabatic2 => "adiabatic2",
            InitialChoice::Adiabatic3 => "adiabatic3",
            InitialChoice::G => "g",
            InitialChoice::R => "r",
            InitialChoice::AdiabaticMinus => "adiabatic_minus",
            InitialChoice::AdiabaticPlus => "adiabatic_plus",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn arity(self) -> Arity {
        match self {
            InitialChoice::G | InitialChoice::R | InitialChoice::AdiabaticMinus | InitialChoice::AdiabaticPlus => {
                Arity::TwoLevel
            }
            _ => Arity::ThreeLevel,
        }
    }

    /// Adiabatic indices are ascending in energy.
    pub fn state(self) -> InitialState {
        match self {
            InitialChoice::Gg | InitialChoice::G => InitialState::Diabatic(0),
            InitialChoice::S | InitialChoice::R => InitialState::Diabatic(1),
            InitialChoice::Rr => InitialState::Diabatic(2),
            InitialChoice::Adiabatic1 | InitialChoice::AdiabaticMinus => InitialState::Adiabatic(0),
            InitialChoice::Adiabatic2 | InitialChoice::AdiabaticPlus => InitialState::Adiabatic(1),
            InitialChoice::Adiabatic3 => InitialState::Adiabatic(2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HorizonConfig {
    /// Δ from −10Ω to 30Ω + 10v/Ω.
    Standard,
    Window {
        t_start: f64,
        t_end: f64,
    },
    Cycles {
        cycles: u32,
        phase: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisConfig {
    pub parameter: Parameter,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

/// A validated configuration with every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub system: SystemSpec,
    pub drive: DriveProtocol,
    pub initial: InitialChoice,
    pub horizon: HorizonConfig,
    pub engine: Engine,
    pub observable: Observable,
    pub tolerance: f64,
    pub samples: usize,
    pub scheme: Scheme,
    pub stokes: bool,
    pub axes: Vec<AxisConfig>,
    pub output: String,
}

/// Raw `key → (value, line)` pairs; line 0 marks a command-line override.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, usize)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut raw = RawConfig::default();
        let mut section: Option<&'static str> = None;
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name =
                    name.strip_suffix(']').ok_or_else(|| CliError::parse(n, "unterminated section header"))?.trim();
                section = Some(
                    KEYS.iter()
                        .map(|(s, _)| *s)
                        .find(|s| *s == name)
                        .ok_or_else(|| CliError::parse(n, format!("unknown section [{name}]")))?,
                );
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| CliError::parse(n, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            let sec = section.ok_or_else(|| CliError::parse(n, "key outside of a section"))?;
            match section_of(key) {
                Some(s) if s == sec => {}
                Some(s) => return Err(CliError::parse(n, format!("key `{key}` belongs in [{s}]"))),
                None => return Err(CliError::parse(n, format!("unknown key `{key}`"))),
            }
            if value.is_empty() {
                return Err(CliError::parse(n, format!("empty value for `{key}`")));
            }
            if raw.entries.insert(key.to_string(), (value.to_string(), n)).is_some() {
                return Err(CliError::parse(n, format!("duplicate key `{key}`")));
            }
        }
        Ok(raw)
    }

    /// Replaces or adds `key`, as a command-line flag does.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if section_of(key).is_none() {
            return Err(CliError::Usage(format!("unknown key `{key}`")));
        }
        self.entries.insert(key.to_string(), (value.to_string(), 0));
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn number(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key)
            .map(|v| match v.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(self.bad(key, "expected a finite number")),
            })
            .transpose()
    }

    fn required(&self, key: &str) -> Result<f64, CliError> {
        self.number(key)?.ok_or_else(|| CliError::validation(key, "required"))
    }

    fn forbid(&self, key: &str, why: &str) -> Result<(), CliError> {
        match self.get(key) {
            Some(_) => Err(self.bad(key, why)),
            None => Ok(()),
        }
    }

    fn bad(&self, key: &str, reason: &str) -> CliError {
        match self.entries.get(key) {
            Some((_, line)) if *line > 0 => CliError::parse(*line, format!("`{key}`: {reason}")),
            _ => CliError::validation(key, reason),
        }
    }

    pub fn resolve(&self) -> Result<ScenarioConfig, CliError> {
        let arity = match self.get("arity") {
            Some("two") => Arity::TwoLevel,
            Some("three") => Arity::ThreeLevel,
            Some(_) => return Err(self.bad("arity", "expected `two` or `three`")),
            None => return Err(CliError::validation("arity", "required")),
        };
        let rabi = self.number("Omega")?.unwrap_or(1.0);
        let system = match arity {
            Arity::TwoLevel => {
                self.forbid("V0", "the two-level system has no interaction")?;
                SystemSpec::two_level(rabi)
            }
            Arity::ThreeLevel => SystemSpec::three_level(rabi, self.number("V0")?.unwrap_or(0.0)),
        };
        system.validate().map_err(|e| CliError::validation("system", e.to_string()))?;

        let drive = match self.get("kind") {
            Some("linear") => {
                for k in ["Delta0", "delta", "omega", "cycles", "phase"] {
                    self.forbid(k, "not used by a linear drive")?;
                }
                DriveProtocol::linear(self.required("v")?)
            }
            Some("periodic") => {
                for k in ["v", "t_start", "t_end"] {
                    self.forbid(k, "not used by a periodic drive")?;
                }
                DriveProtocol::periodic(
                    self.number("Delta0")?.unwrap_or(0.0),
                    self.required("delta")?,
                    self.required("omega")?,
                )
            }
            Some(_) => return Err(self.bad("kind", "expected `linear` or `periodic`")),
            None => return Err(CliError::validation("kind", "required")),
        };
        drive.validate().map_err(|e| CliError::validation("drive", e.to_string()))?;

        let initial = match self.get("initial_state") {
            None if arity == Arity::TwoLevel => InitialChoice::G,
            None => InitialChoice::Gg,
            Some(v) => InitialChoice::parse(v).ok_or_else(|| self.bad("initial_state", "unknown state"))?,
        };
        if initial.arity() != arity {
            return Err(self.bad("initial_state", "incompatible with the system arity"));
        }

        let horizon = match drive {
            DriveProtocol::Linear { .. } => match (self.number("t_start")?, self.number("t_end")?) {
                (None, None) => HorizonConfig::Standard,
                (Some(t_start), Some(t_end)) if t_start < t_end => HorizonConfig::Window { t_start, t_end },
                (Some(_), Some(_)) => return Err(self.bad("t_end", "must exceed t_start")),
                (Some(_), None) => return Err(CliError::validation("t_end", "required with t_start")),
                (None, Some(_)) => return Err(CliError::validation("t_start", "required with t_end")),
            },
            DriveProtocol::Periodic { .. } => {
                let cycles = match self.get("cycles") {
                    None => DEFAULT_CYCLES,
                    Some(v) => v
                        .parse::<u32>()
                        .ok()
                        .filter(|&c| c > 0)
                        .ok_or_else(|| self.bad("cycles", "expected a positive integer"))?,
                };
                HorizonConfig::Cycles { cycles, phase: self.number("phase")?.unwrap_or(0.0) }
            }
        };
        if matches!(horizon, HorizonConfig::Standard) && drive.detuning_rate(0.0) <= 0.0 {
            return Err(CliError::validation("v", "the default window needs v > 0; give t_start and t_end"));
        }

        let engine = match self.get("engine").unwrap_or("exact") {
            "exact" => Engine::Exact,
            "aia" => Engine::Aia,
            "both" => Engine::Both,
            _ => return Err(self.bad("engine", "expected `exact`, `aia` or `both`")),
        };
        let observable = match self.get("observable") {
            None if matches!(horizon, HorizonConfig::Cycles { .. }) => Observable::Average,
            None | Some("final") => Observable::Final,
            Some("average") => Observable::Average,
            Some(_) => return Err(self.bad("observable", "expected `final` or `average`")),
        };
        let tolerance = self.number("tolerance")?.unwrap_or(DEFAULT_TOLERANCE);
        if !(1e-12..=1e-6).contains(&tolerance) {
            return Err(self.bad("tolerance", "must lie in [1e-12, 1e-6]"));
        }
        let samples = match self.get("samples") {
            None => DEFAULT_SAMPLES,
            Some(v) => v
                .parse::<usize>()
                .ok()
                .filter(|&n| n >= 2)
                .ok_or_else(|| self.bad("samples", "expected an integer ≥ 2"))?,
        };
        let scheme = match self.get("scheme").unwrap_or("dp5") {
            "dp5" => Scheme::DormandPrince,
            "ck5" => Scheme::CashKarp,
            _ => return Err(self.bad("scheme", "expected `dp5` or `ck5`")),
        };
        let stokes = match self.get("stokes").unwrap_or("true") {
            "true" => true,
            "false" => false,
            _ => return Err(self.bad("stokes", "expected `true` or `false`")),
        };

        let mut axes = Vec::new();
        for key in ["axis1", "axis2"] {
            if let Some(v) = self.get(key) {
                axes.push(self.axis(key, v)?);
            }
        }
        if axes.is_empty() && self.get("axis2").is_some() {
            return Err(CliError::validation("axis1", "required with axis2"));
        }
        let output = self.get("output").unwrap_or(DEFAULT_OUTPUT).to_string();

        let cfg = ScenarioConfig {
            system,
            drive,
            initial,
            horizon,
            engine,
            observable,
            tolerance,
            samples,
            scheme,
            stokes,
            axes,
            output,
        };
        cfg.scenario().validate().map_err(|e| CliError::validation("run", e.to_string()))?;
        if !cfg.axes.is_empty() {
            let spec = cfg.sweep_spec().map_err(|e| CliError::validation("sweep", e.to_string()))?;
            for axis in &spec.axes {
                axis.parameter
                    .apply(&spec.base, axis.values[0])
                    .map_err(|e| CliError::validation(axis.parameter.name(), e.to_string()))?;
            }
        }
        Ok(cfg)
    }

    fn axis(&self, key: &str, v: &str) -> Result<AxisConfig, CliError> {
        let parts: Vec<&str> = v.split(':').map(str::trim).collect();
        let bad = || self.bad(key, "expected `name:lo:hi:points`");
        if parts.len() != 4 {
            return Err(bad());
        }
        let parameter = Parameter::from_name(parts[0]).ok_or_else(|| self.bad(key, "unknown parameter"))?;
        let lo: f64 = parts[1].parse().map_err(|_| bad())?;
        let hi: f64 = parts[2].parse().map_err(|_| bad())?;
        let points: usize = parts[3].parse().map_err(|_| bad())?;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) || points == 0 || (points == 1 && lo != hi) {
            return Err(self.bad(key, "need finite lo ≤ hi and points ≥ 1 (1 only when lo = hi)"));
        }
        Ok(AxisConfig { parameter, lo, hi, points })
    }
}

/// Parses and validates configuration text.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, CliError> {
    RawConfig::parse(text)?.resolve()
}

impl ScenarioConfig {
    pub fn scenario(&self) -> Scenario {
        let horizon = match self.horizon {
            HorizonConfig::Standard => Horizon::StandardLinear,
            HorizonConfig::Window { t_start, t_end } => Horizon::Window { t_start, t_end },
            HorizonConfig::Cycles { cycles, phase } => Horizon::Cycles { phase, cycles },
        };
        let mut s = Scenario::new(self.system, self.drive, self.initial.state(), horizon);
        s.tolerance = self.tolerance;
        s.samples = self.samples;
        s.scheme = self.scheme;
        s.observable = self.observable;
        s
    }

    pub fn aia_options(&self) -> AiaOptions {
        AiaOptions { stokes: self.stokes }
    }

    pub fn sweep_spec(&self) -> lzsim_core::Result<SweepSpec> {
        let axes = self
            .axes
            .iter()
            .map(|a| Axis::linspace(a.parameter, a.lo, a.hi, a.points))
            .collect::<lzsim_core::Result<Vec<_>>>()?;
        SweepSpec::new(self.scenario(), axes)
    }

    /// Canonical text: every key with its resolved value, fixed order.
    pub fn serialize(&self) -> String {
        let num = |x: f64| format!("{x:?}");
        let mut sections: Vec<(&str, Vec<(&str, String)>)> = Vec::new();

        let mut system = vec![
            ("arity", if self.system.arity == Arity::TwoLevel { "two" } else { "three" }.to_string()),
            ("Omega", num(self.system.rabi)),
        ];
        if self.system.arity == Arity::ThreeLevel {
            system.push(("V0", num(self.system.interaction)));
        }
        sections.push(("system", system));

        let drive = match self.drive {
            DriveProtocol::Linear { rate } => vec![("kind", "linear".to_string()), ("v", num(rate))],
            DriveProtocol::Periodic { bias, amplitude, frequency } => vec![
                ("kind", "periodic".to_string()),
                ("Delta0", num(bias)),
                ("delta", num(amplitude)),
                ("omega", num(frequency)),
            ],
        };
        sections.push(("drive", drive));

        let mut run = vec![
            ("initial_state", self.initial.name().to_string()),
            (
                "engine",
                match self.engine {
                    Engine::Exact => "exact",
                    Engine::Aia => "aia",
                    Engine::Both => "both",
                }
                .to_string(),
            ),
            (
                "observable",
                match self.observable {
                    Observable::Final => "final",
                    Observable::Average => "average",
                }
                .to_string(),
            ),
            ("tolerance", num(self.tolerance)),
            ("samples", self.samples.to_string()),
            (
                "scheme",
                match self.scheme {
                    Scheme::DormandPrince => "dp5",
                    Scheme::CashKarp => "ck5",
                }
                .to_string(),
            ),
            ("stokes", self.stokes.to_string()),
        ];
        match self.horizon {
            HorizonConfig::Standard => {}
            HorizonConfig::Window { t_start, t_end } => {
                run.push(("t_start", num(t_start)));
                run.push(("t_end", num(t_end)));
            }
            HorizonConfig::Cycles { cycles, phase } => {
                run.push(("cycles", cycles.to_string()));
                run.push(("phase", num(phase)));
            }
        }
        run.push(("output", self.output.clone()));
        sections.push(("run", run));

        if !self.axes.is_empty() {
            let axes = self
                .axes
                .iter()
                .zip(["axis1", "axis2"])
                .map(|(a, k)| (k, format!("{}:{}:{}:{}", a.parameter.name(), num(a.lo), num(a.hi), a.points)))
                .collect();
            sections.push(("sweep", axes));
        }

        let mut text = String::new();
        for (i, (name, entries)) in sections.iter().enumerate() {
            if i > 0 {
                text.push('\n');
            }
            let _ = writeln!(text, "[{name}]");
            for (k, v) in entries {
                let _ = writeln!(text, "{k} = {v}");
            }
        }
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_linear_config() {
        let c = parse_config("[system]\narity = two\n[drive]\nkind = linear\nv = 2\n").unwrap();
        assert_eq!(c.system, SystemSpec::two_level(1.0));
        assert_eq!(c.drive, DriveProtocol::linear(2.0));
        assert_eq!(c.initial, InitialChoice::G);
        assert_eq!(c.horizon, HorizonConfig::Standard);
        assert_eq!((c.tolerance, c.samples), (1e-10, 2000));
        assert_eq!(c.observable, Observable::Final);
    }

    #[test]
    fn round_trip_is_stable() {
        let text = "# sweep in omega\n[system]\narity=three\nV0 = 40\n[drive]\nkind = periodic\nDelta0 = -15\n\
                    delta = 25\nomega = 1\n[run]\ncycles = 10\n[sweep]\naxis1 = omega:2:20:181\n";
        let c = parse_config(text).unwrap();
        let normal = c.serialize();
        assert_eq!(parse_config(&normal).unwrap(), c);
        assert_eq!(parse_config(&normal).unwrap().serialize(), normal);
    }

    #[test]
    fn errors_carry_lines_and_fields() {
        let e = parse_config("[system]\narity = two\n[drive]\nkind = linear\nv = 2\n[run]\ninitial_state = rr\n")
            .unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 7, .. }), "{e:?}");
        let e = parse_config("[system]\narity = two\nbogus = 1\n").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 3, .. }));
        let e = parse_config("[system]\narity = three\n[drive]\nkind = periodic\ndelta = 1\n").unwrap_err();
        assert!(matches!(e, CliError::Validation { ref field, .. } if field == "omega"), "{e:?}");
    }

    #[test]
    fn overrides_replace_file_values() {
        let mut raw = RawConfig::parse("[system]\narity = two\n[drive]\nkind = linear\nv = 2\n").unwrap();
        raw.set("v", "3").unwrap();
        assert_eq!(raw.resolve().unwrap().drive, DriveProtocol::linear(3.0));
        assert!(raw.set("nope", "1").is_err());
        raw.set("initial_state", "gg").unwrap();
        assert!(matches!(raw.resolve(), Err(CliError::Validation { .. })));
    }
}
