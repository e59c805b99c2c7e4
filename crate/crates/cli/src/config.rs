//! Run configuration: built-in defaults, then a `key=value` file, then
//! command-line flags.

use std::path::PathBuf;

use entwave::ccwt::Engine;
use entwave::format::FieldFormat;
use entwave::grid::{DEFAULT_GRID_EXTENT, DEFAULT_GRID_N, DEFAULT_MU_MAX, DEFAULT_MU_MIN, DEFAULT_SCALE_COUNT};
use entwave::verify::SuiteConfig;
use entwave::wavelets::{parse_coeffs, MotherWavelet, WaveletKind};
use entwave::{ComplexPlaneGrid, Error, Result, ScaleGrid};

/// Parameters shared by every command. `suite` carries the verification
/// settings, whose grid defaults are wider than the transform defaults; the
/// shared keys (`grid_n`, `mu_min`, ...) set both.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grid_n: usize,
    pub grid_extent: f64,
    pub scale_count: usize,
    pub mu_min: f64,
    pub mu_max: f64,
    pub kind: Option<WaveletKind>,
    pub coeffs: Option<Vec<f64>>,
    pub engine: Engine,
    pub format: FieldFormat,
    pub output: Option<PathBuf>,
    pub suite: SuiteConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid_n: DEFAULT_GRID_N,
            grid_extent: DEFAULT_GRID_EXTENT,
            scale_count: DEFAULT_SCALE_COUNT,
            mu_min: DEFAULT_MU_MIN,
            mu_max: DEFAULT_MU_MAX,
            kind: None,
            coeffs: None,
            engine: Engine::default(),
            format: FieldFormat::Ewg,
            output: None,
            suite: SuiteConfig::default(),
        }
    }
}

/// Flag values given on the command line; `None` leaves the setting alone.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub grid_n: Option<usize>,
    pub grid_extent: Option<f64>,
    pub scales: Option<usize>,
    pub mu_min: Option<f64>,
    pub mu_max: Option<f64>,
    pub kind: Option<String>,
    pub coeffs: Option<String>,
    pub engine: Option<String>,
    pub format: Option<String>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let bad = |what: &str| Error::Parse(format!("{key}: bad {what} '{v}'"));
        match key.trim() {
            "grid_n" => self.grid_n = v.parse().map_err(|_| bad("integer"))?,
            "grid_extent" => self.grid_extent = v.parse().map_err(|_| bad("number"))?,
            "scales" | "scale_count" => self.scale_count = v.parse().map_err(|_| bad("integer"))?,
            "mu_min" => self.mu_min = v.parse().map_err(|_| bad("number"))?,
            "mu_max" => self.mu_max = v.parse().map_err(|_| bad("number"))?,
            "kind" | "wavelet" => self.kind = Some(v.parse()?),
            "coeffs" => self.coeffs = Some(parse_coeffs(v)?),
            "engine" => self.engine = v.parse()?,
            "format" => self.format = v.parse()?,
            "output" => self.output = Some(PathBuf::from(v)),
            k if SuiteConfig::KEYS.contains(&k) => {}
            other => return Err(Error::Parse(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    fn set_shared(&mut self, key: &str, value: &str) -> Result<()> {
        self.set(key, value)?;
        let suite_key = match key {
            "scales" => "scale_count",
            "kind" => "wavelet",
            k => k,
        };
        if SuiteConfig::KEYS.contains(&suite_key) {
            self.suite.set(suite_key, value)?;
        }
        Ok(())
    }

    /// Applies a config file body: `key=value` lines, `#` comments.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| Error::Parse(format!("config line {}: expected key=value, got '{line}'", n + 1)))?;
            self.set_shared(k.trim(), v)?;
        }
        Ok(())
    }

    pub fn apply_overrides(&mut self, o: &Overrides) -> Result<()> {
        let pairs = [
            ("grid_n", o.grid_n.map(|v| v.to_string())),
            ("grid_extent", o.grid_extent.map(|v| v.to_string())),
            ("scales", o.scales.map(|v| v.to_string())),
            ("mu_min", o.mu_min.map(|v| v.to_string())),
            ("mu_max", o.mu_max.map(|v| v.to_string())),
            ("kind", o.kind.clone()),
            ("coeffs", o.coeffs.clone()),
            ("engine", o.engine.clone()),
            ("format", o.format.clone()),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                self.set_shared(k, &v)?;
            }
        }
        if let Some(p) = &o.output {
            self.output = Some(p.clone());
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<ComplexPlaneGrid> {
        ComplexPlaneGrid::symmetric(self.grid_n, self.grid_extent)
    }

    pub fn scales(&self) -> Result<ScaleGrid> {
        ScaleGrid::log_spaced(self.scale_count, self.mu_min, self.mu_max)
    }

    /// `--coeffs` alone means a Laguerre–Gaussian wavelet; no flags at all
    /// means the entangled Mexican hat.
    pub fn wavelet(&self) -> Result<MotherWavelet> {
        match (self.kind, &self.coeffs) {
            (None | Some(WaveletKind::Emhw), None) => Ok(MotherWavelet::emhw()),
            (None | Some(WaveletKind::LaguerreGaussian), Some(c)) => MotherWavelet::laguerre_gaussian(c.clone()),
            (Some(WaveletKind::LaguerreGaussian), None) => Err(Error::Parse("--kind lg needs --coeffs".into())),
            (Some(WaveletKind::MexicanHat1D), None) => Ok(MotherWavelet::mexican_hat_1d()),
            (Some(k), Some(_)) => Err(Error::Parse(format!("--kind {k} takes no --coeffs"))),
        }
    }

    pub fn output(&self) -> Result<PathBuf> {
        self.output.clone().ok_or_else(|| Error::InvalidParameter("no output path (use --output or output= in the config)".into()))
    }
}
