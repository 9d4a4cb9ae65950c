//! Flat key-value description of the built-in model families, suitable for
//! TOML or JSON config files and for embedding in dataset metadata.
//!
//! A config names a family and supplies the parameters that family needs;
//! `build` turns it into a validated `FactorModelSpec`. Verification grids
//! reuse one config across dimensions via `build_with_p`.

use serde::{Deserialize, Serialize};

use super::{
    build_acfm, build_brokenstick_loading, build_clfm, build_enp, build_pure_noise,
    DistributionTag, FactorModelSpec, ModelError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    /// Equicorrelated normal pilot: one factor of weight `l`, noise `sigma I`.
    Enp,
    /// Constant-length factor model: needs `k`, `r`, `l`, `sigma`.
    Clfm,
    /// Asymptotically constant factor model: needs `ell`, `sigma`, optional
    /// `drift_scale`.
    Acfm,
    /// Unit-norm random loading rows with identity noise: needs `k`,
    /// optional `loading_seed`.
    BrokenStick,
    /// No factors: needs `sigma`, optional `noise_dist`.
    PureNoise,
}

/// Serializable model description. Fields irrelevant to the chosen family
/// must be omitted; unknown keys are rejected outright.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub family: ModelFamily,
    pub p: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift_scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loading_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor_dist: Option<DistributionTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_dist: Option<DistributionTag>,
}

impl ModelConfig {
    pub fn enp(p: usize, l: f64, sigma: f64) -> Self {
        ModelConfig {
            family: ModelFamily::Enp,
            p,
            l: Some(l),
            sigma: Some(sigma),
            ..Self::bare(ModelFamily::Enp, p)
        }
    }

    pub fn clfm(p: usize, k: usize, r: usize, l: f64, sigma: f64) -> Self {
        ModelConfig {
            k: Some(k),
            r: Some(r),
            l: Some(l),
            sigma: Some(sigma),
            ..Self::bare(ModelFamily::Clfm, p)
        }
    }

    pub fn acfm(p: usize, ell: Vec<f64>, sigma: f64, drift_scale: f64) -> Self {
        ModelConfig {
            ell: Some(ell),
            sigma: Some(sigma),
            drift_scale: Some(drift_scale),
            ..Self::bare(ModelFamily::Acfm, p)
        }
    }

    pub fn broken_stick(p: usize, k: usize, loading_seed: u64) -> Self {
        ModelConfig {
            k: Some(k),
            loading_seed: Some(loading_seed),
            ..Self::bare(ModelFamily::BrokenStick, p)
        }
    }

    pub fn pure_noise(p: usize, sigma: f64) -> Self {
        ModelConfig {
            sigma: Some(sigma),
            ..Self::bare(ModelFamily::PureNoise, p)
        }
    }

    fn bare(family: ModelFamily, p: usize) -> Self {
        ModelConfig {
            family,
            p,
            k: None,
            r: None,
            l: None,
            sigma: None,
            ell: None,
            drift_scale: None,
            loading_seed: None,
            factor_dist: None,
            noise_dist: None,
        }
    }

    /// Builds the model at the configured dimension.
    pub fn build(&self) -> Result<FactorModelSpec<f64>, ModelError> {
        self.build_with_p(self.p)
    }

    /// Builds the model with `p` overridden, keeping all other parameters.
    /// Verification grids sweep dimension this way.
    pub fn build_with_p(&self, p: usize) -> Result<FactorModelSpec<f64>, ModelError> {
        match self.family {
            ModelFamily::Enp => {
                self.forbid(&["k", "r", "ell", "drift_scale", "loading_seed"])?;
                self.forbid_dists("enp fixes both distributions to standard_normal")?;
                build_enp(p, self.require_f64("l")?, self.require_f64("sigma")?)
            }
            ModelFamily::Clfm => {
                self.forbid(&["ell", "drift_scale", "loading_seed"])?;
                let k = self.require_usize("k")?;
                let r = self.require_usize("r")?;
                build_clfm(
                    p,
                    k,
                    r,
                    self.require_f64("l")?,
                    self.require_f64("sigma")?,
                    self.factor_dist.unwrap_or(DistributionTag::StandardNormal),
                    self.noise_dist.unwrap_or(DistributionTag::StandardNormal),
                )
            }
            ModelFamily::Acfm => {
                self.forbid(&["r", "l", "loading_seed"])?;
                self.forbid_dists("acfm fixes both distributions to standard_normal")?;
                let ell = self
                    .ell
                    .as_ref()
                    .ok_or_else(|| missing("ell"))?;
                if let Some(k) = self.k {
                    if k != ell.len() {
                        return Err(ModelError::LimitVectorLengthMismatch {
                            k,
                            actual: ell.len(),
                        });
                    }
                }
                build_acfm(
                    p,
                    ell,
                    self.require_f64("sigma")?,
                    self.drift_scale.unwrap_or(0.0),
                )
            }
            ModelFamily::BrokenStick => {
                self.forbid(&["r", "l", "ell", "drift_scale"])?;
                self.forbid_dists("broken_stick fixes both distributions to standard_normal")?;
                if self.sigma.is_some_and(|s| s != 1.0) {
                    return Err(ModelError::Config(
                        "broken_stick fixes sigma = 1".to_string(),
                    ));
                }
                build_brokenstick_loading(
                    p,
                    self.require_usize("k")?,
                    self.loading_seed.unwrap_or(0),
                )
            }
            ModelFamily::PureNoise => {
                self.forbid(&["k", "r", "l", "ell", "drift_scale", "loading_seed"])?;
                if self.factor_dist.is_some() {
                    return Err(ModelError::Config(
                        "pure_noise has no factors, so factor_dist is meaningless".to_string(),
                    ));
                }
                build_pure_noise(
                    p,
                    self.require_f64("sigma")?,
                    self.noise_dist.unwrap_or(DistributionTag::StandardNormal),
                )
            }
        }
    }

    pub fn to_toml_string(&self) -> Result<String, ModelError> {
        toml::to_string(self).map_err(|e| ModelError::Config(e.to_string()))
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ModelError> {
        toml::from_str(text).map_err(|e| ModelError::Config(e.to_string()))
    }

    fn require_f64(&self, name: &'static str) -> Result<f64, ModelError> {
        let v = match name {
            "l" => self.l,
            "sigma" => self.sigma,
            "drift_scale" => self.drift_scale,
            _ => None,
        };
        v.ok_or_else(|| missing(name))
    }

    fn require_usize(&self, name: &'static str) -> Result<usize, ModelError> {
        let v = match name {
            "k" => self.k,
            "r" => self.r,
            _ => None,
        };
        v.ok_or_else(|| missing(name))
    }

    /// Rejects parameters that the chosen family does not consume, so a
    /// config cannot silently carry a value that has no effect.
    fn forbid(&self, names: &[&str]) -> Result<(), ModelError> {
        for &name in names {
            let present = match name {
                "k" => self.k.is_some(),
                "r" => self.r.is_some(),
                "l" => self.l.is_some(),
                "ell" => self.ell.is_some(),
                "drift_scale" => self.drift_scale.is_some(),
                "loading_seed" => self.loading_seed.is_some(),
                _ => false,
            };
            if present {
                return Err(ModelError::Config(format!(
                    "family {:?} does not use field `{name}`",
                    self.family
                )));
            }
        }
        Ok(())
    }

    fn forbid_dists(&self, reason: &str) -> Result<(), ModelError> {
        let fixed = Some(DistributionTag::StandardNormal);
        if (self.factor_dist.is_some() && self.factor_dist != fixed)
            || (self.noise_dist.is_some() && self.noise_dist != fixed)
        {
            return Err(ModelError::Config(reason.to_string()));
        }
        Ok(())
    }
}

fn missing(name: &str) -> ModelError {
    ModelError::Config(format!("missing required field `{name}`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_preserves_each_family() {
        let configs = [
            ModelConfig::enp(500, 1.0, 1.0),
            ModelConfig::clfm(600, 3, 3, 1.0, 1.0),
            ModelConfig::acfm(300, vec![1.0, -0.5], 1.0, 0.5),
            ModelConfig::broken_stick(100, 4, 7),
            ModelConfig::pure_noise(1000, 1.0),
        ];
        for cfg in configs {
            let text = cfg.to_toml_string().unwrap();
            let back = ModelConfig::from_toml_str(&text).unwrap();
            assert_eq!(cfg, back, "round trip failed for:\n{text}");
        }
    }

    #[test]
    fn built_specs_match_direct_constructors() {
        assert_eq!(
            ModelConfig::enp(50, 2.0, 0.5).build().unwrap(),
            build_enp(50, 2.0, 0.5).unwrap()
        );
        assert_eq!(
            ModelConfig::clfm(30, 3, 2, 1.0, 1.0).build().unwrap(),
            build_clfm(
                30,
                3,
                2,
                1.0,
                1.0,
                DistributionTag::StandardNormal,
                DistributionTag::StandardNormal
            )
            .unwrap()
        );
        assert_eq!(
            ModelConfig::acfm(20, vec![1.0], 1.0, 0.0).build().unwrap(),
            build_acfm(20, &[1.0], 1.0, 0.0).unwrap()
        );
        assert_eq!(
            ModelConfig::broken_stick(20, 3, 11).build().unwrap(),
            build_brokenstick_loading(20, 3, 11).unwrap()
        );
        assert_eq!(
            ModelConfig::pure_noise(20, 2.0).build().unwrap(),
            build_pure_noise(20, 2.0, DistributionTag::StandardNormal).unwrap()
        );
    }

    #[test]
    fn dimension_override_keeps_other_parameters() {
        let cfg = ModelConfig::clfm(600, 3, 3, 1.0, 1.0);
        let spec = cfg.build_with_p(300).unwrap();
        assert_eq!(spec.p(), 300);
        assert_eq!(spec.k(), 3);
    }

    #[test]
    fn missing_field_is_named_in_error() {
        let text = "family = \"clfm\"\np = 10\nk = 2\nr = 2\nsigma = 1.0\n";
        let cfg = ModelConfig::from_toml_str(text).unwrap();
        let err = cfg.build().unwrap_err().to_string();
        assert!(err.contains("`l`"), "error was: {err}");
    }

    #[test]
    fn unknown_key_is_rejected() {
        let text = "family = \"enp\"\np = 10\nl = 1.0\nsigma = 1.0\nbogus = 3\n";
        assert!(ModelConfig::from_toml_str(text).is_err());
    }

    #[test]
    fn irrelevant_field_is_rejected() {
        let mut cfg = ModelConfig::enp(10, 1.0, 1.0);
        cfg.r = Some(2);
        assert!(cfg.build().is_err());
    }

    #[test]
    fn acfm_k_must_match_ell_length() {
        let mut cfg = ModelConfig::acfm(10, vec![1.0, 2.0], 1.0, 0.0);
        cfg.k = Some(3);
        assert!(matches!(
            cfg.build(),
            Err(ModelError::LimitVectorLengthMismatch { k: 3, actual: 2 })
        ));
        cfg.k = Some(2);
        assert!(cfg.build().is_ok());
    }

    #[test]
    fn student_t_parses_from_toml() {
        let text = concat!(
            "family = \"clfm\"\n",
            "p = 10\nk = 2\nr = 2\nl = 1.0\nsigma = 1.0\n",
            "factor_dist = { student_t = { df = 6.0 } }\n",
            "noise_dist = \"rademacher\"\n",
        );
        let cfg = ModelConfig::from_toml_str(text).unwrap();
        let spec = cfg.build().unwrap();
        assert_eq!(spec.factor_dist(), DistributionTag::StudentT { df: 6.0 });
        assert_eq!(spec.noise_dist(), DistributionTag::Rademacher);
    }

    #[test]
    fn json_round_trip_matches_toml_content() {
        let cfg = ModelConfig::acfm(64, vec![0.5, 0.5, 0.5], 2.0, 1.0);
        let json = serde_json::to_string(&cfg).unwrap();
        let back: ModelConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(cfg, back);
    }
}
