//! Method selection for a spectrum.

use crate::companion::{coefficients_nonpositive, realize_companion, DEFAULT_COEFF_TOL};
use crate::error::{Error, Result};
use crate::explorer::{explore, ExploreConfig, SearchResult, MAX_DIM, MIN_DIM};
use crate::small_order::realize_small;
use crate::spectrum::{Spectrum, SpectrumKind, DEFAULT_SIGN_TOL};
use crate::suleimanova::{realize_suleimanova, realize_zero_trace};
use crate::verify::{Method, Realization, RealizationParams, TolProfile};
use crate::linalg::DenseMatrix;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    #[default]
    Auto,
    Suleimanova,
    Small,
    Companion,
    Explore,
}

impl FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Self::Auto),
            "suleimanova" => Ok(Self::Suleimanova),
            "small" => Ok(Self::Small),
            "companion" => Ok(Self::Companion),
            "explore" => Ok(Self::Explore),
            other => Err(Error::Parse(format!("unknown method `{other}`"))),
        }
    }
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Auto => "auto",
            Self::Suleimanova => "suleimanova",
            Self::Small => "small",
            Self::Companion => "companion",
            Self::Explore => "explore",
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct RealizeOptions {
    pub method: MethodChoice,
    pub profile: TolProfile,
    pub explore: ExploreConfig,
}

/// A certified (or attempted) realization and what it took to get there.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub realization: Realization,
    pub warnings: Vec<String>,
    /// Explorer results when the search ran.
    pub search: Option<Vec<SearchResult>>,
}

/// `diag(σ)` for a nonnegative spectrum, recorded as `n` 1x1 blocks.
pub fn realize_diagonal(spectrum: &Spectrum) -> Result<Realization> {
    let band = spectrum.sign_band(DEFAULT_SIGN_TOL);
    if spectrum.min() < -band {
        return Err(Error::NotRealizableByAvailableMethods(
            "diagonal realization needs a nonnegative spectrum".into(),
        ));
    }
    let n = spectrum.len();
    let mut m = DenseMatrix::zeros(n, n);
    for (i, v) in spectrum.values().iter().enumerate() {
        m[(i, i)] = v.max(0.0);
    }
    let params = RealizationParams {
        block_sizes: vec![1; n],
        ..Default::default()
    };
    Ok(Realization::new(m, Method::Diagonal, spectrum, params))
}

fn companion_if_nonnegative(spectrum: &Spectrum) -> Option<Realization> {
    let cr = realize_companion(spectrum);
    coefficients_nonpositive(&cr.poly, DEFAULT_COEFF_TOL).then(|| cr.into_realization(spectrum))
}

fn run_explorer(spectrum: &Spectrum, config: &ExploreConfig, warnings: &mut Vec<String>) -> Result<(Realization, Vec<SearchResult>)> {
    let n = spectrum.len();
    if !(MIN_DIM..=MAX_DIM).contains(&n) {
        return Err(Error::NotRealizableByAvailableMethods(format!(
            "no constructive method applies and the explorer supports only n in {MIN_DIM}..={MAX_DIM}"
        )));
    }
    let results = explore(spectrum, config)?;
    let best = results
        .first()
        .cloned()
        .ok_or_else(|| Error::NotRealizableByAvailableMethods("explorer produced no candidates".into()))?;
    if !best.certified {
        warnings.push(format!(
            "explorer found no certified realization; best objective {:e}",
            best.objective
        ));
    }
    Ok((best.into_realization(spectrum), results))
}

/// Realizes `spectrum` with the requested method and certifies the result
/// under `options.profile`.
///
/// Auto: Suleimanova, then order at most four, then diagonal for
/// nonnegative spectra, then a nonnegative companion matrix, then the
/// explorer with a warning.
pub fn realize(spectrum: &Spectrum, options: &RealizeOptions) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let mut search = None;
    let realization = match options.method {
        MethodChoice::Suleimanova => {
            if spectrum.classify(DEFAULT_SIGN_TOL).kind == SpectrumKind::ZeroTraceSuleimanova {
                realize_zero_trace(spectrum)?
            } else {
                realize_suleimanova(spectrum)?
            }
        }
        MethodChoice::Small => realize_small(spectrum)?,
        MethodChoice::Companion => {
            let cr = realize_companion(spectrum);
            if !cr.nonneg {
                warnings.push("companion matrix has negative entries".into());
            }
            cr.into_realization(spectrum)
        }
        MethodChoice::Explore => {
            let (r, s) = run_explorer(spectrum, &options.explore, &mut warnings)?;
            search = Some(s);
            r
        }
        MethodChoice::Auto => match spectrum.classify(DEFAULT_SIGN_TOL).kind {
            SpectrumKind::Suleimanova => realize_suleimanova(spectrum)?,
            SpectrumKind::ZeroTraceSuleimanova => realize_zero_trace(spectrum)?,
            SpectrumKind::SmallOrder => realize_small(spectrum)?,
            SpectrumKind::AllNonnegative => realize_diagonal(spectrum)?,
            SpectrumKind::Unclassified => match companion_if_nonnegative(spectrum) {
                Some(r) => r,
                None => {
                    warnings.push("no constructive method applies; falling back to the explorer".into());
                    let (r, s) = run_explorer(spectrum, &options.explore, &mut warnings)?;
                    search = Some(s);
                    r
                }
            },
        },
    };
    Ok(Outcome {
        realization: realization.certified(&options.profile),
        warnings,
        search,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::small_order::SmallOrderCase;

    fn auto(v: &[f64]) -> Result<Outcome> {
        realize(&Spectrum::new(v.to_vec()).unwrap(), &RealizeOptions::default())
    }

    #[test]
    fn auto_dispatch_examples() {
        let o = auto(&[10., -1., -2., -3.]).unwrap();
        assert_eq!(o.realization.method, Method::Suleimanova);
        assert!(o.realization.is_certified());
        assert_eq!(auto(&[6., -1., -2., -3.]).unwrap().realization.method, Method::ZeroTrace);
        let o = auto(&[1., 0.9, 0.9, -1.]).unwrap();
        assert_eq!(o.realization.params.case, Some(SmallOrderCase::N4PairedDirectSum));
        assert!(o.realization.is_certified());
        let o = auto(&[3., 2., 1., 0., 0.5]).unwrap();
        assert_eq!(o.realization.method, Method::Diagonal);
        assert!(o.realization.is_certified());
        assert!(o.warnings.is_empty());
    }

    #[test]
    fn unclassified_spectra_reach_the_explorer_or_fail() {
        let o = auto(&[3., 3., -2., -2., -2.]).unwrap();
        assert_eq!(o.realization.method, Method::Explorer);
        assert!(!o.warnings.is_empty());
        assert!(o.search.is_some());

        let mut big = vec![3., 3.];
        big.extend(std::iter::repeat_n(-0.5, 10));
        assert!(matches!(auto(&big), Err(Error::NotRealizableByAvailableMethods(_))));
    }

    #[test]
    fn forced_methods() {
        let s = Spectrum::new(vec![10., -1., -2., -3.]).unwrap();
        for choice in ["suleimanova", "small", "companion", "explore"] {
            let options = RealizeOptions {
                method: choice.parse().unwrap(),
                ..Default::default()
            };
            let o = realize(&s, &options).unwrap();
            assert!(o.realization.is_certified(), "{choice}");
        }
        assert!("bogus".parse::<MethodChoice>().is_err());
        let not_s = Spectrum::new(vec![1., 1., -1.]).unwrap();
        let forced = RealizeOptions {
            method: MethodChoice::Suleimanova,
            ..Default::default()
        };
        assert!(matches!(realize(&not_s, &forced), Err(Error::NotSuleimanova(_))));
    }
}
