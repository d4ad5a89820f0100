//! Serializable verdict reports, the boundary between the typed library
//! and the CLI or files. Exact values cross this boundary as `"p/q"`
//! strings, complex ones as `[re, im]` pairs.

use serde::Serialize;

use crate::error::Result;
use crate::moments::MomentSequence;
use crate::recurrence::{
    christoffel_factor, k_coefficient_check, min_linear_recurrence, normalize_profile,
};
use crate::scalar::{Field, Scalar, Tolerance};
use crate::umbral::{BandWidth, ClassicalityReport, FailureKind, UmbralDerivative};
use crate::Error;

#[derive(Clone, Debug, Serialize)]
pub struct GramSummary {
    pub pass: bool,
    /// Row, column, and magnitude of the worst off-diagonal entry.
    pub worst_off_diag: Option<(usize, usize, f64)>,
    pub zero_diag: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MainSummary {
    pub pass: bool,
    pub max_residual: f64,
    pub failing_cell: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenSummary {
    pub lambda: Vec<Scalar>,
    pub p_pass: bool,
    pub q_pass: bool,
    pub max_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecurrenceSummary {
    pub order: usize,
    pub alpha: Vec<Scalar>,
    pub condition: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizationSummary {
    pub rescale_q: Scalar,
    pub beta: Vec<Scalar>,
    pub gamma: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorSummary {
    pub width: usize,
    pub epsilon: Vec<Scalar>,
    /// Ascending coefficients of the factor polynomial.
    pub pi: Vec<Scalar>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalSummary {
    pub pass: bool,
    pub max_residual: f64,
    pub failing: Option<(isize, usize)>,
}

/// Recurrence-level structure of the derivative and its relation to the
/// raising operator, attached to a verdict report on request. Notes record
/// why an analysis was skipped instead of failing the whole report.
#[derive(Clone, Debug, Default, Serialize)]
pub struct StructureSummary {
    pub recurrence: Option<RecurrenceSummary>,
    pub recurrence_note: Option<String>,
    pub normalization: Option<NormalizationSummary>,
    pub normalization_note: Option<String>,
    pub factor: Option<FactorSummary>,
    pub factor_note: Option<String>,
    pub diagonal_recurrence: Option<DiagonalSummary>,
}

/// Full verdict report for one functional/derivative pair.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub mode: &'static str,
    pub verdict: bool,
    pub depth: usize,
    pub failure: Option<FailureKind>,
    pub gram: GramSummary,
    pub main: Option<MainSummary>,
    pub band_width: Option<BandWidth>,
    pub eigen: Option<EigenSummary>,
    /// Moments of the derived functional, normalized to lead with one.
    pub derived_moments: Vec<Scalar>,
    pub structure: Option<StructureSummary>,
}

impl CheckReport {
    pub fn exit_code(&self) -> i32 {
        if self.verdict {
            0
        } else {
            1
        }
    }
}

fn scalars<F: Field>(values: &[F]) -> Vec<Scalar> {
    values.iter().map(F::to_scalar).collect()
}

/// Flatten a typed classicality report into the interchange form.
pub fn summarize<F: Field>(rep: &ClassicalityReport<F>) -> Result<CheckReport> {
    let gram = GramSummary {
        pass: rep.gram.pass,
        worst_off_diag: rep
            .gram
            .worst_off_diag
            .as_ref()
            .map(|(n, m, v)| (*n, *m, v.magnitude())),
        zero_diag: rep.gram.zero_diag,
    };
    let main = rep.main.as_ref().map(|m| MainSummary {
        pass: m.pass,
        max_residual: m.max_residual,
        failing_cell: m.failing_cell,
    });
    let eigen = rep.eigen.as_ref().map(|e| EigenSummary {
        lambda: scalars(&e.lambda),
        p_pass: e.p_pass,
        q_pass: e.q_pass,
        max_residual: e.max_residual,
    });
    let derived_moments = scalars(&rep.tau.prefix(rep.depth + 1)?);
    Ok(CheckReport {
        mode: F::MODE,
        verdict: rep.verdict,
        depth: rep.depth,
        failure: rep.failure.clone(),
        gram,
        main,
        band_width: rep.band,
        eigen,
        derived_moments,
        structure: None,
    })
}

/// Run the structure analyses against a verdict report. Absence of a
/// recurrence or of a rational rescale base is recorded as a note rather
/// than an error; genuine computation failures still propagate.
pub fn structure_summary<F: Field>(
    g: &MomentSequence<F>,
    d: &UmbralDerivative<F>,
    rep: &ClassicalityReport<F>,
    max_order: usize,
    tol: &Tolerance,
) -> Result<StructureSummary> {
    let mut out = StructureSummary::default();
    let mu = d.prefix((2 * max_order + 2).max(rep.depth + 2))?;
    let profile = match min_linear_recurrence(&mu, max_order, tol)? {
        Some(p) => p,
        None => {
            out.recurrence_note =
                Some(format!("no linear recurrence of order up to {max_order}"));
            return Ok(out);
        }
    };
    out.recurrence = Some(RecurrenceSummary {
        order: profile.order(),
        alpha: scalars(&profile.alpha),
        condition: profile.condition,
    });

    match normalize_profile(&mu, &profile, tol) {
        Ok(norm) => {
            out.normalization = Some(NormalizationSummary {
                rescale_q: norm.rescale_q.to_scalar(),
                beta: scalars(&norm.beta),
                gamma: norm.gamma.to_scalar(),
            });
        }
        Err(Error::NoRationalRoot) => {
            out.normalization_note =
                Some("characteristic polynomial has no rational root".into());
        }
        Err(e) => return Err(e),
    }

    if let Some(raising) = rep.raising.as_ref() {
        if raising.max_col() >= profile.order() {
            let diag = k_coefficient_check(raising, &profile.alpha, tol)?;
            out.diagonal_recurrence = Some(DiagonalSummary {
                pass: diag.pass,
                max_residual: diag.max_residual,
                failing: diag.failing,
            });
        }
    }

    if rep.verdict {
        if let Some(BandWidth::Local(j)) = rep.band {
            let n_max = (j + 2).max(6);
            match christoffel_factor(g, &rep.tau, j, n_max, tol) {
                Ok(factor) => {
                    out.factor = Some(FactorSummary {
                        width: j,
                        epsilon: scalars(&factor.epsilon),
                        pi: scalars(factor.pi.coeffs()),
                    });
                }
                Err(Error::FactorInconsistent { width }) => {
                    out.factor_note =
                        Some(format!("no width-{width} factor links the functionals"));
                }
                Err(e) => return Err(e),
            }
        } else {
            out.factor_note = Some("raising operator is not banded".into());
        }
    }

    Ok(out)
}
