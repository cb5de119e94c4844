//! Plain-text rendering of analysis reports: one short block per analysis,
//! exact rationals printed as p/q, floats only where the data is float.

use std::fmt::Write as _;

use shiftlab_core::class::{ClassReport, SweepSummary, TailStatus, Verdict};
use shiftlab_core::norm::{
    AttainmentReport, LimitCase, SupResult, TailBehavior, WeightLimitReport,
};
use shiftlab_core::spectra::{Multiplicity, ProbeReport, SpectrumReport};
use shiftlab_core::tree::{RaySpec, TailDirection, TailRule};
use shiftlab_core::{Rat, VertexId};
use shiftlab_matrix::blocks::{BlockForm, NormalityReport, SinglePeel};
use shiftlab_matrix::quasi::QuasiVerdict;

fn zero() -> Rat {
    Rat::from_integer(0.into())
}

/// "j - s" with the sign of `s` resolved, for tail formulas.
fn shifted_index(shift: &Rat) -> String {
    if *shift == zero() {
        "j".to_string()
    } else if *shift > zero() {
        format!("j - {shift}")
    } else {
        format!("j + {}", -shift.clone())
    }
}

/// One-line closed form of a tail rule with its monotonicity.
pub fn describe_tail(tail: &TailRule) -> String {
    match tail {
        TailRule::Constant { c } => format!("constant {c}"),
        TailRule::AffineReciprocal { limit, c, shift } => {
            if *c > zero() {
                format!("{limit} - {c}/({}), increasing to {limit}", shifted_index(shift))
            } else {
                format!(
                    "{limit} + {}/({}), decreasing to {limit}",
                    -c.clone(),
                    shifted_index(shift)
                )
            }
        }
        TailRule::GeometricApproach { limit, c, ratio } => {
            if *c > zero() {
                format!("{limit} - {c}*({ratio})^j, increasing to {limit}")
            } else {
                format!("{limit} + {}*({ratio})^j, decreasing to {limit}", -c.clone())
            }
        }
    }
}

/// One-line description of a ray: attachment, prefix, tail.
pub fn describe_ray(ray: &RaySpec) -> String {
    let prefix: Vec<String> = ray.prefix.iter().map(|w| w.to_string()).collect();
    format!(
        "ray {} at {}: prefix [{}], then {}",
        ray.id,
        ray.attach_at,
        prefix.join(", "),
        describe_tail(&ray.tail)
    )
}

pub fn render_vertices(vs: &[VertexId]) -> String {
    if vs.is_empty() {
        "none".to_string()
    } else {
        vs.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn render_sup(label: &str, sup: &SupResult) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "{label} = {}; attained: {}; witnesses: {}",
        sup.value_sq,
        yes_no(sup.attained),
        render_vertices(&sup.witnesses)
    )
    .unwrap();
    for ev in &sup.tail_evidence {
        let behavior = match &ev.tail {
            TailBehavior::EventuallyConstant {
                value_sq,
                from_index,
            } => format!("eventually constant at {value_sq} from index {from_index}"),
            TailBehavior::MonotoneLimit { direction, limit_sq } => format!(
                "strictly {} toward {limit_sq}",
                match direction {
                    TailDirection::Increasing => "increasing",
                    TailDirection::Decreasing => "decreasing",
                    TailDirection::Constant => "constant",
                }
            ),
        };
        writeln!(
            s,
            "  tail {}: {behavior}{}",
            ev.ray,
            if ev.equals_sup { " (equals sup)" } else { "" }
        )
        .unwrap();
    }
    s
}

pub fn render_attainment(report: &AttainmentReport) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "power {}: ‖S^{}‖² = {}; attained: {}; attaining vertices: {}",
        report.power,
        report.power,
        report.norm_sq_of_power.value_sq,
        yes_no(report.norm_sq_of_power.attained),
        render_vertices(&report.attaining_vertices)
    )
    .unwrap();
    for check in &report.corollary_checks {
        writeln!(
            s,
            "  [{}] {} — {}",
            if check.holds { "ok" } else { "!!" },
            check.name,
            check.detail
        )
        .unwrap();
    }
    s
}

pub fn render_weight_limits(report: &WeightLimitReport) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "weight limits (norm attaining: {}):",
        yes_no(report.norm_attaining)
    )
    .unwrap();
    for ray in &report.rays {
        let case = match &ray.case {
            LimitCase::ApproachedFromAboveOrConstant => {
                "constant or approached from above".to_string()
            }
            LimitCase::LargerWeightExists { mu, at } => {
                format!("larger weight {mu} exists at {at}")
            }
            LimitCase::EqualWeightAttained { at } => {
                format!("the limit itself occurs as a weight at {at}")
            }
            LimitCase::VacuouslyConsistent => "vacuous: shift not norm attaining".to_string(),
            LimitCase::Falsified => "FALSIFIED".to_string(),
        };
        writeln!(s, "  ray {}: limit {} — {case}; {}", ray.ray, ray.limit, ray.note).unwrap();
    }
    s
}

pub fn render_class(report: &ClassReport) -> String {
    let mut s = String::new();
    let verdict = match report.verdict {
        Verdict::PassAll => "PASS_ALL",
        Verdict::Fail => "FAIL",
    };
    writeln!(
        s,
        "{:<28} {verdict}  ({})",
        report.class, report.interpretation
    )
    .unwrap();
    for w in &report.fail_witnesses {
        writeln!(s, "  at {}: lhs² {} > rhs² {}", w.vertex, w.lhs, w.rhs).unwrap();
    }
    let tails: Vec<String> = report
        .tail_status
        .iter()
        .map(|t| match &t.status {
            TailStatus::ClosedFormVerified => format!("{} closed-form", t.ray),
            TailStatus::VerifiedToHorizonPlusLimit { horizon } => {
                format!("{} to horizon {horizon} plus limit", t.ray)
            }
        })
        .collect();
    if !tails.is_empty() {
        writeln!(s, "  tails: {}", tails.join("; ")).unwrap();
    }
    s
}

pub fn render_sweep(summary: &SweepSummary) -> String {
    match &summary.violation {
        None => format!(
            "{}: {} trials — no violation found\n",
            summary.kind, summary.trials
        ),
        Some(v) => {
            let support: Vec<String> = v
                .vector
                .iter()
                .map(|(vertex, coeff)| format!("{coeff}·e[{vertex}]"))
                .collect();
            format!(
                "{}: violation at trial {} on f = {}: lhs² {} > rhs² {}\n",
                summary.kind,
                v.trial,
                support.join(" + "),
                v.check.lhs_sq,
                v.check.rhs_sq
            )
        }
    }
}

pub fn render_spectrum(report: &SpectrumReport) -> String {
    let mut s = String::new();
    let eigen: Vec<String> = report
        .eigenvalues
        .iter()
        .map(|e| {
            let mult = match e.multiplicity {
                Multiplicity::Finite(n) => format!("×{n}"),
                Multiplicity::Infinite => "×∞".to_string(),
            };
            format!("{} ({mult})", e.value)
        })
        .collect();
    writeln!(
        s,
        "listed eigenvalues: {}",
        if eigen.is_empty() {
            "none".to_string()
        } else {
            eigen.join(", ")
        }
    )
    .unwrap();
    for family in &report.tail_families {
        writeln!(
            s,
            "tail family on {}: {} — {}",
            family.ray,
            match family.direction {
                TailDirection::Increasing => format!("increasing to {}", family.limit),
                TailDirection::Decreasing => format!("decreasing to {}", family.limit),
                TailDirection::Constant => format!("constant {}", family.limit),
            },
            family.description
        )
        .unwrap();
    }
    let rats = |xs: &[Rat]| -> String {
        if xs.is_empty() {
            "∅".to_string()
        } else {
            format!(
                "{{{}}}",
                xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            )
        }
    };
    writeln!(s, "accumulation points: {}", rats(&report.accumulation_points)).unwrap();
    writeln!(s, "σ_ess = {}", rats(&report.sigma_ess)).unwrap();
    let bound = |name: &str, b: &Option<shiftlab_core::spectra::EigenBound>| -> String {
        match b {
            None => format!("{name} undefined (no eigenvalues)"),
            Some(b) => format!(
                "{name} = {} ({}attained)",
                b.value,
                if b.attained { "" } else { "not " }
            ),
        }
    };
    writeln!(s, "{}", bound("m", &report.m)).unwrap();
    writeln!(s, "{}", bound("m_e", &report.m_e)).unwrap();
    writeln!(
        s,
        "‖N‖ = {} ({}attained)",
        report.norm.value,
        if report.norm.attained { "" } else { "not " }
    )
    .unwrap();
    for note in &report.notes {
        writeln!(s, "note: {note}").unwrap();
    }
    s
}

pub fn render_probe(report: &ProbeReport) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "family {} on rays ({}, {})",
        report.family, report.rays.0, report.rays.1
    )
    .unwrap();
    writeln!(
        s,
        "restricted norm² = {}; attained: {}; witness index: {}",
        report.restriction_sup_sq,
        yes_no(report.attained),
        report
            .witness_index
            .map(|j| j.to_string())
            .unwrap_or_else(|| "none".to_string())
    )
    .unwrap();
    writeln!(s, "evidence: {}", report.evidence).unwrap();
    if report.flags.is_empty() {
        writeln!(s, "flags: none").unwrap();
    } else {
        for flag in &report.flags {
            writeln!(s, "flag: {flag}").unwrap();
        }
    }
    s
}

pub fn render_quasi_verdict(verdict: &QuasiVerdict) -> String {
    match verdict {
        QuasiVerdict::Pass(e) => format!(
            "verdict: PASS — {} samples checked, min gap {:.3e}, pencil min eigenvalue {:.3e} (both at unit scale)\nnote: {}\n",
            e.samples_checked, e.min_gap, e.pencil_min_eig, e.note
        ),
        QuasiVerdict::Fail(w) => format!(
            "verdict: FAIL — ‖T*Tx‖² = {:.12} > ‖T³x‖·‖Tx‖ = {:.12} at a sampled unit vector of dimension {}\n",
            w.lhs,
            w.rhs,
            w.x.len()
        ),
    }
}

pub fn render_decompose(
    peel: &SinglePeel,
    form: &BlockForm,
    normality: &NormalityReport,
) -> String {
    let mut s = String::new();
    writeln!(s, "single peel (hypothesis {}):", peel.hypothesis).unwrap();
    writeln!(
        s,
        "  α = {:.12}; dim M = {}; ‖B‖ = {:.12} (strictly below α: {})",
        peel.alpha,
        peel.m_basis.dim(),
        peel.b_norm,
        yes_no(peel.b_strictly_below_norm)
    )
    .unwrap();
    writeln!(
        s,
        "  defects: U isometry {:.2e}, upper-right ‖U*A‖ {:.2e}, lower-left {:.2e}",
        peel.u_isometry_defect, peel.u_star_a_norm, peel.lower_left_norm
    )
    .unwrap();
    let alphas: Vec<String> = form.alphas().iter().map(|a| format!("{a:.12}")).collect();
    let dims: Vec<String> = form.stage_dims().iter().map(|d| d.to_string()).collect();
    writeln!(
        s,
        "peel stages: α = [{}], dims = [{}]; residual: {}; reassembly error {:.2e}",
        alphas.join(", "),
        dims.join(", "),
        match &form.residual {
            None => "none".to_string(),
            Some(r) => format!(
                "stopped at α = {:.12} (top block dim {} of remaining {}, not numerically reducing)",
                r.alpha,
                r.u.nrows(),
                r.basis.dim()
            ),
        },
        form.reassembly_error
    )
    .unwrap();
    writeln!(
        s,
        "normality: normal: {} (commutator {:.2e}, relative {:.2e}); invertible: {} (σ_min {:.3e})",
        yes_no(normality.normal),
        normality.commutator_frobenius,
        normality.relative_defect,
        yes_no(normality.invertible),
        normality.smallest_singular
    )
    .unwrap();
    s
}
