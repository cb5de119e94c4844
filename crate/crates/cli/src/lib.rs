//! Report engine behind the `shiftlab` binary: input detection, analysis
//! dispatch, deterministic JSON assembly, and exit-status computation.

pub mod human;
pub mod registry;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use shiftlab_core::class::{
    densely_defined_bound, hierarchy_spot_check, hyponormal_basis_test, quasi_star_vertex_test,
    random_functional_sweep, star_paranormal_vertex_test, BoundMode, ClassReport, Direction,
    InequalityKind, SweepSummary, DEFAULT_HORIZON,
};
use shiftlab_core::norm::{
    norm_attainment, operator_norm_sq, power_attainment, weight_limit_classify, AttainmentReport,
    SupResult, WeightLimitReport,
};
use shiftlab_core::spectra::{an_restriction_probe, diag_spectrum, SpectraError, TSequence};
use shiftlab_core::tree::validate_tree;
use shiftlab_core::{TreeSpec, ValidatedTree};
use shiftlab_matrix::blocks::{block_decompose, normality_check, peel_decomposition};
use shiftlab_matrix::dense::matrix_rows;
use shiftlab_matrix::quasi::{quasi_star_matrix_test, Budget, QuasiVerdict};
use shiftlab_matrix::DenseMatrix;

/// Default number of randomized trials for seeded analyses.
pub const DEFAULT_TRIALS: u64 = 200;

/// Environment variable overriding the default tail horizon.
pub const HORIZON_ENV: &str = "SHIFTLAB_HORIZON";

/// Every analysis the engine can run, in canonical (alphabetical) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Analysis {
    Attainment,
    Bound,
    Classify,
    Decompose,
    FunctionalSweep,
    Norm,
    Probe,
    QuasiMatrix,
    Spectrum,
    Validate,
}

impl Analysis {
    pub const ALL: [Analysis; 10] = [
        Analysis::Attainment,
        Analysis::Bound,
        Analysis::Classify,
        Analysis::Decompose,
        Analysis::FunctionalSweep,
        Analysis::Norm,
        Analysis::Probe,
        Analysis::QuasiMatrix,
        Analysis::Spectrum,
        Analysis::Validate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Analysis::Attainment => "attainment",
            Analysis::Bound => "bound",
            Analysis::Classify => "classify",
            Analysis::Decompose => "decompose",
            Analysis::FunctionalSweep => "functional-sweep",
            Analysis::Norm => "norm",
            Analysis::Probe => "probe",
            Analysis::QuasiMatrix => "quasi-matrix",
            Analysis::Spectrum => "spectrum",
            Analysis::Validate => "validate",
        }
    }

    pub fn parse(name: &str) -> Option<Analysis> {
        Analysis::ALL.into_iter().find(|a| a.name() == name)
    }

    /// Tree analyses reject matrix inputs and vice versa.
    pub fn applies_to_tree(self) -> bool {
        !matches!(self, Analysis::Decompose | Analysis::QuasiMatrix)
    }

    /// Whether the analysis consumes the seed and trial budget.
    pub fn is_seeded(self) -> bool {
        matches!(
            self,
            Analysis::FunctionalSweep | Analysis::QuasiMatrix | Analysis::Decompose
        )
    }
}

/// A parsed input: either a validated tree or a dense matrix.
pub enum Input {
    Tree(ValidatedTree),
    Matrix(DenseMatrix),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Tree(_) => "tree",
            Input::Matrix(_) => "matrix",
        }
    }
}

/// Detects the input kind from the JSON shape: an object with `n` and
/// `rows` is a matrix, anything else is treated as a tree specification.
pub fn parse_input_str(text: &str) -> Result<Input> {
    let value: Value =
        serde_json::from_str(text).context("input is not valid JSON")?;
    let is_matrix = value
        .as_object()
        .is_some_and(|o| o.contains_key("n") && o.contains_key("rows"));
    if is_matrix {
        let m = DenseMatrix::from_json_str(text).map_err(|e| anyhow!("matrix input: {e}"))?;
        Ok(Input::Matrix(m))
    } else {
        let spec = TreeSpec::from_json_str(text).context("tree input")?;
        let tree = validate_tree(&spec).map_err(|e| anyhow!("tree input: {e}"))?;
        Ok(Input::Tree(tree))
    }
}

pub fn load_input(path: &Path) -> Result<Input> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    parse_input_str(&text).with_context(|| format!("while parsing {}", path.display()))
}

pub fn fixture_input(name: &str) -> Result<Input> {
    let spec = shiftlab_core::fixtures::by_name(name).ok_or_else(|| {
        anyhow!(
            "unknown fixture {name:?}; available: {}",
            shiftlab_core::fixtures::FIXTURE_NAMES.join(", ")
        )
    })?;
    let tree = validate_tree(&spec).map_err(|e| anyhow!("fixture {name}: {e}"))?;
    Ok(Input::Tree(tree))
}

/// Knobs shared by all analyses.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub horizon: u64,
    pub seed: u64,
    pub trials: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            horizon: DEFAULT_HORIZON,
            seed: 0,
            trials: DEFAULT_TRIALS,
        }
    }
}

/// Resolves the horizon: explicit flag, then the environment variable,
/// then the built-in default.
pub fn resolve_horizon(flag: Option<u64>, env: Option<&str>) -> Result<u64> {
    if let Some(h) = flag {
        return Ok(h);
    }
    match env {
        Some(raw) => raw
            .trim()
            .parse::<u64>()
            .with_context(|| format!("{HORIZON_ENV} must be a nonnegative integer, got {raw:?}")),
        None => Ok(DEFAULT_HORIZON),
    }
}

/// The default bundle for each input kind.
pub fn default_analyses(input: &Input) -> Vec<Analysis> {
    match input {
        Input::Tree(_) => vec![
            Analysis::Attainment,
            Analysis::Bound,
            Analysis::Classify,
            Analysis::Norm,
            Analysis::Spectrum,
            Analysis::Validate,
        ],
        Input::Matrix(_) => vec![Analysis::Decompose, Analysis::QuasiMatrix],
    }
}

pub fn parse_analysis_list(names: &[String]) -> Result<Vec<Analysis>> {
    let mut out = Vec::new();
    for name in names {
        let a = Analysis::parse(name).ok_or_else(|| {
            anyhow!(
                "unknown analysis {name:?}; available: {}",
                Analysis::ALL.map(|a| a.name()).join(", ")
            )
        })?;
        if !out.contains(&a) {
            out.push(a);
        }
    }
    if out.is_empty() {
        bail!("at least one analysis must be selected");
    }
    Ok(out)
}

/// A finished run: the machine-readable document, the human-readable text,
/// and the exit status (0 consistent, 2 when a falsification flag fired).
#[derive(Debug)]
pub struct RunOutcome {
    pub doc: Value,
    pub human: String,
    pub exit_status: u8,
}

/// Renders the machine document exactly as written to disk.
pub fn render_json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

/// Runs the requested analyses against one input and assembles the report.
/// `source` labels the input in the provenance block (e.g. "fixture:a").
pub fn run(input: &Input, analyses: &[Analysis], options: &Options, source: &str) -> Result<RunOutcome> {
    for a in analyses {
        match input {
            Input::Tree(_) if !a.applies_to_tree() => {
                bail!("analysis {:?} needs a matrix input", a.name())
            }
            Input::Matrix(_) if a.applies_to_tree() => {
                bail!("analysis {:?} needs a tree input", a.name())
            }
            _ => {}
        }
    }
    let mut ordered: Vec<Analysis> = analyses.to_vec();
    ordered.sort();

    let mut sections: BTreeMap<String, Value> = BTreeMap::new();
    let mut human = String::new();
    let mut falsified: Vec<String> = Vec::new();
    writeln!(human, "shiftlab {} — {} input", env!("CARGO_PKG_VERSION"), input.kind()).unwrap();
    writeln!(human, "source: {source}").unwrap();

    for a in &ordered {
        let section = match (input, a) {
            (Input::Tree(tree), Analysis::Validate) => validate_section(tree)?,
            (Input::Tree(tree), Analysis::Norm) => norm_section(tree)?,
            (Input::Tree(tree), Analysis::Attainment) => attainment_section(tree, &mut falsified)?,
            (Input::Tree(tree), Analysis::Classify) => classify_section(tree, options.horizon)?,
            (Input::Tree(tree), Analysis::FunctionalSweep) => sweep_section(tree, options)?,
            (Input::Tree(tree), Analysis::Bound) => bound_section(tree, options.horizon)?,
            (Input::Tree(tree), Analysis::Spectrum) => spectrum_section(tree),
            (Input::Tree(tree), Analysis::Probe) => probe_section(tree, &mut falsified),
            (Input::Matrix(m), Analysis::QuasiMatrix) => quasi_matrix_section(m, options),
            (Input::Matrix(m), Analysis::Decompose) => decompose_section(m, options)?,
            _ => unreachable!("applicability checked above"),
        };
        writeln!(human, "\n== {} ==", a.name()).unwrap();
        human.push_str(&section.text);
        sections.insert(a.name().to_string(), section.value);
    }

    let exit_status: u8 = if falsified.is_empty() { 0 } else { 2 };
    writeln!(human).unwrap();
    if !falsified.is_empty() {
        writeln!(human, "falsified:").unwrap();
        for f in &falsified {
            writeln!(human, "  - {f}").unwrap();
        }
    }
    writeln!(human, "exit status: {exit_status}").unwrap();

    let mut provenance = serde_json::Map::new();
    provenance.insert("horizon".into(), json!(options.horizon));
    if ordered.iter().any(|a| a.is_seeded()) {
        provenance.insert("seed".into(), json!(options.seed));
        provenance.insert("trials".into(), json!(options.trials));
    }
    provenance.insert("source".into(), json!(source));
    provenance.insert("tool".into(), json!("shiftlab"));
    provenance.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));

    let doc = json!({
        "analyses": sections,
        "exit_status": exit_status,
        "falsified": falsified,
        "provenance": Value::Object(provenance),
    });
    Ok(RunOutcome {
        doc,
        human,
        exit_status,
    })
}

struct Section {
    value: Value,
    text: String,
}

fn validate_section(tree: &ValidatedTree) -> Result<Section> {
    let spec = tree.spec();
    let round_trip = TreeSpec::from_json_str(&spec.to_json_string())
        .map(|parsed| parsed == *spec)
        .unwrap_or(false);
    let rays: Vec<String> = tree.rays().map(|r| r.id.clone()).collect();
    let value = json!({
        "core_vertex_count": tree.core_vertex_count(),
        "ray_count": rays.len(),
        "rays": rays,
        "root": tree.root().to_string(),
        "round_trip_exact": round_trip,
    });
    let mut text = String::new();
    writeln!(
        text,
        "root {}; {} core vertex(es); {} ray(s){}{}",
        tree.root(),
        tree.core_vertex_count(),
        rays.len(),
        if rays.is_empty() { "" } else { ": " },
        rays.join(", ")
    )
    .unwrap();
    for ray in tree.rays() {
        writeln!(text, "  {}", human::describe_ray(ray)).unwrap();
    }
    writeln!(
        text,
        "round-trip through JSON: {}",
        if round_trip { "exact" } else { "NOT EXACT" }
    )
    .unwrap();
    Ok(Section { value, text })
}

fn norm_section(tree: &ValidatedTree) -> Result<Section> {
    let mut value = serde_json::Map::new();
    let mut text = String::new();
    for n in 1..=3u32 {
        let sup: SupResult = operator_norm_sq(tree, n)?;
        text.push_str(&human::render_sup(&format!("‖S^{n}‖²"), &sup));
        value.insert(format!("power_{n}"), serde_json::to_value(&sup)?);
    }
    Ok(Section {
        value: Value::Object(value),
        text,
    })
}

fn attainment_section(tree: &ValidatedTree, falsified: &mut Vec<String>) -> Result<Section> {
    let mut value = serde_json::Map::new();
    let mut text = String::new();
    for n in 1..=3u32 {
        let report: AttainmentReport = if n == 1 {
            norm_attainment(tree)?
        } else {
            power_attainment(tree, n)?
        };
        text.push_str(&human::render_attainment(&report));
        value.insert(format!("power_{n}"), serde_json::to_value(&report)?);
    }
    let limits: WeightLimitReport = weight_limit_classify(tree)?;
    for entry in &limits.falsified {
        falsified.push(format!("attainment: {entry}"));
    }
    text.push_str(&human::render_weight_limits(&limits));
    value.insert("weight_limits".into(), serde_json::to_value(&limits)?);
    Ok(Section {
        value: Value::Object(value),
        text,
    })
}

fn classify_section(tree: &ValidatedTree, horizon: u64) -> Result<Section> {
    let reports: Vec<ClassReport> = vec![
        hyponormal_basis_test(tree, horizon)?,
        star_paranormal_vertex_test(tree, horizon)?,
        quasi_star_vertex_test(tree, horizon)?,
    ];
    let flags = hierarchy_spot_check(tree)?;
    let mut value = serde_json::Map::new();
    let mut text = String::new();
    for report in &reports {
        text.push_str(&human::render_class(report));
        value.insert(report.class.clone(), serde_json::to_value(report)?);
    }
    writeln!(
        text,
        "hierarchy spot check (star holds strictly below a quasi failure): {}",
        human::render_vertices(&flags)
    )
    .unwrap();
    value.insert("hierarchy_flags".into(), serde_json::to_value(&flags)?);
    Ok(Section {
        value: Value::Object(value),
        text,
    })
}

fn sweep_section(tree: &ValidatedTree, options: &Options) -> Result<Section> {
    let runs = [
        (InequalityKind::QuasiDef, Direction::Forward),
        (InequalityKind::QuasiDef, Direction::Adjoint),
        (InequalityKind::QuasiThm, Direction::Forward),
        (InequalityKind::StarParanormalDef, Direction::Forward),
        (InequalityKind::StarParanormalDef, Direction::Adjoint),
        (InequalityKind::StarParanormalThm21, Direction::Forward),
    ];
    let mut value = serde_json::Map::new();
    let mut text = String::new();
    for (kind, direction) in runs {
        let summary: SweepSummary =
            random_functional_sweep(tree, kind, direction, options.trials, options.seed)?;
        text.push_str(&human::render_sweep(&summary));
        value.insert(summary.kind.clone(), serde_json::to_value(&summary)?);
    }
    Ok(Section {
        value: Value::Object(value),
        text,
    })
}

fn bound_section(tree: &ValidatedTree, horizon: u64) -> Result<Section> {
    let child = densely_defined_bound(tree, BoundMode::ChildRatioSum, horizon)?;
    let local = densely_defined_bound(tree, BoundMode::LocalRatio, horizon)?;
    let mut text = String::new();
    text.push_str(&human::render_sup("sup Σ λ_u²/(1+‖S²e_u‖²)", &child));
    text.push_str(&human::render_sup("sup ‖Se_u‖⁴/(1+‖Se_u‖²)", &local));
    Ok(Section {
        value: json!({
            "child_ratio_sum": serde_json::to_value(&child)?,
            "local_ratio": serde_json::to_value(&local)?,
        }),
        text,
    })
}

fn spectrum_section(tree: &ValidatedTree) -> Section {
    let report = diag_spectrum(tree);
    Section {
        text: human::render_spectrum(&report),
        value: serde_json::to_value(&report).expect("spectrum serializes"),
    }
}

fn probe_section(tree: &ValidatedTree, falsified: &mut Vec<String>) -> Section {
    match an_restriction_probe(tree, &TSequence::Identity) {
        Ok(report) => {
            for flag in &report.flags {
                falsified.push(format!("probe: {flag}"));
            }
            let mut value = serde_json::to_value(&report).expect("probe serializes");
            value
                .as_object_mut()
                .expect("probe report is an object")
                .insert("applicable".into(), json!(true));
            Section {
                text: human::render_probe(&report),
                value,
            }
        }
        Err(SpectraError::FamilyInapplicable { reason }) => Section {
            text: format!("not applicable: {reason}\n"),
            value: json!({ "applicable": false, "reason": reason }),
        },
    }
}

fn quasi_matrix_section(m: &DenseMatrix, options: &Options) -> Section {
    let budget = budget_from(options);
    let verdict = quasi_star_matrix_test(m, &budget, options.seed);
    let value = json!({
        "budget": {
            "descent_iters": budget.descent_iters,
            "k_grid": budget.k_grid,
            "sphere_samples": budget.sphere_samples,
        },
        "verdict": verdict_value(&verdict),
    });
    Section {
        text: human::render_quasi_verdict(&verdict),
        value,
    }
}

fn verdict_value(verdict: &QuasiVerdict) -> Value {
    match verdict {
        QuasiVerdict::Pass(evidence) => json!({
            "outcome": "PASS",
            "min_gap": evidence.min_gap,
            "note": evidence.note,
            "pencil_min_eig": evidence.pencil_min_eig,
            "samples_checked": evidence.samples_checked,
        }),
        QuasiVerdict::Fail(witness) => json!({
            "outcome": "FAIL",
            "lhs": witness.lhs,
            "rhs": witness.rhs,
            "witness": witness.x.iter().copied().collect::<Vec<f64>>(),
        }),
    }
}

fn decompose_section(m: &DenseMatrix, options: &Options) -> Result<Section> {
    let budget = budget_from(options);
    let verdict = quasi_star_matrix_test(m, &budget, options.seed);
    let peel = block_decompose(m, verdict.passed()).map_err(|e| anyhow!("decompose: {e}"))?;
    let form = peel_decomposition(m).map_err(|e| anyhow!("decompose: {e}"))?;
    let normality = normality_check(m);

    let stages: Vec<Value> = form
        .stages
        .iter()
        .map(|s| {
            json!({
                "alpha": s.alpha,
                "basis": matrix_rows(s.basis.basis()),
                "dim": s.basis.dim(),
                "u": matrix_rows(&s.u),
                "unitary_defect": s.unitary_defect,
            })
        })
        .collect();
    let residual = match &form.residual {
        None => Value::Null,
        Some(r) => json!({
            "a": matrix_rows(&r.a),
            "alpha": r.alpha,
            "b": matrix_rows(&r.b),
            "basis": matrix_rows(r.basis.basis()),
            "dim": r.basis.dim(),
            "lower_left_norm": r.lower_left_norm,
            "u": matrix_rows(&r.u),
        }),
    };
    let value = json!({
        "block_form": {
            "reassembly_error": form.reassembly_error,
            "residual": residual,
            "stages": stages,
        },
        "normality": {
            "commutator_frobenius": normality.commutator_frobenius,
            "invertible": normality.invertible,
            "normal": normality.normal,
            "relative_defect": normality.relative_defect,
            "smallest_singular": normality.smallest_singular,
        },
        "single_peel": {
            "alpha": peel.alpha,
            "a": matrix_rows(&peel.a),
            "b": matrix_rows(&peel.b),
            "b_norm": peel.b_norm,
            "b_strictly_below_norm": peel.b_strictly_below_norm,
            "hypothesis": peel.hypothesis,
            "lower_left_norm": peel.lower_left_norm,
            "m_basis": matrix_rows(peel.m_basis.basis()),
            "m_dim": peel.m_basis.dim(),
            "u": matrix_rows(&peel.u),
            "u_isometry_defect": peel.u_isometry_defect,
            "u_star_a_norm": peel.u_star_a_norm,
        },
    });
    let text = human::render_decompose(&peel, &form, &normality);
    Ok(Section { value, text })
}

fn budget_from(options: &Options) -> Budget {
    Budget {
        sphere_samples: usize::try_from(options.trials).unwrap_or(usize::MAX),
        ..Budget::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn input_detection_distinguishes_matrices_from_trees() {
        let m = parse_input_str(r#"{"n": 1, "rows": [[2.0]]}"#).unwrap();
        assert_eq!(m.kind(), "matrix");
        let tree_json = shiftlab_core::fixtures::fixture_a_spec().to_json_string();
        let t = parse_input_str(&tree_json).unwrap();
        assert_eq!(t.kind(), "tree");
        assert!(parse_input_str("not json").is_err());
    }

    #[test]
    fn horizon_resolution_prefers_flag_then_env_then_default() {
        assert_eq!(resolve_horizon(Some(7), Some("9")).unwrap(), 7);
        assert_eq!(resolve_horizon(None, Some("9")).unwrap(), 9);
        assert_eq!(resolve_horizon(None, None).unwrap(), DEFAULT_HORIZON);
        assert!(resolve_horizon(None, Some("banana")).is_err());
    }

    #[test]
    fn analysis_names_round_trip_and_stay_sorted() {
        for a in Analysis::ALL {
            assert_eq!(Analysis::parse(a.name()), Some(a));
        }
        let names: Vec<&str> = Analysis::ALL.map(|a| a.name()).to_vec();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn tree_analyses_reject_matrix_inputs_and_vice_versa() {
        let m = parse_input_str(r#"{"n": 1, "rows": [[2.0]]}"#).unwrap();
        let err = run(&m, &[Analysis::Norm], &Options::default(), "test").unwrap_err();
        assert!(err.to_string().contains("tree input"));
        let t = fixture_input("a").unwrap();
        let err = run(&t, &[Analysis::Decompose], &Options::default(), "test").unwrap_err();
        assert!(err.to_string().contains("matrix input"));
    }

    #[test]
    fn empty_tree_reports_norm_zero() {
        let spec = TreeSpec {
            root: "o".into(),
            core_edges: vec![],
            rays: vec![],
        };
        let input = Input::Tree(validate_tree(&spec).unwrap());
        let outcome = run(&input, &[Analysis::Norm], &Options::default(), "test").unwrap();
        assert_eq!(outcome.exit_status, 0);
        let power_1 = &outcome.doc["analyses"]["norm"]["power_1"];
        assert_eq!(power_1["value_sq"], json!("0"));
        assert_eq!(power_1["attained"], json!(true));
    }

    #[test]
    fn probe_flags_drive_the_exit_status_to_two() {
        let input = fixture_input("d").unwrap();
        let outcome = run(&input, &[Analysis::Probe], &Options::default(), "test").unwrap();
        assert_eq!(outcome.exit_status, 2);
        assert_eq!(outcome.doc["exit_status"], json!(2));
        assert!(!outcome.doc["falsified"].as_array().unwrap().is_empty());
    }

    #[test]
    fn seeded_runs_are_byte_identical() {
        let input = fixture_input("b").unwrap();
        let analyses = [Analysis::FunctionalSweep, Analysis::Classify];
        let opts = Options {
            seed: 11,
            trials: 50,
            ..Options::default()
        };
        let one = render_json(&run(&input, &analyses, &opts, "test").unwrap().doc);
        let two = render_json(&run(&input, &analyses, &opts, "test").unwrap().doc);
        assert_eq!(one, two);
        assert!(one.contains("\"seed\": 11"));
    }
}
