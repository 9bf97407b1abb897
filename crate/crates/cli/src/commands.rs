use std::fs;
use std::path::Path;

use g2ricci::check::{all_pass, Check};
use g2ricci::classifier::{self, det_e2, omega_form_identities, EigenTriple};
use g2ricci::liegroup::AlgebraFile;
use g2ricci::linalg::Spectrum;
use g2ricci::numgeom::{run_kahler, run_theorem1, KahlerConfig};
use g2ricci::scalar::{self, int, ratio, Scalar};
use g2ricci::{
    pipeline, Classifier, CliffordRep, Error, Form, G2Structure, InvariantConnection,
    LieAlgebraData,
};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::args::{Command, GroupArgs, NumArgs};
use crate::output::to_tree;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidParameter(_)
            | Error::InvalidAlgebra(_)
            | Error::IndexOutOfRange { .. }
            | Error::UnsupportedDimension(..)
            | Error::WrongDegree { .. }
            | Error::DimensionMismatch(..)
            | Error::NotG2Form(_) => CliError::Input(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

pub struct Report {
    pub title: String,
    pub tree: Value,
    pub pass: bool,
}

impl Report {
    fn new<T: Serialize>(title: impl Into<String>, body: &T, pass: bool) -> Self {
        Self {
            title: title.into(),
            tree: to_tree(body),
            pass,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn located(path: &Path, e: g2ricci::ParseError) -> CliError {
    CliError::Input(format!(
        "{}:{}:{}: {}",
        path.display(),
        e.line,
        e.column,
        e.message
    ))
}

fn fmt(s: &Scalar) -> String {
    scalar::format(s)
}

pub fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Decompose { file } => decompose(file),
        Command::Lemma { m1, m2, m3, mu } => {
            lemma(EigenTriple::new(m1.clone(), m2.clone(), m3.clone()), mu)
        }
        Command::Values { mu } => values(mu),
        Command::Kernels => kernels(),
        Command::DetE2 { b, mu } => det(b, mu),
        Command::GroupReport(args) => group_report(args),
        Command::Kahler(args) => {
            let cfg = numeric_config(args)?;
            let r = run_kahler(&cfg)?;
            Ok(Report::new("Kähler example", &r, r.pass))
        }
        Command::Theorem1(args) => {
            let cfg = numeric_config(args)?;
            let r = run_theorem1(&cfg)?;
            Ok(Report::new("5-dimensional bundle", &r, r.pass()))
        }
        Command::Selftest => selftest(),
    }
}

#[derive(Serialize)]
struct Decomposition {
    input: Form,
    #[serde(serialize_with = "ser")]
    mu: Scalar,
    lambda1: Form,
    lambda7: Form,
    lambda27: Form,
}

fn ser<S: serde::Serializer>(s: &Scalar, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&fmt(s))
}

fn decompose(path: &Path) -> Result<Report, CliError> {
    let form = Form::parse(&read(path)?).map_err(|e| located(path, e))?;
    if form.dim() != 7 || form.degree() != 3 {
        return Err(CliError::Input(format!(
            "{}: need a 3-form in dimension 7, got degree {} in dimension {}",
            path.display(),
            form.degree(),
            form.dim()
        )));
    }
    let g2 = G2Structure::standard();
    let (lambda1, lambda7, lambda27) = g2.project3(&form)?;
    let body = Decomposition {
        mu: form.inner(&g2.omega) / int(7),
        input: form,
        lambda1,
        lambda7,
        lambda27,
    };
    Ok(Report::new("Λ³ = Λ³₁ ⊕ Λ³₇ ⊕ Λ³₂₇", &body, true))
}

#[derive(Serialize)]
struct LemmaReport {
    m: EigenTriple,
    #[serde(serialize_with = "ser")]
    mu: Scalar,
    dimension: i64,
    abc: Option<[String; 3]>,
    abc_constant: bool,
    /// `b` solving the system, `¼(m₁+m₂-m₃)`.
    solved_b: String,
    particular: Option<Form>,
    directions: Vec<Form>,
    checks: Vec<Check>,
}

fn lemma(m: EigenTriple, mu: &Scalar) -> Result<Report, CliError> {
    let fam = Classifier::new().solve_family(&m, mu);
    let abc = fam.abc();
    let [want_a, want_b] = classifier::displayed_ab(&m);
    let mut checks = vec![Check::new(
        "dimension 9",
        fam.dimension() == 9,
        fam.dimension().to_string(),
    )];
    if let Some([a, b, c]) = &abc {
        checks.push(Check::new(
            "c = 0",
            *c == int(0) && fam.abc_constant(),
            fmt(c),
        ));
        checks.push(Check::equal("a = -¼(m₁-m₂+m₃)", a, &want_a));
        checks.push(Check::equal("b = ¼(-m₁+m₂+m₃)", b, &want_b));
    }
    let body = LemmaReport {
        dimension: fam.dimension(),
        abc: abc.as_ref().map(|v| v.clone().map(|s| fmt(&s))),
        abc_constant: fam.abc_constant(),
        solved_b: fmt(&classifier::solved_ab(&m)[1]),
        particular: fam.particular(),
        directions: fam.directions(),
        m,
        mu: mu.clone(),
        checks,
    };
    let pass = all_pass(&body.checks);
    Ok(Report::new("Λ³₂₇ eigen-torsion family", &body, pass))
}

fn values(mu: &Scalar) -> Result<Report, CliError> {
    let e = Classifier::new().torsion_value_enumeration(mu);
    let half = mu / int(2);
    let mut want = vec![-half.clone(), int(0), half, mu.clone()];
    want.sort();
    want.dedup();
    let got = e.values();
    let checks = vec![
        Check::new(
            "values {-μ/2, 0, μ/2, μ}",
            got == want,
            got.iter().map(fmt).collect::<Vec<_>>().join(", "),
        ),
        Check::new("family members agree", e.family_agrees(), ""),
    ];
    let pass = all_pass(&checks);
    #[derive(Serialize)]
    struct Body {
        enumeration: classifier::ValueEnumeration,
        checks: Vec<Check>,
    }
    Ok(Report::new(
        "T(θ₁, θ₂, θ₃) values",
        &Body {
            enumeration: e,
            checks,
        },
        pass,
    ))
}

fn kernels() -> Result<Report, CliError> {
    let dims = Classifier::new().kernel_dims();
    let checks: Vec<Check> = [(1, 27), (3, 14), (4, 9)]
        .into_iter()
        .map(|(k, want)| Check::equal(format!("k = {k}"), &dims[k - 1], &want))
        .collect();
    let pass = all_pass(&checks);
    #[derive(Serialize)]
    struct Body {
        dims: std::collections::BTreeMap<String, usize>,
        checks: Vec<Check>,
    }
    let dims = (1..=4).map(|k| (k.to_string(), dims[k - 1])).collect();
    Ok(Report::new(
        "Λ³ annihilators of Ψ₀ … Ψₖ₋₁",
        &Body { dims, checks },
        pass,
    ))
}

fn det(b: &Scalar, mu: &Scalar) -> Result<Report, CliError> {
    let r = det_e2(b, mu)?;
    let mut checks = Vec::new();
    match &r.brute_n5 {
        Some(d) => checks.push(Check::equal(
            "closed form = det on f₁…f₄",
            &r.closed_form,
            d,
        )),
        None => log::warn!(
            "no rational template member found for b = {}; closed form not cross-checked",
            fmt(b)
        ),
    }
    let pass = all_pass(&checks);
    #[derive(Serialize)]
    struct Body {
        report: classifier::DetE2Report,
        checks: Vec<Check>,
    }
    Ok(Report::new(
        "det of θ₃⨼T",
        &Body { report: r, checks },
        pass,
    ))
}

fn group_report(args: &GroupArgs) -> Result<Report, CliError> {
    let (algebra, default_placement) = match &args.file {
        Some(path) => {
            let parsed = AlgebraFile::parse(&read(path)?).map_err(|e| located(path, e))?;
            let g = parsed.into_algebra()?;
            let n = g.dim();
            (g, (0..n).collect::<Vec<_>>())
        }
        None => {
            let lambda = args.lambda.clone().unwrap_or_else(|| int(1));
            (
                LieAlgebraData::r4_su2(&lambda),
                LieAlgebraData::R4_SU2_PLACEMENT.to_vec(),
            )
        }
    };
    let placement = match &args.placement {
        Some(p) => {
            if p.contains(&0) {
                return Err(CliError::Input("placement slots are 1-based".into()));
            }
            p.iter().map(|s| s - 1).collect()
        }
        None => default_placement,
    };
    let r = pipeline::run(&algebra, &placement)?;
    let pass = r.pass();
    Ok(Report::new("G2 group report", &r, pass))
}

fn toml_error(path: &Path, text: &str, e: toml::de::Error) -> CliError {
    let (line, col) = e.span().map_or((0, 0), |s| {
        let before = &text[..s.start.min(text.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    });
    CliError::Input(format!("{}:{line}:{col}: {}", path.display(), e.message()))
}

fn numeric_config(args: &NumArgs) -> Result<KahlerConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = read(path)?;
            toml::from_str(&text).map_err(|e| toml_error(path, &text, e))?
        }
        None => KahlerConfig::default(),
    };
    let pair = |v: &Vec<f64>| (v[0], v[1]);
    if let Some(a) = args.a {
        cfg.a = a;
    }
    if let Some(d) = &args.domain {
        cfg.x_range = pair(d);
    }
    if let Some(b) = &args.boundary {
        cfg.boundary = pair(b);
    }
    if let Some(g) = args.grid {
        cfg.grid = g;
    }
    if let Some(s) = args.stencil {
        cfg.stencil = s.into();
    }
    if let Some(n) = args.samples {
        cfg.samples = n;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(h) = args.step {
        cfg.step = h;
    }
    if let Some(t) = args.tolerance {
        cfg.tolerance = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Serialize)]
struct Section {
    name: String,
    checks: Vec<Check>,
}

fn section(name: &str, checks: Vec<Check>) -> Section {
    Section {
        name: name.into(),
        checks,
    }
}

/// Internal consistency of every module on the built-in examples.
fn selftest() -> Result<Report, CliError> {
    let mut sections = Vec::new();

    let rep = CliffordRep::build()?;
    let g2 = G2Structure::standard();
    let spec = rep.spectrum(&g2.omega)?;
    sections.push(section(
        "spin7 / g2",
        vec![
            Check::new("Clifford relations", rep.self_check().is_ok(), ""),
            Check::new(
                "spectrum of ω",
                spec == Spectrum::from_pairs(&[(int(-7), 1), (int(1), 7)]),
                spec.to_string(),
            ),
            Check::new(
                "ranks (1, 7, 27)",
                g2.splitting_ranks() == [1, 7, 27],
                format!("{:?}", g2.splitting_ranks()),
            ),
        ],
    ));

    let cl = Classifier::new();
    let mu = int(7);
    let fam = cl.solve_family(&EigenTriple::from_roots([true, true, false], &mu), &mu);
    let e = cl.torsion_value_enumeration(&mu);
    let two = cl.two_field_case_analysis(&mu);
    let omega = omega_form_identities(&two.template_instance.form7(), &mu)?;
    let det5 = det_e2(&int(5), &mu)?;
    sections.push(section(
        "classifier",
        vec![
            Check::new(
                "family dimension 9",
                fam.dimension() == 9,
                fam.dimension().to_string(),
            ),
            Check::new(
                "solved relations",
                fam.solved_relations() == Some([true; 3]),
                "",
            ),
            Check::equal(
                "kernel dims",
                &format!("{:?}", cl.kernel_dims()),
                &"[27, 20, 14, 9]".to_string(),
            ),
            Check::new(
                "fibers 1, 3, 3, 1",
                e.values().iter().map(|v| e.fiber(v)).eq([1, 3, 3, 1]),
                "",
            ),
            Check::new("value enumeration matches members", e.family_agrees(), ""),
            Check::new(
                "det vanishes at b = 5μ/7",
                det5.closed_form == int(0),
                fmt(&det5.closed_form),
            ),
            Check::new(
                "two-field analysis",
                all_pass(&two.checks),
                format!("{} branches", two.branches.len()),
            ),
            Check::new("Ω identities", omega.pass(), omega.ricci_spectrum.clone()),
        ],
    ));

    let g = LieAlgebraData::r4_su2(&int(1));
    let cartan = g.cartan_form()?;
    let cs = InvariantConnection::with_torsion(&g, &-&cartan)?;
    let report = pipeline::run(&g, &LieAlgebraData::R4_SU2_PLACEMENT)?;
    let misplaced = pipeline::run(&g, &pipeline::R4_SU2_MISPLACEMENT)?;
    let get = |name: &str| {
        report
            .checks
            .iter()
            .find(|c| c.name.starts_with(name))
            .is_some_and(|c| c.pass)
    };
    let c = report
        .characteristic
        .as_ref()
        .ok_or_else(|| CliError::Failed("built-in example is not cocalibrated".into()))?;
    sections.push(section(
        "liegroup / g2pipeline",
        vec![
            Check::new(
                "Cartan–Schouten connection is flat",
                cs.curvature().is_flat(),
                "",
            ),
            Check::new(
                "cocalibrated",
                report.cocalibrated,
                report.cocalibration_residual.to_string(),
            ),
            Check::equal("‖T‖² = μ²", &c.torsion_norm2, &(&c.mu * &c.mu)),
            Check::equal("Scal = 3μ²/2", &c.scal_g, &(ratio(3, 2) * &c.mu * &c.mu)),
            Check::new("Ric^∇ = 0", c.ric_nabla.is_zero(), ""),
            Check::new("equivalent conditions agree", c.equivalence.agree(), ""),
            Check::new("∇ω = 0", get("∇ω"), ""),
            Check::new("Σ θᵢ ∧ (θᵢ⨼T) identity", get("Σ θᵢ ∧ (θᵢ⨼T)"), ""),
            Check::new(
                "misplaced ω is not cocalibrated",
                !misplaced.cocalibrated,
                misplaced.cocalibration_residual.to_string(),
            ),
        ],
    ));

    let cfg = KahlerConfig {
        samples: 3,
        ..KahlerConfig::default()
    };
    let k = run_kahler(&cfg)?;
    let t1 = run_theorem1(&cfg)?;
    sections.push(section(
        "numgeom",
        vec![
            Check::new(
                "Kähler eigenvalues",
                k.pass,
                format!("max error {:.3e}", k.max_error),
            ),
            Check::new("bundle checks", t1.pass(), ""),
        ],
    ));

    let pass = sections.iter().all(|s| all_pass(&s.checks));
    #[derive(Serialize)]
    struct Body {
        sections: Vec<Section>,
    }
    Ok(Report::new("self-test", &Body { sections }, pass))
}
