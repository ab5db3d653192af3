//! The five subcommands. Each returns a document and an exit status.

use crate::config::{Format, Method, RunConfig, Space, Units, Vary};
use crate::output::{format_float, Cell, Document};
use anyhow::{bail, Context, Result};
use eup_coulomb::dirac::{self, hydrogen_table};
use eup_coulomb::oracle::ShootOptions;
use eup_coulomb::scan::{self, ScanPoint};
use eup_coulomb::verify::{self, Comparison, Grid, IdentityCheck, Tally, Thresholds};
use eup_coulomb::wavefn::{self, y_of_theta};
use eup_coulomb::{DeformationParams, EquationKind, Error, Family, SpaceKind, State, Validity};
use rayon::prelude::*;

pub struct Outcome {
    pub document: Document,
    pub status: u8,
    /// Printed to stderr after the document is written.
    pub message: Option<String>,
}

impl Outcome {
    fn ok(document: Document) -> Self {
        Self {
            document,
            status: 0,
            message: None,
        }
    }
}

/// Reference ϵ and |Δℰ| columns of the hydrogen-like table (eV), in row order.
pub const REFERENCE_TABLE: [(f64, f64); 9] = [
    (-13.605, 0.0),
    (-3.40132, 3.4150e-8),
    (-3.40132, 3.4150e-8),
    (-3.40127, 0.0),
    (-1.51169, 1.9405e-8),
    (-1.51169, 1.9405e-8),
    (-1.51168, 1.2128e-8),
    (-1.51168, 1.2128e-8),
    (-1.51167, 0.0),
];

pub const DEFAULT_SCAN_ETAS: [f64; 4] = [0.0, 1e-4, 1e-3, 1e-2];

fn validity_label(v: Validity) -> &'static str {
    match v {
        Validity::Ok => "ok",
        Validity::ComplexExponent => "complex_exponent",
        Validity::UnphysicalRadicand => "unphysical_radicand",
    }
}

fn classify(e: &Error) -> Option<Validity> {
    match e {
        Error::ComplexExponent(_) => Some(Validity::ComplexExponent),
        Error::UnphysicalRadicand(_) => Some(Validity::UnphysicalRadicand),
        _ => None,
    }
}

fn j_cell(s: &State) -> Cell {
    Cell::Float(s.two_j().map(|t| t as f64 / 2.0))
}

fn eq_label(kind: EquationKind) -> &'static str {
    kind.label()
}

pub fn spectrum(cfg: RunConfig) -> Result<Outcome> {
    let eq = cfg.equation()?;
    let z = cfg.charge()?;
    let units = cfg.units_or(Units::Natural);
    let sys = units.system();
    let space = cfg.space.unwrap_or(Space::Both);
    let states = cfg.states(eq)?;
    let mut resolved = cfg.clone();
    resolved.units = Some(units);
    resolved.space = Some(space);
    let eta = cfg.single_eta(&sys)?;
    let mut doc = Document::new(
        "spectrum",
        resolved,
        vec![
            "eq",
            "space",
            "Z",
            "N",
            "l",
            "j",
            "label",
            "eta",
            "energy",
            "epsilon",
            "first_order",
            "binding",
            "epsilon_binding",
            "validity",
        ],
    );
    doc.header.push(("eta".into(), format_float(eta)));
    doc.header.push(("rest_energy".into(), format_float(sys.mc2)));
    let z_mu = z as f64 * sys.mu;
    let mut violations = Vec::new();
    for sk in space.kinds() {
        let se = sk.sign() * eta;
        for s in &states {
            let exact = s.energy_ratio(z_mu, se);
            let flat = s.energy_ratio(z_mu, 0.0);
            let slope = s.first_order_slope(z_mu);
            let validity = match (&flat, &exact) {
                (Err(e), _) | (_, Err(e)) => {
                    let v = classify(e).ok_or_else(|| anyhow::anyhow!("{e}"))?;
                    violations.push(format!("{} {}: {e}", sk, s.label()));
                    v
                }
                _ => Validity::Ok,
            };
            let energy = exact.ok().map(|x| sys.energy_from_ratio(x));
            let epsilon = flat.as_ref().ok().map(|&x| sys.energy_from_ratio(x));
            let first = match (&flat, slope) {
                (Ok(f), Ok(k)) => Some(sys.energy_from_ratio(f + se * k)),
                _ => None,
            };
            doc.push(vec![
                eq_label(eq.kind()).into(),
                sk.label().into(),
                z.into(),
                s.principal().into(),
                s.l().into(),
                j_cell(s),
                s.label().into(),
                eta.into(),
                energy.into(),
                epsilon.into(),
                first.into(),
                energy.map(|e| e - sys.mc2).into(),
                epsilon.map(|e| e - sys.mc2).into(),
                validity_label(validity).into(),
            ]);
        }
    }
    violations.dedup();
    let status = if violations.is_empty() { 0 } else { 2 };
    Ok(Outcome {
        document: doc,
        status,
        message: (!violations.is_empty()).then(|| violations.join("\n")),
    })
}

pub fn table(cfg: RunConfig) -> Result<Outcome> {
    if cfg.units == Some(Units::Natural) {
        bail!("the table is reported in eV; use --units physical");
    }
    let sys = Units::Physical.system();
    let custom = cfg.lambda.is_some() || cfg.sqrt_lambda_per_m.is_some() || cfg.eta.is_some();
    let space = match cfg.space {
        None | Some(Space::Ds) => SpaceKind::DeSitter,
        Some(Space::Ads) => SpaceKind::AntiDeSitter,
        Some(Space::Both) => bail!("the table takes a single branch, --space ds or --space ads"),
    };
    let def: DeformationParams = if custom {
        cfg.deformation(space, &sys)?
    } else {
        dirac::reference_deformation(&sys)?.with_space(space)
    };
    let mut resolved = cfg.clone();
    resolved.units = Some(Units::Physical);
    resolved.space = Some(if space == SpaceKind::DeSitter {
        Space::Ds
    } else {
        Space::Ads
    });
    let mut doc = Document::new(
        "table",
        resolved,
        vec![
            "N",
            "l",
            "j",
            "label",
            "epsilon_eV",
            "delta_abs_eV",
            "delta_eV",
            "reference_epsilon_eV",
            "epsilon_diff_eV",
            "reference_delta_abs_eV",
        ],
    );
    doc.header.push(("Z".into(), "1".into()));
    doc.header.push(("eta".into(), format_float(def.eta())));
    doc.header
        .push(("sqrt_lambda_per_m".into(), format_float(def.lambda().sqrt())));
    for (row, (pe, pd)) in hydrogen_table(&sys, &def).into_iter().zip(REFERENCE_TABLE) {
        doc.push(vec![
            row.n.into(),
            row.l.into(),
            row.j().into(),
            row.label.clone().into(),
            row.epsilon.into(),
            row.delta_eps_abs.into(),
            row.delta_eps.into(),
            pe.into(),
            (row.epsilon - pe).into(),
            pd.into(),
        ]);
    }
    Ok(Outcome::ok(doc))
}

fn scan_etas(cfg: &RunConfig) -> Result<Vec<f64>> {
    let sys = cfg.units_or(Units::Natural).system();
    if let Some(list) = &cfg.etas {
        if list.is_empty() || list.iter().any(|e| !(*e >= 0.0) || !e.is_finite()) {
            bail!("--etas must be non-negative numbers");
        }
        return Ok(list.clone());
    }
    if cfg.lambda.is_some() || cfg.sqrt_lambda_per_m.is_some() || cfg.eta.is_some() {
        return Ok(vec![cfg.single_eta(&sys)?]);
    }
    Ok(DEFAULT_SCAN_ETAS.to_vec())
}

pub fn scan(cfg: RunConfig) -> Result<Outcome> {
    let eq = cfg.equation()?;
    let family = cfg.family(eq)?;
    let units = cfg.units_or(Units::Natural);
    let sys = units.system();
    let vary = cfg.vary.unwrap_or(Vary::N);
    let space = cfg.space.unwrap_or(Space::Both);
    let etas = scan_etas(&cfg)?;
    let lowest = family.lowest_principal();
    let (from, to, fixed) = match vary {
        Vary::N => {
            let z = cfg.charge()?;
            let from = cfg.from.unwrap_or(lowest);
            (from, cfg.to.unwrap_or(from + 9), z)
        }
        Vary::Z => {
            let n = cfg.n.unwrap_or(lowest);
            family.state(n)?;
            (
                cfg.from.unwrap_or(1),
                cfg.to.context("--to is required when scanning Z")?,
                n,
            )
        }
    };
    if from > to {
        bail!("empty scan range {from}..={to}");
    }
    if vary == Vary::N && from < lowest {
        bail!("the scan starts below the lowest principal number {lowest} of this family");
    }
    if vary == Vary::Z && from == 0 {
        bail!("charges start at Z = 1");
    }
    let mut jobs = Vec::new();
    for sk in space.kinds() {
        for &eta in &etas {
            for v in from..=to {
                jobs.push((sk, eta, v));
            }
        }
    }
    let points: Vec<ScanPoint> = jobs
        .par_iter()
        .map(|&(sk, eta, v)| match vary {
            Vary::N => scan::point(family, v, fixed, eta, sk),
            Vary::Z => scan::point(family, fixed, v, eta, sk),
        })
        .collect::<std::result::Result<_, _>>()?;

    let mut resolved = cfg.clone();
    resolved.units = Some(units);
    resolved.space = Some(space);
    resolved.vary = Some(vary);
    resolved.from = Some(from);
    resolved.to = Some(to);
    resolved.etas = Some(etas.clone());
    let mut doc = Document::new(
        "scan",
        resolved,
        vec![
            "eq", "family", "space", "eta", "N", "Z", "energy", "epsilon", "ratio", "validity",
        ],
    );
    let fam_label = match family {
        Family::Kg { l } => format!("l={l}"),
        Family::Dirac { two_j } => format!("j={two_j}/2"),
    };
    for p in &points {
        doc.push(vec![
            eq_label(eq.kind()).into(),
            fam_label.clone().into(),
            p.space.label().into(),
            p.eta.into(),
            p.principal.into(),
            p.z.into(),
            p.energy.map(|x| sys.energy_from_ratio(x)).into(),
            p.epsilon.map(|x| sys.energy_from_ratio(x)).into(),
            p.ratio.into(),
            validity_label(p.validity).into(),
        ]);
    }
    let var_name = match vary {
        Vary::N => "N",
        Vary::Z => "Z",
    };
    for sk in space.kinds() {
        for &eta in &etas {
            let last = points
                .iter()
                .filter(|p| p.space == sk && p.eta == eta)
                .take_while(|p| p.validity == Validity::Ok)
                .last()
                .map(|p| match vary {
                    Vary::N => p.principal,
                    Vary::Z => p.z,
                });
            doc.footer.push((
                format!("last valid {var_name} ({sk}, eta={})", format_float(eta)),
                last.map_or("none".into(), |v| v.to_string()),
            ));
        }
    }
    Ok(Outcome::ok(doc))
}

pub fn wavefunction(cfg: RunConfig) -> Result<Outcome> {
    let eq = cfg.equation()?;
    let z = cfg.charge()?;
    let units = cfg.units_or(Units::Natural);
    let sys = units.system();
    let space = match cfg.space.unwrap_or(Space::Ds) {
        Space::Ds => SpaceKind::DeSitter,
        Space::Ads => SpaceKind::AntiDeSitter,
        Space::Both => bail!("the wavefunction dump takes a single branch, --space ds or --space ads"),
    };
    let states = cfg.states(eq)?;
    let [state] = states.as_slice() else {
        bail!("the wavefunction dump needs a single state; give --l (and --j for dirac)");
    };
    let def = cfg.deformation(space, &sys)?;
    if def.eta() == 0.0 {
        bail!("the wavefunction dump needs a nonzero deformation (η > 0)");
    }
    let intervals = cfg.points.unwrap_or(400);
    let mu = sys.mu;

    let mut resolved = cfg.clone();
    resolved.units = Some(units);
    resolved.space = Some(if space == SpaceKind::DeSitter {
        Space::Ds
    } else {
        Space::Ads
    });
    resolved.points = Some(intervals);

    let length = |r: f64| match units {
        Units::Natural => r,
        Units::Physical => sys.length_from_natural(r),
    };
    let (columns, rows, log_norm, nodes, degree, x) = match state {
        State::Kg(s) => {
            let sol = wavefn::radial_kg(s, z, &def, mu)?;
            let prof = sol.norm_profile(intervals)?;
            let rows: Vec<Vec<Cell>> = prof
                .iter()
                .skip(1)
                .map(|p| {
                    let y = y_of_theta(p.theta, space);
                    vec![
                        p.theta.into(),
                        length(p.r).into(),
                        y.re.into(),
                        y.im.into(),
                        sol.value_at_theta(p.theta).into(),
                        p.density.into(),
                        p.cumulative.into(),
                    ]
                })
                .collect();
            let cols = vec!["theta", "r", "y_re", "y_im", "value", "weight", "cumulative_norm"];
            (cols, rows, sol.log_norm, sol.count_nodes(), sol.n, sol.x)
        }
        State::Dirac(s) => {
            let pair = wavefn::radial_dirac(s, z, &def, mu)?;
            let prof = pair.norm_profile(intervals)?;
            let rows: Vec<Vec<Cell>> = prof
                .iter()
                .skip(1)
                .map(|p| {
                    let y = y_of_theta(p.theta, space);
                    let c = pair.components_at_theta(p.theta);
                    vec![
                        p.theta.into(),
                        length(p.r).into(),
                        y.re.into(),
                        y.im.into(),
                        c.f1.into(),
                        c.f2.into(),
                        p.density.into(),
                        p.cumulative.into(),
                    ]
                })
                .collect();
            let cols = vec!["theta", "r", "y_re", "y_im", "f1", "f2", "weight", "cumulative_norm"];
            (
                cols,
                rows,
                pair.g2.log_norm,
                pair.g2.count_nodes(),
                pair.g2.n,
                pair.g2.x,
            )
        }
    };
    let mut doc = Document::new("wavefunction", resolved, columns);
    doc.header.push(("state".into(), state.label()));
    doc.header.push(("eta".into(), format_float(def.eta())));
    doc.header
        .push(("energy".into(), format_float(sys.energy_from_ratio(x))));
    doc.header.push((
        "log_normalization_constant".into(),
        log_norm.map_or("none".into(), format_float),
    ));
    let total = match rows.last().map(|r| r.last()) {
        Some(Some(Cell::Float(Some(v)))) => *v,
        _ => f64::NAN,
    };
    doc.rows = rows;
    doc.footer.push(("nodes".into(), nodes.to_string()));
    doc.footer.push(("expected_nodes".into(), degree.to_string()));
    doc.footer.push((
        "node_check".into(),
        if nodes == degree as usize { "pass" } else { "fail" }.into(),
    ));
    doc.footer.push(("total_norm".into(), format_float(total)));
    Ok(Outcome::ok(doc))
}

fn filter_grid(mut g: Grid, cfg: &RunConfig) -> Result<Grid> {
    if let Some(eq) = cfg.eq {
        g.equations = vec![eq.kind()];
    }
    if let Some(z) = cfg.z {
        g.charges = vec![z];
    }
    if let Some(n) = cfg.n {
        g.max_principal = n;
    }
    if cfg.lambda.is_some() || cfg.sqrt_lambda_per_m.is_some() || cfg.eta.is_some() {
        g.etas = vec![cfg.single_eta(&cfg.units_or(Units::Natural).system())?];
    } else if let Some(list) = &cfg.etas {
        g.etas = list.clone();
    }
    if let Some(space) = cfg.space {
        g.spaces.retain(|s| space.kinds().contains(s));
    }
    Ok(g)
}

fn comparison_row(check: &str, c: &Comparison, tol: f64) -> Vec<Cell> {
    vec![
        check.into(),
        eq_label(c.case.state.kind()).into(),
        c.case.space.label().into(),
        c.case.z.into(),
        c.case.eta.into(),
        c.case.state.principal().into(),
        c.case.state.l().into(),
        j_cell(&c.case.state),
        c.case.state.label().into(),
        c.closed.into(),
        c.other.into(),
        c.rel_error.into(),
        tol.into(),
        c.pass.into(),
        c.note.clone().unwrap_or_default().into(),
    ]
}

fn identity_row(c: &IdentityCheck, tol: f64) -> Vec<Cell> {
    vec![
        "identity".into(),
        eq_label(c.state.kind()).into(),
        "both".into(),
        c.z.into(),
        c.eta.into(),
        c.state.principal().into(),
        c.state.l().into(),
        j_cell(&c.state),
        c.state.label().into(),
        Cell::Float(None),
        Cell::Float(None),
        c.rel_error.into(),
        tol.into(),
        c.pass.into(),
        String::new().into(),
    ]
}

pub fn verify(cfg: RunConfig) -> Result<Outcome> {
    let method = cfg.method.unwrap_or(Method::All);
    let th = Thresholds::default();
    let mut resolved = cfg.clone();
    resolved.method = Some(method);
    resolved.format = Some(cfg.format.unwrap_or(Format::Json));
    let mut doc = Document::new(
        "verify",
        resolved,
        vec![
            "check",
            "eq",
            "space",
            "Z",
            "eta",
            "N",
            "l",
            "j",
            "label",
            "closed",
            "other",
            "rel_error",
            "tolerance",
            "pass",
            "note",
        ],
    );
    let mut tallies = Vec::new();
    let want = |m: Method| method == m || method == Method::All;

    if want(Method::Rootfind) {
        let grid = filter_grid(Grid::rootfind_default(), &cfg)?;
        let res: Vec<Comparison> = grid
            .cases()
            .par_iter()
            .map(|c| verify::check_rootfind(c, th.rootfind))
            .collect();
        tallies.push(("rootfind", Tally::new(res.iter().map(|c| (c.pass, c.rel_error)))));
        for c in &res {
            doc.push(comparison_row("rootfind", c, th.rootfind));
        }
    }
    if want(Method::Shoot) {
        let mut grid = filter_grid(Grid::shoot_default(), &cfg)?;
        grid.spaces.retain(|&s| s == SpaceKind::AntiDeSitter);
        if grid.spaces.is_empty() && method == Method::Shoot {
            bail!("the shooting oracle covers anti-de Sitter only; use --space ads");
        }
        let opts = ShootOptions::default();
        let res: Vec<Comparison> = grid
            .cases()
            .par_iter()
            .map(|c| verify::check_shoot(c, th.shoot, &opts))
            .collect();
        if !res.is_empty() {
            tallies.push(("shoot", Tally::new(res.iter().map(|c| (c.pass, c.rel_error)))));
        }
        for c in &res {
            doc.push(comparison_row("shoot", c, th.shoot));
        }
    }
    if want(Method::Identity) {
        let grid = filter_grid(Grid::rootfind_default(), &cfg)?;
        let res = verify::run_identity(&grid, th.identity);
        tallies.push(("identity", Tally::new(res.iter().map(|c| (c.pass, c.rel_error)))));
        for c in &res {
            doc.push(identity_row(c, th.identity));
        }
    }
    let mut failures = 0;
    for (name, t) in &tallies {
        failures += t.failures;
        doc.footer.push((
            name.to_string(),
            format!(
                "{} cases, {} failures, max rel error {}",
                t.cases,
                t.failures,
                format_float(t.max_rel_error)
            ),
        ));
    }
    if doc.rows.is_empty() {
        bail!("the selected grid is empty");
    }
    Ok(Outcome {
        document: doc,
        status: if failures > 0 { 1 } else { 0 },
        message: (failures > 0).then(|| format!("{failures} verification case(s) failed")),
    })
}
