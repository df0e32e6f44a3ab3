use std::f64::consts::PI;

use serde_json::json;
use staggered::hopping::{GaugeTransform, HoppingField};
use staggered::lattice::LatticeSpec;
use staggered::solver::{
    classify_symmetric_configs, find_gauge_equivalence, maximal_gauge_fix, residual_gauge_stabilizer,
    verify_symmetry_mod_gauge,
};
use staggered::spectral::{
    bloch_bands, build_hamiltonian, centroid, chebyshev_evolve, gaussian_packet, rms_width, spectrum_dense,
    staticity_ratio, ExactPropagator, Method, WaveFunction,
};
use staggered::spinor::{assemble_dirac, parity_check, verify_equivalence, MassTerm, SectorCount};
use staggered::{Error, Result, EQUIV_TOL, EXACT_TOL};

use crate::config::{parse_symmetry, Experiment, MassKind, Model, RunConfig};
use crate::output::{to_value, Report};

const TIME_UNIT: &str = "raw hopping clock (|kappa| = 1); the continuum Dirac time is t/(2a)";

pub fn build_field(config: &RunConfig) -> Result<HoppingField> {
    let lattice = config.lattice()?;
    let base = match config.model {
        Model::Scalar => HoppingField::scalar(lattice),
        Model::Staggered => HoppingField::staggered(lattice)?,
        Model::DiracGauge => HoppingField::dirac_gauge(lattice)?,
    };
    match config.mass.kind {
        MassKind::None => Ok(base),
        MassKind::Susskind => base.add_susskind_mass(config.mass.mu),
        MassKind::Alternating => base.add_alternating_mass(config.mass.mu),
    }
}

pub fn run(experiment: Experiment, config: &RunConfig) -> Result<Report> {
    match experiment {
        Experiment::Spectrum => spectrum(config),
        Experiment::Bands => bands(config),
        Experiment::Evolve => evolve(config),
        Experiment::VerifySymmetry => verify_symmetry(config),
        Experiment::Classify => classify(config),
        Experiment::GaugeFix => gauge_fix(config),
        Experiment::Staticity => staticity(config),
        Experiment::SpinorCheck => spinor_check(config),
        Experiment::Parity => parity(config),
    }
}

fn spectrum(config: &RunConfig) -> Result<Report> {
    let energies = spectrum_dense(&build_hamiltonian(&build_field(config)?)?)?;
    let mut r = Report::new(
        vec!["index", "energy"],
        json!({ "dimension": energies.len(), "energies": energies }),
    );
    for (i, e) in energies.iter().enumerate() {
        r.row(vec![i.into(), (*e).into()]);
    }
    Ok(r)
}

fn bands(config: &RunConfig) -> Result<Report> {
    let b = bloch_bands(&build_field(config)?)?;
    let mut r = Report::new(
        vec!["mx", "my", "mz", "kx", "ky", "kz", "band", "energy"],
        json!({ "min_abs_energy": b.min_abs_energy(), "spectrum": to_value(&b) }),
    );
    for p in &b.points {
        for (band, e) in p.energies.iter().enumerate() {
            r.row(vec![
                p.m[0].into(),
                p.m[1].into(),
                p.m[2].into(),
                p.k[0].into(),
                p.k[1].into(),
                p.k[2].into(),
                band.into(),
                (*e).into(),
            ]);
        }
    }
    Ok(r)
}

fn initial_state(config: &RunConfig, lattice: LatticeSpec) -> Result<(WaveFunction, serde_json::Value)> {
    match config.params.lambda {
        Some(lambda) => {
            let k0 = config.params.k0.unwrap_or(0.0);
            let center = lattice.dims().map(|l| (l / 2) as f64);
            let psi = gaussian_packet(lattice, center, lambda, [k0, 0.0, 0.0])?;
            Ok((psi, json!({ "kind": "gaussian", "center": center, "lambda": lambda, "k0": [k0, 0.0, 0.0] })))
        }
        None => {
            let seed = config.seed();
            Ok((WaveFunction::random(lattice, seed), json!({ "kind": "random", "seed": seed })))
        }
    }
}

fn evolve(config: &RunConfig) -> Result<Report> {
    let field = build_field(config)?;
    let h = build_hamiltonian(&field)?;
    let (psi0, initial) = initial_state(config, *field.lattice())?;
    let t_end = config.params.t.unwrap_or(1.0);
    let steps = config.params.steps.unwrap_or(10).max(1);
    let method = config.params.method.unwrap_or(Method::Chebyshev);
    let exact = match method {
        Method::Exact => Some(ExactPropagator::new(&h)?),
        Method::Chebyshev => None,
    };
    let mut r = Report::new(
        vec!["t", "centroid_x", "centroid_y", "centroid_z", "width", "norm", "energy"],
        serde_json::Value::Null,
    );
    let mut points = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let t = t_end * i as f64 / steps as f64;
        let psi = match &exact {
            Some(p) => p.evolve(&psi0, t)?,
            None => chebyshev_evolve(&h, &psi0, t)?,
        };
        let c = centroid(&psi);
        let (w, n, e) = (rms_width(&psi), psi.norm(), h.expectation(&psi));
        r.row(vec![t.into(), c[0].into(), c[1].into(), c[2].into(), w.into(), n.into(), e.into()]);
        points.push(json!({ "t": t, "centroid": c, "width": w, "norm": n, "energy": e }));
    }
    r.json = json!({
        "method": method,
        "time_unit": TIME_UNIT,
        "initial": initial,
        "trajectory": points,
    });
    Ok(r)
}

fn verify_symmetry(config: &RunConfig) -> Result<Report> {
    let text = config
        .params
        .symmetry
        .as_deref()
        .ok_or_else(|| Error::Format("verify-symmetry needs params.symmetry".into()))?;
    let op = parse_symmetry(text)?;
    let result = verify_symmetry_mod_gauge(&build_field(config)?, &op)?;
    let mut value = result.to_json_value();
    value["symmetry"] = json!(op.name());
    let gauge = match &value["gauge"] {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(_) => "site-dependent".into(),
        _ => "none".into(),
    };
    let mut r = Report::new(
        vec!["symmetry", "equivalent", "gauge", "max_residual", "failing_loop_length"],
        value,
    );
    r.row(vec![
        op.name().into(),
        result.equivalent.into(),
        gauge.into(),
        result.max_residual.into(),
        result.failing_loop.as_ref().map_or(0, |l| l.len()).into(),
    ]);
    Ok(r)
}

fn classify(config: &RunConfig) -> Result<Report> {
    let lattice = config.lattice()?;
    let classes = classify_symmetric_configs(lattice)?;
    let known = [
        ("scalar", Some(HoppingField::scalar(lattice))),
        ("staggered", HoppingField::staggered(lattice).ok()),
    ];
    let mut r = Report::new(
        vec!["class", "alpha", "beta", "gamma", "members", "equivalent_to"],
        serde_json::Value::Null,
    );
    let mut listed = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        let mut label = "unknown";
        for (name, field) in &known {
            if let Some(f) = field {
                if find_gauge_equivalence(&c.representative, f)?.equivalent {
                    label = name;
                }
            }
        }
        r.row(vec![
            i.into(),
            c.alpha.into(),
            c.beta.into(),
            c.gamma.into(),
            c.members.len().into(),
            label.into(),
        ]);
        listed.push(json!({
            "alpha": c.alpha, "beta": c.beta, "gamma": c.gamma,
            "members": c.members, "equivalent_to": label,
        }));
    }
    r.json = json!({ "lattice": lattice.dims(), "class_count": classes.len(), "classes": listed });
    Ok(r)
}

fn gauge_fix(config: &RunConfig) -> Result<Report> {
    let mut field = build_field(config)?;
    if config.params.scramble.unwrap_or(false) {
        field = field.apply_gauge(&GaugeTransform::random(*field.lattice(), config.seed()))?;
    }
    let (fixed, _) = maximal_gauge_fix(&field)?;
    let stab = residual_gauge_stabilizer(&fixed)?;
    let doc = fixed.to_document();
    let mut r = Report::new(
        vec!["x", "y", "z", "dir", "re", "im"],
        json!({
            "stabilizer": stab.description(),
            "free_phases": stab.free_phases,
            "tree_links": stab.tree_links,
            "field": to_value(&doc),
        }),
    );
    for l in &doc.links {
        r.row(vec![
            l.site[0].into(),
            l.site[1].into(),
            l.site[2].into(),
            l.dir.clone().into(),
            l.re.into(),
            l.im.into(),
        ]);
    }
    Ok(r)
}

fn staticity(config: &RunConfig) -> Result<Report> {
    let lambda = config.params.lambda.unwrap_or(4.0);
    let k0 = config.params.k0.unwrap_or(PI / 16.0);
    let rep = staticity_ratio(config.lattice()?, lambda, k0)?;
    let mut r = Report::new(
        vec!["k0", "lambda", "time", "scalar_displacement", "staggered_displacement", "ratio"],
        json!({ "report": to_value(&rep), "time_unit": TIME_UNIT }),
    );
    r.row(vec![
        rep.k0.into(),
        rep.lambda.into(),
        rep.time.into(),
        rep.scalar_displacement.into(),
        rep.staggered_displacement.into(),
        rep.ratio.into(),
    ]);
    Ok(r)
}

fn spinor_check(config: &RunConfig) -> Result<Report> {
    let field = build_field(config)?;
    let mass = config.mass.term();
    let sectors = match mass {
        MassTerm::Susskind(_) => SectorCount::Eight,
        _ => SectorCount::Four,
    };
    let op = assemble_dirac(sectors, mass)?;
    let samples = config.params.samples.unwrap_or(10);
    let seed = config.seed();
    let mut r = Report::new(vec!["seed", "residual"], serde_json::Value::Null);
    let mut worst = 0.0f64;
    let mut residuals = Vec::with_capacity(samples);
    for s in seed..seed + samples as u64 {
        let res = verify_equivalence(&field, &op, &WaveFunction::random(*field.lattice(), s))?;
        worst = worst.max(res);
        residuals.push(res);
        r.row(vec![(s as usize).into(), res.into()]);
    }
    if worst >= EQUIV_TOL {
        return Err(Error::Numerical {
            invariant: "operator equivalence",
            detail: format!("max residual {worst:.3e} over {samples} states (tolerance {EQUIV_TOL:.0e})"),
        });
    }
    r.json = json!({
        "sectors": sectors.count(),
        "mass": mass,
        "max_residual": worst,
        "residuals": residuals,
    });
    Ok(r)
}

fn parity(config: &RunConfig) -> Result<Report> {
    let residual = parity_check(&build_field(config)?)?;
    let symmetric = residual < EXACT_TOL;
    let mut r = Report::new(
        vec!["residual", "symmetric"],
        json!({ "residual": residual, "symmetric": symmetric }),
    );
    r.row(vec![residual.into(), symmetric.into()]);
    Ok(r)
}
