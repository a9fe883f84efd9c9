//! Single-operation subcommands.

use std::path::Path;

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use quditgates::geometry::{
    clifford_eigen_check, edge_negativity, edge_scan, inject_gate, negativity_state, simulate_dilution, PsiState,
};
use quditgates::hierarchy::{element_order, m_gate, structure_classify, uv_exponents, verify_c3};
use quditgates::hull::{
    dilution, dilution_inv, optimize_equatorial, recorded, threshold_depol_gate, threshold_depol_state,
    threshold_depol_state_lp, threshold_pd_gate, threshold_pd_gate_lp, Budget,
};
use quditgates::numkernel::C64;
use quditgates::Error;

use crate::matrix_file::{parse_complex, parse_matrix};
use crate::report::{Report, Table};
use crate::{Failure, RunConfig};

pub fn gate(cfg: &RunConfig) -> Result<Report, Failure> {
    let d = cfg.dim()?;
    let g = cfg.gate(d)?;
    let u = uv_exponents(d, g);
    let eigen = clifford_eigen_check(d, g)?;
    let mut rep = Report::new("gate");
    rep.input("p", d.p()).input("params", g.to_string());
    rep.output("root_order", u.root_order)
        .output("exponents", &u.exponents)
        .output("clifford", g.is_clifford())
        .output("element_order", element_order(d, g))
        .output("determinant_exponent", u.exponent_sum())
        .output("clifford_eigenvalue", json!({ "root_order": eigen.root_order, "exponent": eigen.exponent }));
    Ok(rep)
}

pub fn verify(cfg: &RunConfig, path: &Path) -> Result<Report, Failure> {
    let d = cfg.dim()?;
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let m = parse_matrix(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let verdict = verify_c3(d, &m)?;
    let mut rep = Report::new("verify");
    rep.input("p", d.p()).input("matrix", path.display().to_string());
    rep.output("result", verdict);
    Ok(rep)
}

#[derive(Args, Debug)]
pub struct NegativityArgs {
    /// Search all equatorial states for the largest negativity instead.
    #[arg(long)]
    optimize: bool,
    /// Random starting points for --optimize.
    #[arg(long, default_value_t = 8)]
    restarts: usize,
}

pub fn negativity(cfg: &RunConfig, args: &NegativityArgs) -> Result<Report, Failure> {
    let d = cfg.dim()?;
    let mut rep = Report::new("negativity");
    rep.input("p", d.p());
    if args.optimize {
        rep.input("optimize", true).input("restarts", args.restarts).input("seed", cfg.seed);
        let best = optimize_equatorial(d, cfg.seed, args.restarts)?;
        rep.output("negativity", best.negativity)
            .output("theta", &best.theta)
            .output("facet", &best.facet)
            .output("evaluations", best.evaluations);
        return Ok(rep);
    }
    let g = cfg.gate(d)?;
    rep.input("params", g.to_string());
    let rho = PsiState::from_params(d, g).density();
    let full = negativity_state(d, &rho)?;
    let edge = edge_negativity(d, &rho)?;
    rep.output("negativity", full.value)
        .output("min_facet_value", full.min_expectation)
        .output("facet", &full.argmin)
        .output("inside", full.inside)
        .output("edge_negativity", edge.value)
        .output("edge_facet", &edge.argmin);
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ThresholdKind {
    /// Depolarizing robustness of the gate's equatorial state.
    DepolState,
    /// Phase-damping robustness of the gate.
    PdGate,
    /// Depolarizing robustness of the gate (Clifford-polytope LP).
    DepolGate,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long, value_enum, default_value_t = ThresholdKind::PdGate)]
    kind: ThresholdKind,
    /// Cross-check the closed form by LP bisection.
    #[arg(long)]
    lp: bool,
    /// Allow the p = 5 Clifford-polytope LP (3000 vertices).
    #[arg(long)]
    extended: bool,
}

pub fn threshold(cfg: &RunConfig, args: &ThresholdArgs) -> Result<Report, Failure> {
    let d = cfg.dim()?;
    let g = cfg.gate(d)?;
    let u = uv_exponents(d, g).matrix();
    let mut rep = Report::new("threshold");
    rep.input("p", d.p())
        .input("params", g.to_string())
        .input("kind", format!("{:?}", args.kind))
        .input("lp", args.lp)
        .input("extended", args.extended);
    let psi = PsiState::from_params(d, g);
    let (main, cross) = match args.kind {
        ThresholdKind::DepolState => {
            (threshold_depol_state(d, &psi)?, args.lp.then(|| threshold_depol_state_lp(d, &psi)).transpose()?)
        }
        ThresholdKind::PdGate => (threshold_pd_gate(d, &u)?, args.lp.then(|| threshold_pd_gate_lp(d, &u)).transpose()?),
        ThresholdKind::DepolGate => {
            let budget = if args.extended { Budget::Extended } else { Budget::Desk };
            match threshold_depol_gate(d, &u, budget) {
                Ok(r) => (r, None),
                Err(Error::RuntimeBudgetExceeded(why)) => match recorded::gate_depol_threshold(d.p()) {
                    Some(v) if g == quditgates::hierarchy::GateParams::reference(d) => {
                        rep.provenance = "paper-recorded, not recomputed".into();
                        rep.output("epsilon_star", v).output("reason", why);
                        return Ok(rep);
                    }
                    _ => return Err(Failure::Domain(format!("runtime budget exceeded: {why}"))),
                },
                Err(e) => return Err(e.into()),
            }
        }
    };
    rep.output("epsilon_star", main.epsilon_star)
        .output("method", main.method)
        .output("bracket", [main.bracket.0, main.bracket.1])
        .output("lp_solves", main.lp_solves);
    if let Some(c) = cross {
        rep.output("lp_epsilon_star", c.epsilon_star)
            .output("lp_bracket", [c.bracket.0, c.bracket.1])
            .output("lp_solves", c.lp_solves);
    }
    Ok(rep)
}

#[derive(Args, Debug)]
pub struct DiluteArgs {
    /// Noise rate in [0, 1].
    #[arg(long)]
    eps: f64,
    /// Treat --eps as the state noise rate and recover the gate noise rate.
    #[arg(long)]
    inverse: bool,
    /// Also simulate the injection circuit on the noisy gate's Choi state.
    #[arg(long)]
    simulate: bool,
}

pub fn dilute(cfg: &RunConfig, args: &DiluteArgs) -> Result<Report, Failure> {
    let d = cfg.dim()?;
    if !(0.0..=1.0).contains(&args.eps) {
        return Err(Failure::Domain(format!("--eps must lie in [0, 1], got {}", args.eps)));
    }
    let mut rep = Report::new("dilute");
    rep.input("p", d.p()).input("eps", args.eps).input("inverse", args.inverse);
    if args.inverse {
        rep.output("gate_eps", dilution_inv(d, args.eps));
        return Ok(rep);
    }
    rep.output("state_eps", dilution(d, args.eps));
    if args.simulate {
        let g = cfg.gate(d)?;
        rep.input("params", g.to_string());
        let sim = simulate_dilution(d, g, args.eps)?;
        rep.output("simulated_state_eps", sim.epsilon_out)
            .output("success_probability", sim.success_probability)
            .output("residual", sim.residual);
    }
    Ok(rep)
}

#[derive(Args, Debug)]
pub struct InjectArgs {
    /// Input amplitudes `a+bi,...`; a seeded random state otherwise.
    #[arg(long, allow_hyphen_values = true)]
    state: Option<String>,
}

pub fn inject(cfg: &RunConfig, args: &InjectArgs) -> Result<Report, Failure> {
    let d = cfg.dim()?;
    let g = cfg.gate(d)?;
    let psi: Vec<C64> = match &args.state {
        Some(s) => s.split(',').map(|t| parse_complex(t.trim())).collect::<Result<_, _>>().map_err(Failure::Usage)?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..d.n()).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
        }
    };
    let out = inject_gate(d, g, &psi)?;
    let mut rep = Report::new("inject");
    rep.input("p", d.p()).input("params", g.to_string()).input("seed", cfg.seed).input("state", &psi);
    rep.output("fidelity", out.fidelity)
        .output("success_probability", out.success_probability)
        .output("output", &out.output);
    Ok(rep)
}

pub fn spectra(cfg: &RunConfig) -> Result<Report, Failure> {
    let d = cfg.dim()?;
    let scan = edge_scan(d)?;
    let mut rep = Report::new("spectra");
    rep.input("p", d.p());
    let mut table = Table {
        header: ["class", "count", "flat_ground_states", "spectrum"].map(String::from).to_vec(),
        rows: Vec::new(),
    };
    for (k, c) in scan.classes.iter().enumerate() {
        table.rows.push(vec![json!(k), json!(c.count), json!(c.flat_ground_states), json!(c.spectrum)]);
    }
    rep.output("edges", scan.edges).output("min_eigenvalue", scan.min_eigenvalue).output("classes", &scan.classes);
    rep.table = Some(table);
    Ok(rep)
}

pub fn group(cfg: &RunConfig) -> Result<Report, Failure> {
    let d = cfg.dim()?;
    let r = structure_classify(d);
    let mut rep = Report::new("group");
    rep.input("p", d.p());
    rep.output("group_order", r.group_order)
        .output("group_name", &r.group_name)
        .output("invariant_factors", &r.invariant_factors)
        .output("min_generators", r.min_generators)
        .output("order_histogram", &r.order_histogram);
    match m_gate(d) {
        Ok(m) => {
            rep.output("m_gate", json!({ "lambdas": m.lambdas, "params": m.params.to_string() }));
        }
        Err(Error::UnsupportedDim(_)) => {}
        Err(e) => return Err(e.into()),
    }
    let table = Table {
        header: ["order", "elements"].map(String::from).to_vec(),
        rows: r.order_histogram.iter().map(|(o, n)| vec![json!(o), json!(n)]).collect(),
    };
    rep.table = Some(table);
    Ok(rep)
}
