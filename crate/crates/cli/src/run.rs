use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use cone_propagator::asymptotics::{principal_terms, Pairing};
use cone_propagator::critical_points::{
    classify, conjugate_frequencies, critical_union, q_bound, ConjugateAngle, Sign,
};
use cone_propagator::harness::{
    dominant_frequency, fit_decay_exponent, octave_maxima, scan, verify_bound, ScanOptions, ScanTable,
};
use cone_propagator::{eval_kernel_detailed, eval_series, ConeParams, KernelPoint, PhysicalPoint};
use serde_json::{json, Value};

use crate::config::{
    Command, CriticalConfig, DecayFitConfig, EnvelopeMode, EvalConfig, RunConfig, ScanConfig, VerifyConfig, XGrid,
};
use crate::{Failure, EXIT_EVALUATION, EXIT_OK, EXIT_VERIFY_FAILED};

pub(crate) fn execute(cfg: &RunConfig, meta: Option<&Path>) -> Result<i32, Failure> {
    let params = || {
        cfg.params
            .ok_or_else(|| Failure::usage("this command needs cone parameters"))
    };
    match &cfg.command {
        Command::Eval(e) => eval(cfg, &params()?, e),
        Command::Scan(s) => scan_cmd(cfg, &params()?, s, meta),
        Command::Critical(c) => critical(cfg, c),
        Command::DecayFit(d) => decay_fit(cfg, &params()?, d),
        Command::Verify(v) => verify(cfg, &params()?, v),
    }
}

fn options(cfg: &RunConfig, with_prediction: bool) -> ScanOptions {
    ScanOptions {
        tol: cfg.tol,
        with_prediction,
        workers: cfg.workers,
    }
}

fn write_output(cfg: &RunConfig, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Failure> {
    let result = match &cfg.output_path {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::io(format!("cannot create {path}: {e}")))?;
            let mut w = BufWriter::new(file);
            body(&mut w).and_then(|_| w.flush())
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w).and_then(|_| w.flush())
        }
    };
    result.map_err(|e| Failure::io(format!("write failed: {e}")))
}

fn write_json(cfg: &RunConfig, value: &Value) -> Result<(), Failure> {
    write_output(cfg, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)
    })
}

fn eval(cfg: &RunConfig, params: &ConeParams, e: &EvalConfig) -> Result<i32, Failure> {
    let (value, series) = match e.physical {
        Some(ph) => eval_kernel_detailed(params, PhysicalPoint::new(ph.t, ph.r1, ph.r2, e.phi)?, cfg.tol)?,
        None => {
            let x = e.x.ok_or_else(|| Failure::usage("--x is required"))?;
            let r = eval_series(params, KernelPoint::new(x, e.phi)?, cfg.tol)?;
            (r.value, r)
        }
    };
    write_json(
        cfg,
        &json!({
            "re": value.re,
            "im": value.im,
            "modulus": value.norm(),
            "terms_used": series.terms_used,
            "tail_bound": series.tail_bound,
        }),
    )?;
    Ok(EXIT_OK)
}

fn scan_cmd(cfg: &RunConfig, params: &ConeParams, s: &ScanConfig, meta: Option<&Path>) -> Result<i32, Failure> {
    if s.with_prediction {
        // predictions live only where the optimality analysis applies
        principal_terms(params, ConjugateAngle::Zero, Pairing::Literal)?;
    }
    let table = scan(params, &s.x_grid.points()?, &s.phis, options(cfg, s.with_prediction))?;
    write_output(cfg, |w| table.write_csv(w).map_err(|e| io::Error::other(e.to_string())))?;
    let summary = json!({
        "params": params,
        "rows": table.rows.len(),
        "failed_rows": table.failed_rows(),
        "predictions": table.predictions,
    });
    if let Some(path) = meta {
        std::fs::write(path, serde_json::to_string_pretty(&summary).expect("json"))
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
    }
    if table.failed_rows() > 0 {
        eprintln!("warning: {} rows failed to evaluate", table.failed_rows());
    }
    Ok(EXIT_OK)
}

fn critical(cfg: &RunConfig, c: &CriticalConfig) -> Result<i32, Failure> {
    if !(c.rho.is_finite() && c.rho > 0.0) {
        return Err(Failure::usage(format!("rho must be positive, got {}", c.rho)));
    }
    let union_at = |phi: f64| -> Vec<_> {
        Sign::BOTH
            .iter()
            .flat_map(|&s1| {
                Sign::BOTH
                    .iter()
                    .flat_map(move |&s2| critical_union(c.rho, s1, s2, phi))
            })
            .collect()
    };
    let mut out = json!({ "rho": c.rho, "q_bound": q_bound(c.rho) });
    if let Some(phi) = c.phi {
        if !(0.0..=std::f64::consts::PI).contains(&phi) {
            return Err(Failure::usage(format!("phi must lie in [0, pi], got {phi}")));
        }
        out["phi"] = json!(phi);
        out["critical_sets"] = json!(union_at(phi));
    }
    if let Some(phi0) = c.phi0 {
        let d: Vec<_> = Sign::BOTH
            .iter()
            .flat_map(|&s| conjugate_frequencies(c.rho, s, phi0))
            .collect();
        out["phi0"] = json!(phi0);
        out["conjugate_frequencies"] = json!(d);
        if c.phi.is_none() {
            out["critical_sets"] = json!(union_at(phi0.radians()));
        }
    }
    if c.classify {
        out["classification"] = json!(classify(c.rho));
    }
    write_json(cfg, &out)?;
    Ok(EXIT_OK)
}

fn envelope(table: &ScanTable, d: &DecayFitConfig) -> Result<Vec<(f64, f64)>, Failure> {
    let moduli = table.moduli(d.phi);
    Ok(match d.envelope {
        EnvelopeMode::Raw => moduli,
        EnvelopeMode::Octave => octave_maxima(&moduli, d.bins_per_octave),
        EnvelopeMode::Window => match &d.x_grid {
            XGrid::Windows(w) => w.maxima(&moduli),
            _ => return Err(Failure::usage("--envelope window needs a windowed grid (--windows)")),
        },
    })
}

fn decay_fit(cfg: &RunConfig, params: &ConeParams, d: &DecayFitConfig) -> Result<i32, Failure> {
    let table = scan(params, &d.x_grid.points()?, &[d.phi], options(cfg, false))?;
    if let Some(row) = table.rows.iter().find(|r| r.error.is_some()) {
        return Err(Failure {
            code: EXIT_EVALUATION,
            message: format!(
                "evaluation failed at x = {}: {}",
                row.x,
                row.error.as_deref().unwrap_or("")
            ),
        });
    }
    let samples = envelope(&table, d)?;
    let fit = fit_decay_exponent(&samples)?;
    let frequency = match d.frequency {
        Some(f) => {
            let xs: Vec<f64> = (0..f.points).map(|k| f.start + f.step * k as f64).collect();
            let t = scan(params, &xs, &[d.phi], options(cfg, false))?;
            if t.failed_rows() > 0 {
                return Err(Failure {
                    code: EXIT_EVALUATION,
                    message: "evaluation failed on the frequency grid".into(),
                });
            }
            Some(dominant_frequency(&t.values(d.phi), f.growth.unwrap_or(params.d()))?)
        }
        None => None,
    };
    write_json(
        cfg,
        &json!({
            "params": params,
            "phi": d.phi,
            "envelope": d.envelope,
            "samples": samples.len(),
            "fit": fit,
            "frequency": frequency,
        }),
    )?;
    Ok(EXIT_OK)
}

fn verify(cfg: &RunConfig, params: &ConeParams, v: &VerifyConfig) -> Result<i32, Failure> {
    use crate::config::Preset;
    if matches!(v.preset, Some(Preset::ConjugateGrowth | Preset::DiagonalGrowth)) {
        principal_terms(params, ConjugateAngle::Zero, Pairing::Literal)?;
    }
    let table = scan(params, &v.x_grid.points()?, &v.phis, options(cfg, false))?;
    let report = verify_bound(&table, v.bound, v.threshold)?;
    write_json(
        cfg,
        &json!({
            "preset": v.preset,
            "params": params,
            "report": report,
        }),
    )?;
    Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
