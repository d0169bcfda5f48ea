//! Procedure execution and deterministic result documents.

use crate::doc::{self, InputDoc};
use crate::fnspec::parse_fn;
use anyhow::Result;
use diffbound_core::budget::Budget;
use diffbound_core::chains::{
    autoreduced_chain_witness, ritt_chain_witness, BoundCheck, ChainEvidence, RittOracle,
};
use diffbound_core::diffring::{
    autoreduce, char_set, coherent, pseudodivide_steps, AutoreducedSet, CharSetConfig,
    CoherenceMode, DiffCtx, DiffError, DiffPoly, TableOracle,
};
use diffbound_core::polyring::{
    dickson_witness, hilbert_chain_witness, membership_bounded, syzygy_generators, MembershipCert,
    Poly,
};
use std::fmt::Write as _;

/// How a run failed, mapped to exit codes by `main`.
#[derive(Debug)]
pub enum RunError {
    /// Bad input or unparsable document: exit 2.
    Input(String),
    /// The procedure aborted (oracle, caps, unit ideal): exit 3, with a
    /// transcript when one exists.
    Abort(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Input(m) => write!(f, "input error: {m}"),
            RunError::Abort(m) => write!(f, "procedure abort: {m}"),
        }
    }
}

fn input_err<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Input(e.to_string())
}

fn abort_err<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Abort(e.to_string())
}

fn diff_err(e: DiffError) -> RunError {
    match e {
        DiffError::UnitIdeal
        | DiffError::StepsExhausted(_)
        | DiffError::OracleUnknown(_)
        | DiffError::OracleInconsistent(_) => RunError::Abort(e.to_string()),
        other => RunError::Input(other.to_string()),
    }
}

pub struct RunOutput {
    pub document: String,
}

fn quote(s: &str) -> String {
    format!("{s:?}")
}

fn render_header(out: &mut String, procedure: &str) {
    let _ = writeln!(out, "format = {}", quote(doc::RESULT_FORMAT));
    let _ = writeln!(out, "procedure = {}", quote(procedure));
}

fn render_poly_list(out: &mut String, key: &str, polys: &[String]) {
    let _ = writeln!(out, "{key} = [");
    for p in polys {
        let _ = writeln!(out, "  {},", quote(p));
    }
    let _ = writeln!(out, "]");
}

fn membership_cert_doc(out: &mut String, cert: &MembershipCert) {
    let cof: Vec<String> = cert.cofactors.iter().map(|c| c.to_string()).collect();
    render_poly_list(out, "cofactors", &cof);
    let _ = writeln!(out, "degree_bound = {}", cert.degree_bound);
}

/// Executes the named procedure on the input document. Deterministic: the
/// same document yields byte-identical output.
pub fn run_procedure(procedure: &str, input: &InputDoc, budget: &Budget) -> Result<RunOutput, RunError> {
    let mut out = String::new();
    match procedure {
        "pseudodivide" => {
            let sec = input
                .pseudodivide
                .as_ref()
                .ok_or_else(|| RunError::Input("missing [pseudodivide] section".into()))?;
            let ctx = doc::system_ctx(input).map_err(input_err)?;
            let f = DiffPoly::parse(ctx, &sec.f).map_err(input_err)?;
            let set = doc::parse_diff_set(ctx, &sec.set).map_err(input_err)?;
            let set = AutoreducedSet::new(set).map_err(input_err)?;
            let cert = pseudodivide_steps(&f, &set, sec.max_steps).map_err(diff_err)?;
            render_header(&mut out, "pseudodivide");
            let _ = writeln!(&mut out, "remainder = {}", quote(&cert.remainder.to_string()));
            let _ = writeln!(&mut out, "reduced = {}", cert.reduced);
            let exps: Vec<String> = cert
                .exponents
                .iter()
                .map(|&(k, l)| format!("[{k}, {l}]"))
                .collect();
            let _ = writeln!(&mut out, "exponents = [{}]", exps.join(", "));
            let _ = writeln!(&mut out, "multiplier = {}", quote(&cert.multiplier().map_err(input_err)?.to_string()));
            for ((pos, theta), c) in &cert.cofactors {
                let _ = writeln!(&mut out, "\n[[cofactor]]");
                let _ = writeln!(&mut out, "element = {pos}");
                let th: Vec<String> = theta.iter().map(|t| t.to_string()).collect();
                let _ = writeln!(&mut out, "theta = [{}]", th.join(", "));
                let _ = writeln!(&mut out, "value = {}", quote(&c.to_string()));
            }
        }
        "autoreduce" => {
            let sec = input
                .autoreduce
                .as_ref()
                .ok_or_else(|| RunError::Input("missing [autoreduce] section".into()))?;
            let ctx = doc::system_ctx(input).map_err(input_err)?;
            let set = doc::parse_diff_set(ctx, &sec.set).map_err(input_err)?;
            let run = autoreduce(&set).map_err(diff_err)?;
            render_header(&mut out, "autoreduce");
            let elems: Vec<String> = run.result.elements().iter().map(|p| p.to_string()).collect();
            render_poly_list(&mut out, "result", &elems);
            let _ = writeln!(&mut out, "iterations = {}", run.iterations.len());
            let _ = writeln!(&mut out, "zero_remainders = {}", run.zero_certs.len());
        }
        "coherent" => {
            let sec = input
                .coherent
                .as_ref()
                .ok_or_else(|| RunError::Input("missing [coherent] section".into()))?;
            let ctx = doc::system_ctx(input).map_err(input_err)?;
            let set = doc::parse_diff_set(ctx, &sec.set).map_err(input_err)?;
            let set = AutoreducedSet::new(set).map_err(input_err)?;
            let mode = if sec.containment {
                CoherenceMode::Containment
            } else {
                CoherenceMode::Plain
            };
            let run = coherent(&set, mode).map_err(diff_err)?;
            render_header(&mut out, "coherent");
            let elems: Vec<String> = run.result.elements().iter().map(|p| p.to_string()).collect();
            render_poly_list(&mut out, "result", &elems);
            let _ = writeln!(&mut out, "iterations = {}", run.iterations.len());
        }
        "charset" => {
            let sec = input
                .charset
                .as_ref()
                .ok_or_else(|| RunError::Input("missing [charset] section".into()))?;
            let ctx = doc::system_ctx(input).map_err(input_err)?;
            let set = doc::parse_diff_set(ctx, &sec.set).map_err(input_err)?;
            let entries: Vec<(DiffPoly, bool)> = sec
                .oracle
                .iter()
                .map(|(t, b)| DiffPoly::parse(ctx, t).map(|p| (p, *b)).map_err(input_err))
                .collect::<Result<_, _>>()?;
            let mut oracle = if sec.oracle_default_false {
                TableOracle::with_default_false(entries)
            } else {
                TableOracle::new(entries)
            };
            let mut config = CharSetConfig::default();
            if let Some(d) = sec.solve_degree {
                config.solve_degree = d;
            }
            if let Some(r) = sec.max_rounds {
                config.max_rounds = r;
            }
            match char_set(&set, &mut oracle, &config) {
                Ok(run) => {
                    render_header(&mut out, "charset");
                    let elems: Vec<String> =
                        run.result.elements().iter().map(|p| p.to_string()).collect();
                    render_poly_list(&mut out, "result", &elems);
                    let trace: Vec<String> = run.trace.iter().map(|c| quote(c)).collect();
                    let _ = writeln!(&mut out, "trace = [{}]", trace.join(", "));
                    let _ = writeln!(&mut out, "\n[[transcript]]");
                    for (q, a) in &run.transcript {
                        let _ = writeln!(&mut out, "query = {}", quote(q));
                        let _ = writeln!(&mut out, "answer = {}", quote(&format!("{a:?}")));
                    }
                }
                Err(abort) => {
                    let mut msg = format!("{}\ntranscript:\n", abort.reason);
                    for (q, a) in &abort.transcript {
                        let _ = writeln!(&mut msg, "  {} -> {:?}", q, a);
                    }
                    return Err(RunError::Abort(msg));
                }
            }
        }
        "membership" => {
            let sec = input
                .membership
                .as_ref()
                .ok_or_else(|| RunError::Input("missing [membership] section".into()))?;
            let h = Poly::parse(sec.variables, &sec.h).map_err(input_err)?;
            let gens = doc::parse_polys(sec.variables, &sec.generators).map_err(input_err)?;
            let cert = membership_bounded(&h, &gens, sec.degree).map_err(input_err)?;
            render_header(&mut out, "membership");
            match cert {
                Some(cert) => {
                    let _ = writeln!(&mut out, "found = true");
                    membership_cert_doc(&mut out, &cert);
                }
                None => {
                    let _ = writeln!(&mut out, "found = false");
                    let _ = writeln!(
                        &mut out,
                        "note = {}",
                        quote("no representation within the degree bound; not a non-membership proof")
                    );
                }
            }
        }
        "syzygy" => {
            let sec = input
                .syzygy
                .as_ref()
                .ok_or_else(|| RunError::Input("missing [syzygy] section".into()))?;
            let gens = doc::parse_polys(sec.variables, &sec.generators).map_err(input_err)?;
            let basis = syzygy_generators(&gens, sec.degree).map_err(input_err)?;
            render_header(&mut out, "syzygy");
            let _ = writeln!(&mut out, "count = {}", basis.len());
            for vecv in &basis {
                let _ = writeln!(&mut out, "\n[[generator]]");
                let entries: Vec<String> = vecv.iter().map(|p| p.to_string()).collect();
                render_poly_list(&mut out, "entries", &entries);
            }
        }
        "dickson" => {
            let sec = input
                .dickson
                .as_ref()
                .ok_or_else(|| RunError::Input("missing [dickson] section".into()))?;
            let d = parse_fn(&sec.d).map_err(input_err)?;
            let vectors = sec.vectors.clone();
            let mut stream = move |i: usize| -> Vec<u64> {
                vectors[(i - 1).min(vectors.len() - 1)].clone()
            };
            let rep = dickson_witness(&mut stream, &d, sec.dimension, budget).map_err(input_err)?;
            render_header(&mut out, "dickson");
            let _ = writeln!(&mut out, "pair = [{}, {}]", rep.pair.0, rep.pair.1);
            match (&rep.bound, rep.bound_respected) {
                (Some(b), Some(ok)) => {
                    let _ = writeln!(&mut out, "bound = {}", quote(&b.to_string()));
                    let _ = writeln!(&mut out, "bound_respected = {ok}");
                }
                _ => {
                    let _ = writeln!(&mut out, "bound = {}", quote("RESIDUE"));
                }
            }
        }
        "hilbert-chain" => {
            let sec = input
                .hilbert_chain
                .as_ref()
                .ok_or_else(|| RunError::Input("missing [hilbert-chain] section".into()))?;
            let d = parse_fn(&sec.d).map_err(input_err)?;
            let stages: Vec<Vec<Poly>> = sec
                .stages
                .iter()
                .map(|texts| doc::parse_polys(sec.variables, texts))
                .collect::<Result<_>>()
                .map_err(input_err)?;
            let mut stream =
                move |i: usize| -> Vec<Poly> { stages[(i - 1).min(stages.len() - 1)].clone() };
            let rep =
                hilbert_chain_witness(&mut stream, &d, sec.variables, budget).map_err(input_err)?;
            render_header(&mut out, "hilbert-chain");
            let _ = writeln!(&mut out, "stabilized_at = {}", rep.stabilized_at);
            if let (Some(b), Some(ok)) = (&rep.bound, rep.bound_respected) {
                let _ = writeln!(&mut out, "bound = {}", quote(&b.to_string()));
                let _ = writeln!(&mut out, "bound_respected = {ok}");
            }
            for cert in &rep.certificates {
                let _ = writeln!(&mut out, "\n[[certificate]]");
                let _ = writeln!(&mut out, "target = {}", quote(&cert.target.to_string()));
                membership_cert_doc(&mut out, cert);
            }
        }
        "autoreduced-chain" => {
            let sec = input
                .autoreduced_chain
                .as_ref()
                .ok_or_else(|| RunError::Input("missing [autoreduced-chain] section".into()))?;
            let ctx = doc::system_ctx(input).map_err(input_err)?;
            let d = parse_fn(&sec.d).map_err(input_err)?;
            let stages = build_auto_stages(ctx, sec).map_err(input_err)?;
            let mut stream =
                move |i: usize| stages[(i - 1).min(stages.len() - 1)].clone();
            let w = autoreduced_chain_witness(&mut stream, &d, ctx.n, ctx.m, budget)
                .map_err(diff_err)?;
            render_header(&mut out, "autoreduced-chain");
            let _ = writeln!(&mut out, "index = {}", w.index);
            render_bound(&mut out, &w.bound);
        }
        "ritt-chain" => {
            let sec = input
                .ritt_chain
                .as_ref()
                .ok_or_else(|| RunError::Input("missing [ritt-chain] section".into()))?;
            let ctx = doc::system_ctx(input).map_err(input_err)?;
            let d = parse_fn(&sec.d).map_err(input_err)?;
            let f = parse_fn(&sec.f).map_err(input_err)?;
            let base = doc::parse_diff_set(ctx, &sec.base).map_err(input_err)?;
            let base = AutoreducedSet::new(base).map_err(input_err)?;
            let stages: Vec<Vec<DiffPoly>> = match (&sec.stages, sec.generator.as_deref()) {
                (Some(stages), _) => stages
                    .iter()
                    .map(|texts| doc::parse_diff_set(ctx, texts))
                    .collect::<Result<_>>()
                    .map_err(input_err)?,
                (None, Some("derivative-closure")) => {
                    let horizon = sec.scan_cap + sec.i0 + 4;
                    derivative_closure_stages(&base, horizon).map_err(diff_err)?
                }
                (None, other) => {
                    return Err(RunError::Input(format!(
                        "need explicit stages or a known generator, got {other:?}"
                    )))
                }
            };
            let mut stream =
                move |i: usize| stages[i.min(stages.len() - 1)].clone();
            let table_rows: Vec<(usize, DiffPoly, bool)> = sec
                .table
                .as_ref()
                .map(|rows| {
                    rows.iter()
                        .map(|(i, t, b)| DiffPoly::parse(ctx, t).map(|p| (*i, p, *b)))
                        .collect::<Result<Vec<_>, _>>()
                })
                .transpose()
                .map_err(input_err)?
                .unwrap_or_default();
            let mut table_fn = move |i: usize, h: &DiffPoly| -> Option<bool> {
                for (lo, p, ans) in &table_rows {
                    if p == h {
                        return Some(*ans && i >= *lo);
                    }
                }
                None
            };
            let mut oracle = match sec.oracle.as_str() {
                "pseudodivision" => RittOracle::Pseudodivision,
                "power-search" => RittOracle::PowerSearch {
                    order_offset: 1,
                    power_cap: sec.power_cap.unwrap_or(3),
                    solve_degree: sec.solve_degree.unwrap_or(8),
                },
                "table" => RittOracle::Table(&mut table_fn),
                other => {
                    return Err(RunError::Input(format!("unknown oracle {other:?}")))
                }
            };
            let w = ritt_chain_witness(
                &base,
                &mut stream,
                &d,
                &f,
                sec.i0,
                &mut oracle,
                sec.scan_cap,
                budget,
            )
            .map_err(diff_err)?;
            render_header(&mut out, "ritt-chain");
            let _ = writeln!(&mut out, "index = {}", w.index);
            render_bound(&mut out, &w.bound);
            if let ChainEvidence::OracleTranscript(t) = &w.evidence {
                let _ = writeln!(&mut out, "\n[[transcript]]");
                for (q, a) in t {
                    let _ = writeln!(&mut out, "query = {}", quote(q));
                    let _ = writeln!(&mut out, "answer = {a}");
                }
            }
        }
        other => {
            return Err(RunError::Input(format!("unknown procedure {other:?}")));
        }
    }
    Ok(RunOutput { document: out })
}

fn render_bound(out: &mut String, bound: &BoundCheck) {
    match bound {
        BoundCheck::Exact { value, respected } => {
            let _ = writeln!(out, "bound = {}", quote(&value.to_string()));
            let _ = writeln!(out, "bound_respected = {respected}");
        }
        BoundCheck::Symbolic { expr } => {
            let _ = writeln!(out, "bound_symbolic = {}", quote(expr));
        }
    }
}

fn build_auto_stages(
    ctx: DiffCtx,
    sec: &crate::doc::AutoChainSection,
) -> Result<Vec<AutoreducedSet>> {
    if let Some(stages) = &sec.stages {
        return stages
            .iter()
            .map(|texts| {
                let polys = doc::parse_diff_set(ctx, texts)?;
                AutoreducedSet::new(polys).map_err(|e| anyhow::anyhow!(e.to_string()))
            })
            .collect();
    }
    match sec.generator.as_deref() {
        Some("staircase") => {
            let leader = sec
                .leader
                .as_ref()
                .ok_or_else(|| anyhow::anyhow!("staircase needs a leader"))?;
            let len = sec.length.unwrap_or(3).max(1);
            let u = DiffPoly::parse(ctx, leader)?;
            (0..=len)
                .map(|i| {
                    let deg = (len - i).max(1) as u32;
                    AutoreducedSet::new(vec![u.pow(deg)])
                        .map_err(|e| anyhow::anyhow!(e.to_string()))
                })
                .collect()
        }
        other => anyhow::bail!("need explicit stages or a known generator, got {other:?}"),
    }
}

fn derivative_closure_stages(
    base: &AutoreducedSet,
    horizon: usize,
) -> Result<Vec<Vec<DiffPoly>>, DiffError> {
    let mut stages = Vec::with_capacity(horizon + 1);
    for i in 0..=horizon {
        let mut stage = Vec::new();
        for f in base.elements() {
            let m = f.ctx().m;
            let mut frontier = vec![f.clone()];
            stage.push(f.clone());
            for _ in 0..i {
                let mut next = Vec::new();
                for g in &frontier {
                    for k in 1..=m {
                        let dg = g.apply_derivation(k)?;
                        if !stage.contains(&dg) {
                            stage.push(dg.clone());
                            next.push(dg);
                        }
                    }
                }
                frontier = next;
            }
        }
        stages.push(stage);
    }
    Ok(stages)
}
