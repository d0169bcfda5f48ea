//! Input documents: versioned TOML with a system declaration, polynomial
//! strings, oracle tables, and stream descriptions.

use anyhow::{bail, Context, Result};
use diffbound_core::diffring::{DiffCtx, DiffPoly};
use diffbound_core::polyring::Poly;
use serde::Deserialize;

pub const INPUT_FORMAT: &str = "diffbound/1";
pub const RESULT_FORMAT: &str = "diffbound-result/1";

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    pub format: String,
    pub system: Option<SystemDecl>,
    pub pseudodivide: Option<PseudodivideSection>,
    pub autoreduce: Option<SetSection>,
    pub coherent: Option<CoherentSection>,
    pub charset: Option<CharsetSection>,
    pub membership: Option<MembershipSection>,
    pub syzygy: Option<SyzygySection>,
    pub dickson: Option<DicksonSection>,
    #[serde(rename = "hilbert-chain")]
    pub hilbert_chain: Option<HilbertSection>,
    #[serde(rename = "autoreduced-chain")]
    pub autoreduced_chain: Option<AutoChainSection>,
    #[serde(rename = "ritt-chain")]
    pub ritt_chain: Option<RittSection>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct SystemDecl {
    pub indeterminates: usize,
    pub derivations: usize,
    pub ranking: String,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct PseudodivideSection {
    pub f: String,
    pub set: Vec<String>,
    pub max_steps: Option<u64>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct SetSection {
    pub set: Vec<String>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct CoherentSection {
    pub set: Vec<String>,
    #[serde(default)]
    pub containment: bool,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct CharsetSection {
    pub set: Vec<String>,
    /// Oracle table rows: (polynomial, membership answer).
    pub oracle: Vec<(String, bool)>,
    #[serde(default)]
    pub oracle_default_false: bool,
    pub solve_degree: Option<u64>,
    pub max_rounds: Option<u64>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct MembershipSection {
    pub variables: usize,
    pub h: String,
    pub generators: Vec<String>,
    pub degree: u64,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct SyzygySection {
    pub variables: usize,
    pub generators: Vec<String>,
    pub degree: u64,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct DicksonSection {
    pub dimension: usize,
    pub vectors: Vec<Vec<u64>>,
    pub d: String,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct HilbertSection {
    pub variables: usize,
    pub d: String,
    /// Generator sets per stage; the last one repeats.
    pub stages: Vec<Vec<String>>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct AutoChainSection {
    pub d: String,
    /// Explicit stages (each an autoreduced set); the last one repeats.
    pub stages: Option<Vec<Vec<String>>>,
    /// Named stream generator: `staircase` with `leader` and `length`.
    pub generator: Option<String>,
    pub leader: Option<String>,
    pub length: Option<usize>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct RittSection {
    pub base: Vec<String>,
    pub d: String,
    pub f: String,
    pub i0: usize,
    pub scan_cap: usize,
    /// `pseudodivision`, `power-search`, or `table`.
    pub oracle: String,
    pub power_cap: Option<u64>,
    pub solve_degree: Option<u64>,
    /// Table rows: (stage index lower bound, polynomial, answer).
    pub table: Option<Vec<(usize, String, bool)>>,
    pub stages: Option<Vec<Vec<String>>>,
    /// Named stream generator: `derivative-closure` over `base`.
    pub generator: Option<String>,
}

pub fn load_input(path: &std::path::Path) -> Result<InputDoc> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let doc: InputDoc = toml::from_str(&text).context("parsing the input document")?;
    if doc.format != INPUT_FORMAT {
        bail!("unsupported input format {:?}, expected {INPUT_FORMAT:?}", doc.format);
    }
    Ok(doc)
}

pub fn system_ctx(doc: &InputDoc) -> Result<DiffCtx> {
    let Some(sys) = &doc.system else {
        bail!("this procedure needs a [system] declaration");
    };
    if sys.ranking != "orderly" {
        bail!("only the `orderly` ranking is supported");
    }
    if sys.indeterminates == 0 || sys.derivations == 0 {
        bail!("system needs at least one indeterminate and one derivation");
    }
    Ok(DiffCtx::new(sys.indeterminates, sys.derivations))
}

pub fn parse_diff_set(ctx: DiffCtx, texts: &[String]) -> Result<Vec<DiffPoly>> {
    texts
        .iter()
        .map(|t| {
            DiffPoly::parse(ctx, t).map_err(|e| anyhow::anyhow!("parsing {t:?}: {e}"))
        })
        .collect()
}

pub fn parse_polys(n_vars: usize, texts: &[String]) -> Result<Vec<Poly>> {
    texts
        .iter()
        .map(|t| Poly::parse(n_vars, t).map_err(|e| anyhow::anyhow!("parsing {t:?}: {e}")))
        .collect()
}
