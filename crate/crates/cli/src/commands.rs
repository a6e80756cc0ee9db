use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;

use ksforge_core::fixtures::{fixture_data, FixtureName};
use ksforge_core::io::{self, CatalogRecord, EnumerationRecord, ParseError};
use ksforge_core::parity::{
    classification_table, classify_parity_proofs, enumerate_parents, ParentSet,
};
use ksforge_core::proof::{
    exhaustive_report, parity_contradiction, search_state_dependent, split_rank2,
    state_dependent_proof, validate_structure, ProofError, ProofReport, StateDependentHit,
};
use ksforge_core::rays::{enumerate_bases_clique_oracle, RaySystem};
use ksforge_core::relabel::Realization;
use ksforge_core::transform::{enumerate_all_children, enumerate_children, ChildEnumeration};
use ksforge_core::{KsSet, RayId, RaySet};
use serde::Serialize;
use thiserror::Error;

use crate::Format;

pub struct Output {
    pub body: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("oracle disagreement: {0}")]
    Oracle(String),
    /// The command ran but its result is negative; the output is still written.
    #[error("{message}")]
    Failed { output: Output, message: String },
}

impl std::fmt::Debug for Output {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Output({} bytes)", self.body.len())
    }
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Failed { .. } => 1,
            CliError::Oracle(_) => 3,
        }
    }
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> Output {
    Output {
        body: match format {
            Format::Json => io::to_json(value),
            Format::Text => text(),
        },
    }
}

pub fn parse_pair(s: &str) -> Result<(u8, u8), String> {
    let (a, b) = s.split_once(',').ok_or("expected `i,j`")?;
    let a: u8 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: u8 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if a == b {
        return Err("the two rays must differ".into());
    }
    Ok((a.min(b), a.max(b)))
}

fn load_set(arg: &str) -> Result<KsSet, CliError> {
    if arg.starts_with("fixture:") {
        let name = arg
            .parse::<FixtureName>()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        return Ok(fixture_data(name));
    }
    let text = fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
    Ok(io::ksset_from_json(&text)?)
}

fn load_parent(arg: &str) -> Result<ParentSet, CliError> {
    match arg {
        "fixture:table2" | "table2" => Ok(ParentSet::table2()),
        _ => {
            let index: usize = arg.parse().map_err(|_| {
                CliError::Usage(format!(
                    "`{arg}` is neither a parent index nor fixture:table2"
                ))
            })?;
            let parents = enumerate_parents(RaySystem::shared());
            let n = parents.len();
            parents
                .into_iter()
                .nth(index)
                .ok_or_else(|| CliError::Usage(format!("parent index {index} out of range 0..{n}")))
        }
    }
}

fn join(ids: impl IntoIterator<Item = impl ToString>) -> String {
    ids.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn expectation(
    output: Output,
    what: &str,
    expected: Option<usize>,
    observed: &[usize],
) -> Result<Output, CliError> {
    match expected {
        Some(n) if observed.iter().any(|&o| o != n) => Err(CliError::Failed {
            output,
            message: format!(
                "expected {n} {what}, found {}",
                join(observed.iter().collect::<std::collections::BTreeSet<_>>())
            ),
        }),
        _ => Ok(output),
    }
}

pub fn rays(format: Format) -> Result<Output, CliError> {
    let sys = RaySystem::shared();
    Ok(Output {
        body: match format {
            Format::Json => io::rays_to_json(sys.rays()),
            Format::Text => io::rays_text(sys.rays()),
        },
    })
}

pub fn bases(format: Format) -> Result<Output, CliError> {
    let sys = RaySystem::shared();
    let mut constructive: Vec<RaySet> = sys.bases().iter().map(|b| b.rays).collect();
    constructive.sort();
    let mut cliques = enumerate_bases_clique_oracle(sys.graph());
    cliques.sort();
    if constructive != cliques {
        return Err(CliError::Oracle(format!(
            "{} constructive bases vs {} cliques",
            constructive.len(),
            cliques.len()
        )));
    }
    if !sys.all_bases_resolve_identity() {
        return Err(CliError::Oracle(
            "a basis does not sum to the identity".into(),
        ));
    }
    Ok(Output {
        body: match format {
            Format::Json => io::bases_to_json(sys.bases()),
            Format::Text => io::bases_text(sys.bases()),
        },
    })
}

#[derive(Serialize)]
struct ParentRecord {
    index: usize,
    mask: String,
    pure_basis: u8,
    bases: Vec<u8>,
}

pub fn parents(format: Format, expect: Option<usize>) -> Result<Output, CliError> {
    let parents = enumerate_parents(RaySystem::shared());
    let records: Vec<ParentRecord> = parents
        .iter()
        .enumerate()
        .map(|(index, p)| ParentRecord {
            index,
            mask: p.describe(),
            pure_basis: p.bases.iter().find(|b| b.pure).map_or(0, |b| b.label),
            bases: p.bases.iter().map(|b| b.label).collect(),
        })
        .collect();
    let out = render(format, &records, || {
        let mut s = String::new();
        for r in &records {
            let _ = writeln!(
                s,
                "{:>3}  {}  pb {:>1}  {}",
                r.index,
                r.mask,
                r.pure_basis,
                join(&r.bases)
            );
        }
        let _ = writeln!(s, "{} parents", records.len());
        s
    });
    expectation(out, "parents", expect, &[records.len()])
}

#[derive(Serialize)]
struct Classification {
    max_bases: usize,
    total: usize,
    counts: BTreeMap<String, usize>,
}

pub fn classify(format: Format, max_bases: usize) -> Result<Output, CliError> {
    if max_bases == 0 {
        return Err(CliError::Usage("--max-bases must be positive".into()));
    }
    let counts = classification_table(&classify_parity_proofs(RaySystem::shared(), max_bases));
    let record = Classification {
        max_bases,
        total: counts.values().sum(),
        counts,
    };
    Ok(render(format, &record, || {
        let mut s = String::new();
        for (sig, n) in &record.counts {
            let _ = writeln!(s, "{n:>6}  {sig}");
        }
        let _ = writeln!(s, "{:>6}  total", record.total);
        s
    }))
}

fn enumeration_text(parent: &ParentSet, e: &ChildEnumeration, children: bool) -> String {
    let a = &e.analysis;
    let c = &e.certificate;
    let mut s = String::new();
    let _ = writeln!(s, "parent      {}", parent.describe());
    let _ = writeln!(s, "pure basis  {}", a.pb);
    let _ = writeln!(s, "gamma       {}", join(a.gamma));
    let _ = writeln!(s, "not gamma   {}", join(a.not_gamma));
    let _ = writeln!(s, "delta       {}", join(a.delta));
    let _ = writeln!(s, "base order  {}", join(&a.hb_order));
    let _ = writeln!(
        s,
        "candidates  {}  accepted {}  distinct {}",
        c.total_candidates, c.successes, c.distinct_children
    );
    for (kind, n) in &c.failures {
        let _ = writeln!(s, "rejected    {n} {kind}");
    }
    for (what, x) in &c.expectations {
        let mark = if x.matches { "ok" } else { "differs" };
        let _ = writeln!(
            s,
            "claim       {what}: {} vs observed {} ({mark})",
            x.claimed, x.observed
        );
    }
    if children {
        for (i, (cfg, set)) in e.children.iter().enumerate() {
            let pairs = |v: &[(RayId, RayId)]| join(v.iter().map(|(a, b)| format!("{a}-{b}")));
            let _ = writeln!(
                s,
                "\nchild {i}: matching {} | choice {}",
                pairs(&cfg.i_matching),
                pairs(&cfg.v_choice)
            );
            s.push_str(&io::ksset_text(set));
        }
    }
    s
}

pub fn transform_one(
    format: Format,
    parent: &str,
    expect: Option<usize>,
) -> Result<Output, CliError> {
    let parent = load_parent(parent)?;
    let e = enumerate_children(&parent).map_err(|err| CliError::Oracle(err.to_string()))?;
    let record = EnumerationRecord::new(&parent, &e, true, true);
    let out = render(format, &record, || enumeration_text(&parent, &e, true));
    expectation(out, "children", expect, &[e.certificate.successes])
}

pub fn transform_all(
    format: Format,
    expect: Option<usize>,
    children: bool,
    rejections: bool,
) -> Result<Output, CliError> {
    let parents = enumerate_parents(RaySystem::shared());
    let catalog =
        enumerate_all_children(&parents).map_err(|err| CliError::Oracle(err.to_string()))?;
    let record = CatalogRecord {
        summary: catalog.summary.clone(),
        parents: parents
            .iter()
            .zip(&catalog.enumerations)
            .map(|(p, e)| EnumerationRecord::new(p, e, children, rejections))
            .collect(),
    };
    let sum = &catalog.summary;
    let out = render(format, &record, || {
        let mut s = String::new();
        let _ = writeln!(s, "parents           {}", sum.parents);
        let _ = writeln!(s, "children          {}", sum.total_children);
        let _ = writeln!(s, "distinct children {}", sum.distinct_children);
        let _ = writeln!(s, "equal per parent  {}", sum.counts_equal);
        for (kind, n) in &sum.failures {
            let _ = writeln!(s, "rejected          {n} {kind}");
        }
        for (p, e) in parents.iter().zip(&catalog.enumerations) {
            let _ = writeln!(s, "{}  {}", p.describe(), e.certificate.successes);
        }
        s
    });
    expectation(
        out,
        "children per parent",
        expect,
        &sum.per_parent_successes,
    )
}

#[derive(Serialize)]
struct VerifyRecord {
    source: Option<String>,
    signature: String,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    contradiction: bool,
    reports: Vec<ProofReport>,
}

pub fn verify(format: Format, arg: &str, exhaustive: bool) -> Result<Output, CliError> {
    let set = load_set(arg)?;
    let realization = Realization::for_frame(set.frame());
    let mut record = VerifyRecord {
        source: set.provenance.source.clone(),
        signature: set.signature().to_string(),
        valid: true,
        error: None,
        contradiction: false,
        reports: Vec::new(),
    };
    if let Err(e) = validate_structure(&set, &realization) {
        record.valid = false;
        record.error = Some(e.to_string());
    } else {
        match parity_contradiction(&set) {
            Ok(r) => record.reports.push(r),
            Err(e) => record.error = Some(e.to_string()),
        }
        if exhaustive {
            record.reports.push(exhaustive_report(&set));
        }
        record.contradiction = record.reports.iter().any(|r| r.contradiction);
    }
    let out = render(format, &record, || {
        let mut s = String::new();
        let _ = writeln!(s, "signature  {}", record.signature);
        let _ = writeln!(s, "valid      {}", record.valid);
        if let Some(e) = &record.error {
            let _ = writeln!(s, "note       {e}");
        }
        for r in &record.reports {
            let _ = writeln!(
                s,
                "{:<10} {}",
                format!("{:?}", r.kind).to_lowercase(),
                r.witness
            );
        }
        let _ = writeln!(
            s,
            "verdict    {}",
            if record.contradiction {
                "contextual"
            } else {
                "not proved"
            }
        );
        s
    });
    if record.contradiction {
        Ok(out)
    } else {
        let message = record
            .error
            .clone()
            .unwrap_or_else(|| "no contradiction found".into());
        Err(CliError::Failed {
            output: out,
            message,
        })
    }
}

fn statedep_text(r: &ProofReport) -> String {
    let mut s = String::new();
    let d = r.state_dependent.as_ref().expect("state-dependent report");
    let _ = writeln!(s, "signature    {}", r.signature.as_deref().unwrap_or(""));
    let _ = writeln!(s, "pre, post    {}, {}", d.pre, d.post);
    let _ = writeln!(s, "probability  {}", d.probability);
    for e in &d.residual.equations {
        let lhs = e
            .projectors
            .iter()
            .map(|p| format!("v({p})"))
            .collect::<Vec<_>>()
            .join(" + ");
        let _ = writeln!(s, "residual     {lhs} = {}", e.rhs);
    }
    let inv = &d.inventory;
    let _ = writeln!(s, "orth. pre    {}", join(&inv.orthogonal_to_pre));
    let _ = writeln!(s, "orth. post   {}", join(&inv.orthogonal_to_post));
    let b = inv.breakdown();
    let _ = writeln!(
        s,
        "projectors   {} = {} + {} + {} + {} + {}",
        inv.total(),
        b[0],
        b[1],
        b[2],
        b[3],
        b[4]
    );
    let _ = writeln!(s, "verdict      {}", r.witness);
    s
}

pub fn statedep(
    format: Format,
    arg: &str,
    split: Option<(u8, u8)>,
    pre: u8,
    post: u8,
) -> Result<Output, CliError> {
    let mut set = load_set(arg)?;
    if let Some(pair) = split {
        set = split_rank2(&set, pair).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let realization = Realization::for_frame(set.frame());
    let report = state_dependent_proof(&set, &realization, pre, post).map_err(|e| match e {
        ProofError::Inconsistent(_) => CliError::Oracle(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    let out = render(format, &report, || statedep_text(&report));
    if report.contradiction {
        Ok(out)
    } else {
        Err(CliError::Failed {
            output: out,
            message: "the residual system is satisfiable".into(),
        })
    }
}

#[derive(Serialize)]
struct SearchRecord {
    parent: String,
    children_searched: usize,
    children_with_hits: usize,
    total_hits: usize,
    /// Number of hits by projectors used.
    by_projectors_used: BTreeMap<usize, usize>,
    hits: Vec<StateDependentHit>,
}

pub fn statedep_search(
    format: Format,
    parent: &str,
    limit: Option<usize>,
    max_used: Option<usize>,
) -> Result<Output, CliError> {
    let parent = load_parent(parent)?;
    let e = enumerate_children(&parent).map_err(|err| CliError::Oracle(err.to_string()))?;
    let n = limit.unwrap_or(e.children.len()).min(e.children.len());
    let children: Vec<KsSet> = e.children.iter().take(n).map(|(_, s)| s.clone()).collect();
    let realization = Realization::for_frame(parent.frame);
    let mut hits = search_state_dependent(&children, &realization);
    let mut with_hits: Vec<usize> = hits.iter().map(|h| h.child).collect();
    with_hits.dedup();
    let mut by_projectors_used = BTreeMap::new();
    for h in &hits {
        *by_projectors_used.entry(h.used).or_insert(0) += 1;
    }
    let total_hits = hits.len();
    if let Some(m) = max_used {
        hits.retain(|h| h.used <= m);
    }
    let record = SearchRecord {
        parent: parent.describe(),
        children_searched: n,
        children_with_hits: with_hits.len(),
        total_hits,
        by_projectors_used,
        hits,
    };
    Ok(render(format, &record, || {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "parent {}  children {}  with hits {}  hits {}",
            record.parent, n, record.children_with_hits, record.total_hits
        );
        for (used, count) in &record.by_projectors_used {
            let _ = writeln!(s, "{count:>8} hits using {used} projectors");
        }
        for h in &record.hits {
            let _ = writeln!(
                s,
                "child {:>3}  split ({},{})  pre {:>2}  post {:>2}  p {:<5}  projectors {}",
                h.child, h.split.0, h.split.1, h.pre, h.post, h.probability, h.used
            );
        }
        s
    }))
}

pub fn fixtures(format: Format, name: &str) -> Result<Output, CliError> {
    let name = name
        .parse::<FixtureName>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let set = fixture_data(name);
    Ok(Output {
        body: match format {
            Format::Json => io::ksset_to_json(&set),
            Format::Text => io::ksset_text(&set),
        },
    })
}
