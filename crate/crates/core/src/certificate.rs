//! Verifier suites, their JSON certificates, and replay.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::families::{family_i, family_j, gowers};
use crate::fk::reduced_string_embedding_check;
use crate::laws::{act_endomorphism_sample, acted_posets_of, associativity_exhaustive, confluence_sample};
use crate::monoid::{Monoid, MonoidJson};
use crate::mu::{i4_hasse_check, iso_to_concrete, lemma_tech_check, order_recursion_check, tower, IsoOutcome};
use crate::order::{decide_ramsey, fr, fr_laws_implicit, pi_max, x_of, RamseyVerdict};
use crate::source::FamilySpec;
use crate::tame::{check_tame, counterexample_coloring, search_tame, verify_not_ramsey, x_family, SearchBounds, SearchOutcome, TameReport, TypeFilter, TypeSpace};
use crate::words::{is_basic, LocatedWordJson, PointedMSet, WordFamily};

pub const CERTIFICATE_FORMAT: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    MuTower,
    OrderRecursion,
    I4Hasse,
    Strongness,
    Confluence,
    FkEmbedding,
    NotRamsey,
    TameSearch,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::MuTower => "mu-tower",
            Suite::OrderRecursion => "order-recursion",
            Suite::I4Hasse => "i4-hasse",
            Suite::Strongness => "strongness",
            Suite::Confluence => "confluence",
            Suite::FkEmbedding => "fk-embedding",
            Suite::NotRamsey => "not-ramsey",
            Suite::TameSearch => "tame-search",
        }
    }
}

/// Suite parameters. Unset fields take per-suite defaults; a certificate
/// stores the resolved values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monoid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_slot: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub types: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter: Option<String>,
    #[serde(default)]
    pub close_f: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: u32,
    pub suite: Suite,
    pub params: SuiteParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monoid: Option<MonoidJson>,
    pub passed: bool,
    pub result: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayOutcome {
    pub suite: Suite,
    pub passed: bool,
    /// The replayed verdict equals the recorded one.
    pub agrees: bool,
    pub method: String,
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn elem(m: &Monoid, label: &str) -> Result<usize> {
    m.find(label).ok_or_else(|| Error::Input(format!("{} has no element {label:?}", m.name())))
}

fn build(spec: &str) -> Result<Arc<Monoid>> {
    Ok(Arc::new(FamilySpec::parse(spec)?.build()?))
}

/// The families the strongness suite covers when no monoid is given.
pub fn default_families() -> Vec<Arc<Monoid>> {
    let mut out = Vec::new();
    for n in 1..=8 {
        out.push(Arc::new(gowers(n).unwrap()));
    }
    for n in 1..=6 {
        out.push(Arc::new(family_i(n).unwrap()));
    }
    for na in 0..=3 {
        for nb in 0..=3 {
            let a: Vec<String> = (1..=na).map(|i| format!("a{i}")).collect();
            let b: Vec<String> = (1..=nb).map(|i| format!("b{i}")).collect();
            let name = format!("J({na},{nb})");
            out.push(Arc::new(family_j(&a, &b).unwrap().with_name(name)));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongnessEntry {
    pub monoid: String,
    pub x_points: usize,
    pub x_strong: bool,
    pub y_points: usize,
    pub y_strong: bool,
    pub pi_max: bool,
    /// `Y(M)` was also built and checked directly; `false` when only the
    /// chain-mask check ran because the forest exceeds the size guard.
    pub built: bool,
    /// Both checks agree (trivially true when not built).
    pub agree: bool,
}

impl StrongnessEntry {
    fn passed(&self) -> bool {
        self.x_strong && self.y_strong && self.pi_max && self.agree
    }
}

pub fn strongness_of(m: &Arc<Monoid>) -> Result<StrongnessEntry> {
    let x = Arc::new(x_of(m));
    let implicit = fr_laws_implicit(&x)?;
    let mut e = StrongnessEntry {
        monoid: m.name().to_string(),
        x_points: x.len(),
        x_strong: x.is_strong(),
        y_points: implicit.chains,
        y_strong: implicit.strong_failure.is_none(),
        pi_max: implicit.pi_failure.is_none(),
        built: false,
        agree: true,
    };
    if let Ok(y) = fr(&x) {
        e.built = true;
        e.agree = y.len() == implicit.chains && y.is_strong() == e.y_strong && pi_max(&y, &x).is_ok() == e.pi_max;
    }
    Ok(e)
}

/// Resolved parameters and the pieces of a tame-search run.
struct TameSetup {
    space: TypeSpace,
    family: WordFamily,
    coloring: Coloring,
    filter: TypeFilter,
    bounds: SearchBounds,
}

fn tame_setup(m: &Arc<Monoid>, p: &SuiteParams) -> Result<TameSetup> {
    let types = p.types.as_deref().unwrap_or("y");
    let space = match types {
        "y" => TypeSpace::of_y(m)?,
        "x" => TypeSpace::of_x(m),
        other => return Err(Error::Input(format!("--types expects x or y, got {other:?}"))),
    };
    let family = match p.family.as_deref().unwrap_or("left") {
        "left" => WordFamily::constant(PointedMSet::left_regular(m)),
        "x" => x_family(m),
        other => return Err(Error::Input(format!("--family expects left or x, got {other:?}"))),
    };
    let spec = p.coloring.as_deref().unwrap_or("parity");
    let coloring = if spec == "counterexample" {
        if p.family.as_deref() != Some("x") {
            return Err(Error::Input("the counterexample coloring needs --family x".into()));
        }
        match decide_ramsey(m) {
            RamseyVerdict::NotRamsey { a, b, .. } => counterexample_coloring(m, a, b)?,
            _ => return Err(Error::Input(format!("X({}) is linear; no counterexample coloring", m.name()))),
        }
    } else {
        let set = family.set_at(0);
        let alphabet: Vec<usize> = (0..set.len()).filter(|&l| l != set.distinguished()).collect();
        Coloring::parse(spec, &family, &alphabet)?
    };
    let bounds = SearchBounds::new(p.len.unwrap_or(3), p.max_slot.unwrap_or(12), p.max_len.unwrap_or(3));
    let filter = match p.filter.as_deref().unwrap_or("all") {
        "all" => TypeFilter::All,
        "identity" => TypeFilter::Only([space.identity_type()].into_iter().collect()),
        other => return Err(Error::Input(format!("--filter expects all or identity, got {other:?}"))),
    };
    let filter = if p.close_f { filter.suffix_closed(&space, bounds.max_terms) } else { filter };
    Ok(TameSetup {
        space,
        family,
        coloring,
        filter,
        bounds,
    })
}

fn tame_result(setup: &TameSetup, outcome: &SearchOutcome) -> Result<(bool, Value)> {
    Ok(match outcome {
        SearchOutcome::Witness { words, nodes } => {
            let report = check_tame(&setup.space, &setup.family, &setup.coloring, words, setup.bounds.max_terms, &setup.filter)?;
            let json_words: Vec<LocatedWordJson> = words.iter().map(|w| setup.family.to_json(w)).collect();
            (
                report.verdict,
                json!({ "outcome": "witness", "words": json_words, "nodes": nodes, "report": report }),
            )
        }
        SearchOutcome::Exhausted { bounds, candidates, nodes } => (
            false,
            json!({ "outcome": "exhausted", "bounds": bounds, "candidates": candidates, "nodes": nodes }),
        ),
    })
}

/// Runs a suite with defaults filled in.
pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<Certificate> {
    run_suite_on(suite, params, None)
}

/// As [`run_suite`], with `given` standing in for the `monoid` spec.
pub fn run_suite_on(suite: Suite, params: &SuiteParams, given: Option<Arc<Monoid>>) -> Result<Certificate> {
    let mut p = params.clone();
    let load = |spec: &str| -> Result<Arc<Monoid>> {
        match &given {
            Some(m) => Ok(m.clone()),
            None => build(spec),
        }
    };
    let mut monoid = None;
    let (passed, result) = match suite {
        Suite::MuTower => {
            let k = *p.k.get_or_insert(6);
            tower(k)?;
            let levels: Vec<IsoOutcome> = (1..=k).map(iso_to_concrete).collect::<Result<_>>()?;
            let tech = if k >= 2 { Some(lemma_tech_check(&tower(k)?)?) } else { None };
            let passed = levels.iter().all(|l| l.passed()) && tech.as_ref().is_none_or(|t| t.failure.is_none());
            (passed, json!({ "levels": levels, "tech": tech }))
        }
        Suite::OrderRecursion => {
            let n = *p.n.get_or_insert(5);
            let outs = (1..=n).map(order_recursion_check).collect::<Result<Vec<_>>>()?;
            (outs.iter().all(|o| o.passed()), to_value(&outs))
        }
        Suite::I4Hasse => {
            let out = i4_hasse_check()?;
            (out.passed(), to_value(&out))
        }
        Suite::Strongness => {
            let entries: Vec<StrongnessEntry> = match &p.monoid {
                Some(spec) => {
                    let m = load(spec)?;
                    monoid = Some(m.to_json());
                    vec![strongness_of(&m)?]
                }
                None => default_families().iter().map(strongness_of).collect::<Result<_>>()?,
            };
            (entries.iter().all(|e| e.passed()), to_value(&entries))
        }
        Suite::Confluence => {
            let seed = *p.seed.get_or_insert(0);
            let words = *p.n.get_or_insert(1000);
            let max_points = *p.k.get_or_insert(6);
            let max_len = *p.max_len.get_or_insert(3);
            let conf = confluence_sample(seed, words, max_points, 10);
            let assoc = associativity_exhaustive(max_points.min(4), max_len);
            let ms = vec![
                Arc::new(gowers(3).unwrap()),
                Arc::new(family_i(4).unwrap()),
                Arc::new(family_j(&["a1", "a2"], &["b"]).unwrap()),
                Arc::new(family_j(&[] as &[&str], &["b1", "b2"]).unwrap()),
            ];
            let endo = act_endomorphism_sample(&acted_posets_of(&ms), seed, 50, 5);
            let passed = conf.failure.is_none() && assoc.failure.is_none() && endo.failure.is_none();
            (passed, json!({ "confluence": conf, "associativity": assoc, "endomorphism": endo }))
        }
        Suite::FkEmbedding => {
            let spec = p.monoid.get_or_insert_with(|| "j:a1,a2:b1,b2".into()).clone();
            let FamilySpec::J(a, b) = FamilySpec::parse(&spec)? else {
                return Err(Error::Input("fk-embedding needs a j:<A>:<B> monoid".into()));
            };
            let max_len = *p.max_len.get_or_insert(5);
            let report = reduced_string_embedding_check(&a, &b, max_len)?;
            monoid = Some(family_j(&a, &b)?.to_json());
            (report.passed, to_value(&report))
        }
        Suite::NotRamsey => {
            let spec = p.monoid.get_or_insert_with(|| "i:4".into()).clone();
            let m = load(&spec)?;
            let (a, b) = match (&p.a, &p.b) {
                (Some(a), Some(b)) => (elem(&m, a)?, elem(&m, b)?),
                _ => match decide_ramsey(&m) {
                    RamseyVerdict::NotRamsey { a, b, .. } => (a, b),
                    _ => return Err(Error::Input(format!("X({}) is linear; give --a and --b", m.name()))),
                },
            };
            p.a = Some(m.label(a));
            p.b = Some(m.label(b));
            let max_slot = *p.max_slot.get_or_insert(5);
            let max_len = *p.max_len.get_or_insert(3);
            let ev = verify_not_ramsey(&m, a, b, max_slot, max_len)?;
            monoid = Some(m.to_json());
            (ev.passed(), to_value(&ev))
        }
        Suite::TameSearch => {
            let spec = p.monoid.get_or_insert_with(|| "g:2".into()).clone();
            let m = load(&spec)?;
            p.types.get_or_insert_with(|| "y".into());
            p.family.get_or_insert_with(|| "left".into());
            p.coloring.get_or_insert_with(|| "parity".into());
            p.filter.get_or_insert_with(|| "all".into());
            p.len.get_or_insert(3);
            p.max_slot.get_or_insert(12);
            p.max_len.get_or_insert(3);
            let setup = tame_setup(&m, &p)?;
            let outcome = search_tame(&setup.space, &setup.family, &setup.coloring, &setup.filter, setup.bounds)?;
            monoid = Some(m.to_json());
            tame_result(&setup, &outcome)?
        }
    };
    Ok(Certificate {
        format: CERTIFICATE_FORMAT,
        suite,
        params: p,
        monoid,
        passed,
        result,
    })
}

/// Re-validates a certificate. Witnesses and isomorphisms are checked
/// directly; suites without a search are recomputed and compared.
pub fn replay(cert: &Certificate) -> Result<ReplayOutcome> {
    if cert.format != CERTIFICATE_FORMAT {
        return Err(Error::Input(format!("unsupported certificate format {}", cert.format)));
    }
    let embedded = cert.monoid.clone().map(Monoid::from_json).transpose()?.map(Arc::new);
    let outcome = |passed: bool, method: &str| ReplayOutcome {
        suite: cert.suite,
        passed,
        agrees: passed == cert.passed,
        method: method.to_string(),
    };
    match cert.suite {
        Suite::MuTower => {
            let levels: Vec<IsoOutcome> = serde_json::from_value(cert.result["levels"].clone())
                .map_err(|e| Error::Input(format!("bad certificate: {e}")))?;
            let mut ok = true;
            for l in &levels {
                let tr = tower(l.k)?;
                let ik = family_i(l.k)?;
                ok &= tr.monoid().check_isomorphism(&ik, &l.map).is_ok();
            }
            ok &= levels.len() == cert.params.k.unwrap_or(0);
            if let Some(k) = cert.params.k.filter(|&k| k >= 2) {
                ok &= lemma_tech_check(&tower(k)?)?.failure.is_none();
            }
            Ok(outcome(ok, "stored bijections checked against both tables"))
        }
        Suite::TameSearch => {
            let m = embedded.ok_or_else(|| Error::Input("certificate lacks its monoid".into()))?;
            let setup = tame_setup(&m, &cert.params)?;
            if cert.result["outcome"] == "witness" {
                let words: Vec<LocatedWordJson> = serde_json::from_value(cert.result["words"].clone())
                    .map_err(|e| Error::Input(format!("bad certificate: {e}")))?;
                let words = words.iter().map(|w| setup.family.from_json(w)).collect::<Result<Vec<_>>>()?;
                let b = setup.bounds;
                let shaped = words.len() == b.seq_len
                    && is_basic(&words)
                    && words.iter().all(|w| setup.family.contains_distinguished(w) && w.len() <= b.max_len && w.max_slot() <= b.max_slot);
                let report: TameReport = check_tame(&setup.space, &setup.family, &setup.coloring, &words, b.max_terms, &setup.filter)?;
                Ok(outcome(shaped && report.verdict, "witness re-checked for tameness"))
            } else {
                let again = search_tame(&setup.space, &setup.family, &setup.coloring, &setup.filter, setup.bounds)?;
                let (passed, result) = tame_result(&setup, &again)?;
                let mut o = outcome(passed, "exhaustion re-run, no witness to check");
                o.agrees &= result == cert.result;
                Ok(o)
            }
        }
        _ => {
            let again = run_suite_on(cert.suite, &cert.params, embedded)?;
            let mut o = outcome(again.passed, "recomputed");
            o.agrees &= again.result == cert.result;
            Ok(o)
        }
    }
}
