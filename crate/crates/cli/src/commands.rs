//! One function per subcommand; each returns the rendered report and an outcome.

use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use num_rational::Ratio;
use ppf_core::gf2::parse_int;
use ppf_core::gring::{rds_from_function, verify_rds};
use ppf_core::planar::{first_zero_det, is_pp_bruteforce, mono_t2_condition, DetPath};
use ppf_core::search::{AffineScan, SearchKind};
use ppf_core::sfield::derive_semifield;
use ppf_core::signal::{
    self, levenstein_bound_sq, ratio_f64, verify_mub, welch_bound_sq, BasisLabel, CodeVec, Codebook,
};
use ppf_core::{DoQuad, Fe, FieldCtx, FieldSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::funcspec::parse_function;
use crate::report::{self, float, hex, ratio, LISTING_LIMIT};
use crate::{Command, Format, Method, Outcome, RunConfig, SearchSpace, Source, Target};

pub fn run(config: &RunConfig) -> Result<(String, Outcome)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .context("starting the worker pool")?;
    pool.install(|| dispatch(&config.command))
}

fn dispatch(command: &Command) -> Result<(String, Outcome)> {
    let (report, outcome) = match command {
        Command::Verify {
            field,
            function,
            method,
            sample,
            seed,
        } => match sample {
            Some(count) => verify_sample(field, *method, *count, *seed)?,
            None => verify(
                field,
                function.as_deref().expect("clap requires it"),
                *method,
            )?,
        },
        Command::Search {
            space,
            m,
            poly,
            long_run,
            checkpoint,
            out,
        } => search(
            *space,
            *m,
            poly.as_deref(),
            *long_run,
            checkpoint.as_deref(),
            out.as_deref(),
        )?,
        Command::Rds { target, verify } => rds(target, *verify)?,
        Command::Codebook {
            target,
            out,
            format,
            source,
        } => return codebook(target, out.as_deref(), *format, *source),
        Command::Mub {
            target,
            verify,
            out,
        } => mub(target, *verify, out.as_deref())?,
        Command::Semifield { target, e, nuclei } => semifield(target, e, *nuclei)?,
        Command::Bounds { n, k } => bounds(*n, *k)?,
    };
    Ok((report::render(&Value::Object(report)), outcome))
}

type Report = (Map<String, Value>, Outcome);

fn target_header(command: &str, spec: &str, f: &DoQuad) -> Map<String, Value> {
    let mut r = report::header(command);
    r.insert("field".into(), report::field_info(f.ctx()));
    r.insert("function".into(), report::function_info(spec, f));
    r
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Brute => "brute",
        Method::Criterion => "criterion",
        Method::Both => "both",
    }
}

struct Verdict {
    brute: Option<bool>,
    criterion: Option<bool>,
    zero_det_at: Option<Fe>,
}

fn decide(f: &DoQuad, method: Method) -> Result<Verdict> {
    let brute = match method {
        Method::Brute | Method::Both => Some(is_pp_bruteforce(f)?),
        Method::Criterion => None,
    };
    let (criterion, zero_det_at) = match method {
        Method::Criterion | Method::Both => {
            let b = first_zero_det(f, DetPath::Specialized)?;
            (Some(b.is_none()), b)
        }
        Method::Brute => (None, None),
    };
    Ok(Verdict {
        brute,
        criterion,
        zero_det_at,
    })
}

fn verify(field: &FieldSpec, spec: &str, method: Method) -> Result<Report> {
    let f = parse_function(field, spec)?;
    let v = decide(&f, method)?;
    let agree = match (v.brute, v.criterion) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    };
    let pp = v.brute.or(v.criterion).expect("some method ran") && agree;
    let mut r = target_header("verify", spec, &f);
    r.insert("method".into(), json!(method_name(method)));
    r.insert("brute_force".into(), json!(v.brute));
    r.insert("criterion".into(), json!(v.criterion));
    r.insert("zero_determinant_at".into(), json!(v.zero_det_at.map(hex)));
    r.insert("methods_agree".into(), json!(agree));
    r.insert("pseudo_planar".into(), json!(pp));
    Ok((r, Outcome::from_bool(pp)))
}

fn verify_sample(field: &FieldSpec, method: Method, count: u64, seed: u64) -> Result<Report> {
    let m = field
        .m
        .ok_or_else(|| anyhow!("--sample draws family-form functions and needs m in --field"))?;
    let ctx = Arc::new(field.build()?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positives = 0u64;
    let mut disagreements = Vec::new();
    for _ in 0..count {
        let f = DoQuad::random_family(ctx.clone(), &mut rng);
        let v = decide(&f, method)?;
        if v.brute.or(v.criterion) == Some(true) {
            positives += 1;
        }
        if let (Some(a), Some(b)) = (v.brute, v.criterion) {
            if a != b {
                disagreements.push(report::function_info("", &f)["terms"].clone());
            }
        }
    }
    let mut r = report::header("verify");
    r.insert("field".into(), report::field_info(&ctx));
    r.insert("method".into(), json!(method_name(method)));
    r.insert(
        "sample".into(),
        json!({ "count": count, "seed": seed, "m": m }),
    );
    r.insert("pseudo_planar_count".into(), json!(positives));
    r.insert("disagreements".into(), json!(disagreements));
    let ok = disagreements.is_empty();
    r.insert("methods_agree".into(), json!(ok));
    Ok((r, Outcome::from_bool(ok)))
}

/// Progress of an interrupted search.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub range_done: Vec<[u64; 2]>,
    pub partial_count: u64,
    pub search: String,
    pub m: u32,
    pub poly: String,
}

fn load_checkpoint(path: &Path) -> Result<Option<Checkpoint>> {
    match std::fs::read_to_string(path) {
        Ok(s) => Ok(Some(
            serde_json::from_str(&s).with_context(|| format!("reading {}", path.display()))?,
        )),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e).with_context(|| format!("reading {}", path.display())),
    }
}

fn save_checkpoint(path: &Path, cp: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    report::write_file(&tmp, &serde_json::to_string(cp)?)?;
    std::fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))
}

/// Number of checkpointed blocks the prefix space is cut into.
const SEARCH_BLOCKS: u64 = 256;

fn search(
    space: SearchSpace,
    m: u32,
    poly: Option<&str>,
    long_run: bool,
    checkpoint: Option<&Path>,
    out: Option<&Path>,
) -> Result<Report> {
    let poly = poly.map(parse_int).transpose()?;
    let (kind, t) = match space {
        SearchSpace::TrinomialT3 => (Some(SearchKind::TrinomialT3), 3),
        SearchSpace::T2General => (Some(SearchKind::T2General), 2),
        SearchSpace::MonoT2 => (None, 2),
    };
    if m == 0 {
        bail!("m must be positive");
    }
    let ctx = FieldCtx::with_split(t * m, poly, m)?;
    let name = match kind {
        Some(k) => k.name(),
        None => "mono-t2",
    };
    let mut r = report::header("search");
    r.insert("search".into(), json!(name));
    r.insert("m".into(), json!(m));
    r.insert("field".into(), report::field_info(&ctx));

    let (count, members, resumed, candidates) = match kind {
        Some(kind) => {
            if m > kind.default_max_m() && !long_run {
                bail!("{name} with m={m} is a long-running scan; pass --long-run");
            }
            let scan = AffineScan::new(&ctx, kind)?;
            let mut cp = Checkpoint {
                range_done: Vec::new(),
                partial_count: 0,
                search: name.into(),
                m,
                poly: format!("0x{:x}", ctx.poly()),
            };
            if let Some(path) = checkpoint {
                if let Some(prev) = load_checkpoint(path)? {
                    if (prev.search.as_str(), prev.m, prev.poly.as_str())
                        != (name, m, cp.poly.as_str())
                    {
                        bail!(
                            "checkpoint {} belongs to a different search",
                            path.display()
                        );
                    }
                    cp = prev;
                }
            }
            let resumed = !cp.range_done.is_empty();
            let total = scan.prefix_count();
            let step = total.div_ceil(SEARCH_BLOCKS).max(1);
            let mut members = Vec::new();
            for lo in (0..total).step_by(step as usize) {
                let hi = (lo + step).min(total);
                if cp.range_done.contains(&[lo, hi]) {
                    continue;
                }
                let res = scan.scan_range(lo, hi, !resumed);
                cp.partial_count += res.count;
                cp.range_done.push([lo, hi]);
                members.extend(res.members);
                if let Some(path) = checkpoint {
                    save_checkpoint(path, &cp)?;
                }
            }
            let listing = (!resumed).then(|| {
                members
                    .iter()
                    .map(|mem| json!(mem.iter().map(|&c| hex(c)).collect::<Vec<_>>()))
                    .collect::<Vec<_>>()
            });
            (cp.partial_count, listing, resumed, scan.candidate_count())
        }
        None => {
            let mut listing = Vec::new();
            for c in ctx.elements() {
                if mono_t2_condition(&ctx, c)? {
                    listing.push(json!(hex(c)));
                }
            }
            let count = listing.len() as u64;
            let nonzero = count - u64::from(mono_t2_condition(&ctx, Fe::ZERO)?);
            r.insert("nonzero_count".into(), json!(nonzero));
            (count, Some(listing), false, ctx.size())
        }
    };
    r.insert("candidates".into(), json!(candidates));
    r.insert("count".into(), json!(count));
    r.insert("resumed".into(), json!(resumed));
    match members {
        None => {
            r.insert("members".into(), Value::Null);
            r.insert(
                "note".into(),
                json!("resumed from a checkpoint: only the count is available"),
            );
        }
        Some(list) => attach_listing(&mut r, "members", list, out)?,
    }
    Ok((r, Outcome::Success))
}

/// Puts a listing inline, into `out`, or (above the limit without `out`) nowhere.
fn attach_listing(
    r: &mut Map<String, Value>,
    key: &str,
    list: Vec<Value>,
    out: Option<&Path>,
) -> Result<()> {
    match out {
        Some(path) => {
            report::write_file(path, &report::render(&Value::Array(list)))?;
            r.insert(format!("{key}_file"), json!(path.display().to_string()));
        }
        None if list.len() > LISTING_LIMIT => {
            r.insert(key.into(), Value::Null);
            r.insert(
                "note".into(),
                json!(format!(
                    "listing of {} items exceeds {LISTING_LIMIT}; pass --out to write it",
                    list.len()
                )),
            );
        }
        None => {
            r.insert(key.into(), Value::Array(list));
        }
    }
    Ok(())
}

fn rds(target: &Target, verify: bool) -> Result<Report> {
    let f = parse_function(&target.field, &target.function)?;
    let ctx = f.ctx();
    let d = rds_from_function(&f)?;
    let mut r = target_header("rds", &target.function, &f);
    r.insert("size".into(), json!(d.len()));
    let elems: Vec<Value> = d.iter().map(|x| json!([hex(x.a), hex(x.b)])).collect();
    r.insert("elements".into(), json!(elems));
    if !verify {
        return Ok((r, Outcome::Success));
    }
    let rep = verify_rds(ctx, &d)?;
    let histogram: Map<String, Value> = rep
        .histogram
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    let pair = |p: Option<(ppf_core::gring::GrElem, u64)>| {
        p.map(|(e, c)| json!({ "element": [hex(e.a), hex(e.b)], "count": c }))
    };
    r.insert(
        "verification".into(),
        json!({
            "is_rds": rep.is_rds,
            "unit_coverage": rep.unit_coverage,
            "expected_unit_coverage": rep.expected_unit_coverage,
            "forbidden_hits": rep.forbidden_hits,
            "histogram": histogram,
            "first_miscovered": pair(rep.first_miscovered),
            "first_forbidden": pair(rep.first_forbidden),
            "note": rep.note,
        }),
    );
    Ok((r, Outcome::from_bool(rep.is_rds)))
}

fn vector_json(v: &CodeVec) -> Value {
    json!(v
        .entries
        .iter()
        .map(|e| json!([e.re, e.im]))
        .collect::<Vec<_>>())
}

fn csv_cell(v: &CodeVec, j: usize) -> String {
    let (re, im) = v.entry_f64(j);
    format!("{re:.16e}{im:+.16e}j")
}

fn codebook_summary(cb: &Codebook, n: u32) -> Result<Map<String, Value>> {
    let (nn, k) = (cb.len() as u64, cb.dim as u64);
    let imax_sq = cb.imax_sq();
    let lev = levenstein_bound_sq(nn, k).ok();
    let mut r = Map::new();
    r.insert("n".into(), json!(n));
    r.insert("N".into(), json!(nn));
    r.insert("K".into(), json!(k));
    r.insert("imax_sq".into(), json!(ratio(imax_sq)));
    r.insert("imax".into(), float(ratio_f64(imax_sq).sqrt()));
    r.insert("levenstein_sq".into(), json!(lev.map(ratio)));
    r.insert("meets_levenstein".into(), json!(lev == Some(imax_sq)));
    r.insert(
        "welch_sq".into(),
        json!(welch_bound_sq(nn, k).ok().map(ratio)),
    );
    let alphabet: Vec<String> = cb.alphabet().iter().map(|a| a.to_string()).collect();
    r.insert("alphabet_size".into(), json!(alphabet.len()));
    r.insert("alphabet".into(), json!(alphabet));
    r.insert("scale_denominator_sq".into(), json!(1u64 << n));
    Ok(r)
}

fn codebook(
    target: &Target,
    out: Option<&Path>,
    format: Format,
    source: Source,
) -> Result<(String, Outcome)> {
    let f = parse_function(&target.field, &target.function)?;
    let ctx = f.ctx();
    let cb = match source {
        Source::Mub => signal::codebook_from_function(&f)?,
        Source::Rds => {
            if !is_pp_bruteforce(&f)? {
                bail!(ppf_core::Error::NotPseudoPlanar);
            }
            signal::rds_codebook(ctx, &rds_from_function(&f)?)?
        }
    };
    let mut r = target_header("codebook", &target.function, &f);
    r.insert(
        "source".into(),
        json!(match source {
            Source::Mub => "mub",
            Source::Rds => "rds",
        }),
    );
    r.extend(codebook_summary(&cb, ctx.n())?);
    let body = match format {
        Format::Json => {
            let mut full = r.clone();
            full.insert(
                "denominator_sq".into(),
                json!(cb.vectors.iter().map(|v| v.denom_sq).collect::<Vec<_>>()),
            );
            full.insert(
                "vectors".into(),
                json!(cb.vectors.iter().map(vector_json).collect::<Vec<_>>()),
            );
            report::render(&Value::Object(full))
        }
        Format::Csv => {
            let mut s = String::new();
            for v in &cb.vectors {
                let row: Vec<String> = (0..v.dim()).map(|j| csv_cell(v, j)).collect();
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
    };
    let text = match out {
        Some(path) => {
            report::write_file(path, &body)?;
            r.insert("out".into(), json!(path.display().to_string()));
            report::render(&Value::Object(r))
        }
        None => body,
    };
    Ok((text, Outcome::Success))
}

fn mub(target: &Target, verify: bool, out: Option<&Path>) -> Result<Report> {
    let f = parse_function(&target.field, &target.function)?;
    let set = signal::mub_from_function(&f)?;
    let mut r = target_header("mub", &target.function, &f);
    r.insert("bases".into(), json!(set.bases.len()));
    r.insert("dim".into(), json!(set.dim));
    r.insert("scale_denominator_sq".into(), json!(set.dim));
    let mut outcome = Outcome::Success;
    if verify {
        let rep = verify_mub(&set);
        let worst = rep.worst.as_ref().map(|w| {
            json!({
                "first": [w.first.0, w.first.1],
                "second": [w.second.0, w.second.1],
                "abs_inner_sq": ratio(w.value),
                "target": ratio(w.target),
            })
        });
        let dev = rep
            .worst
            .as_ref()
            .map_or(Ratio::from_integer(0), |w| w.deviation());
        r.insert(
            "verification".into(),
            json!({
                "ok": rep.ok,
                "within_pairs": rep.within_pairs,
                "cross_pairs": rep.cross_pairs,
                "cross_target": ratio(Ratio::new(1, set.dim as u64)),
                "worst_deviation": ratio(dev),
                "worst_pair": worst,
            }),
        );
        outcome = Outcome::from_bool(rep.ok);
    } else {
        // each B_m vector as its string of exponents of i; B_inf is the standard basis
        let listing: Vec<Value> = set
            .bases
            .iter()
            .filter_map(|b| match b.label {
                BasisLabel::Infinity => None,
                BasisLabel::M(m) => Some(json!({
                    "m": hex(m),
                    "exponents": b.vectors.iter().map(phase_string).collect::<Vec<_>>(),
                })),
            })
            .collect();
        attach_listing(&mut r, "bases_listing", listing, out)?;
    }
    Ok((r, outcome))
}

fn phase_string(v: &CodeVec) -> String {
    v.entries
        .iter()
        .map(|e| match (e.re, e.im) {
            (1, 0) => '0',
            (0, 1) => '1',
            (-1, 0) => '2',
            (0, -1) => '3',
            _ => '?',
        })
        .collect()
}

fn semifield(target: &Target, e: &str, nuclei: bool) -> Result<Report> {
    let f = parse_function(&target.field, &target.function)?;
    let ctx = f.ctx();
    let e = Fe(parse_int(e)? as u32);
    if e.0 as u64 >= ctx.size() {
        bail!("e = {} is not an element of GF(2^{})", hex(e), ctx.n());
    }
    let s = derive_semifield(&f, e)?;
    let mut r = target_header("semifield", &target.function, &f);
    r.insert("e".into(), json!(hex(e)));
    r.insert("identity".into(), json!(hex(s.identity())));
    r.insert("commutative".into(), json!(s.is_commutative()));
    r.insert("associative".into(), json!(s.is_associative()?));
    if nuclei {
        let nu = s.nuclei()?;
        let one = |x: &ppf_core::sfield::Nucleus| json!({ "size": x.size(), "degree": x.degree() });
        r.insert(
            "nuclei".into(),
            json!({ "left": one(&nu.left), "middle": one(&nu.middle), "right": one(&nu.right) }),
        );
    }
    Ok((r, Outcome::Success))
}

fn bounds(n: u64, k: u64) -> Result<Report> {
    let mut r = report::header("bounds");
    r.insert("N".into(), json!(n));
    r.insert("K".into(), json!(k));
    let welch = welch_bound_sq(n, k)?;
    r.insert("welch_sq".into(), json!(ratio(welch)));
    r.insert("welch_sq_value".into(), float(ratio_f64(welch)));
    r.insert("welch".into(), float(ratio_f64(welch).sqrt()));
    match levenstein_bound_sq(n, k) {
        Ok(l) => {
            r.insert("levenstein_sq".into(), json!(ratio(l)));
            r.insert("levenstein_sq_value".into(), float(ratio_f64(l)));
            r.insert("levenstein".into(), float(ratio_f64(l).sqrt()));
        }
        Err(_) => {
            r.insert("levenstein_sq".into(), Value::Null);
            r.insert("note".into(), json!("the Levenstein bound needs N > K^2"));
        }
    }
    Ok((r, Outcome::Success))
}
