//! Function specifications on the command line.
//!
//! ```text
//! 1,1=0x1;2,1=0x1            structured: c_{k,i} entries "k,i=coeff"
//! family:1,1=0x1;2,1=0x1     the same, explicitly
//! generic:1,2=0x1;1,3=0x1    c x^(2^i + 2^j) entries "i,j=coeff"
//! t4-quadrinomial            a named family, arguments after ':'
//! zero                       F = 0
//! ```
//!
//! When the field spec has no `m`, named families with a fixed `t` use
//! `m = n / t`, Kantor functions stay unsplit, and everything else uses `m = 1`
//! (no split for n = 1).

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use ppf_core::gf2::parse_int;
use ppf_core::{DoQuad, Fe, FieldCtx, FieldSpec};

/// Named families and their argument syntax, for help text and errors.
pub const FAMILIES: &[(&str, &str)] = &[
    ("zero", ""),
    ("t3-binomial", ":<c>"),
    ("t3-quadrinomial", ""),
    ("t3-trinomial", ":<c1>,<c2>,<c3>"),
    ("t3-trinomial-alpha", ""),
    ("t4-quadrinomial", ""),
    ("t4-trinomial", ""),
    ("mono-t2", ":<c>"),
    ("mono-t3", ":<c>"),
    ("hu", ":<a>"),
    ("kantor", ":<d0>/<d1>/..:<zeta1>,<zeta2>,.."),
];

fn family_t(name: &str) -> Option<u32> {
    match name {
        "t3-binomial" | "t3-quadrinomial" | "t3-trinomial" | "t3-trinomial-alpha" | "mono-t3"
        | "hu" => Some(3),
        "t4-quadrinomial" | "t4-quad" | "t4-trinomial" | "t4-tri" => Some(4),
        "mono-t2" => Some(2),
        _ => None,
    }
}

fn elem(ctx: &FieldCtx, s: &str) -> Result<Fe> {
    let v = parse_int(s)?;
    if v >= ctx.size() {
        bail!("coefficient {s} is not an element of GF(2^{})", ctx.n());
    }
    Ok(Fe(v as u32))
}

fn elems(ctx: &FieldCtx, s: &str, count: usize) -> Result<Vec<Fe>> {
    let out: Vec<Fe> = s.split(',').map(|p| elem(ctx, p)).collect::<Result<_>>()?;
    if out.len() != count {
        bail!("expected {count} coefficient(s), got {}", out.len());
    }
    Ok(out)
}

/// `a,b=coeff;...` as `(a, b, coeff)`.
fn entries(ctx: &FieldCtx, s: &str) -> Result<Vec<(u32, u32, Fe)>> {
    s.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|part| {
            let (idx, c) = part
                .split_once('=')
                .ok_or_else(|| anyhow!("expected a,b=coeff, got {part:?}"))?;
            let (a, b) = idx
                .split_once(',')
                .ok_or_else(|| anyhow!("expected two indices in {idx:?}"))?;
            Ok((parse_int(a)? as u32, parse_int(b)? as u32, elem(ctx, c)?))
        })
        .collect()
}

/// Builds the field and the function; the split may be filled in from the function.
pub fn parse_function<'a>(field: &FieldSpec, spec: &'a str) -> Result<DoQuad> {
    let spec = spec.trim();
    let (head, args) = match spec.split_once(':') {
        Some((h, a)) => (h.trim(), Some(a.trim())),
        None => (spec, None),
    };
    let starts_numeric = spec.starts_with(|c: char| c.is_ascii_digit());
    let mut field = field.clone();
    if field.m.is_none() {
        if let Some(t) = family_t(head) {
            if !field.n.is_multiple_of(t) {
                bail!("family {head} needs t={t} dividing n={}", field.n);
            }
            field.m = Some(field.n / t);
        } else if head != "kantor" && field.n >= 2 {
            field.m = Some(1);
        }
    }
    let ctx = Arc::new(field.build().context("bad field")?);
    let need = |a: Option<&'a str>| a.ok_or_else(|| anyhow!("family {head} needs arguments"));
    let no_args = |f: Result<DoQuad, ppf_core::Error>| -> Result<DoQuad> {
        if args.is_some() {
            bail!("family {head} takes no arguments");
        }
        Ok(f?)
    };
    let f = if starts_numeric {
        DoQuad::from_family(ctx.clone(), entries(&ctx, spec)?)?
    } else {
        match head {
            "family" => DoQuad::from_family(ctx.clone(), entries(&ctx, need(args)?)?)?,
            "generic" => DoQuad::from_terms(
                ctx.clone(),
                entries(&ctx, need(args)?)?
                    .into_iter()
                    .map(|(i, j, c)| ((i, j), c)),
            )?,
            "zero" | "" => no_args(Ok(DoQuad::zero(ctx.clone())))?,
            "t3-binomial" => DoQuad::fam_t3_binomial(ctx.clone(), elem(&ctx, need(args)?)?)?,
            "t3-quadrinomial" => no_args(DoQuad::fam_t3_quadrinomial(ctx.clone()))?,
            "t3-trinomial" => {
                let c = elems(&ctx, need(args)?, 3)?;
                DoQuad::fam_t3_trinomial(ctx.clone(), c[0], c[1], c[2])?
            }
            "t3-trinomial-alpha" => no_args(DoQuad::fam_t3_trinomial_alpha(ctx.clone()))?,
            "t4-quadrinomial" | "t4-quad" => no_args(DoQuad::fam_t4_quadrinomial(ctx.clone()))?,
            "t4-trinomial" | "t4-tri" => no_args(DoQuad::fam_t4_trinomial(ctx.clone()))?,
            "mono-t2" => DoQuad::mono_t2(ctx.clone(), elem(&ctx, need(args)?)?)?,
            "mono-t3" => DoQuad::mono_t3(ctx.clone(), elem(&ctx, need(args)?)?)?,
            "hu" => DoQuad::hu_binomial_a(ctx.clone(), elem(&ctx, need(args)?)?)?,
            "kantor" => {
                let (chain, zetas) = need(args)?
                    .split_once(':')
                    .ok_or_else(|| anyhow!("kantor needs <chain>:<zetas>"))?;
                let chain: Vec<u32> = chain
                    .split('/')
                    .map(|d| Ok(parse_int(d)? as u32))
                    .collect::<Result<_>>()?;
                let zetas = elems(&ctx, zetas, chain.len().saturating_sub(1))?;
                DoQuad::kantor(ctx.clone(), &chain, &zetas)?
            }
            other => {
                let names: Vec<&str> = FAMILIES.iter().map(|(n, _)| *n).collect();
                bail!(
                    "unknown function spec {other:?}; named families: {}",
                    names.join(", ")
                )
            }
        }
    };
    Ok(f)
}
