//! Command execution; every command returns a deterministic JSON body.

use std::collections::BTreeMap;
use std::fs;

use porder::groups::DEFAULT_SUBGROUP_CAP;
use porder::invariants::invariant_generators_to;
use porder::poisson::{DEFAULT_HEADROOM, DEFAULT_MAX_ITERS};
use porder::schema::{named_group, GroupJson, PoissonJson, SraJson, GROUP_CAP};
use porder::sra::{build_sra, SraEngine, TParam};
use porder::strata::{induced_poisson, skew_fiber, stabilizer_strata, verify_leaf_claims};
use porder::weyl::{build_weyl, RootSystemSpec, DEFAULT_WEYL_CAP};
use porder::{
    fiber_invariants, invariant_generators, parse_poly, parse_scalar, Error, Field, Ideal, MatrixGroup, Result,
    Scalar,
};
use serde_json::{json, Value};

use crate::args::{Command, ExamplesOp, GlobalOpts, GroupArg, GroupOp, PoissonOp, SraArgs, SraOp, VgammaOp, WeylOp};
use crate::examples;

pub fn execute(cmd: &Command, g: &GlobalOpts) -> Result<Value> {
    match cmd {
        Command::Poisson { op } => poisson(op, g),
        Command::Group { group, op } => group_cmd(group, op, g),
        Command::Vgamma { group, op } => vgamma(group, op, g),
        Command::Weyl { op } => weyl(op),
        Command::Sra { params, op } => sra(params, op, g),
        Command::Examples { op } => examples_cmd(op),
    }
}

/// Short command echo such as `poisson core`.
pub fn command_name(cmd: &Command) -> String {
    let (a, b) = match cmd {
        Command::Poisson { op } => ("poisson", format!("{op:?}")),
        Command::Group { op, .. } => ("group", format!("{op:?}")),
        Command::Vgamma { op, .. } => ("vgamma", format!("{op:?}")),
        Command::Weyl { op } => ("weyl", format!("{op:?}")),
        Command::Sra { op, .. } => ("sra", format!("{op:?}")),
        Command::Examples { op } => ("examples", format!("{op:?}")),
    };
    let head: String = b.chars().take_while(|c| c.is_alphanumeric()).collect();
    let mut kebab = String::new();
    for (i, ch) in head.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            kebab.push('-');
        }
        kebab.push(ch.to_ascii_lowercase());
    }
    format!("{a} {kebab}")
}

fn read_input(g: &GlobalOpts) -> Result<String> {
    let src = g.input.as_ref().ok_or_else(|| Error::Schema("this command needs --input".into()))?;
    if src.trim_start().starts_with('{') {
        Ok(src.clone())
    } else {
        fs::read_to_string(src).map_err(|e| Error::Schema(format!("cannot read {src}: {e}")))
    }
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

fn parse_point(text: &str, field: &Field) -> Result<Vec<Scalar>> {
    text.split(',').map(|s| parse_scalar(s.trim(), field)).collect()
}

fn scalars(v: &[Scalar]) -> Value {
    json!(v.iter().map(ToString::to_string).collect::<Vec<_>>())
}

fn poisson(op: &PoissonOp, g: &GlobalOpts) -> Result<Value> {
    let p: PoissonJson = from_json(&read_input(g)?)?;
    let s = p.to_structure()?;
    let field = s.ring().field().clone();
    let max_iters = g.max_iters.unwrap_or(DEFAULT_MAX_ITERS);
    let headroom = g.headroom.unwrap_or(DEFAULT_HEADROOM);
    Ok(match op {
        PoissonOp::Validate => serde_json::to_value(s.validate()?).expect("serializable"),
        PoissonOp::Bracket { f, g: h } => {
            let a = parse_poly(f, s.ring())?;
            let b = parse_poly(h, s.ring())?;
            json!({ "f": a.to_string(), "g": b.to_string(), "bracket": s.bracket(&a, &b)?.to_string() })
        }
        PoissonOp::Core { point, ideal } => {
            let (target, echo) = match (point, ideal) {
                (Some(pt), _) => {
                    let v = parse_point(pt, &field)?;
                    let echo = json!({ "point": scalars(&v) });
                    (Ideal::point(s.ring(), &v)?.sum(s.relations())?, echo)
                }
                (None, Some(gens)) => {
                    let list: Vec<&str> = gens.split(',').collect();
                    let i = Ideal::parse(s.ring(), &list)?;
                    let echo = json!({ "ideal": i.canonical_strings()? });
                    (i.sum(s.relations())?, echo)
                }
                (None, None) => return Err(Error::Schema("poisson core needs --point or --ideal".into())),
            };
            let r = s.poisson_core(&target, max_iters, headroom)?;
            let mut out = echo;
            out["core"] = json!(r.core.canonical_strings()?);
            out["certified"] = json!(r.certified);
            out["iterations"] = json!(r.iterations);
            out
        }
        PoissonOp::Casimirs => {
            let bound = g.degree_bound.unwrap_or(6);
            let c = s.casimirs(bound)?;
            json!({ "degree_bound": bound, "casimirs": c.iter().map(ToString::to_string).collect::<Vec<_>>() })
        }
        PoissonOp::Rank { point } => {
            let v = parse_point(point, &field)?;
            json!({ "point": scalars(&v), "rank": s.rank_at_point(&v)? })
        }
        PoissonOp::Strata => {
            let strata = s
                .rank_stratum_ideals()?
                .into_iter()
                .map(|r| Ok(json!({ "rank_at_most": r.rank, "ideal": r.ideal.canonical_strings()? })))
                .collect::<Result<Vec<_>>>()?;
            json!({ "strata": strata })
        }
    })
}

fn load_group(arg: &GroupArg, g: &GlobalOpts) -> Result<MatrixGroup> {
    match &arg.group {
        Some(name) => named_group(name),
        None => {
            let j: GroupJson = from_json(&read_input(g)?)?;
            j.to_group(GROUP_CAP)
        }
    }
}

fn group_cmd(arg: &GroupArg, op: &GroupOp, g: &GlobalOpts) -> Result<Value> {
    let grp = load_group(arg, g)?;
    Ok(match op {
        GroupOp::Closure => json!({
            "order": grp.order(),
            "dimension": grp.dim(),
            "field": serde_json::to_value(GroupJson::from_group(&grp).field).expect("serializable"),
            "elements": grp.elements().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "classes": grp.conjugacy_classes().len(),
        }),
        GroupOp::Reflections => {
            let refl = grp.symplectic_reflections()?;
            let nclasses = refl.iter().map(|r| r.class + 1).max().unwrap_or(0);
            let classes: Vec<Value> = (0..nclasses)
                .map(|k| {
                    let members: Vec<&_> = refl.iter().filter(|r| r.class == k).collect();
                    json!({
                        "class": k,
                        "elements": members.iter().map(|r| r.element).collect::<Vec<_>>(),
                        "omega_s": members.iter().map(|r| r.omega_s.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json!({ "count": refl.len(), "classes": classes })
        }
        GroupOp::Invariants => {
            let p = match g.degree_bound {
                Some(b) => invariant_generators_to(&grp, b)?,
                None => invariant_generators(&grp)?,
            };
            presentation_json(&p)?
        }
        GroupOp::Subgroups => {
            let subs = grp.subgroup_conjugacy_classes(DEFAULT_SUBGROUP_CAP)?;
            json!({ "classes": subs.iter().map(|s| json!({
                "order": s.order,
                "class_size": s.class_size,
                "representative": s.representative,
            })).collect::<Vec<_>>() })
        }
    })
}

fn presentation_json(p: &porder::InvariantPresentation) -> Result<Value> {
    Ok(json!({
        "generators": p.describe().into_iter().map(|(n, f)| json!({ "name": n, "poly": f })).collect::<Vec<_>>(),
        "relations": p.relations.canonical_strings()?,
        "molien": p.molien.iter().map(ToString::to_string).collect::<Vec<_>>(),
    }))
}

fn vgamma(arg: &GroupArg, op: &VgammaOp, g: &GlobalOpts) -> Result<Value> {
    let grp = load_group(arg, g)?;
    let pres = invariant_generators(&grp)?;
    Ok(match op {
        VgammaOp::Strata => {
            let strata = stabilizer_strata(&grp, &pres)?
                .into_iter()
                .map(|s| {
                    Ok(json!({
                        "subgroup_order": s.subgroup.order,
                        "class_size": s.subgroup.class_size,
                        "fixed_dim": s.fixed_dim(),
                        "i_ideal": s.i_ideal.canonical_strings()?,
                        "j_ideal": s.j_ideal.canonical_strings()?,
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            let induced = induced_poisson(&grp, &pres)?;
            json!({
                "presentation": presentation_json(&pres)?,
                "bracket": PoissonJson::from_structure(&induced).bracket,
                "strata": strata,
            })
        }
        VgammaOp::Verify { samples } => {
            let r = verify_leaf_claims(&grp, &pres, *samples, g.seed)?;
            let mut v = serde_json::to_value(r).expect("serializable");
            v["samples"] = json!(samples);
            v
        }
        VgammaOp::Fiber { point } => {
            let v = parse_point(point, grp.field())?;
            let f = skew_fiber(&grp, &pres, &v)?;
            let inv = fiber_invariants(&f)?;
            json!({ "point": scalars(&v), "invariants": inv, "tuple": inv.as_tuple() })
        }
    })
}

fn weyl(op: &WeylOp) -> Result<Value> {
    let WeylOp::Census { kind, rank, system } = op;
    let spec = match (system, kind, rank) {
        (Some(s), _, _) => RootSystemSpec::parse(s)?,
        (None, Some(k), Some(r)) => RootSystemSpec::single(k.to_ascii_uppercase(), *r)?,
        _ => return Err(Error::Schema("weyl census needs --type and --rank, or --system".into())),
    };
    let w = build_weyl(&spec, DEFAULT_WEYL_CAP)?;
    Ok(serde_json::to_value(w.compare_census()).expect("serializable"))
}

fn sra_engine(p: &SraArgs, g: &GlobalOpts, default_t: &str) -> Result<SraEngine> {
    if p.group.is_none() && p.t.is_none() && p.c.is_none() {
        let j: SraJson = from_json(&read_input(g)?)?;
        return j.to_engine(GROUP_CAP);
    }
    let grp = named_group(p.group.as_deref().unwrap_or("z2"))?;
    let t = TParam::parse(p.t.as_deref().unwrap_or(default_t))?;
    let nclasses = grp.symplectic_reflections()?.iter().map(|r| r.class + 1).max().unwrap_or(0);
    let mut c = BTreeMap::new();
    if let Some(text) = &p.c {
        if text.contains(':') {
            for pair in text.split(',') {
                let (k, v) = pair.split_once(':').ok_or_else(|| Error::Schema(format!("bad class parameter `{pair}`")))?;
                let k = k.trim().parse::<usize>().map_err(|_| Error::Schema(format!("bad class index `{k}`")))?;
                c.insert(k, parse_scalar(v.trim(), grp.field())?);
            }
        } else {
            let v = parse_scalar(text.trim(), grp.field())?;
            c = (0..nclasses).map(|k| (k, v.clone())).collect();
        }
    } else if nclasses > 0 {
        return Err(Error::ClassParameter(0));
    }
    build_sra(&grp, t, &c)
}

fn engine_echo(e: &SraEngine) -> Value {
    json!({
        "group_order": e.group().order(),
        "t": e.t().to_string(),
        "c": e.c().iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

fn sra(p: &SraArgs, op: &SraOp, g: &GlobalOpts) -> Result<Value> {
    let deg = |d: &Option<u32>, default: u32| d.or(g.degree_bound).unwrap_or(default);
    Ok(match op {
        SraOp::Pbw { degree, corrupt } => {
            let e = sra_engine(p, g, "0")?;
            let e = match corrupt {
                Some(j) if *j < e.nletters() => e.with_flipped_action_sign(*j),
                Some(j) => return Err(Error::DimensionMismatch { expected: e.nletters(), got: *j }),
                None => e,
            };
            let r = e.pbw_dimension_check(deg(degree, 2));
            json!({ "engine": engine_echo(&e), "dims": r.dims, "expected": r.expected, "pass": r.pass,
                    "first_failure": r.first_failure, "ambiguities": r.ambiguities })
        }
        SraOp::Center { degree } => {
            let e = sra_engine(p, g, "0")?;
            let d = deg(degree, 2);
            let basis = e.center_basis(d)?;
            json!({ "engine": engine_echo(&e), "degree": d, "dimension": basis.len(),
                    "basis": basis.iter().map(|z| e.display(z)).collect::<Vec<_>>() })
        }
        SraOp::Qbracket { z1, z2 } => {
            let e = sra_engine(p, g, "formal")?;
            let a = e.parse_element(z1)?;
            let b = e.parse_element(z2)?;
            let q = e.quantized_bracket(&a, &b)?;
            json!({ "engine": engine_echo(&e), "z1": e.display(&a), "z2": e.display(&b), "bracket": e.display(&q) })
        }
        SraOp::Presentation { degree } => {
            let e = sra_engine(p, g, "0")?;
            let pres = e.center_presentation(deg(degree, 2))?;
            json!({
                "engine": engine_echo(&e),
                "generators": pres.describe(&e).into_iter().zip(&pres.symbols)
                    .map(|((n, el), s)| json!({ "name": n, "element": el, "symbol": s.to_string() }))
                    .collect::<Vec<_>>(),
                "relations": pres.relations.canonical_strings()?,
                "bracket": PoissonJson::from_structure(&pres.poisson).bracket,
                "poisson_valid": pres.poisson.is_valid()?,
            })
        }
        SraOp::Fiber { degree, point } => {
            let e = sra_engine(p, g, "0")?;
            let pres = e.center_presentation(deg(degree, 2))?;
            let v = parse_point(point, e.group().field())?;
            let f = e.sra_fiber(&pres, &v)?;
            let inv = fiber_invariants(&f)?;
            json!({ "engine": engine_echo(&e), "point": scalars(&v), "invariants": inv, "tuple": inv.as_tuple() })
        }
    })
}

fn examples_cmd(op: &ExamplesOp) -> Result<Value> {
    Ok(match op {
        ExamplesOp::List => json!({ "examples": examples::registry().iter().map(|e| json!({ "name": e.name, "topic": e.topic })).collect::<Vec<_>>() }),
        ExamplesOp::Run { name } => {
            let ex = examples::registry().into_iter().find(|e| e.name == name).ok_or_else(|| Error::Schema(format!("no example named `{name}`")))?;
            serde_json::to_value(examples::run_example(&ex)).expect("serializable")
        }
        ExamplesOp::RunAll => {
            let outs: Vec<examples::ExampleOutcome> = examples::registry().iter().map(examples::run_example).collect();
            let pass = outs.iter().all(|o| o.pass);
            json!({ "examples": outs, "pass": pass })
        }
    })
}
