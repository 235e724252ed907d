use std::collections::HashMap;

use num_bigint::BigUint;
use orbitlab::hf::{orbit_hf, Action};
use orbitlab::lemmas::{
    build_an, build_jn, gamma_p, gamma_p_bound, p_big2_rigidity_check, q_assignment,
    stab_bound_report, BoundParams, QAssignment,
};
use orbitlab::preorder::{classify, CaseThresholds};
use orbitlab::{
    coarsest_supporting_partition, encode_ordered_partition, factorial, OrderedPartition,
    PartPermTuple, SupportFamily, SymEngine, ThetaOutcome,
};
use serde::Serialize;

/// Direct orbit enumeration and HF orbits stay below this size.
pub const DIRECT_ORBIT_MAX_N: usize = 7;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        passed,
        detail: detail.into(),
    }
}

/// Every property of the library that can be checked exactly on one instance.
pub fn run(engine: &SymEngine, p: &OrderedPartition, c: Option<u64>) -> orbitlab::Result<Vec<Check>> {
    let n = p.dim();
    engine.check(n)?;
    let mut out = Vec::new();

    let stab = engine.stabilizer_order_ordered_partition(p)?;
    let orbit = factorial(n) / stab;
    if n <= DIRECT_ORBIT_MAX_N {
        let direct = engine.direct_orbit_ordered_partition(p)?;
        out.push(check(
            "orbit_stabilizer",
            direct * stab == factorial(n),
            format!("direct orbit {direct} x stabilizer {stab} vs {}!", n),
        ));
        let encoded = orbit_hf(engine, &encode_ordered_partition(p)?, n, Action::Positions)?;
        out.push(check(
            "encoding_orbit",
            encoded == orbit,
            format!("nested encoding orbit {encoded}, partition orbit {orbit}"),
        ));
    }

    let mut support_ok = true;
    let mut sandwich_ok = true;
    for (i, cls) in p.classes().iter().enumerate() {
        let sp = coarsest_supporting_partition(cls)?;
        // coarsest: merging any two parts breaks support
        let coarsest = sp.supports(cls)?
            && (0..sp.len()).all(|a| {
                (a + 1..sp.len()).all(|b| {
                    let (x, y) = (sp.parts()[a].first(), sp.parts()[b].first());
                    let swap = orbitlab::PositionPerm::transposition(n, x.unwrap(), y.unwrap())
                        .expect("valid positions");
                    swap.apply_strings(cls).map(|img| img != *cls).unwrap_or(false)
                })
            });
        support_ok &= coarsest;
        let inner = engine.pointwise_stabilizer(&sp)?;
        let mid = engine.stabilizer_of_set(cls)?;
        let outer = engine.setwise_stabilizer(&sp)?;
        let ok = inner.is_subgroup_of(&mid) && mid.is_subgroup_of(&outer);
        sandwich_ok &= ok;
        if !coarsest || !ok {
            out.push(check("class_support", false, format!("class {}", i + 1)));
        }
    }
    out.push(check("coarsest_support", support_ok, format!("{} classes", p.len())));
    out.push(check("sandwich", sandwich_ok, format!("{} classes", p.len())));

    let selection = build_jn(p)?;
    let selected: Vec<_> = selection.chosen.iter().map(|&i| p.classes()[i].clone()).collect();
    let family = SupportFamily::new(n, selected)?;
    out.push(check(
        "selection_individualizes",
        selection
            .target
            .is_subset(family.meet().singleton_positions()),
        format!("{} classes selected", selection.steps()),
    ));

    // all realizers of one tuple induce one permutation of the meet
    let groups = engine.map_shards(n, |it| {
        let mut seen: HashMap<PartPermTuple, Vec<usize>> = HashMap::new();
        let mut ok = true;
        for pi in it {
            if let Some(t) = family.induced_tuple(&pi) {
                let theta = family.meet().induced_part_perm(&pi).expect("meet is stabilized");
                match seen.get(&t) {
                    Some(prev) => ok &= *prev == theta,
                    None => {
                        seen.insert(t, theta);
                    }
                }
            }
        }
        (ok, seen)
    })?;
    let mut theta_ok = true;
    let mut merged: HashMap<PartPermTuple, Vec<usize>> = HashMap::new();
    for (ok, seen) in groups {
        theta_ok &= ok;
        for (t, theta) in seen {
            if let Some(prev) = merged.get(&t) {
                theta_ok &= *prev == theta;
            } else {
                merged.insert(t, theta);
            }
        }
    }
    for (t, theta) in &merged {
        theta_ok &= family.induced_theta(t)? == ThetaOutcome::Induced(theta.clone());
    }
    out.push(check(
        "theta_unique",
        theta_ok,
        format!("{} realizable tuples", merged.len()),
    ));

    let case = classify(p, CaseThresholds::default())?;
    let b = &p.classes()[case.b_class_index];
    match build_an(b) {
        Ok(trace) => {
            out.push(check(
                "subset_construction",
                true,
                format!("{} strings, potentials {:?}", trace.chosen.len(), trace.potentials),
            ));
            let pairs: Vec<_> = trace.chosen.iter().map(|&a| (a, a)).collect();
            let members = gamma_p(engine, b, &pairs)?;
            let sound = match q_assignment(b, &pairs)? {
                QAssignment::Feasible(q) => members
                    .iter()
                    .all(|pi| (0..n).all(|k| q[k].contains(pi.image(k)))),
                QAssignment::Infeasible => members.is_empty(),
            };
            out.push(check("forced_assignment", sound, format!("{} members", members.len())));
            let bound = gamma_p_bound(n, trace.singletons.len());
            out.push(check(
                "gamma_bound",
                BigUint::from(members.len()) <= bound,
                format!("{} <= {bound}", members.len()),
            ));
            out.push(check(
                "rigidity",
                p_big2_rigidity_check(engine, b, &trace, &pairs)?,
                "",
            ));
        }
        Err(e) => out.push(check("subset_construction", false, e.to_string())),
    }

    let report = stab_bound_report(
        engine,
        p,
        BoundParams {
            c,
            thresholds: CaseThresholds::default(),
        },
    )?;
    for e in &report.entries {
        let detail = match (&e.exact, &e.bound) {
            (Some(x), Some(b)) => format!("{x} <= {b} (hypotheses {})", e.hypotheses_ok),
            _ => "not applicable".to_string(),
        };
        out.push(check(e.id.name(), e.is_sound(), detail));
    }
    Ok(out)
}
