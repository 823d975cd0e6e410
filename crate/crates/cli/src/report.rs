use std::fmt::Write as _;

use aimloop::conjecture::{
    aim_identity_failure, check_goals, quotient_oracle, GoalOutcome, AIM_SCHEMAS,
};
use aimloop::structure::{
    self, all_subloops, center, commutant, nuclei, upper_central_series, Nilpotency, Nuclei,
    SUBLOOP_ORDER_LIMIT,
};
use aimloop::{LoopTable, Perm, Result, SubsetMask};
use serde::Serialize;

/// Inner mapping groups up to this order are listed element by element.
pub const INN_LISTING_LIMIT: usize = 64;

#[derive(Debug, Serialize)]
pub struct InnReport {
    pub order: usize,
    pub abelian: bool,
    pub elements: Option<Vec<Perm>>,
    pub generators: Vec<Perm>,
}

#[derive(Debug, Serialize)]
pub struct AimReport {
    pub via_group: bool,
    pub via_identities: bool,
    /// `schema: tuple` for the first failing commutation schema.
    pub identity_failure: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Routes {
    pub goals: bool,
    /// `None` when the quotient is not defined.
    pub quotient: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct QuotientChecks {
    pub n_normal: bool,
    pub q_mod_n_abelian_group: Routes,
    pub q_mod_z_group: Routes,
}

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub order: usize,
    pub associative: bool,
    pub commutative: bool,
    pub mlt_order: usize,
    pub inn: InnReport,
    pub nuclei: Nuclei,
    pub commutant: SubsetMask,
    pub center: SubsetMask,
    /// `None` above the subloop enumeration limit.
    pub subloops: Option<Vec<SubsetMask>>,
    pub upper_central_series: Vec<SubsetMask>,
    pub class: Nilpotency,
    pub aim: AimReport,
    pub quotients: QuotientChecks,
    pub consistent_with_conjecture: bool,
    pub goals: Vec<GoalOutcome>,
    /// Disagreements between independent routes; nonempty means a bug.
    pub inconsistencies: Vec<String>,
}

fn labels(t: &[usize]) -> String {
    t.iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn analyze(q: &LoopTable, cap: usize) -> Result<Analysis> {
    let mlt = structure::mlt(q, cap)?;
    let inn = structure::inn(q, cap)?;
    let identity_failure = aim_identity_failure(q);
    let aim = AimReport {
        via_group: inn.is_abelian(),
        via_identities: identity_failure.is_none(),
        identity_failure: identity_failure
            .map(|(i, t)| format!("{} fails at ({})", AIM_SCHEMAS[i], labels(&t))),
    };
    let inn = InnReport {
        order: inn.order(),
        abelian: inn.is_abelian(),
        elements: (inn.order() <= INN_LISTING_LIMIT).then(|| inn.sorted_for_display()),
        generators: inn.generators().to_vec(),
    };
    let subloops = if q.order() <= SUBLOOP_ORDER_LIMIT {
        Some(all_subloops(q)?)
    } else {
        None
    };
    let series = upper_central_series(q)?;
    let goals = check_goals(q);
    let oracle = quotient_oracle(q);
    let quotients = QuotientChecks {
        n_normal: oracle.n_normal,
        q_mod_n_abelian_group: Routes {
            goals: goals.quotient_by_nucleus_abelian_group(),
            quotient: oracle.n_normal.then_some(oracle.q_mod_n_abelian_group),
        },
        q_mod_z_group: Routes {
            goals: goals.quotient_by_center_group(),
            quotient: Some(oracle.q_mod_z_group),
        },
    };

    let mut inconsistencies = Vec::new();
    if aim.via_group != aim.via_identities {
        inconsistencies.push(format!(
            "AIM via inner mapping group = {}, via commutation identities = {}",
            aim.via_group, aim.via_identities
        ));
    }
    for (name, routes) in [
        ("Q/N abelian group", &quotients.q_mod_n_abelian_group),
        ("Q/Z group", &quotients.q_mod_z_group),
    ] {
        if let Some(direct) = routes.quotient {
            if direct != routes.goals {
                inconsistencies.push(format!(
                    "{name}: goals say {}, quotient construction says {direct}",
                    routes.goals
                ));
            }
        }
    }

    let consistent_with_conjecture = !aim.via_group
        || (oracle.n_normal
            && oracle.q_mod_n_abelian_group
            && oracle.q_mod_z_group
            && series.verdict.at_most(3));
    let nuclei = nuclei(q);
    Ok(Analysis {
        order: q.order(),
        associative: q.is_associative(),
        commutative: q.is_commutative(),
        mlt_order: mlt.order(),
        inn,
        nuclei,
        commutant: commutant(q),
        center: center(q),
        subloops,
        upper_central_series: series.terms,
        class: series.verdict,
        aim,
        quotients,
        consistent_with_conjecture,
        goals: goals.outcomes,
        inconsistencies,
    })
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn route(r: &Routes) -> String {
    match r.quotient {
        Some(q) => format!("goals {}, quotient {}", r.goals, q),
        None => format!("goals {}, quotient undefined", r.goals),
    }
}

pub fn render_analysis(a: &Analysis) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "order: {}", a.order);
    let _ = writeln!(s, "associative: {}", a.associative);
    let _ = writeln!(s, "commutative: {}", a.commutative);
    let _ = writeln!(s, "Mlt order: {}", a.mlt_order);
    let _ = writeln!(s, "Inn order: {}", a.inn.order);
    match &a.inn.elements {
        Some(elements) => {
            let _ = writeln!(s, "Inn: {}", join(elements, ", "));
        }
        None => {
            let _ = writeln!(s, "Inn generators: {}", join(&a.inn.generators, ", "));
        }
    }
    let _ = writeln!(s, "Inn abelian: {}", a.inn.abelian);
    let _ = writeln!(s, "left nucleus: {}", a.nuclei.left);
    let _ = writeln!(s, "right nucleus: {}", a.nuclei.right);
    let _ = writeln!(s, "middle nucleus: {}", a.nuclei.middle);
    let _ = writeln!(s, "nucleus: {}", a.nuclei.nucleus);
    let _ = writeln!(s, "commutant: {}", a.commutant);
    let _ = writeln!(s, "center: {}", a.center);
    match &a.subloops {
        Some(list) => {
            let _ = writeln!(s, "subloops: {}", join(list, ", "));
        }
        None => {
            let _ = writeln!(
                s,
                "subloops: not enumerated above order {SUBLOOP_ORDER_LIMIT}"
            );
        }
    }
    let _ = writeln!(
        s,
        "upper central series: {}",
        join(&a.upper_central_series, " < ")
    );
    let _ = writeln!(s, "class: {}", a.class);
    let _ = writeln!(s, "AIM (inner mapping group): {}", a.aim.via_group);
    let _ = write!(s, "AIM (commutation identities): {}", a.aim.via_identities);
    if let Some(why) = &a.aim.identity_failure {
        let _ = write!(s, " [{why}]");
    }
    s.push('\n');
    let _ = writeln!(s, "N normal: {}", a.quotients.n_normal);
    let _ = writeln!(
        s,
        "Q/N abelian group: {}",
        route(&a.quotients.q_mod_n_abelian_group)
    );
    let _ = writeln!(s, "Q/Z group: {}", route(&a.quotients.q_mod_z_group));
    let _ = writeln!(
        s,
        "consistent with conjecture: {}",
        a.consistent_with_conjecture
    );
    s.push_str("goals:\n");
    s.push_str(&render_goals(&a.goals));
    for i in &a.inconsistencies {
        let _ = writeln!(s, "INCONSISTENT: {i}");
    }
    s
}

pub fn render_goals(outcomes: &[GoalOutcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        let _ = write!(s, "  {:<4}{:<24}", o.goal.label(), o.goal.equation());
        match &o.witness {
            None => s.push_str("holds\n"),
            Some(w) => {
                let _ = writeln!(
                    s,
                    "fails at ({}) = ({})",
                    o.goal.variables().join(","),
                    join(w, ",")
                );
            }
        }
    }
    s
}
